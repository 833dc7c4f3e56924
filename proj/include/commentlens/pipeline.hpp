#pragma once

#include <optional>
#include <vector>

#include "commentlens/category.hpp"
#include "commentlens/decision_tree.hpp"
#include "commentlens/extent.hpp"
#include "commentlens/nlp.hpp"
#include "commentlens/target.hpp"

namespace commentlens {

/// The three trained trees of the pipeline. Without an extent model the
/// merge rule tags extents; without a target model the bootstrap
/// heuristic labels targets.
class Models {
public:
    Models(std::optional<dtree::DecisionTree> extent, std::optional<dtree::DecisionTree> target,
           dtree::DecisionTree category);

    const std::optional<dtree::DecisionTree>& extent() const noexcept { return extent_; }
    const std::optional<dtree::DecisionTree>& target() const noexcept { return target_; }
    const dtree::DecisionTree& category() const noexcept { return category_; }
    const FeatureVocabulary& category_vocabulary() const noexcept { return category_vocab_; }
    const FeatureVocabulary& target_vocabulary() const noexcept { return target_vocab_; }

private:
    std::optional<dtree::DecisionTree> extent_;
    std::optional<dtree::DecisionTree> target_;
    dtree::DecisionTree category_;
    FeatureVocabulary category_vocab_;
    FeatureVocabulary target_vocab_;
};

struct AnalyzedExtent {
    extent::CommentExtent extent;
    nlp::TaggedText tagged;
    bool non_english = false;
    TargetResolution target;
    CategoryPrediction category;
};

std::vector<extent::IobTag> extent_tags(const ParsedFile& file, const Models& models);

/// Word tagging, then the target and category classifiers on one extent.
/// Non-English extents skip the tagger and are Uncategorized with an
/// InPlace target.
AnalyzedExtent analyze_extent(const ParsedFile& file, extent::CommentExtent extent, const Models& models);

/// Extent tagging and merging, then `analyze_extent` on each extent.
std::vector<AnalyzedExtent> analyze_file(const ParsedFile& file, const Models& models);

}  // namespace commentlens
