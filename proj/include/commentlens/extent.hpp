#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "commentlens/decision_tree.hpp"
#include "commentlens/syntax.hpp"

namespace commentlens::extent {

enum class IobTag { B, I };

std::string_view to_string(IobTag tag) noexcept;

/// Stand-in for "no previous comment" and "no left element on this line".
inline constexpr std::int64_t sentinel = 9999;

struct ExtentFeatures {
    std::int64_t delta_rows = sentinel;
    std::int64_t delta_cols = 0;
    std::int64_t delta_left = sentinel;
    std::string left_syntax;
    std::string right_syntax;
    std::string parent_syntax;

    dtree::FeatureVector to_vector() const;
    friend bool operator==(const ExtentFeatures&, const ExtentFeatures&) = default;
};

/// Names of the features in `ExtentFeatures::to_vector`.
const std::vector<std::string>& feature_names();

/// Features of comment `index` of `file`. The previous comment is the one
/// at index - 1, whatever lies between. DeltaLeft is measured only when the
/// left element ends on the comment's own line.
ExtentFeatures compute_extent_features(const ParsedFile& file, std::size_t index);

/// Positions whose tag is fixed regardless of the model: the first
/// comment of a file, block comments, and comments right after a block.
bool is_forced_begin(const ParsedFile& file, std::size_t index);

/// One tag per comment. Throws ModelFeatureMismatch when the model tests
/// a feature outside `feature_names()`.
std::vector<IobTag> tag_extents(const ParsedFile& file, const dtree::DecisionTree& model);

/// The deterministic labeling rule used for bootstrap training data:
/// I iff both are line comments at the same start column, exactly one
/// line apart, with no code between.
IobTag rule_tag(const ParsedFile& file, std::size_t index);
std::vector<IobTag> rule_tags(const ParsedFile& file);

/// Training examples for the non-forced positions of `files`, labeled by
/// `tags_for(file)`.
template <typename TagsFor>
dtree::Dataset training_set(std::span<const ParsedFile> files, TagsFor tags_for);

dtree::Dataset rule_training_set(std::span<const ParsedFile> files);

struct CommentExtent {
    std::vector<CommentToken> tokens;
    std::string text;
    SourceSpan span;
    bool decorative = false;  // nothing left after normalization
};

/// Comment text without delimiters and per-line decoration, whitespace
/// collapsed.
std::string normalize_comment(const CommentToken& token);

/// Each maximal run B I* becomes one extent.
std::vector<CommentExtent> merge_extents(const ParsedFile& file, const std::vector<IobTag>& tags);

// ---- implementation of the template ----

template <typename TagsFor>
dtree::Dataset training_set(std::span<const ParsedFile> files, TagsFor tags_for) {
    dtree::Dataset data;
    data.label_set = {"B", "I"};
    for (const auto& file : files) {
        const std::vector<IobTag> tags = tags_for(file);
        for (std::size_t i = 0; i < file.comments().size() && i < tags.size(); ++i) {
            if (is_forced_begin(file, i)) continue;
            data.examples.push_back({compute_extent_features(file, i).to_vector(), std::string(to_string(tags[i]))});
        }
    }
    return data;
}

}  // namespace commentlens::extent
