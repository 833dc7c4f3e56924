#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "commentlens/decision_tree.hpp"
#include "commentlens/extent.hpp"
#include "commentlens/syntax.hpp"

namespace commentlens {

enum class TargetLabel { left, right, parent, in_place };

/// "Left", "Right", "Parent", "InPlace".
std::string_view to_string(TargetLabel label) noexcept;
std::optional<TargetLabel> parse_target_label(std::string_view name) noexcept;
std::span<const TargetLabel> all_target_labels() noexcept;

struct TargetPrediction {
    TargetLabel label = TargetLabel::in_place;
    double confidence = 0.0;
};

struct TargetResolution {
    TargetLabel label = TargetLabel::in_place;
    std::optional<SourceSpan> span;  // absent for InPlace
    std::string node_kind;           // kind of the resolved node, empty for InPlace
    double confidence = 0.0;
    // A Left or Right element more than one line away from the extent.
    bool distant = false;
};

/// Applies a target model to the features of an extent (the category
/// feature set). Throws ModelFeatureMismatch when the model tests a feature
/// absent from `features` or predicts a label outside the four targets.
TargetPrediction classify_target(const dtree::FeatureVector& features, const dtree::DecisionTree& model);

/// The concrete element for `label`: the left or right neighbor, or the
/// containing node. A missing neighbor degrades to InPlace with confidence 0.
TargetResolution resolve_target_span(const ParsedFile& file, const extent::CommentExtent& extent, TargetLabel label,
                                     double confidence = 1.0);

/// Deterministic bootstrap labeling: code before the extent on its first
/// line gives Left; an extent alone on a line that opens a block gives
/// Parent; code-like text gives InPlace; code on the next non-blank line
/// gives Right; anything else is InPlace.
TargetLabel heuristic_target(const ParsedFile& file, const extent::CommentExtent& extent);

/// Text that parses as a statement or declaration rather than prose.
bool looks_like_code(std::string_view text);

}  // namespace commentlens
