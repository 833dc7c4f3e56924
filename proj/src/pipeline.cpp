#include "commentlens/pipeline.hpp"

namespace commentlens {

Models::Models(std::optional<dtree::DecisionTree> extent, std::optional<dtree::DecisionTree> target,
               dtree::DecisionTree category)
    : extent_(std::move(extent)), target_(std::move(target)), category_(std::move(category)) {
    category_vocab_ = FeatureVocabulary::from_model(category_);
    if (target_) target_vocab_ = FeatureVocabulary::from_model(*target_);
    if (extent_) dtree::check_features(*extent_, extent::feature_names());
    dtree::check_features(category_, category_vocab_.feature_names());
    if (target_) dtree::check_features(*target_, target_vocab_.feature_names());
}

std::vector<extent::IobTag> extent_tags(const ParsedFile& file, const Models& models) {
    return models.extent() ? extent::tag_extents(file, *models.extent()) : extent::rule_tags(file);
}

AnalyzedExtent analyze_extent(const ParsedFile& file, extent::CommentExtent extent, const Models& models) {
    AnalyzedExtent a;
    a.extent = std::move(extent);
    a.non_english = nlp::is_non_english(a.extent.text);
    if (a.non_english) {
        a.category = {CategoryLabel::uncategorized, 1.0};
        a.target = resolve_target_span(file, a.extent, TargetLabel::in_place);
        return a;
    }
    a.tagged = nlp::analyze(a.extent.text);
    auto features = build_feature_vector(file, a.extent, a.tagged, models.category_vocabulary());
    a.category = classify_category(features, models.category());
    if (models.target()) {
        auto target_features = models.target_vocabulary() == models.category_vocabulary()
                                   ? features
                                   : build_feature_vector(file, a.extent, a.tagged, models.target_vocabulary());
        auto t = classify_target(target_features, *models.target());
        a.target = resolve_target_span(file, a.extent, t.label, t.confidence);
    } else {
        a.target = resolve_target_span(file, a.extent, heuristic_target(file, a.extent));
    }
    return a;
}

std::vector<AnalyzedExtent> analyze_file(const ParsedFile& file, const Models& models) {
    std::vector<AnalyzedExtent> out;
    for (auto& e : extent::merge_extents(file, extent_tags(file, models))) {
        out.push_back(analyze_extent(file, std::move(e), models));
    }
    return out;
}

}  // namespace commentlens
