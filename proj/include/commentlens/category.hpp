#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "commentlens/decision_tree.hpp"
#include "commentlens/extent.hpp"
#include "commentlens/nlp.hpp"
#include "commentlens/syntax.hpp"

namespace commentlens {

enum class CategoryLabel {
    postcondition,
    precondition,
    value_description,
    instruction,
    guide,
    interface,
    meta_information,
    comment_out,
    directive,
    visual_cue,
    uncategorized,
};

/// Canonical names: "Postcondition", ..., "MetaInformation", ...
std::string_view to_string(CategoryLabel label) noexcept;
/// Accepts the canonical names plus "Metadata" and "Meta Information".
std::optional<CategoryLabel> parse_category(std::string_view name) noexcept;
/// All eleven, in menu order.
std::span<const CategoryLabel> all_categories() noexcept;
/// One-line annotation guideline.
std::string_view guideline(CategoryLabel label) noexcept;

/// Value of PosTagFirst and WordFirst for an extent without words.
inline constexpr std::string_view empty_text = "\xE2\x88\x85";  // U+2205

/// Expansion of the set-valued features into one boolean per entry.
struct FeatureVocabulary {
    std::vector<std::string> words;  // lowercased, unique
    std::vector<std::string> tags;

    /// Every feature name a vector built from this vocabulary carries.
    std::vector<std::string> feature_names() const;
    /// The vocabulary a model was trained with, read off its declared
    /// features. Entries come back in name order.
    static FeatureVocabulary from_model(const dtree::DecisionTree& model);
    friend bool operator==(const FeatureVocabulary&, const FeatureVocabulary&) = default;
};

inline constexpr std::size_t default_word_cap = 200;

/// The `word_cap` words occurring in the most extents (ties to the
/// lexicographically smaller word), tokens without a letter or digit
/// excluded; all 36 Penn tags.
FeatureVocabulary build_vocabulary(std::span<const std::string> extent_texts, std::size_t word_cap = default_word_cap);

/// LeftSyntax, RightSyntax, ParentSyntax, HasSymbol, PosTagFirst,
/// WordFirst, then PosTagAny:<TAG> and WordAny:<word> over the vocabulary.
dtree::FeatureVector build_feature_vector(const ParsedFile& file, const extent::CommentExtent& extent,
                                          const nlp::TaggedText& tagged, const FeatureVocabulary& vocab);

struct CategoryPrediction {
    CategoryLabel label = CategoryLabel::uncategorized;
    double confidence = 0.0;
};

/// Throws ModelFeatureMismatch when the model tests a feature absent from
/// `features` or predicts a label outside the eleven categories.
CategoryPrediction classify_category(const dtree::FeatureVector& features, const dtree::DecisionTree& model);

using KindMapping = std::map<std::string, std::string, std::less<>>;

/// `JavaKind<TAB>PythonKind` lines; blank lines and `#` comments skipped.
/// Throws InvalidInput on a malformed or duplicate line.
KindMapping parse_kind_mapping(std::string_view text);
KindMapping load_kind_mapping(const std::string& path);
/// The nine Java to Python pairs compiled in.
const KindMapping& java_to_python();

/// Rewrites the values tested on LeftSyntax, RightSyntax and ParentSyntax.
/// Kinds shared by both languages, "None", and kinds already in the
/// mapping's range pass through; any other unmapped kind throws
/// UnmappedKind. A non-injective mapping throws InvalidInput.
dtree::DecisionTree map_syntax_features(const dtree::DecisionTree& model, const KindMapping& mapping);

}  // namespace commentlens
