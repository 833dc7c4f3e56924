#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "commentlens/category.hpp"
#include "commentlens/error.hpp"

namespace commentlens {

namespace {

struct CategoryInfo {
    CategoryLabel label;
    std::string_view name;
    std::string_view guideline;
};

constexpr std::array<CategoryInfo, 11> category_table = {{
    {CategoryLabel::postcondition, "Postcondition",
     "Conditions or effects that hold after the code is executed; what the code does."},
    {CategoryLabel::precondition, "Precondition",
     "Conditions that hold before the code is executed, or regardless of it; why the code is needed."},
    {CategoryLabel::value_description, "ValueDescription",
     "Phrase that can be equated with a variable, constant or expression."},
    {CategoryLabel::instruction, "Instruction", "Instruction for code maintainers, such as TODO comments."},
    {CategoryLabel::guide, "Guide", "Guide for code users. Not to be confused with Instructions."},
    {CategoryLabel::interface, "Interface", "Description of a function, type, class or interface."},
    {CategoryLabel::meta_information, "MetaInformation", "Meta information such as author, date, or copyright."},
    {CategoryLabel::comment_out, "CommentOut", "Commented out code. This type of comment has no target."},
    {CategoryLabel::directive, "Directive", "Compiler or tool directive that isn't directed to human readers."},
    {CategoryLabel::visual_cue, "VisualCue", "Text inserted just for the ease of reading."},
    {CategoryLabel::uncategorized, "Uncategorized", "All other comments that don't fit the above categories."},
}};

constexpr std::array<CategoryLabel, 11> category_order = {
    CategoryLabel::postcondition, CategoryLabel::precondition, CategoryLabel::value_description,
    CategoryLabel::instruction,   CategoryLabel::guide,        CategoryLabel::interface,
    CategoryLabel::meta_information, CategoryLabel::comment_out, CategoryLabel::directive,
    CategoryLabel::visual_cue,    CategoryLabel::uncategorized,
};

const CategoryInfo& info(CategoryLabel label) {
    return category_table[static_cast<std::size_t>(label)];
}

constexpr std::string_view pos_any_prefix = "PosTagAny:";
constexpr std::string_view word_any_prefix = "WordAny:";

const std::array<std::string_view, 3> syntax_features = {"LeftSyntax", "RightSyntax", "ParentSyntax"};

bool has_alnum(std::string_view s) {
    return std::any_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) != 0 || (static_cast<unsigned char>(c) & 0x80) != 0;
    });
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

}  // namespace

std::string_view to_string(CategoryLabel label) noexcept { return info(label).name; }

std::optional<CategoryLabel> parse_category(std::string_view name) noexcept {
    for (const auto& c : category_table) {
        if (c.name == name) return c.label;
    }
    if (name == "Metadata" || name == "Meta Information") return CategoryLabel::meta_information;
    return std::nullopt;
}

std::span<const CategoryLabel> all_categories() noexcept { return category_order; }

std::string_view guideline(CategoryLabel label) noexcept { return info(label).guideline; }

std::vector<std::string> FeatureVocabulary::feature_names() const {
    std::vector<std::string> names = {"LeftSyntax", "RightSyntax", "ParentSyntax", "HasSymbol", "PosTagFirst",
                                      "WordFirst"};
    for (const auto& t : tags) names.push_back(std::string(pos_any_prefix) + t);
    for (const auto& w : words) names.push_back(std::string(word_any_prefix) + w);
    return names;
}

FeatureVocabulary FeatureVocabulary::from_model(const dtree::DecisionTree& model) {
    FeatureVocabulary v;
    for (const auto& f : model.features) {
        std::string_view name = f.name;
        if (name.starts_with(pos_any_prefix)) v.tags.emplace_back(name.substr(pos_any_prefix.size()));
        if (name.starts_with(word_any_prefix)) v.words.emplace_back(name.substr(word_any_prefix.size()));
    }
    return v;
}

FeatureVocabulary build_vocabulary(std::span<const std::string> extent_texts, std::size_t word_cap) {
    std::map<std::string, std::size_t> df;
    for (const auto& text : extent_texts) {
        std::set<std::string> seen;
        for (const auto& tok : nlp::tokenize(text)) {
            if (has_alnum(tok)) seen.insert(lower(tok));
        }
        for (const auto& w : seen) ++df[w];
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(df.begin(), df.end());
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    FeatureVocabulary v;
    for (std::size_t i = 0; i < ranked.size() && i < word_cap; ++i) v.words.push_back(ranked[i].first);
    for (auto t : nlp::penn_tags()) v.tags.emplace_back(t);
    return v;
}

dtree::FeatureVector build_feature_vector(const ParsedFile& file, const extent::CommentExtent& extent,
                                          const nlp::TaggedText& tagged, const FeatureVocabulary& vocab) {
    dtree::FeatureVector fv;
    auto nb = neighbor_query(file, extent.span);
    fv.set("LeftSyntax", nb.left ? file.node(*nb.left).kind : std::string(kinds::none));
    fv.set("RightSyntax", nb.right ? file.node(*nb.right).kind : std::string(kinds::none));
    fv.set("ParentSyntax", file.node(nb.parent).kind);
    fv.set("HasSymbol", tagged.has_symbol);
    if (tagged.tokens.empty()) {
        fv.set("PosTagFirst", std::string(empty_text));
        fv.set("WordFirst", std::string(empty_text));
    } else {
        fv.set("PosTagFirst", tagged.tokens.front().pos);
        fv.set("WordFirst", tagged.tokens.front().lower);
    }
    std::set<std::string_view> tags, words;
    for (const auto& t : tagged.tokens) {
        tags.insert(t.pos);
        words.insert(t.lower);
    }
    for (const auto& t : vocab.tags) fv.set(std::string(pos_any_prefix) + t, tags.count(t) > 0);
    for (const auto& w : vocab.words) fv.set(std::string(word_any_prefix) + w, words.count(w) > 0);
    return fv;
}

CategoryPrediction classify_category(const dtree::FeatureVector& features, const dtree::DecisionTree& model) {
    std::vector<std::string> known;
    known.reserve(features.values.size());
    for (const auto& [name, value] : features.values) known.push_back(name);
    dtree::check_features(model, known);
    auto p = dtree::classify(model, features);
    auto label = parse_category(p.label);
    if (!label) throw Error(ErrorCode::model_feature_mismatch, "model predicts unknown category '" + p.label + "'");
    return {*label, p.confidence};
}

KindMapping parse_kind_mapping(std::string_view text) {
    KindMapping m;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size() ||
            line.find('\t', tab + 1) != std::string::npos) {
            throw Error(ErrorCode::invalid_input, "mapping line " + std::to_string(number) + ": expected two columns");
        }
        auto [it, inserted] = m.emplace(line.substr(0, tab), line.substr(tab + 1));
        if (!inserted) {
            throw Error(ErrorCode::invalid_input, "mapping line " + std::to_string(number) + ": duplicate kind " + it->first);
        }
    }
    return m;
}

KindMapping load_kind_mapping(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_kind_mapping(ss.str());
}

const KindMapping& java_to_python() {
    static const KindMapping m = {
        {"SimpleName", "Name"},       {"MethodDeclaration", "FunctionDef"}, {"ExpressionStatement", "Expr"},
        {"IfStatement", "If"},        {"MethodInvocation", "Call"},         {"ForStatement", "For"},
        {"StringLiteral", "Str"},     {"NumberLiteral", "Num"},             {"ArrayInitializer", "Tuple"},
    };
    return m;
}

namespace {

bool is_shared_kind(std::string_view kind) {
    for (auto k : {kinds::root, kinds::other, kinds::block, kinds::return_statement, kinds::variable_declaration,
                   kinds::catch_clause, kinds::none}) {
        if (k == kind) return true;
    }
    return false;
}

void map_node(dtree::TreeNode& node, const KindMapping& mapping, const std::set<std::string, std::less<>>& range) {
    bool syntax = std::find(syntax_features.begin(), syntax_features.end(), node.feature) != syntax_features.end();
    if (!node.is_leaf() && syntax && node.kind == dtree::SplitKind::categorical) {
        for (auto& v : node.branch_values) {
            auto* kind = std::get_if<std::string>(&v);
            if (!kind) continue;
            if (auto it = mapping.find(*kind); it != mapping.end()) {
                v = it->second;
            } else if (!is_shared_kind(*kind) && !range.count(*kind)) {
                throw Error(ErrorCode::unmapped_kind, "no mapping for kind '" + *kind + "' in " + node.feature);
            }
        }
    }
    for (auto& c : node.children) map_node(c, mapping, range);
}

}  // namespace

dtree::DecisionTree map_syntax_features(const dtree::DecisionTree& model, const KindMapping& mapping) {
    std::set<std::string, std::less<>> range;
    for (const auto& [from, to] : mapping) {
        if (!range.insert(to).second) throw Error(ErrorCode::invalid_input, "mapping is not injective at " + to);
    }
    dtree::DecisionTree out = model;
    map_node(out.root, mapping, range);
    return out;
}

}  // namespace commentlens
