#include <algorithm>
#include <cctype>

#include "commentlens/error.hpp"
#include "commentlens/extent.hpp"

namespace commentlens::extent {

std::string_view to_string(IobTag tag) noexcept { return tag == IobTag::B ? "B" : "I"; }

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = {"DeltaRows", "DeltaCols", "DeltaLeft",
                                                   "LeftSyntax", "RightSyntax", "ParentSyntax"};
    return names;
}

dtree::FeatureVector ExtentFeatures::to_vector() const {
    dtree::FeatureVector fv;
    fv.set("DeltaRows", delta_rows);
    fv.set("DeltaCols", delta_cols);
    fv.set("DeltaLeft", delta_left);
    fv.set("LeftSyntax", left_syntax);
    fv.set("RightSyntax", right_syntax);
    fv.set("ParentSyntax", parent_syntax);
    return fv;
}

ExtentFeatures compute_extent_features(const ParsedFile& file, std::size_t index) {
    const auto& c = file.comments()[index];
    ExtentFeatures f;
    if (index > 0) {
        const auto& prev = file.comments()[index - 1];
        f.delta_rows = c.span.start_line - prev.span.end_line;
        f.delta_cols = c.span.start_col - prev.span.start_col;
    }
    auto nb = neighbor_query(file, c.span);
    f.left_syntax = nb.left ? file.node(*nb.left).kind : std::string(kinds::none);
    f.right_syntax = nb.right ? file.node(*nb.right).kind : std::string(kinds::none);
    f.parent_syntax = file.node(nb.parent).kind;
    if (nb.left) {
        const auto& left = file.node(*nb.left).span;
        if (left.end_line == c.span.start_line) f.delta_left = c.span.start_col - left.end_col;
    }
    return f;
}

bool is_forced_begin(const ParsedFile& file, std::size_t index) {
    const auto comments = file.comments();
    if (index == 0) return true;
    return comments[index].style == CommentStyle::block || comments[index - 1].style == CommentStyle::block;
}

std::vector<IobTag> tag_extents(const ParsedFile& file, const dtree::DecisionTree& model) {
    dtree::check_features(model, feature_names());
    std::vector<IobTag> tags;
    tags.reserve(file.comments().size());
    for (std::size_t i = 0; i < file.comments().size(); ++i) {
        if (is_forced_begin(file, i)) {
            tags.push_back(IobTag::B);
            continue;
        }
        auto p = dtree::classify(model, compute_extent_features(file, i).to_vector());
        tags.push_back(p.label == "I" ? IobTag::I : IobTag::B);
    }
    return tags;
}

IobTag rule_tag(const ParsedFile& file, std::size_t index) {
    if (is_forced_begin(file, index)) return IobTag::B;
    auto f = compute_extent_features(file, index);
    bool continues = f.delta_rows == 1 && f.delta_cols == 0 && f.delta_left == sentinel;
    return continues ? IobTag::I : IobTag::B;
}

std::vector<IobTag> rule_tags(const ParsedFile& file) {
    std::vector<IobTag> tags;
    for (std::size_t i = 0; i < file.comments().size(); ++i) tags.push_back(rule_tag(file, i));
    return tags;
}

dtree::Dataset rule_training_set(std::span<const ParsedFile> files) {
    return training_set(files, [](const ParsedFile& f) { return rule_tags(f); });
}

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_decoration(char c) { return c == '*' || c == '-' || c == '=' || c == '/' || c == '#'; }

std::string_view trim(std::string_view s) {
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

// Drops a leading or trailing run of decoration characters when it stands
// apart from the words, so "-1" or "a/b" survive but "* text" and
// "==== title ====" lose their frames.
std::string_view strip_decoration(std::string_view line) {
    line = trim(line);
    std::size_t k = 0;
    while (k < line.size() && is_decoration(line[k])) ++k;
    if (k > 0 && (k == line.size() || is_space(line[k]))) line = trim(line.substr(k));
    std::size_t e = line.size();
    while (e > 0 && is_decoration(line[e - 1])) --e;
    if (e < line.size() && (e == 0 || is_space(line[e - 1]))) line = trim(line.substr(0, e));
    return line;
}

void append_words(std::string& out, std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) ++i;
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) ++j;
        if (j > i) {
            if (!out.empty()) out += ' ';
            out.append(s.substr(i, j - i));
        }
        i = j;
    }
}

}  // namespace

std::string normalize_comment(const CommentToken& token) {
    std::string_view body = token.raw_text;
    if (token.style == CommentStyle::block) {
        if (body.starts_with("/*")) body.remove_prefix(2);
        if (body.ends_with("*/")) body.remove_suffix(2);
    } else if (body.starts_with("//")) {
        body.remove_prefix(2);
    } else if (body.starts_with("#")) {
        body.remove_prefix(1);
    }
    std::string out;
    std::size_t pos = 0;
    while (pos <= body.size()) {
        auto nl = body.find('\n', pos);
        if (nl == std::string_view::npos) nl = body.size();
        append_words(out, strip_decoration(body.substr(pos, nl - pos)));
        pos = nl + 1;
    }
    return out;
}

std::vector<CommentExtent> merge_extents(const ParsedFile& file, const std::vector<IobTag>& tags) {
    const auto comments = file.comments();
    if (tags.size() != comments.size()) {
        throw Error(ErrorCode::invalid_input, "tag count " + std::to_string(tags.size()) + " does not match " +
                                                  std::to_string(comments.size()) + " comments");
    }
    std::vector<CommentExtent> out;
    for (std::size_t i = 0; i < comments.size(); ++i) {
        if (i == 0 || tags[i] == IobTag::B) out.emplace_back();
        auto& e = out.back();
        e.tokens.push_back(comments[i]);
        auto piece = normalize_comment(comments[i]);
        if (!piece.empty()) {
            if (!e.text.empty()) e.text += ' ';
            e.text += piece;
        }
    }
    for (auto& e : out) {
        e.span = file.make_span(e.tokens.front().span.start_offset, e.tokens.back().span.end_offset);
        e.decorative = e.text.empty();
    }
    return out;
}

}  // namespace commentlens::extent
