#include <algorithm>
#include <array>

#include "commentlens/error.hpp"
#include "commentlens/syntax.hpp"
#include "parse_tree.hpp"

namespace commentlens {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::unparsable_file: return "UnparsableFile";
    case ErrorCode::model_feature_mismatch: return "ModelFeatureMismatch";
    case ErrorCode::undefined_split: return "UndefinedSplit";
    case ErrorCode::empty_matrix: return "EmptyMatrix";
    case ErrorCode::degenerate_agreement: return "DegenerateAgreement";
    case ErrorCode::invalid_distribution: return "InvalidDistribution";
    case ErrorCode::unmapped_kind: return "UnmappedKind";
    case ErrorCode::fetch_failed: return "FetchFailed";
    case ErrorCode::insufficient_comments: return "InsufficientComments";
    case ErrorCode::invalid_input: return "InvalidInput";
    case ErrorCode::io_error: return "IoError";
    }
    return "Unknown";
}

std::string_view to_string(Language lang) noexcept {
    return lang == Language::java ? "java" : "python";
}

std::optional<Language> parse_language(std::string_view name) noexcept {
    if (name == "java") return Language::java;
    if (name == "python") return Language::python;
    return std::nullopt;
}

std::string_view to_string(CommentStyle style) noexcept {
    return style == CommentStyle::line ? "line" : "block";
}

namespace kinds {

namespace {
constexpr std::array<std::string_view, 24> all_kinds = {
    root, other, block, return_statement, variable_declaration, catch_clause,
    simple_name, method_declaration, expression_statement, if_statement,
    method_invocation, for_statement, string_literal, number_literal, array_initializer,
    name, function_def, expr, if_, call, for_, str, num, tuple,
};
}  // namespace

std::span<const std::string_view> vocabulary() noexcept { return all_kinds; }

bool is_known(std::string_view kind) noexcept {
    return std::find(all_kinds.begin(), all_kinds.end(), kind) != all_kinds.end();
}

}  // namespace kinds

std::string sanitize_utf8(std::string_view bytes) {
    std::string out;
    out.reserve(bytes.size());
    constexpr std::string_view replacement = "\xEF\xBF\xBD";
    std::size_t i = 0;
    while (i < bytes.size()) {
        auto c = static_cast<unsigned char>(bytes[i]);
        std::size_t len = 0;
        if (c < 0x80) len = 1;
        else if (c >= 0xC2 && c <= 0xDF) len = 2;
        else if (c >= 0xE0 && c <= 0xEF) len = 3;
        else if (c >= 0xF0 && c <= 0xF4) len = 4;
        bool ok = len > 0 && i + len <= bytes.size();
        for (std::size_t k = 1; ok && k < len; ++k) {
            auto cc = static_cast<unsigned char>(bytes[i + k]);
            ok = (cc & 0xC0) == 0x80;
        }
        if (ok && len == 3) {
            auto c1 = static_cast<unsigned char>(bytes[i + 1]);
            ok = !(c == 0xE0 && c1 < 0xA0) && !(c == 0xED && c1 >= 0xA0);
        } else if (ok && len == 4) {
            auto c1 = static_cast<unsigned char>(bytes[i + 1]);
            ok = !(c == 0xF0 && c1 < 0x90) && !(c == 0xF4 && c1 >= 0x90);
        }
        if (ok) {
            out.append(bytes.substr(i, len));
            i += len;
        } else {
            out.append(replacement);
            ++i;
        }
    }
    return out;
}

namespace detail {

LineIndex::LineIndex(std::string_view text) : text_(text) {
    offsets_.push_back(0);
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '\n') offsets_.push_back(i + 1);
    }
}

int LineIndex::line_of(std::size_t offset) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), offset);
    return static_cast<int>(it - offsets_.begin());
}

int LineIndex::column_of(std::size_t offset) const {
    std::size_t start = offsets_[static_cast<std::size_t>(line_of(offset) - 1)];
    int col = 0;
    for (std::size_t i = start; i < offset && i < text_.size(); ++i) {
        // Count lead bytes only.
        if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) ++col;
    }
    return col;
}

}  // namespace detail

namespace {

SourceSpan span_from(const detail::LineIndex& index, std::size_t begin, std::size_t end) {
    SourceSpan s;
    s.start_offset = begin;
    s.end_offset = end;
    s.start_line = index.line_of(begin);
    s.start_col = index.column_of(begin);
    s.end_line = index.line_of(end);
    s.end_col = index.column_of(end);
    return s;
}

// Enforce containment and sibling order, then flatten depth-first.
void normalize(detail::TmpNode& node) {
    for (auto& child : node.children) normalize(child);
    std::stable_sort(node.children.begin(), node.children.end(),
                     [](const auto& a, const auto& b) { return a.begin < b.begin; });
    for (std::size_t i = 1; i < node.children.size(); ++i) {
        auto& prev = node.children[i - 1];
        auto& cur = node.children[i];
        if (cur.begin < prev.end) cur.begin = std::min(prev.end, cur.end);
    }
    for (const auto& child : node.children) {
        node.begin = std::min(node.begin, child.begin);
        node.end = std::max(node.end, child.end);
    }
}

void flatten(const detail::TmpNode& tmp, std::optional<NodeId> parent,
             const detail::LineIndex& index, std::vector<SyntaxNode>& out) {
    auto id = static_cast<NodeId>(out.size());
    out.push_back(SyntaxNode{std::string(tmp.kind), span_from(index, tmp.begin, tmp.end), {}, parent});
    if (parent) out[*parent].children.push_back(id);
    for (const auto& child : tmp.children) flatten(child, id, index, out);
}

}  // namespace

ParsedFile::ParsedFile(std::string file_id, Language language, std::string text,
                       std::vector<SyntaxNode> nodes, std::vector<CommentToken> comments)
    : file_id_(std::move(file_id)),
      language_(language),
      text_(std::move(text)),
      nodes_(std::move(nodes)),
      comments_(std::move(comments)),
      line_offsets_(detail::LineIndex(text_).offsets()) {
    if (nodes_.empty()) {
        nodes_.push_back(SyntaxNode{std::string(kinds::root), make_span(0, text_.size()), {}, {}});
    }
}

std::string_view ParsedFile::line_text(int line) const {
    if (line < 1 || line > line_count()) return {};
    auto begin = line_offsets_[static_cast<std::size_t>(line - 1)];
    auto end = line < line_count() ? line_offsets_[static_cast<std::size_t>(line)] : text_.size();
    std::string_view view(text_);
    auto out = view.substr(begin, end - begin);
    while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.remove_suffix(1);
    return out;
}

std::string_view ParsedFile::slice(const SourceSpan& span) const {
    std::string_view view(text_);
    if (span.start_offset >= view.size()) return {};
    return view.substr(span.start_offset, span.end_offset - span.start_offset);
}

SourceSpan ParsedFile::make_span(std::size_t begin, std::size_t end) const {
    auto locate = [this](std::size_t offset, int& line, int& col) {
        auto it = std::upper_bound(line_offsets_.begin(), line_offsets_.end(), offset);
        line = static_cast<int>(it - line_offsets_.begin());
        col = 0;
        for (std::size_t i = *(it - 1); i < offset && i < text_.size(); ++i) {
            if ((static_cast<unsigned char>(text_[i]) & 0xC0) != 0x80) ++col;
        }
    };
    SourceSpan s;
    s.start_offset = begin;
    s.end_offset = end;
    locate(begin, s.start_line, s.start_col);
    locate(end, s.end_line, s.end_col);
    return s;
}

ParsedFile parse_source(std::string_view raw, Language language, std::string file_id) {
    std::string text = sanitize_utf8(raw);
    auto output = language == Language::java ? detail::parse_java(text) : detail::parse_python(text);

    output.root.kind = kinds::root;
    output.root.begin = 0;
    output.root.end = text.size();
    normalize(output.root);

    detail::LineIndex index(text);
    std::vector<SyntaxNode> nodes;
    flatten(output.root, std::nullopt, index, nodes);

    std::vector<CommentToken> comments;
    comments.reserve(output.comments.size());
    std::sort(output.comments.begin(), output.comments.end(),
              [](const auto& a, const auto& b) { return a.begin < b.begin; });
    for (const auto& c : output.comments) {
        comments.push_back(CommentToken{span_from(index, c.begin, c.end), c.style,
                                        text.substr(c.begin, c.end - c.begin), file_id});
    }
    return ParsedFile(std::move(file_id), language, std::move(text), std::move(nodes),
                      std::move(comments));
}

std::vector<CommentRef> enumerate_comments(std::span<const ParsedFile> files) {
    std::vector<const ParsedFile*> order;
    order.reserve(files.size());
    for (const auto& f : files) order.push_back(&f);
    std::stable_sort(order.begin(), order.end(),
                     [](const auto* a, const auto* b) { return a->file_id() < b->file_id(); });
    std::vector<CommentRef> out;
    for (const auto* f : order) {
        for (const auto& c : f->comments()) out.push_back(CommentRef{f, &c});
    }
    return out;
}

}  // namespace commentlens
