#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace commentlens {

enum class Language { java, python };

std::string_view to_string(Language lang) noexcept;
std::optional<Language> parse_language(std::string_view name) noexcept;

/// Region of a source file. Offsets are byte offsets into the decoded
/// (UTF-8 sanitized) text, end exclusive. Lines are 1-based; columns are
/// 0-based and count code points, a tab being one column.
struct SourceSpan {
    std::size_t start_offset = 0;
    std::size_t end_offset = 0;
    int start_line = 1;
    int end_line = 1;
    int start_col = 0;
    int end_col = 0;

    std::size_t length() const noexcept { return end_offset - start_offset; }
    bool contains(const SourceSpan& other) const noexcept {
        return start_offset <= other.start_offset && other.end_offset <= end_offset;
    }
    bool overlaps(const SourceSpan& other) const noexcept {
        return start_offset < other.end_offset && other.start_offset < end_offset;
    }
    friend bool operator==(const SourceSpan&, const SourceSpan&) = default;
};

/// Canonical node kinds. Java and Python grammar elements are mapped onto
/// this closed vocabulary; anything else becomes `Other`.
namespace kinds {
inline constexpr std::string_view root = "Root";
inline constexpr std::string_view other = "Other";
inline constexpr std::string_view block = "Block";
inline constexpr std::string_view return_statement = "ReturnStatement";
inline constexpr std::string_view variable_declaration = "VariableDeclaration";
inline constexpr std::string_view catch_clause = "CatchClause";
// Java
inline constexpr std::string_view simple_name = "SimpleName";
inline constexpr std::string_view method_declaration = "MethodDeclaration";
inline constexpr std::string_view expression_statement = "ExpressionStatement";
inline constexpr std::string_view if_statement = "IfStatement";
inline constexpr std::string_view method_invocation = "MethodInvocation";
inline constexpr std::string_view for_statement = "ForStatement";
inline constexpr std::string_view string_literal = "StringLiteral";
inline constexpr std::string_view number_literal = "NumberLiteral";
inline constexpr std::string_view array_initializer = "ArrayInitializer";
// Python
inline constexpr std::string_view name = "Name";
inline constexpr std::string_view function_def = "FunctionDef";
inline constexpr std::string_view expr = "Expr";
inline constexpr std::string_view if_ = "If";
inline constexpr std::string_view call = "Call";
inline constexpr std::string_view for_ = "For";
inline constexpr std::string_view str = "Str";
inline constexpr std::string_view num = "Num";
inline constexpr std::string_view tuple = "Tuple";
// Placeholder for an absent neighbor in feature vectors.
inline constexpr std::string_view none = "None";

/// Every kind a parser may emit, for both languages.
std::span<const std::string_view> vocabulary() noexcept;
bool is_known(std::string_view kind) noexcept;
}  // namespace kinds

using NodeId = std::uint32_t;

struct SyntaxNode {
    std::string kind;
    SourceSpan span;
    std::vector<NodeId> children;
    std::optional<NodeId> parent;
};

enum class CommentStyle { line, block };

std::string_view to_string(CommentStyle style) noexcept;

struct CommentToken {
    SourceSpan span;
    CommentStyle style = CommentStyle::line;
    std::string raw_text;
    std::string file_id;
};

/// A parsed source file: the syntax tree stored flat (root at index 0) plus
/// the comments, which live outside the tree and are ordered by offset.
/// Immutable once built.
class ParsedFile {
public:
    ParsedFile(std::string file_id, Language language, std::string text,
               std::vector<SyntaxNode> nodes, std::vector<CommentToken> comments);

    const std::string& file_id() const noexcept { return file_id_; }
    Language language() const noexcept { return language_; }
    const std::string& text() const noexcept { return text_; }

    NodeId root_id() const noexcept { return 0; }
    const SyntaxNode& root() const noexcept { return nodes_.front(); }
    const SyntaxNode& node(NodeId id) const { return nodes_.at(id); }
    std::span<const SyntaxNode> nodes() const noexcept { return nodes_; }
    std::span<const CommentToken> comments() const noexcept { return comments_; }

    /// Offset of the first character of each line; `line_offsets()[0]` is 0.
    std::span<const std::size_t> line_offsets() const noexcept { return line_offsets_; }
    int line_count() const noexcept { return static_cast<int>(line_offsets_.size()); }
    std::string_view line_text(int line) const;
    std::string_view slice(const SourceSpan& span) const;
    SourceSpan make_span(std::size_t begin, std::size_t end) const;

private:
    std::string file_id_;
    Language language_;
    std::string text_;
    std::vector<SyntaxNode> nodes_;
    std::vector<CommentToken> comments_;
    std::vector<std::size_t> line_offsets_;
};

/// Files above this size are skipped by corpus ingestion.
inline constexpr std::size_t max_source_bytes = 2u * 1024u * 1024u;

/// Replace invalid UTF-8 sequences with U+FFFD.
std::string sanitize_utf8(std::string_view bytes);

/// Parse a whole file. Throws Error(unparsable_file) when the text cannot be
/// recovered into a tree (unterminated comment or string, unbalanced blocks).
ParsedFile parse_source(std::string_view text, Language language, std::string file_id = {});

struct Neighbors {
    std::optional<NodeId> left;
    std::optional<NodeId> right;
    NodeId parent = 0;
};

/// Syntax elements around a region that is not itself in the tree (a
/// comment). Walking left over whitespace and other comments, `left` is the
/// longest node ending at the first boundary where any node ends; `right`
/// mirrors this to the right. Equal lengths go to the outer node. `parent`
/// is the smallest non-empty node containing the region.
Neighbors neighbor_query(const ParsedFile& file, const SourceSpan& pos);

struct CommentRef {
    const ParsedFile* file;
    const CommentToken* token;
};

/// All comments of all files, ordered by file id then offset.
std::vector<CommentRef> enumerate_comments(std::span<const ParsedFile> files);

}  // namespace commentlens
