#pragma once

// Parser-side tree representation. Parsers build a nested value tree with
// byte ranges; source_file.cpp flattens it into a ParsedFile.

#include <cstddef>
#include <string_view>
#include <vector>

#include "commentlens/syntax.hpp"

namespace commentlens::detail {

struct TmpNode {
    std::string_view kind;
    std::size_t begin = 0;
    std::size_t end = 0;
    std::vector<TmpNode> children;

    TmpNode() = default;
    TmpNode(std::string_view k, std::size_t b, std::size_t e) : kind(k), begin(b), end(e) {}

    void add(TmpNode child) {
        if (child.kind.empty()) return;
        if (child.begin < begin) begin = child.begin;
        if (child.end > end) end = child.end;
        children.push_back(std::move(child));
    }
};

struct RawComment {
    std::size_t begin;
    std::size_t end;
    CommentStyle style;
};

struct ParseOutput {
    TmpNode root;
    std::vector<RawComment> comments;
};

ParseOutput parse_java(std::string_view text);
ParseOutput parse_python(std::string_view text);

/// Line/column lookup over a text buffer.
class LineIndex {
public:
    explicit LineIndex(std::string_view text);

    std::vector<std::size_t> offsets() const { return offsets_; }
    int line_of(std::size_t offset) const;  // 1-based
    int column_of(std::size_t offset) const;  // 0-based, code points

private:
    std::string_view text_;
    std::vector<std::size_t> offsets_;
};

}  // namespace commentlens::detail
