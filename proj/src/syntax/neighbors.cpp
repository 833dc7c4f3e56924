#include <algorithm>
#include <cctype>

#include "commentlens/syntax.hpp"

namespace commentlens {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Offsets reachable from `offset` by skipping whitespace and comments,
// nearest first.
std::vector<std::size_t> trivia_before(const ParsedFile& file, std::size_t offset) {
    const auto& text = file.text();
    auto comments = file.comments();
    std::vector<std::size_t> edges;
    while (true) {
        while (offset > 0 && is_space(text[offset - 1])) --offset;
        edges.push_back(offset);
        auto it = std::find_if(comments.begin(), comments.end(), [offset](const CommentToken& c) {
            return c.span.end_offset == offset && c.span.start_offset < offset;
        });
        if (it == comments.end()) return edges;
        offset = it->span.start_offset;
    }
}

std::vector<std::size_t> trivia_after(const ParsedFile& file, std::size_t offset) {
    const auto& text = file.text();
    auto comments = file.comments();
    std::vector<std::size_t> edges;
    while (true) {
        while (offset < text.size() && is_space(text[offset])) ++offset;
        edges.push_back(offset);
        auto it = std::find_if(comments.begin(), comments.end(), [offset](const CommentToken& c) {
            return c.span.start_offset == offset && c.span.end_offset > offset;
        });
        if (it == comments.end()) return edges;
        offset = it->span.end_offset;
    }
}

}  // namespace

Neighbors neighbor_query(const ParsedFile& file, const SourceSpan& pos) {
    Neighbors result;

    NodeId parent = file.root_id();
    bool descended = true;
    while (descended) {
        descended = false;
        for (NodeId child : file.node(parent).children) {
            const auto& span = file.node(child).span;
            if (span.length() > 0 && span.contains(pos)) {
                parent = child;
                descended = true;
                break;
            }
        }
    }
    result.parent = parent;

    auto nodes = file.nodes();
    // Preorder: on equal length the outer node is seen first and kept.
    auto longest = [&](auto matches) {
        std::optional<NodeId> best;
        std::size_t best_len = 0;
        for (NodeId id = 1; id < nodes.size(); ++id) {
            const auto& span = nodes[id].span;
            if (span.length() > best_len && matches(span)) {
                best_len = span.length();
                best = id;
            }
        }
        return best;
    };
    for (std::size_t edge : trivia_before(file, pos.start_offset)) {
        result.left = longest([edge](const SourceSpan& s) { return s.end_offset == edge; });
        if (result.left) break;
    }
    for (std::size_t edge : trivia_after(file, pos.end_offset)) {
        result.right = longest([edge, &pos](const SourceSpan& s) {
            return s.start_offset == edge && s.start_offset >= pos.end_offset;
        });
        if (result.right) break;
    }
    return result;
}

}  // namespace commentlens
