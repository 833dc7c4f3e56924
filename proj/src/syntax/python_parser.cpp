// Python tokenizer (INDENT/DEDENT, implicit line joining, comments kept on
// the side) and a tolerant statement/expression parser producing the
// node names of the `ast` module mapped onto the canonical vocabulary.

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "commentlens/error.hpp"
#include "parse_tree.hpp"

namespace commentlens::detail {

namespace {

enum class Tok { name, number, string, op, newline, indent, dedent, eof };

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t begin;
    std::size_t end;
};

bool name_start(unsigned char c) { return std::isalpha(c) || c == '_' || c >= 0x80; }
bool name_part(unsigned char c) { return std::isalnum(c) || c == '_' || c >= 0x80; }

constexpr std::array<std::string_view, 42> py_ops = {
    "**=", "//=", ">>=", "<<=", "...", "->", ":=", "**", "//", "<<", ">>", "<=", ">=", "==",
    "!=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "@=", "(", ")", "[", "]", "{", "}",
    ",", ":", ";", ".", "=", "+", "-", "*", "/", "%", "<", ">",
};

bool string_prefix(std::string_view word) {
    if (word.size() > 2) return false;
    for (char c : word) {
        char l = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (l != 'r' && l != 'u' && l != 'b' && l != 'f') return false;
    }
    return true;
}

class Tokenizer {
public:
    explicit Tokenizer(std::string_view text) : text_(text) {}

    void run(std::vector<Token>& out, std::vector<RawComment>& comments) {
        std::vector<int> indents{0};
        bool line_start = true;
        int depth = 0;
        bool pending_newline = false;
        while (true) {
            if (line_start && depth == 0) {
                // Measure indentation; skip blank and comment-only lines.
                int width = 0;
                std::size_t p = pos_;
                while (p < text_.size() && (text_[p] == ' ' || text_[p] == '\t' || text_[p] == '\f')) {
                    width = text_[p] == '\t' ? (width / 8 + 1) * 8 : width + 1;
                    ++p;
                }
                pos_ = p;
                if (pos_ >= text_.size()) break;
                char c = text_[pos_];
                if (c == '#') {
                    lex_comment(comments);
                    continue;
                }
                if (c == '\n' || c == '\r') {
                    skip_newline();
                    continue;
                }
                if (c == '\\' && next_is_newline(pos_ + 1)) {
                    pos_ += 1;
                    skip_newline();
                    continue;
                }
                if (width > indents.back()) {
                    indents.push_back(width);
                    out.push_back({Tok::indent, {}, pos_, pos_});
                } else {
                    while (width < indents.back()) {
                        indents.pop_back();
                        out.push_back({Tok::dedent, {}, pos_, pos_});
                    }
                    if (width != indents.back()) {
                        throw Error(ErrorCode::unparsable_file, "inconsistent dedent");
                    }
                }
                line_start = false;
            }
            skip_inline_space();
            if (pos_ >= text_.size()) break;
            char c = text_[pos_];
            std::size_t start = pos_;
            if (c == '#') {
                lex_comment(comments);
            } else if (c == '\n' || c == '\r') {
                if (depth == 0) {
                    out.push_back({Tok::newline, {}, pos_, pos_});
                    pending_newline = false;
                    line_start = true;
                }
                skip_newline();
            } else if (c == '\\' && next_is_newline(pos_ + 1)) {
                ++pos_;
                skip_newline();
            } else if (name_start(static_cast<unsigned char>(c))) {
                while (pos_ < text_.size() && name_part(static_cast<unsigned char>(text_[pos_]))) ++pos_;
                auto word = text_.substr(start, pos_ - start);
                if (pos_ < text_.size() && (text_[pos_] == '"' || text_[pos_] == '\'') &&
                    string_prefix(word)) {
                    lex_string();
                    out.push_back({Tok::string, text_.substr(start, pos_ - start), start, pos_});
                } else {
                    out.push_back({Tok::name, word, start, pos_});
                }
                pending_newline = true;
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '.' && pos_ + 1 < text_.size() &&
                        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
                lex_number();
                out.push_back({Tok::number, text_.substr(start, pos_ - start), start, pos_});
                pending_newline = true;
            } else if (c == '"' || c == '\'') {
                lex_string();
                out.push_back({Tok::string, text_.substr(start, pos_ - start), start, pos_});
                pending_newline = true;
            } else {
                std::size_t len = 1;
                for (auto op : py_ops) {
                    if (text_.substr(pos_, op.size()) == op) {
                        len = op.size();
                        break;
                    }
                }
                auto op = text_.substr(pos_, len);
                if (op == "(" || op == "[" || op == "{") ++depth;
                if ((op == ")" || op == "]" || op == "}") && depth > 0) --depth;
                pos_ += len;
                out.push_back({Tok::op, op, start, pos_});
                pending_newline = true;
            }
        }
        if (depth > 0) throw Error(ErrorCode::unparsable_file, "unclosed bracket at end of file");
        if (pending_newline || (!out.empty() && out.back().kind != Tok::newline &&
                                out.back().kind != Tok::dedent)) {
            out.push_back({Tok::newline, {}, text_.size(), text_.size()});
        }
        while (indents.size() > 1) {
            indents.pop_back();
            out.push_back({Tok::dedent, {}, text_.size(), text_.size()});
        }
        out.push_back({Tok::eof, {}, text_.size(), text_.size()});
    }

private:
    bool next_is_newline(std::size_t p) const {
        return p < text_.size() && (text_[p] == '\n' || text_[p] == '\r');
    }

    void skip_newline() {
        if (text_[pos_] == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') ++pos_;
        ++pos_;
    }

    void skip_inline_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\f')) ++pos_;
    }

    void lex_comment(std::vector<RawComment>& comments) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && text_[pos_] != '\n' && text_[pos_] != '\r') ++pos_;
        comments.push_back({start, pos_, CommentStyle::line});
    }

    void lex_number() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
                ++pos_;
            } else if ((c == '+' || c == '-') && (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E') &&
                       !(text_.size() > 1 && (text_[pos_ - 2] == 'x' || text_[pos_ - 2] == 'X'))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    void lex_string() {
        char q = text_[pos_];
        bool triple = text_.substr(pos_, 3) == std::string(3, q);
        pos_ += triple ? 3 : 1;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\\') {
                pos_ += 2;
            } else if (c == q) {
                if (!triple) {
                    ++pos_;
                    return;
                }
                if (text_.substr(pos_, 3) == std::string(3, q)) {
                    pos_ += 3;
                    return;
                }
                ++pos_;
            } else if ((c == '\n' || c == '\r') && !triple) {
                break;
            } else {
                ++pos_;
            }
        }
        throw Error(ErrorCode::unparsable_file, "unterminated string literal");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

struct Recover {};

bool is_augassign(std::string_view op) {
    return op == "+=" || op == "-=" || op == "*=" || op == "/=" || op == "//=" || op == "%=" ||
           op == "**=" || op == ">>=" || op == "<<=" || op == "&=" || op == "|=" || op == "^=" ||
           op == "@=";
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    TmpNode module() {
        TmpNode root(kinds::root, 0, 0);
        while (!at(Tok::eof)) {
            std::size_t before = pos_;
            if (at(Tok::newline) || at(Tok::indent) || at(Tok::dedent)) {
                advance();
                continue;
            }
            guarded_statement(root);
            if (pos_ == before) advance();
        }
        return root;
    }

private:
    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(std::size_t k = 1) const { return toks_[std::min(pos_ + k, toks_.size() - 1)]; }
    bool at(Tok kind) const { return cur().kind == kind; }
    bool is(std::string_view text) const {
        return (cur().kind == Tok::op || cur().kind == Tok::name) && cur().text == text;
    }
    bool peek_is(std::size_t k, std::string_view text) const {
        const auto& t = peek(k);
        return (t.kind == Tok::op || t.kind == Tok::name) && t.text == text;
    }
    std::size_t prev_end() const { return pos_ > 0 ? toks_[pos_ - 1].end : 0; }
    const Token& advance() {
        const auto& t = toks_[pos_];
        if (t.kind != Tok::eof) ++pos_;
        return t;
    }
    bool accept(std::string_view text) {
        if (is(text)) {
            advance();
            return true;
        }
        return false;
    }
    void expect(std::string_view text) {
        if (!accept(text)) throw Recover{};
    }

    // --- statements ----------------------------------------------------
    void guarded_statement(TmpNode& parent) {
        std::size_t save = pos_;
        try {
            for (auto& n : statement()) parent.add(std::move(n));
        } catch (const Recover&) {
            pos_ = save;
            parent.add(recover_line());
        }
    }

    // Skip the rest of the logical line, plus an indented suite if the
    // line opened one.
    TmpNode recover_line() {
        TmpNode n(kinds::other, cur().begin, cur().end);
        while (!at(Tok::newline) && !at(Tok::eof) && !at(Tok::dedent)) advance();
        n.end = prev_end();
        if (at(Tok::newline)) {
            advance();
            if (at(Tok::indent)) {
                TmpNode b(kinds::block, n.end, n.end);
                suite_body(b);
                n.add(std::move(b));
            }
        }
        return n;
    }

    std::vector<TmpNode> statement() {
        std::vector<TmpNode> out;
        out.push_back(compound_statement());
        if (out.front().kind.empty()) return simple_statements();
        return out;
    }

    // Returns an empty node when the current line is not a compound statement.
    TmpNode compound_statement() {
        if (is("@")) return decorated();
        if (is("def")) return function_def(cur().begin);
        if (is("async") && (peek_is(1, "def") || peek_is(1, "for") || peek_is(1, "with"))) {
            std::size_t start = cur().begin;
            advance();
            if (is("def")) return function_def(start);
            if (is("for")) return for_statement(start);
            return with_statement(start);
        }
        if (is("class")) return class_def(cur().begin);
        if (is("if")) return if_statement();
        if (is("for")) return for_statement(cur().begin);
        if (is("while")) return while_statement();
        if (is("try")) return try_statement();
        if (is("with")) return with_statement(cur().begin);
        if ((is("match") || is("case")) && soft_keyword_compound()) return generic_compound();
        return TmpNode{};
    }

    // `match x:` / `case y:`: a name followed by something and a line ending in `:` + INDENT.
    bool soft_keyword_compound() const {
        const auto& next = peek();
        if (next.kind == Tok::newline || (next.kind == Tok::op && next.text == "=" )) return false;
        if (next.kind == Tok::op && (next.text == "." || next.text == "," || is_augassign(next.text))) return false;
        std::size_t p = pos_;
        while (p < toks_.size() && toks_[p].kind != Tok::newline && toks_[p].kind != Tok::eof) ++p;
        return p > pos_ && p + 1 < toks_.size() && toks_[p - 1].kind == Tok::op &&
               toks_[p - 1].text == ":" && toks_[p + 1].kind == Tok::indent;
    }

    TmpNode generic_compound() {
        TmpNode n(kinds::other, cur().begin, cur().begin);
        while (!(is(":") && peek().kind == Tok::newline)) advance();
        advance();
        n.end = prev_end();
        n.add(suite());
        return n;
    }

    TmpNode decorated() {
        std::size_t start = cur().begin;
        std::vector<TmpNode> decorators;
        while (accept("@")) {
            decorators.push_back(expression());
            if (!at(Tok::newline)) throw Recover{};
            advance();
        }
        TmpNode n;
        if (is("async") && peek_is(1, "def")) {
            advance();
            n = function_def(start);
        } else if (is("def")) {
            n = function_def(start);
        } else if (is("class")) {
            n = class_def(start);
        } else {
            throw Recover{};
        }
        n.begin = start;
        std::vector<TmpNode> children = std::move(decorators);
        for (auto& c : n.children) children.push_back(std::move(c));
        n.children = std::move(children);
        return n;
    }

    TmpNode function_def(std::size_t start) {
        TmpNode n(kinds::function_def, start, start);
        advance();  // def
        if (!at(Tok::name)) throw Recover{};
        n.add(TmpNode(kinds::other, cur().begin, cur().end));
        advance();
        n.add(parameter_list());
        if (accept("->")) n.add(expression());
        expect(":");
        n.add(suite());
        return n;
    }

    TmpNode parameter_list() {
        if (!is("(")) throw Recover{};
        TmpNode params(kinds::other, cur().begin, cur().begin);
        advance();
        while (!is(")")) {
            if (at(Tok::eof)) throw Recover{};
            std::size_t b = cur().begin;
            TmpNode p(kinds::other, b, b);
            if (is("*") || is("**") || is("/")) advance();
            if (at(Tok::name)) advance();
            if (accept(":")) p.add(expression());
            if (accept("=")) p.add(expression());
            p.end = prev_end();
            if (p.end > b) params.add(std::move(p));
            if (!accept(",")) break;
        }
        expect(")");
        params.end = prev_end();
        return params;
    }

    TmpNode class_def(std::size_t start) {
        TmpNode n(kinds::other, start, start);
        advance();  // class
        if (!at(Tok::name)) throw Recover{};
        n.add(TmpNode(kinds::other, cur().begin, cur().end));
        advance();
        if (is("[")) skip_group();
        if (is("(")) {
            auto args = call_arguments();
            for (auto& a : args) n.add(std::move(a));
        }
        expect(":");
        n.add(suite());
        return n;
    }

    void skip_group() {
        int depth = 0;
        do {
            if (at(Tok::eof)) throw Recover{};
            if (is("(") || is("[") || is("{")) ++depth;
            else if (is(")") || is("]") || is("}")) --depth;
            advance();
        } while (depth > 0);
    }

    TmpNode if_statement() {
        TmpNode n(kinds::if_, cur().begin, cur().begin);
        advance();  // if / elif
        n.add(named_expression());
        expect(":");
        n.add(suite());
        if (is("elif")) {
            n.add(if_statement());
        } else if (is("else") && peek_is(1, ":")) {
            advance();
            advance();
            n.add(suite());
        }
        return n;
    }

    TmpNode for_statement(std::size_t start) {
        TmpNode n(kinds::for_, start, start);
        advance();  // for
        n.add(target_list());
        expect("in");
        n.add(expression_list());
        expect(":");
        n.add(suite());
        else_clause(n);
        return n;
    }

    void else_clause(TmpNode& n) {
        if (is("else") && peek_is(1, ":")) {
            advance();
            advance();
            n.add(suite());
        }
    }

    TmpNode while_statement() {
        TmpNode n(kinds::other, cur().begin, cur().begin);
        advance();
        n.add(named_expression());
        expect(":");
        n.add(suite());
        else_clause(n);
        return n;
    }

    TmpNode try_statement() {
        TmpNode n(kinds::other, cur().begin, cur().begin);
        advance();
        expect(":");
        n.add(suite());
        while (is("except")) {
            TmpNode handler(kinds::catch_clause, cur().begin, cur().begin);
            advance();
            accept("*");
            if (!is(":")) {
                handler.add(expression());
                if (accept("as")) {
                    if (!at(Tok::name)) throw Recover{};
                    handler.add(TmpNode(kinds::name, cur().begin, cur().end));
                    advance();
                }
            }
            expect(":");
            handler.add(suite());
            n.add(std::move(handler));
        }
        else_clause(n);
        if (is("finally") && peek_is(1, ":")) {
            advance();
            advance();
            n.add(suite());
        }
        return n;
    }

    TmpNode with_statement(std::size_t start) {
        TmpNode n(kinds::other, start, start);
        advance();  // with
        bool parens = is("(") && paren_wraps_header();
        if (parens) advance();
        while (true) {
            n.add(expression());
            if (accept("as")) n.add(target());
            if (!accept(",")) break;
            if (parens && is(")")) break;
        }
        if (parens) expect(")");
        expect(":");
        n.add(suite());
        return n;
    }

    // `with (a as b, c):`: the group closes right before the colon.
    bool paren_wraps_header() const {
        int depth = 0;
        for (std::size_t p = pos_; p < toks_.size(); ++p) {
            const auto& t = toks_[p];
            if (t.kind == Tok::newline || t.kind == Tok::eof) return false;
            if (t.kind != Tok::op) continue;
            if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
            if (t.text == ")" || t.text == "]" || t.text == "}") {
                if (--depth == 0) {
                    const auto& next = toks_[p + 1];
                    return next.kind == Tok::op && next.text == ":";
                }
            }
        }
        return false;
    }

    TmpNode suite() {
        std::size_t colon_end = prev_end();
        TmpNode b(kinds::block, colon_end, colon_end);
        if (at(Tok::newline)) {
            advance();
            if (!at(Tok::indent)) throw Recover{};
            suite_body(b);
        } else {
            for (auto& c : simple_statements()) b.add(std::move(c));
        }
        return b;
    }

    void suite_body(TmpNode& block) {
        advance();  // INDENT
        while (!at(Tok::dedent) && !at(Tok::eof)) {
            std::size_t before = pos_;
            if (at(Tok::newline) || at(Tok::indent)) {
                advance();
                continue;
            }
            guarded_statement(block);
            if (pos_ == before) advance();
        }
        if (at(Tok::dedent)) advance();
    }

    std::vector<TmpNode> simple_statements() {
        std::vector<TmpNode> line;
        while (true) {
            line.push_back(small_statement());
            if (!accept(";")) break;
            if (at(Tok::newline)) break;
        }
        if (!at(Tok::newline) && !at(Tok::eof) && !at(Tok::dedent)) throw Recover{};
        if (at(Tok::newline)) advance();
        return line;
    }

    TmpNode small_statement() {
        std::size_t start = cur().begin;
        if (is("pass") || is("break") || is("continue")) {
            advance();
            return TmpNode(kinds::other, start, prev_end());
        }
        if (is("return")) {
            TmpNode n(kinds::return_statement, start, start);
            advance();
            n.end = prev_end();
            if (!at(Tok::newline) && !is(";")) n.add(expression_list());
            return n;
        }
        if (is("import") || is("from") || is("global") || is("nonlocal")) {
            TmpNode n(kinds::other, start, start);
            while (!at(Tok::newline) && !is(";") && !at(Tok::eof)) advance();
            n.end = prev_end();
            return n;
        }
        if (is("raise") || is("del") || is("assert")) {
            TmpNode n(kinds::other, start, start);
            advance();
            n.end = prev_end();
            if (!at(Tok::newline) && !is(";")) {
                n.add(expression_list());
                if (accept("from") || accept(",")) n.add(expression());
            }
            return n;
        }
        TmpNode first = star_expressions();
        if (is("=")) {
            TmpNode n(kinds::variable_declaration, start, start);
            n.add(std::move(first));
            while (accept("=")) n.add(is("yield") ? yield_expression() : star_expressions());
            return n;
        }
        if (cur().kind == Tok::op && is_augassign(cur().text)) {
            TmpNode n(kinds::variable_declaration, start, start);
            n.add(std::move(first));
            advance();
            n.add(is("yield") ? yield_expression() : star_expressions());
            return n;
        }
        if (is(":")) {
            TmpNode n(kinds::variable_declaration, start, start);
            n.add(std::move(first));
            advance();
            n.add(expression());
            if (accept("=")) n.add(star_expressions());
            return n;
        }
        TmpNode e(kinds::expr, start, start);
        e.add(std::move(first));
        return e;
    }

    // --- expressions ---------------------------------------------------
    struct DepthGuard {
        explicit DepthGuard(int& d) : depth(d) {
            if (++depth > 400) {
                --depth;
                throw Error(ErrorCode::unparsable_file, "expression nesting too deep");
            }
        }
        ~DepthGuard() { --depth; }
        int& depth;
    };

    bool starts_expression() const {
        const auto& t = cur();
        if (t.kind == Tok::name) {
            return t.text != "in" && t.text != "if" && t.text != "else" && t.text != "for" &&
                   t.text != "as" && t.text != "from" && t.text != "and" && t.text != "or" &&
                   t.text != "is";
        }
        if (t.kind == Tok::number || t.kind == Tok::string) return true;
        if (t.kind != Tok::op) return false;
        return t.text == "(" || t.text == "[" || t.text == "{" || t.text == "-" || t.text == "+" ||
               t.text == "~" || t.text == "*" || t.text == "..." || t.text == "**";
    }

    // Comma-separated list; a trailing comma or several items make a Tuple.
    template <typename ItemFn>
    TmpNode comma_list(ItemFn item) {
        std::size_t start = cur().begin;
        TmpNode first = item();
        if (!is(",")) return first;
        TmpNode t(kinds::tuple, start, start);
        t.add(std::move(first));
        while (accept(",")) {
            t.end = prev_end();
            if (!starts_expression()) break;
            t.add(item());
        }
        return t;
    }

    TmpNode star_expressions() {
        if (is("yield")) return yield_expression();
        return comma_list([this] { return star_expression(); });
    }

    TmpNode expression_list() {
        return comma_list([this] { return star_expression(); });
    }

    TmpNode target_list() {
        return comma_list([this] { return target(); });
    }

    TmpNode target() {
        if (is("*")) {
            TmpNode n(kinds::other, cur().begin, cur().begin);
            advance();
            n.add(bitwise_or());
            return n;
        }
        return bitwise_or();
    }

    TmpNode star_expression() {
        if (is("*") || is("**")) {
            TmpNode n(kinds::other, cur().begin, cur().begin);
            advance();
            n.add(bitwise_or());
            return n;
        }
        return named_expression();
    }

    TmpNode yield_expression() {
        TmpNode n(kinds::other, cur().begin, cur().begin);
        advance();  // yield
        n.end = prev_end();
        accept("from");
        if (!at(Tok::newline) && !is(")") && !is(";") && !is("=") && !is("]") && !is("}")) {
            n.add(expression_list());
        }
        n.end = std::max(n.end, prev_end());
        return n;
    }

    TmpNode named_expression() {
        std::size_t start = cur().begin;
        TmpNode e = expression();
        if (is(":=")) {
            advance();
            TmpNode n(kinds::other, start, start);
            n.add(std::move(e));
            n.add(expression());
            return n;
        }
        return e;
    }

    TmpNode expression() {
        DepthGuard guard(depth_);
        if (is("lambda")) return lambda();
        std::size_t start = cur().begin;
        TmpNode body = disjunction();
        if (is("if") && !in_comprehension_header_) {
            std::size_t save = pos_;
            advance();
            TmpNode cond = disjunction();
            if (!accept("else")) {
                pos_ = save;
                return body;
            }
            TmpNode n(kinds::other, start, start);
            n.add(std::move(body));
            n.add(std::move(cond));
            n.add(expression());
            return n;
        }
        return body;
    }

    TmpNode lambda() {
        TmpNode n(kinds::other, cur().begin, cur().begin);
        advance();
        while (!is(":")) {
            if (at(Tok::newline) || at(Tok::eof)) throw Recover{};
            if (is("=")) {
                advance();
                n.add(expression());
                continue;
            }
            advance();
        }
        advance();
        n.add(expression());
        return n;
    }

    TmpNode disjunction() {
        TmpNode lhs = conjunction();
        while (is("or")) {
            advance();
            TmpNode n(kinds::other, lhs.begin, lhs.begin);
            n.add(std::move(lhs));
            n.add(conjunction());
            lhs = std::move(n);
        }
        return lhs;
    }

    TmpNode conjunction() {
        TmpNode lhs = inversion();
        while (is("and")) {
            advance();
            TmpNode n(kinds::other, lhs.begin, lhs.begin);
            n.add(std::move(lhs));
            n.add(inversion());
            lhs = std::move(n);
        }
        return lhs;
    }

    TmpNode inversion() {
        if (is("not")) {
            TmpNode n(kinds::other, cur().begin, cur().begin);
            advance();
            n.add(inversion());
            return n;
        }
        return comparison();
    }

    bool at_comparison_operator() const {
        if (is("<") || is(">") || is("==") || is(">=") || is("<=") || is("!=") || is("is")) return true;
        if (is("in")) return !in_for_target_;
        return is("not") && peek_is(1, "in");
    }

    TmpNode comparison() {
        TmpNode lhs = bitwise_or();
        if (!at_comparison_operator()) return lhs;
        TmpNode n(kinds::other, lhs.begin, lhs.begin);
        n.add(std::move(lhs));
        while (at_comparison_operator()) {
            if (is("not") || is("is")) {
                advance();
                if (is("in") || is("not")) advance();
            } else {
                advance();
            }
            n.add(bitwise_or());
        }
        return n;
    }

    int binary_precedence() const {
        if (cur().kind != Tok::op) return -1;
        auto op = cur().text;
        if (op == "|") return 1;
        if (op == "^") return 2;
        if (op == "&") return 3;
        if (op == "<<" || op == ">>") return 4;
        if (op == "+" || op == "-") return 5;
        if (op == "*" || op == "/" || op == "//" || op == "%" || op == "@") return 6;
        return -1;
    }

    TmpNode bitwise_or() { return binary(1); }

    TmpNode binary(int min_prec) {
        TmpNode lhs = factor();
        while (true) {
            int prec = binary_precedence();
            if (prec < min_prec) break;
            advance();
            TmpNode n(kinds::other, lhs.begin, lhs.begin);
            n.add(std::move(lhs));
            n.add(binary(prec + 1));
            lhs = std::move(n);
        }
        return lhs;
    }

    TmpNode factor() {
        if (is("-") || is("+") || is("~")) {
            TmpNode n(kinds::other, cur().begin, cur().begin);
            advance();
            n.add(factor());
            return n;
        }
        return power();
    }

    TmpNode power() {
        std::size_t start = cur().begin;
        bool awaited = false;
        if (is("await")) {
            awaited = true;
            advance();
        }
        TmpNode base = trailers(atom());
        if (awaited) {
            TmpNode n(kinds::other, start, start);
            n.add(std::move(base));
            base = std::move(n);
        }
        if (is("**")) {
            advance();
            TmpNode n(kinds::other, base.begin, base.begin);
            n.add(std::move(base));
            n.add(factor());
            return n;
        }
        return base;
    }

    TmpNode atom() {
        const auto& t = cur();
        std::size_t start = t.begin;
        switch (t.kind) {
        case Tok::name:
            if (t.text == "True" || t.text == "False" || t.text == "None") {
                advance();
                return TmpNode(kinds::other, start, t.end);
            }
            if (t.text == "lambda") return lambda();
            if (t.text == "yield") return yield_expression();
            advance();
            return TmpNode(kinds::name, start, t.end);
        case Tok::number:
            advance();
            return TmpNode(kinds::num, start, t.end);
        case Tok::string: {
            std::size_t end = t.end;
            while (at(Tok::string)) {
                end = cur().end;
                advance();
            }
            return TmpNode(kinds::str, start, end);
        }
        default:
            break;
        }
        if (is("...")) {
            advance();
            return TmpNode(kinds::other, start, prev_end());
        }
        if (is("(")) {
            advance();
            if (accept(")")) return TmpNode(kinds::tuple, start, prev_end());
            TmpNode first = is("yield") ? yield_expression() : star_expression();
            if (is("for") || is("async")) {
                TmpNode gen(kinds::other, start, start);
                gen.add(std::move(first));
                comprehension(gen);
                expect(")");
                gen.end = prev_end();
                return gen;
            }
            if (is(",")) {
                TmpNode tup(kinds::tuple, start, start);
                tup.add(std::move(first));
                while (accept(",")) {
                    if (is(")")) break;
                    tup.add(star_expression());
                }
                expect(")");
                tup.end = prev_end();
                return tup;
            }
            expect(")");
            return first;
        }
        if (is("[") || is("{")) {
            std::string_view close = is("[") ? "]" : "}";
            TmpNode n(kinds::other, start, start);
            advance();
            while (!is(close)) {
                if (at(Tok::eof)) throw Recover{};
                if (is("**")) {
                    advance();
                    n.add(bitwise_or());
                } else {
                    n.add(star_expression());
                    if (accept(":")) n.add(expression());
                }
                if (is("for") || is("async")) {
                    comprehension(n);
                    break;
                }
                if (!accept(",")) break;
            }
            expect(close);
            n.end = prev_end();
            return n;
        }
        throw Recover{};
    }

    void comprehension(TmpNode& owner) {
        while (is("for") || is("async")) {
            accept("async");
            advance();  // for
            in_for_target_ = true;
            TmpNode targets = target_list();
            in_for_target_ = false;
            owner.add(std::move(targets));
            expect("in");
            in_comprehension_header_ = true;
            owner.add(disjunction());
            while (accept("if")) owner.add(disjunction());
            in_comprehension_header_ = false;
        }
    }

    std::vector<TmpNode> call_arguments() {
        std::vector<TmpNode> args;
        advance();  // (
        while (!is(")")) {
            if (at(Tok::eof)) throw Recover{};
            if (at(Tok::name) && peek_is(1, "=")) {
                TmpNode kw(kinds::other, cur().begin, cur().begin);
                advance();
                advance();
                kw.add(expression());
                args.push_back(std::move(kw));
            } else {
                TmpNode a = star_expression();
                if (is("for") || is("async")) {
                    TmpNode gen(kinds::other, a.begin, a.begin);
                    gen.add(std::move(a));
                    comprehension(gen);
                    a = std::move(gen);
                }
                args.push_back(std::move(a));
            }
            if (!accept(",")) break;
        }
        expect(")");
        return args;
    }

    TmpNode trailers(TmpNode expr) {
        while (true) {
            std::size_t start = expr.begin;
            if (is("(")) {
                TmpNode call(kinds::call, start, start);
                call.add(std::move(expr));
                for (auto& a : call_arguments()) call.add(std::move(a));
                call.end = prev_end();
                expr = std::move(call);
            } else if (is("[")) {
                TmpNode sub(kinds::other, start, start);
                sub.add(std::move(expr));
                advance();
                while (!is("]")) {
                    if (at(Tok::eof)) throw Recover{};
                    if (!is(":") && !is(",")) sub.add(star_expression());
                    if (!accept(":") && !accept(",")) break;
                }
                expect("]");
                sub.end = prev_end();
                expr = std::move(sub);
            } else if (is(".") && peek().kind == Tok::name) {
                advance();
                advance();
                TmpNode attr(kinds::other, start, prev_end());
                attr.add(std::move(expr));
                attr.end = prev_end();
                expr = std::move(attr);
            } else {
                return expr;
            }
        }
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;
    bool in_for_target_ = false;
    bool in_comprehension_header_ = false;
};

// Python suites have no closing token, so a comment trailing the last
// statement of a block would otherwise fall outside it. Extend blocks over
// trailing comments on the same line as their end, and over following
// comment-only lines indented at least as deep as the block body.
class BlockExtender {
public:
    BlockExtender(std::string_view text, const std::vector<RawComment>& comments)
        : text_(text), comments_(comments), index_(text) {}

    void run(TmpNode& node) {
        for (auto& child : node.children) {
            run(child);
            node.end = std::max(node.end, child.end);
        }
        if (node.kind == kinds::block && !node.children.empty()) extend(node);
    }

private:
    void extend(TmpNode& block) {
        int indent = index_.column_of(block.children.front().begin);
        bool multi_line = index_.line_of(block.children.front().begin) > index_.line_of(block.begin);
        auto it = std::lower_bound(comments_.begin(), comments_.end(), block.end,
                                   [](const RawComment& c, std::size_t off) { return c.begin < off; });
        std::size_t end = block.end;
        for (; it != comments_.end(); ++it) {
            if (!only_space(end, it->begin)) break;
            bool same_line = index_.line_of(it->begin) == index_.line_of(end);
            bool indented = multi_line && index_.column_of(it->begin) >= indent;
            if (!same_line && !indented) break;
            end = it->end;
        }
        block.end = end;
    }

    bool only_space(std::size_t from, std::size_t to) const {
        for (std::size_t i = from; i < to; ++i) {
            if (!std::isspace(static_cast<unsigned char>(text_[i]))) return false;
        }
        return true;
    }

    std::string_view text_;
    const std::vector<RawComment>& comments_;
    LineIndex index_;
};

}  // namespace

ParseOutput parse_python(std::string_view text) {
    ParseOutput out;
    std::vector<Token> tokens;
    Tokenizer(text).run(tokens, out.comments);
    out.root = Parser(std::move(tokens)).module();
    BlockExtender(text, out.comments).run(out.root);
    return out;
}

}  // namespace commentlens::detail
