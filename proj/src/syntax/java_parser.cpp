// Tolerant recursive-descent parser for Java. It recognizes enough of the
// grammar to place statements, declarations and the expression forms that
// the classifiers look at; unknown constructs degrade to `Other` nodes and
// statement-level recovery skips to the next `;` or `}`.

#include <algorithm>
#include <array>
#include <cctype>
#include <string>

#include "commentlens/error.hpp"
#include "parse_tree.hpp"

namespace commentlens::detail {

namespace {

enum class Tok { ident, keyword, number, string, character, op, eof };

struct Token {
    Tok kind;
    std::string_view text;
    std::size_t begin;
    std::size_t end;
};

constexpr std::array<std::string_view, 51> java_keywords = {
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class",
    "const", "continue", "default", "do", "double", "else", "enum", "extends", "final",
    "finally", "float", "for", "goto", "if", "implements", "import", "instanceof", "int",
    "interface", "long", "native", "new", "package", "private", "protected", "public",
    "return", "short", "static", "strictfp", "super", "switch", "synchronized", "this",
    "throw", "throws", "transient", "try", "void", "volatile", "while", "true",
};

bool is_keyword(std::string_view word) {
    if (word == "false" || word == "null") return true;
    return std::find(java_keywords.begin(), java_keywords.end(), word) != java_keywords.end();
}

bool is_primitive(std::string_view word) {
    return word == "int" || word == "long" || word == "short" || word == "byte" ||
           word == "char" || word == "boolean" || word == "float" || word == "double" ||
           word == "void";
}

bool is_modifier(std::string_view word) {
    return word == "public" || word == "private" || word == "protected" || word == "static" ||
           word == "final" || word == "abstract" || word == "native" ||
           word == "synchronized" || word == "transient" || word == "volatile" ||
           word == "strictfp" || word == "default";
}

bool ident_start(unsigned char c) { return std::isalpha(c) || c == '_' || c == '$' || c >= 0x80; }
bool ident_part(unsigned char c) { return std::isalnum(c) || c == '_' || c == '$' || c >= 0x80; }

// Longest first.
constexpr std::array<std::string_view, 31> java_ops = {
    ">>>=", "<<=", ">>=", "...", "->", "::", "++", "--", "&&", "||", "==", "!=", "<=",
    ">=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", "(", ")", "{", "}", "[",
    "]", ";", ",",
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    void run(std::vector<Token>& tokens, std::vector<RawComment>& comments) {
        while (true) {
            skip_space();
            if (pos_ >= text_.size()) break;
            char c = text_[pos_];
            char n = pos_ + 1 < text_.size() ? text_[pos_ + 1] : '\0';
            std::size_t start = pos_;
            if (c == '/' && n == '/') {
                while (pos_ < text_.size() && text_[pos_] != '\n' && text_[pos_] != '\r') ++pos_;
                comments.push_back({start, pos_, CommentStyle::line});
            } else if (c == '/' && n == '*') {
                auto close = text_.find("*/", pos_ + 2);
                if (close == std::string_view::npos) {
                    throw Error(ErrorCode::unparsable_file, "unterminated block comment");
                }
                pos_ = close + 2;
                comments.push_back({start, pos_, CommentStyle::block});
            } else if (ident_start(static_cast<unsigned char>(c))) {
                while (pos_ < text_.size() && ident_part(static_cast<unsigned char>(text_[pos_]))) ++pos_;
                auto word = text_.substr(start, pos_ - start);
                tokens.push_back({is_keyword(word) ? Tok::keyword : Tok::ident, word, start, pos_});
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '.' && std::isdigit(static_cast<unsigned char>(n)))) {
                lex_number();
                tokens.push_back({Tok::number, text_.substr(start, pos_ - start), start, pos_});
            } else if (c == '"') {
                lex_string();
                tokens.push_back({Tok::string, text_.substr(start, pos_ - start), start, pos_});
            } else if (c == '\'') {
                lex_char();
                tokens.push_back({Tok::character, text_.substr(start, pos_ - start), start, pos_});
            } else {
                std::size_t len = 1;
                for (auto op : java_ops) {
                    if (text_.substr(pos_, op.size()) == op) {
                        len = op.size();
                        break;
                    }
                }
                pos_ += len;
                tokens.push_back({Tok::op, text_.substr(start, len), start, pos_});
            }
        }
        tokens.push_back({Tok::eof, {}, text_.size(), text_.size()});
    }

private:
    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    void lex_number() {
        bool hex = text_.substr(pos_, 2) == "0x" || text_.substr(pos_, 2) == "0X";
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' ||
                (c == '.' && pos_ + 1 < text_.size() && text_[pos_ + 1] != '.')) {
                ++pos_;
            } else if ((c == '+' || c == '-') && pos_ > 0) {
                char prev = text_[pos_ - 1];
                bool exponent = hex ? (prev == 'p' || prev == 'P') : (prev == 'e' || prev == 'E');
                if (!exponent) break;
                ++pos_;
            } else {
                break;
            }
        }
    }

    void lex_string() {
        if (text_.substr(pos_, 3) == "\"\"\"") {
            pos_ += 3;
            while (pos_ < text_.size()) {
                if (text_[pos_] == '\\') {
                    pos_ += 2;
                } else if (text_.substr(pos_, 3) == "\"\"\"") {
                    pos_ += 3;
                    return;
                } else {
                    ++pos_;
                }
            }
            throw Error(ErrorCode::unparsable_file, "unterminated text block");
        }
        ++pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\\') {
                pos_ += 2;
            } else if (c == '"') {
                ++pos_;
                return;
            } else if (c == '\n') {
                break;
            } else {
                ++pos_;
            }
        }
        throw Error(ErrorCode::unparsable_file, "unterminated string literal");
    }

    void lex_char() {
        ++pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '\\') {
                pos_ += 2;
            } else if (c == '\'') {
                ++pos_;
                return;
            } else if (c == '\n') {
                break;
            } else {
                ++pos_;
            }
        }
        throw Error(ErrorCode::unparsable_file, "unterminated character literal");
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

// Thrown inside the parser to unwind to the nearest statement boundary.
struct Recover {};

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    TmpNode compilation_unit() {
        TmpNode root(kinds::root, 0, 0);
        while (!at_eof()) {
            std::size_t before = pos_;
            if (is("package") || is("import")) {
                TmpNode n(kinds::other, cur().begin, cur().end);
                skip_until_semicolon(n);
                root.add(std::move(n));
            } else if (is(";")) {
                advance();
            } else {
                root.add(guarded_member());
            }
            if (pos_ == before) root.add(skip_token());
        }
        return root;
    }

private:
    // --- token helpers -------------------------------------------------
    const Token& cur() const { return toks_[pos_]; }
    const Token& peek(std::size_t k = 1) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    bool at_eof() const { return cur().kind == Tok::eof; }
    bool is(std::string_view text) const {
        return cur().kind != Tok::string && cur().kind != Tok::character && cur().text == text;
    }
    bool peek_is(std::size_t k, std::string_view text) const {
        const auto& t = peek(k);
        return t.kind != Tok::string && t.kind != Tok::character && t.text == text;
    }
    bool is_ident() const { return cur().kind == Tok::ident; }
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
        if (accept(text)) return;
        if (at_eof()) throw Error(ErrorCode::unparsable_file, "unexpected end of file");
        throw Recover{};
    }

    TmpNode skip_token() {
        const auto& t = advance();
        return TmpNode(kinds::other, t.begin, t.end);
    }

    // Skips a balanced group starting at the current open bracket.
    void skip_balanced(std::string_view open, std::string_view close) {
        int depth = 0;
        do {
            if (at_eof()) throw Error(ErrorCode::unparsable_file, "unbalanced brackets");
            if (is(open)) ++depth;
            else if (is(close)) --depth;
            advance();
        } while (depth > 0);
    }

    void skip_until_semicolon(TmpNode& node) {
        while (!at_eof() && !is(";") && !is("}")) {
            if (is("{")) skip_balanced("{", "}");
            else if (is("(")) skip_balanced("(", ")");
            else advance();
        }
        accept(";");
        node.end = prev_end();
    }

    // Skips a type-argument list `<...>`; returns false if it is not one.
    bool skip_type_args() {
        if (!is("<")) return true;
        int depth = 0;
        do {
            if (is("<")) ++depth;
            else if (is(">")) --depth;
            else if (is(">>=") || is(">>>=") || is(";") || is("{") || is("}") || at_eof()) return false;
            else if (!(is_ident() || cur().kind == Tok::keyword || is(",") || is(".") ||
                       is("?") || is("&") || is("[") || is("]") || is("@"))) {
                return false;
            }
            advance();
        } while (depth > 0);
        return true;
    }

    void skip_annotation() {
        advance();  // @
        if (is_ident() || cur().kind == Tok::keyword) advance();
        while (is(".") && (peek().kind == Tok::ident)) {
            advance();
            advance();
        }
        if (is("(")) skip_balanced("(", ")");
    }

    // Attempts to skip a type; returns false (position undefined) on failure.
    bool skip_type() {
        while (is("@") && !peek_is(1, "interface")) skip_annotation();
        if (cur().kind == Tok::keyword && is_primitive(cur().text)) {
            advance();
        } else if (is_ident()) {
            advance();
            if (!skip_type_args()) return false;
            while (is(".") && peek().kind == Tok::ident) {
                advance();
                advance();
                if (!skip_type_args()) return false;
            }
        } else if (is("?")) {
            advance();
        } else {
            return false;
        }
        while (is("[") && peek_is(1, "]")) {
            advance();
            advance();
        }
        return true;
    }

    TmpNode type_node() {
        std::size_t start = cur().begin;
        std::size_t save = pos_;
        if (!skip_type()) {
            pos_ = save;
            throw Recover{};
        }
        return TmpNode(kinds::other, start, prev_end());
    }

    // `[final|@Ann]* Type name` followed by one of `= ; , [ :`.
    bool looks_like_declaration() {
        std::size_t save = pos_;
        while (is("final") || (is("@") && !peek_is(1, "interface"))) {
            if (is("@")) skip_annotation();
            else advance();
        }
        bool ok = skip_type() && is_ident();
        if (ok) {
            advance();
            ok = is("=") || is(";") || is(",") || is("[") || is(":") || is(")");
        }
        pos_ = save;
        return ok;
    }

    // --- declarations --------------------------------------------------
    TmpNode guarded_member() {
        std::size_t save = pos_;
        try {
            return member();
        } catch (const Recover&) {
            pos_ = save;
            TmpNode n(kinds::other, cur().begin, cur().end);
            skip_until_semicolon(n);
            return n;
        }
    }

    TmpNode member() {
        std::size_t start = cur().begin;
        if (is("{")) {
            TmpNode init(kinds::other, start, start);
            init.add(block());
            return init;
        }
        if (is("static") && peek_is(1, "{")) {
            advance();
            TmpNode init(kinds::other, start, start);
            init.add(block());
            return init;
        }
        TmpNode mods(kinds::other, start, start);
        bool has_mods = false;
        while (true) {
            if (is("@") && !peek_is(1, "interface")) {
                std::size_t b = cur().begin;
                skip_annotation();
                mods.add(TmpNode(kinds::other, b, prev_end()));
                has_mods = true;
            } else if ((cur().kind == Tok::keyword && is_modifier(cur().text)) ||
                       (is_ident() && (cur().text == "sealed" || cur().text == "non") &&
                        (peek().kind == Tok::ident || peek().kind == Tok::keyword ||
                         peek_is(1, "-")))) {
                if (cur().text == "non") {
                    advance();
                    advance();
                }
                advance();
                mods.end = prev_end();
                has_mods = true;
            } else {
                break;
            }
        }
        if (is("class") || is("interface") || is("enum") || (is("@") && peek_is(1, "interface")) ||
            (is_ident() && cur().text == "record" && peek().kind == Tok::ident)) {
            return type_declaration(start, has_mods ? &mods : nullptr);
        }
        if (is("<")) {
            if (!skip_type_args()) throw Recover{};
        }
        if (is_ident() && peek_is(1, "(")) {
            return method_rest(start, has_mods ? &mods : nullptr, std::nullopt);
        }
        TmpNode type = type_node();
        if (is_ident() && peek_is(1, "(")) {
            return method_rest(start, has_mods ? &mods : nullptr, std::move(type));
        }
        TmpNode field(kinds::variable_declaration, start, start);
        if (has_mods) field.add(std::move(mods));
        field.add(std::move(type));
        declarators(field);
        expect(";");
        field.end = prev_end();
        return field;
    }

    TmpNode method_rest(std::size_t start, TmpNode* mods, std::optional<TmpNode> ret) {
        TmpNode m(kinds::method_declaration, start, start);
        if (mods) m.add(std::move(*mods));
        if (ret) m.add(std::move(*ret));
        m.add(TmpNode(kinds::simple_name, cur().begin, cur().end));
        advance();
        m.add(parameters());
        while (is("[")) {
            advance();
            expect("]");
        }
        if (accept("throws")) {
            m.add(type_node());
            while (accept(",")) m.add(type_node());
        }
        if (is("{")) {
            m.add(block());
        } else if (accept("default")) {
            m.add(expression());
            expect(";");
        } else {
            expect(";");
        }
        m.end = prev_end();
        return m;
    }

    TmpNode parameters() {
        TmpNode params(kinds::other, cur().begin, cur().begin);
        expect("(");
        while (!is(")") && !at_eof()) {
            std::size_t b = cur().begin;
            TmpNode p(kinds::other, b, b);
            while (is("final") || (is("@") && !peek_is(1, "interface"))) {
                if (is("@")) skip_annotation();
                else advance();
            }
            if (is_ident() && cur().text == "this") {
                advance();
            } else {
                p.add(type_node());
                accept("...");
                if (is_ident() || is("this")) {
                    p.add(TmpNode(kinds::simple_name, cur().begin, cur().end));
                    advance();
                }
                while (is("[")) {
                    advance();
                    expect("]");
                }
            }
            p.end = prev_end();
            params.add(std::move(p));
            if (!accept(",")) break;
        }
        expect(")");
        params.end = prev_end();
        return params;
    }

    TmpNode type_declaration(std::size_t start, TmpNode* mods) {
        TmpNode decl(kinds::other, start, start);
        if (mods) decl.add(std::move(*mods));
        bool is_enum = is("enum");
        bool is_record = cur().text == "record";
        if (is("@")) advance();
        advance();  // class / interface / enum / record
        if (is_ident()) {
            decl.add(TmpNode(kinds::simple_name, cur().begin, cur().end));
            advance();
        }
        if (is("<") && !skip_type_args()) throw Recover{};
        if (is_record && is("(")) decl.add(parameters());
        while (!is("{") && !at_eof() && !is(";")) {
            if (is("<")) {
                if (!skip_type_args()) throw Recover{};
            } else {
                advance();
            }
        }
        decl.add(class_body(is_enum));
        decl.end = prev_end();
        return decl;
    }

    TmpNode class_body(bool is_enum) {
        TmpNode body(kinds::other, cur().begin, cur().begin);
        expect("{");
        if (is_enum) {
            while (!is(";") && !is("}") && !at_eof()) {
                std::size_t b = cur().begin;
                TmpNode constant(kinds::other, b, b);
                while (is("@")) skip_annotation();
                if (is_ident()) {
                    constant.add(TmpNode(kinds::simple_name, cur().begin, cur().end));
                    advance();
                }
                if (is("(")) {
                    for (auto& a : arguments()) constant.add(std::move(a));
                }
                if (is("{")) constant.add(class_body(false));
                constant.end = prev_end();
                body.add(std::move(constant));
                if (!accept(",")) break;
            }
            accept(";");
        }
        while (!is("}")) {
            if (at_eof()) throw Error(ErrorCode::unparsable_file, "unterminated class body");
            std::size_t before = pos_;
            if (accept(";")) continue;
            body.add(guarded_member());
            if (pos_ == before) body.add(skip_token());
        }
        advance();
        body.end = prev_end();
        return body;
    }

    void declarators(TmpNode& decl) {
        do {
            if (!is_ident()) throw Recover{};
            decl.add(TmpNode(kinds::simple_name, cur().begin, cur().end));
            advance();
            while (is("[")) {
                advance();
                expect("]");
            }
            if (accept("=")) decl.add(is("{") ? array_initializer() : expression());
        } while (accept(","));
    }

    // --- statements ----------------------------------------------------
    TmpNode block() {
        TmpNode b(kinds::block, cur().begin, cur().begin);
        expect("{");
        while (!is("}")) {
            if (at_eof()) throw Error(ErrorCode::unparsable_file, "unterminated block");
            std::size_t before = pos_;
            b.add(guarded_statement());
            if (pos_ == before) b.add(skip_token());
        }
        advance();
        b.end = prev_end();
        return b;
    }

    TmpNode guarded_statement() {
        std::size_t save = pos_;
        try {
            return statement();
        } catch (const Recover&) {
            pos_ = save;
            TmpNode n(kinds::other, cur().begin, cur().end);
            skip_until_semicolon(n);
            return n;
        }
    }

    TmpNode statement() {
        std::size_t start = cur().begin;
        if (is("{")) return block();
        if (is(";")) {
            advance();
            return TmpNode(kinds::other, start, prev_end());
        }
        if (is("if")) return if_statement();
        if (is("for")) return for_statement();
        if (is("while")) {
            TmpNode n(kinds::other, start, start);
            advance();
            n.add(paren_expression());
            n.add(guarded_statement());
            n.end = prev_end();
            return n;
        }
        if (is("do")) {
            TmpNode n(kinds::other, start, start);
            advance();
            n.add(guarded_statement());
            expect("while");
            n.add(paren_expression());
            expect(";");
            n.end = prev_end();
            return n;
        }
        if (is("try")) return try_statement();
        if (is("switch")) {
            TmpNode n = switch_construct();
            accept(";");
            n.end = prev_end();
            return n;
        }
        if (is("return")) {
            TmpNode n(kinds::return_statement, start, start);
            advance();
            if (!is(";")) n.add(expression());
            expect(";");
            n.end = prev_end();
            return n;
        }
        if (is("throw") || is("assert") ||
            (is_ident() && cur().text == "yield" && !peek_is(1, "=") && !peek_is(1, "(") &&
             !peek_is(1, "."))) {
            TmpNode n(kinds::other, start, start);
            advance();
            n.add(expression());
            if (accept(":")) n.add(expression());
            expect(";");
            n.end = prev_end();
            return n;
        }
        if (is("break") || is("continue")) {
            advance();
            if (is_ident()) advance();
            expect(";");
            return TmpNode(kinds::other, start, prev_end());
        }
        if (is("synchronized") && peek_is(1, "(")) {
            TmpNode n(kinds::other, start, start);
            advance();
            n.add(paren_expression());
            n.add(block());
            n.end = prev_end();
            return n;
        }
        if (is("class") || is("interface") || is("enum") || is("abstract") || is("static") ||
            (is_ident() && cur().text == "record" && peek().kind == Tok::ident && peek_is(2, "(")) ||
            ((is("final") || is("@")) && !looks_like_declaration())) {
            return member();
        }
        if (is_ident() && peek_is(1, ":") ) {
            TmpNode n(kinds::other, start, start);
            advance();
            advance();
            n.add(guarded_statement());
            n.end = prev_end();
            return n;
        }
        if (looks_like_declaration()) {
            TmpNode n = local_declaration();
            expect(";");
            n.end = prev_end();
            return n;
        }
        TmpNode n(kinds::expression_statement, start, start);
        n.add(expression());
        expect(";");
        n.end = prev_end();
        return n;
    }

    TmpNode local_declaration() {
        std::size_t start = cur().begin;
        TmpNode n(kinds::variable_declaration, start, start);
        while (is("final") || is("@")) {
            std::size_t b = cur().begin;
            if (is("@")) skip_annotation();
            else advance();
            n.add(TmpNode(kinds::other, b, prev_end()));
        }
        n.add(type_node());
        declarators(n);
        n.end = prev_end();
        return n;
    }

    TmpNode paren_expression() {
        expect("(");
        TmpNode e = expression();
        expect(")");
        return e;
    }

    TmpNode if_statement() {
        TmpNode n(kinds::if_statement, cur().begin, cur().begin);
        advance();
        n.add(paren_expression());
        n.add(guarded_statement());
        if (accept("else")) n.add(guarded_statement());
        n.end = prev_end();
        return n;
    }

    TmpNode for_statement() {
        TmpNode n(kinds::for_statement, cur().begin, cur().begin);
        advance();
        expect("(");
        if (looks_like_declaration()) {
            TmpNode decl(kinds::other, cur().begin, cur().begin);
            while (is("final") || is("@")) {
                if (is("@")) skip_annotation();
                else advance();
            }
            decl.add(type_node());
            if (is_ident() && peek_is(1, ":")) {
                decl.add(TmpNode(kinds::simple_name, cur().begin, cur().end));
                advance();
                decl.end = prev_end();
                n.add(std::move(decl));
                advance();  // :
                n.add(expression());
                expect(")");
                n.add(guarded_statement());
                n.end = prev_end();
                return n;
            }
            declarators(decl);
            decl.end = prev_end();
            n.add(std::move(decl));
        } else {
            while (!is(";") && !at_eof()) {
                n.add(expression());
                if (!accept(",")) break;
            }
        }
        expect(";");
        if (!is(";")) n.add(expression());
        expect(";");
        while (!is(")") && !at_eof()) {
            n.add(expression());
            if (!accept(",")) break;
        }
        expect(")");
        n.add(guarded_statement());
        n.end = prev_end();
        return n;
    }

    TmpNode try_statement() {
        TmpNode n(kinds::other, cur().begin, cur().begin);
        advance();
        if (is("(")) {
            TmpNode res(kinds::other, cur().begin, cur().begin);
            advance();
            while (!is(")") && !at_eof()) {
                if (looks_like_declaration()) res.add(local_declaration());
                else res.add(expression());
                if (!accept(";")) break;
            }
            expect(")");
            res.end = prev_end();
            n.add(std::move(res));
        }
        n.add(block());
        while (is("catch")) {
            TmpNode c(kinds::catch_clause, cur().begin, cur().begin);
            advance();
            expect("(");
            TmpNode param(kinds::other, cur().begin, cur().begin);
            while (is("final") || is("@")) {
                if (is("@")) skip_annotation();
                else advance();
            }
            param.add(type_node());
            while (accept("|")) param.add(type_node());
            if (is_ident()) {
                param.add(TmpNode(kinds::simple_name, cur().begin, cur().end));
                advance();
            }
            param.end = prev_end();
            c.add(std::move(param));
            expect(")");
            c.add(block());
            c.end = prev_end();
            n.add(std::move(c));
        }
        if (accept("finally")) n.add(block());
        n.end = prev_end();
        return n;
    }

    TmpNode switch_construct() {
        TmpNode n(kinds::other, cur().begin, cur().begin);
        advance();
        n.add(paren_expression());
        expect("{");
        while (!is("}")) {
            if (at_eof()) throw Error(ErrorCode::unparsable_file, "unterminated switch");
            std::size_t before = pos_;
            if (is("case") || is("default")) {
                TmpNode label(kinds::other, cur().begin, cur().begin);
                advance();
                int depth = 0;
                while (!at_eof() && !(depth == 0 && (is(":") || is("->")))) {
                    if (is("(") || is("[") || is("{")) ++depth;
                    else if (is(")") || is("]") || is("}")) --depth;
                    if (depth < 0) throw Recover{};
                    advance();
                }
                bool arrow = is("->");
                advance();
                label.end = prev_end();
                n.add(std::move(label));
                if (arrow) {
                    if (is("{")) {
                        n.add(block());
                    } else if (is("throw")) {
                        n.add(guarded_statement());
                    } else {
                        TmpNode s(kinds::expression_statement, cur().begin, cur().begin);
                        s.add(expression());
                        expect(";");
                        s.end = prev_end();
                        n.add(std::move(s));
                    }
                }
            } else {
                n.add(guarded_statement());
            }
            if (pos_ == before) n.add(skip_token());
        }
        advance();
        n.end = prev_end();
        return n;
    }

    // --- expressions ---------------------------------------------------
    static int binary_precedence(std::string_view op) {
        if (op == "||") return 3;
        if (op == "&&") return 4;
        if (op == "|") return 5;
        if (op == "^") return 6;
        if (op == "&") return 7;
        if (op == "==" || op == "!=") return 8;
        if (op == "<" || op == ">" || op == "<=" || op == ">=" || op == "instanceof") return 9;
        if (op == "<<" || op == ">>" || op == ">>>") return 10;
        if (op == "+" || op == "-") return 11;
        if (op == "*" || op == "/" || op == "%") return 12;
        return -1;
    }

    static bool is_assignment(std::string_view op) {
        return op == "=" || op == "+=" || op == "-=" || op == "*=" || op == "/=" || op == "%=" ||
               op == "&=" || op == "|=" || op == "^=" || op == "<<=" || op == ">>=" ||
               op == ">>>=";
    }

    // Current binary operator, folding adjacent `>` tokens into shifts.
    std::string_view binary_operator(std::size_t& width) const {
        width = 1;
        if (cur().kind != Tok::op && !is("instanceof")) return {};
        if (is(">")) {
            if (peek_is(1, ">") && peek().begin == cur().end) {
                if (peek_is(2, ">") && peek(2).begin == peek().end) {
                    width = 3;
                    return ">>>";
                }
                width = 2;
                return ">>";
            }
        }
        return cur().text;
    }

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

    TmpNode expression() {
        DepthGuard guard(depth_);
        TmpNode lhs = ternary();
        if (cur().kind == Tok::op && is_assignment(cur().text)) {
            advance();
            TmpNode rhs = is("{") ? array_initializer() : expression();
            TmpNode n(kinds::other, lhs.begin, lhs.begin);
            n.add(std::move(lhs));
            n.add(std::move(rhs));
            lhs = std::move(n);
        }
        return lhs;
    }

    TmpNode ternary() {
        TmpNode cond = binary(3);
        if (!is("?")) return cond;
        advance();
        TmpNode n(kinds::other, cond.begin, cond.begin);
        n.add(std::move(cond));
        n.add(expression());
        expect(":");
        n.add(expression());
        return n;
    }

    TmpNode binary(int min_prec) {
        TmpNode lhs = unary();
        while (true) {
            std::size_t width = 1;
            auto op = binary_operator(width);
            int prec = binary_precedence(op);
            if (prec < min_prec || prec < 0) break;
            for (std::size_t i = 0; i < width; ++i) advance();
            TmpNode n(kinds::other, lhs.begin, lhs.begin);
            n.add(std::move(lhs));
            if (op == "instanceof") {
                accept("final");
                n.add(type_node());
                if (is_ident()) {
                    n.add(TmpNode(kinds::simple_name, cur().begin, cur().end));
                    advance();
                } else if (is("(")) {
                    skip_balanced("(", ")");
                    n.end = prev_end();
                }
            } else {
                n.add(binary(prec + 1));
            }
            lhs = std::move(n);
        }
        return lhs;
    }

    bool looks_like_cast() {
        // `(` already current.
        std::size_t save = pos_;
        advance();
        bool primitive = cur().kind == Tok::keyword && is_primitive(cur().text);
        bool ok = skip_type();
        while (ok && is("&")) {
            advance();
            ok = skip_type();
        }
        ok = ok && is(")");
        if (ok) {
            advance();
            const auto& t = cur();
            if (primitive) {
                ok = t.kind != Tok::eof && !is(")") && !is(";") && !is(",");
            } else {
                ok = t.kind == Tok::ident || t.kind == Tok::number || t.kind == Tok::string ||
                     t.kind == Tok::character || is("(") || is("!") || is("~") || is("this") ||
                     is("super") || is("new") || is("true") || is("false") || is("null") ||
                     is("switch");
            }
        }
        pos_ = save;
        return ok;
    }

    bool looks_like_lambda_params() {
        // `(` already current; matching `)` followed by `->`.
        std::size_t save = pos_;
        int depth = 0;
        bool ok = false;
        while (!at_eof()) {
            if (is("(")) ++depth;
            else if (is(")")) {
                if (--depth == 0) {
                    advance();
                    ok = is("->");
                    break;
                }
            } else if (is(";") || is("{") || is("}")) {
                break;
            }
            advance();
        }
        pos_ = save;
        return ok;
    }

    TmpNode lambda(std::size_t start) {
        TmpNode n(kinds::other, start, prev_end());
        expect("->");
        n.add(is("{") ? block() : expression());
        return n;
    }

    TmpNode unary() {
        std::size_t start = cur().begin;
        if (is("+") || is("-") || is("++") || is("--") || is("!") || is("~")) {
            advance();
            TmpNode n(kinds::other, start, start);
            n.add(unary());
            return n;
        }
        if (is("(") && looks_like_cast()) {
            TmpNode n(kinds::other, start, start);
            advance();
            n.add(type_node());
            while (accept("&")) n.add(type_node());
            expect(")");
            n.add(unary());
            return n;
        }
        return postfix(primary());
    }

    std::vector<TmpNode> arguments() {
        std::vector<TmpNode> args;
        expect("(");
        while (!is(")")) {
            if (at_eof()) throw Error(ErrorCode::unparsable_file, "unterminated argument list");
            args.push_back(expression());
            if (!accept(",")) break;
        }
        expect(")");
        return args;
    }

    TmpNode invocation(std::optional<TmpNode> receiver, std::size_t start) {
        TmpNode call(kinds::method_invocation, start, start);
        if (receiver) call.add(std::move(*receiver));
        call.add(TmpNode(kinds::simple_name, cur().begin, cur().end));
        advance();
        for (auto& a : arguments()) call.add(std::move(a));
        call.end = prev_end();
        return call;
    }

    TmpNode primary() {
        const auto& t = cur();
        std::size_t start = t.begin;
        switch (t.kind) {
        case Tok::number:
            advance();
            return TmpNode(kinds::number_literal, start, t.end);
        case Tok::string:
            advance();
            return TmpNode(kinds::string_literal, start, t.end);
        case Tok::character:
            advance();
            return TmpNode(kinds::other, start, t.end);
        case Tok::ident:
            if (peek_is(1, "->")) {
                advance();
                return lambda(start);
            }
            if (peek_is(1, "(")) return invocation(std::nullopt, start);
            advance();
            return TmpNode(kinds::simple_name, start, t.end);
        case Tok::eof:
            throw Error(ErrorCode::unparsable_file, "unexpected end of file in expression");
        default:
            break;
        }
        if (is("(")) {
            if (looks_like_lambda_params()) {
                skip_balanced("(", ")");
                return lambda(start);
            }
            advance();
            TmpNode n(kinds::other, start, start);
            n.add(expression());
            expect(")");
            n.end = prev_end();
            return n;
        }
        if (is("true") || is("false") || is("null")) {
            advance();
            return TmpNode(kinds::other, start, prev_end());
        }
        if (is("this") || is("super")) {
            advance();
            if (is("(")) {
                TmpNode call(kinds::method_invocation, start, start);
                for (auto& a : arguments()) call.add(std::move(a));
                call.end = prev_end();
                return call;
            }
            return TmpNode(kinds::other, start, prev_end());
        }
        if (is("new")) return creation();
        if (is("switch")) return switch_construct();
        if (is("{")) return array_initializer();
        if (cur().kind == Tok::keyword && is_primitive(cur().text)) {
            TmpNode n = type_node();
            return n;
        }
        if (is("@")) {
            skip_annotation();
            return TmpNode(kinds::other, start, prev_end());
        }
        throw Recover{};
    }

    TmpNode postfix(TmpNode expr) {
        while (true) {
            std::size_t start = expr.begin;
            if (is(".")) {
                advance();
                if (is("<")) {
                    if (!skip_type_args()) throw Recover{};
                }
                if ((is_ident() || is("this") || is("super")) && peek_is(1, "(")) {
                    expr = invocation(std::move(expr), start);
                } else if (is("new")) {
                    TmpNode n(kinds::other, start, start);
                    n.add(std::move(expr));
                    n.add(creation());
                    expr = std::move(n);
                } else if (is_ident() || cur().kind == Tok::keyword) {
                    TmpNode n(kinds::other, start, start);
                    n.add(std::move(expr));
                    if (is_ident()) n.add(TmpNode(kinds::simple_name, cur().begin, cur().end));
                    advance();
                    n.end = prev_end();
                    expr = std::move(n);
                } else {
                    throw Recover{};
                }
            } else if (is("[")) {
                advance();
                TmpNode n(kinds::other, start, start);
                n.add(std::move(expr));
                if (!is("]")) n.add(expression());
                expect("]");
                n.end = prev_end();
                expr = std::move(n);
            } else if (is("::")) {
                advance();
                TmpNode n(kinds::other, start, start);
                n.add(std::move(expr));
                if (is("<") && !skip_type_args()) throw Recover{};
                advance();
                n.end = prev_end();
                expr = std::move(n);
            } else if (is("++") || is("--")) {
                advance();
                TmpNode n(kinds::other, start, start);
                n.add(std::move(expr));
                n.end = prev_end();
                expr = std::move(n);
            } else if (is("<") && expr.kind == kinds::simple_name) {
                // Generic type used as an expression, e.g. `List<String>::new`.
                std::size_t save = pos_;
                if (skip_type_args() && (is("::") || is("["))) {
                    expr.end = prev_end();
                    expr.kind = kinds::other;
                } else {
                    pos_ = save;
                    return expr;
                }
            } else {
                return expr;
            }
        }
    }

    TmpNode creation() {
        std::size_t start = cur().begin;
        advance();  // new
        TmpNode n(kinds::other, start, start);
        if (is("<") && !skip_type_args()) throw Recover{};
        std::size_t tb = cur().begin;
        while (is("@")) skip_annotation();
        if (cur().kind == Tok::keyword && is_primitive(cur().text)) {
            advance();
        } else if (is_ident()) {
            advance();
            if (!skip_type_args()) throw Recover{};
            while (is(".") && peek().kind == Tok::ident) {
                advance();
                advance();
                if (!skip_type_args()) throw Recover{};
            }
        } else {
            throw Recover{};
        }
        n.add(TmpNode(kinds::other, tb, prev_end()));
        if (is("[")) {
            while (is("[")) {
                advance();
                if (!is("]")) n.add(expression());
                expect("]");
            }
            if (is("{")) n.add(array_initializer());
        } else {
            for (auto& a : arguments()) n.add(std::move(a));
            if (is("{")) n.add(class_body(false));
        }
        n.end = prev_end();
        return n;
    }

    TmpNode array_initializer() {
        TmpNode n(kinds::array_initializer, cur().begin, cur().begin);
        expect("{");
        while (!is("}")) {
            if (at_eof()) throw Error(ErrorCode::unparsable_file, "unterminated initializer");
            n.add(is("{") ? array_initializer() : expression());
            if (!accept(",")) break;
        }
        expect("}");
        n.end = prev_end();
        return n;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;
};

}  // namespace

ParseOutput parse_java(std::string_view text) {
    ParseOutput out;
    std::vector<Token> tokens;
    Lexer(text).run(tokens, out.comments);
    out.root = Parser(std::move(tokens)).compilation_unit();
    return out;
}

}  // namespace commentlens::detail
