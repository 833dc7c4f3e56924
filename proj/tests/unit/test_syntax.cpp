#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "commentlens/error.hpp"
#include "commentlens/syntax.hpp"

using namespace commentlens;

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool has_kind(const ParsedFile& f, std::string_view kind) {
    for (const auto& n : f.nodes()) {
        if (n.kind == kind) return true;
    }
    return false;
}

void check_tree_invariants(const ParsedFile& f) {
    for (const auto& n : f.nodes()) {
        CHECK(n.span.start_offset <= n.span.end_offset);
        CHECK(n.span.start_line <= n.span.end_line);
        CHECK(kinds::is_known(n.kind));
        const SyntaxNode* prev = nullptr;
        for (NodeId c : n.children) {
            const auto& child = f.node(c);
            CHECK(n.span.contains(child.span));
            if (prev) CHECK(prev->span.end_offset <= child.span.start_offset);
            prev = &child;
        }
    }
    for (std::size_t i = 0; i < f.comments().size(); ++i) {
        const auto& c = f.comments()[i];
        CHECK(f.slice(c.span) == c.raw_text);
        if (i > 0) CHECK(f.comments()[i - 1].span.end_offset <= c.span.start_offset);
        for (const auto& n : f.nodes()) {
            if (n.kind == kinds::string_literal || n.kind == kinds::str) CHECK_FALSE(n.span.overlaps(c.span));
        }
        auto nb = neighbor_query(f, c.span);
        CHECK(f.node(nb.parent).span.contains(c.span));
        if (nb.left) CHECK(f.node(*nb.left).span.end_offset <= c.span.start_offset);
        if (nb.right) CHECK(c.span.end_offset <= f.node(*nb.right).span.start_offset);
    }
}

const SyntaxNode* node_with_text(const ParsedFile& f, std::string_view kind, std::string_view text) {
    for (const auto& n : f.nodes()) {
        if (n.kind == kind && f.slice(n.span) == text) return &n;
    }
    return nullptr;
}

}  // namespace

TEST_CASE("java one-line declaration with trailing comment") {
    auto f = parse_source("int x = 1; // one", Language::java, "a.java");
    CHECK(has_kind(f, kinds::variable_declaration));
    REQUIRE(f.comments().size() == 1);
    CHECK(f.comments()[0].style == CommentStyle::line);
    CHECK(f.comments()[0].raw_text == "// one");
    CHECK(f.comments()[0].file_id == "a.java");
}

TEST_CASE("empty file has an empty root and no comments") {
    for (auto lang : {Language::java, Language::python}) {
        auto f = parse_source("", lang);
        CHECK(f.root().kind == kinds::root);
        CHECK(f.root().span.start_offset == 0);
        CHECK(f.root().span.end_offset == 0);
        CHECK(f.comments().empty());
    }
}

TEST_CASE("python comment recovered from the token stream") {
    auto f = parse_source("x = 0  # init", Language::python);
    REQUIRE(f.comments().size() == 1);
    CHECK(f.comments()[0].raw_text == "# init");
    CHECK(f.comments()[0].span.start_col == 7);
    CHECK(f.comments()[0].span.start_line == 1);
    auto nb = neighbor_query(f, f.comments()[0].span);
    REQUIRE(nb.left);
    CHECK(f.node(*nb.left).kind == kinds::variable_declaration);
}

TEST_CASE("left neighbor of a trailing comment is the whole statement") {
    const char* src =
        "class T {\n"
        "  void run() {\n"
        "    thread.join();  // Let the job finish.\n"
        "  }\n"
        "}\n";
    auto f = parse_source(src, Language::java);
    REQUIRE(f.comments().size() == 1);
    auto nb = neighbor_query(f, f.comments()[0].span);
    REQUIRE(nb.left);
    CHECK(f.node(*nb.left).kind == kinds::expression_statement);
    CHECK(f.slice(f.node(*nb.left).span) == "thread.join();");
    CHECK(f.node(nb.parent).kind == kinds::block);
}

TEST_CASE("left neighbor inside an argument list is the argument") {
    const char* src =
        "class T {\n"
        "  void run() {\n"
        "    c.query(uri, DOWNLOAD, null /* selection */);\n"
        "  }\n"
        "}\n";
    auto f = parse_source(src, Language::java);
    REQUIRE(f.comments().size() == 1);
    CHECK(f.comments()[0].style == CommentStyle::block);
    auto nb = neighbor_query(f, f.comments()[0].span);
    REQUIRE(nb.left);
    CHECK(f.slice(f.node(*nb.left).span) == "null");
    CHECK(f.node(nb.parent).kind == kinds::method_invocation);
    CHECK_FALSE(nb.right);
}

TEST_CASE("comment on the first line has no left neighbor") {
    auto f = parse_source("// header\nclass A {}\n", Language::java);
    auto nb = neighbor_query(f, f.comments()[0].span);
    CHECK_FALSE(nb.left);
    CHECK(nb.parent == f.root_id());
    REQUIRE(nb.right);
    CHECK(f.slice(f.node(*nb.right).span) == "class A {}");
}

TEST_CASE("right neighbor is the longest element starting after the comment") {
    const char* src =
        "class T {\n"
        "  void copy(int[] a, int[] b) {\n"
        "    // Copy the array.\n"
        "    for (int i = 0; i < a.length; i++) {\n"
        "      b[i] = a[i];\n"
        "    }\n"
        "  }\n"
        "}\n";
    auto f = parse_source(src, Language::java);
    auto nb = neighbor_query(f, f.comments()[0].span);
    REQUIRE(nb.right);
    CHECK(f.node(*nb.right).kind == kinds::for_statement);
    CHECK(f.node(*nb.right).span.end_line == 6);
}

TEST_CASE("comment after an opening brace sits inside the then-block") {
    const char* src =
        "class T {\n"
        "  void f(Object obj) {\n"
        "    if (obj == null) { // error\n"
        "      return;\n"
        "    }\n"
        "  }\n"
        "}\n";
    auto f = parse_source(src, Language::java);
    auto nb = neighbor_query(f, f.comments()[0].span);
    CHECK(f.node(nb.parent).kind == kinds::block);
    CHECK(f.node(*f.node(nb.parent).parent).kind == kinds::if_statement);
    CHECK_FALSE(nb.left);
    REQUIRE(nb.right);
    CHECK(f.node(*nb.right).kind == kinds::return_statement);
}

TEST_CASE("python trailing comment stays inside the enclosing block") {
    const char* src =
        "def f():\n"
        "    if a:\n"
        "        x = 1  # set x\n"
        "        # still in the if\n"
        "    # back in f\n"
        "# module level\n"
        "y = 2\n";
    auto f = parse_source(src, Language::python);
    REQUIRE(f.comments().size() == 4);
    auto first = neighbor_query(f, f.comments()[0].span);
    REQUIRE(first.left);
    CHECK(f.node(*first.left).kind == kinds::variable_declaration);
    CHECK(f.node(first.parent).kind == kinds::block);
    auto second = neighbor_query(f, f.comments()[1].span);
    CHECK(f.node(*f.node(second.parent).parent).kind == kinds::if_);
    auto third = neighbor_query(f, f.comments()[2].span);
    CHECK(f.node(*f.node(third.parent).parent).kind == kinds::function_def);
    auto fourth = neighbor_query(f, f.comments()[3].span);
    CHECK(fourth.parent == f.root_id());
    REQUIRE(fourth.left);
    CHECK(f.node(*fourth.left).kind == kinds::function_def);
    REQUIRE(fourth.right);
    CHECK(f.node(*fourth.right).kind == kinds::variable_declaration);
}

TEST_CASE("python header-line comment belongs to the suite") {
    auto f = parse_source("if obj is None:  # error\n    return\n", Language::python);
    auto nb = neighbor_query(f, f.comments()[0].span);
    CHECK(f.node(nb.parent).kind == kinds::block);
    CHECK(f.node(*f.node(nb.parent).parent).kind == kinds::if_);
    CHECK_FALSE(nb.left);
}

TEST_CASE("python node kinds") {
    const char* src =
        "import os\n"
        "@decorator\n"
        "def f(a, b=2, *args, **kw) -> int:\n"
        "    '''doc'''\n"
        "    t = (1, 2)\n"
        "    print(\"x\", os.path.join(a, b))\n"
        "    for i in range(3):\n"
        "        pass\n"
        "    try:\n"
        "        g()\n"
        "    except ValueError as e:\n"
        "        return [x for x in t if x]\n";
    auto f = parse_source(src, Language::python);
    for (auto k : {kinds::function_def, kinds::tuple, kinds::call, kinds::for_, kinds::name,
                   kinds::str, kinds::num, kinds::catch_clause, kinds::return_statement,
                   kinds::expr, kinds::variable_declaration, kinds::block}) {
        CHECK_MESSAGE(has_kind(f, k), k);
    }
    CHECK(node_with_text(f, kinds::tuple, "(1, 2)") != nullptr);
    CHECK(node_with_text(f, kinds::str, "\"x\"") != nullptr);
    check_tree_invariants(f);
}

TEST_CASE("java node kinds") {
    const char* src =
        "package a.b;\n"
        "import java.util.*;\n"
        "public class Foo<T> extends Bar implements Baz {\n"
        "  private static final int[] XS = {1, 2, 3};\n"
        "  @Override\n"
        "  public String toString() { return \"foo\" + XS.length; }\n"
        "  void g(List<String> names) throws IOException {\n"
        "    Map<String, List<Integer>> m = new HashMap<>();\n"
        "    for (String n : names) { System.out.println(n); }\n"
        "    try (Reader r = open()) {\n"
        "      r.read();\n"
        "    } catch (IOException | RuntimeException e) {\n"
        "      throw new IllegalStateException(e);\n"
        "    } finally { close(); }\n"
        "    Runnable run = () -> { doIt(); };\n"
        "    int k = (int) x >> 2;\n"
        "    switch (k) { case 1: k++; break; default: k--; }\n"
        "    names.forEach(s -> s.trim());\n"
        "    Object o = flag ? a : b;\n"
        "    if (o instanceof String s && s.isEmpty()) { k = 0; } else if (k > 1) k = 1; else k = 2;\n"
        "  }\n"
        "  enum Color { RED, GREEN(1) { void f() {} }; Color() {} Color(int x) {} }\n"
        "}\n";
    auto f = parse_source(src, Language::java);
    for (auto k : {kinds::method_declaration, kinds::array_initializer, kinds::return_statement,
                   kinds::string_literal, kinds::variable_declaration, kinds::for_statement,
                   kinds::method_invocation, kinds::catch_clause, kinds::if_statement,
                   kinds::expression_statement, kinds::number_literal, kinds::simple_name}) {
        CHECK_MESSAGE(has_kind(f, k), k);
    }
    CHECK(node_with_text(f, kinds::array_initializer, "{1, 2, 3}") != nullptr);
    CHECK(node_with_text(f, kinds::method_invocation, "System.out.println(n)") != nullptr);
    CHECK(node_with_text(f, kinds::variable_declaration,
                         "Map<String, List<Integer>> m = new HashMap<>();") != nullptr);
    check_tree_invariants(f);
}

TEST_CASE("unterminated constructs make the file unparsable") {
    CHECK_THROWS_AS(parse_source("class A { /* open", Language::java), Error);
    CHECK_THROWS_AS(parse_source("class A { void f() {", Language::java), Error);
    CHECK_THROWS_AS(parse_source("x = '''never closed\n", Language::python), Error);
    CHECK_THROWS_AS(parse_source("def f():\n        a = 1\n    b = 2\n", Language::python), Error);
    try {
        parse_source("x = (1,\n", Language::python);
        FAIL("expected throw");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::unparsable_file);
    }
}

TEST_CASE("invalid utf-8 is replaced, not rejected") {
    std::string bad = "// caf\xE9\nclass A {}\n";
    auto f = parse_source(bad, Language::java);
    CHECK(f.comments()[0].raw_text == "// caf\xEF\xBF\xBD");
}

TEST_CASE("tabs count as one column") {
    auto f = parse_source("\t\tx = 1  # c\n", Language::python);
    CHECK(f.comments()[0].span.start_col == 9);
}

TEST_CASE("enumerate_comments orders by file then offset") {
    std::vector<ParsedFile> files;
    files.push_back(parse_source("/* b */ int y; // c\n", Language::java, "b.java"));
    files.push_back(parse_source("// a\nint x;\n", Language::java, "a.java"));
    files.push_back(parse_source("int z;\n", Language::java, "c.java"));
    auto all = enumerate_comments(files);
    REQUIRE(all.size() == 3);
    CHECK(all[0].token->raw_text == "// a");
    CHECK(all[1].token->raw_text == "/* b */");
    CHECK(all[2].token->raw_text == "// c");
    CHECK(all[1].file->file_id() == "b.java");
}

TEST_CASE("parsing is deterministic and fixture trees are well formed") {
    namespace fs = std::filesystem;
    int parsed = 0;
    for (const auto& entry : fs::recursive_directory_iterator(COMMENTLENS_FIXTURES)) {
        auto ext = entry.path().extension();
        if (ext != ".java" && ext != ".py") continue;
        if (entry.path().filename() == "Broken.java") continue;  // ingest's unparsable case
        auto lang = ext == ".java" ? Language::java : Language::python;
        auto text = read_file(entry.path());
        auto a = parse_source(text, lang, entry.path().filename().string());
        auto b = parse_source(text, lang, entry.path().filename().string());
        REQUIRE(a.nodes().size() == b.nodes().size());
        for (std::size_t i = 0; i < a.nodes().size(); ++i) {
            CHECK(a.nodes()[i].kind == b.nodes()[i].kind);
            CHECK(a.nodes()[i].span == b.nodes()[i].span);
        }
        INFO(entry.path().string());
        check_tree_invariants(a);
        ++parsed;
    }
    CHECK(parsed > 0);
}
