#include <doctest.h>

#include <fstream>
#include <sstream>

#include "../support/synth_corpus.hpp"
#include "commentlens/category.hpp"
#include "commentlens/error.hpp"
#include "commentlens/target.hpp"

using namespace commentlens;
using extent::IobTag;

namespace {

ParsedFile load(const std::string& name) {
    std::ifstream in(std::string(COMMENTLENS_FIXTURES "/target/") + name);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_source(ss.str(), Language::java, name);
}

std::vector<extent::CommentExtent> extents_of(const ParsedFile& f) { return extent::merge_extents(f, extent::rule_tags(f)); }

}  // namespace

TEST_CASE("label names round trip") {
    for (auto l : all_target_labels()) CHECK(parse_target_label(to_string(l)) == l);
    CHECK(all_target_labels().size() == 4);
    CHECK(parse_target_label("In-Place") == TargetLabel::in_place);
    CHECK_FALSE(parse_target_label("Above"));
}

TEST_CASE("statement on the left") {
    auto f = load("JobRunner.java");
    auto e = extents_of(f);
    REQUIRE(e.size() == 1);
    CHECK(heuristic_target(f, e[0]) == TargetLabel::left);
    auto r = resolve_target_span(f, e[0], TargetLabel::left);
    REQUIRE(r.span);
    CHECK(f.slice(*r.span) == "thread.join();");
    CHECK(r.node_kind == "ExpressionStatement");
    CHECK(r.span->start_line == 5);
    CHECK(r.span->start_col == 8);
    CHECK_FALSE(r.distant);
}

TEST_CASE("inline block comment targets only the argument") {
    auto f = load("Query.java");
    auto e = extents_of(f);
    REQUIRE(e.size() == 1);
    CHECK(heuristic_target(f, e[0]) == TargetLabel::left);
    auto r = resolve_target_span(f, e[0], TargetLabel::left);
    REQUIRE(r.span);
    CHECK(f.slice(*r.span) == "null");
}

TEST_CASE("for block on the right") {
    auto f = load("ArrayCopy.java");
    auto e = extents_of(f);
    REQUIRE(e.size() == 1);
    CHECK(heuristic_target(f, e[0]) == TargetLabel::right);
    auto r = resolve_target_span(f, e[0], TargetLabel::right);
    REQUIRE(r.span);
    CHECK(r.node_kind == "ForStatement");
    CHECK(r.span->start_line == 7);
    CHECK(r.span->end_line == 9);
    CHECK(f.slice(*r.span).starts_with("for (int i = 0;"));
    CHECK(f.slice(*r.span).ends_with("}"));
}

TEST_CASE("then-block as parent") {
    auto f = load("NullGuard.java");
    auto e = extents_of(f);
    REQUIRE(e.size() == 1);
    CHECK(heuristic_target(f, e[0]) == TargetLabel::parent);
    auto r = resolve_target_span(f, e[0], TargetLabel::parent);
    REQUIRE(r.span);
    CHECK(r.node_kind == "Block");
    CHECK(r.span->start_line == 5);
    CHECK(r.span->end_line == 7);
    CHECK(f.slice(*r.span).starts_with("{ // error"));
}

TEST_CASE("commented-out code is in place") {
    auto f = load("Receiver.java");
    auto e = extents_of(f);
    REQUIRE(e.size() == 1);
    CHECK(heuristic_target(f, e[0]) == TargetLabel::in_place);
    auto r = resolve_target_span(f, e[0], TargetLabel::in_place);
    CHECK_FALSE(r.span);
    CHECK(r.node_kind.empty());
}

TEST_CASE("missing neighbor falls back to InPlace") {
    auto f = parse_source("class A {}\n// trailing note\n", Language::java);
    auto e = extents_of(f);
    REQUIRE(e.size() == 1);
    auto r = resolve_target_span(f, e[0], TargetLabel::right, 0.9);
    CHECK(r.label == TargetLabel::in_place);
    CHECK(r.confidence == 0.0);
    CHECK_FALSE(r.span);
    auto l = resolve_target_span(f, e[0], TargetLabel::left, 0.9);
    CHECK(l.label == TargetLabel::left);
    CHECK(l.confidence == 0.9);
}

TEST_CASE("distant left element is flagged") {
    auto f = parse_source("x = 1\n\n\n# far below\n", Language::python);
    auto e = extents_of(f);
    auto r = resolve_target_span(f, e[0], TargetLabel::left);
    REQUIRE(r.span);
    CHECK(r.distant);
}

TEST_CASE("looks_like_code") {
    for (const char* s : {"System.out.println(Strand.currentStrand());", "foo(bar)", "x = compute(a, b)",
                          "if x is None:", "import os", "from a.b import c", "}", "int i = 0;"}) {
        CHECK_MESSAGE(looks_like_code(s), s);
    }
    for (const char* s : {"Copy the array.", "-1 means unlimited", "TODO handle overflow", "error",
                          "if we had a prior association, restore and throw an exception", ""}) {
        CHECK_FALSE_MESSAGE(looks_like_code(s), s);
    }
}

TEST_CASE("left and right resolutions leave only trivia in the gap") {
    synth::Rng rng(11);
    for (const auto& f : synth::corpus(rng, 30)) {
        for (const auto& e : extents_of(f)) {
            for (auto label : {TargetLabel::left, TargetLabel::right, TargetLabel::parent}) {
                auto r = resolve_target_span(f, e, label);
                if (!r.span) continue;
                std::string_view text = f.text();
                std::size_t from = 0, to = 0;
                if (label == TargetLabel::left) {
                    from = r.span->end_offset, to = e.span.start_offset;
                } else if (label == TargetLabel::right) {
                    from = e.span.end_offset, to = r.span->start_offset;
                } else {
                    CHECK(r.span->contains(e.span));
                    continue;
                }
                REQUIRE(from <= to);
                // Blank out the comments in the gap; whitespace must remain.
                std::string gap(text.substr(from, to - from));
                for (const auto& c : f.comments()) {
                    if (c.span.start_offset >= from && c.span.end_offset <= to) {
                        for (auto k = c.span.start_offset; k < c.span.end_offset; ++k) gap[k - from] = ' ';
                    }
                }
                CHECK(gap.find_first_not_of(" \t\r\n") == std::string::npos);
            }
        }
    }
}

TEST_CASE("classify_target rejects foreign models") {
    dtree::Dataset d;
    for (bool b : {true, false, true, false}) {
        dtree::FeatureVector fv;
        fv.set("HasSymbol", b);
        d.examples.push_back({fv, b ? "InPlace" : "Right"});
    }
    auto model = dtree::train_c45(d, {2, "target"});
    dtree::FeatureVector fv;
    fv.set("HasSymbol", true);
    CHECK(classify_target(fv, model).label == TargetLabel::in_place);
    fv.set("HasSymbol", false);
    CHECK(classify_target(fv, model).label == TargetLabel::right);

    dtree::FeatureVector other;
    other.set("WordFirst", std::string("x"));
    try {
        classify_target(other, model);
        FAIL("expected ModelFeatureMismatch");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::model_feature_mismatch);
    }

    for (auto& ex : d.examples) ex.label = "Sideways";
    auto bad = dtree::train_c45(d, {2, "target"});
    CHECK_THROWS_AS(classify_target(fv, bad), Error);
}
