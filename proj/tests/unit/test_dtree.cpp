#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "../support/c45_oracle.hpp"
#include "../support/generators.hpp"
#include "commentlens/decision_tree.hpp"
#include "commentlens/error.hpp"

using namespace commentlens;
using namespace commentlens::dtree;

namespace {

Dataset labeled(const std::vector<std::string>& labels, const std::vector<std::string>& values) {
    Dataset d;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        FeatureVector fv;
        fv.set("f", values[i]);
        d.examples.push_back({fv, labels[i]});
    }
    return d;
}

Dataset from_rows(const std::vector<oracle::Row>& rows) {
    Dataset d;
    for (const auto& r : rows) {
        FeatureVector fv;
        for (int f = 0; f < oracle::feature_count; ++f) fv.set("f" + std::to_string(f), r.x[f]);
        d.examples.push_back({fv, r.label});
    }
    return d;
}

}  // namespace

TEST_CASE("gain ratio on perfect separation, independence, and a skewed split") {
    SplitCandidate split{"f", SplitKind::categorical, 0};
    CHECK(gain_ratio(labeled({"P", "P", "N", "N"}, {"a", "a", "b", "b"}), split) == doctest::Approx(1.0));
    CHECK(gain_ratio(labeled({"P", "N", "P", "N"}, {"a", "a", "b", "b"}), split) == doctest::Approx(0.0));

    auto s = evaluate_split(labeled({"P", "P", "P", "N"}, {"a", "a", "b", "b"}), split);
    // H(3/4) - 1/2 * H(1/2) = 0.8113 - 0.5
    CHECK(s.gain == doctest::Approx(0.311278).epsilon(1e-5));
    CHECK(s.split_info == doctest::Approx(1.0));
    CHECK(s.gain_ratio == doctest::Approx(0.311278).epsilon(1e-5));
}

TEST_CASE("a split with a single part is undefined") {
    SplitCandidate split{"f", SplitKind::categorical, 0};
    try {
        gain_ratio(labeled({"P", "N"}, {"a", "a"}), split);
        FAIL("expected UndefinedSplit");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::undefined_split);
    }
}

TEST_CASE("numeric split gain uses the <= threshold convention") {
    Dataset d;
    for (std::int64_t v : {1, 2, 3, 4}) {
        FeatureVector fv;
        fv.set("n", v);
        d.examples.push_back({fv, v <= 2 ? "lo" : "hi"});
    }
    CHECK(gain_ratio(d, {"n", SplitKind::numeric, 2.5}) == doctest::Approx(1.0));
    CHECK(gain_ratio(d, {"n", SplitKind::numeric, 1.5}) < 1.0);
}

TEST_CASE("identical labels give a single leaf") {
    auto tree = train_c45(labeled({"P", "P", "P", "P"}, {"a", "b", "c", "d"}), {2, ""});
    CHECK(tree.root.is_leaf());
    CHECK(tree.root.label == "P");
    auto p = classify(tree, {});
    CHECK(p.label == "P");
    CHECK(p.confidence == 1.0);
}

TEST_CASE("separable data gives one split with pure leaves") {
    auto tree = train_c45(labeled({"P", "P", "N", "N"}, {"a", "a", "b", "b"}), {2, ""});
    REQUIRE_FALSE(tree.root.is_leaf());
    CHECK(tree.root.feature == "f");
    REQUIRE(tree.root.children.size() == 2);
    CHECK(tree.root.children[0].is_leaf());
    CHECK(tree.root.children[0].label == "P");
    CHECK(tree.root.children[1].label == "N");
    CHECK(tree.root.node_count() == 3);
    CHECK(tree.root.depth() == 1);
}

TEST_CASE("min_examples stops growth") {
    auto tree = train_c45(labeled({"P", "P", "N", "N"}, {"a", "a", "b", "b"}), {10, ""});
    CHECK(tree.root.is_leaf());
}

TEST_CASE("leaf ties go to the globally frequent label, then the smaller name") {
    // Root: 3 N vs 2 P globally. The node {a} holds one P and one N.
    Dataset d = labeled({"P", "N", "N", "N", "P"}, {"a", "a", "b", "b", "c"});
    auto tree = train_c45(d, {100, ""});
    CHECK(tree.root.label == "N");

    Dataset even = labeled({"Q", "P"}, {"a", "b"});
    CHECK(train_c45(even, {100, ""}).root.label == "P");
}

TEST_CASE("missing root feature follows the majority child") {
    Dataset d;
    for (int i = 0; i < 3; ++i) {
        FeatureVector fv;
        fv.set("HasSymbol", true);
        d.examples.push_back({fv, "CommentOut"});
    }
    FeatureVector fv;
    fv.set("HasSymbol", false);
    d.examples.push_back({fv, "Postcondition"});
    auto tree = train_c45(d, {2, ""});
    REQUIRE_FALSE(tree.root.is_leaf());
    CHECK(tree.root.majority_child == 1);
    CHECK(classify(tree, {}).label == "CommentOut");
    CHECK(classify(tree, fv).label == "Postcondition");
}

TEST_CASE("numeric value equal to the threshold goes left") {
    Dataset d;
    for (std::int64_t v : {0, 0, 4, 4}) {
        FeatureVector fv;
        fv.set("DeltaRows", v);
        d.examples.push_back({fv, v == 0 ? "I" : "B"});
    }
    auto tree = train_c45(d, {2, ""});
    REQUIRE(tree.root.kind == SplitKind::numeric);
    CHECK(tree.root.threshold == 2.0);
    FeatureVector at;
    at.set("DeltaRows", std::int64_t{2});
    CHECK(classify(tree, at).label == "I");
}

TEST_CASE("unseen categorical value follows the majority child") {
    auto tree = train_c45(labeled({"P", "P", "P", "N"}, {"a", "a", "a", "b"}), {2, ""});
    FeatureVector fv;
    fv.set("f", std::string("zzz"));
    CHECK(classify(tree, fv).label == "P");
}

TEST_CASE("value of the wrong type is a feature mismatch") {
    auto tree = train_c45(labeled({"P", "P", "N", "N"}, {"a", "a", "b", "b"}), {2, ""});
    FeatureVector fv;
    fv.set("f", true);
    CHECK_THROWS_AS(classify(tree, fv), Error);
    CHECK_THROWS_AS(check_features(tree, {"g"}), Error);
    CHECK_NOTHROW(check_features(tree, {"f"}));
}

TEST_CASE("labels outside the declared set are rejected") {
    Dataset d = labeled({"P", "X"}, {"a", "b"});
    d.label_set = {"P", "N"};
    CHECK_THROWS_AS(train_c45(d), Error);
}

TEST_CASE("trees match the exhaustive oracle on random boolean datasets") {
    gen::Rng rng(20261017);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<oracle::Row> rows(gen::uniform(rng, 1, 12));
        for (auto& r : rows) {
            for (auto& b : r.x) b = gen::coin(rng);
            r.label = std::string(1, static_cast<char>('A' + gen::uniform(rng, 0, 2)));
        }
        auto tree = train_c45(from_rows(rows), {2, ""});
        std::vector<const oracle::Row*> ptrs;
        for (const auto& r : rows) ptrs.push_back(&r);
        oracle::Learner learner(rows, 2);
        auto ref = learner.build(ptrs);
        for (const auto& r : rows) {
            FeatureVector fv;
            for (int f = 0; f < oracle::feature_count; ++f) fv.set("f" + std::to_string(f), r.x[f]);
            CHECK(classify(tree, fv).label == oracle::Learner::predict(*ref, r.x));
        }
    }
}

TEST_CASE("injective features give perfect training accuracy at min_examples 1") {
    gen::Rng rng(7);
    Dataset d;
    for (int i = 0; i < 40; ++i) {
        FeatureVector fv;
        fv.set("id", static_cast<std::int64_t>(i * 3));
        d.examples.push_back({fv, std::string(1, static_cast<char>('a' + gen::uniform(rng, 0, 4)))});
    }
    auto tree = train_c45(d, {1, ""});
    for (const auto& ex : d.examples) CHECK(classify(tree, ex.features).label == ex.label);
}

TEST_CASE("chosen root split has the maximal gain ratio") {
    gen::Rng rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        auto d = gen::mixed_dataset(rng, 40);
        auto tree = train_c45(d, {2, ""});
        if (tree.root.is_leaf()) continue;
        SplitCandidate chosen{tree.root.feature, tree.root.kind, tree.root.threshold};
        double best = gain_ratio(d, chosen);
        std::vector<SplitCandidate> all = {{"LeftSyntax", SplitKind::categorical, 0},
                                           {"PosTagFirst", SplitKind::categorical, 0},
                                           {"HasSymbol", SplitKind::boolean, 0},
                                           {"WordAny:todo", SplitKind::boolean, 0}};
        for (int v = 0; v < 12; ++v) all.push_back({"DeltaRows", SplitKind::numeric, v + 0.5});
        for (const auto& c : all) {
            double ratio = -1;
            try {
                ratio = gain_ratio(d, c);
            } catch (const Error& e) {
                CHECK(e.code() == ErrorCode::undefined_split);
            }
            CHECK(ratio <= best + 1e-9);
        }
    }
}

TEST_CASE("training is deterministic") {
    gen::Rng a(5), b(5);
    auto da = gen::mixed_dataset(a, 80), db = gen::mixed_dataset(b, 80);
    CHECK(train_c45(da, {3, ""}) == train_c45(db, {3, ""}));
}

TEST_CASE("rules agree with the tree, including missing and unseen values") {
    gen::Rng rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        auto tree = train_c45(gen::mixed_dataset(rng, 60), {2, ""});
        auto rules = to_rules(tree);
        std::size_t leaves = 0;
        std::vector<const TreeNode*> stack{&tree.root};
        while (!stack.empty()) {
            const auto* n = stack.back();
            stack.pop_back();
            if (n->is_leaf()) ++leaves;
            for (const auto& c : n->children) stack.push_back(&c);
        }
        CHECK(rules.rules.size() == leaves);
        for (int i = 0; i < 300; ++i) {
            auto fv = gen::mixed_vector(rng, 0.2, true);
            std::size_t matching = 0;
            for (const auto& r : rules.rules) {
                bool all = true;
                for (const auto& c : r.conditions) all = all && c.matches(fv);
                matching += all ? 1 : 0;
            }
            CHECK(matching == 1);
            auto via_rules = rules.evaluate(fv);
            REQUIRE(via_rules);
            CHECK(via_rules->label == classify(tree, fv).label);
        }
    }
}

TEST_CASE("single leaf exports one unconditional rule") {
    auto tree = train_c45(labeled({"P"}, {"a"}));
    auto rules = to_rules(tree);
    REQUIRE(rules.rules.size() == 1);
    CHECK(rules.rules[0].conditions.empty());
    CHECK(format_rules(rules).find("if true then P") != std::string::npos);
}

TEST_CASE("boolean split exports complementary rules") {
    Dataset d;
    for (bool b : {true, true, false, false}) {
        FeatureVector fv;
        fv.set("HasSymbol", b);
        d.examples.push_back({fv, b ? "CommentOut" : "Postcondition"});
    }
    auto rules = to_rules(train_c45(d, {2, ""}));
    REQUIRE(rules.rules.size() == 2);
    CHECK(rules.rules[0].conditions[0].to_string().rfind("HasSymbol = false", 0) == 0);
    CHECK(rules.rules[1].conditions[0].to_string().rfind("HasSymbol = true", 0) == 0);
}

TEST_CASE("model JSON round trip and rules dump") {
    gen::Rng rng(3);
    auto tree = train_c45(gen::mixed_dataset(rng, 50), {2, "category"});
    auto back = tree_from_json(to_json(tree));
    CHECK(back == tree);

    auto dir = std::filesystem::temp_directory_path() / "commentlens_dtree_test";
    std::filesystem::remove_all(dir);
    auto path = (dir / "model.json").string();
    save_model(tree, path);
    CHECK(std::filesystem::exists(dir / "model.rules.txt"));
    CHECK(load_model(path) == tree);
    std::filesystem::remove_all(dir);

    CHECK_THROWS_AS(tree_from_json("{}"), Error);
    CHECK_THROWS_AS(tree_from_json("not json"), Error);
}
