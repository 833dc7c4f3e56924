#pragma once

// Hand-rolled random generators for property tests.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "commentlens/decision_tree.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

/// Mixed-type feature vector: two categorical, one numeric, two boolean
/// features, each missing with probability `p_missing`. Categorical values
/// occasionally fall outside the training alphabet.
inline commentlens::dtree::FeatureVector mixed_vector(Rng& rng, double p_missing, bool allow_unseen) {
    commentlens::dtree::FeatureVector fv;
    static const std::vector<std::string> kinds = {"Block", "IfStatement", "MethodDeclaration", "Root"};
    static const std::vector<std::string> tags = {"VB", "NN", "DT", "JJ", "IN"};
    auto pick = [&](const std::vector<std::string>& pool) {
        if (allow_unseen && coin(rng, 0.1)) return std::string("Unseen") + std::to_string(uniform(rng, 0, 3));
        return pool[uniform(rng, 0, pool.size() - 1)];
    };
    if (!coin(rng, p_missing)) fv.set("LeftSyntax", pick(kinds));
    if (!coin(rng, p_missing)) fv.set("PosTagFirst", pick(tags));
    if (!coin(rng, p_missing)) fv.set("DeltaRows", static_cast<std::int64_t>(uniform(rng, 0, 12)));
    if (!coin(rng, p_missing)) fv.set("HasSymbol", coin(rng));
    if (!coin(rng, p_missing)) fv.set("WordAny:todo", coin(rng));
    return fv;
}

/// Labels correlated with the features so trees grow beyond a single leaf.
inline commentlens::dtree::Dataset mixed_dataset(Rng& rng, std::size_t n) {
    commentlens::dtree::Dataset d;
    static const std::vector<std::string> labels = {"Postcondition", "Precondition", "CommentOut", "Directive"};
    for (std::size_t i = 0; i < n; ++i) {
        auto fv = mixed_vector(rng, 0.1, false);
        std::size_t l = 0;
        if (const auto* v = fv.get("HasSymbol"); v && std::get<bool>(*v)) l = 2;
        if (const auto* v = fv.get("DeltaRows"); v && std::get<std::int64_t>(*v) > 8) l = 1;
        if (const auto* v = fv.get("PosTagFirst"); v && std::get<std::string>(*v) == "IN") l = 3;
        if (coin(rng, 0.25)) l = uniform(rng, 0, labels.size() - 1);
        d.examples.push_back({std::move(fv), labels[l]});
    }
    return d;
}

}  // namespace gen
