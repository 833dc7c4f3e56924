#pragma once

// Independent reference learner for small boolean datasets. It re-derives
// every entropy from raw label lists and enumerates all splits at every
// node, sharing no code with the library.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace oracle {

constexpr int feature_count = 3;

struct Row {
    std::array<bool, feature_count> x{};
    std::string label;
};

inline double entropy_of(const std::vector<const Row*>& rows) {
    std::map<std::string, int> freq;
    for (const auto* r : rows) ++freq[r->label];
    double h = 0;
    for (const auto& [label, n] : freq) {
        double p = static_cast<double>(n) / static_cast<double>(rows.size());
        h -= p * std::log2(p);
    }
    return h;
}

struct Node {
    std::string label;
    int feature = -1;
    std::unique_ptr<Node> when_false;
    std::unique_ptr<Node> when_true;
};

class Learner {
public:
    Learner(const std::vector<Row>& rows, std::size_t min_examples) : min_examples_(min_examples) {
        for (const auto& r : rows) ++global_[r.label];
    }

    std::unique_ptr<Node> build(const std::vector<const Row*>& rows) const {
        auto node = std::make_unique<Node>();
        node->label = majority(rows);
        bool pure = std::all_of(rows.begin(), rows.end(), [&](const Row* r) { return r->label == rows.front()->label; });
        if (rows.size() < min_examples_ || pure) return node;

        int best = -1;
        double best_ratio = 0;
        // Feature names sort as f0 < f1 < f2, matching index order.
        for (int f = 0; f < feature_count; ++f) {
            std::vector<const Row*> lo, hi;
            for (const auto* r : rows) (r->x[f] ? hi : lo).push_back(r);
            if (lo.empty() || hi.empty()) continue;
            double n = static_cast<double>(rows.size());
            double wl = static_cast<double>(lo.size()) / n, wh = static_cast<double>(hi.size()) / n;
            double gain = entropy_of(rows) - wl * entropy_of(lo) - wh * entropy_of(hi);
            double split_info = -wl * std::log2(wl) - wh * std::log2(wh);
            if (gain <= 1e-12) continue;
            double ratio = gain / split_info;
            if (best < 0 || ratio > best_ratio + 1e-12) {
                best = f;
                best_ratio = ratio;
            }
        }
        if (best < 0) return node;
        std::vector<const Row*> lo, hi;
        for (const auto* r : rows) (r->x[best] ? hi : lo).push_back(r);
        node->feature = best;
        node->when_false = build(lo);
        node->when_true = build(hi);
        return node;
    }

    static std::string predict(const Node& node, const std::array<bool, feature_count>& x) {
        if (node.feature < 0) return node.label;
        return predict(x[node.feature] ? *node.when_true : *node.when_false, x);
    }

private:
    std::string majority(const std::vector<const Row*>& rows) const {
        std::map<std::string, int> freq;
        for (const auto* r : rows) ++freq[r->label];
        std::string best;
        int best_n = -1;
        for (const auto& [label, n] : freq) {
            if (n > best_n || (n == best_n && global_.at(label) > global_.at(best))) {
                best = label;
                best_n = n;
            }
        }
        return best;
    }

    std::size_t min_examples_;
    std::map<std::string, int> global_;
};

}  // namespace oracle
