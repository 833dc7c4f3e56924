#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

#include "commentlens/decision_tree.hpp"
#include "commentlens/error.hpp"

namespace commentlens::dtree {

namespace {

// Scores closer than this are treated as equal, so the earlier candidate
// in (feature name, threshold) order is kept.
constexpr double tie_epsilon = 1e-12;

}  // namespace

std::string_view to_string(FeatureType type) noexcept {
    switch (type) {
    case FeatureType::categorical: return "categorical";
    case FeatureType::numeric: return "numeric";
    case FeatureType::boolean: return "boolean";
    }
    return "categorical";
}

std::string_view to_string(SplitKind kind) noexcept {
    switch (kind) {
    case SplitKind::categorical: return "categorical";
    case SplitKind::numeric: return "numeric";
    case SplitKind::boolean: return "boolean";
    }
    return "categorical";
}

FeatureType type_of(const FeatureValue& value) noexcept {
    switch (value.index()) {
    case 0: return FeatureType::categorical;
    case 1: return FeatureType::numeric;
    default: return FeatureType::boolean;
    }
}

std::string format_value(const FeatureValue& value) {
    if (const auto* s = std::get_if<std::string>(&value)) return *s;
    if (const auto* n = std::get_if<std::int64_t>(&value)) return std::to_string(*n);
    return std::get<bool>(value) ? "true" : "false";
}

double TreeNode::confidence() const noexcept {
    if (support == 0) return 0.0;
    auto it = distribution.find(label);
    return it == distribution.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(support);
}

std::size_t TreeNode::node_count() const noexcept {
    std::size_t n = 1;
    for (const auto& c : children) n += c.node_count();
    return n;
}

std::size_t TreeNode::depth() const noexcept {
    std::size_t d = 0;
    for (const auto& c : children) d = std::max(d, c.depth() + 1);
    return d;
}

const FeatureDecl* DecisionTree::feature(std::string_view name) const noexcept {
    for (const auto& f : features) {
        if (f.name == name) return &f;
    }
    return nullptr;
}

double entropy(const std::vector<std::size_t>& counts) {
    double total = 0;
    for (auto c : counts) total += static_cast<double>(c);
    if (total == 0) return 0.0;
    double h = 0;
    for (auto c : counts) {
        if (c == 0) continue;
        double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

namespace {

// parts[k][l]: examples in part k with label l.
SplitStats score(const std::vector<std::size_t>& parent, const std::vector<std::vector<std::size_t>>& parts) {
    double total = 0;
    for (auto c : parent) total += static_cast<double>(c);
    SplitStats s;
    double remainder = 0;
    std::vector<std::size_t> sizes;
    sizes.reserve(parts.size());
    for (const auto& part : parts) {
        std::size_t n = std::accumulate(part.begin(), part.end(), std::size_t{0});
        sizes.push_back(n);
        if (n > 0) remainder += static_cast<double>(n) / total * entropy(part);
    }
    s.gain = entropy(parent) - remainder;
    s.split_info = entropy(sizes);
    s.gain_ratio = s.split_info > 0 ? s.gain / s.split_info : 0.0;
    return s;
}

// Column-oriented view of the training data. Categorical values become
// indices into a sorted value table; booleans become 0/1.
struct Column {
    FeatureDecl decl;
    std::vector<std::int64_t> code;
    std::vector<char> present;
    std::vector<std::string> categories;
};

struct Table {
    std::vector<Column> columns;
    std::vector<std::size_t> label;  // index into labels
    std::vector<std::string> labels;
    std::vector<std::size_t> global_counts;
};

std::vector<FeatureDecl> infer_features(const Dataset& data) {
    std::map<std::string, FeatureType> types;
    for (const auto& ex : data.examples) {
        for (const auto& [name, value] : ex.features.values) {
            if (name.empty()) throw Error(ErrorCode::invalid_input, "empty feature name");
            auto [it, inserted] = types.emplace(name, type_of(value));
            if (!inserted && it->second != type_of(value)) {
                throw Error(ErrorCode::invalid_input, "feature '" + name + "' mixes value types");
            }
        }
    }
    std::vector<FeatureDecl> out;
    for (const auto& [name, type] : types) out.push_back(FeatureDecl{name, type});
    return out;
}

std::vector<std::string> resolve_labels(const Dataset& data) {
    std::set<std::string> seen;
    for (const auto& ex : data.examples) seen.insert(ex.label);
    if (data.label_set.empty()) return {seen.begin(), seen.end()};
    std::set<std::string> declared(data.label_set.begin(), data.label_set.end());
    for (const auto& l : seen) {
        if (!declared.count(l)) throw Error(ErrorCode::invalid_input, "label '" + l + "' outside the declared label set");
    }
    return {declared.begin(), declared.end()};
}

Table build_table(const Dataset& data, const std::vector<FeatureDecl>& decls, const std::vector<std::string>& labels) {
    Table t;
    t.labels = labels;
    t.global_counts.assign(labels.size(), 0);
    for (const auto& ex : data.examples) {
        auto idx = static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), ex.label) - labels.begin());
        t.label.push_back(idx);
        ++t.global_counts[idx];
    }
    const std::size_t n = data.examples.size();
    for (const auto& decl : decls) {
        Column col;
        col.decl = decl;
        col.code.assign(n, 0);
        col.present.assign(n, 0);
        if (decl.type == FeatureType::categorical) {
            std::set<std::string> values;
            for (const auto& ex : data.examples) {
                if (const auto* v = ex.features.get(decl.name)) values.insert(std::get<std::string>(*v));
            }
            col.categories.assign(values.begin(), values.end());
        }
        for (std::size_t i = 0; i < n; ++i) {
            const auto* v = data.examples[i].features.get(decl.name);
            if (!v) continue;
            col.present[i] = 1;
            switch (decl.type) {
            case FeatureType::categorical: {
                const auto& s = std::get<std::string>(*v);
                col.code[i] = std::lower_bound(col.categories.begin(), col.categories.end(), s) - col.categories.begin();
                break;
            }
            case FeatureType::numeric: col.code[i] = std::get<std::int64_t>(*v); break;
            case FeatureType::boolean: col.code[i] = std::get<bool>(*v) ? 1 : 0; break;
            }
        }
        t.columns.push_back(std::move(col));
    }
    return t;
}

// A concrete way to divide a node's examples.
struct Partition {
    SplitKind kind = SplitKind::categorical;
    double threshold = 0.0;
    std::vector<std::int64_t> keys;  // categorical codes or {0, 1} for boolean
    std::vector<std::vector<std::size_t>> members;
    std::size_t majority = 0;
};

std::size_t largest(const std::vector<std::vector<std::size_t>>& members) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < members.size(); ++k) {
        if (members[k].size() > members[best].size()) best = k;
    }
    return best;
}

// Assigns present examples by `part_of`, then routes missing ones to the
// largest part. Returns false when fewer than two parts are nonempty.
template <typename PartOf>
bool fill(Partition& p, const Column& col, const std::vector<std::size_t>& rows, std::size_t nparts, PartOf part_of) {
    p.members.assign(nparts, {});
    std::vector<std::size_t> missing;
    for (auto r : rows) {
        if (col.present[r]) p.members[part_of(col.code[r])].push_back(r);
        else missing.push_back(r);
    }
    std::size_t nonempty = 0;
    for (const auto& m : p.members) nonempty += m.empty() ? 0 : 1;
    if (nonempty < 2) return false;
    p.majority = largest(p.members);
    auto& target = p.members[p.majority];
    target.insert(target.end(), missing.begin(), missing.end());
    std::sort(target.begin(), target.end());
    return true;
}

std::vector<Partition> candidates(const Column& col, const std::vector<std::size_t>& rows) {
    std::vector<Partition> out;
    switch (col.decl.type) {
    case FeatureType::categorical: {
        std::set<std::int64_t> seen;
        for (auto r : rows) {
            if (col.present[r]) seen.insert(col.code[r]);
        }
        if (seen.size() < 2) break;
        Partition p;
        p.kind = SplitKind::categorical;
        p.keys.assign(seen.begin(), seen.end());
        const auto& keys = p.keys;
        if (fill(p, col, rows, keys.size(), [&keys](std::int64_t c) {
                return static_cast<std::size_t>(std::lower_bound(keys.begin(), keys.end(), c) - keys.begin());
            })) {
            out.push_back(std::move(p));
        }
        break;
    }
    case FeatureType::boolean: {
        Partition p;
        p.kind = SplitKind::boolean;
        p.keys = {0, 1};
        if (fill(p, col, rows, 2, [](std::int64_t c) { return static_cast<std::size_t>(c != 0); })) {
            out.push_back(std::move(p));
        }
        break;
    }
    case FeatureType::numeric: {
        std::set<std::int64_t> seen;
        for (auto r : rows) {
            if (col.present[r]) seen.insert(col.code[r]);
        }
        std::vector<std::int64_t> values(seen.begin(), seen.end());
        for (std::size_t i = 1; i < values.size(); ++i) {
            double theta = (static_cast<double>(values[i - 1]) + static_cast<double>(values[i])) / 2.0;
            Partition p;
            p.kind = SplitKind::numeric;
            p.threshold = theta;
            if (fill(p, col, rows, 2, [theta](std::int64_t c) {
                    return static_cast<std::size_t>(static_cast<double>(c) > theta);
                })) {
                out.push_back(std::move(p));
            }
        }
        break;
    }
    }
    return out;
}

class Trainer {
public:
    Trainer(const Table& table, std::size_t min_examples) : t_(table), min_examples_(min_examples) {}

    TreeNode grow(const std::vector<std::size_t>& rows) {
        TreeNode node = leaf(rows);
        if (rows.size() < min_examples_ || rows.empty()) return node;
        if (node.distribution.size() <= 1) return node;

        const std::vector<std::size_t> parent = counts(rows);
        const Column* best_col = nullptr;
        Partition best;
        double best_ratio = 0.0;
        for (const auto& col : t_.columns) {
            for (auto& p : candidates(col, rows)) {
                std::vector<std::vector<std::size_t>> parts;
                parts.reserve(p.members.size());
                for (const auto& m : p.members) parts.push_back(counts(m));
                auto s = score(parent, parts);
                if (s.gain <= tie_epsilon || s.split_info <= 0) continue;
                if (!best_col || s.gain_ratio > best_ratio + tie_epsilon) {
                    best_col = &col;
                    best = std::move(p);
                    best_ratio = s.gain_ratio;
                }
            }
        }
        if (!best_col) return node;

        node.feature = best_col->decl.name;
        node.kind = best.kind;
        node.threshold = best.threshold;
        node.majority_child = best.majority;
        if (best.kind == SplitKind::categorical) {
            for (auto k : best.keys) node.branch_values.emplace_back(best_col->categories[static_cast<std::size_t>(k)]);
        } else if (best.kind == SplitKind::boolean) {
            node.branch_values = {FeatureValue{false}, FeatureValue{true}};
        }
        for (const auto& m : best.members) node.children.push_back(grow(m));
        return node;
    }

private:
    std::vector<std::size_t> counts(const std::vector<std::size_t>& rows) const {
        std::vector<std::size_t> c(t_.labels.size(), 0);
        for (auto r : rows) ++c[t_.label[r]];
        return c;
    }

    TreeNode leaf(const std::vector<std::size_t>& rows) const {
        TreeNode node;
        node.support = rows.size();
        auto c = counts(rows);
        std::size_t best = t_.labels.size();
        for (std::size_t l = 0; l < c.size(); ++l) {
            if (c[l] == 0) continue;
            node.distribution[t_.labels[l]] = c[l];
            // Labels are sorted, so a strict comparison keeps the
            // lexicographically smaller one on a full tie.
            if (best == t_.labels.size() || c[l] > c[best] ||
                (c[l] == c[best] && t_.global_counts[l] > t_.global_counts[best])) {
                best = l;
            }
        }
        if (best == t_.labels.size()) {
            // Empty node: fall back to the global majority.
            best = 0;
            for (std::size_t l = 1; l < t_.labels.size(); ++l) {
                if (t_.global_counts[l] > t_.global_counts[best]) best = l;
            }
        }
        node.label = t_.labels.empty() ? std::string{} : t_.labels[best];
        return node;
    }

    const Table& t_;
    std::size_t min_examples_;
};

Partition partition_for(const Table& t, const SplitCandidate& split, std::vector<std::size_t>& rows) {
    const Column* col = nullptr;
    for (const auto& c : t.columns) {
        if (c.decl.name == split.feature) col = &c;
    }
    if (!col) throw Error(ErrorCode::undefined_split, "feature '" + split.feature + "' not present in the dataset");
    rows.resize(t.label.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    Partition p;
    p.kind = split.kind;
    bool ok = false;
    if (split.kind == SplitKind::numeric) {
        if (col->decl.type != FeatureType::numeric) throw Error(ErrorCode::undefined_split, "threshold split on a non-numeric feature");
        double theta = split.threshold;
        p.threshold = theta;
        ok = fill(p, *col, rows, 2, [theta](std::int64_t c) { return static_cast<std::size_t>(static_cast<double>(c) > theta); });
    } else {
        auto all = candidates(*col, rows);
        if (!all.empty() && all.front().kind == split.kind) {
            p = std::move(all.front());
            ok = true;
        }
    }
    if (!ok) throw Error(ErrorCode::undefined_split, "split on '" + split.feature + "' has zero split information");
    return p;
}

}  // namespace

SplitStats evaluate_split(const Dataset& data, const SplitCandidate& split) {
    auto decls = infer_features(data);
    auto labels = resolve_labels(data);
    auto table = build_table(data, decls, labels);
    std::vector<std::size_t> rows;
    auto p = partition_for(table, split, rows);
    std::vector<std::size_t> parent(labels.size(), 0);
    for (auto l : table.label) ++parent[l];
    std::vector<std::vector<std::size_t>> parts;
    for (const auto& m : p.members) {
        std::vector<std::size_t> c(labels.size(), 0);
        for (auto r : m) ++c[table.label[r]];
        parts.push_back(std::move(c));
    }
    auto s = score(parent, parts);
    if (s.split_info <= 0) throw Error(ErrorCode::undefined_split, "split information is zero");
    return s;
}

double information_gain(const Dataset& data, const SplitCandidate& split) { return evaluate_split(data, split).gain; }

double gain_ratio(const Dataset& data, const SplitCandidate& split) { return evaluate_split(data, split).gain_ratio; }

DecisionTree train_c45(const Dataset& data, const TrainOptions& options) {
    if (data.examples.empty()) throw Error(ErrorCode::invalid_input, "cannot train on an empty dataset");
    DecisionTree tree;
    tree.task = options.task;
    tree.features = infer_features(data);
    tree.labels = resolve_labels(data);
    tree.min_examples = options.min_examples;
    tree.training_examples = data.examples.size();
    auto table = build_table(data, tree.features, tree.labels);
    std::vector<std::size_t> rows(data.examples.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    tree.root = Trainer(table, options.min_examples).grow(rows);
    return tree;
}

namespace {

// Index of the child `fv` descends into.
std::size_t route(const TreeNode& node, const FeatureDecl* decl, const FeatureVector& fv) {
    const auto* v = fv.get(node.feature);
    if (!v) return node.majority_child;
    if (decl && type_of(*v) != decl->type) {
        throw Error(ErrorCode::model_feature_mismatch,
                    "feature '" + node.feature + "' has type " + std::string(to_string(type_of(*v))) +
                        ", model expects " + std::string(to_string(decl->type)));
    }
    switch (node.kind) {
    case SplitKind::numeric:
        return static_cast<double>(std::get<std::int64_t>(*v)) <= node.threshold ? 0 : 1;
    case SplitKind::boolean:
        return std::get<bool>(*v) ? 1 : 0;
    case SplitKind::categorical:
        for (std::size_t k = 0; k < node.branch_values.size(); ++k) {
            if (node.branch_values[k] == *v) return k;
        }
        return node.majority_child;
    }
    return node.majority_child;
}

}  // namespace

Prediction classify(const DecisionTree& tree, const FeatureVector& fv) {
    const TreeNode* node = &tree.root;
    while (!node->is_leaf()) node = &node->children[route(*node, tree.feature(node->feature), fv)];
    return Prediction{node->label, node->confidence()};
}

void check_features(const DecisionTree& tree, const std::vector<std::string>& known) {
    std::set<std::string, std::less<>> names(known.begin(), known.end());
    std::vector<const TreeNode*> stack{&tree.root};
    while (!stack.empty()) {
        const auto* n = stack.back();
        stack.pop_back();
        if (!n->is_leaf() && !names.count(n->feature)) {
            throw Error(ErrorCode::model_feature_mismatch, "model references unknown feature '" + n->feature + "'");
        }
        for (const auto& c : n->children) stack.push_back(&c);
    }
}

}  // namespace commentlens::dtree
