#include <algorithm>
#include <cstdio>
#include <sstream>

#include "commentlens/decision_tree.hpp"

namespace commentlens::dtree {

namespace {

std::string format_threshold(double theta) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", theta);
    return buf;
}

void collect(const TreeNode& node, std::vector<Condition>& path, RuleSet& out) {
    if (node.is_leaf()) {
        out.rules.push_back(Rule{path, node.label, node.support, node.confidence()});
        return;
    }
    for (std::size_t k = 0; k < node.children.size(); ++k) {
        Condition c;
        c.feature = node.feature;
        c.kind = node.kind;
        c.default_branch = k == node.majority_child;
        switch (node.kind) {
        case SplitKind::numeric:
            c.threshold = node.threshold;
            c.at_most = k == 0;
            c.value = std::int64_t{0};
            break;
        case SplitKind::boolean:
            c.value = k == 1;
            break;
        case SplitKind::categorical:
            c.value = node.branch_values[k];
            if (c.default_branch) c.branch_values = node.branch_values;
            break;
        }
        path.push_back(std::move(c));
        collect(node.children[k], path, out);
        path.pop_back();
    }
}

}  // namespace

bool Condition::matches(const FeatureVector& fv) const {
    const auto* v = fv.get(feature);
    if (!v) return default_branch;
    switch (kind) {
    case SplitKind::numeric: {
        const auto* n = std::get_if<std::int64_t>(v);
        if (!n) return false;
        bool le = static_cast<double>(*n) <= threshold;
        return at_most ? le : !le;
    }
    case SplitKind::boolean:
        return *v == value;
    case SplitKind::categorical:
        if (*v == value) return true;
        return default_branch && std::find(branch_values.begin(), branch_values.end(), *v) == branch_values.end();
    }
    return false;
}

std::string Condition::to_string() const {
    std::string s = feature;
    switch (kind) {
    case SplitKind::numeric: s += (at_most ? " <= " : " > ") + format_threshold(threshold); break;
    case SplitKind::boolean:
    case SplitKind::categorical: s += " = " + format_value(value); break;
    }
    if (default_branch) s += kind == SplitKind::categorical ? " (or missing/unseen)" : " (or missing)";
    return s;
}

std::optional<Prediction> RuleSet::evaluate(const FeatureVector& fv) const {
    for (const auto& r : rules) {
        bool all = std::all_of(r.conditions.begin(), r.conditions.end(),
                               [&fv](const Condition& c) { return c.matches(fv); });
        if (all) return Prediction{r.label, r.confidence};
    }
    return std::nullopt;
}

RuleSet to_rules(const DecisionTree& tree) {
    RuleSet out;
    std::vector<Condition> path;
    collect(tree.root, path, out);
    return out;
}

std::string format_rules(const RuleSet& rules) {
    std::ostringstream os;
    std::size_t i = 0;
    for (const auto& r : rules.rules) {
        os << "rule " << ++i << ": if ";
        if (r.conditions.empty()) os << "true";
        for (std::size_t k = 0; k < r.conditions.size(); ++k) {
            if (k) os << " and ";
            os << r.conditions[k].to_string();
        }
        char conf[16];
        std::snprintf(conf, sizeof conf, "%.3f", r.confidence);
        os << " then " << r.label << "  [support " << r.support << ", confidence " << conf << "]\n";
    }
    return os.str();
}

}  // namespace commentlens::dtree
