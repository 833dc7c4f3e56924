#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace commentlens::dtree {

/// A feature value: categorical (string), numeric (integer) or boolean.
using FeatureValue = std::variant<std::string, std::int64_t, bool>;

enum class FeatureType { categorical, numeric, boolean };

std::string_view to_string(FeatureType type) noexcept;
FeatureType type_of(const FeatureValue& value) noexcept;
std::string format_value(const FeatureValue& value);

struct FeatureVector {
    std::map<std::string, FeatureValue, std::less<>> values;

    void set(std::string name, FeatureValue value) { values.insert_or_assign(std::move(name), std::move(value)); }
    const FeatureValue* get(std::string_view name) const {
        auto it = values.find(name);
        return it == values.end() ? nullptr : &it->second;
    }
    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct Example {
    FeatureVector features;
    std::string label;
};

/// Training data. When `label_set` is empty it is derived from the examples;
/// otherwise every label must belong to it.
struct Dataset {
    std::vector<Example> examples;
    std::vector<std::string> label_set;
};

struct FeatureDecl {
    std::string name;
    FeatureType type = FeatureType::categorical;
    friend bool operator==(const FeatureDecl&, const FeatureDecl&) = default;
};

enum class SplitKind { categorical, numeric, boolean };

std::string_view to_string(SplitKind kind) noexcept;

struct TreeNode {
    // Every node keeps its training distribution; `label` is its majority.
    std::string label;
    std::size_t support = 0;
    std::map<std::string, std::size_t> distribution;

    // Split part, empty children for a leaf.
    std::string feature;
    SplitKind kind = SplitKind::categorical;
    double threshold = 0.0;                   // numeric: left child takes value <= threshold
    std::vector<FeatureValue> branch_values;  // categorical: one per child
    std::vector<TreeNode> children;           // boolean: {false, true}
    std::size_t majority_child = 0;

    bool is_leaf() const noexcept { return children.empty(); }
    double confidence() const noexcept;
    std::size_t node_count() const noexcept;
    std::size_t depth() const noexcept;  // a single leaf has depth 0
    friend bool operator==(const TreeNode&, const TreeNode&) = default;
};

struct DecisionTree {
    std::string task;  // free-form tag, e.g. "extent" or "category"
    std::vector<FeatureDecl> features;
    std::vector<std::string> labels;
    TreeNode root;
    std::size_t min_examples = 10;
    std::size_t training_examples = 0;

    const FeatureDecl* feature(std::string_view name) const noexcept;
    friend bool operator==(const DecisionTree&, const DecisionTree&) = default;
};

struct Prediction {
    std::string label;
    double confidence = 0.0;
};

// Split scoring

double entropy(const std::vector<std::size_t>& counts);

struct SplitCandidate {
    std::string feature;
    SplitKind kind = SplitKind::categorical;
    double threshold = 0.0;
};

struct SplitStats {
    double gain = 0.0;
    double split_info = 0.0;
    double gain_ratio = 0.0;
};

/// Information gain and gain ratio (base 2) of splitting `data` by `split`.
/// Examples missing the feature join the largest part.
/// Throws UndefinedSplit when the split info is zero.
SplitStats evaluate_split(const Dataset& data, const SplitCandidate& split);
double information_gain(const Dataset& data, const SplitCandidate& split);
double gain_ratio(const Dataset& data, const SplitCandidate& split);

// Learning and inference

struct TrainOptions {
    std::size_t min_examples = 10;
    std::string task;
};

/// C4.5 induction: greedy maximum gain ratio, no post-pruning.
DecisionTree train_c45(const Dataset& data, const TrainOptions& options = {});

/// Missing features and unseen categorical values follow the majority child.
Prediction classify(const DecisionTree& tree, const FeatureVector& fv);

/// Throws ModelFeatureMismatch when the model uses a feature outside `known`.
void check_features(const DecisionTree& tree, const std::vector<std::string>& known);

// If-then export

struct Condition {
    std::string feature;
    SplitKind kind = SplitKind::categorical;
    // categorical: equals `value`; boolean: equals `value`;
    // numeric: `<= threshold` when `at_most`, else `> threshold`.
    FeatureValue value;
    double threshold = 0.0;
    bool at_most = true;
    // Majority branch: also taken when the feature is missing or, for
    // categorical tests, its value is none of `branch_values`.
    bool default_branch = false;
    std::vector<FeatureValue> branch_values;

    bool matches(const FeatureVector& fv) const;
    std::string to_string() const;
};

struct Rule {
    std::vector<Condition> conditions;
    std::string label;
    std::size_t support = 0;
    double confidence = 0.0;
};

struct RuleSet {
    std::vector<Rule> rules;

    /// Label of the first matching rule.
    std::optional<Prediction> evaluate(const FeatureVector& fv) const;
};

RuleSet to_rules(const DecisionTree& tree);
std::string format_rules(const RuleSet& rules);

// Persistence

inline constexpr int model_format_version = 1;

std::string to_json(const DecisionTree& tree);
DecisionTree tree_from_json(std::string_view text);
void save_model(const DecisionTree& tree, const std::string& path);  // also writes <path>.rules.txt
DecisionTree load_model(const std::string& path);

}  // namespace commentlens::dtree
