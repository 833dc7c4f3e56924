#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "commentlens/decision_tree.hpp"
#include "commentlens/error.hpp"

namespace commentlens::dtree {

using nlohmann::json;

namespace {

constexpr const char* format_name = "commentlens-c45";

json value_json(const FeatureValue& v) {
    if (const auto* s = std::get_if<std::string>(&v)) return *s;
    if (const auto* n = std::get_if<std::int64_t>(&v)) return *n;
    return std::get<bool>(v);
}

FeatureValue value_from(const json& j) {
    if (j.is_string()) return j.get<std::string>();
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    throw Error(ErrorCode::invalid_input, "unsupported feature value in model");
}

FeatureType type_from(const std::string& s) {
    if (s == "categorical") return FeatureType::categorical;
    if (s == "numeric") return FeatureType::numeric;
    if (s == "boolean") return FeatureType::boolean;
    throw Error(ErrorCode::invalid_input, "unknown feature type '" + s + "'");
}

SplitKind kind_from(const std::string& s) {
    if (s == "categorical") return SplitKind::categorical;
    if (s == "numeric") return SplitKind::numeric;
    if (s == "boolean") return SplitKind::boolean;
    throw Error(ErrorCode::invalid_input, "unknown split kind '" + s + "'");
}

json node_json(const TreeNode& n) {
    json j;
    j["label"] = n.label;
    j["support"] = n.support;
    j["distribution"] = n.distribution;
    if (n.is_leaf()) return j;
    json split;
    split["feature"] = n.feature;
    split["kind"] = std::string(to_string(n.kind));
    if (n.kind == SplitKind::numeric) split["threshold"] = n.threshold;
    if (n.kind == SplitKind::categorical) {
        split["values"] = json::array();
        for (const auto& v : n.branch_values) split["values"].push_back(value_json(v));
    }
    j["split"] = std::move(split);
    j["majority_child"] = n.majority_child;
    j["children"] = json::array();
    for (const auto& c : n.children) j["children"].push_back(node_json(c));
    return j;
}

TreeNode node_from(const json& j) {
    TreeNode n;
    n.label = j.at("label").get<std::string>();
    n.support = j.at("support").get<std::size_t>();
    n.distribution = j.at("distribution").get<std::map<std::string, std::size_t>>();
    if (!j.contains("split")) return n;
    const auto& split = j.at("split");
    n.feature = split.at("feature").get<std::string>();
    n.kind = kind_from(split.at("kind").get<std::string>());
    if (n.kind == SplitKind::numeric) n.threshold = split.at("threshold").get<double>();
    if (n.kind == SplitKind::categorical) {
        for (const auto& v : split.at("values")) n.branch_values.push_back(value_from(v));
    }
    if (n.kind == SplitKind::boolean) n.branch_values = {FeatureValue{false}, FeatureValue{true}};
    n.majority_child = j.at("majority_child").get<std::size_t>();
    for (const auto& c : j.at("children")) n.children.push_back(node_from(c));
    std::size_t expected = n.kind == SplitKind::categorical ? n.branch_values.size() : 2;
    if (n.children.size() != expected || n.majority_child >= n.children.size()) {
        throw Error(ErrorCode::invalid_input, "malformed split on '" + n.feature + "'");
    }
    return n;
}

}  // namespace

std::string to_json(const DecisionTree& tree) {
    json j;
    j["format"] = format_name;
    j["version"] = model_format_version;
    j["task"] = tree.task;
    j["features"] = json::array();
    for (const auto& f : tree.features) {
        j["features"].push_back({{"name", f.name}, {"type", std::string(to_string(f.type))}});
    }
    j["labels"] = tree.labels;
    j["training"] = {{"examples", tree.training_examples}, {"min_examples", tree.min_examples}};
    j["tree"] = node_json(tree.root);
    return j.dump(1);
}

DecisionTree tree_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_input, std::string("model is not valid JSON: ") + e.what());
    }
    try {
        if (j.value("format", "") != format_name) throw Error(ErrorCode::invalid_input, "not a decision-tree model");
        if (j.at("version").get<int>() != model_format_version) {
            throw Error(ErrorCode::invalid_input, "unsupported model version " + j.at("version").dump());
        }
        DecisionTree t;
        t.task = j.value("task", "");
        for (const auto& f : j.at("features")) {
            t.features.push_back(FeatureDecl{f.at("name").get<std::string>(), type_from(f.at("type").get<std::string>())});
        }
        t.labels = j.at("labels").get<std::vector<std::string>>();
        t.training_examples = j.at("training").at("examples").get<std::size_t>();
        t.min_examples = j.at("training").at("min_examples").get<std::size_t>();
        t.root = node_from(j.at("tree"));
        return t;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_input, std::string("malformed model: ") + e.what());
    }
}

void save_model(const DecisionTree& tree, const std::string& path) {
    namespace fs = std::filesystem;
    fs::path p(path);
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw Error(ErrorCode::io_error, "cannot write " + path);
        out << to_json(tree) << '\n';
    }
    fs::path rules = p;
    rules.replace_extension(".rules.txt");
    std::ofstream out(rules, std::ios::binary);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + rules.string());
    out << format_rules(to_rules(tree));
}

DecisionTree load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot read model " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return tree_from_json(ss.str());
}

}  // namespace commentlens::dtree
