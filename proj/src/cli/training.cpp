#include <algorithm>
#include <sstream>

#include "commentlens/cli.hpp"
#include "commentlens/error.hpp"

namespace commentlens::cli {

using corpus::CommentRecord;

std::optional<Task> parse_task(std::string_view name) noexcept {
    if (name == "extent") return Task::extent;
    if (name == "target") return Task::target;
    if (name == "category") return Task::category;
    return std::nullopt;
}

namespace {

dtree::Dataset extent_examples(const corpus::Store& store, const std::vector<CommentRecord>& records) {
    std::map<std::pair<std::string, std::string>, std::vector<const CommentRecord*>> by_file;
    for (const auto& r : records) by_file[{r.project, r.file}].push_back(&r);
    corpus::SourceCache cache(store);
    std::vector<ParsedFile> files;
    std::vector<std::vector<extent::IobTag>> tags;
    for (const auto& [key, recs] : by_file) {
        const auto& file = cache.file(*recs.front());
        std::vector<extent::IobTag> t(file.comments().size(), extent::IobTag::B);
        for (const auto* r : recs) {
            bool first = true;
            for (std::size_t i = 0; i < t.size(); ++i) {
                if (!r->span.contains(file.comments()[i].span)) continue;
                t[i] = first ? extent::IobTag::B : extent::IobTag::I;
                first = false;
            }
        }
        files.push_back(file);
        tags.push_back(std::move(t));
    }
    return extent::training_set(std::span<const ParsedFile>(files),
                                [&](const ParsedFile& f) { return tags[static_cast<std::size_t>(&f - files.data())]; });
}

dtree::Dataset labeled_examples(const corpus::Store& store, const std::vector<CommentRecord>& records, Task task,
                                std::size_t word_cap) {
    std::vector<const CommentRecord*> labeled;
    for (const auto& r : records) {
        const auto& label = task == Task::target ? r.target : r.category;
        if (label && !nlp::is_non_english(r.text)) labeled.push_back(&r);
    }
    std::vector<std::string> texts;
    for (const auto* r : labeled) texts.push_back(r->text);
    auto vocab = build_vocabulary(texts, word_cap);

    dtree::Dataset data;
    if (task == Task::target) {
        for (auto l : all_target_labels()) data.label_set.emplace_back(to_string(l));
    } else {
        for (auto c : all_categories()) data.label_set.emplace_back(to_string(c));
    }
    corpus::SourceCache cache(store);
    for (const auto* r : labeled) {
        const auto& file = cache.file(*r);
        auto extent = corpus::extent_at(file, r->span);
        auto features = build_feature_vector(file, extent, nlp::analyze(extent.text), vocab);
        std::string label;
        if (task == Task::target) {
            label = std::string(to_string(*parse_target_label(*r->target)));
        } else {
            label = std::string(to_string(*parse_category(*r->category)));
        }
        data.examples.push_back({std::move(features), std::move(label)});
    }
    return data;
}

std::string_view task_name(Task t) {
    switch (t) {
    case Task::extent: return "extent";
    case Task::target: return "target";
    case Task::category: return "category";
    }
    return "";
}

}  // namespace

dtree::Dataset build_training_set(const corpus::Store& store, const std::vector<CommentRecord>& records,
                                  const TrainConfig& config) {
    if (config.task == Task::extent) return extent_examples(store, records);
    return labeled_examples(store, records, config.task, config.word_cap);
}

dtree::DecisionTree train_model(const corpus::Store& store, const std::vector<CommentRecord>& records,
                                const TrainConfig& config) {
    auto data = build_training_set(store, records, config);
    if (data.examples.empty()) {
        throw Error(ErrorCode::invalid_input, "no labeled examples for task " + std::string(task_name(config.task)));
    }
    return dtree::train_c45(data, {config.min_examples, std::string(task_name(config.task))});
}

std::vector<HandLabel> parse_hand_labels(std::string_view text) {
    std::vector<HandLabel> out;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, '\t');) cols.push_back(c);
        auto where = "labels line " + std::to_string(number);
        if (cols.size() < 3 || cols.size() > 4) throw Error(ErrorCode::invalid_input, where + ": expected file<TAB>line<TAB>category[<TAB>target]");
        HandLabel h;
        h.file = cols[0];
        try {
            std::size_t used = 0;
            h.line = std::stoi(cols[1], &used);
            if (used != cols[1].size() || h.line < 1) throw std::invalid_argument(cols[1]);
        } catch (const std::logic_error&) {
            throw Error(ErrorCode::invalid_input, where + ": bad line number '" + cols[1] + "'");
        }
        auto c = parse_category(cols[2]);
        if (!c) throw Error(ErrorCode::invalid_input, where + ": unknown category '" + cols[2] + "'");
        h.category = std::string(to_string(*c));
        if (cols.size() == 4 && !cols[3].empty()) {
            auto t = parse_target_label(cols[3]);
            if (!t) throw Error(ErrorCode::invalid_input, where + ": unknown target '" + cols[3] + "'");
            h.target = std::string(to_string(*t));
        }
        out.push_back(std::move(h));
    }
    return out;
}

void apply_hand_labels(corpus::Store& store, const std::vector<HandLabel>& labels) {
    corpus::SourceCache cache(store);
    for (const auto& h : labels) {
        CommentRecord* hit = nullptr;
        for (auto& r : store.records) {
            if (r.span.start_line != h.line) continue;
            if (r.project + "/" + r.file != h.file && r.file != h.file) continue;
            if (hit) throw Error(ErrorCode::invalid_input, h.file + ":" + std::to_string(h.line) + " is ambiguous");
            hit = &r;
        }
        if (!hit) throw Error(ErrorCode::invalid_input, "no extent starts at " + h.file + ":" + std::to_string(h.line));
        const auto& file = cache.file(*hit);
        auto extent = corpus::extent_at(file, hit->span);
        auto label = h.target ? *parse_target_label(*h.target) : heuristic_target(file, extent);
        auto resolved = resolve_target_span(file, extent, label);
        hit->category = h.category;
        hit->target = std::string(to_string(resolved.label));
        hit->target_span = resolved.span;
        hit->target_text.reset();
        if (resolved.span) hit->target_text = std::string(file.slice(*resolved.span));
    }
}

}  // namespace commentlens::cli
