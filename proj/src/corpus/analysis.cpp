#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include "commentlens/corpus.hpp"
#include "commentlens/error.hpp"

namespace commentlens::corpus {

namespace {

// Uniform draw from [0, n). Written out rather than taken from
// std::uniform_int_distribution, whose algorithm differs between standard
// libraries, so that a seed names the same sample everywhere.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = rng();
    } while (x >= limit);
    return x % n;
}

ParsedFile parse_record_source(const Store& store, const CommentRecord& record) {
    const auto* project = store.project(record.project);
    if (!project) throw Error(ErrorCode::invalid_input, "record " + record.id + ": unknown project " + record.project);
    auto path = fs::path(project->root) / record.file;
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot read source " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_source(sanitize_utf8(ss.str()), record.language, record.project + "/" + record.file);
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool has_category(const CommentRecord& r, CategoryLabel category) {
    if (!r.category) return false;
    auto c = parse_category(*r.category);
    return c && *c == category;
}

}  // namespace

SampleResult sample_comments(const std::vector<CommentRecord>& records, const SampleSpec& spec) {
    if (spec.per_file_cap == 0) throw Error(ErrorCode::invalid_input, "per-file cap must be at least 1");
    SampleResult result;
    if (spec.size == 0) return result;
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(spec.seed);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[bounded(rng, i)]);
    std::map<std::pair<std::string, std::string>, std::size_t> per_file;
    for (auto i : order) {
        if (result.records.size() == spec.size) break;
        auto& n = per_file[{records[i].project, records[i].file}];
        if (n == spec.per_file_cap) continue;
        ++n;
        result.records.push_back(records[i]);
    }
    result.insufficient = result.records.size() < spec.size;
    return result;
}

const ParsedFile& SourceCache::file(const CommentRecord& record) {
    auto key = record.project + "\n" + record.file;
    auto it = files_.find(key);
    if (it == files_.end()) {
        it = files_.emplace(key, std::make_unique<ParsedFile>(parse_record_source(store_, record))).first;
    }
    return *it->second;
}

void classify_records(const Store& store, std::vector<CommentRecord>& records, const Models& models, unsigned jobs) {
    std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> by_file;
    for (std::size_t i = 0; i < records.size(); ++i) by_file[{records[i].project, records[i].file}].push_back(i);
    std::vector<const std::vector<std::size_t>*> groups;
    for (const auto& [key, idx] : by_file) groups.push_back(&idx);
    parallel_for(groups.size(), jobs, [&](std::size_t g) {
        const auto& idx = *groups[g];
        auto file = parse_record_source(store, records[idx.front()]);
        for (auto i : idx) {
            auto& r = records[i];
            auto a = analyze_extent(file, extent_at(file, r.span), models);
            r.category = std::string(to_string(a.category.label));
            r.confidence = a.category.confidence;
            r.target = std::string(to_string(a.target.label));
            r.target_span = a.target.span;
            r.target_text.reset();
            if (a.target.span) r.target_text = std::string(file.slice(*a.target.span));
        }
    });
}

std::vector<ProjectStats> project_category_stats(const std::vector<CommentRecord>& records) {
    std::map<std::string, std::map<std::string, std::size_t>> counts;
    for (const auto& r : records) {
        if (r.category) ++counts[r.project][*r.category];
    }
    std::vector<ProjectStats> out;
    for (const auto& [project, by_label] : counts) {
        ProjectStats s;
        s.project = project;
        for (const auto& [label, n] : by_label) s.total += n;
        if (s.total == 0) continue;
        for (const auto& [label, n] : by_label) s.ratio[label] = static_cast<double>(n) / static_cast<double>(s.total);
        out.push_back(std::move(s));
    }
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.total > b.total; });
    return out;
}

std::vector<PairCount> mine_verb_noun(const std::vector<CommentRecord>& records, CategoryLabel category) {
    std::map<std::string, std::set<std::string>> projects_of;
    for (const auto& r : records) {
        if (!has_category(r, category) || nlp::is_non_english(r.text)) continue;
        for (const auto& p : nlp::extract_verb_noun_pairs(nlp::analyze(r.text))) {
            projects_of[p.verb + " " + p.noun].insert(r.project);
        }
    }
    std::vector<PairCount> out;
    for (const auto& [pair, projects] : projects_of) out.push_back({pair, projects.size()});
    std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.projects > b.projects; });
    return out;
}

std::vector<CommentRecord> grep_classified(const std::vector<CommentRecord>& records, CategoryLabel category,
                                           const std::vector<std::string>& words) {
    if (words.empty()) throw Error(ErrorCode::invalid_input, "grep needs at least one word");
    std::vector<std::set<std::string>> wanted;
    for (const auto& w : words) {
        auto lw = lower(w);
        wanted.push_back({lw, nlp::lemmatize(lw, "VBZ"), nlp::lemmatize(lw, "NNS")});
    }
    std::vector<CommentRecord> out;
    for (const auto& r : records) {
        if (!has_category(r, category)) continue;
        std::set<std::string> have;
        for (const auto& t : nlp::analyze(r.text).tokens) {
            have.insert(t.lower);
            have.insert(nlp::lemmatize(t.lower, t.pos));
        }
        bool all = std::all_of(wanted.begin(), wanted.end(), [&have](const std::set<std::string>& forms) {
            return std::any_of(forms.begin(), forms.end(), [&have](const std::string& f) { return have.count(f) > 0; });
        });
        if (all) out.push_back(r);
    }
    return out;
}

}  // namespace commentlens::corpus
