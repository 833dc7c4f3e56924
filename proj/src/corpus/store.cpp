#include <fstream>
#include <sstream>

#include "commentlens/corpus.hpp"
#include "commentlens/error.hpp"
#include "commentlens/target.hpp"

namespace commentlens::corpus {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::io_error, "cannot write " + path.string());
    out << content;
    if (!out) throw Error(ErrorCode::io_error, "write failed for " + path.string());
}

bool valid_project_name(std::string_view name) {
    if (name.empty() || name == "." || name == "..") return false;
    for (char c : name) {
        if (c == '/' || c == '\\' || c == ':' || static_cast<unsigned char>(c) < 0x20) return false;
    }
    return true;
}

ordered_json span_json(const SourceSpan& s) {
    return {{"start_line", s.start_line}, {"start_col", s.start_col},       {"end_line", s.end_line},
            {"end_col", s.end_col},       {"start_offset", s.start_offset}, {"end_offset", s.end_offset}};
}

SourceSpan span_from(const json& j) {
    SourceSpan s;
    s.start_line = j.at("start_line").get<int>();
    s.start_col = j.at("start_col").get<int>();
    s.end_line = j.at("end_line").get<int>();
    s.end_col = j.at("end_col").get<int>();
    s.start_offset = j.at("start_offset").get<std::size_t>();
    s.end_offset = j.at("end_offset").get<std::size_t>();
    if (s.start_offset > s.end_offset || s.start_line > s.end_line) {
        throw Error(ErrorCode::invalid_input, "span ends before it starts");
    }
    return s;
}

template <typename T>
std::optional<T> optional_field(const json& j, const char* name) {
    auto it = j.find(name);
    if (it == j.end() || it->is_null()) return std::nullopt;
    return it->get<T>();
}

}  // namespace

bool ProjectRef::is_remote() const {
    return origin.find("://") != std::string::npos || origin.starts_with("git@") || origin.ends_with(".git");
}

std::vector<ProjectRef> parse_manifest(std::string_view text) {
    std::vector<ProjectRef> refs;
    std::istringstream in{std::string(text)};
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> cols;
        std::size_t pos = 0;
        while (true) {
            auto tab = line.find('\t', pos);
            cols.push_back(line.substr(pos, tab == std::string::npos ? std::string::npos : tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        auto where = "manifest line " + std::to_string(number);
        if (cols.size() < 2 || cols.size() > 3 || cols[1].empty()) {
            throw Error(ErrorCode::invalid_input, where + ": expected name<TAB>origin[<TAB>revision]");
        }
        if (!valid_project_name(cols[0])) throw Error(ErrorCode::invalid_input, where + ": bad project name");
        for (const auto& r : refs) {
            if (r.name == cols[0]) throw Error(ErrorCode::invalid_input, where + ": duplicate project " + cols[0]);
        }
        ProjectRef ref{cols[0], cols[1], std::nullopt};
        if (cols.size() == 3 && !cols[2].empty()) ref.revision = cols[2];
        refs.push_back(std::move(ref));
    }
    return refs;
}

std::vector<ProjectRef> load_manifest(const fs::path& path) {
    auto refs = parse_manifest(read_file(path));
    // Local origins are relative to the manifest.
    for (auto& r : refs) {
        if (!r.is_remote() && fs::path(r.origin).is_relative()) {
            r.origin = (fs::absolute(path).parent_path() / r.origin).lexically_normal().string();
        }
    }
    return refs;
}

ordered_json to_json(const CommentRecord& r) {
    ordered_json j;
    j["id"] = r.id;
    j["project"] = r.project;
    j["file"] = r.file;
    j["language"] = std::string(to_string(r.language));
    j["span"] = span_json(r.span);
    j["text"] = r.text;
    j["snippet"] = r.snippet;
    j["snippet_start_line"] = r.snippet_start_line;
    if (r.target) j["target"] = *r.target;
    if (r.target_span) j["target_span"] = span_json(*r.target_span);
    if (r.target_text) j["target_text"] = *r.target_text;
    if (r.category) j["category"] = *r.category;
    if (r.confidence) j["confidence"] = *r.confidence;
    if (r.annotator) j["annotator"] = *r.annotator;
    if (r.elapsed_ms) j["elapsed_ms"] = *r.elapsed_ms;
    return j;
}

CommentRecord record_from_json(const json& j) {
    try {
        CommentRecord r;
        r.id = j.at("id").get<std::string>();
        r.project = j.at("project").get<std::string>();
        r.file = j.at("file").get<std::string>();
        auto lang = parse_language(j.at("language").get<std::string>());
        if (!lang) throw Error(ErrorCode::invalid_input, "record " + r.id + ": unknown language");
        r.language = *lang;
        r.span = span_from(j.at("span"));
        r.text = j.at("text").get<std::string>();
        r.snippet = j.value("snippet", std::string());
        r.snippet_start_line = j.value("snippet_start_line", 1);
        r.target = optional_field<std::string>(j, "target");
        if (auto it = j.find("target_span"); it != j.end() && !it->is_null()) r.target_span = span_from(*it);
        r.target_text = optional_field<std::string>(j, "target_text");
        r.category = optional_field<std::string>(j, "category");
        r.confidence = optional_field<double>(j, "confidence");
        r.annotator = optional_field<std::string>(j, "annotator");
        r.elapsed_ms = optional_field<std::int64_t>(j, "elapsed_ms");
        if (r.target && !parse_target_label(*r.target)) {
            throw Error(ErrorCode::invalid_input, "record " + r.id + ": unknown target '" + *r.target + "'");
        }
        if (r.category) {
            auto c = parse_category(*r.category);
            if (!c) throw Error(ErrorCode::invalid_input, "record " + r.id + ": unknown category '" + *r.category + "'");
            r.category = std::string(to_string(*c));
        }
        return r;
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_input, std::string("malformed record: ") + e.what());
    }
}

std::string write_jsonl(const std::vector<CommentRecord>& records) {
    std::string out;
    for (const auto& r : records) {
        out += to_json(r).dump(-1, ' ', false, json::error_handler_t::replace);
        out += '\n';
    }
    return out;
}

std::vector<CommentRecord> read_jsonl(std::string_view text) {
    std::vector<CommentRecord> out;
    std::size_t pos = 0;
    int number = 0;
    while (pos < text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) nl = text.size();
        auto line = text.substr(pos, nl - pos);
        pos = nl + 1;
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::invalid_input, "line " + std::to_string(number) + ": " + e.what());
        }
        out.push_back(record_from_json(j));
    }
    return out;
}

void save_records(const fs::path& path, const std::vector<CommentRecord>& records) {
    write_file(path, write_jsonl(records));
}

std::vector<CommentRecord> load_records(const fs::path& path) { return read_jsonl(read_file(path)); }

const ProjectSummary* Store::project(std::string_view name) const {
    for (const auto& p : projects) {
        if (p.name == name) return &p;
    }
    return nullptr;
}

void save_store(const Store& store) {
    ordered_json summary;
    summary["format"] = "commentlens-store";
    summary["version"] = 1;
    auto& projects = summary["projects"] = ordered_json::array();
    for (const auto& p : store.projects) {
        ordered_json j = {{"name", p.name},
                          {"origin", p.origin},
                          {"root", p.root},
                          {"files", p.files},
                          {"sloc", p.sloc},
                          {"comments", p.comments},
                          {"extents", p.extents},
                          {"unparsable", p.unparsable},
                          {"skipped_large", p.skipped_large}};
        if (p.revision) j["revision"] = *p.revision;
        projects.push_back(j);
    }
    fs::create_directories(store.dir);
    write_file(store.dir / "summary.json", summary.dump(2) + "\n");
    for (const auto& p : store.projects) {
        std::vector<CommentRecord> mine;
        for (const auto& r : store.records) {
            if (r.project == p.name) mine.push_back(r);
        }
        save_records(store.dir / p.name / "records.jsonl", mine);
    }
}

Store load_store(const fs::path& dir) {
    auto path = dir / "summary.json";
    if (!fs::exists(path)) throw Error(ErrorCode::io_error, "no corpus store at " + dir.string());
    Store store;
    store.dir = dir;
    try {
        auto summary = json::parse(read_file(path));
        for (const auto& j : summary.at("projects")) {
            ProjectSummary p;
            p.name = j.at("name").get<std::string>();
            if (!valid_project_name(p.name)) throw Error(ErrorCode::invalid_input, "bad project name in summary");
            p.origin = j.at("origin").get<std::string>();
            p.revision = optional_field<std::string>(j, "revision");
            p.root = j.at("root").get<std::string>();
            if (fs::path(p.root).is_relative()) p.root = (fs::absolute(dir) / p.root).lexically_normal().string();
            p.files = j.value("files", std::size_t{0});
            p.sloc = j.value("sloc", std::size_t{0});
            p.comments = j.value("comments", std::size_t{0});
            p.extents = j.value("extents", std::size_t{0});
            p.unparsable = j.value("unparsable", std::size_t{0});
            p.skipped_large = j.value("skipped_large", std::size_t{0});
            store.projects.push_back(std::move(p));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorCode::invalid_input, "malformed summary.json: " + std::string(e.what()));
    }
    for (const auto& p : store.projects) {
        auto records_path = dir / p.name / "records.jsonl";
        if (!fs::exists(records_path)) continue;
        for (auto& r : load_records(records_path)) store.records.push_back(std::move(r));
    }
    return store;
}

}  // namespace commentlens::corpus
