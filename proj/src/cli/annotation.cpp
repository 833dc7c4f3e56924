#include <cctype>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <httplib.h>

#include "commentlens/cli.hpp"
#include "commentlens/error.hpp"

namespace commentlens::cli {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

ApiResponse reply(int status, const ordered_json& body) { return {status, body.dump(), "application/json"}; }

ApiResponse fail(int status, const std::string& message) { return reply(status, {{"error", message}}); }

bool valid_session(std::string_view s) {
    if (s.empty() || s.size() > 64) return false;
    for (char c : s) {
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') return false;
    }
    return s != "." && s != "..";
}

std::int64_t now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

const char* placeholder_page = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>commentlens annotation</title></head>
<body><h1>commentlens annotation server</h1>
<p>The browser UI is not installed. Start the server with <code>--static DIR</code> to serve it.</p>
<ul>
<li>GET /api/tasks?session=S</li>
<li>POST /api/annotations {session, task, label, elapsed_ms[, target]}</li>
<li>PUT /api/annotations (revision)</li>
<li>GET /api/progress?session=S</li>
<li>GET /api/export?sessions=S1,S2</li>
</ul></body></html>
)";

}  // namespace

AnnotationService::AnnotationService(std::vector<corpus::CommentRecord> tasks, fs::path sessions_dir,
                                     std::optional<corpus::Store> sources)
    : tasks_(std::move(tasks)), dir_(std::move(sessions_dir)), sources_(std::move(sources)) {
    std::set<std::string> ids;
    for (const auto& t : tasks_) {
        if (!ids.insert(t.id).second) throw Error(ErrorCode::invalid_input, "duplicate task id " + t.id);
    }
    fs::create_directories(dir_);
}

std::optional<std::size_t> AnnotationService::task_index(const std::string& id) const {
    for (std::size_t i = 0; i < tasks_.size(); ++i) {
        if (tasks_[i].id == id) return i;
    }
    return std::nullopt;
}

AnnotationService::Session& AnnotationService::load(const std::string& session) {
    auto it = sessions_.find(session);
    if (it != sessions_.end()) return it->second;
    Session s;
    std::ifstream in(dir_ / (session + ".jsonl"));
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto e = json::parse(line, nullptr, false);
        if (e.is_discarded() || !e.contains("task")) continue;  // a torn last line
        auto& c = s[e["task"].get<std::string>()];
        c.category = e.value("label", std::string());
        c.target.reset();
        if (e.contains("target")) c.target = e["target"].get<std::string>();
        c.elapsed_ms += e.value("elapsed_ms", std::int64_t{0});
    }
    return sessions_.emplace(session, std::move(s)).first->second;
}

std::string AnnotationService::progress_json(const Session& s) const {
    std::size_t done = 0;
    for (const auto& t : tasks_) done += s.count(t.id);
    return ordered_json{{"done", done}, {"total", tasks_.size()}}.dump();
}

ApiResponse AnnotationService::next_task(const std::string& session) {
    if (!valid_session(session)) return fail(400, "bad or missing session");
    std::lock_guard lock(mutex_);
    auto& s = load(session);
    ordered_json body = json::parse(progress_json(s));
    body["task"] = nullptr;
    for (const auto& t : tasks_) {
        if (s.count(t.id)) continue;
        ordered_json task = {{"id", t.id},
                             {"project", t.project},
                             {"file", t.file},
                             {"text", t.text},
                             {"snippet", t.snippet},
                             {"snippet_start_line", t.snippet_start_line},
                             {"start_line", t.span.start_line},
                             {"end_line", t.span.end_line}};
        if (sources_) task["link"] = "/api/source?task=" + t.id;
        body["task"] = task;
        break;
    }
    auto& menu = body["categories"] = ordered_json::array();
    for (auto c : all_categories()) menu.push_back({{"name", to_string(c)}, {"guideline", guideline(c)}});
    auto& targets = body["targets"] = ordered_json::array();
    for (auto l : all_target_labels()) targets.push_back(to_string(l));
    return reply(200, body);
}

ApiResponse AnnotationService::submit(const std::string& text, bool revision) {
    auto body = json::parse(text, nullptr, false);
    if (body.is_discarded() || !body.is_object()) return fail(400, "body is not a JSON object");
    auto session = body.value("session", std::string());
    auto task = body.contains("task") ? body["task"] : body.value("task_id", json());
    if (!valid_session(session)) return fail(400, "bad or missing session");
    if (!task.is_string()) return fail(400, "missing task id");
    if (!body.contains("label") || !body["label"].is_string()) return fail(400, "missing label");
    auto category = parse_category(body["label"].get<std::string>());
    if (!category) return fail(400, "label outside the category set: " + body["label"].get<std::string>());
    std::optional<std::string> target;
    if (body.contains("target") && !body["target"].is_null()) {
        auto t = body["target"].is_string() ? parse_target_label(body["target"].get<std::string>()) : std::nullopt;
        if (!t) return fail(400, "target outside the target set");
        target = std::string(to_string(*t));
    }
    if (!body.contains("elapsed_ms") || !body["elapsed_ms"].is_number() || body["elapsed_ms"].get<double>() <= 0) {
        return fail(400, "elapsed_ms must be a positive number");
    }
    auto elapsed = static_cast<std::int64_t>(body["elapsed_ms"].get<double>() + 0.5);
    auto id = task.get<std::string>();
    if (!task_index(id)) return fail(404, "unknown task " + id);

    std::lock_guard lock(mutex_);
    auto& s = load(session);
    bool answered = s.count(id) > 0;
    if (!revision && answered) return fail(409, "task already annotated in this session; use PUT to revise");
    if (revision && !answered) return fail(404, "nothing to revise for task " + id);

    ordered_json event = {{"task", id}, {"label", to_string(*category)}};
    if (target) event["target"] = *target;
    event["elapsed_ms"] = elapsed;
    event["timestamp_ms"] = now_ms();
    if (revision) event["revision"] = true;
    std::ofstream out(dir_ / (session + ".jsonl"), std::ios::app | std::ios::binary);
    out << event.dump() << '\n';
    out.flush();
    if (!out) return fail(500, "cannot append to session log");

    auto& c = s[id];
    c.category = std::string(to_string(*category));
    c.target = target;
    c.elapsed_ms += elapsed;
    return {revision ? 200 : 201, progress_json(s), "application/json"};
}

ApiResponse AnnotationService::annotate(const std::string& body) { return submit(body, false); }

ApiResponse AnnotationService::revise(const std::string& body) { return submit(body, true); }

ApiResponse AnnotationService::progress(const std::string& session) {
    if (!valid_session(session)) return fail(400, "bad or missing session");
    std::lock_guard lock(mutex_);
    return {200, progress_json(load(session)), "application/json"};
}

ApiResponse AnnotationService::export_sessions(const std::string& sessions) {
    std::vector<std::string> names;
    std::stringstream ss(sessions);
    for (std::string s; std::getline(ss, s, ',');) {
        if (!valid_session(s)) return fail(400, "bad session name '" + s + "'");
        names.push_back(s);
    }
    if (names.empty()) return fail(400, "no sessions given");
    std::lock_guard lock(mutex_);
    std::vector<corpus::CommentRecord> out;
    for (const auto& name : names) {
        const auto& s = load(name);
        for (const auto& t : tasks_) {
            auto it = s.find(t.id);
            if (it == s.end()) continue;
            auto r = t;
            r.category = it->second.category;
            r.target = it->second.target;
            if (!r.target) {
                r.target_span.reset();
                r.target_text.reset();
            }
            r.confidence.reset();
            r.annotator = name;
            r.elapsed_ms = it->second.elapsed_ms;
            out.push_back(std::move(r));
        }
    }
    return {200, corpus::write_jsonl(out), "application/x-ndjson"};
}

ApiResponse AnnotationService::source(const std::string& task_id) {
    auto i = task_index(task_id);
    if (!i) return fail(404, "unknown task " + task_id);
    if (!sources_) return fail(404, "no source store configured");
    const auto& t = tasks_[*i];
    const auto* project = sources_->project(t.project);
    if (!project) return fail(404, "unknown project " + t.project);
    std::ifstream in(fs::path(project->root) / t.file, std::ios::binary);
    if (!in) return fail(404, "source not readable");
    std::ostringstream text;
    text << in.rdbuf();
    return {200, text.str(), "text/plain; charset=utf-8"};
}

struct AnnotationServer::Impl {
    httplib::Server server;
};

AnnotationServer::AnnotationServer(AnnotationService& service, const fs::path& static_dir)
    : impl_(std::make_unique<Impl>()) {
    auto& server = impl_->server;
    auto send = [](httplib::Response& res, const ApiResponse& r) {
        res.status = r.status;
        res.set_content(r.body, r.content_type);
    };
    server.Get("/api/tasks", [&service, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.next_task(req.get_param_value("session")));
    });
    server.Post("/api/annotations", [&service, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.annotate(req.body));
    });
    server.Put("/api/annotations", [&service, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.revise(req.body));
    });
    server.Get("/api/progress", [&service, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.progress(req.get_param_value("session")));
    });
    server.Get("/api/export", [&service, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.export_sessions(req.get_param_value("sessions")));
    });
    server.Get("/api/source", [&service, send](const httplib::Request& req, httplib::Response& res) {
        send(res, service.source(req.get_param_value("task")));
    });
    if (!static_dir.empty()) {
        if (!server.set_mount_point("/", static_dir.string())) {
            throw Error(ErrorCode::io_error, "cannot serve static files from " + static_dir.string());
        }
    } else {
        server.Get("/", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(placeholder_page, "text/html");
        });
    }
}

AnnotationServer::~AnnotationServer() = default;

int AnnotationServer::bind(const std::string& host, int port) {
    int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
    if (bound <= 0) throw Error(ErrorCode::io_error, "cannot listen on " + host + ":" + std::to_string(port));
    return bound;
}

void AnnotationServer::listen() { impl_->server.listen_after_bind(); }

void AnnotationServer::stop() { impl_->server.stop(); }

}  // namespace commentlens::cli
