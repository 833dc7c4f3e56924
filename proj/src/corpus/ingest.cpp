#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include "commentlens/corpus.hpp"
#include "commentlens/error.hpp"

namespace commentlens::corpus {

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
    jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
    if (jobs == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> workers;
    for (unsigned w = 0; w < jobs; ++w) {
        workers.emplace_back([&] {
            while (!failed) {
                auto i = next.fetch_add(1);
                if (i >= n) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed = true;
                }
            }
        });
    }
    for (auto& t : workers) t.join();
    if (error) std::rethrow_exception(error);
}

fs::path default_cache_dir() {
    if (const char* v = std::getenv("COMMENT_LENS_CACHE"); v && *v) return v;
    if (const char* v = std::getenv("XDG_CACHE_HOME"); v && *v) return fs::path(v) / "commentlens";
    if (const char* v = std::getenv("HOME"); v && *v) return fs::path(v) / ".cache" / "commentlens";
    return fs::temp_directory_path() / "commentlens";
}

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (char c : s) {
        if (c == '\'') out += "'\\''";
        else out += c;
    }
    return out + "'";
}

int run_quiet(const std::string& command) { return std::system((command + " >/dev/null 2>&1").c_str()); }

}  // namespace

fs::path fetch_project(const ProjectRef& ref, const fs::path& cache_dir) {
    if (!ref.is_remote()) {
        fs::path root(ref.origin);
        if (!fs::is_directory(root)) throw Error(ErrorCode::fetch_failed, "no such directory: " + ref.origin);
        return fs::absolute(root).lexically_normal();
    }
    auto dest = fs::absolute(cache_dir) / ref.name;
    if (!fs::exists(dest / ".git")) {
        fs::create_directories(cache_dir);
        fs::remove_all(dest);
        std::string cmd = "git clone --quiet ";
        if (!ref.revision) cmd += "--depth 1 ";
        cmd += "-- " + shell_quote(ref.origin) + " " + shell_quote(dest.string());
        if (run_quiet(cmd) != 0) {
            std::error_code ec;
            fs::remove_all(dest, ec);
            throw Error(ErrorCode::fetch_failed, "git clone failed for " + ref.origin);
        }
    }
    if (ref.revision) {
        auto cmd = "git -C " + shell_quote(dest.string()) + " checkout --quiet " + shell_quote(*ref.revision);
        if (run_quiet(cmd) != 0) {
            throw Error(ErrorCode::fetch_failed, "cannot check out " + *ref.revision + " of " + ref.origin);
        }
    }
    return dest;
}

extent::CommentExtent extent_at(const ParsedFile& file, const SourceSpan& span) {
    std::vector<extent::IobTag> tags;
    std::optional<std::size_t> first;
    std::size_t count = 0;
    for (std::size_t i = 0; i < file.comments().size(); ++i) {
        if (span.contains(file.comments()[i].span)) {
            if (!first) first = i;
            ++count;
        }
    }
    if (!first) {
        throw Error(ErrorCode::invalid_input, file.file_id() + ": no comment at line " + std::to_string(span.start_line));
    }
    // Merge just the covered tokens into one extent.
    tags.assign(file.comments().size(), extent::IobTag::B);
    for (std::size_t i = *first + 1; i < *first + count; ++i) tags[i] = extent::IobTag::I;
    auto extents = extent::merge_extents(file, tags);
    for (auto& e : extents) {
        if (e.span.start_offset == file.comments()[*first].span.start_offset) return std::move(e);
    }
    throw Error(ErrorCode::invalid_input, "extent lookup failed");
}

CommentRecord make_record(const std::string& project, const std::string& rel_path, const ParsedFile& file,
                          const extent::CommentExtent& extent) {
    CommentRecord r;
    r.project = project;
    r.file = rel_path;
    r.language = file.language();
    r.span = extent.span;
    r.text = extent.text;
    r.id = project + ":" + rel_path + ":" + std::to_string(extent.span.start_line) + ":" +
           std::to_string(extent.span.start_col);
    int first = std::max(1, extent.span.start_line - snippet_context);
    int last = std::min(file.line_count(), extent.span.end_line + snippet_context);
    r.snippet_start_line = first;
    for (int l = first; l <= last; ++l) {
        r.snippet += file.line_text(l);
        if (l < last) r.snippet += '\n';
    }
    return r;
}

namespace {

std::optional<Language> language_of(const fs::path& p) {
    auto ext = p.extension().string();
    if (ext == ".java") return Language::java;
    if (ext == ".py") return Language::python;
    return std::nullopt;
}

std::vector<fs::path> source_files(const fs::path& root, std::optional<Language> only) {
    std::vector<fs::path> out;
    auto it = fs::recursive_directory_iterator(root, fs::directory_options::skip_permission_denied);
    for (auto end = fs::recursive_directory_iterator(); it != end; ++it) {
        auto name = it->path().filename().string();
        if (it->is_directory() && !name.empty() && name[0] == '.') {
            it.disable_recursion_pending();
            continue;
        }
        if (!it->is_regular_file()) continue;
        auto lang = language_of(it->path());
        if (lang && (!only || *lang == *only)) out.push_back(it->path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::size_t count_sloc(std::string_view text) {
    std::size_t n = 0;
    bool content = false;
    for (char c : text) {
        if (c == '\n') {
            n += content ? 1 : 0;
            content = false;
        } else if (c != ' ' && c != '\t' && c != '\r' && c != '\f') {
            content = true;
        }
    }
    return n + (content ? 1 : 0);
}

struct FileResult {
    bool parsed = false;
    bool large = false;
    std::size_t sloc = 0;
    std::size_t comments = 0;
    std::vector<CommentRecord> records;
};

}  // namespace

std::pair<ProjectSummary, std::vector<CommentRecord>> scan_project(const ProjectRef& ref, const fs::path& root,
                                                                   const IngestOptions& options) {
    ProjectSummary summary;
    summary.name = ref.name;
    summary.origin = ref.origin;
    summary.revision = ref.revision;
    summary.root = root.string();
    auto files = source_files(root, options.language);
    std::vector<FileResult> results(files.size());
    parallel_for(files.size(), options.jobs, [&](std::size_t i) {
        auto& out = results[i];
        const auto& path = files[i];
        if (fs::file_size(path) > max_source_bytes) {
            out.large = true;
            return;
        }
        std::ifstream in(path, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        auto rel = fs::relative(path, root).generic_string();
        try {
            auto file = parse_source(sanitize_utf8(ss.str()), *language_of(path), ref.name + "/" + rel);
            out.parsed = true;
            out.sloc = count_sloc(file.text());
            out.comments = file.comments().size();
            auto tags = options.extent_model ? extent::tag_extents(file, *options.extent_model) : extent::rule_tags(file);
            for (const auto& e : extent::merge_extents(file, tags)) out.records.push_back(make_record(ref.name, rel, file, e));
        } catch (const Error& e) {
            if (e.code() != ErrorCode::unparsable_file) throw;
        }
    });
    std::vector<CommentRecord> records;
    for (std::size_t i = 0; i < files.size(); ++i) {
        auto& r = results[i];
        if (r.large) {
            ++summary.skipped_large;
            continue;
        }
        if (!r.parsed) {
            ++summary.unparsable;
            if (options.warn) options.warn("unparsable file skipped: " + files[i].string());
            continue;
        }
        ++summary.files;
        summary.sloc += r.sloc;
        summary.comments += r.comments;
        summary.extents += r.records.size();
        for (auto& rec : r.records) records.push_back(std::move(rec));
    }
    return {summary, records};
}

Store ingest(const std::vector<ProjectRef>& manifest, const fs::path& out, const IngestOptions& options) {
    Store store;
    store.dir = out;
    auto cache = options.cache_dir.empty() ? default_cache_dir() : options.cache_dir;
    for (const auto& ref : manifest) {
        fs::path root;
        try {
            root = fetch_project(ref, cache);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::fetch_failed) throw;
            if (options.warn) options.warn("FetchFailed: project " + ref.name + " skipped: " + e.what());
            continue;
        }
        auto [summary, records] = scan_project(ref, root, options);
        store.projects.push_back(std::move(summary));
        for (auto& r : records) store.records.push_back(std::move(r));
    }
    save_store(store);
    return store;
}

}  // namespace commentlens::corpus
