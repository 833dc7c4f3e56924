#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "commentlens/corpus.hpp"

namespace commentlens::cli {

namespace fs = std::filesystem;

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_data = 2, exit_fetch = 3 };

/// Parses `args` (without the program name), runs the subcommand and maps
/// failures to an exit code plus one `error: <Code>: <message>` line on
/// `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// ---- training data from labeled records ----

enum class Task { extent, target, category };

std::optional<Task> parse_task(std::string_view name) noexcept;

struct TrainConfig {
    Task task = Task::category;
    std::size_t min_examples = 10;
    std::size_t word_cap = default_word_cap;
};

/// Examples for one task from the labeled records of `store`. Extent
/// examples take each record span as one extent; target and category
/// examples use the records carrying that label.
dtree::Dataset build_training_set(const corpus::Store& store, const std::vector<corpus::CommentRecord>& records,
                                  const TrainConfig& config);

dtree::DecisionTree train_model(const corpus::Store& store, const std::vector<corpus::CommentRecord>& records,
                                const TrainConfig& config);

/// One hand label: `file<TAB>line<TAB>Category[<TAB>Target]`.
struct HandLabel {
    std::string file;  // "<project>/<path>" or a path unique across projects
    int line = 0;      // first line of the extent
    std::string category;
    std::optional<std::string> target;
};

/// Blank and `#` lines skipped. Throws InvalidInput.
std::vector<HandLabel> parse_hand_labels(std::string_view text);

/// Sets category and target on the matching store records. A label without
/// a target gets the bootstrap heuristic's. Throws InvalidInput when a
/// label matches no extent.
void apply_hand_labels(corpus::Store& store, const std::vector<HandLabel>& labels);

// ---- annotation service ----

struct ApiResponse {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

/// State behind the annotation HTTP API. Each session is an append-only
/// JSONL log under `sessions_dir`; replaying it yields the final choice
/// per task and the time spent on it summed over revisions.
class AnnotationService {
public:
    AnnotationService(std::vector<corpus::CommentRecord> tasks, fs::path sessions_dir,
                      std::optional<corpus::Store> sources = std::nullopt);

    ApiResponse next_task(const std::string& session);
    ApiResponse annotate(const std::string& body);  // POST
    ApiResponse revise(const std::string& body);    // PUT
    ApiResponse progress(const std::string& session);
    ApiResponse export_sessions(const std::string& sessions);  // comma separated
    ApiResponse source(const std::string& task_id);

    std::size_t task_count() const noexcept { return tasks_.size(); }

private:
    struct Choice {
        std::string category;
        std::optional<std::string> target;
        std::int64_t elapsed_ms = 0;
    };
    using Session = std::map<std::string, Choice>;  // task id -> final choice

    ApiResponse submit(const std::string& body, bool revision);
    Session& load(const std::string& session);
    std::optional<std::size_t> task_index(const std::string& id) const;
    std::string progress_json(const Session& s) const;

    std::vector<corpus::CommentRecord> tasks_;
    fs::path dir_;
    std::optional<corpus::Store> sources_;
    std::map<std::string, Session> sessions_;
    std::mutex mutex_;
};

/// HTTP front end of a service: the API plus static files from
/// `static_dir`, or a placeholder page when it is empty.
class AnnotationServer {
public:
    explicit AnnotationServer(AnnotationService& service, const fs::path& static_dir = {});
    ~AnnotationServer();

    /// Port 0 picks a free port. Returns the bound port; throws IoError.
    int bind(const std::string& host, int port);
    /// Blocks until `stop`.
    void listen();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace commentlens::cli
