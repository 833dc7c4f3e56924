#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "commentlens/category.hpp"
#include "commentlens/decision_tree.hpp"
#include "commentlens/pipeline.hpp"
#include "commentlens/syntax.hpp"

namespace commentlens::corpus {

namespace fs = std::filesystem;

struct ProjectRef {
    std::string name;
    std::string origin;  // local directory or remote repository URL
    std::optional<std::string> revision;

    bool is_remote() const;
};

/// `name<TAB>origin[<TAB>revision]` per line; blank and `#` lines skipped.
/// Throws InvalidInput on malformed lines or duplicate names.
std::vector<ProjectRef> parse_manifest(std::string_view text);
std::vector<ProjectRef> load_manifest(const fs::path& path);

/// Lines before and after an extent shown with it.
inline constexpr int snippet_context = 4;

struct CommentRecord {
    std::string id;  // "<project>:<file>:<line>:<col>"
    std::string project;
    std::string file;  // relative to the project root, '/' separated
    Language language = Language::java;
    SourceSpan span;
    std::string text;
    std::string snippet;
    int snippet_start_line = 1;

    std::optional<std::string> target;
    std::optional<SourceSpan> target_span;
    std::optional<std::string> target_text;
    std::optional<std::string> category;
    std::optional<double> confidence;
    std::optional<std::string> annotator;
    std::optional<std::int64_t> elapsed_ms;

    friend bool operator==(const CommentRecord&, const CommentRecord&) = default;
};

nlohmann::ordered_json to_json(const CommentRecord& r);
/// Throws InvalidInput on missing fields or labels outside the closed sets.
CommentRecord record_from_json(const nlohmann::json& j);

std::string write_jsonl(const std::vector<CommentRecord>& records);
std::vector<CommentRecord> read_jsonl(std::string_view text);
void save_records(const fs::path& path, const std::vector<CommentRecord>& records);
std::vector<CommentRecord> load_records(const fs::path& path);

struct ProjectSummary {
    std::string name;
    std::string origin;
    std::optional<std::string> revision;
    std::string root;  // absolute directory holding the sources
    std::size_t files = 0;
    std::size_t sloc = 0;      // non-blank lines
    std::size_t comments = 0;  // comment tokens
    std::size_t extents = 0;
    std::size_t unparsable = 0;
    std::size_t skipped_large = 0;

    friend bool operator==(const ProjectSummary&, const ProjectSummary&) = default;
};

/// A corpus directory: `summary.json` plus `<project>/records.jsonl`.
struct Store {
    fs::path dir;
    std::vector<ProjectSummary> projects;
    std::vector<CommentRecord> records;  // by project, then file, then offset

    const ProjectSummary* project(std::string_view name) const;
};

void save_store(const Store& store);
/// Throws IoError when the directory has no summary.
Store load_store(const fs::path& dir);

struct IngestOptions {
    std::optional<Language> language;  // both when absent
    std::optional<dtree::DecisionTree> extent_model;
    fs::path cache_dir;  // clones of remote projects; see default_cache_dir
    unsigned jobs = 1;
    std::function<void(const std::string&)> warn;
};

/// $COMMENT_LENS_CACHE, else $XDG_CACHE_HOME/commentlens, else
/// ~/.cache/commentlens.
fs::path default_cache_dir();

/// Local directory of a project, cloning remote origins into the cache on
/// first use. Throws FetchFailed.
fs::path fetch_project(const ProjectRef& ref, const fs::path& cache_dir);

/// Parses every .java/.py file of every project into one record per
/// extent and writes the store to `out`. Projects that cannot be fetched
/// are skipped with a warning; unparsable files are counted.
Store ingest(const std::vector<ProjectRef>& manifest, const fs::path& out, const IngestOptions& options);

/// Summary and records of a single source tree.
std::pair<ProjectSummary, std::vector<CommentRecord>> scan_project(const ProjectRef& ref, const fs::path& root,
                                                                   const IngestOptions& options);

/// Record for one extent of `file`, with its snippet.
CommentRecord make_record(const std::string& project, const std::string& rel_path, const ParsedFile& file,
                          const extent::CommentExtent& extent);

/// Comment tokens lying inside `span`, merged into one extent.
extent::CommentExtent extent_at(const ParsedFile& file, const SourceSpan& span);

struct SampleSpec {
    std::size_t size = 0;
    std::size_t per_file_cap = 3;
    std::uint64_t seed = 0;
};

struct SampleResult {
    std::vector<CommentRecord> records;
    bool insufficient = false;  // fewer than `size` could be drawn
};

/// Shuffle every record with the seeded generator, then take records in
/// that order, skipping any that would exceed the per-file cap.
SampleResult sample_comments(const std::vector<CommentRecord>& records, const SampleSpec& spec);

/// Parses record sources on demand, keeping each file once.
class SourceCache {
public:
    explicit SourceCache(const Store& store) : store_(store) {}
    /// Throws IoError or UnparsableFile.
    const ParsedFile& file(const CommentRecord& record);

private:
    const Store& store_;
    std::map<std::string, std::unique_ptr<ParsedFile>> files_;
};

/// Runs target and category classification on every record, in place,
/// filling target, target_span, target_text, category and confidence.
void classify_records(const Store& store, std::vector<CommentRecord>& records, const Models& models, unsigned jobs = 1);

struct ProjectStats {
    std::string project;
    std::size_t total = 0;
    std::map<std::string, double> ratio;  // category name -> fraction
};

/// Per-project category fractions of classified records, by comment count
/// descending then name. Records without a category are ignored.
std::vector<ProjectStats> project_category_stats(const std::vector<CommentRecord>& records);

struct PairCount {
    std::string pair;  // "verb noun", both lemmas
    std::size_t projects = 0;
    friend bool operator==(const PairCount&, const PairCount&) = default;
};

/// Verb+noun pairs in records of `category`, each counted once per
/// project, ranked by project count then pair.
std::vector<PairCount> mine_verb_noun(const std::vector<CommentRecord>& records,
                                      CategoryLabel category = CategoryLabel::postcondition);

/// Records of `category` whose text contains every word, compared by
/// lowercased lemma.
std::vector<CommentRecord> grep_classified(const std::vector<CommentRecord>& records, CategoryLabel category,
                                           const std::vector<std::string>& words);

/// Runs `fn(i)` for i in [0, n) on up to `jobs` threads. The first
/// exception is rethrown after all workers stop.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn);

}  // namespace commentlens::corpus
