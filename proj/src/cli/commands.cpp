#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "commentlens/cli.hpp"
#include "commentlens/error.hpp"
#include "commentlens/evaluation.hpp"

namespace commentlens::cli {

using corpus::CommentRecord;

namespace {

/// Everything a subcommand may read, filled from the flags.
struct RunConfig {
    std::optional<std::string> language;
    std::string manifest;
    std::string store;
    std::string records;
    std::string extent_model;
    std::string target_model;
    std::string category_model;
    std::string out;
    std::uint64_t seed = 0;
    std::size_t size = 0;
    std::size_t cap = 3;
    std::size_t min_examples = 10;
    std::size_t word_cap = default_word_cap;
    unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
    std::string cache;
    std::string task;
    std::string labels;
    std::string mapping;
    std::string predictions;
    std::string gold;
    std::string predicted;
    std::string field = "category";
    std::string category = "Postcondition";
    std::vector<std::string> words;
    std::vector<std::string> files;
    std::size_t top = 0;
    double alpha = eval::default_smoothing;
    bool json = false;
    bool serve = false;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string sessions = "sessions";
    std::string static_dir;
};

class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : out_(&fallback) {
        if (path.empty() || path == "-") return;
        fs::path p(path);
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        file_.open(p, std::ios::binary | std::ios::trunc);
        if (!file_) throw Error(ErrorCode::io_error, "cannot write " + path);
        out_ = &file_;
    }
    std::ostream& operator*() { return *out_; }

private:
    std::ofstream file_;
    std::ostream* out_;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::io_error, "cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string fixed(double v, int digits = 3) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(digits) << v;
    return ss.str();
}

std::optional<dtree::DecisionTree> optional_model(const std::string& path) {
    if (path.empty()) return std::nullopt;
    return dtree::load_model(path);
}

Models load_models(const RunConfig& c) {
    if (c.category_model.empty()) throw Error(ErrorCode::invalid_input, "a category model is required (--category-model)");
    return Models(optional_model(c.extent_model), optional_model(c.target_model), dtree::load_model(c.category_model));
}

std::vector<CommentRecord> store_subset(const RunConfig& c, const corpus::Store& store) {
    return c.records.empty() ? store.records : corpus::load_records(c.records);
}

/// Classified records for the analyses: read as given, or classified from
/// the store with the supplied models.
std::vector<CommentRecord> classified(const RunConfig& c) {
    if (!c.records.empty() && c.store.empty()) return corpus::load_records(c.records);
    if (c.store.empty()) throw Error(ErrorCode::invalid_input, "give --records or --store with models");
    auto store = corpus::load_store(c.store);
    auto records = store_subset(c, store);
    corpus::classify_records(store, records, load_models(c), c.jobs);
    return records;
}

CategoryLabel category_flag(const RunConfig& c) {
    auto cat = parse_category(c.category);
    if (!cat) throw Error(ErrorCode::invalid_input, "unknown category '" + c.category + "'");
    return *cat;
}

const std::optional<std::string>& field_of(const CommentRecord& r, const std::string& field) {
    return field == "target" ? r.target : r.category;
}

std::vector<std::string> field_labels(const std::string& field) {
    std::vector<std::string> out;
    if (field == "target") {
        for (auto l : all_target_labels()) out.emplace_back(to_string(l));
    } else {
        for (auto c : all_categories()) out.emplace_back(to_string(c));
    }
    return out;
}

// ---- subcommands ----

int cmd_ingest(const RunConfig& c, std::ostream& out, std::ostream& err) {
    corpus::IngestOptions opts;
    if (c.language) opts.language = parse_language(*c.language);
    opts.extent_model = optional_model(c.extent_model);
    opts.cache_dir = c.cache;
    opts.jobs = c.jobs;
    opts.warn = [&err](const std::string& w) { err << "warning: " << w << '\n'; };
    auto manifest = corpus::load_manifest(c.manifest);
    auto store = corpus::ingest(manifest, c.out, opts);
    out << "project\tfiles\tsloc\tcomments\textents\tunparsable\n";
    for (const auto& p : store.projects) {
        out << p.name << '\t' << p.files << '\t' << p.sloc << '\t' << p.comments << '\t' << p.extents << '\t'
            << p.unparsable << '\n';
    }
    if (!manifest.empty() && store.projects.empty()) {
        throw Error(ErrorCode::fetch_failed, "no project of the manifest could be fetched");
    }
    return exit_ok;
}

int cmd_sample(const RunConfig& c, std::ostream& out, std::ostream& err) {
    auto store = corpus::load_store(c.store);
    auto result = corpus::sample_comments(store.records, {c.size, c.cap, c.seed});
    if (result.insufficient) {
        err << "warning: InsufficientComments: drew " << result.records.size() << " of " << c.size << " requested\n";
    }
    Output o(c.out, out);
    *o << corpus::write_jsonl(result.records);
    return exit_ok;
}

int cmd_label(const RunConfig& c, std::ostream& out, std::ostream&) {
    auto store = corpus::load_store(c.store);
    auto labels = parse_hand_labels(read_text(c.labels));
    apply_hand_labels(store, labels);
    if (!c.out.empty()) store.dir = c.out;
    corpus::save_store(store);
    out << "labeled " << labels.size() << " extents in " << store.dir.string() << '\n';
    return exit_ok;
}

int cmd_train(const RunConfig& c, std::ostream& out, std::ostream&) {
    auto task = parse_task(c.task);
    if (!task) throw Error(ErrorCode::invalid_input, "unknown task '" + c.task + "'");
    auto store = corpus::load_store(c.store);
    auto records = store_subset(c, store);
    auto tree = train_model(store, records, {*task, c.min_examples, c.word_cap});
    dtree::save_model(tree, c.out);
    auto rules = fs::path(c.out).replace_extension(".rules.txt");
    out << "trained " << c.task << " tree on " << tree.training_examples << " examples: " << tree.root.node_count()
        << " nodes, depth " << tree.root.depth() << "\nwrote " << c.out << " and " << rules.string() << '\n';
    return exit_ok;
}

int cmd_classify(const RunConfig& c, std::ostream& out, std::ostream&) {
    auto store = corpus::load_store(c.store);
    auto records = store_subset(c, store);
    corpus::classify_records(store, records, load_models(c), c.jobs);
    Output o(c.out, out);
    *o << corpus::write_jsonl(records);
    return exit_ok;
}

int cmd_stats(const RunConfig& c, std::ostream& out, std::ostream&) {
    auto stats = corpus::project_category_stats(classified(c));
    Output o(c.out, out);
    *o << "project\tcomments";
    for (auto cat : all_categories()) *o << '\t' << to_string(cat);
    *o << '\n';
    for (const auto& s : stats) {
        *o << s.project << '\t' << s.total;
        for (auto cat : all_categories()) {
            auto it = s.ratio.find(std::string(to_string(cat)));
            *o << '\t' << fixed(it == s.ratio.end() ? 0.0 : it->second);
        }
        *o << '\n';
    }
    return exit_ok;
}

int cmd_mine(const RunConfig& c, std::ostream& out, std::ostream&) {
    auto pairs = corpus::mine_verb_noun(classified(c), category_flag(c));
    if (c.top > 0 && pairs.size() > c.top) pairs.resize(c.top);
    Output o(c.out, out);
    *o << "pair\tprojects\n";
    for (const auto& p : pairs) *o << p.pair << '\t' << p.projects << '\n';
    return exit_ok;
}

int cmd_grep(const RunConfig& c, std::ostream& out, std::ostream&) {
    auto hits = corpus::grep_classified(classified(c), category_flag(c), c.words);
    Output o(c.out, out);
    if (c.json) {
        *o << corpus::write_jsonl(hits);
        return exit_ok;
    }
    for (const auto& h : hits) {
        *o << h.project << '/' << h.file << ':' << h.span.start_line << ": " << h.text << '\n';
        if (h.target) {
            *o << "  target " << *h.target;
            if (h.target_span) *o << " lines " << h.target_span->start_line << '-' << h.target_span->end_line;
            *o << '\n';
        }
        if (h.target_text) {
            std::istringstream lines(*h.target_text);
            for (std::string l; std::getline(lines, l);) *o << "    " << l << '\n';
        }
    }
    return exit_ok;
}

int cmd_adapt(const RunConfig& c, std::ostream& out, std::ostream&) {
    auto model = dtree::load_model(c.category_model);
    auto mapping = c.mapping.empty() ? java_to_python() : load_kind_mapping(c.mapping);
    auto adapted = map_syntax_features(model, mapping);
    dtree::save_model(adapted, c.out);
    out << "adapted " << mapping.size() << " kinds; " << adapted.root.node_count() << " nodes, depth "
        << adapted.root.depth() << "\nwrote " << c.out << '\n';
    return exit_ok;
}

std::vector<std::pair<std::string, std::string>> prediction_pairs(const RunConfig& c) {
    std::vector<std::pair<std::string, std::string>> pairs;
    if (!c.predictions.empty()) {
        std::istringstream in(read_text(c.predictions));
        int number = 0;
        for (std::string line; std::getline(in, line);) {
            ++number;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty() || line[0] == '#') continue;
            std::vector<std::string> cols;
            std::stringstream ss(line);
            for (std::string col; std::getline(ss, col, '\t');) cols.push_back(col);
            if (cols.size() < 2 || cols.size() > 3) {
                throw Error(ErrorCode::invalid_input, "predictions line " + std::to_string(number) +
                                                          ": expected actual<TAB>predicted[<TAB>count]");
            }
            std::size_t n = 1;
            if (cols.size() == 3) {
                try {
                    n = std::stoul(cols[2]);
                } catch (const std::logic_error&) {
                    throw Error(ErrorCode::invalid_input, "predictions line " + std::to_string(number) + ": bad count");
                }
            }
            for (std::size_t k = 0; k < n; ++k) pairs.emplace_back(cols[0], cols[1]);
        }
        return pairs;
    }
    if (c.gold.empty() || c.predicted.empty()) {
        throw Error(ErrorCode::invalid_input, "give --predictions, or --gold with --predicted");
    }
    std::map<std::string, std::string> predicted;
    for (const auto& r : corpus::load_records(c.predicted)) {
        if (const auto& v = field_of(r, c.field)) predicted[r.id] = *v;
    }
    for (const auto& r : corpus::load_records(c.gold)) {
        const auto& v = field_of(r, c.field);
        if (!v) continue;
        auto it = predicted.find(r.id);
        if (it == predicted.end()) throw Error(ErrorCode::invalid_input, "no prediction for " + r.id);
        pairs.emplace_back(*v, it->second);
    }
    return pairs;
}

int cmd_eval(const RunConfig& c, std::ostream& out, std::ostream&) {
    std::vector<std::string> preferred;
    std::stringstream ss(c.labels);
    for (std::string l; std::getline(ss, l, ',');) {
        if (!l.empty()) preferred.push_back(l);
    }
    auto matrix = eval::ConfusionMatrix::from_pairs(prediction_pairs(c), preferred);
    Output o(c.out, out);
    *o << (c.json ? eval::report_json(matrix) + "\n" : eval::format_report(matrix));
    return exit_ok;
}

int cmd_agree(const RunConfig& c, std::ostream& out, std::ostream& err) {
    // rater -> item -> label
    std::map<std::string, std::map<std::string, std::string>> by_rater;
    for (const auto& path : c.files) {
        for (const auto& r : corpus::load_records(path)) {
            const auto& v = field_of(r, c.field);
            if (!v) continue;
            auto rater = r.annotator ? *r.annotator : fs::path(path).stem().string();
            if (!by_rater[rater].emplace(r.id, *v).second) {
                throw Error(ErrorCode::invalid_input, "rater " + rater + " labels " + r.id + " twice");
            }
        }
    }
    if (by_rater.size() < 2) throw Error(ErrorCode::invalid_input, "agreement needs at least two raters");
    std::vector<std::string> items;
    for (const auto& [id, label] : by_rater.begin()->second) {
        bool everyone = std::all_of(by_rater.begin(), by_rater.end(),
                                    [&id = id](const auto& kv) { return kv.second.count(id) > 0; });
        if (everyone) items.push_back(id);
    }
    std::size_t dropped = 0;
    for (const auto& [rater, labels] : by_rater) dropped = std::max(dropped, labels.size() - items.size());
    if (dropped > 0) err << "warning: items not labeled by every rater are ignored\n";
    if (items.empty()) throw Error(ErrorCode::invalid_input, "no item is labeled by every rater");

    std::vector<std::vector<std::string>> table;
    for (const auto& id : items) {
        std::vector<std::string> row;
        for (const auto& [rater, labels] : by_rater) row.push_back(labels.at(id));
        table.push_back(std::move(row));
    }
    out << "raters\t" << by_rater.size() << "\nitems\t" << items.size() << '\n';
    out << "fleiss\t" << fixed(eval::fleiss_kappa(eval::agreement_table(table)), 4) << '\n';
    if (by_rater.size() == 2) {
        std::vector<std::pair<std::string, std::string>> pairs;
        for (const auto& row : table) pairs.emplace_back(row[0], row[1]);
        out << "cohen\t" << fixed(eval::cohens_kappa(pairs), 4) << '\n';
    }
    return exit_ok;
}

int cmd_kl(const RunConfig& c, std::ostream& out, std::ostream&) {
    if (c.files.size() != 2) throw Error(ErrorCode::invalid_input, "kl takes exactly two record files");
    auto labels = field_labels(c.field);
    std::vector<std::vector<double>> counts(2, std::vector<double>(labels.size(), 0.0));
    for (std::size_t side = 0; side < 2; ++side) {
        for (const auto& r : corpus::load_records(c.files[side])) {
            const auto& v = field_of(r, c.field);
            if (!v) continue;
            auto it = std::find(labels.begin(), labels.end(), *v);
            if (it != labels.end()) counts[side][static_cast<std::size_t>(it - labels.begin())] += 1;
        }
    }
    auto p = eval::smoothed_distribution(counts[0], c.alpha);
    auto q = eval::smoothed_distribution(counts[1], c.alpha);
    out << "label\tP\tQ\n";
    for (std::size_t i = 0; i < labels.size(); ++i) out << labels[i] << '\t' << fixed(p[i], 4) << '\t' << fixed(q[i], 4) << '\n';
    out << "kl\t" << fixed(eval::kl_divergence(p, q), 4) << '\n';
    return exit_ok;
}

int cmd_annotate(const RunConfig& c, std::ostream& out, std::ostream&) {
    if (!c.serve) throw Error(ErrorCode::invalid_input, "annotate only runs as a server; pass --serve");
    std::optional<corpus::Store> sources;
    if (!c.store.empty()) sources = corpus::load_store(c.store);
    AnnotationService service(corpus::load_records(c.records), c.sessions, std::move(sources));
    AnnotationServer server(service, c.static_dir);
    int port = server.bind(c.host, c.port);
    out << "serving " << service.task_count() << " tasks on http://" << c.host << ':' << port << '\n' << std::flush;
    server.listen();
    return exit_ok;
}

void add_jobs(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--jobs,-j", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
}

void add_model_inputs(CLI::App* cmd, RunConfig& c) {
    cmd->add_option("--records", c.records, "Classified records (JSONL), or the subset of the store to classify")
        ->check(CLI::ExistingFile);
    cmd->add_option("--store", c.store, "Corpus store to classify")->check(CLI::ExistingDirectory);
    cmd->add_option("--category-model", c.category_model, "Category tree")->check(CLI::ExistingFile);
    cmd->add_option("--target-model", c.target_model, "Target tree; the bootstrap heuristic when absent")
        ->check(CLI::ExistingFile);
    cmd->add_option("--category", c.category, "Category to analyze")->capture_default_str();
    add_jobs(cmd, c);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig c;
    CLI::App app{"Comment extent, target and category analysis for Java and Python corpora", "commentlens"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Help for every subcommand");

    auto* ingest = app.add_subcommand("ingest", "Parse a manifest of projects into a corpus store");
    ingest->add_option("--manifest", c.manifest, "name<TAB>origin[<TAB>revision] per line")->required()->check(CLI::ExistingFile);
    ingest->add_option("--out", c.out, "Store directory")->required();
    ingest->add_option("--language", c.language, "Only this language")->check(CLI::IsMember({"java", "python"}));
    ingest->add_option("--extent-model", c.extent_model, "Extent tree; the merge rule when absent")->check(CLI::ExistingFile);
    ingest->add_option("--cache", c.cache, "Clone cache (default $COMMENT_LENS_CACHE)");
    add_jobs(ingest, c);

    auto* sample = app.add_subcommand("sample", "Draw a seeded sample of extents, at most --cap per file");
    sample->add_option("--store", c.store)->required()->check(CLI::ExistingDirectory);
    sample->add_option("--size,-n", c.size, "Sample size")->required();
    sample->add_option("--seed", c.seed)->capture_default_str();
    sample->add_option("--cap", c.cap, "Per-file maximum")->capture_default_str()->check(CLI::PositiveNumber);
    sample->add_option("--out,-o", c.out, "Output JSONL (default stdout)");

    auto* label = app.add_subcommand("label", "Apply hand labels (file<TAB>line<TAB>category[<TAB>target]) to a store");
    label->add_option("--store", c.store)->required()->check(CLI::ExistingDirectory);
    label->add_option("--labels", c.labels)->required()->check(CLI::ExistingFile);
    label->add_option("--out", c.out, "Write the labeled store here instead of in place");

    auto* train = app.add_subcommand("train", "Train a C4.5 tree from labeled records");
    train->add_option("--task", c.task)->required()->check(CLI::IsMember({"extent", "target", "category"}));
    train->add_option("--store", c.store)->required()->check(CLI::ExistingDirectory);
    train->add_option("--records", c.records, "Labeled records (default: the store's)")->check(CLI::ExistingFile);
    train->add_option("--out,-o", c.out, "Model path; rules go next to it")->required();
    train->add_option("--min-examples", c.min_examples)->capture_default_str()->check(CLI::PositiveNumber);
    train->add_option("--word-cap", c.word_cap, "WordAny vocabulary size")->capture_default_str();

    auto* classify = app.add_subcommand("classify", "Resolve targets and categories of every extent");
    classify->add_option("--store", c.store)->required()->check(CLI::ExistingDirectory);
    classify->add_option("--records", c.records, "Only these records")->check(CLI::ExistingFile);
    classify->add_option("--category-model", c.category_model)->required()->check(CLI::ExistingFile);
    classify->add_option("--target-model", c.target_model)->check(CLI::ExistingFile);
    classify->add_option("--out,-o", c.out, "Output JSONL (default stdout)");
    add_jobs(classify, c);

    auto* stats = app.add_subcommand("stats", "Per-project category ratios");
    add_model_inputs(stats, c);
    stats->add_option("--out,-o", c.out);

    auto* mine = app.add_subcommand("mine", "Verb+noun pairs ranked by project count");
    add_model_inputs(mine, c);
    mine->add_option("--top", c.top, "Keep the first N pairs");
    mine->add_option("--out,-o", c.out);

    auto* grep = app.add_subcommand("grep", "Classified comments containing every word, with their targets");
    add_model_inputs(grep, c);
    grep->add_option("words", c.words)->required();
    grep->add_flag("--json", c.json, "Records as JSONL");
    grep->add_option("--out,-o", c.out);

    auto* adapt = app.add_subcommand("adapt", "Rewrite a Java category tree's syntax tests for Python");
    adapt->add_option("--model", c.category_model)->required()->check(CLI::ExistingFile);
    adapt->add_option("--mapping", c.mapping, "JavaKind<TAB>PythonKind table (default built in)")->check(CLI::ExistingFile);
    adapt->add_option("--out,-o", c.out)->required();

    auto* evaluate = app.add_subcommand("eval", "Confusion matrix, P/R/F1 and accuracy");
    evaluate->add_option("--predictions", c.predictions, "actual<TAB>predicted[<TAB>count] per line")->check(CLI::ExistingFile);
    evaluate->add_option("--gold", c.gold, "Labeled records")->check(CLI::ExistingFile);
    evaluate->add_option("--predicted", c.predicted, "Classified records, joined by id")->check(CLI::ExistingFile);
    evaluate->add_option("--field", c.field)->check(CLI::IsMember({"category", "target"}))->capture_default_str();
    evaluate->add_option("--labels", c.labels, "Comma separated label order");
    evaluate->add_flag("--json", c.json);
    evaluate->add_option("--out,-o", c.out);

    auto* agree = app.add_subcommand("agree", "Fleiss' and Cohen's Kappa over annotation exports");
    agree->add_option("files", c.files, "Exported records; raters are told apart by annotator")->required()->check(CLI::ExistingFile);
    agree->add_option("--field", c.field)->check(CLI::IsMember({"category", "target"}))->capture_default_str();

    auto* kl = app.add_subcommand("kl", "KL distance between the label distributions of two record sets");
    kl->add_option("files", c.files, "P then Q")->required()->expected(2)->check(CLI::ExistingFile);
    kl->add_option("--field", c.field)->check(CLI::IsMember({"category", "target"}))->capture_default_str();
    kl->add_option("--alpha", c.alpha, "Additive smoothing")->capture_default_str();

    auto* annotate = app.add_subcommand("annotate", "Serve the annotation API");
    annotate->add_flag("--serve", c.serve)->required();
    annotate->add_option("--tasks", c.records, "Records to annotate (JSONL)")->required()->check(CLI::ExistingFile);
    annotate->add_option("--sessions", c.sessions, "Directory of session logs")->capture_default_str();
    annotate->add_option("--store", c.store, "Store for whole-file context links")->check(CLI::ExistingDirectory);
    annotate->add_option("--host", c.host)->capture_default_str();
    annotate->add_option("--port", c.port)->capture_default_str();
    annotate->add_option("--static", c.static_dir, "UI assets")->check(CLI::ExistingDirectory);

    const std::map<CLI::App*, int (*)(const RunConfig&, std::ostream&, std::ostream&)> handlers = {
        {ingest, cmd_ingest}, {sample, cmd_sample},   {label, cmd_label},       {train, cmd_train},
        {classify, cmd_classify}, {stats, cmd_stats}, {mine, cmd_mine},         {grep, cmd_grep},
        {adapt, cmd_adapt},   {evaluate, cmd_eval},   {agree, cmd_agree},       {kl, cmd_kl},
        {annotate, cmd_annotate},
    };

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        std::string msg = e.what();
        for (auto& ch : msg) {
            if (ch == '\n') ch = ' ';
        }
        err << "error: Usage: " << msg << '\n';
        return exit_usage;
    }

    try {
        for (const auto& [cmd, handler] : handlers) {
            if (cmd->parsed()) return handler(c, out, err);
        }
        return exit_usage;
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << '\n';
        return e.code() == ErrorCode::fetch_failed ? exit_fetch : exit_data;
    } catch (const nlohmann::json::exception& e) {
        err << "error: InvalidInput: " << e.what() << '\n';
        return exit_data;
    } catch (const fs::filesystem_error& e) {
        err << "error: IoError: " << e.what() << '\n';
        return exit_data;
    } catch (const std::exception& e) {
        err << "error: Internal: " << e.what() << '\n';
        return exit_data;
    }
}

}  // namespace commentlens::cli
