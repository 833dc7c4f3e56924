#include <doctest.h>

#include <httplib.h>

#include <fstream>
#include <sstream>
#include <thread>
#include <unistd.h>

#include "commentlens/cli.hpp"
#include "commentlens/error.hpp"

using namespace commentlens;
using namespace commentlens::cli;
namespace fs = std::filesystem;

namespace {

const fs::path fixtures = COMMENTLENS_FIXTURES;
const fs::path resources = COMMENTLENS_RESOURCES;

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("commentlens-cli-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string line_of(const std::string& text, const std::string& prefix) {
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        if (l.starts_with(prefix)) return l;
    }
    return {};
}

/// Ingested and hand-labeled copy of the bundled demo corpus.
std::string labeled_demo(const TempDir& dir) {
    auto store = dir / "store";
    REQUIRE(invoke({"ingest", "--manifest", (resources / "demo" / "manifest.tsv").string(), "--out", store}).code == 0);
    REQUIRE(invoke({"label", "--store", store, "--labels", (resources / "demo" / "labels.tsv").string()}).code == 0);
    return store;
}

corpus::CommentRecord task(int i) {
    corpus::CommentRecord r;
    r.project = "p";
    r.file = "F.java";
    r.span.start_line = r.span.end_line = i + 1;
    r.text = "comment " + std::to_string(i);
    r.id = "p:F.java:" + std::to_string(i + 1) + ":0";
    return r;
}

std::string annotation(const std::string& session, const std::string& id, const std::string& label, int ms) {
    return nlohmann::json{{"session", session}, {"task", id}, {"label", label}, {"elapsed_ms", ms}}.dump();
}

}  // namespace

TEST_CASE("eval reproduces the published Java block") {
    auto r = invoke({"eval", "--predictions", (fixtures / "eval" / "java_predictions.tsv").string()});
    REQUIRE(r.code == 0);
    auto post = line_of(r.out, "Postcondition     0.61");
    CHECK(post.find("0.61 (31/51)") != std::string::npos);
    CHECK(post.find("0.89 (31/35)") != std::string::npos);
    CHECK(post.ends_with("0.72"));
    CHECK(line_of(r.out, "Accuracy") == "Accuracy 0.631 (53/84)");

    auto json = invoke({"eval", "--json", "--predictions", (fixtures / "eval" / "java_predictions.tsv").string()});
    REQUIRE(json.code == 0);
    auto doc = nlohmann::json::parse(json.out);
    CHECK(doc["labels"][0] == "Postcondition");
}

TEST_CASE("exit codes and one-line errors") {
    TempDir dir;
    auto usage = invoke({"sample"});
    CHECK(usage.code == exit_usage);
    CHECK(usage.err.starts_with("error: Usage: "));
    CHECK(std::count(usage.err.begin(), usage.err.end(), '\n') == 1);

    CHECK(invoke({}).code == exit_usage);
    CHECK(invoke({"frobnicate"}).code == exit_usage);
    CHECK(invoke({"--help"}).code == exit_ok);

    std::ofstream(dir / "bad.tsv") << "Postcondition\n";
    auto data = invoke({"eval", "--predictions", dir / "bad.tsv"});
    CHECK(data.code == exit_data);
    CHECK(data.err.starts_with("error: InvalidInput: "));

    std::ofstream(dir / "gone.tsv") << "gone\tfile:///nonexistent/repo.git\n";
    auto fetch = invoke({"ingest", "--manifest", dir / "gone.tsv", "--out", dir / "store", "--cache", dir / "cache"});
    CHECK(fetch.code == exit_fetch);
    CHECK(fetch.err.find("warning: FetchFailed") != std::string::npos);
    CHECK(fetch.err.find("error: FetchFailed: ") != std::string::npos);
}

TEST_CASE("classify on an empty store prints nothing") {
    TempDir dir;
    std::ofstream(dir / "empty.tsv") << "# no projects\n";
    REQUIRE(invoke({"ingest", "--manifest", dir / "empty.tsv", "--out", dir / "empty"}).code == 0);
    // Any category model will do; train one on the demo corpus.
    auto demo = labeled_demo(dir);
    REQUIRE(invoke({"train", "--task", "category", "--store", demo, "--out", dir / "m.json"}).code == 0);
    auto r = invoke({"classify", "--store", dir / "empty", "--category-model", dir / "m.json"});
    CHECK(r.code == 0);
    CHECK(r.out.empty());
}

TEST_CASE("train, classify and analyze the demo corpus") {
    TempDir dir;
    auto store = labeled_demo(dir);
    auto labeled = corpus::load_store(store).records;
    REQUIRE(labeled.size() == 167);
    CHECK(std::all_of(labeled.begin(), labeled.end(), [](const auto& r) { return r.category && r.target; }));

    for (std::string task : {"extent", "target", "category"}) {
        auto r = invoke({"train", "--task", task, "--store", store, "--out", dir / (task + ".json")});
        REQUIRE_MESSAGE(r.code == 0, r.err);
        CHECK(fs::exists(dir / (task + ".json")));
        CHECK(fs::file_size(dir / (task + ".rules.txt")) > 0);
    }
    CHECK(slurp(dir / "category.rules.txt").find("rule 1: if ") != std::string::npos);

    auto r = invoke({"classify", "--store", store, "--category-model", dir / "category.json", "--target-model",
                  dir / "target.json", "--jobs", "3", "-o", dir / "classified.jsonl"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    auto classified = corpus::load_records(dir / "classified.jsonl");
    REQUIRE(classified.size() == labeled.size());
    std::map<std::string, std::string> by_text;
    for (const auto& c : classified) by_text[c.text] = *c.category;
    CHECK(by_text.at("create some test data") == "Postcondition");
    CHECK(by_text.at("Unable to find the specidifed document.") == "Precondition");
    CHECK(by_text.at("CHECKSTYLE:OFF") == "Directive");
    CHECK(by_text.at("设置默认值") == "Uncategorized");

    auto score = invoke({"eval", "--gold", store + "/demo/records.jsonl", "--predicted", dir / "classified.jsonl"});
    REQUIRE(score.code == 0);
    CHECK(line_of(score.out, "Accuracy").starts_with("Accuracy 0.9"));

    auto hits = invoke({"grep", "--records", dir / "classified.jsonl", "clear", "buffer"});
    REQUIRE(hits.code == 0);
    CHECK(hits.out.starts_with("demo/org/demo/io/BufferPool.java:38: clear buffer\n  target Right lines 39-41\n"));

    auto stats = invoke({"stats", "--records", dir / "classified.jsonl"});
    REQUIRE(stats.code == 0);
    CHECK(line_of(stats.out, "demo\t167\t").size() > 0);

    auto mine = invoke({"mine", "--records", dir / "classified.jsonl", "--top", "5"});
    REQUIRE(mine.code == 0);
    CHECK(mine.out.starts_with("pair\tprojects\n"));
    CHECK(std::count(mine.out.begin(), mine.out.end(), '\n') <= 6);

    // The same analyses straight from the store and models.
    auto direct = invoke({"stats", "--store", store, "--category-model", dir / "category.json", "--target-model",
                       dir / "target.json"});
    CHECK(direct.out == stats.out);

    auto adapted = invoke({"adapt", "--model", dir / "category.json", "--out", dir / "python.json"});
    REQUIRE_MESSAGE(adapted.code == 0, adapted.err);
    auto java = dtree::load_model(dir / "category.json");
    auto python = dtree::load_model(dir / "python.json");
    CHECK(python.root.node_count() == java.root.node_count());
    CHECK(python.root.depth() == java.root.depth());
}

TEST_CASE("sample through the command line") {
    TempDir dir;
    auto store = labeled_demo(dir);
    auto a = invoke({"sample", "--store", store, "-n", "40", "--seed", "7", "-o", dir / "a.jsonl"});
    auto b = invoke({"sample", "--store", store, "-n", "40", "--seed", "7", "-o", dir / "b.jsonl"});
    auto c = invoke({"sample", "--store", store, "-n", "40", "--seed", "8", "-o", dir / "c.jsonl"});
    REQUIRE(a.code == 0);
    CHECK(slurp(dir / "a.jsonl") == slurp(dir / "b.jsonl"));
    CHECK(slurp(dir / "a.jsonl") != slurp(dir / "c.jsonl"));
    CHECK(corpus::load_records(dir / "a.jsonl").size() == 40);

    auto all = invoke({"sample", "--store", store, "-n", "1000"});
    CHECK(all.code == 0);
    CHECK(all.err.starts_with("warning: InsufficientComments: "));
    std::map<std::string, int> per_file;
    for (const auto& r : corpus::read_jsonl(all.out)) CHECK(++per_file[r.file] <= 3);
}

TEST_CASE("kl between record sets") {
    TempDir dir;
    auto write = [&](const std::string& name, std::vector<std::string> labels) {
        std::vector<corpus::CommentRecord> rs;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            auto r = task(static_cast<int>(i));
            r.category = labels[i];
            rs.push_back(r);
        }
        corpus::save_records(dir / name, rs);
    };
    write("p.jsonl", {"Postcondition", "Precondition"});
    write("q.jsonl", {"Postcondition", "Precondition"});
    auto same = invoke({"kl", dir / "p.jsonl", dir / "q.jsonl"});
    REQUIRE(same.code == 0);
    CHECK(line_of(same.out, "kl\t") == "kl\t0.0000");
    write("q.jsonl", {"Postcondition", "Postcondition", "Postcondition", "Postcondition"});
    auto diff = invoke({"kl", dir / "p.jsonl", dir / "q.jsonl"});
    CHECK(line_of(diff.out, "kl\t") != "kl\t0.0000");
}

TEST_CASE("hand labels") {
    auto labels = parse_hand_labels("# header\nsrc/A.java\t3\tMetadata\nsrc/A.java\t9\tGuide\tIn-Place\n");
    REQUIRE(labels.size() == 2);
    CHECK(labels[0].category == "MetaInformation");
    CHECK_FALSE(labels[0].target);
    CHECK(labels[1].target == "InPlace");
    CHECK_THROWS_AS(parse_hand_labels("a\tx\tGuide\n"), Error);
    CHECK_THROWS_AS(parse_hand_labels("a\t3\tFoo\n"), Error);
    CHECK_THROWS_AS(parse_hand_labels("a\t3\n"), Error);

    TempDir dir;
    auto store = corpus::ingest(corpus::load_manifest(fixtures / "corpus" / "manifest.tsv"), dir.path / "s", {});
    CHECK_THROWS_AS(apply_hand_labels(store, {{"alpha/src/Counter.java", 5, "Guide", std::nullopt}}), Error);
    apply_hand_labels(store, {{"alpha/src/Counter.java", 4, "Postcondition", std::nullopt}});
    const auto& r = store.records.front();
    CHECK(r.category == "Postcondition");
    CHECK(r.target == "Right");
    CHECK(r.target_span->start_line == 5);
}

TEST_CASE("annotation service contract") {
    TempDir dir;
    std::vector<corpus::CommentRecord> tasks;
    for (int i = 0; i < 10; ++i) tasks.push_back(task(i));
    AnnotationService service(tasks, dir.path / "sessions");

    auto first = nlohmann::json::parse(service.next_task("s1").body);
    CHECK(first["task"]["id"] == tasks[0].id);
    CHECK(first["categories"].size() == 11);
    CHECK(first["categories"][0]["name"] == "Postcondition");
    CHECK(first["targets"].size() == 4);

    auto ok = service.annotate(annotation("s1", tasks[0].id, "Postcondition", 1200));
    CHECK(ok.status == 201);
    CHECK(nlohmann::json::parse(service.progress("s1").body) == nlohmann::json{{"done", 1}, {"total", 10}});
    CHECK(service.annotate(annotation("s1", tasks[0].id, "Precondition", 10)).status == 409);
    CHECK(service.annotate(annotation("s1", tasks[1].id, "Foo", 10)).status == 400);
    CHECK(service.annotate(annotation("s1", tasks[1].id, "Guide", 0)).status == 400);
    CHECK(service.annotate(annotation("s1", "nope", "Guide", 10)).status == 404);
    CHECK(service.annotate(annotation("../x", tasks[1].id, "Guide", 10)).status == 400);
    CHECK(service.annotate("not json").status == 400);
    CHECK(service.progress("").status == 400);
    CHECK(nlohmann::json::parse(service.next_task("s1").body)["task"]["id"] == tasks[1].id);

    // Revision keeps the last label and adds up the time.
    CHECK(service.revise(annotation("s1", tasks[2].id, "Guide", 10)).status == 404);
    CHECK(service.revise(annotation("s1", tasks[0].id, "Precondition", 300)).status == 200);
    auto exported = corpus::read_jsonl(service.export_sessions("s1").body);
    REQUIRE(exported.size() == 1);
    CHECK(exported[0].category == "Precondition");
    CHECK(exported[0].elapsed_ms == 1500);
    CHECK(exported[0].annotator == "s1");

    // The logs are the source of truth: a new service sees the same state.
    AnnotationService reloaded(tasks, dir.path / "sessions");
    CHECK(reloaded.export_sessions("s1").body == service.export_sessions("s1").body);
    CHECK(service.export_sessions("").status == 400);
}

TEST_CASE("two scripted sessions exported to agree") {
    TempDir dir;
    std::vector<corpus::CommentRecord> tasks;
    for (int i = 0; i < 10; ++i) tasks.push_back(task(i));
    AnnotationService service(tasks, dir.path / "sessions");
    // Both raters split 5/5 and agree on 8 of 10: p_o = 0.8, p_e = 0.5, Kappa 0.6.
    const char* a = "PPPPPRRRRR";
    const char* b = "PPPPRRRRRP";
    auto name = [](char c) { return c == 'P' ? "Postcondition" : "Precondition"; };
    for (int i = 0; i < 10; ++i) {
        REQUIRE(service.annotate(annotation("alice", tasks[i].id, name(a[i]), 500 + i)).status == 201);
        REQUIRE(service.annotate(annotation("bob", tasks[i].id, name(b[i]), 700 + i)).status == 201);
    }
    auto exported = service.export_sessions("alice,bob");
    REQUIRE(exported.status == 200);
    auto records = corpus::read_jsonl(exported.body);
    REQUIRE(records.size() == 20);
    CHECK(std::all_of(records.begin(), records.end(), [](const auto& r) { return r.elapsed_ms && *r.elapsed_ms > 0; }));
    std::ofstream(dir / "export.jsonl") << exported.body;

    auto r = invoke({"agree", dir / "export.jsonl"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(line_of(r.out, "raters") == "raters\t2");
    CHECK(line_of(r.out, "items") == "items\t10");
    CHECK(line_of(r.out, "fleiss") == "fleiss\t0.6000");
    CHECK(line_of(r.out, "cohen") == "cohen\t0.6000");
}

TEST_CASE("annotation API over HTTP") {
    TempDir dir;
    std::vector<corpus::CommentRecord> tasks;
    for (int i = 0; i < 3; ++i) tasks.push_back(task(i));
    AnnotationService service(tasks, dir.path / "sessions");
    AnnotationServer server(service);
    int port = server.bind("127.0.0.1", 0);
    std::thread loop([&] { server.listen(); });

    httplib::Client client("127.0.0.1", port);
    auto home = client.Get("/");
    REQUIRE(home);
    CHECK(home->status == 200);
    auto next = client.Get("/api/tasks?session=web");
    REQUIRE(next);
    CHECK(nlohmann::json::parse(next->body)["task"]["id"] == tasks[0].id);
    auto post = client.Post("/api/annotations", annotation("web", tasks[0].id, "Guide", 42), "application/json");
    REQUIRE(post);
    CHECK(post->status == 201);
    auto dup = client.Post("/api/annotations", annotation("web", tasks[0].id, "Guide", 42), "application/json");
    CHECK(dup->status == 409);
    auto bad = client.Post("/api/annotations", annotation("web", tasks[1].id, "Foo", 42), "application/json");
    CHECK(bad->status == 400);
    auto put = client.Put("/api/annotations", annotation("web", tasks[0].id, "Interface", 8), "application/json");
    CHECK(put->status == 200);
    auto progress = client.Get("/api/progress?session=web");
    CHECK(nlohmann::json::parse(progress->body) == nlohmann::json{{"done", 1}, {"total", 3}});
    auto exported = client.Get("/api/export?sessions=web");
    REQUIRE(exported);
    auto records = corpus::read_jsonl(exported->body);
    REQUIRE(records.size() == 1);
    CHECK(records[0].category == "Interface");
    CHECK(records[0].elapsed_ms == 50);

    server.stop();
    loop.join();
}
