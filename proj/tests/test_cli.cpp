#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "kddids/cli.hpp"
#include "kddids/eval.hpp"
#include "kddids/schema.hpp"
#include "synthetic.hpp"

using namespace kddids;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path &p) {
    std::ifstream in{p, std::ios::binary};
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path &p, const std::string &text) {
    std::ofstream out{p, std::ios::binary};
    out << text;
}

/// scratch directory holding a small corpus and a plan sized for it
struct Workspace {
    fs::path root;
    fs::path corpus;
    fs::path plan;

    Workspace() {
        root = fs::temp_directory_path() / ("kddids_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
        fs::remove_all(root);
        fs::create_directories(root);
        corpus = root / "corpus.csv";
        spit(corpus, kddids::testing::synthetic_text(kddids::testing::small_mix(3), {.seed = 2, .duplicate_rate = 0.1}));
        plan = root / "plan.json";
        spit(plan, R"({"targets": {"normal": 200, "smurf": 150, "neptune": 150, "satan": 30, "ipsweep": 30,
                       "warezclient": 20, "back": 8, "teardrop": 8, "guess_passwd": 8, "portsweep": 8,
                       "rootkit": 8, "nmap": 8, "spy": 50},
                       "holdout_size": 300, "seed": 5, "shortfall_policy": "take_all"})");
    }
    ~Workspace() {
        std::error_code ec;
        fs::remove_all(root, ec);
    }
    std::string at(const std::string &rel) const { return (root / rel).string(); }

    static int &counter() {
        static int n = 0;
        return n;
    }
};

std::vector<fs::path> listing(const fs::path &dir) {
    std::vector<fs::path> names;
    if (!fs::exists(dir)) return names;
    for (const auto &e : fs::directory_iterator{dir}) names.push_back(e.path().filename());
    std::sort(names.begin(), names.end());
    return names;
}

}  // namespace

TEST_CASE("usage errors exit with 1") {
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"frobnicate"}).code == kExitUsage);
    CHECK(run({"train", "x.csv"}).code == kExitUsage);
    CHECK(run({"train", "x.csv", "--out", "o", "--model", "svm"}).code == kExitUsage);
    CHECK(run({"train", "x.csv", "--out", "o", "--target", "coarse"}).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("data errors exit with 2") {
    Workspace w;
    CHECK(run({"summarize", w.at("missing.csv")}).code == kExitData);
    spit(w.root / "bad.csv", "0,tcp,http,SF,1,2\n");
    auto r = run({"summarize", w.at("bad.csv")});
    CHECK(r.code == kExitData);
    CHECK(r.err.find("line 1") != std::string::npos);
    CHECK(run({"summarize", w.at("bad.csv"), "--on-error", "skip"}).code == kExitOk);
}

TEST_CASE("invalid configuration is a usage error") {
    Workspace w;
    spit(w.root / "cfg.json", R"({"j48": {"confidence": 3}})");
    CHECK(run({"train", w.corpus.string(), "--config", w.at("cfg.json"), "--out", w.at("m")}).code == kExitUsage);
    spit(w.root / "cfg.json", R"({"tree": {}})");
    CHECK(run({"train", w.corpus.string(), "--config", w.at("cfg.json"), "--out", w.at("m")}).code == kExitUsage);
}

TEST_CASE("summarize counts labels and writes both tables") {
    Workspace w;
    auto r = run({"summarize", w.corpus.string(), "--out", w.at("s")});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("smurf") != std::string::npos);
    CHECK(fs::exists(w.root / "s" / "summary.txt"));
    CHECK(slurp(w.root / "s" / "summary.csv").rfind("label,category,count", 0) == 0);
}

TEST_CASE("curation is reproducible byte for byte") {
    Workspace w;
    auto a = run({"curate", w.corpus.string(), "--plan", w.plan.string(), "--out", w.at("a")});
    auto b = run({"curate", w.corpus.string(), "--plan", w.plan.string(), "--out", w.at("b")});
    REQUIRE(a.code == kExitOk);
    REQUIRE(b.code == kExitOk);
    for (auto f : {"curated.csv", "holdout.csv", "provenance.json"}) {
        CAPTURE(f);
        CHECK(slurp(w.root / "a" / f) == slurp(w.root / "b" / f));
    }
    auto c = run({"curate", w.corpus.string(), "--plan", w.plan.string(), "--seed", "6", "--out", w.at("c")});
    REQUIRE(c.code == kExitOk);
    CHECK(slurp(w.root / "a" / "curated.csv") != slurp(w.root / "c" / "curated.csv"));
    CHECK(a.out.find("shortfall spy") != std::string::npos);
    auto prov = slurp(w.root / "a" / "provenance.json");
    CHECK(prov.find("\"duplicates_removed\"") != std::string::npos);
    CHECK(prov.find("\"seed\": 5") != std::string::npos);
}

TEST_CASE("train, evaluate and compare") {
    Workspace w;
    REQUIRE(run({"curate", w.corpus.string(), "--plan", w.plan.string(), "--out", w.at("cur")}).code == kExitOk);
    const auto train = w.at("cur/curated.csv");
    const auto test = w.at("cur/holdout.csv");
    spit(w.root / "fast.json", R"({"mlp": {"epochs": 20}})");

    for (std::string kind : {"j48", "mlp", "bayes"}) {
        auto r = run({"train", train, "--model", kind, "--seed", "3", "--config", w.at("fast.json"), "--out", w.at("m")});
        REQUIRE_MESSAGE(r.code == kExitOk, r.err);
        CHECK(fs::exists(w.root / "m" / (kind + "-category-s3.model")));
        CHECK(fs::exists(w.root / "m" / (kind + "-category-s3.log")));
    }
    CHECK(fs::exists(w.root / "m" / "j48-category-s3.rules.txt"));
    CHECK(fs::exists(w.root / "m" / "bayes-category-s3.tables.csv"));
    CHECK(slurp(w.root / "m" / "mlp-category-s3.log").find("epoch 20 error") != std::string::npos);

    std::vector<std::map<std::string, std::string>> singles;
    for (std::string kind : {"j48", "mlp", "bayes"}) {
        auto r = run({"evaluate", w.at("m/" + kind + "-category-s3.model"), "--test", test, "--out", w.at("r")});
        REQUIRE_MESSAGE(r.code == kExitOk, r.err);
        CHECK(r.out.find("ACCURACY RATE") != std::string::npos);
        const auto stem = kind + "-category-s3__holdout__s3";
        for (auto ext : {".txt", ".csv", ".kv", ".timing.kv"}) CHECK(fs::exists(w.root / "r" / (stem + ext)));
        auto rows = parse_report_csv(slurp(w.root / "r" / (stem + ".csv")));
        REQUIRE(rows.size() == 1);
        singles.push_back(rows[0]);
    }
    CHECK(std::stod(singles[0].at("accuracy_pct")) > 80.0);

    auto c = run({"compare", w.at("m/j48-category-s3.model"), w.at("m/mlp-category-s3.model"),
                  w.at("m/bayes-category-s3.model"), "--test", test, "--out", w.at("r")});
    REQUIRE_MESSAGE(c.code == kExitOk, c.err);
    auto rows = parse_report_csv(slurp(w.root / "r" / "compare__holdout.csv"));
    REQUIRE(rows.size() == 3);
    CHECK(rows == singles);
}

TEST_CASE("evaluate checks the model kind and schema") {
    Workspace w;
    REQUIRE(run({"train", w.corpus.string(), "--model", "bayes", "--out", w.at("m")}).code == kExitOk);
    const auto model = w.at("m/bayes-category-s1.model");
    CHECK(run({"evaluate", model, "--test", w.corpus.string(), "--model", "bayes"}).code == kExitOk);
    CHECK(run({"evaluate", model, "--test", w.corpus.string(), "--model", "j48"}).code == kExitData);

    std::ostringstream names;
    names << "normal, smurf.\n";
    for (const auto &f : FeatureSchema::kdd99().features()) {
        names << (f.name == "duration" ? std::string{"length"} : f.name) << ": "
              << (f.kind == FeatureKind::symbolic ? "symbolic" : "continuous") << ".\n";
    }
    spit(w.root / "renamed.names", names.str());
    auto r = run({"evaluate", model, "--test", w.corpus.string(), "--schema", w.at("renamed.names")});
    CHECK(r.code == kExitData);
    CHECK(r.err.find("SchemaMismatch") != std::string::npos);

    spit(w.root / "m" / "bayes-category-s1.model", "KDDMODEL-garbage");
    CHECK(run({"evaluate", model, "--test", w.corpus.string()}).code == kExitData);
}

TEST_CASE("a failed command leaves no partial outputs") {
    Workspace w;
    fs::create_directories(w.root / "m" / "j48-category-s1.rules.txt.partial" / "blocker");
    auto r = run({"train", w.corpus.string(), "--model", "j48", "--out", w.at("m")});
    CHECK(r.code == kExitData);
    auto names = listing(w.root / "m");
    REQUIRE(names.size() == 1);
    CHECK(names[0] == "j48-category-s1.rules.txt.partial");
}

TEST_CASE("relative inputs fall back to the data directory") {
    Workspace w;
    fs::create_directories(w.root / "data");
    fs::copy_file(w.corpus, w.root / "data" / "kddcup.data");
    fs::copy_file(w.corpus, w.root / "data" / "records.csv");
    ::setenv(kDataDirEnv, w.at("data").c_str(), 1);
    auto whole = run({"summarize"});
    auto named = run({"summarize", "records.csv"});
    ::unsetenv(kDataDirEnv);
    REQUIRE(whole.code == kExitOk);
    REQUIRE(named.code == kExitOk);
    CHECK(whole.out == named.out);
    CHECK(run({"summarize"}).code == kExitUsage);
}
