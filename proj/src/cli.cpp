#include "kddids/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "kddids/curate.hpp"
#include "kddids/error.hpp"
#include "kddids/ingest.hpp"
#include "kddids/model_store.hpp"
#include "kddids/pipeline.hpp"
#include "kddids/rng.hpp"

namespace kddids {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Output files are written beside their destination and renamed into place
/// only once every file of the command is complete.
class StagedOutputs {
public:
    StagedOutputs() = default;
    StagedOutputs(const StagedOutputs &) = delete;
    StagedOutputs &operator=(const StagedOutputs &) = delete;
    ~StagedOutputs() {
        for (const auto &[tmp, final_path] : staged_) {
            std::error_code ec;
            fs::remove(tmp, ec);
        }
    }

    /// path to write in place of final_path
    std::string stage(const fs::path &final_path) {
        auto tmp = final_path;
        tmp += ".partial";
        staged_.emplace_back(tmp, final_path);
        return tmp.string();
    }

    void write_text(const fs::path &final_path, const std::string &content) {
        auto tmp = stage(final_path);
        std::ofstream out{tmp, std::ios::binary | std::ios::trunc};
        out << content;
        out.close();
        if (!out) throw Error{Errc::io_error, "cannot write " + final_path.string()};
    }

    void commit() {
        for (const auto &[tmp, final_path] : staged_) {
            std::error_code ec;
            fs::rename(tmp, final_path, ec);
            if (ec) throw Error{Errc::io_error, "cannot move output into " + final_path.string() + ": " + ec.message()};
        }
        staged_.clear();
    }

private:
    std::vector<std::pair<fs::path, fs::path>> staged_;
};

std::optional<fs::path> data_dir() {
    const char *dir = std::getenv(kDataDirEnv);
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    return fs::path{dir};
}

/// relative paths missing from the working directory are looked up in the data directory
std::string resolve_input(const std::string &path) {
    if (path == "-") return path;
    fs::path p{path};
    if (p.is_relative() && !fs::exists(p)) {
        if (auto dir = data_dir(); dir && fs::exists(*dir / p)) return (*dir / p).string();
    }
    if (!fs::exists(p)) throw Error{Errc::io_error, "input not found: " + path};
    return path;
}

std::string default_corpus() {
    auto dir = data_dir();
    if (!dir) throw UsageError{std::string{"no input given and "} + kDataDirEnv + " is not set"};
    for (const char *name : {"kddcup.data", "kddcup.data.gz"}) {
        if (fs::exists(*dir / name)) return (*dir / name).string();
    }
    throw UsageError{"no input given and no kddcup.data(.gz) in " + dir->string()};
}

/// "holdout.csv" -> "holdout", "kddcup.data.gz" -> "kddcup"
std::string dataset_stem(const std::string &path) {
    if (path == "-") return "stdin";
    fs::path p = fs::path{path}.filename();
    if (p.extension() == ".gz") p = p.stem();
    return p.stem().string();
}

std::string hex64(std::uint64_t v) {
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << v;
    return s.str();
}

fs::path prepare_out_dir(const std::string &out) {
    fs::path dir{out};
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw Error{Errc::io_error, "cannot create output directory " + out};
    return dir;
}

struct LoadFlags {
    std::string schema_path;
    std::string on_error = "abort";
    std::string unknown_label = "error";

    FeatureSchema schema() const {
        return schema_path.empty() ? FeatureSchema::kdd99() : FeatureSchema::from_names_file(resolve_input(schema_path));
    }

    LoadOptions options() const {
        LoadOptions o;
        o.on_malformed = on_error == "skip" ? MalformedPolicy::skip : MalformedPolicy::abort;
        o.unknown_label = UnknownLabelPolicy::parse(unknown_label);
        return o;
    }
};

void add_load_flags(CLI::App *cmd, LoadFlags &flags, bool with_unknown_label = true) {
    cmd->add_option("--schema", flags.schema_path, "feature names file (name: continuous. | name: symbolic.)");
    cmd->add_option("--on-error", flags.on_error, "malformed lines: abort or skip")
        ->check(CLI::IsMember({"abort", "skip"}));
    if (with_unknown_label) {
        cmd->add_option("--unknown-label", flags.unknown_label, "labels outside the taxonomy: error, skip or map:<category>");
    }
}

void report_skips(const LoadResult &r, std::ostream &err) {
    if (r.skipped_malformed == 0 && r.skipped_unknown_label == 0) return;
    err << "skipped " << r.skipped_malformed << " malformed and " << r.skipped_unknown_label
        << " unknown-label lines\n";
    for (const auto &s : r.first_skips) err << "  line " << s.line << ": " << s.reason << "\n";
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string timing_text(const std::map<std::string, double> &times) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3);
    for (const auto &[k, v] : times) s << k << "_seconds=" << v << "\n";
    return s.str();
}

// summarize -----------------------------------------------------------------

struct SummarizeArgs {
    std::vector<std::string> inputs;
    LoadFlags load;
    std::string out;
};

std::string label_category(const std::string &label, const UnknownLabelPolicy &policy) {
    try {
        auto c = label_to_category(AttackLabel::parse(label), policy);
        return c ? std::string{category_name(*c)} : "skipped";
    } catch (const Error &) {
        return "unknown";
    }
}

std::string summary_table(const DatasetSummary &summary, const UnknownLabelPolicy &policy) {
    std::ostringstream s;
    std::size_t width = 5;
    for (const auto &[label, _] : summary.per_label) width = std::max(width, label.size());
    s << std::left << std::setw(static_cast<int>(width) + 2) << "label" << std::setw(10) << "category" << std::right
      << std::setw(12) << "count" << "\n";
    for (const auto &[label, n] : summary.per_label) {
        s << std::left << std::setw(static_cast<int>(width) + 2) << label << std::setw(10) << label_category(label, policy)
          << std::right << std::setw(12) << n << "\n";
    }
    s << "\n" << std::left << std::setw(10) << "category" << std::right << std::setw(12) << "count" << "\n";
    for (auto c : kAllCategories) {
        s << std::left << std::setw(10) << category_name(c) << std::right << std::setw(12) << summary.category_count(c)
          << "\n";
    }
    s << "\n" << std::left << std::setw(10) << "total" << std::right << std::setw(12) << summary.total << "\n";
    return s.str();
}

/// label rows, then one "*" row per category, then "*,*,total"
std::string summary_csv(const DatasetSummary &summary, const UnknownLabelPolicy &policy) {
    std::ostringstream s;
    s << "label,category,count\n";
    for (const auto &[label, n] : summary.per_label) s << label << "," << label_category(label, policy) << "," << n << "\n";
    for (auto c : kAllCategories) s << "*," << category_name(c) << "," << summary.category_count(c) << "\n";
    s << "*,*," << summary.total << "\n";
    return s.str();
}

int cmd_summarize(const SummarizeArgs &a, std::ostream &out, std::ostream &err) {
    Stopwatch clock;
    const auto schema = a.load.schema();
    const auto options = a.load.options();
    auto inputs = a.inputs;
    if (inputs.empty()) inputs.push_back(default_corpus());
    DatasetSummary total;
    LoadResult combined;
    for (const auto &input : inputs) {
        auto source = LineSource::open(resolve_input(input));
        auto r = load_dataset(source, schema, options, [](KddRecord &&, AttackCategory) {});
        total.merge(r.summary);
        combined.lines_read += r.lines_read;
        combined.skipped_malformed += r.skipped_malformed;
        combined.skipped_unknown_label += r.skipped_unknown_label;
        for (auto &s : r.first_skips) {
            if (combined.first_skips.size() < LoadResult::kMaxSkipsKept) combined.first_skips.push_back(s);
        }
    }
    report_skips(combined, err);
    const auto table = summary_table(total, options.unknown_label);
    out << table;
    if (!a.out.empty()) {
        auto dir = prepare_out_dir(a.out);
        StagedOutputs staged;
        staged.write_text(dir / "summary.txt", table);
        staged.write_text(dir / "summary.csv", summary_csv(total, options.unknown_label));
        staged.commit();
    }
    err << "summarize: " << combined.lines_read << " lines in " << std::fixed << std::setprecision(2)
        << clock.seconds() << " s\n";
    return kExitOk;
}

// curate --------------------------------------------------------------------

struct CurateArgs {
    std::string input;
    std::string plan_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> holdout;
    LoadFlags load;
    std::string out;
};

json summary_json(const DatasetSummary &s) {
    json j;
    j["total"] = s.total;
    j["per_label"] = s.per_label;
    json cats = json::object();
    for (auto c : kAllCategories) cats[std::string{category_name(c)}] = s.category_count(c);
    j["per_category"] = cats;
    return j;
}

int cmd_curate(const CurateArgs &a, std::ostream &out, std::ostream &err) {
    Stopwatch clock;
    const auto schema = a.load.schema();
    const auto options = a.load.options();
    auto plan = a.plan_path.empty() ? CurationPlan::table2() : CurationPlan::load(resolve_input(a.plan_path));
    if (a.seed) plan.seed = *a.seed;
    if (a.holdout) plan.holdout_size = *a.holdout;
    const auto input = a.input.empty() ? default_corpus() : resolve_input(a.input);
    auto dir = prepare_out_dir(a.out);

    Deduplicator dedup;
    auto source = LineSource::open(input);
    auto loaded = load_dataset(source, schema, options, [&dedup](KddRecord &&r, AttackCategory) { dedup.insert(std::move(r)); });
    report_skips(loaded, err);
    const auto duplicates = dedup.duplicates();
    auto pool = std::move(dedup).take();

    auto curated = stratified_sample(pool, plan, plan.seed, options.unknown_label);
    std::vector<char> used(pool.size(), 0);
    for (auto i : curated.source_indices) used[i] = 1;
    std::vector<std::size_t> leftover;
    leftover.reserve(pool.size() - curated.source_indices.size());
    for (std::size_t i = 0; i < pool.size(); ++i) {
        if (!used[i]) leftover.push_back(i);
    }
    auto split = split_holdout_indices(leftover.size(), plan.holdout_size, plan.seed);
    std::vector<KddRecord> holdout;
    holdout.reserve(split.test.size());
    for (auto i : split.test) holdout.push_back(pool[leftover[i]]);
    const auto holdout_summary = summarize(holdout, options.unknown_label);

    json prov;
    prov["input"] = fs::path{input}.filename().string();
    prov["seed"] = plan.seed;
    prov["plan"] = json::parse(plan.to_json());
    prov["plan_hash"] = hex64(fnv1a(plan.to_json()));
    prov["unknown_label"] = options.unknown_label.to_string();
    prov["lines_read"] = loaded.lines_read;
    prov["skipped_malformed"] = loaded.skipped_malformed;
    prov["skipped_unknown_label"] = loaded.skipped_unknown_label;
    prov["duplicates_removed"] = duplicates;
    prov["distinct_records"] = pool.size();
    json shortfalls = json::object();
    for (const auto &[label, s] : curated.shortfalls) shortfalls[label] = {{"target", s.target}, {"available", s.available}};
    prov["shortfalls"] = shortfalls;
    prov["unplanned"] = curated.unplanned;
    prov["curated"] = summary_json(curated.summary);
    prov["holdout"] = summary_json(holdout_summary);
    prov["holdout_pool"] = leftover.size();
    if (curated.summary.total > 0) {
        const double n = static_cast<double>(curated.summary.total);
        prov["normal_fraction"] = format_double(static_cast<double>(curated.summary.category_count(AttackCategory::normal)) / n);
        prov["dos_fraction"] = format_double(static_cast<double>(curated.summary.category_count(AttackCategory::dos)) / n);
    }

    StagedOutputs staged;
    write_records(staged.stage(dir / "curated.csv"), curated.records);
    write_records(staged.stage(dir / "holdout.csv"), holdout);
    staged.write_text(dir / "provenance.json", prov.dump(2) + "\n");
    staged.commit();

    out << "curated " << curated.summary.total << " records (target " << plan.target_total() << "), holdout "
        << holdout.size() << ", seed " << plan.seed << "\n";
    for (const auto &[label, s] : curated.shortfalls) {
        out << "shortfall " << label << ": target " << s.target << ", available " << s.available << "\n";
    }
    err << "curate: " << loaded.lines_read << " lines, " << duplicates << " duplicates, " << std::fixed
        << std::setprecision(2) << clock.seconds() << " s\n";
    return kExitOk;
}

// train ---------------------------------------------------------------------

struct TrainArgs {
    std::string input;
    std::string model = "j48";
    std::string target = "category";
    std::uint64_t seed = 1;
    std::string config_path;
    std::string name;
    LoadFlags load;
    std::string out;
};

std::string rule_text(const TrainedModel &model) {
    const auto &tree = std::get<DecisionTreeModel>(model.payload);
    const auto &rules = model.encoder.rules();
    return tree.to_rule_text([&rules](std::size_t column, std::uint32_t value) -> std::string {
        if (column < rules.size()) {
            if (const auto *oh = std::get_if<OneHot>(&rules[column])) {
                return value < oh->dictionary.size() ? oh->dictionary[value] : std::string{"<unseen>"};
            }
        }
        return std::to_string(value);
    });
}

int cmd_train(const TrainArgs &a, std::ostream &out, std::ostream &err) {
    Stopwatch clock;
    const auto schema = a.load.schema();
    const auto load_options = a.load.options();

    TrainOptions options;
    options.kind = *parse_kind(a.model);
    options.granularity = a.target == "fine" ? Granularity::fine : Granularity::category;
    options.unknown_label = load_options.unknown_label;
    options.seed = a.seed;
    if (!a.config_path.empty()) {
        std::ifstream in{resolve_input(a.config_path)};
        std::stringstream text;
        text << in.rdbuf();
        if (!in) throw Error{Errc::io_error, "cannot read config " + a.config_path};
        options.apply_json(text.str());
    }

    const auto input = resolve_input(a.input);
    auto dir = prepare_out_dir(a.out);
    LoadResult loaded;
    auto records = read_records(input, schema, load_options, &loaded);
    report_skips(loaded, err);
    const double load_s = clock.seconds();

    std::ostringstream epochs;
    EpochObserver observer = [&epochs](std::size_t epoch, double error) {
        epochs << "epoch " << epoch << " error " << format_double(error) << "\n";
    };
    Stopwatch train_clock;
    auto model = train_model(records, options, schema, observer);
    model.meta["train_input"] = fs::path{input}.filename().string();
    const double train_s = train_clock.seconds();

    const std::string stem = a.name.empty() ? a.model + "-" + a.target + "-s" + std::to_string(a.seed) : a.name;
    std::ostringstream log;
    for (const auto &[k, v] : model.meta) log << k << "=" << v << "\n";
    if (loaded.skipped_malformed || loaded.skipped_unknown_label) {
        log << "skipped_malformed=" << loaded.skipped_malformed << "\nskipped_unknown_label="
            << loaded.skipped_unknown_label << "\n";
    }
    log << epochs.str();

    StagedOutputs staged;
    save_model(model, staged.stage(dir / (stem + ".model")));
    staged.write_text(dir / (stem + ".log"), log.str());
    if (options.kind == ModelKind::j48) staged.write_text(dir / (stem + ".rules.txt"), rule_text(model));
    if (options.kind == ModelKind::bayes) {
        staged.write_text(dir / (stem + ".tables.csv"), std::get<BayesModel>(model.payload).tables_csv());
    }
    staged.write_text(dir / (stem + ".timing.kv"), timing_text({{"load", load_s}, {"train", train_s}}));
    staged.commit();

    out << "trained " << a.model << " on " << model.meta["train_rows_used"] << " rows -> "
        << (dir / (stem + ".model")).string() << "\n";
    err << "train: load " << std::fixed << std::setprecision(2) << load_s << " s, fit " << train_s << " s\n";
    return kExitOk;
}

// evaluate / compare --------------------------------------------------------

struct EvaluateArgs {
    std::vector<std::string> models;
    std::string test;
    std::string expect_kind;
    std::string name;
    LoadFlags load;
    std::string out;
};

std::string model_stem(const std::string &path) { return fs::path{path}.stem().string(); }

std::vector<KddRecord> load_test(const std::string &path, const FeatureSchema &schema, const LoadFlags &flags,
                                 const UnknownLabelPolicy &policy, std::ostream &err) {
    auto options = flags.options();
    options.unknown_label = policy;
    LoadResult loaded;
    auto records = read_records(path, schema, options, &loaded);
    report_skips(loaded, err);
    return records;
}

void write_reports(StagedOutputs &staged, const fs::path &dir, const std::string &stem,
                   std::span<const EvaluationReport> reports) {
    staged.write_text(dir / (stem + ".txt"), render_report(reports, ReportFormat::text));
    staged.write_text(dir / (stem + ".csv"), render_report(reports, ReportFormat::csv));
    staged.write_text(dir / (stem + ".kv"), render_report(reports, ReportFormat::key_value));
}

int cmd_evaluate(const EvaluateArgs &a, std::ostream &out, std::ostream &err) {
    Stopwatch clock;
    const auto schema = a.load.schema();
    std::optional<ModelKind> expected;
    if (!a.expect_kind.empty()) expected = parse_kind(a.expect_kind);
    const auto model_path = resolve_input(a.models.front());
    auto model = load_model(model_path, expected);
    check_schema(model, schema);

    const auto test_path = resolve_input(a.test);
    auto test = load_test(test_path, schema, a.load, model.encoder.unknown_label(), err);
    const double load_s = clock.seconds();
    Stopwatch eval_clock;
    const auto name = a.name.empty() ? model_stem(model_path) : a.name;
    auto report = evaluate_model(model, test, name, dataset_stem(test_path));
    const double eval_s = eval_clock.seconds();

    const auto text = render_report(std::span{&report, 1}, ReportFormat::text);
    out << text;
    if (!a.out.empty()) {
        auto dir = prepare_out_dir(a.out);
        const auto seed = model.meta.count("seed") ? model.meta.at("seed") : std::string{"0"};
        const auto stem = name + "__" + dataset_stem(test_path) + "__s" + seed;
        StagedOutputs staged;
        write_reports(staged, dir, stem, std::span{&report, 1});
        staged.write_text(dir / (stem + ".timing.kv"), timing_text({{"load", load_s}, {"evaluate", eval_s}}));
        staged.commit();
    }
    err << "evaluate: " << std::fixed << std::setprecision(2) << eval_s << " s\n";
    return kExitOk;
}

int cmd_compare(const EvaluateArgs &a, std::ostream &out, std::ostream &err) {
    const auto schema = a.load.schema();
    const auto test_path = resolve_input(a.test);
    std::map<std::string, std::vector<KddRecord>> test_by_policy;
    std::vector<EvaluationReport> reports;
    std::map<std::string, double> times;
    for (const auto &m : a.models) {
        const auto path = resolve_input(m);
        auto model = load_model(path);
        check_schema(model, schema);
        const auto policy = model.encoder.unknown_label();
        auto it = test_by_policy.find(policy.to_string());
        if (it == test_by_policy.end()) {
            it = test_by_policy.emplace(policy.to_string(), load_test(test_path, schema, a.load, policy, err)).first;
        }
        Stopwatch clock;
        reports.push_back(evaluate_model(model, it->second, model_stem(path), dataset_stem(test_path)));
        times[model_stem(path)] = clock.seconds();
    }
    const auto text = render_report(reports, ReportFormat::text);
    out << text;
    if (!a.out.empty()) {
        auto dir = prepare_out_dir(a.out);
        const auto stem = "compare__" + dataset_stem(test_path);
        StagedOutputs staged;
        write_reports(staged, dir, stem, reports);
        staged.write_text(dir / (stem + ".timing.kv"), timing_text(times));
        staged.commit();
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    CLI::App app{"KDD Cup 99 intrusion-detection experiments: summarize, curate, train, evaluate, compare", "kddids"};
    app.require_subcommand(1);
    app.footer(std::string{"Relative input paths not found in the working directory are looked up in $"} + kDataDirEnv +
               ".\nExit status: 0 ok, 1 usage, 2 data error, 3 internal error.");

    SummarizeArgs sum;
    auto *summarize_cmd = app.add_subcommand("summarize", "count records per label and category");
    summarize_cmd->add_option("inputs", sum.inputs, "record files (plain or gzip); default: corpus in the data directory");
    add_load_flags(summarize_cmd, sum.load);
    summarize_cmd->add_option("--out", sum.out, "directory for summary.txt and summary.csv");

    CurateArgs cur;
    auto *curate_cmd = app.add_subcommand("curate", "deduplicate, sample per label and draw a disjoint holdout");
    curate_cmd->add_option("input", cur.input, "record file; default: corpus in the data directory");
    curate_cmd->add_option("--plan", cur.plan_path, "JSON curation plan; default: the built-in 148,753-record plan");
    curate_cmd->add_option("--seed", cur.seed, "overrides the plan seed");
    curate_cmd->add_option("--holdout", cur.holdout, "overrides the plan holdout size");
    add_load_flags(curate_cmd, cur.load);
    curate_cmd->add_option("--out", cur.out, "output directory")->required();

    TrainArgs tr;
    auto *train_cmd = app.add_subcommand("train", "fit a classifier and save it as a model file");
    train_cmd->add_option("input", tr.input, "training records")->required();
    train_cmd->add_option("--model", tr.model, "classifier")->check(CLI::IsMember({"j48", "mlp", "bayes"}));
    train_cmd->add_option("--target", tr.target, "class granularity")->check(CLI::IsMember({"category", "fine"}));
    train_cmd->add_option("--seed", tr.seed, "run seed");
    train_cmd->add_option("--config", tr.config_path, "JSON hyperparameter overrides");
    train_cmd->add_option("--name", tr.name, "output file stem; default <model>-<target>-s<seed>");
    add_load_flags(train_cmd, tr.load);
    train_cmd->add_option("--out", tr.out, "output directory")->required();

    EvaluateArgs ev;
    auto *evaluate_cmd = app.add_subcommand("evaluate", "score one model on a test file");
    evaluate_cmd->add_option("model_file", ev.models, "model file")->required()->expected(1);
    evaluate_cmd->add_option("--test", ev.test, "test records")->required();
    evaluate_cmd->add_option("--model", ev.expect_kind, "fail unless the file holds this classifier")
        ->check(CLI::IsMember({"j48", "mlp", "bayes"}));
    evaluate_cmd->add_option("--name", ev.name, "model name in the report; default: model file stem");
    add_load_flags(evaluate_cmd, ev.load, false);
    evaluate_cmd->add_option("--out", ev.out, "directory for .txt, .csv and .kv reports");

    EvaluateArgs cmp;
    auto *compare_cmd = app.add_subcommand("compare", "score several models on one test file side by side");
    compare_cmd->add_option("model_files", cmp.models, "model files")->required();
    compare_cmd->add_option("--test", cmp.test, "test records")->required();
    add_load_flags(compare_cmd, cmp.load, false);
    compare_cmd->add_option("--out", cmp.out, "directory for .txt, .csv and .kv reports");

    std::vector<const char *> argv{"kddids"};
    for (const auto &a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (summarize_cmd->parsed()) return cmd_summarize(sum, out, err);
        if (curate_cmd->parsed()) return cmd_curate(cur, out, err);
        if (train_cmd->parsed()) return cmd_train(tr, out, err);
        if (evaluate_cmd->parsed()) return cmd_evaluate(ev, out, err);
        if (compare_cmd->parsed()) return cmd_compare(cmp, out, err);
        return kExitUsage;
    } catch (const UsageError &e) {
        err << "kddids: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error &e) {
        err << "kddids: " << errc_name(e.code()) << ": " << e.what() << "\n";
        return e.is_data_error() ? kExitData : kExitUsage;
    } catch (const std::exception &e) {
        err << "kddids: internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

}  // namespace kddids
