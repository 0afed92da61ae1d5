#include "kddids/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "json.hpp"
#include "kddids/error.hpp"
#include "kddids/rng.hpp"

namespace kddids {

using nlohmann::json;

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

namespace {

constexpr TransferKind kTransfers[] = {TransferKind::linear, TransferKind::sigmoid, TransferKind::hyperbolic,
                                       TransferKind::hard_limit, TransferKind::symmetric_hard_limit};

TransferKind parse_transfer(const std::string &name) {
    for (auto t : kTransfers) {
        if (transfer_name(t) == name) return t;
    }
    throw Error{Errc::invalid_config, "unknown transfer function '" + name + "'"};
}

void reject_unknown_keys(const json &obj, std::initializer_list<const char *> allowed, const std::string &where) {
    if (!obj.is_object()) throw Error{Errc::invalid_config, where + " must be a JSON object"};
    for (const auto &[key, _] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&key](const char *a) { return key == a; })) {
            throw Error{Errc::invalid_config, "unknown key '" + key + "' in " + where};
        }
    }
}

template <typename T>
void read_if(const json &obj, const char *key, T &out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

}  // namespace

void TrainOptions::apply_json(const std::string &text) {
    try {
        const auto doc = json::parse(text);
        reject_unknown_keys(doc, {"j48", "mlp", "bayes"}, "config");
        if (doc.contains("j48")) {
            const auto &t = doc.at("j48");
            reject_unknown_keys(t, {"criterion", "min_leaf", "prune", "confidence", "max_depth"}, "j48 config");
            if (t.contains("criterion")) {
                auto c = t.at("criterion").get<std::string>();
                if (c == "gain_ratio") tree.criterion = SplitCriterion::gain_ratio;
                else if (c == "info_gain") tree.criterion = SplitCriterion::info_gain;
                else throw Error{Errc::invalid_config, "unknown split criterion '" + c + "'"};
            }
            read_if(t, "min_leaf", tree.min_leaf);
            read_if(t, "prune", tree.prune);
            read_if(t, "confidence", tree.confidence);
            if (t.contains("max_depth")) {
                auto d = t.at("max_depth").get<std::size_t>();
                tree.max_depth = d == 0 ? std::nullopt : std::optional<std::size_t>{d};
            }
        }
        if (doc.contains("mlp")) {
            const auto &m = doc.at("mlp");
            reject_unknown_keys(m, {"learning_rate", "momentum", "epochs", "init_scale", "shuffle", "hidden",
                                    "transfer", "train_limit"},
                                "mlp config");
            read_if(m, "learning_rate", mlp.learning_rate);
            read_if(m, "momentum", mlp.momentum);
            read_if(m, "epochs", mlp.epochs);
            read_if(m, "init_scale", mlp.init_scale);
            read_if(m, "shuffle", mlp.shuffle_each_epoch);
            read_if(m, "hidden", mlp_hidden);
            if (m.contains("transfer")) mlp_transfer = parse_transfer(m.at("transfer").get<std::string>());
            read_if(m, "train_limit", mlp_train_limit);
        }
        if (doc.contains("bayes")) {
            const auto &b = doc.at("bayes");
            reject_unknown_keys(b, {"alpha", "bins"}, "bayes config");
            read_if(b, "alpha", bayes.alpha);
            read_if(b, "bins", bayes_bins);
        }
    } catch (const json::exception &e) {
        throw Error{Errc::invalid_config, std::string{"config: "} + e.what()};
    }
    tree.validate();
    mlp.validate();
    if (bayes.alpha < 0.0) throw Error{Errc::invalid_config, "bayes alpha must be non-negative"};
    if (bayes_bins < 1) throw Error{Errc::invalid_config, "bayes bins must be at least 1"};
}

std::string TrainOptions::to_json() const {
    json doc;
    doc["kind"] = std::string{kind_name(kind)};
    doc["target"] = std::string{granularity_name(granularity)};
    doc["unknown_label"] = unknown_label.to_string();
    doc["seed"] = seed;
    switch (kind) {
    case ModelKind::j48:
        doc["j48"] = {{"criterion", tree.criterion == SplitCriterion::gain_ratio ? "gain_ratio" : "info_gain"},
                      {"min_leaf", tree.min_leaf},
                      {"prune", tree.prune},
                      {"confidence", format_double(tree.confidence)},
                      {"max_depth", tree.max_depth.value_or(0)}};
        break;
    case ModelKind::mlp:
        doc["mlp"] = {{"learning_rate", format_double(mlp.learning_rate)},
                      {"momentum", format_double(mlp.momentum)},
                      {"epochs", mlp.epochs},
                      {"init_scale", format_double(mlp.init_scale)},
                      {"shuffle", mlp.shuffle_each_epoch},
                      {"hidden", mlp_hidden},
                      {"transfer", std::string{transfer_name(mlp_transfer)}},
                      {"train_limit", mlp_train_limit}};
        break;
    case ModelKind::bayes:
        doc["bayes"] = {{"alpha", format_double(bayes.alpha)}, {"bins", bayes_bins}};
        break;
    }
    return doc.dump();
}

std::uint64_t TrainOptions::config_hash() const { return fnv1a(to_json()); }

TrainedModel train_model(std::span<const KddRecord> train, const TrainOptions &options, const FeatureSchema &schema,
                         const EpochObserver &observer) {
    EncoderOptions enc;
    enc.granularity = options.granularity;
    enc.unknown_label = options.unknown_label;
    enc.bayes_bins = options.bayes_bins;
    switch (options.kind) {
    case ModelKind::j48: enc.mode = EncoderMode::tree; break;
    case ModelKind::mlp: enc.mode = EncoderMode::mlp; break;
    case ModelKind::bayes: enc.mode = EncoderMode::bayes; break;
    }

    TrainedModel model;
    model.encoder = fit_encoder(train, enc, schema);
    model.meta["kind"] = std::string{kind_name(options.kind)};
    model.meta["seed"] = std::to_string(options.seed);
    model.meta["target"] = std::string{granularity_name(options.granularity)};
    model.meta["unknown_label"] = options.unknown_label.to_string();
    model.meta["config"] = options.to_json();
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(options.config_hash()));
    model.meta["config_hash"] = hash;
    model.meta["train_records"] = std::to_string(train.size());

    switch (options.kind) {
    case ModelKind::j48: {
        auto data = encode(train, model.encoder);
        model.meta["train_rows_used"] = std::to_string(data.rows());
        auto tree = build_tree(data, options.tree);
        model.meta["tree_nodes"] = std::to_string(tree.node_count());
        model.meta["tree_leaves"] = std::to_string(tree.leaf_count());
        model.payload = std::move(tree);
        break;
    }
    case ModelKind::mlp: {
        std::vector<KddRecord> subset;
        std::span<const KddRecord> rows = train;
        if (options.mlp_train_limit != 0 && train.size() > options.mlp_train_limit) {
            std::vector<std::size_t> picks(train.size());
            std::iota(picks.begin(), picks.end(), std::size_t{0});
            Rng rng{derive_seed(options.seed, "mlp-subsample")};
            rng.partial_shuffle(std::span{picks}, options.mlp_train_limit);
            picks.resize(options.mlp_train_limit);
            std::sort(picks.begin(), picks.end());
            subset.reserve(picks.size());
            for (auto i : picks) subset.push_back(train[i]);
            rows = subset;
            model.meta["subsample"] = "uniform random " + std::to_string(options.mlp_train_limit) + " of " +
                                      std::to_string(train.size()) + " training records";
        }
        auto data = encode(rows, model.encoder);
        model.meta["train_rows_used"] = std::to_string(data.rows());
        MlpTopology topology = MlpTopology::standard(data.width, data.num_classes());
        if (!options.mlp_hidden.empty()) {
            topology.hidden = options.mlp_hidden;
            topology.transfers.assign(topology.hidden.size() + 1, options.mlp_transfer);
            topology.transfers.back() = TransferKind::sigmoid;
        } else {
            topology.transfers.front() = options.mlp_transfer;
        }
        TrainConfig config = options.mlp;
        config.seed = options.seed;
        auto net = train_mlp(topology, data, config, observer);
        model.meta["mlp_initial_error"] = format_double(net.meta().initial_error);
        model.meta["mlp_final_error"] = format_double(net.meta().final_error);
        model.payload = std::move(net);
        break;
    }
    case ModelKind::bayes: {
        auto data = encode(train, model.encoder);
        model.meta["train_rows_used"] = std::to_string(data.rows());
        model.payload = fit_bayes(data, options.bayes);
        break;
    }
    }
    return model;
}

ScoredSet score_records(const TrainedModel &model, std::span<const KddRecord> records) {
    ScoredSet out;
    out.probabilities.reserve(records.size());
    out.truth.reserve(records.size());
    std::vector<double> row(model.encoder.width());
    for (const auto &rec : records) {
        auto cls = model.encoder.class_index(rec);
        if (!cls) {
            ++out.skipped;
            continue;
        }
        model.encoder.encode_row(rec, row);
        out.probabilities.push_back(model.predict_encoded(row));
        out.truth.push_back(*cls);
    }
    return out;
}

namespace {

std::string classifier_label(ModelKind kind) {
    switch (kind) {
    case ModelKind::j48: return "j48 tree";
    case ModelKind::mlp: return "multilayer perceptron";
    case ModelKind::bayes: return "naive bayes";
    }
    return "unknown";
}

}  // namespace

EvaluationReport evaluate_model(const TrainedModel &model, std::span<const KddRecord> test, std::string model_name,
                                std::string dataset_name) {
    auto scored = score_records(model, test);
    if (scored.truth.empty()) throw Error{Errc::empty_matrix, "no test records left to evaluate"};
    auto report = make_report(std::move(model_name), classifier_label(model.kind()), std::move(dataset_name),
                              scored.probabilities, scored.truth, model.class_names());
    for (const auto &[k, v] : model.meta) {
        if (k != "config") report.provenance["train." + k] = v;
    }
    report.provenance["test_records"] = std::to_string(test.size());
    report.provenance["test_skipped"] = std::to_string(scored.skipped);
    return report;
}

}  // namespace kddids
