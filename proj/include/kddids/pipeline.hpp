// pipeline.hpp
//
// Record-level training and evaluation on top of the encoders and the three
// classifier families.

#ifndef KDDIDS_PIPELINE_HPP
#define KDDIDS_PIPELINE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kddids/eval.hpp"
#include "kddids/model_store.hpp"

namespace kddids {

struct TrainOptions {
    ModelKind kind = ModelKind::j48;
    Granularity granularity = Granularity::category;
    UnknownLabelPolicy unknown_label = UnknownLabelPolicy::error();
    std::uint64_t seed = 1;

    GrowConfig tree;
    /// the seed field is replaced by the run seed
    TrainConfig mlp;
    /// empty: one hidden layer of (inputs + classes) / 2 units
    std::vector<std::size_t> mlp_hidden;
    TransferKind mlp_transfer = TransferKind::sigmoid;
    /// training rows drawn for the perceptron; 0 uses every row
    std::size_t mlp_train_limit = 20000;
    SmoothingConfig bayes;
    std::size_t bayes_bins = 10;

    /// Overrides fields from a JSON object:
    ///   {"j48":   {"criterion": "gain_ratio"|"info_gain", "min_leaf": 2,
    ///              "prune": true, "confidence": 0.25, "max_depth": 0},
    ///    "mlp":   {"learning_rate": 0.3, "momentum": 0.2, "epochs": 100,
    ///              "init_scale": 0.5, "shuffle": true, "hidden": [n, ...],
    ///              "transfer": "sigmoid", "train_limit": 20000},
    ///    "bayes": {"alpha": 1.0, "bins": 10}}
    /// Unknown keys raise Error(invalid_config).  max_depth 0 means unlimited.
    void apply_json(const std::string &text);

    /// canonical JSON of every setting that affects the trained model
    std::string to_json() const;
    std::uint64_t config_hash() const;
};

/// Fits the encoder and the classifier.  Throws Error(empty_training_set),
/// Error(invalid_config) and the classifiers' own errors.
TrainedModel train_model(std::span<const KddRecord> train, const TrainOptions &options,
                         const FeatureSchema &schema = FeatureSchema::kdd99(),
                         const EpochObserver &observer = {});

struct ScoredSet {
    std::vector<std::vector<double>> probabilities;
    std::vector<std::uint32_t> truth;
    /// records dropped by the model's unknown-label policy
    std::uint64_t skipped = 0;
};

ScoredSet score_records(const TrainedModel &model, std::span<const KddRecord> records);

/// scores records and builds the report; the model's training metadata is
/// copied into the report provenance
EvaluationReport evaluate_model(const TrainedModel &model, std::span<const KddRecord> test,
                                std::string model_name, std::string dataset_name);

/// shortest round-trip decimal text of a double
std::string format_double(double v);

}  // namespace kddids

#endif
