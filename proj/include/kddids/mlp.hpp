// mlp.hpp
//
// Fully connected feed-forward perceptron trained by per-instance
// backpropagation with momentum.

#ifndef KDDIDS_MLP_HPP
#define KDDIDS_MLP_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "kddids/bytes.hpp"
#include "kddids/encode.hpp"

namespace kddids {

enum class TransferKind : std::uint8_t { linear, sigmoid, hyperbolic, hard_limit, symmetric_hard_limit };

std::string_view transfer_name(TransferKind kind);

/// Hyperbolic is the standard tanh.
double transfer_eval(TransferKind kind, double x);

/// derivative expressed through the activation value y = f(x)
double transfer_slope(TransferKind kind, double y);

bool is_differentiable(TransferKind kind);

struct MlpTopology {
    std::size_t inputs = 0;
    std::vector<std::size_t> hidden;
    std::size_t outputs = 0;
    /// one per weight layer (hidden.size() + 1)
    std::vector<TransferKind> transfers;

    /// one hidden sigmoid layer of (inputs + outputs) / 2 units, sigmoid outputs
    static MlpTopology standard(std::size_t inputs, std::size_t outputs);

    std::size_t layer_count() const { return hidden.size() + 1; }
    std::size_t layer_inputs(std::size_t layer) const { return layer == 0 ? inputs : hidden[layer - 1]; }
    std::size_t layer_outputs(std::size_t layer) const { return layer == hidden.size() ? outputs : hidden[layer]; }

    /// throws Error(shape_mismatch)
    void validate() const;

    friend bool operator==(const MlpTopology &, const MlpTopology &) = default;
};

struct DenseLayer {
    std::size_t inputs = 0;
    std::size_t outputs = 0;
    std::vector<double> weights;  // outputs x inputs, row-major: weights[j * inputs + i]
    std::vector<double> bias;
    TransferKind transfer = TransferKind::sigmoid;

    std::span<const double> row(std::size_t j) const { return {weights.data() + j * inputs, inputs}; }
    std::span<double> row(std::size_t j) { return {weights.data() + j * inputs, inputs}; }

    friend bool operator==(const DenseLayer &, const DenseLayer &) = default;
};

struct TrainConfig {
    double learning_rate = 0.3;
    double momentum = 0.2;
    std::size_t epochs = 100;
    std::uint64_t seed = 0;
    bool shuffle_each_epoch = true;
    double init_scale = 0.5;

    /// throws Error(invalid_config)
    void validate() const;
};

struct TrainingMeta {
    std::uint64_t seed = 0;
    std::size_t epochs_run = 0;
    double initial_error = 0.0;
    double final_error = 0.0;

    friend bool operator==(const TrainingMeta &, const TrainingMeta &) = default;
};

/// activations of every layer; activations[0] is the input itself
struct ForwardPass {
    std::vector<std::vector<double>> activations;
    const std::vector<double> &output() const { return activations.back(); }
};

class MlpModel {
public:
    MlpModel() = default;
    /// zero-initialized weights
    explicit MlpModel(MlpTopology topology, std::vector<std::string> class_names = {});

    /// uniform weights and biases in [-scale, scale]
    void randomize(std::uint64_t seed, double scale);

    const MlpTopology &topology() const { return topology_; }
    const std::vector<DenseLayer> &layers() const { return layers_; }
    std::vector<DenseLayer> &layers() { return layers_; }
    const std::vector<std::string> &class_names() const { return class_names_; }
    const TrainingMeta &meta() const { return meta_; }
    void set_meta(const TrainingMeta &meta) { meta_ = meta; }

    /// throws Error(shape_mismatch) if input width differs from the topology
    ForwardPass forward(std::span<const double> input) const;
    void forward_into(std::span<const double> input, ForwardPass &pass) const;

    /// output activations normalized to sum 1; uniform if they sum to 0
    std::vector<double> predict_dist(std::span<const double> input) const;

    void serialize(ByteWriter &w) const;
    static MlpModel deserialize(ByteReader &r);

    friend bool operator==(const MlpModel &, const MlpModel &) = default;

private:
    MlpTopology topology_;
    std::vector<DenseLayer> layers_;
    std::vector<std::string> class_names_;
    TrainingMeta meta_;
};

/// (1/N) sum_i sum_c (target - output)^2; throws Error(shape_mismatch)
double mse(std::span<const std::vector<double>> targets, std::span<const std::vector<double>> outputs);

/// one-hot target vector for a class index
std::vector<double> one_hot(std::uint32_t cls, std::size_t classes);

/// mse of the model over an encoded dataset with one-hot targets
double dataset_error(const MlpModel &model, const EncodedDataset &data);

struct Sample {
    std::vector<double> input;
    std::vector<double> target;
};

/// d mse / d parameter, laid out like the model's weights and biases
struct Gradients {
    std::vector<std::vector<double>> weights;
    std::vector<std::vector<double>> bias;
};

/// analytic gradient of the batch mse by backpropagation
Gradients mse_gradient(const MlpModel &model, std::span<const Sample> batch);

/// Largest relative difference |a - n| / max(|a| + |n|, 1e-8) between the
/// analytic gradient and central finite differences (h = 1e-5), over every
/// weight and bias.
double gradient_check(const MlpModel &model, std::span<const Sample> batch);

/// called once per epoch with (epoch, running Eq.-7 error of the pass)
using EpochObserver = std::function<void(std::size_t epoch, double error)>;

/// Seeds the weights, then runs `epochs` passes of per-instance gradient
/// descent with momentum.  Deterministic under config.seed.  Throws
/// Error(empty_training_set), Error(shape_mismatch) or
/// Error(non_differentiable_transfer).
MlpModel train_mlp(const MlpTopology &topology, const EncodedDataset &train, const TrainConfig &config,
                   const EpochObserver &observer = {});

}  // namespace kddids

#endif
