#include "kddids/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "kddids/error.hpp"
#include "kddids/rng.hpp"
#include "kddids/simd.hpp"

namespace kddids {

std::string_view transfer_name(TransferKind kind) {
    switch (kind) {
    case TransferKind::linear: return "linear";
    case TransferKind::sigmoid: return "sigmoid";
    case TransferKind::hyperbolic: return "hyperbolic";
    case TransferKind::hard_limit: return "hard_limit";
    case TransferKind::symmetric_hard_limit: return "symmetric_hard_limit";
    }
    return "?";
}

double transfer_eval(TransferKind kind, double x) {
    switch (kind) {
    case TransferKind::linear: return x;
    case TransferKind::sigmoid: return 1.0 / (1.0 + std::exp(-x));
    case TransferKind::hyperbolic: return std::tanh(x);
    case TransferKind::hard_limit: return x < 0.0 ? 0.0 : 1.0;
    case TransferKind::symmetric_hard_limit: return x < 0.0 ? -1.0 : 1.0;
    }
    return x;
}

double transfer_slope(TransferKind kind, double y) {
    switch (kind) {
    case TransferKind::linear: return 1.0;
    case TransferKind::sigmoid: return y * (1.0 - y);
    case TransferKind::hyperbolic: return 1.0 - y * y;
    case TransferKind::hard_limit:
    case TransferKind::symmetric_hard_limit: return 0.0;
    }
    return 0.0;
}

bool is_differentiable(TransferKind kind) {
    return kind == TransferKind::linear || kind == TransferKind::sigmoid || kind == TransferKind::hyperbolic;
}

MlpTopology MlpTopology::standard(std::size_t inputs, std::size_t outputs) {
    MlpTopology t;
    t.inputs = inputs;
    t.hidden = {std::max<std::size_t>(1, (inputs + outputs) / 2)};
    t.outputs = outputs;
    t.transfers = {TransferKind::sigmoid, TransferKind::sigmoid};
    return t;
}

void MlpTopology::validate() const {
    if (inputs == 0 || outputs == 0 || std::find(hidden.begin(), hidden.end(), 0) != hidden.end()) {
        throw Error{Errc::shape_mismatch, "every layer needs at least one unit"};
    }
    if (transfers.size() != layer_count()) {
        throw Error{Errc::shape_mismatch, "need one transfer function per weight layer"};
    }
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw Error{Errc::invalid_config, "learning rate must be positive"};
    if (!(momentum >= 0.0 && momentum < 1.0)) throw Error{Errc::invalid_config, "momentum must lie in [0, 1)"};
    if (epochs < 1) throw Error{Errc::invalid_config, "epochs must be at least 1"};
    if (!(init_scale > 0.0)) throw Error{Errc::invalid_config, "init scale must be positive"};
}

MlpModel::MlpModel(MlpTopology topology, std::vector<std::string> class_names)
    : topology_{std::move(topology)}, class_names_{std::move(class_names)} {
    topology_.validate();
    if (!class_names_.empty() && class_names_.size() != topology_.outputs) {
        throw Error{Errc::shape_mismatch, "output width must equal the class count"};
    }
    for (std::size_t l = 0; l < topology_.layer_count(); ++l) {
        DenseLayer layer;
        layer.inputs = topology_.layer_inputs(l);
        layer.outputs = topology_.layer_outputs(l);
        layer.weights.assign(layer.inputs * layer.outputs, 0.0);
        layer.bias.assign(layer.outputs, 0.0);
        layer.transfer = topology_.transfers[l];
        layers_.push_back(std::move(layer));
    }
}

void MlpModel::randomize(std::uint64_t seed, double scale) {
    Rng rng{seed};
    for (auto &layer : layers_) {
        for (auto &w : layer.weights) w = rng.uniform(-scale, scale);
        for (auto &b : layer.bias) b = rng.uniform(-scale, scale);
    }
}

void MlpModel::forward_into(std::span<const double> input, ForwardPass &pass) const {
    if (input.size() != topology_.inputs) {
        throw Error{Errc::shape_mismatch, "input width " + std::to_string(input.size()) + " != " +
                                              std::to_string(topology_.inputs)};
    }
    const auto &k = simd::active();
    pass.activations.resize(layers_.size() + 1);
    pass.activations[0].assign(input.begin(), input.end());
    for (std::size_t l = 0; l < layers_.size(); ++l) {
        const auto &layer = layers_[l];
        const auto &in = pass.activations[l];
        auto &out = pass.activations[l + 1];
        out.resize(layer.outputs);
        for (std::size_t j = 0; j < layer.outputs; ++j) {
            double net = k.dot(layer.weights.data() + j * layer.inputs, in.data(), layer.inputs) + layer.bias[j];
            out[j] = transfer_eval(layer.transfer, net);
        }
    }
}

ForwardPass MlpModel::forward(std::span<const double> input) const {
    ForwardPass pass;
    forward_into(input, pass);
    return pass;
}

std::vector<double> MlpModel::predict_dist(std::span<const double> input) const {
    auto out = forward(input).output();
    double sum = 0.0;
    for (double v : out) sum += std::max(v, 0.0);
    if (!(sum > 0.0)) {
        std::fill(out.begin(), out.end(), 1.0 / static_cast<double>(out.size()));
        return out;
    }
    for (double &v : out) v = std::max(v, 0.0) / sum;
    return out;
}

void MlpModel::serialize(ByteWriter &w) const {
    w.u64(topology_.inputs);
    w.u64(topology_.hidden.size());
    for (auto h : topology_.hidden) w.u64(h);
    w.u64(topology_.outputs);
    for (auto t : topology_.transfers) w.u8(static_cast<std::uint8_t>(t));
    w.u64(class_names_.size());
    for (const auto &c : class_names_) w.str(c);
    for (const auto &layer : layers_) {
        w.f64s(layer.weights);
        w.f64s(layer.bias);
    }
    w.u64(meta_.seed);
    w.u64(meta_.epochs_run);
    w.f64(meta_.initial_error);
    w.f64(meta_.final_error);
}

MlpModel MlpModel::deserialize(ByteReader &r) {
    MlpTopology t;
    t.inputs = r.u64();
    t.hidden.resize(r.length(8));
    for (auto &h : t.hidden) h = r.u64();
    t.outputs = r.u64();
    for (std::size_t l = 0; l < t.hidden.size() + 1; ++l) {
        auto kind = r.u8();
        if (kind > 4) throw Error{Errc::integrity_error, "invalid transfer function"};
        t.transfers.push_back(static_cast<TransferKind>(kind));
    }
    std::vector<std::string> classes(r.length(8));
    for (auto &c : classes) c = r.str();
    MlpModel model;
    try {
        model = MlpModel{t, classes};
    } catch (const Error &e) {
        throw Error{Errc::integrity_error, std::string{"invalid perceptron topology: "} + e.what()};
    }
    for (auto &layer : model.layers_) {
        auto weights = r.f64s();
        auto bias = r.f64s();
        if (weights.size() != layer.weights.size() || bias.size() != layer.bias.size()) {
            throw Error{Errc::integrity_error, "perceptron layer shape mismatch"};
        }
        layer.weights = std::move(weights);
        layer.bias = std::move(bias);
    }
    model.meta_.seed = r.u64();
    model.meta_.epochs_run = r.u64();
    model.meta_.initial_error = r.f64();
    model.meta_.final_error = r.f64();
    return model;
}

double mse(std::span<const std::vector<double>> targets, std::span<const std::vector<double>> outputs) {
    if (targets.size() != outputs.size()) {
        throw Error{Errc::shape_mismatch, "target and output sets differ in size"};
    }
    if (targets.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < targets.size(); ++i) {
        if (targets[i].size() != outputs[i].size()) {
            throw Error{Errc::shape_mismatch, "target and output vectors differ in width"};
        }
        for (std::size_t c = 0; c < targets[i].size(); ++c) {
            double d = targets[i][c] - outputs[i][c];
            total += d * d;
        }
    }
    return total / static_cast<double>(targets.size());
}

std::vector<double> one_hot(std::uint32_t cls, std::size_t classes) {
    std::vector<double> t(classes, 0.0);
    t.at(cls) = 1.0;
    return t;
}

namespace {

double squared_error(std::span<const double> output, std::uint32_t cls) {
    double e = 0.0;
    for (std::size_t c = 0; c < output.size(); ++c) {
        double d = (c == cls ? 1.0 : 0.0) - output[c];
        e += d * d;
    }
    return e;
}

// dE/dnet per layer for E = sum_c (t_c - y_c)^2 on one instance
void backprop_deltas(const MlpModel &model, const ForwardPass &pass, std::span<const double> target,
                     std::vector<std::vector<double>> &deltas, std::vector<double> &back) {
    const auto &layers = model.layers();
    const auto &k = simd::active();
    deltas.resize(layers.size());
    const std::size_t last = layers.size() - 1;
    const auto &out = pass.activations.back();
    deltas[last].resize(out.size());
    for (std::size_t c = 0; c < out.size(); ++c) {
        deltas[last][c] = -2.0 * (target[c] - out[c]) * transfer_slope(layers[last].transfer, out[c]);
    }
    for (std::size_t l = last; l > 0; --l) {
        const auto &layer = layers[l];
        back.assign(layer.inputs, 0.0);
        for (std::size_t j = 0; j < layer.outputs; ++j) {
            k.axpy(deltas[l][j], layer.weights.data() + j * layer.inputs, back.data(), layer.inputs);
        }
        const auto &act = pass.activations[l];
        auto &d = deltas[l - 1];
        d.resize(layer.inputs);
        for (std::size_t i = 0; i < layer.inputs; ++i) d[i] = back[i] * transfer_slope(layers[l - 1].transfer, act[i]);
    }
}

}  // namespace

double dataset_error(const MlpModel &model, const EncodedDataset &data) {
    if (data.rows() == 0) return 0.0;
    ForwardPass pass;
    double total = 0.0;
    for (std::size_t i = 0; i < data.rows(); ++i) {
        model.forward_into(data.row(i), pass);
        total += squared_error(pass.output(), data.targets[i]);
    }
    return total / static_cast<double>(data.rows());
}

Gradients mse_gradient(const MlpModel &model, std::span<const Sample> batch) {
    Gradients g;
    for (const auto &layer : model.layers()) {
        g.weights.emplace_back(layer.weights.size(), 0.0);
        g.bias.emplace_back(layer.bias.size(), 0.0);
    }
    if (batch.empty()) return g;
    const auto &k = simd::active();
    ForwardPass pass;
    std::vector<std::vector<double>> deltas;
    std::vector<double> back;
    for (const auto &s : batch) {
        model.forward_into(s.input, pass);
        if (s.target.size() != pass.output().size()) {
            throw Error{Errc::shape_mismatch, "target width differs from output width"};
        }
        backprop_deltas(model, pass, s.target, deltas, back);
        for (std::size_t l = 0; l < model.layers().size(); ++l) {
            const auto &layer = model.layers()[l];
            for (std::size_t j = 0; j < layer.outputs; ++j) {
                k.axpy(deltas[l][j], pass.activations[l].data(), g.weights[l].data() + j * layer.inputs, layer.inputs);
                g.bias[l][j] += deltas[l][j];
            }
        }
    }
    const double n = static_cast<double>(batch.size());
    for (auto &w : g.weights) for (auto &x : w) x /= n;
    for (auto &b : g.bias) for (auto &x : b) x /= n;
    return g;
}

namespace {

double batch_mse(const MlpModel &model, std::span<const Sample> batch) {
    std::vector<std::vector<double>> targets;
    std::vector<std::vector<double>> outputs;
    for (const auto &s : batch) {
        targets.push_back(s.target);
        outputs.push_back(model.forward(s.input).output());
    }
    return mse(targets, outputs);
}

}  // namespace

double gradient_check(const MlpModel &model, std::span<const Sample> batch) {
    for (const auto &layer : model.layers()) {
        if (!is_differentiable(layer.transfer)) {
            throw Error{Errc::non_differentiable_transfer, "gradient check needs differentiable transfers"};
        }
    }
    constexpr double h = 1e-5;
    const auto analytic = mse_gradient(model, batch);
    MlpModel probe = model;
    double worst = 0.0;
    auto check = [&](double &param, double a) {
        const double saved = param;
        param = saved + h;
        const double up = batch_mse(probe, batch);
        param = saved - h;
        const double down = batch_mse(probe, batch);
        param = saved;
        const double numeric = (up - down) / (2.0 * h);
        worst = std::max(worst, std::abs(a - numeric) / std::max(std::abs(a) + std::abs(numeric), 1e-8));
    };
    for (std::size_t l = 0; l < probe.layers().size(); ++l) {
        auto &layer = probe.layers()[l];
        for (std::size_t i = 0; i < layer.weights.size(); ++i) check(layer.weights[i], analytic.weights[l][i]);
        for (std::size_t j = 0; j < layer.bias.size(); ++j) check(layer.bias[j], analytic.bias[l][j]);
    }
    return worst;
}

MlpModel train_mlp(const MlpTopology &topology, const EncodedDataset &train, const TrainConfig &config,
                   const EpochObserver &observer) {
    config.validate();
    topology.validate();
    for (auto t : topology.transfers) {
        if (!is_differentiable(t)) {
            throw Error{Errc::non_differentiable_transfer,
                        "transfer '" + std::string{transfer_name(t)} + "' cannot be trained by backpropagation"};
        }
    }
    if (train.rows() == 0) throw Error{Errc::empty_training_set, "cannot train on an empty training set"};
    train.validate();
    if (train.width != topology.inputs || train.num_classes() != topology.outputs) {
        throw Error{Errc::shape_mismatch, "training data does not match the network shape"};
    }

    MlpModel model{topology, train.class_names};
    model.randomize(derive_seed(config.seed, "mlp-init"), config.init_scale);

    TrainingMeta meta;
    meta.seed = config.seed;
    meta.initial_error = dataset_error(model, train);

    std::vector<std::vector<double>> weight_velocity;
    std::vector<std::vector<double>> bias_velocity;
    for (const auto &layer : model.layers()) {
        weight_velocity.emplace_back(layer.weights.size(), 0.0);
        bias_velocity.emplace_back(layer.bias.size(), 0.0);
    }

    const auto &k = simd::active();
    std::vector<std::uint32_t> order(train.rows());
    std::iota(order.begin(), order.end(), std::uint32_t{0});
    Rng order_rng{derive_seed(config.seed, "mlp-order")};
    ForwardPass pass;
    std::vector<std::vector<double>> deltas;
    std::vector<double> back;
    std::vector<double> target(topology.outputs, 0.0);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        if (config.shuffle_each_epoch) order_rng.shuffle(std::span{order});
        double running = 0.0;
        for (auto row : order) {
            model.forward_into(train.row(row), pass);
            std::fill(target.begin(), target.end(), 0.0);
            target[train.targets[row]] = 1.0;
            running += squared_error(pass.output(), train.targets[row]);
            backprop_deltas(model, pass, target, deltas, back);
            // step along -grad of (1/2) sum (t - y)^2, the per-instance form of the mse
            for (std::size_t l = 0; l < model.layers().size(); ++l) {
                auto &layer = model.layers()[l];
                const double *in = pass.activations[l].data();
                for (std::size_t j = 0; j < layer.outputs; ++j) {
                    const double step = -0.5 * config.learning_rate * deltas[l][j];
                    k.momentum_step(step, in, config.momentum, weight_velocity[l].data() + j * layer.inputs,
                                    layer.weights.data() + j * layer.inputs, layer.inputs);
                    double &bv = bias_velocity[l][j];
                    bv = config.momentum * bv + step;
                    layer.bias[j] += bv;
                }
            }
        }
        meta.epochs_run = epoch + 1;
        if (observer) observer(epoch + 1, running / static_cast<double>(train.rows()));
    }
    meta.final_error = dataset_error(model, train);
    model.set_meta(meta);
    return model;
}

}  // namespace kddids
