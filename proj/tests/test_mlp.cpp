#include <cmath>

#include "doctest.h"
#include "kddids/error.hpp"
#include "kddids/mlp.hpp"
#include "kddids/rng.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace kddids;
using namespace kddids::testing;

namespace {

EncodedDataset xor_data() {
    EncodedDataset d;
    d.width = 2;
    d.columns = {{"a", false, 0}, {"b", false, 0}};
    d.class_names = {"zero", "one"};
    for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
            d.values.push_back(a);
            d.values.push_back(b);
            d.targets.push_back(static_cast<std::uint32_t>(a ^ b));
        }
    }
    return d;
}

}  // namespace

TEST_CASE("transfer functions and their slopes") {
    CHECK(transfer_eval(TransferKind::sigmoid, 0.0) == 0.5);
    CHECK(transfer_eval(TransferKind::sigmoid, 2.0) == doctest::Approx(0.8807970779778823));
    CHECK(transfer_eval(TransferKind::hyperbolic, 0.5) == doctest::Approx(0.46211715726000974));
    CHECK(transfer_eval(TransferKind::linear, -3.25) == -3.25);
    CHECK(transfer_eval(TransferKind::hard_limit, -0.1) == 0.0);
    CHECK(transfer_eval(TransferKind::hard_limit, 0.0) == 1.0);
    CHECK(transfer_eval(TransferKind::symmetric_hard_limit, -2.0) == -1.0);
    CHECK(transfer_eval(TransferKind::symmetric_hard_limit, 2.0) == 1.0);
    for (auto kind : {TransferKind::sigmoid, TransferKind::hyperbolic, TransferKind::linear}) {
        for (double x : {-1.5, -0.2, 0.0, 0.7, 2.0}) {
            const double h = 1e-6;
            const double numeric = (transfer_eval(kind, x + h) - transfer_eval(kind, x - h)) / (2 * h);
            CHECK(transfer_slope(kind, transfer_eval(kind, x)) == doctest::Approx(numeric).epsilon(1e-6));
        }
    }
    CHECK_FALSE(is_differentiable(TransferKind::hard_limit));
}

TEST_CASE("forward pass on a hand-set network") {
    MlpTopology t;
    t.inputs = 2;
    t.hidden = {2};
    t.outputs = 1;
    t.transfers = {TransferKind::sigmoid, TransferKind::linear};
    MlpModel m{t};
    m.layers()[0].weights = {1.0, -1.0, 0.5, 0.5};
    m.layers()[0].bias = {0.0, -1.0};
    m.layers()[1].weights = {2.0, -3.0};
    m.layers()[1].bias = {0.25};
    auto out = m.forward(std::vector<double>{1.0, 2.0}).output();
    const double h0 = 1.0 / (1.0 + std::exp(1.0));  // sigmoid(1 - 2)
    const double h1 = 1.0 / (1.0 + std::exp(-0.5)); // sigmoid(0.5 + 1 - 1)
    REQUIRE(out.size() == 1);
    CHECK(out[0] == doctest::Approx(2.0 * h0 - 3.0 * h1 + 0.25).epsilon(1e-15));
    CHECK_THROWS_AS(m.forward(std::vector<double>{1.0}), Error);
}

TEST_CASE("mean squared error") {
    std::vector<std::vector<double>> t{{1, 0}, {0, 1}};
    std::vector<std::vector<double>> y{{0.8, 0.2}, {0.5, 0.5}};
    // ((0.04 + 0.04) + (0.25 + 0.25)) / 2
    CHECK(mse(t, y) == doctest::Approx(0.29).epsilon(1e-15));
    CHECK(mse(t, t) == 0.0);
    std::vector<std::vector<double>> short_y{{0.8, 0.2}};
    CHECK_THROWS_AS(mse(t, short_y), Error);
    CHECK(one_hot(2, 4) == std::vector<double>{0, 0, 1, 0});
}

TEST_CASE("analytic gradients match finite differences on random networks") {
    Rng rng{2024};
    for (std::uint64_t net = 0; net < 10; ++net) {
        auto m = random_network(rng, net + 1);
        auto batch = random_batch(rng, m.topology(), 1 + rng.below(5));
        const double worst = worst_gradient_gap(m, batch);
        CAPTURE(net);
        CHECK(worst < 1e-4);
        CHECK(gradient_check(m, batch) < 1e-4);
    }
}

TEST_CASE("non-differentiable transfers cannot be trained") {
    MlpTopology t = MlpTopology::standard(2, 2);
    t.transfers[0] = TransferKind::hard_limit;
    CHECK_THROWS_AS(train_mlp(t, xor_data(), {}), Error);
    try {
        train_mlp(t, xor_data(), {});
    } catch (const Error &e) {
        CHECK(e.code() == Errc::non_differentiable_transfer);
    }
}

TEST_CASE("learns XOR at a fixed seed") {
    MlpTopology t;
    t.inputs = 2;
    t.hidden = {4};
    t.outputs = 2;
    t.transfers = {TransferKind::sigmoid, TransferKind::sigmoid};
    TrainConfig cfg;
    cfg.epochs = 3000;
    cfg.seed = 3;
    auto data = xor_data();
    std::vector<double> errors;
    auto m = train_mlp(t, data, cfg, [&errors](std::size_t, double e) { errors.push_back(e); });
    CHECK(errors.size() == 3000);
    CHECK(m.meta().final_error < m.meta().initial_error);
    for (std::size_t i = 0; i < data.rows(); ++i) {
        auto p = m.predict_dist(data.row(i));
        CHECK(p[data.targets[i]] > 0.5);
    }
}

TEST_CASE("training is reproducible under a seed") {
    auto records = kddids::testing::synthetic_records(kddids::testing::small_mix(1), {.seed = 9});
    auto spec = fit_encoder(records, {.mode = EncoderMode::mlp});
    auto data = encode(records, spec);
    auto t = MlpTopology::standard(data.width, data.num_classes());
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.seed = 77;
    auto a = train_mlp(t, data, cfg);
    auto b = train_mlp(t, data, cfg);
    CHECK(a == b);
    cfg.seed = 78;
    CHECK_FALSE(train_mlp(t, data, cfg) == a);
    CHECK(a.meta().final_error < a.meta().initial_error);
    CHECK(dataset_error(a, data) < 0.5);

    for (std::size_t i = 0; i < 20; ++i) {
        auto p = a.predict_dist(data.row(i));
        double s = 0.0;
        for (double x : p) {
            CHECK(x >= 0.0);
            s += x;
        }
        CHECK(s == doctest::Approx(1.0));
    }
}

TEST_CASE("networks survive serialization") {
    Rng rng{4};
    auto m = random_network(rng, 12);
    m.set_meta({12, 3, 0.5, 0.25});
    ByteWriter w;
    m.serialize(w);
    ByteReader r{w.data()};
    auto back = MlpModel::deserialize(r);
    CHECK(r.done());
    CHECK(back == m);
    auto bytes = w.data();
    bytes.pop_back();
    ByteReader cut{bytes};
    CHECK_THROWS_AS(MlpModel::deserialize(cut), Error);
}

TEST_CASE("invalid configurations") {
    TrainConfig cfg;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.momentum = 1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = {};
    cfg.epochs = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    MlpTopology t = MlpTopology::standard(3, 2);
    t.transfers.pop_back();
    CHECK_THROWS_AS(t.validate(), Error);
    CHECK(MlpTopology::standard(120, 5).hidden == std::vector<std::size_t>{62});
}
