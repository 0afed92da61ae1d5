#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "kddids/dtree.hpp"
#include "kddids/error.hpp"
#include "kddids/rng.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace kddids;
using namespace kddids::testing;

namespace {

EncodedDataset from_records(const std::vector<KddRecord> &records, const EncoderSpec &spec) {
    return encode(records, spec);
}

double accuracy_on(const DecisionTreeModel &m, const EncodedDataset &d) {
    std::size_t ok = 0;
    for (std::size_t i = 0; i < d.rows(); ++i) ok += m.predict(d.row(i)) == d.targets[i];
    return static_cast<double>(ok) / static_cast<double>(d.rows());
}

}  // namespace

TEST_CASE("entropy and information gain match hand values") {
    CHECK(entropy(ClassDistribution{std::vector<std::uint64_t>{3, 1}}) == doctest::Approx(0.811278124459133).epsilon(1e-12));
    CHECK(entropy(ClassDistribution{std::vector<std::uint64_t>{9, 5}}) == doctest::Approx(0.940285958670631).epsilon(1e-12));
    CHECK(entropy(ClassDistribution{std::vector<std::uint64_t>{7, 0}}) == 0.0);
    CHECK(entropy(ClassDistribution{std::vector<std::uint64_t>{1, 1, 1, 1}}) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK_THROWS_AS(entropy(ClassDistribution{2}), Error);

    ClassDistribution parent{std::vector<std::uint64_t>{9, 5}};
    std::vector<ClassDistribution> windy{ClassDistribution{std::vector<std::uint64_t>{6, 2}},
                                         ClassDistribution{std::vector<std::uint64_t>{3, 3}}};
    CHECK(information_gain(parent, windy) == doctest::Approx(0.048127030408269).epsilon(1e-12));
    CHECK(split_information(windy) == doctest::Approx(0.985228136034251).epsilon(1e-12));
    CHECK(gain_ratio(parent, windy) == doctest::Approx(0.048127030408269 / 0.985228136034251).epsilon(1e-12));

    std::vector<ClassDistribution> wrong{ClassDistribution{std::vector<std::uint64_t>{6, 2}}};
    CHECK_THROWS_AS(information_gain(parent, wrong), Error);
    std::vector<ClassDistribution> width{ClassDistribution{std::vector<std::uint64_t>{9, 5, 0}}};
    CHECK_THROWS_AS(information_gain(parent, width), Error);
}

TEST_CASE("gain never exceeds parent entropy and is non-negative") {
    Rng rng{5};
    for (int t = 0; t < 200; ++t) {
        const std::size_t k = 2 + rng.below(4);
        std::vector<ClassDistribution> kids(2 + rng.below(3), ClassDistribution{k});
        ClassDistribution parent{k};
        for (int i = 0; i < 30; ++i) {
            auto c = static_cast<std::uint32_t>(rng.below(k));
            kids[rng.below(kids.size())].add(c);
            parent.add(c);
        }
        double g = information_gain(parent, kids);
        CHECK(g >= -1e-12);
        CHECK(g <= entropy(parent) + 1e-12);
    }
}

TEST_CASE("best_split equals exhaustive search") {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        auto d = random_split_dataset(seed);
        auto rows = all_rows(d);
        std::vector<std::size_t> features(d.width);
        std::iota(features.begin(), features.end(), std::size_t{0});
        for (auto criterion : {SplitCriterion::gain_ratio, SplitCriterion::info_gain}) {
            GrowConfig cfg;
            cfg.criterion = criterion;
            cfg.min_leaf = 1 + seed % 3;
            auto got = best_split(d, rows, features, cfg);
            auto want = brute_force_split(d, rows, cfg);
            CAPTURE(seed);
            REQUIRE(got.has_value() == want.has_value());
            if (!got) continue;
            CHECK(got->split == want->split);
            CHECK(got->gain == doctest::Approx(want->gain).epsilon(1e-12));
            CHECK(got->ratio == doctest::Approx(want->ratio).epsilon(1e-12));
        }
    }
}

TEST_CASE("pure or unsplittable nodes become leaves") {
    EncodedDataset d;
    d.width = 1;
    d.columns = {{"x", false, 0}};
    d.class_names = {"a", "b"};
    d.values = {1, 2, 3, 4};
    d.targets = {0, 0, 0, 0};
    auto pure = build_tree(d, {});
    CHECK(pure.node_count() == 1);
    CHECK(pure.predict(std::vector<double>{9}) == 0);

    d.values = {1, 1, 1, 1};
    d.targets = {0, 1, 0, 1};
    CHECK(build_tree(d, {}).node_count() == 1);

    d.values = {};
    d.targets = {};
    CHECK_THROWS_AS(build_tree(d, {}), Error);
}

TEST_CASE("separable data is learned exactly") {
    EncodedDataset d;
    d.width = 2;
    d.columns = {{"x", false, 0}, {"colour", true, 4}};
    d.class_names = {"a", "b", "c"};
    for (int i = 0; i < 60; ++i) {
        const double x = i % 20;
        const double colour = i % 3;
        d.values.push_back(x);
        d.values.push_back(colour);
        d.targets.push_back(x < 10 ? 0 : (colour == 2 ? 2 : 1));
    }
    GrowConfig cfg;
    cfg.prune = false;
    auto tree = build_tree(d, cfg);
    CHECK(accuracy_on(tree, d) == 1.0);
    CHECK(tree.leaf_count() >= 3);
    CHECK(tree.depth() >= 2);

    // Laplace leaves: 30 "a" rows and 3 classes
    auto dist = tree.predict_dist(std::vector<double>{0, 0});
    CHECK(dist[0] == doctest::Approx(31.0 / 33.0));
    CHECK(dist[1] == doctest::Approx(1.0 / 33.0));

    // colour 3 never occurs in training; the heaviest branch takes it
    auto unseen = tree.predict_dist(std::vector<double>{15, 3});
    CHECK(std::accumulate(unseen.begin(), unseen.end(), 0.0) == doctest::Approx(1.0));

    auto text = tree.to_rule_text([](std::size_t, std::uint32_t v) { return "v" + std::to_string(v); });
    CHECK(text.find("x <= 9.5") != std::string::npos);
    CHECK(text.find("colour = v2") != std::string::npos);
}

TEST_CASE("max_depth bounds the tree") {
    auto records = kddids::testing::synthetic_records(kddids::testing::small_mix(2), {.seed = 21});
    auto spec = fit_encoder(records, {});
    auto d = from_records(records, spec);
    GrowConfig cfg;
    cfg.max_depth = 2;
    cfg.prune = false;
    CHECK(build_tree(d, cfg).depth() <= 2);
}

TEST_CASE("pessimistic error estimate") {
    // no observed errors: n (1 - cf^(1/n))
    CHECK(added_errors(6, 0, 0.25) == doctest::Approx(6 * (1 - std::pow(0.25, 1.0 / 6))).epsilon(1e-12));
    // the upper bound grows with the observed error and shrinks with confidence
    CHECK(added_errors(16, 1, 0.25) > added_errors(16, 0, 0.25));
    CHECK(added_errors(16, 1, 0.10) > added_errors(16, 1, 0.25));
    // close to the exact binomial bound U(1, 16) = 0.157 at cf 0.25
    CHECK(1 + added_errors(16, 1, 0.25) == doctest::Approx(16 * 0.157).epsilon(0.05));
    CHECK(added_errors(10, 10, 0.25) == 0.0);
}

TEST_CASE("pruning shrinks noisy trees without losing holdout accuracy") {
    auto records = kddids::testing::synthetic_records(kddids::testing::small_mix(6), {.seed = 30, .confusion = 0.0});
    Rng flip{99};
    auto spec = fit_encoder(records, {});
    auto d = from_records(records, spec);
    const std::size_t cut = d.rows() * 2 / 3;
    EncodedDataset train = d, test = d;
    train.targets.resize(cut);
    train.values.resize(cut * d.width);
    test.targets.erase(test.targets.begin(), test.targets.begin() + static_cast<std::ptrdiff_t>(cut));
    test.values.erase(test.values.begin(), test.values.begin() + static_cast<std::ptrdiff_t>(cut * d.width));
    for (auto &t : train.targets) {
        if (flip.uniform() < 0.10) t = static_cast<std::uint32_t>(flip.below(train.num_classes()));
    }
    GrowConfig raw;
    raw.prune = false;
    auto unpruned = build_tree(train, raw);
    auto pruned = prune(unpruned, 0.25);
    CHECK(pruned.node_count() < unpruned.node_count());
    CHECK(accuracy_on(pruned, test) >= accuracy_on(unpruned, test) - 0.01);
    CHECK(build_tree(train, GrowConfig{}) == pruned);
}

TEST_CASE("trees survive serialization") {
    auto records = kddids::testing::synthetic_records(kddids::testing::small_mix(2), {.seed = 8});
    auto spec = fit_encoder(records, {});
    auto d = from_records(records, spec);
    auto tree = build_tree(d, {});
    ByteWriter w;
    tree.serialize(w);
    ByteReader r{w.data()};
    auto back = DecisionTreeModel::deserialize(r);
    CHECK(r.done());
    CHECK(back == tree);
    for (std::size_t i = 0; i < d.rows(); ++i) REQUIRE(back.predict_dist(d.row(i)) == tree.predict_dist(d.row(i)));

    auto bytes = w.data();
    bytes.resize(bytes.size() / 2);
    ByteReader cut{bytes};
    CHECK_THROWS_AS(DecisionTreeModel::deserialize(cut), Error);
}

TEST_CASE("growth is deterministic and order-stable for identical input") {
    auto records = kddids::testing::synthetic_records(kddids::testing::small_mix(2), {.seed = 14});
    auto spec = fit_encoder(records, {});
    auto d = from_records(records, spec);
    CHECK(build_tree(d, {}) == build_tree(d, {}));
}

TEST_CASE("invalid grow configs are rejected") {
    GrowConfig cfg;
    cfg.min_leaf = 0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg.min_leaf = 2;
    cfg.confidence = 1.5;
    CHECK_THROWS_AS(cfg.validate(), Error);
}
