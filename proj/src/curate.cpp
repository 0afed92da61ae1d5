#include "kddids/curate.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"

#include "kddids/error.hpp"
#include "kddids/rng.hpp"

namespace kddids {

bool Deduplicator::insert(KddRecord record) {
    records_.push_back(std::move(record));
    if (!index_.insert(records_.size() - 1).second) {
        records_.pop_back();
        ++duplicates_;
        return false;
    }
    return true;
}

std::vector<KddRecord> Deduplicator::take() && {
    index_.clear();
    return std::move(records_);
}

std::vector<KddRecord> deduplicate(std::span<const KddRecord> records) {
    Deduplicator dedup;
    for (const auto &r : records) dedup.insert(r);
    return std::move(dedup).take();
}

CurationPlan CurationPlan::table2() {
    CurationPlan plan;
    plan.per_label_targets = {
        {"smurf", 85983},       {"neptune", 32827},  {"back", 70},        {"pod", 10},
        {"teardrop", 30},       {"buffer_overflow", 10}, {"loadmodule", 2}, {"perl", 1},
        {"rootkit", 5},         {"ftp_write", 2},    {"guess_passwd", 10}, {"imap", 4},
        {"multihop", 2},        {"phf", 1},          {"spy", 1},          {"warezclient", 31},
        {"warezmaster", 7},     {"ipsweep", 382},    {"nmap", 70},        {"portsweep", 318},
        {"satan", 487},         {"normal", 28500},
    };
    plan.holdout_size = 60000;
    plan.seed = 1;
    return plan;
}

std::uint64_t CurationPlan::target_total() const {
    std::uint64_t total = 0;
    for (const auto &[label, n] : per_label_targets) total += n;
    return total;
}

CurationPlan CurationPlan::from_json(const std::string &text) {
    CurationPlan plan;
    try {
        auto j = nlohmann::json::parse(text);
        for (const auto &[label, n] : j.at("targets").items()) {
            auto normalized = AttackLabel::parse(label);
            auto count = n.get<std::int64_t>();
            if (count < 0) {
                throw Error{Errc::invalid_config, "negative target for '" + label + "'"};
            }
            plan.per_label_targets[std::string{normalized.name()}] = static_cast<std::uint64_t>(count);
        }
        auto holdout = j.value("holdout_size", std::int64_t{0});
        if (holdout < 0) throw Error{Errc::invalid_config, "negative holdout_size"};
        plan.holdout_size = static_cast<std::uint64_t>(holdout);
        plan.seed = j.value("seed", std::uint64_t{0});
        auto policy = j.value("shortfall_policy", std::string{"take_all"});
        if (policy == "take_all") {
            plan.shortfall_policy = ShortfallPolicy::take_all;
        } else if (policy == "error") {
            plan.shortfall_policy = ShortfallPolicy::error;
        } else {
            throw Error{Errc::invalid_config, "shortfall_policy must be take_all or error"};
        }
    } catch (const nlohmann::json::exception &e) {
        throw Error{Errc::invalid_config, std::string{"malformed curation plan: "} + e.what()};
    }
    return plan;
}

CurationPlan CurationPlan::load(const std::string &path) {
    std::ifstream in{path};
    if (!in) throw Error{Errc::io_error, "cannot open plan '" + path + "'"};
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

std::string CurationPlan::to_json() const {
    nlohmann::json j;
    j["targets"] = per_label_targets;
    j["holdout_size"] = holdout_size;
    j["seed"] = seed;
    j["shortfall_policy"] = shortfall_policy == ShortfallPolicy::take_all ? "take_all" : "error";
    return j.dump(2);
}

CuratedDataset stratified_sample(std::span<const KddRecord> records, const CurationPlan &plan,
                                 std::uint64_t seed, const UnknownLabelPolicy &policy) {
    // group positions by label name; std::map fixes the label visiting order
    std::map<std::string, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < records.size(); ++i) {
        by_label[std::string{records[i].label.name()}].push_back(i);
    }

    CuratedDataset out;
    out.plan = plan;
    out.seed = seed;
    for (const auto &[label, target] : plan.per_label_targets) {
        auto it = by_label.find(label);
        std::uint64_t available = it == by_label.end() ? 0 : it->second.size();
        if (available < target) {
            if (plan.shortfall_policy == ShortfallPolicy::error) {
                throw Error{Errc::shortfall, "label '" + label + "': target " + std::to_string(target) +
                                                 " exceeds available " + std::to_string(available)};
            }
            out.shortfalls[label] = {target, available};
        }
    }

    std::vector<std::size_t> selected;
    for (auto &[label, positions] : by_label) {
        auto target_it = plan.per_label_targets.find(label);
        if (target_it == plan.per_label_targets.end()) {
            out.unplanned[label] = positions.size();
            continue;
        }
        std::size_t k = std::min<std::size_t>(target_it->second, positions.size());
        Rng rng{derive_seed(seed, "sample:" + label)};
        rng.partial_shuffle(std::span{positions}, k);
        selected.insert(selected.end(), positions.begin(), positions.begin() + static_cast<std::ptrdiff_t>(k));
    }
    Rng shuffle_rng{derive_seed(seed, "sample-order")};
    shuffle_rng.shuffle(std::span{selected});

    out.records.reserve(selected.size());
    for (std::size_t i : selected) {
        out.records.push_back(records[i]);
        out.summary.add(records[i].label, label_to_category(records[i].label, policy));
    }
    out.source_indices = std::move(selected);
    return out;
}

HoldoutSplit split_holdout_indices(std::size_t pool_size, std::size_t n, std::uint64_t seed) {
    if (n > pool_size) {
        throw Error{Errc::insufficient_pool, "holdout of " + std::to_string(n) + " requested from a pool of " +
                                                 std::to_string(pool_size)};
    }
    std::vector<std::size_t> order(pool_size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng{derive_seed(seed, "holdout")};
    rng.partial_shuffle(std::span{order}, n);

    HoldoutSplit split;
    split.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n));
    std::vector<char> in_test(pool_size, 0);
    for (std::size_t i : split.test) in_test[i] = 1;
    split.train.reserve(pool_size - n);
    for (std::size_t i = 0; i < pool_size; ++i) {
        if (!in_test[i]) split.train.push_back(i);
    }
    return split;
}

std::pair<std::vector<KddRecord>, std::vector<KddRecord>> split_holdout(std::span<const KddRecord> pool,
                                                                         std::size_t n, std::uint64_t seed) {
    auto split = split_holdout_indices(pool.size(), n, seed);
    std::pair<std::vector<KddRecord>, std::vector<KddRecord>> out;
    out.first.reserve(split.train.size());
    out.second.reserve(split.test.size());
    for (std::size_t i : split.train) out.first.push_back(pool[i]);
    for (std::size_t i : split.test) out.second.push_back(pool[i]);
    return out;
}

}  // namespace kddids
