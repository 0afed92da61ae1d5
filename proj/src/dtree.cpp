#include "kddids/dtree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "kddids/error.hpp"

namespace kddids {

ClassDistribution::ClassDistribution(std::vector<std::uint64_t> counts)
    : counts_{std::move(counts)}, total_{std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0})} {}

std::uint32_t ClassDistribution::majority() const {
    return static_cast<std::uint32_t>(std::max_element(counts_.begin(), counts_.end()) - counts_.begin());
}

bool ClassDistribution::is_pure() const {
    return std::count_if(counts_.begin(), counts_.end(), [](auto c) { return c > 0; }) <= 1;
}

double entropy(const ClassDistribution &dist) {
    if (dist.total() == 0) {
        throw Error{Errc::empty_distribution, "entropy of an empty distribution"};
    }
    const double total = static_cast<double>(dist.total());
    double h = 0.0;
    for (auto c : dist.counts()) {
        if (c == 0) continue;  // 0 log 0 = 0
        double p = static_cast<double>(c) / total;
        h -= p * std::log2(p);
    }
    return h;
}

double information_gain(const ClassDistribution &parent, std::span<const ClassDistribution> children) {
    std::vector<std::uint64_t> sum(parent.size(), 0);
    for (const auto &child : children) {
        if (child.size() != parent.size()) {
            throw Error{Errc::partition_mismatch, "child distribution has a different class count"};
        }
        for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += child[k];
    }
    if (sum != parent.counts()) {
        throw Error{Errc::partition_mismatch, "children do not partition the parent"};
    }
    const double n = static_cast<double>(parent.total());
    double weighted = 0.0;
    for (const auto &child : children) {
        if (child.total() == 0) continue;
        weighted += static_cast<double>(child.total()) / n * entropy(child);
    }
    return entropy(parent) - weighted;
}

double split_information(std::span<const ClassDistribution> children) {
    std::uint64_t n = 0;
    for (const auto &c : children) n += c.total();
    if (n == 0) return 0.0;
    double h = 0.0;
    for (const auto &c : children) {
        if (c.total() == 0) continue;
        double p = static_cast<double>(c.total()) / static_cast<double>(n);
        h -= p * std::log2(p);
    }
    return h;
}

double gain_ratio(const ClassDistribution &parent, std::span<const ClassDistribution> children) {
    double gain = information_gain(parent, children);
    double si = split_information(children);
    return si > 0.0 ? gain / si : 0.0;
}

void GrowConfig::validate() const {
    if (min_leaf < 1) throw Error{Errc::invalid_config, "min_leaf must be at least 1"};
    if (!(confidence > 0.0 && confidence < 1.0)) {
        throw Error{Errc::invalid_config, "pruning confidence must lie in (0, 1)"};
    }
}

namespace {

std::optional<SplitCandidate> nominal_candidate(const EncodedDataset &data, std::span<const std::uint32_t> rows,
                                                std::size_t feature, const ClassDistribution &parent,
                                                const GrowConfig &config) {
    const std::size_t k = data.num_classes();
    std::vector<ClassDistribution> branches(data.columns[feature].cardinality, ClassDistribution{k});
    for (auto r : rows) {
        auto v = static_cast<std::size_t>(data.values[r * data.width + feature]);
        branches[v].add(data.targets[r]);
    }
    std::erase_if(branches, [](const auto &b) { return b.total() == 0; });
    auto big = std::count_if(branches.begin(), branches.end(),
                             [&config](const auto &b) { return b.total() >= config.min_leaf; });
    if (branches.size() < 2 || big < 2) return std::nullopt;
    SplitCandidate c;
    c.split = {SplitSpec::Kind::nominal, feature, 0.0};
    c.gain = information_gain(parent, branches);
    c.ratio = gain_ratio(parent, branches);
    return c;
}

std::optional<SplitCandidate> continuous_candidate(const EncodedDataset &data, std::span<const std::uint32_t> rows,
                                                   std::size_t feature, const ClassDistribution &parent,
                                                   const GrowConfig &config,
                                                   std::vector<std::pair<double, std::uint32_t>> &scratch) {
    scratch.clear();
    for (auto r : rows) scratch.emplace_back(data.values[r * data.width + feature], data.targets[r]);
    std::sort(scratch.begin(), scratch.end());
    if (scratch.front().first == scratch.back().first) return std::nullopt;

    std::array<ClassDistribution, 2> sides{ClassDistribution{parent.size()}, parent};
    std::optional<SplitCandidate> best;
    std::array<ClassDistribution, 2> best_sides;
    for (std::size_t i = 0; i + 1 < scratch.size(); ++i) {
        sides[0].add(scratch[i].second);
        sides[1].remove(scratch[i].second);
        if (!(scratch[i].first < scratch[i + 1].first)) continue;
        if (sides[0].total() < config.min_leaf || sides[1].total() < config.min_leaf) continue;
        double gain = information_gain(parent, sides);
        if (!best || gain > best->gain) {
            SplitCandidate c;
            c.split = {SplitSpec::Kind::continuous, feature, std::midpoint(scratch[i].first, scratch[i + 1].first)};
            c.gain = gain;
            best = c;
            best_sides = sides;
        }
    }
    if (best) best->ratio = gain_ratio(parent, best_sides);
    return best;
}

}  // namespace

std::optional<SplitCandidate> best_split(const EncodedDataset &data, std::span<const std::uint32_t> rows,
                                         std::span<const std::size_t> features, const GrowConfig &config) {
    if (rows.empty()) return std::nullopt;
    ClassDistribution parent{data.num_classes()};
    for (auto r : rows) parent.add(data.targets[r]);
    if (parent.is_pure()) return std::nullopt;

    std::vector<SplitCandidate> candidates;
    std::vector<std::pair<double, std::uint32_t>> scratch;
    scratch.reserve(rows.size());
    for (std::size_t f : features) {
        auto c = data.columns[f].nominal ? nominal_candidate(data, rows, f, parent, config)
                                         : continuous_candidate(data, rows, f, parent, config, scratch);
        if (c) candidates.push_back(*c);
    }
    if (candidates.empty()) return std::nullopt;

    const SplitCandidate *chosen = nullptr;
    if (config.criterion == SplitCriterion::info_gain) {
        for (const auto &c : candidates) {
            if (!chosen || c.gain > chosen->gain) chosen = &c;
        }
    } else {
        double mean_gain = 0.0;
        for (const auto &c : candidates) mean_gain += c.gain;
        mean_gain /= static_cast<double>(candidates.size());
        for (const auto &c : candidates) {
            if (c.gain <= kMinGain || c.gain < mean_gain - kMinGain) continue;
            if (!chosen || c.ratio > chosen->ratio) chosen = &c;
        }
    }
    if (!chosen || chosen->gain <= kMinGain) return std::nullopt;
    return *chosen;
}

namespace {

class Builder {
public:
    Builder(const EncodedDataset &data, const GrowConfig &config) : data_{data}, config_{config} {
        features_.resize(data.width);
        std::iota(features_.begin(), features_.end(), std::size_t{0});
    }

    std::uint32_t grow(std::vector<std::uint32_t> rows, std::size_t depth) {
        const auto index = static_cast<std::uint32_t>(nodes_.size());
        nodes_.emplace_back();
        ClassDistribution dist{data_.num_classes()};
        for (auto r : rows) dist.add(data_.targets[r]);
        nodes_[index].dist = dist;

        if (dist.is_pure() || rows.size() < 2 * config_.min_leaf ||
            (config_.max_depth && depth >= *config_.max_depth)) {
            return index;
        }
        auto candidate = best_split(data_, rows, features_, config_);
        if (!candidate) return index;

        const auto &split = candidate->split;
        std::vector<std::vector<std::uint32_t>> parts;
        std::vector<std::uint32_t> branch_values;
        if (split.kind == SplitSpec::Kind::continuous) {
            parts.resize(2);
            for (auto r : rows) {
                parts[data_.values[r * data_.width + split.feature] <= split.threshold ? 0 : 1].push_back(r);
            }
        } else {
            std::vector<std::vector<std::uint32_t>> by_value(data_.columns[split.feature].cardinality);
            for (auto r : rows) {
                by_value[static_cast<std::size_t>(data_.values[r * data_.width + split.feature])].push_back(r);
            }
            for (std::uint32_t v = 0; v < by_value.size(); ++v) {
                if (by_value[v].empty()) continue;
                branch_values.push_back(v);
                parts.push_back(std::move(by_value[v]));
            }
        }
        rows.clear();
        rows.shrink_to_fit();

        std::vector<std::uint32_t> children;
        std::uint32_t fallback = 0;
        std::size_t heaviest = 0;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (parts[i].size() > heaviest) {
                heaviest = parts[i].size();
                fallback = static_cast<std::uint32_t>(i);
            }
            children.push_back(grow(std::move(parts[i]), depth + 1));
        }
        auto &node = nodes_[index];
        node.split = split;
        node.children = std::move(children);
        node.branch_values = std::move(branch_values);
        node.fallback = fallback;
        return index;
    }

    std::vector<TreeNode> take() && { return std::move(nodes_); }

private:
    const EncodedDataset &data_;
    const GrowConfig &config_;
    std::vector<std::size_t> features_;
    std::vector<TreeNode> nodes_;
};

void build_routes(std::vector<TreeNode> &nodes, const std::vector<ColumnInfo> &columns) {
    for (auto &n : nodes) {
        n.route.clear();
        if (!n.split || n.split->kind != SplitSpec::Kind::nominal) continue;
        n.route.assign(columns.at(n.split->feature).cardinality, -1);
        for (std::size_t i = 0; i < n.branch_values.size(); ++i) {
            n.route.at(n.branch_values[i]) = static_cast<std::int32_t>(i);
        }
    }
}

}  // namespace

DecisionTreeModel::DecisionTreeModel(std::vector<TreeNode> nodes, std::vector<ColumnInfo> columns,
                                     std::vector<std::string> class_names, GrowConfig config)
    : nodes_{std::move(nodes)}, columns_{std::move(columns)}, class_names_{std::move(class_names)}, config_{config} {
    build_routes(nodes_, columns_);
}

const TreeNode &DecisionTreeModel::leaf_for(std::span<const double> row) const {
    if (row.size() != columns_.size()) {
        throw Error{Errc::schema_mismatch, "row width " + std::to_string(row.size()) + " does not match tree width " +
                                               std::to_string(columns_.size())};
    }
    const TreeNode *node = &nodes_.front();
    while (!node->is_leaf()) {
        const auto &split = *node->split;
        std::uint32_t slot;
        if (split.kind == SplitSpec::Kind::continuous) {
            slot = row[split.feature] <= split.threshold ? 0 : 1;
        } else {
            auto v = static_cast<std::size_t>(row[split.feature]);
            slot = v < node->route.size() && node->route[v] >= 0 ? static_cast<std::uint32_t>(node->route[v])
                                                                  : node->fallback;
        }
        node = &nodes_[node->children[slot]];
    }
    return *node;
}

std::vector<double> DecisionTreeModel::predict_dist(std::span<const double> row) const {
    const auto &dist = leaf_for(row).dist;
    const double k = static_cast<double>(dist.size());
    const double denom = static_cast<double>(dist.total()) + k;
    std::vector<double> p(dist.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = (static_cast<double>(dist[i]) + 1.0) / denom;
    return p;
}

std::uint32_t DecisionTreeModel::predict(std::span<const double> row) const { return leaf_for(row).dist.majority(); }

std::size_t DecisionTreeModel::leaf_count() const {
    return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const auto &n) { return n.is_leaf(); }));
}

std::size_t DecisionTreeModel::depth() const {
    std::vector<std::size_t> d(nodes_.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        deepest = std::max(deepest, d[i]);
        for (auto c : nodes_[i].children) d[c] = d[i] + 1;
    }
    return deepest;
}

std::string DecisionTreeModel::to_rule_text(
    const std::function<std::string(std::size_t, std::uint32_t)> &value_name) const {
    std::ostringstream out;
    out.precision(10);
    auto leaf_text = [this](const TreeNode &n) {
        std::ostringstream s;
        auto m = n.dist.majority();
        s << class_names_[m] << " (" << n.dist.total() << "/" << (n.dist.total() - n.dist[m]) << ")";
        return s.str();
    };
    std::function<void(std::uint32_t, int)> walk = [&](std::uint32_t index, int level) {
        const auto &node = nodes_[index];
        const auto &split = *node.split;
        const auto &name = columns_[split.feature].name;
        for (std::size_t i = 0; i < node.children.size(); ++i) {
            for (int l = 0; l < level; ++l) out << "|   ";
            if (split.kind == SplitSpec::Kind::continuous) {
                out << name << (i == 0 ? " <= " : " > ") << split.threshold;
            } else {
                auto v = node.branch_values[i];
                out << name << " = " << (value_name ? value_name(split.feature, v) : std::to_string(v));
            }
            const auto &child = nodes_[node.children[i]];
            if (child.is_leaf()) {
                out << ": " << leaf_text(child) << "\n";
            } else {
                out << "\n";
                walk(node.children[i], level + 1);
            }
        }
    };
    if (nodes_.front().is_leaf()) {
        out << ": " << leaf_text(nodes_.front()) << "\n";
    } else {
        walk(0, 0);
    }
    out << "\nNumber of leaves: " << leaf_count() << "\nSize of the tree: " << node_count() << "\n";
    return out.str();
}

void DecisionTreeModel::serialize(ByteWriter &w) const {
    w.u8(static_cast<std::uint8_t>(config_.criterion));
    w.u64(config_.min_leaf);
    w.u64(config_.max_depth.value_or(0));
    w.u8(config_.max_depth.has_value());
    w.u8(config_.prune);
    w.f64(config_.confidence);
    w.u64(class_names_.size());
    for (const auto &c : class_names_) w.str(c);
    w.u64(columns_.size());
    for (const auto &c : columns_) {
        w.str(c.name);
        w.u8(c.nominal);
        w.u32(c.cardinality);
    }
    w.u64(nodes_.size());
    for (const auto &n : nodes_) {
        for (auto c : n.dist.counts()) w.u64(c);
        w.u8(n.split.has_value());
        if (!n.split) continue;
        w.u8(static_cast<std::uint8_t>(n.split->kind));
        w.u64(n.split->feature);
        w.f64(n.split->threshold);
        w.u64(n.children.size());
        for (auto c : n.children) w.u32(c);
        w.u64(n.branch_values.size());
        for (auto v : n.branch_values) w.u32(v);
        w.u32(n.fallback);
    }
}

DecisionTreeModel DecisionTreeModel::deserialize(ByteReader &r) {
    GrowConfig config;
    auto criterion = r.u8();
    if (criterion > 1) throw Error{Errc::integrity_error, "invalid split criterion"};
    config.criterion = static_cast<SplitCriterion>(criterion);
    config.min_leaf = r.u64();
    auto max_depth = r.u64();
    if (r.u8()) config.max_depth = max_depth;
    config.prune = r.u8() != 0;
    config.confidence = r.f64();

    std::vector<std::string> classes(r.length(8));
    for (auto &c : classes) c = r.str();
    std::vector<ColumnInfo> columns(r.length(8));
    for (auto &c : columns) {
        c.name = r.str();
        c.nominal = r.u8() != 0;
        c.cardinality = r.u32();
    }
    std::vector<TreeNode> nodes(r.length(8 * classes.size() + 1));
    if (nodes.empty()) throw Error{Errc::integrity_error, "tree has no nodes"};
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        auto &n = nodes[i];
        std::vector<std::uint64_t> counts(classes.size());
        for (auto &c : counts) c = r.u64();
        n.dist = ClassDistribution{std::move(counts)};
        if (!r.u8()) continue;
        SplitSpec s;
        auto kind = r.u8();
        if (kind > 1) throw Error{Errc::integrity_error, "invalid split kind"};
        s.kind = static_cast<SplitSpec::Kind>(kind);
        s.feature = r.u64();
        s.threshold = r.f64();
        if (s.feature >= columns.size() || (s.kind == SplitSpec::Kind::nominal) != columns[s.feature].nominal) {
            throw Error{Errc::integrity_error, "split refers to an invalid column"};
        }
        n.split = s;
        n.children.resize(r.length(4));
        for (auto &c : n.children) {
            c = r.u32();
            if (c <= i || c >= nodes.size()) throw Error{Errc::integrity_error, "invalid child index"};
        }
        n.branch_values.resize(r.length(4));
        for (auto &v : n.branch_values) {
            v = r.u32();
            if (v >= columns[s.feature].cardinality) throw Error{Errc::integrity_error, "invalid branch value"};
        }
        n.fallback = r.u32();
        if (n.children.size() < 2 || n.fallback >= n.children.size()) {
            throw Error{Errc::integrity_error, "invalid internal node"};
        }
    }
    return DecisionTreeModel{std::move(nodes), std::move(columns), std::move(classes), config};
}

bool operator==(const DecisionTreeModel &a, const DecisionTreeModel &b) {
    if (a.nodes_.size() != b.nodes_.size() || a.columns_ != b.columns_ || a.class_names_ != b.class_names_) {
        return false;
    }
    for (std::size_t i = 0; i < a.nodes_.size(); ++i) {
        const auto &x = a.nodes_[i];
        const auto &y = b.nodes_[i];
        if (!(x.dist == y.dist && x.split == y.split && x.children == y.children &&
              x.branch_values == y.branch_values && x.fallback == y.fallback)) {
            return false;
        }
    }
    return true;
}

DecisionTreeModel build_tree(const EncodedDataset &train, const GrowConfig &config) {
    config.validate();
    train.validate();
    if (train.rows() == 0) {
        throw Error{Errc::empty_training_set, "cannot grow a tree from an empty training set"};
    }
    std::vector<std::uint32_t> rows(train.rows());
    std::iota(rows.begin(), rows.end(), std::uint32_t{0});
    Builder builder{train, config};
    builder.grow(std::move(rows), 0);
    DecisionTreeModel model{std::move(builder).take(), train.columns, train.class_names, config};
    return config.prune ? prune(model, config.confidence) : model;
}

double added_errors(double n, double e, double cf) {
    if (e < 1.0) {
        double base = n * (1.0 - std::pow(cf, 1.0 / n));
        if (e == 0.0) return base;
        return base + e * (added_errors(n, 1.0, cf) - base);
    }
    if (e + 0.5 >= n) return std::max(n - e, 0.0);
    static thread_local double cached_cf = -1.0;
    static thread_local double z = 0.0;
    if (cf != cached_cf) {
        z = boost::math::quantile(boost::math::normal{}, 1.0 - cf);
        cached_cf = cf;
    }
    double f = (e + 0.5) / n;
    double r = (f + z * z / (2.0 * n) + z * std::sqrt(f / n - f * f / n + z * z / (4.0 * n * n))) / (1.0 + z * z / n);
    return r * n - e;
}

namespace {

double leaf_estimate(const TreeNode &node, double cf) {
    double n = static_cast<double>(node.dist.total());
    double e = n - static_cast<double>(node.dist[node.dist.majority()]);
    return e + added_errors(n, e, cf);
}

double prune_at(std::vector<TreeNode> &nodes, std::uint32_t index, double cf) {
    auto &node = nodes[index];
    if (node.is_leaf()) return leaf_estimate(node, cf);
    double subtree = 0.0;
    for (auto c : std::vector<std::uint32_t>{node.children}) subtree += prune_at(nodes, c, cf);
    auto &same = nodes[index];
    double as_leaf = leaf_estimate(same, cf);
    if (as_leaf <= subtree) {
        same.split.reset();
        same.children.clear();
        same.branch_values.clear();
        same.route.clear();
        same.fallback = 0;
        return as_leaf;
    }
    return subtree;
}

void compact(const std::vector<TreeNode> &in, std::uint32_t index, std::vector<TreeNode> &out) {
    auto slot = out.size();
    out.push_back(in[index]);
    std::vector<std::uint32_t> remapped;
    for (auto c : in[index].children) {
        remapped.push_back(static_cast<std::uint32_t>(out.size()));
        compact(in, c, out);
    }
    out[slot].children = std::move(remapped);
}

}  // namespace

DecisionTreeModel prune(const DecisionTreeModel &model, double confidence) {
    auto nodes = model.nodes();
    prune_at(nodes, 0, confidence);
    std::vector<TreeNode> kept;
    kept.reserve(nodes.size());
    compact(nodes, 0, kept);
    auto config = model.config();
    config.confidence = confidence;
    return DecisionTreeModel{std::move(kept), model.columns(), model.class_names(), config};
}

}  // namespace kddids
