// dtree.hpp
//
// C4.5-style univariate decision tree: entropy-driven splits, depth-first
// growth, pessimistic-error pruning and Laplace-smoothed leaves.

#ifndef KDDIDS_DTREE_HPP
#define KDDIDS_DTREE_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "kddids/bytes.hpp"
#include "kddids/encode.hpp"

namespace kddids {

class ClassDistribution {
public:
    ClassDistribution() = default;
    explicit ClassDistribution(std::size_t classes) : counts_(classes, 0) {}
    explicit ClassDistribution(std::vector<std::uint64_t> counts);

    void add(std::uint32_t cls, std::uint64_t n = 1) {
        counts_[cls] += n;
        total_ += n;
    }
    void remove(std::uint32_t cls, std::uint64_t n = 1) {
        counts_[cls] -= n;
        total_ -= n;
    }

    std::size_t size() const { return counts_.size(); }
    std::uint64_t operator[](std::size_t i) const { return counts_[i]; }
    std::uint64_t total() const { return total_; }
    const std::vector<std::uint64_t> &counts() const { return counts_; }

    /// lowest index among the most frequent classes
    std::uint32_t majority() const;
    bool is_pure() const;

    friend bool operator==(const ClassDistribution &, const ClassDistribution &) = default;

private:
    std::vector<std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

/// -sum p log2 p in bits; throws Error(empty_distribution) when total is 0
double entropy(const ClassDistribution &dist);

/// entropy(parent) - weighted child entropy; throws Error(partition_mismatch)
/// if the children do not partition the parent
double information_gain(const ClassDistribution &parent, std::span<const ClassDistribution> children);

/// entropy of the branch sizes themselves
double split_information(std::span<const ClassDistribution> children);

/// information gain / split information (0 when split information is 0)
double gain_ratio(const ClassDistribution &parent, std::span<const ClassDistribution> children);

enum class SplitCriterion : std::uint8_t { info_gain, gain_ratio };

struct GrowConfig {
    SplitCriterion criterion = SplitCriterion::gain_ratio;
    std::size_t min_leaf = 2;
    std::optional<std::size_t> max_depth;
    bool prune = true;
    double confidence = 0.25;

    /// throws Error(invalid_config)
    void validate() const;
};

struct SplitSpec {
    enum class Kind : std::uint8_t { nominal, continuous };
    Kind kind = Kind::continuous;
    std::size_t feature = 0;
    double threshold = 0.0;  // continuous: left branch takes value <= threshold

    friend bool operator==(const SplitSpec &, const SplitSpec &) = default;
};

struct SplitCandidate {
    SplitSpec split;
    double gain = 0.0;
    double ratio = 0.0;
};

/// Chooses the split for the given rows.  Each nominal feature offers one
/// multiway partition over the values present; each continuous feature
/// offers its highest-gain threshold among midpoints of consecutive distinct
/// values.  A partition qualifies when at least two branches hold min_leaf
/// rows (both sides, for thresholds).  InfoGain takes the highest gain;
/// GainRatio takes the highest ratio among qualifying candidates whose gain
/// is at least the mean qualifying gain.  Ties go to the lowest feature
/// index, then the lowest threshold.  nullopt when no candidate has positive
/// gain.
std::optional<SplitCandidate> best_split(const EncodedDataset &data, std::span<const std::uint32_t> rows,
                                         std::span<const std::size_t> features, const GrowConfig &config);

/// gains at or below this are treated as zero
inline constexpr double kMinGain = 1e-12;

struct TreeNode {
    ClassDistribution dist;
    std::optional<SplitSpec> split;  // empty for leaves
    std::vector<std::uint32_t> children;
    /// nominal splits: the value routed to each child
    std::vector<std::uint32_t> branch_values;
    /// child taking nominal values with no branch (the heaviest child)
    std::uint32_t fallback = 0;
    /// nominal splits: value -> child slot, -1 for fallback
    std::vector<std::int32_t> route;

    bool is_leaf() const { return !split.has_value(); }
};

class DecisionTreeModel {
public:
    DecisionTreeModel() = default;
    DecisionTreeModel(std::vector<TreeNode> nodes, std::vector<ColumnInfo> columns,
                      std::vector<std::string> class_names, GrowConfig config);

    /// Laplace-smoothed leaf distribution, (count + 1) / (total + K)
    std::vector<double> predict_dist(std::span<const double> row) const;
    std::uint32_t predict(std::span<const double> row) const;

    std::size_t node_count() const { return nodes_.size(); }
    std::size_t leaf_count() const;
    std::size_t depth() const;

    const std::vector<TreeNode> &nodes() const { return nodes_; }
    const std::vector<ColumnInfo> &columns() const { return columns_; }
    const std::vector<std::string> &class_names() const { return class_names_; }
    const GrowConfig &config() const { return config_; }

    /// Indented rule listing.  value_name renders nominal values; by default
    /// the numeric index is printed.
    std::string to_rule_text(
        const std::function<std::string(std::size_t column, std::uint32_t value)> &value_name = {}) const;

    void serialize(ByteWriter &w) const;
    static DecisionTreeModel deserialize(ByteReader &r);

    friend bool operator==(const DecisionTreeModel &a, const DecisionTreeModel &b);

private:
    const TreeNode &leaf_for(std::span<const double> row) const;

    std::vector<TreeNode> nodes_;  // nodes_[0] is the root; children follow parents
    std::vector<ColumnInfo> columns_;
    std::vector<std::string> class_names_;
    GrowConfig config_;
};

/// grows (and, if config.prune, prunes) a tree; throws Error(empty_training_set)
DecisionTreeModel build_tree(const EncodedDataset &train, const GrowConfig &config);

/// Pessimistic upper-bound error count added to e observed errors in n
/// cases, at confidence cf (C4.5's estimate).
double added_errors(double n, double e, double cf);

/// bottom-up subtree replacement; the result never has more nodes
DecisionTreeModel prune(const DecisionTreeModel &model, double confidence);

}  // namespace kddids

#endif
