// bayes.hpp
//
// Bayes-rule classifier over categorical columns with class-conditional
// independence and additive smoothing.

#ifndef KDDIDS_BAYES_HPP
#define KDDIDS_BAYES_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kddids/bytes.hpp"
#include "kddids/encode.hpp"

namespace kddids {

struct SmoothingConfig {
    double alpha = 1.0;
};

class BayesModel {
public:
    BayesModel() = default;

    /// smoothed P(h), in class order
    const std::vector<double> &priors() const { return priors_; }

    /// smoothed P(value | class) for one column; rows are classes
    double conditional(std::size_t column, std::uint32_t cls, std::uint32_t value) const {
        return tables_[column][cls * cardinality_[column] + value];
    }
    std::uint32_t cardinality(std::size_t column) const { return cardinality_[column]; }

    std::size_t width() const { return tables_.size(); }
    std::size_t num_classes() const { return class_names_.size(); }
    double alpha() const { return alpha_; }
    const std::vector<std::string> &class_names() const { return class_names_; }
    const std::vector<ColumnInfo> &columns() const { return columns_; }

    /// P(h | row) by Bayes' rule, accumulated in log space and normalized
    /// with log-sum-exp; throws Error(spec_mismatch) on a foreign row
    std::vector<double> posterior(std::span<const double> row) const;
    std::vector<double> predict_dist(std::span<const double> row) const { return posterior(row); }

    /// argmax of the posterior, lowest class index on ties
    std::uint32_t predict(std::span<const double> row) const;

    /// class,column,value,probability rows with a header line
    std::string tables_csv() const;

    void serialize(ByteWriter &w) const;
    static BayesModel deserialize(ByteReader &r);

    friend bool operator==(const BayesModel &, const BayesModel &) = default;

private:
    friend BayesModel fit_bayes(const EncodedDataset &, const SmoothingConfig &);

    double alpha_ = 1.0;
    std::vector<std::string> class_names_;
    std::vector<ColumnInfo> columns_;
    std::vector<double> priors_;
    std::vector<std::uint32_t> cardinality_;
    std::vector<std::vector<double>> tables_;      // per column, classes x cardinality
    std::vector<std::vector<double>> log_tables_;  // same layout, natural log
    std::vector<double> log_priors_;
};

/// priors (n_h + a) / (N + aK); conditionals (n_vh + a) / (n_h + aV).
/// With a = 0 an empty class gets uniform conditionals.  Throws
/// Error(empty_training_set) or Error(spec_mismatch) for non-nominal columns.
BayesModel fit_bayes(const EncodedDataset &train, const SmoothingConfig &config);

}  // namespace kddids

#endif
