// eval.hpp
//
// Classifier evaluation: confusion matrix, accuracy, Kappa, probability
// error scores, weighted one-vs-rest rates and ROC area, plus report
// rendering.

#ifndef KDDIDS_EVAL_HPP
#define KDDIDS_EVAL_HPP

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace kddids {

class ConfusionMatrix {
public:
    ConfusionMatrix() = default;
    explicit ConfusionMatrix(std::vector<std::string> class_names);

    /// builds from a square row-major table (truth rows, predicted columns)
    static ConfusionMatrix from_counts(std::vector<std::string> class_names, std::vector<std::uint64_t> cells);

    void add(std::uint32_t truth, std::uint32_t predicted, std::uint64_t n = 1);
    void merge(const ConfusionMatrix &other);

    std::size_t size() const { return class_names_.size(); }
    std::uint64_t at(std::size_t truth, std::size_t predicted) const { return cells_[truth * size() + predicted]; }
    std::uint64_t row_total(std::size_t k) const;
    std::uint64_t col_total(std::size_t k) const;
    std::uint64_t total() const { return total_; }
    std::uint64_t trace() const;
    const std::vector<std::string> &class_names() const { return class_names_; }
    const std::vector<std::uint64_t> &cells() const { return cells_; }

    friend bool operator==(const ConfusionMatrix &, const ConfusionMatrix &) = default;

private:
    std::vector<std::string> class_names_;
    std::vector<std::uint64_t> cells_;
    std::uint64_t total_ = 0;
};

/// throws Error(length_mismatch) or Error(unknown_class)
ConfusionMatrix confusion(std::span<const std::uint32_t> predicted, std::span<const std::uint32_t> truth,
                          std::vector<std::string> class_order);
ConfusionMatrix confusion(std::span<const std::string> predicted, std::span<const std::string> truth,
                          std::vector<std::string> class_order);

struct Accuracy {
    double fraction = 0.0;
    std::uint64_t correct = 0;
    std::uint64_t incorrect = 0;
};

/// throws Error(empty_matrix)
Accuracy accuracy(const ConfusionMatrix &m);

/// Cohen's kappa, (p_o - p_e) / (1 - p_e); 0 when p_e = 1
double kappa(const ConfusionMatrix &m);

struct ErrorScores {
    double mae = 0.0;
    double rmse = 0.0;
};

/// mean absolute and root mean squared difference between each probability
/// vector and the indicator vector of the true class, averaged over every
/// (instance, class) pair
ErrorScores error_scores(std::span<const std::vector<double>> probabilities, std::span<const std::uint32_t> truth);

struct ClassRates {
    std::vector<double> tp_rate;
    std::vector<double> fp_rate;
    std::vector<double> precision;
    std::vector<double> roc_area;
    std::vector<std::uint64_t> support;

    double weighted_tp_rate = 0.0;
    double weighted_fp_rate = 0.0;
    double weighted_precision = 0.0;
    double weighted_roc_area = 0.0;
};

/// rates from the matrix; roc_area left zero (see roc_auc)
ClassRates class_rates(const ConfusionMatrix &m);

/// one-vs-rest area under the ROC curve for a single score list (ties count 1/2)
double binary_auc(std::span<const double> scores, std::span<const char> positive);

struct RocAreas {
    std::vector<double> per_class;  // 0 for classes absent from truth
    double weighted = 0.0;          // weights = class support
};

RocAreas roc_auc(std::span<const std::vector<double>> probabilities, std::span<const std::uint32_t> truth,
                 std::size_t classes);

/// index of the largest probability, lowest on ties
std::uint32_t argmax(std::span<const double> p);

struct EvaluationReport {
    std::string model_name;
    std::string classifier;
    std::string dataset_name;
    ConfusionMatrix matrix;
    Accuracy acc;
    double kappa = 0.0;
    ErrorScores errors;
    ClassRates rates;
    /// seeds, config hash, notes; printed verbatim, sorted by key
    std::map<std::string, std::string> provenance;
};

EvaluationReport make_report(std::string model_name, std::string classifier, std::string dataset_name,
                             std::span<const std::vector<double>> probabilities, std::span<const std::uint32_t> truth,
                             const std::vector<std::string> &class_names);

enum class ReportFormat { text, csv, key_value };

/// Renders the statistics, weighted-rates and accuracy tables.  Text output
/// for a single report also carries the per-class breakdown, the confusion
/// matrix and the provenance block.
std::string render_report(std::span<const EvaluationReport> reports, ReportFormat format);

/// "55865 / 4135 / 93.1083 %"
std::string accuracy_line(const Accuracy &acc);

/// parses render_report(..., csv) back to one map of column -> cell per row
std::vector<std::map<std::string, std::string>> parse_report_csv(const std::string &text);

}  // namespace kddids

#endif
