#include "kddids/bayes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "kddids/error.hpp"

namespace kddids {

namespace {

double safe_log(double p) { return p > 0.0 ? std::log(p) : -std::numeric_limits<double>::infinity(); }

}  // namespace

BayesModel fit_bayes(const EncodedDataset &train, const SmoothingConfig &config) {
    if (!(config.alpha >= 0.0)) throw Error{Errc::invalid_config, "smoothing alpha must be non-negative"};
    if (train.rows() == 0) throw Error{Errc::empty_training_set, "cannot fit on an empty training set"};
    train.validate();
    for (const auto &c : train.columns) {
        if (!c.nominal || c.cardinality == 0) {
            throw Error{Errc::spec_mismatch, "column '" + c.name + "' is not categorical"};
        }
    }

    const std::size_t k = train.num_classes();
    const double a = config.alpha;
    BayesModel m;
    m.alpha_ = a;
    m.class_names_ = train.class_names;
    m.columns_ = train.columns;

    std::vector<std::uint64_t> class_counts(k, 0);
    for (auto t : train.targets) ++class_counts[t];
    const double n = static_cast<double>(train.rows());
    for (std::size_t h = 0; h < k; ++h) {
        m.priors_.push_back((static_cast<double>(class_counts[h]) + a) / (n + a * static_cast<double>(k)));
    }

    for (std::size_t col = 0; col < train.width; ++col) {
        const std::uint32_t v_count = train.columns[col].cardinality;
        std::vector<std::uint64_t> counts(k * v_count, 0);
        for (std::size_t r = 0; r < train.rows(); ++r) {
            auto v = static_cast<std::uint32_t>(train.values[r * train.width + col]);
            ++counts[train.targets[r] * v_count + v];
        }
        std::vector<double> table(k * v_count);
        for (std::size_t h = 0; h < k; ++h) {
            const double denom = static_cast<double>(class_counts[h]) + a * v_count;
            for (std::uint32_t v = 0; v < v_count; ++v) {
                table[h * v_count + v] = denom > 0.0
                                             ? (static_cast<double>(counts[h * v_count + v]) + a) / denom
                                             : 1.0 / v_count;
            }
        }
        m.cardinality_.push_back(v_count);
        m.tables_.push_back(std::move(table));
    }

    for (double p : m.priors_) m.log_priors_.push_back(safe_log(p));
    for (const auto &t : m.tables_) {
        std::vector<double> lt;
        lt.reserve(t.size());
        for (double p : t) lt.push_back(safe_log(p));
        m.log_tables_.push_back(std::move(lt));
    }
    return m;
}

std::vector<double> BayesModel::posterior(std::span<const double> row) const {
    if (row.size() != width()) {
        throw Error{Errc::spec_mismatch, "row width " + std::to_string(row.size()) + " != model width " +
                                             std::to_string(width())};
    }
    const std::size_t k = num_classes();
    std::vector<double> score(log_priors_);
    for (std::size_t col = 0; col < width(); ++col) {
        auto v = static_cast<std::uint32_t>(row[col]);
        if (!(row[col] >= 0.0) || v >= cardinality_[col]) {
            throw Error{Errc::spec_mismatch, "value outside the categories of column '" + columns_[col].name + "'"};
        }
        for (std::size_t h = 0; h < k; ++h) score[h] += log_tables_[col][h * cardinality_[col] + v];
    }
    // P(D) is the normalizer: subtract log-sum-exp
    double top = *std::max_element(score.begin(), score.end());
    if (top == -std::numeric_limits<double>::infinity()) {
        return std::vector<double>(k, 1.0 / static_cast<double>(k));
    }
    double sum = 0.0;
    for (double s : score) sum += std::exp(s - top);
    const double log_evidence = top + std::log(sum);
    std::vector<double> p(k);
    for (std::size_t h = 0; h < k; ++h) p[h] = std::exp(score[h] - log_evidence);
    return p;
}

std::uint32_t BayesModel::predict(std::span<const double> row) const {
    auto p = posterior(row);
    return static_cast<std::uint32_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

std::string BayesModel::tables_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "class,column,value,probability\n";
    for (std::size_t h = 0; h < num_classes(); ++h) out << class_names_[h] << ",__prior__,," << priors_[h] << "\n";
    for (std::size_t col = 0; col < width(); ++col) {
        for (std::size_t h = 0; h < num_classes(); ++h) {
            for (std::uint32_t v = 0; v < cardinality_[col]; ++v) {
                out << class_names_[h] << "," << columns_[col].name << "," << v << "," << conditional(col, static_cast<std::uint32_t>(h), v)
                    << "\n";
            }
        }
    }
    return out.str();
}

void BayesModel::serialize(ByteWriter &w) const {
    w.f64(alpha_);
    w.u64(class_names_.size());
    for (const auto &c : class_names_) w.str(c);
    w.u64(columns_.size());
    for (const auto &c : columns_) {
        w.str(c.name);
        w.u32(c.cardinality);
    }
    w.f64s(priors_);
    for (const auto &t : tables_) w.f64s(t);
}

BayesModel BayesModel::deserialize(ByteReader &r) {
    BayesModel m;
    m.alpha_ = r.f64();
    m.class_names_.resize(r.length(8));
    for (auto &c : m.class_names_) c = r.str();
    m.columns_.resize(r.length(12));
    for (auto &c : m.columns_) {
        c.name = r.str();
        c.nominal = true;
        c.cardinality = r.u32();
        if (c.cardinality == 0) throw Error{Errc::integrity_error, "empty categorical column"};
        m.cardinality_.push_back(c.cardinality);
    }
    m.priors_ = r.f64s();
    if (m.priors_.size() != m.class_names_.size() || m.class_names_.empty()) {
        throw Error{Errc::integrity_error, "prior table does not match the class list"};
    }
    for (std::size_t col = 0; col < m.columns_.size(); ++col) {
        auto t = r.f64s();
        if (t.size() != m.class_names_.size() * m.cardinality_[col]) {
            throw Error{Errc::integrity_error, "conditional table shape mismatch"};
        }
        m.tables_.push_back(std::move(t));
    }
    for (double p : m.priors_) m.log_priors_.push_back(safe_log(p));
    for (const auto &t : m.tables_) {
        std::vector<double> lt;
        for (double p : t) lt.push_back(safe_log(p));
        m.log_tables_.push_back(std::move(lt));
    }
    return m;
}

}  // namespace kddids
