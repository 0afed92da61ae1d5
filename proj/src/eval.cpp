#include "kddids/eval.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "kddids/error.hpp"

namespace kddids {

ConfusionMatrix::ConfusionMatrix(std::vector<std::string> class_names)
    : class_names_{std::move(class_names)}, cells_(class_names_.size() * class_names_.size(), 0) {}

ConfusionMatrix ConfusionMatrix::from_counts(std::vector<std::string> class_names, std::vector<std::uint64_t> cells) {
    ConfusionMatrix m{std::move(class_names)};
    if (cells.size() != m.cells_.size()) {
        throw Error{Errc::length_mismatch, "confusion table is not K x K"};
    }
    m.cells_ = std::move(cells);
    m.total_ = std::accumulate(m.cells_.begin(), m.cells_.end(), std::uint64_t{0});
    return m;
}

void ConfusionMatrix::add(std::uint32_t truth, std::uint32_t predicted, std::uint64_t n) {
    if (truth >= size() || predicted >= size()) {
        throw Error{Errc::unknown_class, "class index outside the class order"};
    }
    cells_[truth * size() + predicted] += n;
    total_ += n;
}

void ConfusionMatrix::merge(const ConfusionMatrix &other) {
    if (other.class_names_ != class_names_) {
        throw Error{Errc::length_mismatch, "cannot merge matrices with different class orders"};
    }
    for (std::size_t i = 0; i < cells_.size(); ++i) cells_[i] += other.cells_[i];
    total_ += other.total_;
}

std::uint64_t ConfusionMatrix::row_total(std::size_t k) const {
    std::uint64_t s = 0;
    for (std::size_t p = 0; p < size(); ++p) s += at(k, p);
    return s;
}

std::uint64_t ConfusionMatrix::col_total(std::size_t k) const {
    std::uint64_t s = 0;
    for (std::size_t t = 0; t < size(); ++t) s += at(t, k);
    return s;
}

std::uint64_t ConfusionMatrix::trace() const {
    std::uint64_t s = 0;
    for (std::size_t k = 0; k < size(); ++k) s += at(k, k);
    return s;
}

ConfusionMatrix confusion(std::span<const std::uint32_t> predicted, std::span<const std::uint32_t> truth,
                          std::vector<std::string> class_order) {
    if (predicted.size() != truth.size()) {
        throw Error{Errc::length_mismatch, "prediction and truth sequences differ in length"};
    }
    ConfusionMatrix m{std::move(class_order)};
    for (std::size_t i = 0; i < truth.size(); ++i) m.add(truth[i], predicted[i]);
    return m;
}

ConfusionMatrix confusion(std::span<const std::string> predicted, std::span<const std::string> truth,
                          std::vector<std::string> class_order) {
    if (predicted.size() != truth.size()) {
        throw Error{Errc::length_mismatch, "prediction and truth sequences differ in length"};
    }
    std::unordered_map<std::string, std::uint32_t> index;
    for (std::uint32_t i = 0; i < class_order.size(); ++i) index.emplace(class_order[i], i);
    auto lookup = [&index](const std::string &label) {
        auto it = index.find(label);
        if (it == index.end()) throw Error{Errc::unknown_class, "label '" + label + "' is not in the class order"};
        return it->second;
    };
    ConfusionMatrix m{std::move(class_order)};
    for (std::size_t i = 0; i < truth.size(); ++i) m.add(lookup(truth[i]), lookup(predicted[i]));
    return m;
}

Accuracy accuracy(const ConfusionMatrix &m) {
    if (m.total() == 0) throw Error{Errc::empty_matrix, "accuracy of an empty confusion matrix"};
    Accuracy a;
    a.correct = m.trace();
    a.incorrect = m.total() - a.correct;
    a.fraction = static_cast<double>(a.correct) / static_cast<double>(m.total());
    return a;
}

double kappa(const ConfusionMatrix &m) {
    if (m.total() == 0) throw Error{Errc::empty_matrix, "kappa of an empty confusion matrix"};
    const double n = static_cast<double>(m.total());
    const double po = static_cast<double>(m.trace()) / n;
    double pe = 0.0;
    for (std::size_t k = 0; k < m.size(); ++k) {
        pe += static_cast<double>(m.row_total(k)) * static_cast<double>(m.col_total(k));
    }
    pe /= n * n;
    if (pe >= 1.0) return 0.0;
    return (po - pe) / (1.0 - pe);
}

ErrorScores error_scores(std::span<const std::vector<double>> probabilities, std::span<const std::uint32_t> truth) {
    if (probabilities.size() != truth.size()) {
        throw Error{Errc::length_mismatch, "probability and truth sequences differ in length"};
    }
    ErrorScores s;
    if (truth.empty()) return s;
    double abs_sum = 0.0;
    double sq_sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const auto &p = probabilities[i];
        if (truth[i] >= p.size()) throw Error{Errc::unknown_class, "true class outside the probability vector"};
        for (std::size_t c = 0; c < p.size(); ++c) {
            double d = (c == truth[i] ? 1.0 : 0.0) - p[c];
            abs_sum += std::abs(d);
            sq_sum += d * d;
        }
        pairs += p.size();
    }
    s.mae = abs_sum / static_cast<double>(pairs);
    s.rmse = std::sqrt(sq_sum / static_cast<double>(pairs));
    return s;
}

ClassRates class_rates(const ConfusionMatrix &m) {
    if (m.total() == 0) throw Error{Errc::empty_matrix, "rates of an empty confusion matrix"};
    const std::size_t k = m.size();
    const double n = static_cast<double>(m.total());
    ClassRates r;
    r.tp_rate.resize(k);
    r.fp_rate.resize(k);
    r.precision.resize(k);
    r.roc_area.assign(k, 0.0);
    r.support.resize(k);
    for (std::size_t c = 0; c < k; ++c) {
        const double tp = static_cast<double>(m.at(c, c));
        const double row = static_cast<double>(m.row_total(c));
        const double col = static_cast<double>(m.col_total(c));
        r.support[c] = m.row_total(c);
        r.tp_rate[c] = row > 0 ? tp / row : 0.0;
        r.fp_rate[c] = n - row > 0 ? (col - tp) / (n - row) : 0.0;
        r.precision[c] = col > 0 ? tp / col : 0.0;
        r.weighted_tp_rate += row * r.tp_rate[c];
        r.weighted_fp_rate += row * r.fp_rate[c];
        r.weighted_precision += row * r.precision[c];
    }
    r.weighted_tp_rate /= n;
    r.weighted_fp_rate /= n;
    r.weighted_precision /= n;
    return r;
}

double binary_auc(std::span<const double> scores, std::span<const char> positive) {
    if (scores.size() != positive.size()) {
        throw Error{Errc::length_mismatch, "score and label sequences differ in length"};
    }
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&scores](auto a, auto b) { return scores[a] < scores[b]; });
    double rank_sum = 0.0;
    double pos = 0.0;
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && scores[order[j]] == scores[order[i]]) ++j;
        const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;  // ranks i+1..j
        for (std::size_t t = i; t < j; ++t) {
            if (positive[order[t]]) {
                rank_sum += mid_rank;
                pos += 1.0;
            }
        }
        i = j;
    }
    const double neg = static_cast<double>(n) - pos;
    if (pos == 0.0) return 0.0;
    if (neg == 0.0) return 0.5;
    return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

RocAreas roc_auc(std::span<const std::vector<double>> probabilities, std::span<const std::uint32_t> truth,
                 std::size_t classes) {
    if (probabilities.size() != truth.size()) {
        throw Error{Errc::length_mismatch, "probability and truth sequences differ in length"};
    }
    RocAreas out;
    out.per_class.assign(classes, 0.0);
    std::vector<double> scores(truth.size());
    std::vector<char> positive(truth.size());
    double weight_total = 0.0;
    for (std::size_t c = 0; c < classes; ++c) {
        std::size_t support = 0;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (probabilities[i].size() != classes) {
                throw Error{Errc::length_mismatch, "probability vector has the wrong width"};
            }
            scores[i] = probabilities[i][c];
            positive[i] = truth[i] == c;
            support += positive[i] ? 1 : 0;
        }
        if (support == 0) continue;
        out.per_class[c] = binary_auc(scores, positive);
        out.weighted += static_cast<double>(support) * out.per_class[c];
        weight_total += static_cast<double>(support);
    }
    if (weight_total > 0.0) out.weighted /= weight_total;
    return out;
}

std::uint32_t argmax(std::span<const double> p) {
    return static_cast<std::uint32_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

EvaluationReport make_report(std::string model_name, std::string classifier, std::string dataset_name,
                             std::span<const std::vector<double>> probabilities, std::span<const std::uint32_t> truth,
                             const std::vector<std::string> &class_names) {
    if (probabilities.size() != truth.size()) {
        throw Error{Errc::length_mismatch, "probability and truth sequences differ in length"};
    }
    std::vector<std::uint32_t> predicted;
    predicted.reserve(truth.size());
    for (const auto &p : probabilities) predicted.push_back(argmax(p));

    EvaluationReport r;
    r.model_name = std::move(model_name);
    r.classifier = std::move(classifier);
    r.dataset_name = std::move(dataset_name);
    r.matrix = confusion(predicted, truth, class_names);
    r.acc = accuracy(r.matrix);
    r.kappa = kappa(r.matrix);
    r.errors = error_scores(probabilities, truth);
    r.rates = class_rates(r.matrix);
    auto roc = roc_auc(probabilities, truth, class_names.size());
    r.rates.roc_area = roc.per_class;
    r.rates.weighted_roc_area = roc.weighted;
    return r;
}

namespace {

std::string fixed4(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(4) << v;
    return s.str();
}

std::string display_name(const std::string &name) {
    if (name.empty()) return "unnamed";
    std::string out = name;
    std::replace(out.begin(), out.end(), ',', '_');
    return out;
}

std::string table(const std::vector<std::vector<std::string>> &rows) {
    std::vector<std::size_t> width;
    for (const auto &row : rows) {
        width.resize(std::max(width.size(), row.size()), 0);
        for (std::size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
    }
    std::ostringstream out;
    for (const auto &row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            line += row[c];
            if (c + 1 < row.size()) line += std::string(width[c] - row[c].size() + 2, ' ');
        }
        out << line << "\n";
    }
    return out.str();
}

constexpr const char *kCsvColumns[] = {"model",   "classifier", "dataset",  "seed",      "config_hash",
                                       "kappa",   "mae",        "rmse",     "tp_rate",   "fp_rate",
                                       "precision", "roc_area", "correct",  "incorrect", "accuracy_pct"};

std::string provenance_cell(const EvaluationReport &r, const std::string &key) {
    auto it = r.provenance.find(key);
    return it == r.provenance.end() ? std::string{} : display_name(it->second);
}

std::vector<std::string> csv_cells(const EvaluationReport &r) {
    return {display_name(r.model_name),
            display_name(r.classifier),
            display_name(r.dataset_name),
            provenance_cell(r, "train.seed"),
            provenance_cell(r, "train.config_hash"),
            fixed4(r.kappa),
            fixed4(r.errors.mae),
            fixed4(r.errors.rmse),
            fixed4(r.rates.weighted_tp_rate),
            fixed4(r.rates.weighted_fp_rate),
            fixed4(r.rates.weighted_precision),
            fixed4(r.rates.weighted_roc_area),
            std::to_string(r.acc.correct),
            std::to_string(r.acc.incorrect),
            fixed4(100.0 * r.acc.fraction)};
}

std::string render_text(std::span<const EvaluationReport> reports) {
    std::ostringstream out;
    std::vector<std::vector<std::string>> stats{{"Classifier", "Kappa statistic", "Mean absolute error",
                                                 "Root mean squared error"}};
    std::vector<std::vector<std::string>> rates{{"Classifier", "TP Rate", "FP Rate", "Precision", "ROC Area"}};
    std::vector<std::vector<std::string>> acc{{"Classifier", "Correctly classified Instances",
                                               "Incorrectly classified Instances", "Accuracy"}};
    for (const auto &r : reports) {
        auto name = display_name(r.model_name);
        stats.push_back({name, fixed4(r.kappa), fixed4(r.errors.mae), fixed4(r.errors.rmse)});
        rates.push_back({name, fixed4(r.rates.weighted_tp_rate), fixed4(r.rates.weighted_fp_rate),
                         fixed4(r.rates.weighted_precision), fixed4(r.rates.weighted_roc_area)});
        acc.push_back({name, std::to_string(r.acc.correct), std::to_string(r.acc.incorrect),
                       fixed4(100.0 * r.acc.fraction) + " %"});
    }
    out << "STATISTICAL VALUES\n\n" << table(stats) << "\n";
    out << "WEIGHTED AVERAGE RATES\n\n" << table(rates) << "\n";
    out << "ACCURACY RATE\n\n" << table(acc);

    if (reports.size() == 1) {
        const auto &r = reports.front();
        out << "\n" << display_name(r.model_name) << ": " << accuracy_line(r.acc) << "\n";
        out << "\nPER-CLASS RATES\n\n";
        std::vector<std::vector<std::string>> per{{"Class", "Support", "TP Rate", "FP Rate", "Precision", "ROC Area"}};
        const auto &names = r.matrix.class_names();
        for (std::size_t c = 0; c < names.size(); ++c) {
            per.push_back({names[c], std::to_string(r.rates.support[c]), fixed4(r.rates.tp_rate[c]),
                           fixed4(r.rates.fp_rate[c]), fixed4(r.rates.precision[c]), fixed4(r.rates.roc_area[c])});
        }
        out << table(per);
        out << "\nCONFUSION MATRIX (rows: actual, columns: predicted)\n\n";
        std::vector<std::vector<std::string>> cm{{""}};
        for (const auto &n : names) cm.front().push_back(n);
        for (std::size_t t = 0; t < names.size(); ++t) {
            std::vector<std::string> row{names[t]};
            for (std::size_t p = 0; p < names.size(); ++p) row.push_back(std::to_string(r.matrix.at(t, p)));
            cm.push_back(std::move(row));
        }
        out << table(cm);
        out << "\nclassifier: " << display_name(r.classifier) << "\ndataset: " << display_name(r.dataset_name)
            << "\n";
        for (const auto &[k, v] : r.provenance) out << k << ": " << v << "\n";
    }
    out << "\nConventions: Kappa = (p_o - p_e) / (1 - p_e) over the confusion matrix; MAE and RMSE average\n"
           "|indicator - p| and (indicator - p)^2 over every (instance, class) pair; rates are one-vs-rest\n"
           "with FP rate = FP / (N - support); weighted averages use class support; ROC area is the\n"
           "rank-sum statistic with ties counted 1/2; classes absent from the test set get weight 0.\n";
    return out.str();
}

}  // namespace

std::string accuracy_line(const Accuracy &acc) {
    return std::to_string(acc.correct) + " / " + std::to_string(acc.incorrect) + " / " +
           fixed4(100.0 * acc.fraction) + " %";
}

std::string render_report(std::span<const EvaluationReport> reports, ReportFormat format) {
    switch (format) {
    case ReportFormat::text: return render_text(reports);
    case ReportFormat::csv: {
        std::ostringstream out;
        bool first = true;
        for (const char *c : kCsvColumns) {
            out << (first ? "" : ",") << c;
            first = false;
        }
        out << "\n";
        for (const auto &r : reports) {
            auto cells = csv_cells(r);
            for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
            out << "\n";
        }
        return out.str();
    }
    case ReportFormat::key_value: {
        std::ostringstream out;
        for (const auto &r : reports) {
            auto prefix = reports.size() == 1 ? std::string{} : display_name(r.model_name) + ".";
            auto cells = csv_cells(r);
            for (std::size_t i = 0; i < cells.size(); ++i) out << prefix << kCsvColumns[i] << "=" << cells[i] << "\n";
            const auto &names = r.matrix.class_names();
            for (std::size_t c = 0; c < names.size(); ++c) {
                auto p = prefix + "class." + names[c] + ".";
                out << p << "support=" << r.rates.support[c] << "\n"
                    << p << "tp_rate=" << fixed4(r.rates.tp_rate[c]) << "\n"
                    << p << "fp_rate=" << fixed4(r.rates.fp_rate[c]) << "\n"
                    << p << "precision=" << fixed4(r.rates.precision[c]) << "\n"
                    << p << "roc_area=" << fixed4(r.rates.roc_area[c]) << "\n";
            }
            for (const auto &[k, v] : r.provenance) out << prefix << "provenance." << k << "=" << v << "\n";
        }
        return out.str();
    }
    }
    return {};
}

std::vector<std::map<std::string, std::string>> parse_report_csv(const std::string &text) {
    std::vector<std::map<std::string, std::string>> rows;
    std::istringstream in{text};
    std::string line;
    std::vector<std::string> header;
    auto split = [](const std::string &s) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ss{s};
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        return cells;
    };
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto cells = split(line);
        if (header.empty()) {
            header = cells;
            continue;
        }
        if (cells.size() != header.size()) throw Error{Errc::length_mismatch, "ragged report CSV row"};
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < cells.size(); ++i) row[header[i]] = cells[i];
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace kddids
