// encode.hpp
//
// Turns KddRecords into numeric rows for each classifier family.  Every
// dictionary, range and cut point is fitted on training data only.

#ifndef KDDIDS_ENCODE_HPP
#define KDDIDS_ENCODE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "kddids/bytes.hpp"
#include "kddids/schema.hpp"

namespace kddids {

enum class EncoderMode : std::uint8_t { tree, mlp, bayes };
enum class Granularity : std::uint8_t { category, fine };

std::string_view mode_name(EncoderMode m);
std::string_view granularity_name(Granularity g);

struct Passthrough {
    friend bool operator==(const Passthrough &, const Passthrough &) = default;
};

/// Symbolic values seen in training.  Under Mlp encoding this expands to one
/// indicator column per value; Tree and Bayes encodings emit the value's
/// index with dictionary.size() reserved for values never seen in training.
struct OneHot {
    std::vector<std::string> dictionary;
    friend bool operator==(const OneHot &, const OneHot &) = default;
};

struct MinMax {
    double lo = 0.0;
    double hi = 0.0;
    friend bool operator==(const MinMax &, const MinMax &) = default;
};

/// strictly increasing cut points; bin i holds cuts[i-1] <= v < cuts[i]
struct Bins {
    std::vector<double> cuts;
    friend bool operator==(const Bins &, const Bins &) = default;
};

using FeatureRule = std::variant<Passthrough, OneHot, MinMax, Bins>;

/// equal-frequency cut points over a training column
std::vector<double> equal_frequency_cuts(std::vector<double> values, std::size_t bins);

/// bin index of v under cuts
std::uint32_t bin_of(std::span<const double> cuts, double v);

struct ColumnInfo {
    std::string name;
    bool nominal = false;
    std::uint32_t cardinality = 0;  // nominal columns only

    friend bool operator==(const ColumnInfo &, const ColumnInfo &) = default;
};

struct EncoderOptions {
    EncoderMode mode = EncoderMode::tree;
    Granularity granularity = Granularity::category;
    UnknownLabelPolicy unknown_label = UnknownLabelPolicy::error();
    std::size_t bayes_bins = 10;
};

class EncoderSpec {
public:
    EncoderSpec() = default;
    EncoderSpec(EncoderMode mode, Granularity granularity, UnknownLabelPolicy unknown_label,
                std::vector<FeatureRule> rules, std::vector<std::string> class_names,
                std::uint64_t schema_fingerprint, std::vector<std::string> feature_names);

    EncoderMode mode() const { return mode_; }
    Granularity granularity() const { return granularity_; }
    const UnknownLabelPolicy &unknown_label() const { return unknown_label_; }
    const std::vector<FeatureRule> &rules() const { return rules_; }
    const std::vector<std::string> &class_names() const { return class_names_; }
    std::uint64_t schema_fingerprint() const { return schema_fingerprint_; }

    /// encoded row width (sum of per-feature widths)
    std::size_t width() const { return columns_.size(); }
    const std::vector<ColumnInfo> &columns() const { return columns_; }

    /// target class of a record; nullopt when the unknown-label policy skips
    /// it.  Throws Error(unknown_class) for a fine-grained label outside the
    /// class order.
    std::optional<std::uint32_t> class_index(const KddRecord &record) const;

    /// writes width() values
    void encode_row(const KddRecord &record, std::span<double> out) const;

    void serialize(ByteWriter &w) const;
    static EncoderSpec deserialize(ByteReader &r);

    friend bool operator==(const EncoderSpec &a, const EncoderSpec &b);

private:
    void build_lookups();

    EncoderMode mode_ = EncoderMode::tree;
    Granularity granularity_ = Granularity::category;
    UnknownLabelPolicy unknown_label_;
    std::vector<FeatureRule> rules_;
    std::vector<std::string> class_names_;
    std::uint64_t schema_fingerprint_ = 0;
    std::vector<std::string> feature_names_;

    std::vector<ColumnInfo> columns_;
    std::vector<std::size_t> offsets_;  // first column of each feature
    std::vector<std::unordered_map<Symbol, std::uint32_t>> symbol_index_;
    std::unordered_map<Symbol, std::uint32_t> class_lookup_;
};

/// Row-major numeric matrix with class targets.  Tree and Bayes rows hold
/// nominal indices as exact small integers.
struct EncodedDataset {
    std::size_t width = 0;
    std::vector<double> values;
    std::vector<std::uint32_t> targets;
    std::vector<ColumnInfo> columns;
    std::vector<std::string> class_names;

    std::size_t rows() const { return targets.size(); }
    std::size_t num_classes() const { return class_names.size(); }
    std::span<const double> row(std::size_t i) const { return {values.data() + i * width, width}; }

    /// throws Error(shape_mismatch) if the invariants do not hold
    void validate() const;
};

/// fits rules on train; throws Error(empty_training_set)
EncoderSpec fit_encoder(std::span<const KddRecord> train, const EncoderOptions &options,
                        const FeatureSchema &schema = FeatureSchema::kdd99());

/// records skipped by the unknown-label policy are dropped
EncodedDataset encode(std::span<const KddRecord> records, const EncoderSpec &spec);

}  // namespace kddids

#endif
