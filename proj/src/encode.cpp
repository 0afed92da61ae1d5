#include "kddids/encode.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "kddids/error.hpp"

namespace kddids {

std::string_view mode_name(EncoderMode m) {
    switch (m) {
    case EncoderMode::tree: return "tree";
    case EncoderMode::mlp: return "mlp";
    case EncoderMode::bayes: return "bayes";
    }
    return "?";
}

std::string_view granularity_name(Granularity g) { return g == Granularity::category ? "category" : "fine"; }

std::vector<double> equal_frequency_cuts(std::vector<double> values, std::size_t bins) {
    std::vector<double> cuts;
    if (values.empty() || bins < 2) return cuts;
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    for (std::size_t k = 1; k < bins; ++k) {
        std::size_t i = k * n / bins;
        if (i == 0 || i >= n || !(values[i - 1] < values[i])) continue;
        double cut = std::midpoint(values[i - 1], values[i]);
        if (cuts.empty() || cuts.back() < cut) cuts.push_back(cut);
    }
    return cuts;
}

std::uint32_t bin_of(std::span<const double> cuts, double v) {
    return static_cast<std::uint32_t>(std::upper_bound(cuts.begin(), cuts.end(), v) - cuts.begin());
}

EncoderSpec::EncoderSpec(EncoderMode mode, Granularity granularity, UnknownLabelPolicy unknown_label,
                         std::vector<FeatureRule> rules, std::vector<std::string> class_names,
                         std::uint64_t schema_fingerprint, std::vector<std::string> feature_names)
    : mode_{mode},
      granularity_{granularity},
      unknown_label_{unknown_label},
      rules_{std::move(rules)},
      class_names_{std::move(class_names)},
      schema_fingerprint_{schema_fingerprint},
      feature_names_{std::move(feature_names)} {
    if (rules_.size() != kFeatureCount || feature_names_.size() != kFeatureCount) {
        throw Error{Errc::spec_mismatch, "encoder needs one rule per feature"};
    }
    if (class_names_.empty()) {
        throw Error{Errc::spec_mismatch, "encoder has an empty class order"};
    }
    if (granularity_ == Granularity::category) {
        bool canonical = class_names_.size() == kCategoryCount;
        for (std::size_t i = 0; canonical && i < kCategoryCount; ++i) {
            canonical = class_names_[i] == category_name(kAllCategories[i]);
        }
        if (!canonical) throw Error{Errc::spec_mismatch, "category class order must be the five families"};
    }
    build_lookups();
}

void EncoderSpec::build_lookups() {
    columns_.clear();
    offsets_.assign(kFeatureCount, 0);
    symbol_index_.assign(kFeatureCount, {});
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        offsets_[f] = columns_.size();
        const auto &name = feature_names_[f];
        const auto &rule = rules_[f];
        if (const auto *oh = std::get_if<OneHot>(&rule)) {
            if (!is_symbolic_position(f)) {
                throw Error{Errc::spec_mismatch, "one-hot rule on continuous feature '" + name + "'"};
            }
            for (std::uint32_t i = 0; i < oh->dictionary.size(); ++i) {
                symbol_index_[f].emplace(Symbol::intern(oh->dictionary[i]), i);
            }
            if (mode_ == EncoderMode::mlp) {
                for (const auto &v : oh->dictionary) columns_.push_back({name + "=" + v, false, 0});
            } else {
                columns_.push_back({name, true, static_cast<std::uint32_t>(oh->dictionary.size() + 1)});
            }
        } else if (const auto *bins = std::get_if<Bins>(&rule)) {
            columns_.push_back({name, true, static_cast<std::uint32_t>(bins->cuts.size() + 1)});
        } else {
            if (is_symbolic_position(f)) {
                throw Error{Errc::spec_mismatch, "symbolic feature '" + name + "' needs a dictionary"};
            }
            columns_.push_back({name, false, 0});
        }
    }
    class_lookup_.clear();
    for (std::uint32_t i = 0; i < class_names_.size(); ++i) {
        class_lookup_.emplace(Symbol::intern(class_names_[i]), i);
    }
}

std::optional<std::uint32_t> EncoderSpec::class_index(const KddRecord &record) const {
    if (granularity_ == Granularity::category) {
        auto c = label_to_category(record.label, unknown_label_);
        if (!c) return std::nullopt;
        // category class order is the enumeration order
        return static_cast<std::uint32_t>(*c);
    }
    if (auto it = class_lookup_.find(record.label.symbol()); it != class_lookup_.end()) return it->second;
    if (!label_to_category(record.label, unknown_label_)) return std::nullopt;
    throw Error{Errc::unknown_class, "label '" + std::string{record.label.name()} + "' not in class order"};
}

void EncoderSpec::encode_row(const KddRecord &record, std::span<double> out) const {
    if (out.size() != width()) {
        throw Error{Errc::shape_mismatch, "encode_row output has the wrong width"};
    }
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        const std::size_t col = offsets_[f];
        const auto &rule = rules_[f];
        if (const auto *oh = std::get_if<OneHot>(&rule)) {
            auto it = symbol_index_[f].find(record.symbol_at(f));
            const bool seen = it != symbol_index_[f].end();
            if (mode_ == EncoderMode::mlp) {
                std::fill_n(out.begin() + static_cast<std::ptrdiff_t>(col), oh->dictionary.size(), 0.0);
                if (seen) out[col + it->second] = 1.0;
            } else {
                out[col] = seen ? it->second : static_cast<double>(oh->dictionary.size());
            }
        } else if (const auto *mm = std::get_if<MinMax>(&rule)) {
            double v = record.values[f];
            out[col] = mm->hi > mm->lo ? std::clamp((v - mm->lo) / (mm->hi - mm->lo), 0.0, 1.0) : 0.0;
        } else if (const auto *bins = std::get_if<Bins>(&rule)) {
            out[col] = bin_of(bins->cuts, record.values[f]);
        } else {
            out[col] = record.values[f];
        }
    }
}

namespace {

enum RuleTag : std::uint8_t { kPassthrough = 0, kOneHot = 1, kMinMax = 2, kBins = 3 };

}

void EncoderSpec::serialize(ByteWriter &w) const {
    w.u8(static_cast<std::uint8_t>(mode_));
    w.u8(static_cast<std::uint8_t>(granularity_));
    w.u8(static_cast<std::uint8_t>(unknown_label_.action));
    w.u8(static_cast<std::uint8_t>(unknown_label_.target));
    w.u64(schema_fingerprint_);
    w.u64(class_names_.size());
    for (const auto &c : class_names_) w.str(c);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        w.str(feature_names_[f]);
        const auto &rule = rules_[f];
        if (const auto *oh = std::get_if<OneHot>(&rule)) {
            w.u8(kOneHot);
            w.u64(oh->dictionary.size());
            for (const auto &v : oh->dictionary) w.str(v);
        } else if (const auto *mm = std::get_if<MinMax>(&rule)) {
            w.u8(kMinMax);
            w.f64(mm->lo);
            w.f64(mm->hi);
        } else if (const auto *bins = std::get_if<Bins>(&rule)) {
            w.u8(kBins);
            w.f64s(bins->cuts);
        } else {
            w.u8(kPassthrough);
        }
    }
}

EncoderSpec EncoderSpec::deserialize(ByteReader &r) {
    auto mode = r.u8();
    auto gran = r.u8();
    auto action = r.u8();
    auto target = r.u8();
    if (mode > 2 || gran > 1 || action > 2 || target >= kCategoryCount) {
        throw Error{Errc::integrity_error, "invalid encoder header"};
    }
    UnknownLabelPolicy policy{static_cast<UnknownLabelPolicy::Action>(action), static_cast<AttackCategory>(target)};
    auto fingerprint = r.u64();
    std::vector<std::string> classes(r.length(8));
    for (auto &c : classes) c = r.str();
    std::vector<FeatureRule> rules;
    std::vector<std::string> names;
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        names.push_back(r.str());
        switch (r.u8()) {
        case kOneHot: {
            OneHot oh;
            oh.dictionary.resize(r.length(8));
            for (auto &v : oh.dictionary) v = r.str();
            rules.emplace_back(std::move(oh));
            break;
        }
        case kMinMax: {
            MinMax mm;
            mm.lo = r.f64();
            mm.hi = r.f64();
            rules.emplace_back(mm);
            break;
        }
        case kBins: rules.emplace_back(Bins{r.f64s()}); break;
        case kPassthrough: rules.emplace_back(Passthrough{}); break;
        default: throw Error{Errc::integrity_error, "invalid encoder rule tag"};
        }
    }
    return EncoderSpec{static_cast<EncoderMode>(mode), static_cast<Granularity>(gran), policy, std::move(rules),
                       std::move(classes), fingerprint, std::move(names)};
}

bool operator==(const EncoderSpec &a, const EncoderSpec &b) {
    return a.mode_ == b.mode_ && a.granularity_ == b.granularity_ &&
           a.unknown_label_.action == b.unknown_label_.action && a.unknown_label_.target == b.unknown_label_.target &&
           a.rules_ == b.rules_ && a.class_names_ == b.class_names_ &&
           a.schema_fingerprint_ == b.schema_fingerprint_ && a.feature_names_ == b.feature_names_;
}

void EncodedDataset::validate() const {
    if (values.size() != rows() * width) {
        throw Error{Errc::shape_mismatch, "encoded matrix size does not match rows x width"};
    }
    if (columns.size() != width) {
        throw Error{Errc::shape_mismatch, "column descriptors do not match width"};
    }
    for (auto t : targets) {
        if (t >= num_classes()) throw Error{Errc::shape_mismatch, "target index out of range"};
    }
}

EncoderSpec fit_encoder(std::span<const KddRecord> train, const EncoderOptions &options,
                        const FeatureSchema &schema) {
    if (train.empty()) {
        throw Error{Errc::empty_training_set, "cannot fit an encoder on an empty training set"};
    }
    std::vector<std::string> names;
    for (const auto &f : schema.features()) names.push_back(f.name);

    std::vector<FeatureRule> rules;
    rules.reserve(kFeatureCount);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
        if (is_symbolic_position(f)) {
            // sorted, so the fit does not depend on record order
            std::set<std::string, std::less<>> distinct;
            for (const auto &r : train) distinct.emplace(r.symbol_at(f).str());
            rules.emplace_back(OneHot{{distinct.begin(), distinct.end()}});
            continue;
        }
        switch (options.mode) {
        case EncoderMode::tree: rules.emplace_back(Passthrough{}); break;
        case EncoderMode::mlp: {
            auto [lo, hi] = std::minmax_element(train.begin(), train.end(), [f](const auto &a, const auto &b) {
                return a.values[f] < b.values[f];
            });
            rules.emplace_back(MinMax{lo->values[f], hi->values[f]});
            break;
        }
        case EncoderMode::bayes: {
            std::vector<double> column;
            column.reserve(train.size());
            for (const auto &r : train) column.push_back(r.values[f]);
            rules.emplace_back(Bins{equal_frequency_cuts(std::move(column), options.bayes_bins)});
            break;
        }
        }
    }

    std::vector<std::string> classes;
    if (options.granularity == Granularity::category) {
        for (auto c : kAllCategories) classes.emplace_back(category_name(c));
    } else {
        for (const auto &k : known_labels()) classes.emplace_back(k.name);
        std::set<std::string, std::less<>> extra;
        for (const auto &r : train) {
            if (known_category(r.label.name())) continue;
            if (label_to_category(r.label, options.unknown_label)) extra.emplace(r.label.name());
        }
        classes.insert(classes.end(), extra.begin(), extra.end());
    }
    return EncoderSpec{options.mode,  options.granularity,  options.unknown_label, std::move(rules),
                       std::move(classes), schema.fingerprint(), std::move(names)};
}

EncodedDataset encode(std::span<const KddRecord> records, const EncoderSpec &spec) {
    EncodedDataset out;
    out.width = spec.width();
    out.columns = spec.columns();
    out.class_names = spec.class_names();
    out.values.reserve(records.size() * out.width);
    out.targets.reserve(records.size());
    for (const auto &r : records) {
        auto cls = spec.class_index(r);
        if (!cls) continue;
        out.targets.push_back(*cls);
        out.values.resize(out.values.size() + out.width);
        spec.encode_row(r, std::span{out.values}.last(out.width));
    }
    return out;
}

}  // namespace kddids
