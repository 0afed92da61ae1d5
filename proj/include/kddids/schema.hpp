// schema.hpp
//
// Feature layout of a KDD Cup 99 connection record and the attack
// taxonomy its labels belong to.

#ifndef KDDIDS_SCHEMA_HPP
#define KDDIDS_SCHEMA_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace kddids {

inline constexpr std::size_t kFeatureCount = 41;
inline constexpr std::size_t kFieldCount = kFeatureCount + 1;
inline constexpr std::size_t kSymbolicCount = 3;

/// zero-based positions of protocol_type, service and flag
inline constexpr std::array<std::size_t, kSymbolicCount> kSymbolicPositions{1, 2, 3};

constexpr bool is_symbolic_position(std::size_t feature) {
    return feature >= kSymbolicPositions.front() && feature <= kSymbolicPositions.back();
}

enum class FeatureKind : std::uint8_t { continuous, symbolic };

struct FeatureDescriptor {
    std::string name;
    FeatureKind kind;
};

class FeatureSchema {
public:
    /// the canonical KDD Cup 99 field list, duration .. dst_host_srv_rerror_rate
    static const FeatureSchema &kdd99();

    /// validates the descriptor list; throws Error(invalid_schema)
    explicit FeatureSchema(std::vector<FeatureDescriptor> features);

    /// reads a names file: one "name: continuous." or "name: symbolic."
    /// per line; a first line without ':' (the class list) is ignored
    static FeatureSchema from_names_file(const std::string &path);

    const std::vector<FeatureDescriptor> &features() const { return features_; }
    const FeatureDescriptor &operator[](std::size_t i) const { return features_[i]; }
    std::size_t size() const { return features_.size(); }
    std::optional<std::size_t> index_of(std::string_view name) const;

    /// stable hash of names and kinds
    std::uint64_t fingerprint() const { return fingerprint_; }

private:
    std::vector<FeatureDescriptor> features_;
    std::uint64_t fingerprint_ = 0;
};

/// interned string; cheap to copy, compare and hash
class Symbol {
public:
    Symbol() = default;
    static Symbol intern(std::string_view text);

    std::string_view str() const;
    std::uint32_t id() const { return id_; }

    friend bool operator==(Symbol a, Symbol b) { return a.id_ == b.id_; }

private:
    explicit Symbol(std::uint32_t id) : id_{id} {}
    std::uint32_t id_ = 0;  // 0 is the empty string
};

/// lowercased, '.'-stripped attack label
class AttackLabel {
public:
    AttackLabel() = default;

    /// normalizes raw text; throws Error(invalid_label) if the result is
    /// empty or contains commas or whitespace
    static AttackLabel parse(std::string_view raw);

    std::string_view name() const { return symbol_.str(); }
    Symbol symbol() const { return symbol_; }

    friend bool operator==(AttackLabel a, AttackLabel b) { return a.symbol_ == b.symbol_; }

private:
    explicit AttackLabel(Symbol s) : symbol_{s} {}
    Symbol symbol_;
};

enum class AttackCategory : std::uint8_t { normal, dos, u2r, r2l, probe };

inline constexpr std::size_t kCategoryCount = 5;
inline constexpr std::array<AttackCategory, kCategoryCount> kAllCategories{
    AttackCategory::normal, AttackCategory::dos, AttackCategory::u2r,
    AttackCategory::r2l, AttackCategory::probe};

std::string_view category_name(AttackCategory c);
std::optional<AttackCategory> parse_category(std::string_view name);

/// a label from the published per-attack breakdown and its family
struct KnownLabel {
    std::string_view name;
    AttackCategory category;
};

/// the 22 labels of the published per-attack breakdown, DOS first, normal last
const std::array<KnownLabel, 22> &known_labels();

struct UnknownLabelPolicy {
    enum class Action : std::uint8_t { error, skip_record, map_to };
    Action action = Action::error;
    AttackCategory target = AttackCategory::normal;  // used by map_to

    static UnknownLabelPolicy error() { return {}; }
    static UnknownLabelPolicy skip() { return {Action::skip_record, AttackCategory::normal}; }
    static UnknownLabelPolicy map(AttackCategory c) { return {Action::map_to, c}; }

    /// "error", "skip" or "map:<category>"
    static UnknownLabelPolicy parse(std::string_view text);
    std::string to_string() const;
};

/// nullopt means the policy says to skip the record
std::optional<AttackCategory> label_to_category(AttackLabel label, const UnknownLabelPolicy &policy);

/// category of one of the 22 known labels, nullopt otherwise
std::optional<AttackCategory> known_category(std::string_view label);

struct KddRecord {
    /// continuous features by schema position; symbolic positions hold 0.0
    std::array<double, kFeatureCount> values{};
    std::array<Symbol, kSymbolicCount> symbols{};
    AttackLabel label;

    Symbol symbol_at(std::size_t feature) const { return symbols[feature - kSymbolicPositions.front()]; }

    friend bool operator==(const KddRecord &, const KddRecord &) = default;
};

struct KddRecordHash {
    std::size_t operator()(const KddRecord &r) const noexcept;
};

}  // namespace kddids

template <>
struct std::hash<kddids::Symbol> {
    std::size_t operator()(kddids::Symbol s) const noexcept { return s.id(); }
};

#endif
