#include "kddids/schema.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <deque>
#include <fstream>
#include <mutex>
#include <unordered_map>
#include <unordered_set>

#include "kddids/error.hpp"
#include "kddids/rng.hpp"

namespace kddids {

namespace {

constexpr std::array<std::string_view, kFeatureCount> kKddNames{
    "duration", "protocol_type", "service", "flag", "src_bytes", "dst_bytes", "land",
    "wrong_fragment", "urgent", "hot", "num_failed_logins", "logged_in", "num_compromised",
    "root_shell", "su_attempted", "num_root", "num_file_creations", "num_shells",
    "num_access_files", "num_outbound_cmds", "is_host_login", "is_guest_login", "count",
    "srv_count", "serror_rate", "srv_serror_rate", "rerror_rate", "srv_rerror_rate",
    "same_srv_rate", "diff_srv_rate", "srv_diff_host_rate", "dst_host_count",
    "dst_host_srv_count", "dst_host_same_srv_rate", "dst_host_diff_srv_rate",
    "dst_host_same_src_port_rate", "dst_host_srv_diff_host_rate", "dst_host_serror_rate",
    "dst_host_srv_serror_rate", "dst_host_rerror_rate", "dst_host_srv_rerror_rate"};

constexpr std::array<KnownLabel, 22> kKnownLabels{{
    {"smurf", AttackCategory::dos},
    {"neptune", AttackCategory::dos},
    {"back", AttackCategory::dos},
    {"pod", AttackCategory::dos},
    {"teardrop", AttackCategory::dos},
    {"buffer_overflow", AttackCategory::u2r},
    {"loadmodule", AttackCategory::u2r},
    {"perl", AttackCategory::u2r},
    {"rootkit", AttackCategory::u2r},
    {"ftp_write", AttackCategory::r2l},
    {"guess_passwd", AttackCategory::r2l},
    {"imap", AttackCategory::r2l},
    {"multihop", AttackCategory::r2l},
    {"phf", AttackCategory::r2l},
    {"spy", AttackCategory::r2l},
    {"warezclient", AttackCategory::r2l},
    {"warezmaster", AttackCategory::r2l},
    {"ipsweep", AttackCategory::probe},
    {"nmap", AttackCategory::probe},
    {"portsweep", AttackCategory::probe},
    {"satan", AttackCategory::probe},
    {"normal", AttackCategory::normal},
}};

class SymbolTable {
public:
    SymbolTable() { strings_.emplace_back(); index_.emplace(std::string_view{strings_.front()}, 0); }

    std::uint32_t intern(std::string_view text) {
        std::lock_guard lock{mutex_};
        if (auto it = index_.find(text); it != index_.end()) {
            return it->second;
        }
        auto id = static_cast<std::uint32_t>(strings_.size());
        strings_.emplace_back(text);
        index_.emplace(std::string_view{strings_.back()}, id);
        return id;
    }

    std::string_view lookup(std::uint32_t id) {
        std::lock_guard lock{mutex_};
        return strings_[id];
    }

private:
    std::mutex mutex_;
    std::deque<std::string> strings_;  // deque keeps element addresses stable
    std::unordered_map<std::string_view, std::uint32_t> index_;
};

SymbolTable &symbol_table() {
    static SymbolTable table;
    return table;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

FeatureSchema::FeatureSchema(std::vector<FeatureDescriptor> features) : features_{std::move(features)} {
    if (features_.size() != kFeatureCount) {
        throw Error{Errc::invalid_schema, "schema must have exactly 41 features, got " +
                                              std::to_string(features_.size())};
    }
    std::unordered_set<std::string> seen;
    std::uint64_t h = fnv1a("kddids-schema-v1");
    for (std::size_t i = 0; i < features_.size(); ++i) {
        const auto &f = features_[i];
        if (f.name.empty()) {
            throw Error{Errc::invalid_schema, "feature " + std::to_string(i + 1) + " has an empty name"};
        }
        if (!seen.insert(f.name).second) {
            throw Error{Errc::invalid_schema, "duplicate feature name '" + f.name + "'"};
        }
        bool want_symbolic = is_symbolic_position(i);
        if ((f.kind == FeatureKind::symbolic) != want_symbolic) {
            throw Error{Errc::invalid_schema,
                        "feature " + std::to_string(i + 1) + " ('" + f.name + "') must be " +
                            (want_symbolic ? "symbolic" : "continuous")};
        }
        h = fnv1a(f.name, h);
        h = fnv1a(f.kind == FeatureKind::symbolic ? ":s;" : ":c;", h);
    }
    fingerprint_ = h;
}

const FeatureSchema &FeatureSchema::kdd99() {
    static const FeatureSchema schema = [] {
        std::vector<FeatureDescriptor> f;
        f.reserve(kFeatureCount);
        for (std::size_t i = 0; i < kFeatureCount; ++i) {
            f.push_back({std::string{kKddNames[i]},
                         is_symbolic_position(i) ? FeatureKind::symbolic : FeatureKind::continuous});
        }
        return FeatureSchema{std::move(f)};
    }();
    return schema;
}

FeatureSchema FeatureSchema::from_names_file(const std::string &path) {
    std::ifstream in{path};
    if (!in) {
        throw Error{Errc::io_error, "cannot open schema file '" + path + "'"};
    }
    std::vector<FeatureDescriptor> features;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto text = trim(line);
        if (text.empty() || text.front() == '|' || text.front() == '#') continue;
        auto colon = text.find(':');
        if (colon == std::string_view::npos) {
            if (features.empty()) continue;  // leading class list
            throw Error{Errc::invalid_schema, path + ":" + std::to_string(line_no) + ": expected 'name: kind.'"};
        }
        auto name = trim(text.substr(0, colon));
        auto kind = trim(text.substr(colon + 1));
        if (!kind.empty() && kind.back() == '.') kind.remove_suffix(1);
        if (kind == "continuous") {
            features.push_back({std::string{name}, FeatureKind::continuous});
        } else if (kind == "symbolic") {
            features.push_back({std::string{name}, FeatureKind::symbolic});
        } else {
            throw Error{Errc::invalid_schema,
                        path + ":" + std::to_string(line_no) + ": unknown kind '" + std::string{kind} + "'"};
        }
    }
    return FeatureSchema{std::move(features)};
}

std::optional<std::size_t> FeatureSchema::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < features_.size(); ++i) {
        if (features_[i].name == name) return i;
    }
    return std::nullopt;
}

Symbol Symbol::intern(std::string_view text) { return Symbol{symbol_table().intern(text)}; }

std::string_view Symbol::str() const { return symbol_table().lookup(id_); }

AttackLabel AttackLabel::parse(std::string_view raw) {
    auto text = trim(raw);
    if (!text.empty() && text.back() == '.') text.remove_suffix(1);
    if (text.empty()) {
        throw Error{Errc::invalid_label, "empty attack label"};
    }
    std::string lowered;
    lowered.reserve(text.size());
    for (char c : text) {
        auto u = static_cast<unsigned char>(c);
        if (c == ',' || std::isspace(u)) {
            throw Error{Errc::invalid_label, "attack label '" + std::string{text} + "' contains a separator"};
        }
        lowered.push_back(static_cast<char>(std::tolower(u)));
    }
    return AttackLabel{Symbol::intern(lowered)};
}

std::string_view category_name(AttackCategory c) {
    switch (c) {
    case AttackCategory::normal: return "normal";
    case AttackCategory::dos: return "dos";
    case AttackCategory::u2r: return "u2r";
    case AttackCategory::r2l: return "r2l";
    case AttackCategory::probe: return "probe";
    }
    return "?";
}

std::optional<AttackCategory> parse_category(std::string_view name) {
    std::string lowered;
    for (char c : name) lowered.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    for (auto c : kAllCategories) {
        if (category_name(c) == lowered) return c;
    }
    return std::nullopt;
}

const std::array<KnownLabel, 22> &known_labels() { return kKnownLabels; }

std::optional<AttackCategory> known_category(std::string_view label) {
    for (const auto &k : kKnownLabels) {
        if (k.name == label) return k.category;
    }
    return std::nullopt;
}

UnknownLabelPolicy UnknownLabelPolicy::parse(std::string_view text) {
    if (text == "error") return error();
    if (text == "skip") return skip();
    if (text.starts_with("map:")) {
        if (auto c = parse_category(text.substr(4))) return map(*c);
    }
    throw Error{Errc::invalid_config, "unknown-label policy must be error, skip or map:<category>, got '" +
                                          std::string{text} + "'"};
}

std::string UnknownLabelPolicy::to_string() const {
    switch (action) {
    case Action::error: return "error";
    case Action::skip_record: return "skip";
    case Action::map_to: return "map:" + std::string{category_name(target)};
    }
    return "error";
}

std::optional<AttackCategory> label_to_category(AttackLabel label, const UnknownLabelPolicy &policy) {
    if (auto c = known_category(label.name())) return c;
    switch (policy.action) {
    case UnknownLabelPolicy::Action::error:
        throw Error{Errc::unknown_label, "unknown attack label '" + std::string{label.name()} + "'"};
    case UnknownLabelPolicy::Action::skip_record:
        return std::nullopt;
    case UnknownLabelPolicy::Action::map_to:
        return policy.target;
    }
    return std::nullopt;
}

std::size_t KddRecordHash::operator()(const KddRecord &r) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    auto mix = [&h](std::uint64_t v) { h = splitmix64(h ^ v); };
    for (double v : r.values) mix(std::bit_cast<std::uint64_t>(v));
    for (Symbol s : r.symbols) mix(s.id());
    mix(r.label.symbol().id());
    return static_cast<std::size_t>(h);
}

}  // namespace kddids
