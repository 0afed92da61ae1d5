// model_store.hpp
//
// A trained classifier together with its encoder, and the single binary
// envelope it is saved in.
//
// Envelope layout (little-endian):
//   "KDDMODEL"  magic, 8 bytes
//   u32         format version
//   u8          model kind
//   u64         schema fingerprint
//   u64         body length, then the body:
//                 encoder spec, metadata JSON string, kind-specific payload
//   u32         CRC-32 of every preceding byte

#ifndef KDDIDS_MODEL_STORE_HPP
#define KDDIDS_MODEL_STORE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "kddids/bayes.hpp"
#include "kddids/dtree.hpp"
#include "kddids/encode.hpp"
#include "kddids/mlp.hpp"

namespace kddids {

enum class ModelKind : std::uint8_t { j48 = 1, mlp = 2, bayes = 3 };

std::string_view kind_name(ModelKind kind);
/// "j48" | "mlp" | "bayes"
std::optional<ModelKind> parse_kind(std::string_view name);

inline constexpr std::uint32_t kModelFormatVersion = 1;
inline constexpr std::string_view kModelMagic = "KDDMODEL";

using ModelPayload = std::variant<DecisionTreeModel, MlpModel, BayesModel>;

struct TrainedModel {
    EncoderSpec encoder;
    ModelPayload payload;
    /// training provenance: seed, config hash, hyperparameters, row counts
    std::map<std::string, std::string> meta;

    ModelKind kind() const;
    const std::vector<std::string> &class_names() const { return encoder.class_names(); }

    /// class distribution for one already-encoded row
    std::vector<double> predict_encoded(std::span<const double> row) const;
    std::vector<double> predict_dist(const KddRecord &record) const;

    friend bool operator==(const TrainedModel &, const TrainedModel &) = default;
};

std::vector<std::uint8_t> serialize_model(const TrainedModel &model);

/// Throws Error(integrity_error) for a bad magic, checksum or body,
/// Error(version_error) for an unsupported version and Error(kind_mismatch)
/// when expected is set and differs from the stored kind.
TrainedModel deserialize_model(std::span<const std::uint8_t> bytes, std::optional<ModelKind> expected = {});

/// throws Error(io_error)
void save_model(const TrainedModel &model, const std::string &path);
TrainedModel load_model(const std::string &path, std::optional<ModelKind> expected = {});

/// throws Error(schema_mismatch) unless the model was fitted under schema
void check_schema(const TrainedModel &model, const FeatureSchema &schema);

}  // namespace kddids

#endif
