#include "kddids/model_store.hpp"

#include <fstream>
#include <iterator>
#include <sstream>

#include <zlib.h>

#include "json.hpp"
#include "kddids/error.hpp"

namespace kddids {

std::string_view kind_name(ModelKind kind) {
    switch (kind) {
    case ModelKind::j48: return "j48";
    case ModelKind::mlp: return "mlp";
    case ModelKind::bayes: return "bayes";
    }
    return "unknown";
}

std::optional<ModelKind> parse_kind(std::string_view name) {
    if (name == "j48") return ModelKind::j48;
    if (name == "mlp") return ModelKind::mlp;
    if (name == "bayes") return ModelKind::bayes;
    return std::nullopt;
}

ModelKind TrainedModel::kind() const {
    switch (payload.index()) {
    case 0: return ModelKind::j48;
    case 1: return ModelKind::mlp;
    default: return ModelKind::bayes;
    }
}

std::vector<double> TrainedModel::predict_encoded(std::span<const double> row) const {
    return std::visit([row](const auto &m) { return m.predict_dist(row); }, payload);
}

std::vector<double> TrainedModel::predict_dist(const KddRecord &record) const {
    std::vector<double> row(encoder.width());
    encoder.encode_row(record, row);
    return predict_encoded(row);
}

namespace {

std::uint32_t crc_of(std::span<const std::uint8_t> bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    std::size_t pos = 0;
    while (pos < bytes.size()) {
        auto chunk = static_cast<uInt>(std::min<std::size_t>(bytes.size() - pos, 1u << 30));
        crc = crc32(crc, bytes.data() + pos, chunk);
        pos += chunk;
    }
    return static_cast<std::uint32_t>(crc);
}

constexpr std::size_t kHeaderSize = 8 + 4 + 1 + 8 + 8;

}  // namespace

std::vector<std::uint8_t> serialize_model(const TrainedModel &model) {
    ByteWriter body;
    model.encoder.serialize(body);
    body.str(nlohmann::json(model.meta).dump());
    std::visit([&body](const auto &m) { m.serialize(body); }, model.payload);

    ByteWriter w;
    for (char c : kModelMagic) w.u8(static_cast<std::uint8_t>(c));
    w.u32(kModelFormatVersion);
    w.u8(static_cast<std::uint8_t>(model.kind()));
    w.u64(model.encoder.schema_fingerprint());
    w.u64(body.data().size());
    w.bytes(body.data());
    w.u32(crc_of(w.data()));
    return std::move(w).take();
}

TrainedModel deserialize_model(std::span<const std::uint8_t> bytes, std::optional<ModelKind> expected) {
    if (bytes.size() < kHeaderSize + 4 ||
        std::string_view(reinterpret_cast<const char *>(bytes.data()), kModelMagic.size()) != kModelMagic) {
        throw Error{Errc::integrity_error, "not a model file"};
    }
    ByteReader r{bytes};
    r.bytes(kModelMagic.size());
    const auto version = r.u32();
    if (version != kModelFormatVersion) {
        throw Error{Errc::version_error, "model format version " + std::to_string(version) +
                                             " is not supported (expected " +
                                             std::to_string(kModelFormatVersion) + ")"};
    }
    const auto stored_crc = ByteReader{bytes.subspan(bytes.size() - 4)}.u32();
    if (crc_of(bytes.first(bytes.size() - 4)) != stored_crc) {
        throw Error{Errc::integrity_error, "model checksum mismatch"};
    }
    const auto kind_byte = r.u8();
    if (kind_byte < 1 || kind_byte > 3) throw Error{Errc::integrity_error, "unknown model kind"};
    const auto kind = static_cast<ModelKind>(kind_byte);
    if (expected && *expected != kind) {
        throw Error{Errc::kind_mismatch, "model file holds a " + std::string{kind_name(kind)} + " model, not " +
                                             std::string{kind_name(*expected)}};
    }
    const auto fingerprint = r.u64();
    const auto body_len = r.u64();
    if (body_len != bytes.size() - kHeaderSize - 4) throw Error{Errc::integrity_error, "model body length mismatch"};

    ByteReader body{r.bytes(static_cast<std::size_t>(body_len))};
    TrainedModel model;
    model.encoder = EncoderSpec::deserialize(body);
    if (model.encoder.schema_fingerprint() != fingerprint) {
        throw Error{Errc::integrity_error, "header and encoder disagree on the schema fingerprint"};
    }
    try {
        model.meta = nlohmann::json::parse(body.str()).get<std::map<std::string, std::string>>();
    } catch (const nlohmann::json::exception &e) {
        throw Error{Errc::integrity_error, std::string{"model metadata unreadable: "} + e.what()};
    }
    switch (kind) {
    case ModelKind::j48: model.payload = DecisionTreeModel::deserialize(body); break;
    case ModelKind::mlp: model.payload = MlpModel::deserialize(body); break;
    case ModelKind::bayes: model.payload = BayesModel::deserialize(body); break;
    }
    if (!body.done()) throw Error{Errc::integrity_error, "trailing bytes in model body"};
    if (model.class_names() != std::visit([](const auto &m) { return m.class_names(); }, model.payload)) {
        throw Error{Errc::integrity_error, "encoder and model disagree on the class order"};
    }
    return model;
}

void save_model(const TrainedModel &model, const std::string &path) {
    const auto bytes = serialize_model(model);
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw Error{Errc::io_error, "cannot write model file " + path};
}

TrainedModel load_model(const std::string &path, std::optional<ModelKind> expected) {
    std::ifstream in{path, std::ios::binary};
    if (!in) throw Error{Errc::io_error, "cannot open model file " + path};
    std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>{in}, std::istreambuf_iterator<char>{}};
    return deserialize_model(bytes, expected);
}

void check_schema(const TrainedModel &model, const FeatureSchema &schema) {
    if (model.encoder.schema_fingerprint() != schema.fingerprint()) {
        std::ostringstream msg;
        msg << "model was trained under schema " << std::hex << model.encoder.schema_fingerprint()
            << " but the data uses schema " << schema.fingerprint();
        throw Error{Errc::schema_mismatch, msg.str()};
    }
}

}  // namespace kddids
