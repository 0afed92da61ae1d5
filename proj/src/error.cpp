#include "kddids/error.hpp"

namespace kddids {

std::string_view errc_name(Errc code) {
    switch (code) {
    case Errc::wrong_field_count: return "WrongFieldCount";
    case Errc::non_numeric_continuous: return "NonNumericContinuous";
    case Errc::empty_field: return "EmptyField";
    case Errc::invalid_label: return "InvalidLabel";
    case Errc::unknown_label: return "UnknownLabel";
    case Errc::invalid_schema: return "InvalidSchema";
    case Errc::shortfall: return "ShortfallError";
    case Errc::insufficient_pool: return "InsufficientPool";
    case Errc::empty_training_set: return "EmptyTrainingSet";
    case Errc::empty_distribution: return "EmptyDistribution";
    case Errc::partition_mismatch: return "PartitionMismatch";
    case Errc::schema_mismatch: return "SchemaMismatch";
    case Errc::shape_mismatch: return "ShapeMismatch";
    case Errc::non_differentiable_transfer: return "NonDifferentiableTransfer";
    case Errc::spec_mismatch: return "SpecMismatch";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::unknown_class: return "UnknownClass";
    case Errc::empty_matrix: return "EmptyMatrix";
    case Errc::invalid_config: return "InvalidConfig";
    case Errc::io_error: return "IoError";
    case Errc::integrity_error: return "IntegrityError";
    case Errc::version_error: return "VersionError";
    case Errc::kind_mismatch: return "KindMismatch";
    }
    return "Unknown";
}

bool Error::is_data_error() const noexcept {
    switch (code_) {
    case Errc::invalid_config:
    case Errc::non_differentiable_transfer:
        return false;
    default:
        return true;
    }
}

}  // namespace kddids
