// error.hpp

#ifndef KDDIDS_ERROR_HPP
#define KDDIDS_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kddids {

/// every failure the library reports carries one of these codes
enum class Errc {
    wrong_field_count,
    non_numeric_continuous,
    empty_field,
    invalid_label,
    unknown_label,
    invalid_schema,
    shortfall,
    insufficient_pool,
    empty_training_set,
    empty_distribution,
    partition_mismatch,
    schema_mismatch,
    shape_mismatch,
    non_differentiable_transfer,
    spec_mismatch,
    length_mismatch,
    unknown_class,
    empty_matrix,
    invalid_config,
    io_error,
    integrity_error,
    version_error,
    kind_mismatch,
};

std::string_view errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string &what)
        : std::runtime_error{what}, code_{code} {}

    Errc code() const noexcept { return code_; }

    /// true for errors caused by the input data rather than by usage or bugs
    bool is_data_error() const noexcept;

private:
    Errc code_;
};

/// a record-level failure annotated with the 1-based line it came from
class ParseError : public Error {
public:
    ParseError(Errc code, const std::string &what, std::uint64_t line)
        : Error{code, "line " + std::to_string(line) + ": " + what}, line_{line} {}

    std::uint64_t line() const noexcept { return line_; }

private:
    std::uint64_t line_;
};

}  // namespace kddids

#endif
