#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wxroute {

enum class Errc {
    InvalidArgument,
    DegenerateGeometry,
    GridTooSmall,
    PoleProximity,
    FormatError,
    AxisMismatch,
    GapInTime,
    OutOfDomain,
    InvalidScale,
    InvalidTriplet,
    NoConvergence,
    InvalidPlan,
    EmptyAggregate,
    IoError,
};

std::string_view to_string(Errc code) noexcept;

/// Single exception type for the library; `code()` tells callers which
/// contract was violated without string matching.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace wxroute
