#include "wxroute/error.hpp"

namespace wxroute {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::DegenerateGeometry: return "DegenerateGeometry";
    case Errc::GridTooSmall: return "GridTooSmall";
    case Errc::PoleProximity: return "PoleProximity";
    case Errc::FormatError: return "FormatError";
    case Errc::AxisMismatch: return "AxisMismatch";
    case Errc::GapInTime: return "GapInTime";
    case Errc::OutOfDomain: return "OutOfDomain";
    case Errc::InvalidScale: return "InvalidScale";
    case Errc::InvalidTriplet: return "InvalidTriplet";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::InvalidPlan: return "InvalidPlan";
    case Errc::EmptyAggregate: return "EmptyAggregate";
    case Errc::IoError: return "IoError";
    }
    return "Unknown";
}

} // namespace wxroute
