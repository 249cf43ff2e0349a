#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <string_view>
#include <vector>

#include "wxroute/geo.hpp"
#include "wxroute/time.hpp"

namespace wxroute {

enum class Variable : std::size_t { WindU = 0, WindV, WaveHs, CurrentU, CurrentV };

inline constexpr std::size_t kVariableCount = 5;

std::string_view variable_name(Variable v) noexcept;
std::optional<Variable> variable_from_name(std::string_view name) noexcept;

/// One value per lattice node, row-major: rows follow the latitude axis and
/// columns the longitude axis.
using Layer = std::vector<double>;

/// Interpolated conditions at a point. Wind direction is the meteorological
/// "from" bearing; currents are eastward/northward components.
struct EnvSample {
    double wind_speed_kn = 0.0;
    double wind_dir_from_deg = 0.0;
    double wave_hs_m = 0.0;
    double current_u_kn = 0.0;
    double current_v_kn = 0.0;
};

/// Gridded wind (u, v in knots, direction the air moves toward), significant
/// wave height (metres) and surface current (u, v in knots) on a fixed
/// lat/lon lattice with a uniform time axis.
///
/// Spatial queries are bilinear; temporal queries pick the nearest time step,
/// ties going to the earlier step. A field with a single time step is treated
/// as time-invariant. Immutable after construction.
class EnvironmentField {
public:
    /// `layers[v]` holds one Layer per time step. Current layers may be left
    /// empty, in which case currents are zero everywhere.
    EnvironmentField(std::vector<double> lat_axis, std::vector<double> lon_axis, std::vector<Hours> time_axis,
                     std::array<std::vector<Layer>, kVariableCount> layers);

    const std::vector<double>& lat_axis() const noexcept { return lat_axis_; }
    const std::vector<double>& lon_axis() const noexcept { return lon_axis_; }
    const std::vector<Hours>& time_axis() const noexcept { return time_axis_; }

    bool has(Variable v) const noexcept { return !layers_[static_cast<std::size_t>(v)].empty(); }
    const std::vector<Layer>& layers(Variable v) const noexcept { return layers_[static_cast<std::size_t>(v)]; }

    /// Spacing between time steps; zero for a single-step field.
    Hours time_step() const noexcept { return step_; }

    /// Earliest and latest query times accepted by sample().
    Hours valid_from() const noexcept;
    Hours valid_until() const noexcept;
    bool covers_time(Hours t) const noexcept { return t >= valid_from() && t <= valid_until(); }

    /// Index of the time step used for a query at `t`. Throws OutOfDomain.
    std::size_t time_index(Hours t) const;

    /// Throws OutOfDomain outside the lattice or the time domain.
    EnvSample sample(const GeoPoint& p, Hours t) const;

    friend bool operator==(const EnvironmentField&, const EnvironmentField&) = default;

private:
    struct Cell {
        std::size_t i0, i1, j0, j1;
        double wy, wx; // weights of i1 / j1
    };
    Cell locate(const GeoPoint& p) const;
    double interpolate(const Layer& layer, const Cell& c) const noexcept;

    std::vector<double> lat_axis_;
    std::vector<double> lon_axis_;
    std::vector<Hours> time_axis_;
    std::array<std::vector<Layer>, kVariableCount> layers_;
    Hours step_ = 0.0;
};

/// Reads a JSON manifest
///   { "lat_axis": [...], "lon_axis": [...], "time_axis": ["ISO-8601", ...],
///     "variables": { "wind_u": ["file.csv", ...], ... } }
/// whose CSV paths are relative to the manifest. Throws FormatError,
/// AxisMismatch or GapInTime.
EnvironmentField load_environment(const std::filesystem::path& manifest_path);

/// Writes `<dir>/<stem>.json` plus one CSV per variable and time step.
/// Values are written with round-trip precision; time stamps to the second.
std::filesystem::path save_environment(const EnvironmentField& field, const std::filesystem::path& dir,
                                       std::string_view stem = "environment");

} // namespace wxroute
