#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <vector>

#include "wxroute/env.hpp"
#include "wxroute/geo.hpp"
#include "wxroute/time.hpp"

namespace wxroute {

/// Boat speed through the water (knots) tabulated over true wind angle
/// (degrees off the wind, 0 = head to wind, 180 = dead run) and true wind
/// speed (knots). The table is symmetric about the wind axis.
class PolarTable {
public:
    /// `speed_kn[i][j]` is the speed at twa_axis[i], tws_axis[j].
    PolarTable(std::vector<double> tws_axis, std::vector<double> twa_axis, std::vector<std::vector<double>> speed_kn);

    const std::vector<double>& tws_axis() const noexcept { return tws_; }
    const std::vector<double>& twa_axis() const noexcept { return twa_; }
    const std::vector<std::vector<double>>& speeds() const noexcept { return speed_; }

    /// Bilinear in (twa, tws). Any twa is folded into [0, 180]; queries past
    /// either end of an axis clamp to that end.
    double speed(double tws_kn, double twa_deg) const noexcept;

    friend bool operator==(const PolarTable&, const PolarTable&) = default;

private:
    std::vector<double> tws_;
    std::vector<double> twa_;
    std::vector<std::vector<double>> speed_;
};

/// Free-function form of PolarTable::speed.
double polar_speed(const PolarTable& polar, double tws_kn, double twa_deg) noexcept;

/// CSV layout: first cell "TWA", remainder of the first row the TWS axis,
/// first column the TWA axis, body the speeds.
PolarTable read_polar_csv(std::istream& in, const std::string& source = "<stream>");
PolarTable load_polar(const std::filesystem::path& path);
void write_polar_csv(std::ostream& out, const PolarTable& polar);
void save_polar(const std::filesystem::path& path, const PolarTable& polar);

inline constexpr double kDefaultWaveCoeff = 0.05;       // per metre of Hs
inline constexpr double kDefaultHeadingStepDeg = 1.0;
inline constexpr double kCourseMadeGoodTolKn = 0.05;

struct PerformanceModel {
    std::shared_ptr<const PolarTable> polar;
    double unc_factor = 1.0;
    double wave_coeff = kDefaultWaveCoeff;
    double heading_step_deg = kDefaultHeadingStepDeg;

    /// Throws InvalidArgument / InvalidScale on a bad knob.
    void validate() const;
};

PerformanceModel make_performance_model(PolarTable polar, double wave_coeff = kDefaultWaveCoeff,
                                        double heading_step_deg = kDefaultHeadingStepDeg);

/// Returns `model` with unc_factor = unc_percent / 100. Throws InvalidScale
/// for unc_percent <= 0.
PerformanceModel scale_performance(const PerformanceModel& model, double unc_percent);

/// max(0, 1 - k_w * hs).
double wave_factor(const PerformanceModel& model, double hs_m) noexcept;

/// Speed through the water on a heading making `twa_deg` with the wind:
/// polar speed x unc_factor x wave_factor.
double boat_speed(const PerformanceModel& model, double tws_kn, double twa_deg, double hs_m) noexcept;

struct HeadingSolution {
    double sog_kn = 0.0;      ///< 0 when no heading holds the course
    double heading_deg = 0.0; ///< heading through the water
};

/// Searches headings course + k * heading_step for the one whose ground
/// velocity (boat velocity plus current) has the largest component along the
/// course while the cross-course component stays within 0.05 kn (scaled by
/// unc_factor, so still-water results scale exactly with performance).
HeadingSolution effective_speed_over_ground(const PerformanceModel& model, const EnvSample& env,
                                            double course_bearing_deg);

struct ArcCost {
    double hours = 0.0;       ///< +infinity when the arc cannot be sailed
    double heading_deg = 0.0;
};

/// Travel time from `from` to `to` leaving at `depart`, with weather sampled
/// once at the departure node and time. Propagates OutOfDomain.
ArcCost arc_cost(const PerformanceModel& model, const EnvironmentField& field, const GeoPoint& from,
                 const GeoPoint& to, Hours depart);

} // namespace wxroute
