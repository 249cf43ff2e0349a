#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "wxroute/gci.hpp"
#include "wxroute/geo.hpp"
#include "wxroute/perf.hpp"
#include "wxroute/sweep.hpp"
#include "wxroute/time.hpp"

namespace wxroute::cli {

/// Environment variable consulted when --config is not given.
inline constexpr const char* kConfigEnvVar = "WXROUTE_CONFIG";

struct StartWindow {
    Hours first = 0.0;
    Hours last = 0.0;
    double cadence_hours = 72.0;
};

/// Everything a subcommand needs. Relative paths in the file are resolved
/// against the directory holding the config file.
struct RunConfig {
    std::filesystem::path polar;
    std::filesystem::path environment;
    std::filesystem::path output_dir = ".";

    std::optional<GeoPoint> start;
    std::optional<GeoPoint> finish;

    std::optional<double> dn;
    std::vector<double> dn_list;
    std::optional<Hours> depart;

    double wave_coeff = kDefaultWaveCoeff;
    double heading_step_deg = kDefaultHeadingStepDeg;
    double gci_safety_factor = kDefaultGciSafetyFactor;

    double unc_min = 50.0;
    double unc_max = 150.0;
    int unc_steps = 21;
    std::vector<Hours> start_times;
    std::optional<StartWindow> start_window;

    unsigned threads = 0;
};

/// Parses the JSON config; errors name the offending key.
RunConfig load_run_config(const std::filesystem::path& path);

/// Same, from an in-memory document whose relative paths resolve against `base`.
RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base,
                           const std::string& source = "<config>");

/// Start times from the explicit list, else the window, else the departure.
std::vector<Hours> resolve_start_times(const RunConfig& cfg);

SweepPlan make_sweep_plan(const RunConfig& cfg);

} // namespace wxroute::cli
