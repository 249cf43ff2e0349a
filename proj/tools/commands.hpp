#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "run_config.hpp"

namespace wxroute::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitError = 1,
    kExitInfeasible = 2,
};

/// Overrides from the command line, applied on top of the config file.
struct Overrides {
    std::vector<double> dn;
    std::string depart;
    std::optional<double> unc_min;
    std::optional<double> unc_max;
    std::optional<int> unc_steps;
    std::optional<double> cadence_hours;
    std::optional<double> kw;
    std::string out;
    std::optional<unsigned> threads;
};

void apply_overrides(RunConfig& cfg, const Overrides& o);

/// Solve one route; writes route.geojson and route.csv (and grid.csv when
/// `dump_grid`). Exit 2 when no route exists.
int cmd_route(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool dump_grid = false);

/// Three-grid convergence study of one departure, writing convergence.csv
/// and convergence.json.
int cmd_gci(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Batch convergence over a start_iso,dn,vt_hours CSV.
int cmd_gci_batch(const RunConfig& cfg, const std::string& batch_csv, std::ostream& out, std::ostream& err);

/// Uncertainty sweep; writes sweep_records.csv, sweep_aggregates.csv and
/// sweep_summary.json and prints the per-unc table.
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Full argument handling: `wxroute <route|gci|sweep> [--config file] [flags]`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace wxroute::cli
