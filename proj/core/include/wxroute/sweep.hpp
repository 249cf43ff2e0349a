#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "wxroute/env.hpp"
#include "wxroute/geo.hpp"
#include "wxroute/perf.hpp"
#include "wxroute/time.hpp"

namespace wxroute {

struct SweepPlan {
    GeoPoint start{0.0, 0.0};
    GeoPoint finish{0.0, 1.0};
    std::vector<double> dn_list;
    double unc_min_percent = 50.0;
    double unc_max_percent = 150.0;
    int unc_steps = 21;
    std::vector<Hours> start_times;
    std::filesystem::path polar_path;
    std::filesystem::path environment_path;
    double wave_coeff = kDefaultWaveCoeff;
    double heading_step_deg = kDefaultHeadingStepDeg;

    /// Throws InvalidPlan naming the offending field.
    void validate() const;

    /// Evenly spaced, endpoints included.
    std::vector<double> unc_levels() const;
};

/// first, first + cadence, ... up to and including `last`.
std::vector<Hours> start_window(Hours first, Hours last, double cadence_hours);

struct SweepRecord {
    Hours start = 0.0;
    double dn = 0.0;
    double unc_percent = 0.0;
    bool feasible = false;
    double vt_hours = 0.0;           ///< NaN when infeasible
    double vt_reference_hours = 0.0; ///< V_t at 100% for the same start and d_n; NaN if unavailable
    std::string reason;              ///< why the record is infeasible

    friend bool operator==(const SweepRecord&, const SweepRecord&) = default;
};

struct UncAggregate {
    double dn = 0.0;
    double unc_percent = 0.0;
    std::size_t paired_starts = 0; ///< starts feasible at every level for this d_n
    std::size_t infeasible = 0;    ///< infeasible records at this (d_n, unc)
    double mean_vt = 0.0;
    double std_vt = 0.0;           ///< population standard deviation
    double mean_normalized = 0.0;  ///< V_t / V_t(100%)
    double std_normalized = 0.0;
};

/// |dV_t| for a (100 - x)% performance minus |dV_t| for (100 + x)%, using
/// means over paired starts; positive when slowing down costs more than
/// speeding up gains.
struct AsymmetryEntry {
    double dn = 0.0;
    double offset_percent = 0.0;
    double slowdown_hours = 0.0;
    double speedup_hours = 0.0;
    double statistic = 0.0;
};

struct SweepAggregates {
    std::vector<UncAggregate> per_unc;
    std::vector<AsymmetryEntry> asymmetry;
};

/// Groups by d_n, keeps starts feasible at every unc level of the group and
/// reports mean/std of absolute and normalised V_t. Throws EmptyAggregate
/// when no start survives in any group.
SweepAggregates aggregate(const std::vector<SweepRecord>& records);

struct SweepReport {
    std::vector<SweepRecord> records; ///< ordered by (start, d_n, unc)
    SweepAggregates aggregates;       ///< empty when no start is paired-feasible
    std::size_t infeasible_records = 0;
};

struct SweepOptions {
    unsigned threads = 1; ///< 0 picks the hardware concurrency
};

/// Solves every (start, d_n, unc) combination. A 100% reference run is added
/// internally when the unc range does not contain 100%. Per-record failures
/// become infeasible records; plan errors throw before any solve.
SweepReport run_sweep(const SweepPlan& plan, const PerformanceModel& base, const EnvironmentField& field,
                      const SweepOptions& options = {});

/// Loads the polar and environment named in the plan, then runs it.
SweepReport run_sweep(const SweepPlan& plan, const SweepOptions& options = {});

void write_sweep_records_csv(std::ostream& out, const std::vector<SweepRecord>& records);
void write_sweep_aggregates_csv(std::ostream& out, const SweepAggregates& aggregates);
void write_sweep_summary_json(std::ostream& out, const SweepReport& report);
/// Fixed-width table of the per-unc statistics for terminals.
void print_sweep_table(std::ostream& out, const SweepAggregates& aggregates);

} // namespace wxroute
