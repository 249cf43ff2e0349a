#pragma once

#include <array>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wxroute/time.hpp"

namespace wxroute {

inline constexpr double kDefaultGciSafetyFactor = 1.25;
/// Observed order above which a triplet counts as converged.
inline constexpr double kMinConvergedOrder = 1.0;

struct GridSolution {
    double h;     ///< representative grid size, here the node spacing in nm
    double value; ///< solution on that grid, here V_t in hours
};

/// Three solutions ordered fine to coarse (h1 < h2 < h3).
struct GridTriplet {
    std::array<GridSolution, 3> grids;

    /// Throws InvalidTriplet unless h is strictly increasing with both
    /// refinement ratios above 1.1 and all values finite.
    void validate() const;
};

struct ConvergenceReport {
    double order_p = 0.0;         ///< NaN for an exactly converged triplet
    double f_extrapolated = 0.0;
    double gci_fine = 0.0;        ///< fractional error band on the fine solution
    bool converged = false;       ///< order_p > 1 (or exact convergence)
    bool monotone = false;        ///< both differences share a sign
    bool exact = false;           ///< all three solutions agree
    int iterations = 0;           ///< fixed-point iterations spent on p
};

/// Three-grid observed order, Richardson extrapolation and fine-grid GCI.
///
/// p solves p = |ln|e32/e21| + ln((r21^p - s)/(r32^p - s))| / ln r21 with
/// s = sign(e32/e21). Fixed-point iteration from the constant-ratio estimate
/// is tried first; if it stalls or diverges the same equation is solved by
/// bracketing. Throws NoConvergence when no order can be found (including
/// the case where exactly one of the two differences vanishes).
ConvergenceReport analyze_convergence(const GridTriplet& triplet, double safety_factor = kDefaultGciSafetyFactor);

struct BatchEntry {
    Hours start = 0.0;
    std::map<double, double> vt_by_dn; ///< node spacing -> V_t
};

struct BatchResult {
    Hours start = 0.0;
    std::optional<ConvergenceReport> report;
    std::string error; ///< set when the entry could not be analysed
    double vt_fine = 0.0;

    /// Converged and monotone; the entries the summary statistics use.
    bool accepted() const noexcept { return report && report->converged && report->monotone; }
};

struct BatchSummary {
    std::size_t entries = 0;
    std::size_t accepted = 0;
    double converged_fraction = 0.0;
    double mean_gci = 0.0;          ///< over accepted entries
    double mean_vt_hours = 0.0;     ///< fine-grid V_t over accepted entries
    double mean_error_hours = 0.0;  ///< mean_gci * mean_vt_hours
};

struct BatchConvergence {
    std::vector<BatchResult> results;
    BatchSummary summary;
};

/// Analyses every entry independently; failures are recorded on the entry.
/// Oscillatory or low-order entries are reported but left out of the means.
BatchConvergence batch_convergence(const std::vector<BatchEntry>& entries,
                                   double safety_factor = kDefaultGciSafetyFactor);

/// Reads CSV rows start_iso,dn,vt_hours (header required), grouping by start.
std::vector<BatchEntry> read_batch_csv(std::istream& in, const std::string& source = "<stream>");

/// start_iso,p,f_ext,gci,converged,monotone
void write_convergence_csv(std::ostream& out, const std::vector<BatchResult>& results);

void write_batch_summary_json(std::ostream& out, const BatchSummary& summary);

} // namespace wxroute
