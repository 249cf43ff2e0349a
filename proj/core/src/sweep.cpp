#include "wxroute/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "wxroute/error.hpp"
#include "wxroute/grid.hpp"
#include "wxroute/router.hpp"
#include "wxroute/text.hpp"

namespace wxroute {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kLevelMatchTol = 1e-9;

bool same_level(double a, double b) { return std::fabs(a - b) <= kLevelMatchTol; }

struct MeanStd {
    double mean = kNaN;
    double stddev = kNaN;
};

MeanStd population_stats(const std::vector<double>& xs) {
    if (xs.empty()) return {};
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / static_cast<double>(xs.size()))};
}

// Runs fn(i) for i in [0, count) on `threads` workers; the first exception
// thrown by any task is rethrown after all workers have joined.
template <typename Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::jthread> workers;
    workers.reserve(threads);
    for (unsigned w = 0; w < threads; ++w) {
        workers.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    workers.clear();
    if (failure) std::rethrow_exception(failure);
}

} // namespace

void SweepPlan::validate() const {
    if (dn_list.empty()) throw Error(Errc::InvalidPlan, "dn_list is empty");
    for (std::size_t i = 0; i < dn_list.size(); ++i) {
        if (!(dn_list[i] >= kMinNodeSpacingNm)) {
            throw Error(Errc::InvalidPlan, "dn_list entry " + text::format_double(dn_list[i]) + " is below 1 nm");
        }
        if (i > 0 && !(dn_list[i] > dn_list[i - 1])) {
            throw Error(Errc::InvalidPlan, "dn_list must be strictly increasing");
        }
    }
    if (unc_steps < 1) throw Error(Errc::InvalidPlan, "unc_steps must be >= 1");
    if (!(unc_min_percent > 0.0) || !std::isfinite(unc_max_percent)) {
        throw Error(Errc::InvalidPlan, "unc_min must be positive and unc_max finite");
    }
    if (unc_steps == 1 && unc_min_percent != unc_max_percent) {
        throw Error(Errc::InvalidPlan, "unc_steps = 1 requires unc_min == unc_max");
    }
    if (unc_steps > 1 && !(unc_max_percent > unc_min_percent)) {
        throw Error(Errc::InvalidPlan, "unc_max must exceed unc_min");
    }
    if (start_times.empty()) throw Error(Errc::InvalidPlan, "no start times");
    if (start == finish) throw Error(Errc::InvalidPlan, "start and finish coincide");
    if (!(wave_coeff >= 0.0)) throw Error(Errc::InvalidPlan, "wave_coeff must be >= 0");
}

std::vector<double> SweepPlan::unc_levels() const {
    std::vector<double> levels;
    levels.reserve(static_cast<std::size_t>(unc_steps));
    if (unc_steps == 1) {
        levels.push_back(unc_min_percent);
        return levels;
    }
    const double span = unc_max_percent - unc_min_percent;
    for (int i = 0; i < unc_steps; ++i) {
        levels.push_back(i == unc_steps - 1 ? unc_max_percent : unc_min_percent + i * span / (unc_steps - 1));
    }
    return levels;
}

std::vector<Hours> start_window(Hours first, Hours last, double cadence_hours) {
    if (!(cadence_hours > 0.0)) throw Error(Errc::InvalidPlan, "start cadence must be positive");
    if (last < first) throw Error(Errc::InvalidPlan, "start window ends before it begins");
    std::vector<Hours> out;
    for (std::size_t k = 0;; ++k) {
        const Hours t = first + static_cast<double>(k) * cadence_hours;
        if (t > last + 1e-9) break;
        out.push_back(t);
    }
    return out;
}

SweepAggregates aggregate(const std::vector<SweepRecord>& records) {
    if (records.empty()) throw Error(Errc::EmptyAggregate, "no sweep records");

    // dn -> ordered levels, and dn -> start -> level -> record
    std::map<double, std::vector<double>> levels_by_dn;
    std::map<double, std::map<Hours, std::vector<const SweepRecord*>>> by_dn_start;
    for (const auto& r : records) {
        auto& levels = levels_by_dn[r.dn];
        if (std::none_of(levels.begin(), levels.end(), [&](double u) { return same_level(u, r.unc_percent); })) {
            levels.push_back(r.unc_percent);
        }
        by_dn_start[r.dn][r.start].push_back(&r);
    }

    SweepAggregates out;
    bool any_paired = false;
    for (auto& [dn, levels] : levels_by_dn) {
        std::sort(levels.begin(), levels.end());
        const std::size_t nl = levels.size();
        const auto level_index = [&](double u) {
            for (std::size_t i = 0; i < nl; ++i) {
                if (same_level(levels[i], u)) return i;
            }
            return nl;
        };

        std::vector<std::vector<double>> vt(nl), norm(nl);
        std::vector<std::size_t> infeasible(nl, 0);
        std::vector<double> reference;
        for (const auto& [start, recs] : by_dn_start[dn]) {
            std::vector<const SweepRecord*> at(nl, nullptr);
            for (const SweepRecord* r : recs) {
                const std::size_t li = level_index(r->unc_percent);
                if (!r->feasible) ++infeasible[li];
                at[li] = r;
            }
            const bool paired = std::all_of(at.begin(), at.end(), [](const SweepRecord* r) {
                return r && r->feasible && std::isfinite(r->vt_reference_hours) && r->vt_reference_hours > 0.0;
            });
            if (!paired) continue;
            for (std::size_t li = 0; li < nl; ++li) {
                vt[li].push_back(at[li]->vt_hours);
                norm[li].push_back(at[li]->vt_hours / at[li]->vt_reference_hours);
            }
            reference.push_back(at[0]->vt_reference_hours);
        }
        any_paired = any_paired || !reference.empty();

        std::vector<double> means(nl, kNaN);
        for (std::size_t li = 0; li < nl; ++li) {
            const MeanStd a = population_stats(vt[li]);
            const MeanStd n = population_stats(norm[li]);
            means[li] = a.mean;
            out.per_unc.push_back({dn, levels[li], reference.size(), infeasible[li], a.mean, a.stddev, n.mean, n.stddev});
        }

        if (reference.empty()) continue;
        const double ref_mean = population_stats(reference).mean;
        for (std::size_t li = 0; li < nl; ++li) {
            if (!(levels[li] < 100.0 - kLevelMatchTol)) continue;
            const std::size_t mirror = level_index(200.0 - levels[li]);
            if (mirror == nl) continue;
            AsymmetryEntry a;
            a.dn = dn;
            a.offset_percent = 100.0 - levels[li];
            a.slowdown_hours = std::fabs(means[li] - ref_mean);
            a.speedup_hours = std::fabs(means[mirror] - ref_mean);
            a.statistic = a.slowdown_hours - a.speedup_hours;
            out.asymmetry.push_back(a);
        }
    }
    if (!any_paired) throw Error(Errc::EmptyAggregate, "no start is feasible at every performance level");
    std::sort(out.asymmetry.begin(), out.asymmetry.end(), [](const AsymmetryEntry& a, const AsymmetryEntry& b) {
        return a.dn != b.dn ? a.dn < b.dn : a.offset_percent < b.offset_percent;
    });
    return out;
}

SweepReport run_sweep(const SweepPlan& plan, const PerformanceModel& base, const EnvironmentField& field,
                      const SweepOptions& options) {
    plan.validate();
    base.validate();
    for (Hours t : plan.start_times) {
        if (!field.covers_time(t)) {
            throw Error(Errc::InvalidPlan, "start time " + format_iso8601(t) + " lies outside the weather record");
        }
    }

    std::vector<RoutingGrid> grids;
    grids.reserve(plan.dn_list.size());
    for (double dn : plan.dn_list) grids.push_back(build_grid({plan.start, plan.finish, dn}));

    std::vector<double> levels = plan.unc_levels();
    std::size_t reference_level = levels.size();
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (same_level(levels[i], 100.0)) reference_level = i;
    }
    std::vector<double> solve_levels = levels;
    if (reference_level == levels.size()) solve_levels.push_back(100.0);

    std::vector<PerformanceModel> models;
    models.reserve(solve_levels.size());
    for (double u : solve_levels) models.push_back(scale_performance(base, u));

    const std::size_t ns = plan.start_times.size();
    const std::size_t nd = grids.size();
    const std::size_t nl = solve_levels.size();

    struct Outcome {
        bool feasible = false;
        double vt = kNaN;
        std::string reason;
    };
    std::vector<Outcome> outcomes(ns * nd * nl);
    parallel_for(outcomes.size(), options.threads, [&](std::size_t idx) {
        const std::size_t li = idx % nl;
        const std::size_t di = (idx / nl) % nd;
        const std::size_t si = idx / (nl * nd);
        Outcome& o = outcomes[idx];
        try {
            const RouteResult r = shortest_path(grids[di], models[li], field, plan.start_times[si]);
            o.feasible = r.feasible;
            o.vt = r.feasible ? r.voyaging_time_hours : kNaN;
            if (!r.feasible) o.reason = "no feasible route";
        } catch (const Error& e) {
            o.reason = e.what();
        }
    });

    const std::size_t ref_li = reference_level == levels.size() ? nl - 1 : reference_level;
    SweepReport report;
    report.records.reserve(ns * nd * levels.size());
    for (std::size_t si = 0; si < ns; ++si) {
        for (std::size_t di = 0; di < nd; ++di) {
            const Outcome& ref = outcomes[(si * nd + di) * nl + ref_li];
            for (std::size_t li = 0; li < levels.size(); ++li) {
                const Outcome& o = outcomes[(si * nd + di) * nl + li];
                SweepRecord rec;
                rec.start = plan.start_times[si];
                rec.dn = plan.dn_list[di];
                rec.unc_percent = levels[li];
                rec.feasible = o.feasible;
                rec.vt_hours = o.vt;
                rec.vt_reference_hours = ref.feasible ? ref.vt : kNaN;
                rec.reason = o.reason;
                if (!rec.feasible) ++report.infeasible_records;
                report.records.push_back(std::move(rec));
            }
        }
    }
    try {
        report.aggregates = aggregate(report.records);
    } catch (const Error& e) {
        if (e.code() != Errc::EmptyAggregate) throw;
    }
    return report;
}

SweepReport run_sweep(const SweepPlan& plan, const SweepOptions& options) {
    plan.validate();
    const PerformanceModel model =
        make_performance_model(load_polar(plan.polar_path), plan.wave_coeff, plan.heading_step_deg);
    const EnvironmentField field = load_environment(plan.environment_path);
    return run_sweep(plan, model, field, options);
}

void write_sweep_records_csv(std::ostream& out, const std::vector<SweepRecord>& records) {
    out << "start_iso,dn,unc_percent,feasible,vt_hours,vt_normalized,reason\n";
    for (const auto& r : records) {
        const double norm = r.feasible ? r.vt_hours / r.vt_reference_hours : kNaN;
        std::string reason = r.reason;
        std::replace(reason.begin(), reason.end(), ',', ';');
        std::replace(reason.begin(), reason.end(), '\n', ' ');
        out << format_iso8601(r.start) << ',' << text::format_double(r.dn) << ','
            << text::format_double(r.unc_percent) << ',' << (r.feasible ? "true" : "false") << ','
            << text::format_double(r.vt_hours) << ',' << text::format_double(norm) << ',' << reason << '\n';
    }
}

void write_sweep_aggregates_csv(std::ostream& out, const SweepAggregates& aggregates) {
    out << "dn,unc_percent,paired_starts,infeasible,mean_vt,std_vt,mean_normalized,std_normalized\n";
    for (const auto& a : aggregates.per_unc) {
        out << text::format_double(a.dn) << ',' << text::format_double(a.unc_percent) << ',' << a.paired_starts << ','
            << a.infeasible << ',' << text::format_double(a.mean_vt) << ',' << text::format_double(a.std_vt) << ','
            << text::format_double(a.mean_normalized) << ',' << text::format_double(a.std_normalized) << '\n';
    }
}

void write_sweep_summary_json(std::ostream& out, const SweepReport& report) {
    using json = nlohmann::ordered_json;
    const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json doc;
    doc["records"] = report.records.size();
    doc["infeasible_records"] = report.infeasible_records;
    json paired = json::object();
    for (const auto& a : report.aggregates.per_unc) paired[text::format_double(a.dn)] = a.paired_starts;
    doc["paired_starts_by_dn"] = std::move(paired);
    json asym = json::array();
    for (const auto& a : report.aggregates.asymmetry) {
        asym.push_back({{"dn", a.dn},
                        {"offset_percent", a.offset_percent},
                        {"slowdown_hours", num(a.slowdown_hours)},
                        {"speedup_hours", num(a.speedup_hours)},
                        {"statistic", num(a.statistic)}});
    }
    doc["asymmetry"] = std::move(asym);
    out << doc.dump(2) << '\n';
}

void print_sweep_table(std::ostream& out, const SweepAggregates& aggregates) {
    char line[160];
    std::snprintf(line, sizeof line, "%8s %8s %7s %7s %12s %10s %10s %10s\n", "dn_nm", "unc_%", "paired", "infeas",
                  "mean_vt_h", "std_vt_h", "mean_norm", "std_norm");
    out << line;
    for (const auto& a : aggregates.per_unc) {
        std::snprintf(line, sizeof line, "%8.2f %8.2f %7zu %7zu %12.3f %10.3f %10.5f %10.5f\n", a.dn, a.unc_percent,
                      a.paired_starts, a.infeasible, a.mean_vt, a.std_vt, a.mean_normalized, a.std_normalized);
        out << line;
    }
}

} // namespace wxroute
