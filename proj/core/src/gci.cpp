#include "wxroute/gci.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wxroute/error.hpp"
#include "wxroute/text.hpp"

namespace wxroute {

namespace {

constexpr double kMinRefinementRatio = 1.1;
constexpr double kOrderTol = 1e-10;
constexpr int kMaxFixedPointIterations = 200;
// Differences below this fraction of the solution magnitude are round-off
// (e.g. identical straight routes summed over different leg counts).
constexpr double kZeroDeltaRel = 1e-12;
constexpr double kOrderSearchMax = 60.0;
constexpr double kOrderSearchStep = 0.01;

struct OrderEquation {
    double log_ratio; // ln|e32 / e21|
    double s;         // sign(e32 / e21)
    double r21, r32;

    // ln|e32/e21| + ln((r21^p - s) / (r32^p - s)), which equals p ln r21 at
    // a genuine root.
    double rhs(double p) const {
        return log_ratio + std::log((std::pow(r21, p) - s) / (std::pow(r32, p) - s));
    }
    // The conventional fixed-point map, with the absolute value.
    double g(double p) const { return std::fabs(rhs(p)) / std::log(r21); }
    // A root of p = g(p) may come from the mirrored branch rhs(p) = -p ln r21.
    bool genuine(double p) const { return rhs(p) > 0.0; }
};

std::optional<double> fixed_point(const OrderEquation& eq, double p0, int& iterations) {
    double p = p0;
    for (iterations = 1; iterations <= kMaxFixedPointIterations; ++iterations) {
        const double next = eq.g(p);
        if (!std::isfinite(next) || next <= 0.0) return std::nullopt;
        if (std::fabs(next - p) < kOrderTol) return next;
        p = next;
    }
    return std::nullopt;
}

// Scans (0, kOrderSearchMax] for sign changes of F and refines each by
// bisection; returns the root closest to p0.
template <class Fn>
std::optional<double> bracketed(const Fn& F, double p0) {
    std::optional<double> best;
    double lo = kOrderSearchStep;
    double f_lo = F(lo);
    for (double hi = lo + kOrderSearchStep; hi <= kOrderSearchMax; hi += kOrderSearchStep) {
        const double f_hi = F(hi);
        if (std::isfinite(f_lo) && std::isfinite(f_hi) && (f_lo == 0.0 || (f_lo < 0.0) != (f_hi < 0.0))) {
            double a = lo, b = hi, fa = f_lo;
            for (int i = 0; i < 200 && b - a > 1e-14 * b; ++i) {
                const double m = 0.5 * (a + b);
                const double fm = F(m);
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = m;
                    fa = fm;
                } else {
                    b = m;
                }
            }
            const double root = 0.5 * (a + b);
            if (!best || std::fabs(root - p0) < std::fabs(*best - p0)) best = root;
        }
        lo = hi;
        f_lo = f_hi;
    }
    return best;
}

// Observed order: fixed-point iteration first; if it fails or lands on the
// mirrored branch, bracket the signed equation, and only then the
// absolute-value form.
std::optional<double> solve_order(const OrderEquation& eq, double p0, int& iterations) {
    std::optional<double> p;
    if (p0 > 0.0) p = fixed_point(eq, p0, iterations);
    if (p && eq.genuine(*p)) return p;
    const double ln_r21 = std::log(eq.r21);
    if (auto q = bracketed([&](double x) { return x * ln_r21 - eq.rhs(x); }, p0)) return q;
    if (p) return p;
    return bracketed([&](double x) { return x - eq.g(x); }, p0);
}

} // namespace

void GridTriplet::validate() const {
    for (const auto& g : grids) {
        if (!std::isfinite(g.h) || !std::isfinite(g.value) || g.h <= 0.0) {
            throw Error(Errc::InvalidTriplet, "grid sizes must be positive and solutions finite");
        }
    }
    const double r21 = grids[1].h / grids[0].h;
    const double r32 = grids[2].h / grids[1].h;
    if (!(r21 > kMinRefinementRatio) || !(r32 > kMinRefinementRatio)) {
        std::ostringstream os;
        os << "refinement ratios " << r21 << ", " << r32 << " must both exceed " << kMinRefinementRatio;
        throw Error(Errc::InvalidTriplet, os.str());
    }
    if (grids[0].value == 0.0) throw Error(Errc::InvalidTriplet, "fine-grid solution is zero");
}

ConvergenceReport analyze_convergence(const GridTriplet& triplet, double safety_factor) {
    triplet.validate();
    if (!(safety_factor > 0.0)) throw Error(Errc::InvalidArgument, "GCI safety factor must be positive");

    const double f1 = triplet.grids[0].value;
    const double f2 = triplet.grids[1].value;
    const double f3 = triplet.grids[2].value;
    const double r21 = triplet.grids[1].h / triplet.grids[0].h;
    const double r32 = triplet.grids[2].h / triplet.grids[1].h;

    const double scale = std::max({std::fabs(f1), std::fabs(f2), std::fabs(f3)});
    double e21 = f2 - f1;
    double e32 = f3 - f2;
    if (std::fabs(e21) <= kZeroDeltaRel * scale) e21 = 0.0;
    if (std::fabs(e32) <= kZeroDeltaRel * scale) e32 = 0.0;

    ConvergenceReport rep;
    if (e21 == 0.0 && e32 == 0.0) {
        rep.order_p = std::numeric_limits<double>::quiet_NaN();
        rep.f_extrapolated = f1;
        rep.gci_fine = 0.0;
        rep.converged = true;
        rep.monotone = true;
        rep.exact = true;
        return rep;
    }
    if (e21 == 0.0 || e32 == 0.0) {
        throw Error(Errc::NoConvergence, "one grid pair agrees exactly while the other does not");
    }

    const double ratio = e32 / e21;
    const OrderEquation eq{std::log(std::fabs(ratio)), ratio > 0.0 ? 1.0 : -1.0, r21, r32};
    const double p0 = std::fabs(eq.log_ratio) / std::log(r21);

    const std::optional<double> p = solve_order(eq, p0, rep.iterations);
    if (!p || !(*p > 0.0)) {
        std::ostringstream os;
        os << "no observed order of convergence for (" << f1 << ", " << f2 << ", " << f3 << ")";
        throw Error(Errc::NoConvergence, os.str());
    }

    const double rp = std::pow(r21, *p);
    rep.order_p = *p;
    rep.f_extrapolated = (rp * f1 - f2) / (rp - 1.0);
    rep.gci_fine = safety_factor * std::fabs((f1 - f2) / f1) / (rp - 1.0);
    rep.monotone = e21 * e32 > 0.0;
    rep.converged = *p > kMinConvergedOrder;
    return rep;
}

BatchConvergence batch_convergence(const std::vector<BatchEntry>& entries, double safety_factor) {
    BatchConvergence out;
    out.results.reserve(entries.size());

    std::optional<std::vector<double>> reference_dns;
    for (const auto& e : entries) {
        if (e.vt_by_dn.size() == 3) {
            reference_dns.emplace();
            for (const auto& [dn, vt] : e.vt_by_dn) reference_dns->push_back(dn);
            break;
        }
    }

    double gci_sum = 0.0;
    double vt_sum = 0.0;
    for (const auto& e : entries) {
        BatchResult r;
        r.start = e.start;
        try {
            if (e.vt_by_dn.size() != 3) throw Error(Errc::InvalidTriplet, "entry needs exactly three grid sizes");
            std::vector<double> dns;
            for (const auto& [dn, vt] : e.vt_by_dn) dns.push_back(dn);
            if (dns != *reference_dns) throw Error(Errc::InvalidTriplet, "entry uses different grid sizes");

            GridTriplet t;
            std::size_t k = 0;
            for (const auto& [dn, vt] : e.vt_by_dn) t.grids[k++] = {dn, vt};
            r.vt_fine = t.grids[0].value;
            r.report = analyze_convergence(t, safety_factor);
        } catch (const Error& err) {
            r.error = err.what();
        }
        if (r.accepted()) {
            ++out.summary.accepted;
            gci_sum += r.report->gci_fine;
            vt_sum += r.vt_fine;
        }
        out.results.push_back(std::move(r));
    }

    auto& s = out.summary;
    s.entries = entries.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();
    s.converged_fraction = s.entries ? static_cast<double>(s.accepted) / static_cast<double>(s.entries) : nan;
    s.mean_gci = s.accepted ? gci_sum / static_cast<double>(s.accepted) : nan;
    s.mean_vt_hours = s.accepted ? vt_sum / static_cast<double>(s.accepted) : nan;
    s.mean_error_hours = s.mean_gci * s.mean_vt_hours;
    return out;
}

std::vector<BatchEntry> read_batch_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    std::vector<BatchEntry> entries;
    std::map<double, std::size_t> index_of_start;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto f = text::split(line, ',');
        const std::string where = source + " line " + std::to_string(line_no);
        if (!header_seen) {
            if (f.size() != 3 || f[0] != "start_iso" || f[1] != "dn" || f[2] != "vt_hours") {
                throw Error(Errc::FormatError, where + ": expected header start_iso,dn,vt_hours");
            }
            header_seen = true;
            continue;
        }
        if (f.size() != 3) throw Error(Errc::FormatError, where + ": expected 3 fields");
        const Hours start = parse_iso8601(f[0]);
        const double dn = text::parse_double(f[1], where);
        const double vt = text::parse_double(f[2], where);
        auto [it, inserted] = index_of_start.try_emplace(start, entries.size());
        if (inserted) entries.push_back({start, {}});
        auto& bucket = entries[it->second].vt_by_dn;
        if (!bucket.emplace(dn, vt).second) {
            throw Error(Errc::FormatError, where + ": duplicate dn for the same start");
        }
    }
    if (!header_seen) throw Error(Errc::FormatError, source + ": empty batch file");
    return entries;
}

void write_convergence_csv(std::ostream& out, const std::vector<BatchResult>& results) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out << "start_iso,p,f_ext,gci,converged,monotone\n";
    for (const auto& r : results) {
        const bool ok = r.report.has_value();
        out << format_iso8601(r.start) << ',' << text::format_double(ok ? r.report->order_p : nan) << ','
            << text::format_double(ok ? r.report->f_extrapolated : nan) << ','
            << text::format_double(ok ? r.report->gci_fine : nan) << ','
            << ((ok && r.report->converged) ? "true" : "false") << ','
            << ((ok && r.report->monotone) ? "true" : "false") << '\n';
    }
}

void write_batch_summary_json(std::ostream& out, const BatchSummary& s) {
    using json = nlohmann::ordered_json;
    const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    json doc;
    doc["entries"] = s.entries;
    doc["converged"] = s.accepted;
    doc["converged_fraction"] = num(s.converged_fraction);
    doc["mean_gci"] = num(s.mean_gci);
    doc["mean_vt_hours"] = num(s.mean_vt_hours);
    doc["mean_error_hours"] = num(s.mean_error_hours);
    out << doc.dump(2) << '\n';
}

} // namespace wxroute
