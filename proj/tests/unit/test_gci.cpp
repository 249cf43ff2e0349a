#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wxroute/error.hpp"
#include "wxroute/gci.hpp"

using namespace wxroute;

namespace {

// Solutions sampled from f(h) = f0 + c * h^p: the exact answer is known.
GridTriplet power_law(double f0, double c, double p, double h1, double h2, double h3) {
    const auto f = [&](double h) { return f0 + c * std::pow(h, p); };
    return {{{{h1, f(h1)}, {h2, f(h2)}, {h3, f(h3)}}}};
}

Errc code_of(const auto& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an Error");
    return Errc::InvalidArgument;
}

} // namespace

TEST_CASE("second-order series (101, 104, 116) at h = 1, 2, 4") {
    const ConvergenceReport r = analyze_convergence({{{{1, 101}, {2, 104}, {4, 116}}}});
    CHECK(r.order_p == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.f_extrapolated == doctest::Approx(100.0).epsilon(1e-12));
    CHECK(r.gci_fine == doctest::Approx(1.25 * (3.0 / 101.0) / 3.0).epsilon(1e-12));
    CHECK(r.gci_fine == doctest::Approx(0.012376).epsilon(1e-4));
    CHECK(r.converged);
    CHECK(r.monotone);
    CHECK_FALSE(r.exact);
}

TEST_CASE("non-constant ratio: h^1.5 at h = 5, 10, 15") {
    const ConvergenceReport r = analyze_convergence(power_law(40.0, 0.02, 1.5, 5, 10, 15));
    CHECK(r.order_p == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(r.f_extrapolated == doctest::Approx(40.0).epsilon(1e-9));
    CHECK(r.converged);
}

TEST_CASE("exact convergence") {
    const ConvergenceReport r = analyze_convergence({{{{10, 50}, {20, 50}, {40, 50}}}});
    CHECK(r.exact);
    CHECK(std::isnan(r.order_p));
    CHECK(r.gci_fine == 0.0);
    CHECK(r.f_extrapolated == 50.0);
    CHECK(r.converged);
}

TEST_CASE("one vanishing difference is not a convergence order") {
    CHECK(code_of([] { analyze_convergence({{{{10, 50}, {20, 50}, {40, 51}}}}); }) == Errc::NoConvergence);
    CHECK(code_of([] { analyze_convergence({{{{10, 50}, {20, 51}, {40, 51}}}}); }) == Errc::NoConvergence);
}

TEST_CASE("oscillatory triplets are reported, not accepted") {
    const ConvergenceReport r = analyze_convergence({{{{10, 100}, {20, 101}, {40, 97}}}});
    CHECK_FALSE(r.monotone);
    CHECK(r.order_p == doctest::Approx(std::log(4.0) / std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("low observed order is not converged") {
    const ConvergenceReport r = analyze_convergence(power_law(10.0, 1.0, 0.5, 1, 2, 4));
    CHECK(r.order_p == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(r.converged);
    CHECK(r.monotone);
}

TEST_CASE("triplet validation") {
    CHECK(code_of([] { analyze_convergence({{{{2, 1}, {1, 2}, {4, 3}}}}); }) == Errc::InvalidTriplet);
    CHECK(code_of([] { analyze_convergence({{{{1, 1}, {1.05, 2}, {4, 3}}}}); }) == Errc::InvalidTriplet);
    CHECK(code_of([] { analyze_convergence({{{{1, NAN}, {2, 2}, {4, 3}}}}); }) == Errc::InvalidTriplet);
    CHECK(code_of([] { analyze_convergence({{{{1, 0}, {2, 2}, {4, 3}}}}); }) == Errc::InvalidTriplet);
    CHECK(code_of([] { analyze_convergence({{{{1, 101}, {2, 104}, {4, 116}}}}, 0.0); }) == Errc::InvalidArgument);
}

TEST_CASE("constant refinement ratio matches the closed form") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> f0(10.0, 500.0), c(-5.0, 5.0), p(0.6, 4.0), r(1.2, 3.0), h(0.5, 20.0);
    for (int i = 0; i < 200; ++i) {
        const double h1 = h(rng), ratio = r(rng), cc = c(rng);
        const GridTriplet t = power_law(f0(rng), cc, p(rng), h1, h1 * ratio, h1 * ratio * ratio);
        const double f1 = t.grids[0].value, f2 = t.grids[1].value, f3 = t.grids[2].value;
        const double closed_p = std::log((f3 - f2) / (f2 - f1)) / std::log(ratio);
        const ConvergenceReport rep = analyze_convergence(t);
        CHECK(rep.order_p == doctest::Approx(closed_p).epsilon(1e-10));
    }
}

TEST_CASE("power-law series recover order and limit for random ratios") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> f0(10.0, 500.0), c(0.01, 3.0), p(0.5, 4.0), r(1.15, 3.0), h(0.5, 20.0);
    std::bernoulli_distribution sign(0.5);
    for (int i = 0; i < 300; ++i) {
        const double h1 = h(rng), h2 = h1 * r(rng), h3 = h2 * r(rng);
        const double order = p(rng), limit = f0(rng), coeff = sign(rng) ? c(rng) : -c(rng);
        const GridTriplet t = power_law(limit, coeff, order, h1, h2, h3);
        const ConvergenceReport rep = analyze_convergence(t);
        CHECK(rep.order_p == doctest::Approx(order).epsilon(1e-6));
        CHECK(rep.f_extrapolated == doctest::Approx(limit).epsilon(1e-6));
        CHECK(rep.monotone);
    }
}

TEST_CASE("scale invariance: multiplying all values by a constant keeps p and gci") {
    const GridTriplet base = power_law(60.0, 0.3, 1.7, 10, 15, 30);
    const ConvergenceReport a = analyze_convergence(base);
    for (double k : {1e-3, 0.5, 7.0, 1e4}) {
        GridTriplet t = base;
        for (auto& g : t.grids) g.value *= k;
        const ConvergenceReport b = analyze_convergence(t);
        CHECK(b.order_p == doctest::Approx(a.order_p).epsilon(1e-9));
        CHECK(b.gci_fine == doctest::Approx(a.gci_fine).epsilon(1e-9));
        CHECK(b.f_extrapolated == doctest::Approx(k * a.f_extrapolated).epsilon(1e-9));
    }
}

TEST_CASE("batch convergence summary") {
    std::vector<BatchEntry> entries;
    for (int i = 0; i < 4; ++i) {
        entries.push_back({static_cast<Hours>(i), {{1.0, 101.0 + i}, {2.0, 104.0 + i}, {4.0, 116.0 + i}}});
    }
    entries.push_back({10.0, {{1.0, 100.0}, {2.0, 101.0}, {4.0, 97.0}}}); // oscillatory
    entries.push_back({11.0, {{1.0, 100.0}, {2.0, 101.0}}});              // too few grids
    const BatchConvergence b = batch_convergence(entries);
    REQUIRE(b.results.size() == 6);
    CHECK(b.summary.entries == 6);
    CHECK(b.summary.accepted == 4);
    CHECK(b.summary.converged_fraction == doctest::Approx(4.0 / 6.0));
    CHECK(b.summary.mean_vt_hours == doctest::Approx(102.5));
    CHECK_FALSE(b.results[4].accepted());
    CHECK(b.results[4].report.has_value());
    CHECK_FALSE(b.results[5].error.empty());
    CHECK(b.summary.mean_error_hours == doctest::Approx(b.summary.mean_gci * b.summary.mean_vt_hours));
}

TEST_CASE("batch CSV in, convergence CSV and JSON out") {
    std::istringstream in("start_iso,dn,vt_hours\n"
                          "1985-01-01T00:00:00Z,4,116\n"
                          "1985-01-01T00:00:00Z,1,101\n"
                          "1985-01-01T00:00:00Z,2,104\n"
                          "1985-01-04T00:00:00Z,1,100\n"
                          "1985-01-04T00:00:00Z,2,101\n"
                          "1985-01-04T00:00:00Z,4,97\n");
    const auto entries = read_batch_csv(in);
    REQUIRE(entries.size() == 2);
    CHECK(entries[0].vt_by_dn.size() == 3);
    const BatchConvergence b = batch_convergence(entries);

    std::ostringstream csv;
    write_convergence_csv(csv, b.results);
    CHECK(csv.str().rfind("start_iso,p,f_ext,gci,converged,monotone\n1985-01-01T00:00:00Z,2,100,", 0) == 0);

    std::ostringstream js;
    write_batch_summary_json(js, b.summary);
    const auto doc = nlohmann::json::parse(js.str());
    CHECK(doc["entries"] == 2);
    CHECK(doc["converged"] == 1);

    std::istringstream bad("start_iso,dn,vt_hours\nnot-a-date,1,2\n");
    CHECK(code_of([&] { read_batch_csv(bad); }) == Errc::FormatError);
    std::istringstream headerless("1985-01-01,1,2\n");
    CHECK(code_of([&] { read_batch_csv(headerless); }) == Errc::FormatError);
}
