#include <doctest.h>

#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "support/fixtures.hpp"
#include "wxroute/error.hpp"
#include "wxroute/sweep.hpp"

using namespace wxroute;
using namespace wxroute::test;

namespace {

SweepPlan small_plan() {
    SweepPlan plan;
    plan.start = {0, 0};
    plan.finish = destination_point({0, 0}, 90.0, 100.0);
    plan.dn_list = {25.0};
    plan.unc_min_percent = 50.0;
    plan.unc_max_percent = 150.0;
    plan.unc_steps = 3;
    plan.start_times = {0.0};
    return plan;
}

SweepRecord rec(Hours start, double dn, double unc, double vt, double ref) {
    return {start, dn, unc, true, vt, ref, ""};
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

TEST_CASE("21 steps between 50% and 150% are 5% apart") {
    SweepPlan plan = small_plan();
    plan.unc_steps = 21;
    const auto levels = plan.unc_levels();
    REQUIRE(levels.size() == 21);
    CHECK(levels.front() == 50.0);
    CHECK(levels.back() == 150.0);
    CHECK(levels[10] == 100.0);
    for (std::size_t i = 1; i < levels.size(); ++i) CHECK(levels[i] - levels[i - 1] == doctest::Approx(5.0));

    plan.unc_steps = 1;
    plan.unc_min_percent = plan.unc_max_percent = 100.0;
    CHECK(plan.unc_levels() == std::vector<double>{100.0});
}

TEST_CASE("start window") {
    CHECK(start_window(0.0, 9.0, 3.0) == std::vector<Hours>{0, 3, 6, 9});
    CHECK(start_window(0.0, 10.0, 3.0) == std::vector<Hours>{0, 3, 6, 9});
    CHECK(start_window(5.0, 5.0, 72.0) == std::vector<Hours>{5});
    CHECK_THROWS_AS(start_window(0.0, 9.0, 0.0), Error);
    CHECK_THROWS_AS(start_window(9.0, 0.0, 3.0), Error);
}

TEST_CASE("plan validation") {
    const auto bad = [](auto mutate) {
        SweepPlan p = small_plan();
        mutate(p);
        return code_of([&] { p.validate(); });
    };
    CHECK(bad([](SweepPlan& p) { p.dn_list.clear(); }) == Errc::InvalidPlan);
    CHECK(bad([](SweepPlan& p) { p.dn_list = {20.0, 10.0}; }) == Errc::InvalidPlan);
    CHECK(bad([](SweepPlan& p) { p.unc_min_percent = 0.0; }) == Errc::InvalidPlan);
    CHECK(bad([](SweepPlan& p) { p.unc_max_percent = 40.0; }) == Errc::InvalidPlan);
    CHECK(bad([](SweepPlan& p) { p.unc_steps = 0; }) == Errc::InvalidPlan);
    CHECK(bad([](SweepPlan& p) { p.start_times.clear(); }) == Errc::InvalidPlan);
    CHECK(bad([](SweepPlan& p) { p.finish = p.start; }) == Errc::InvalidPlan);
}

TEST_CASE("degenerate sweep: one start, one spacing, one level") {
    SweepPlan plan = small_plan();
    plan.unc_steps = 1;
    plan.unc_min_percent = plan.unc_max_percent = 100.0;
    const SweepReport r = run_sweep(plan, make_performance_model(beam_reach_polar()), uniform_field());
    REQUIRE(r.records.size() == 1);
    CHECK(r.records[0].feasible);
    CHECK(r.records[0].vt_hours == doctest::Approx(20.0).epsilon(1e-9));
    CHECK(r.records[0].vt_reference_hours == r.records[0].vt_hours);
    REQUIRE(r.aggregates.per_unc.size() == 1);
    CHECK(r.aggregates.per_unc[0].mean_normalized == 1.0);
    CHECK(r.aggregates.per_unc[0].std_normalized == 0.0);
    CHECK(r.aggregates.asymmetry.empty());
}

TEST_CASE("static weather: V_t ratios are exactly 2, 1, 2/3") {
    const SweepReport r = run_sweep(small_plan(), make_performance_model(beam_reach_polar()), uniform_field());
    REQUIRE(r.records.size() == 3);
    const double ref = r.records[1].vt_hours;
    CHECK(r.records[0].vt_hours / ref == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r.records[1].vt_hours / ref == 1.0);
    CHECK(r.records[2].vt_hours / ref == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    // slowing down by 50% costs ref hours; speeding up gains ref / 3
    REQUIRE(r.aggregates.asymmetry.size() == 1);
    CHECK(r.aggregates.asymmetry[0].offset_percent == 50.0);
    CHECK(r.aggregates.asymmetry[0].statistic == doctest::Approx(ref - ref / 3.0).epsilon(1e-12));
}

TEST_CASE("a hidden 100% run normalises a level set without 100%") {
    SweepPlan plan = small_plan();
    plan.unc_steps = 2; // {50, 150}
    const SweepReport r = run_sweep(plan, make_performance_model(beam_reach_polar()), uniform_field());
    REQUIRE(r.records.size() == 2);
    CHECK(r.records[0].vt_reference_hours == doctest::Approx(20.0).epsilon(1e-9));
    CHECK(r.records[0].vt_hours / r.records[0].vt_reference_hours == doctest::Approx(2.0).epsilon(1e-12));
    REQUIRE(r.aggregates.asymmetry.size() == 1);
}

TEST_CASE("aggregate: normalised V_t 0.9 and 1.1 give mean 1, std 0.1") {
    const std::vector<SweepRecord> records = {
        rec(0, 10, 90, 9.0, 10.0), rec(0, 10, 100, 10.0, 10.0),
        rec(1, 10, 90, 22.0, 20.0), rec(1, 10, 100, 20.0, 20.0),
    };
    const SweepAggregates a = aggregate(records);
    REQUIRE(a.per_unc.size() == 2);
    CHECK(a.per_unc[0].unc_percent == 90.0);
    CHECK(a.per_unc[0].paired_starts == 2);
    CHECK(a.per_unc[0].mean_normalized == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(a.per_unc[0].std_normalized == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(a.per_unc[0].mean_vt == 15.5);
    CHECK(a.per_unc[0].std_vt == 6.5);
}

TEST_CASE("aggregate: asymmetry closed form and paired starts") {
    // start 0: 80 -> 13, 100 -> 10, 120 -> 8.5; start 1 likewise +2 h
    std::vector<SweepRecord> records;
    for (Hours s : {0.0, 1.0}) {
        const double off = s * 2.0;
        records.push_back(rec(s, 5, 80, 13.0 + off, 10.0 + off));
        records.push_back(rec(s, 5, 100, 10.0 + off, 10.0 + off));
        records.push_back(rec(s, 5, 120, 8.5 + off, 10.0 + off));
    }
    // start 2 is infeasible at 80%: excluded everywhere for this d_n
    records.push_back({2.0, 5, 80, false, NAN, 50.0, "no feasible route"});
    records.push_back(rec(2.0, 5, 100, 50.0, 50.0));
    records.push_back(rec(2.0, 5, 120, 40.0, 50.0));
    const SweepAggregates a = aggregate(records);
    REQUIRE(a.per_unc.size() == 3);
    CHECK(a.per_unc[0].paired_starts == 2);
    CHECK(a.per_unc[0].infeasible == 1);
    CHECK(a.per_unc[1].mean_vt == 11.0);
    REQUIRE(a.asymmetry.size() == 1);
    CHECK(a.asymmetry[0].offset_percent == doctest::Approx(20.0));
    CHECK(a.asymmetry[0].slowdown_hours == doctest::Approx(3.0));
    CHECK(a.asymmetry[0].speedup_hours == doctest::Approx(1.5));
    CHECK(a.asymmetry[0].statistic == doctest::Approx(1.5));

    CHECK(code_of([] { aggregate({}); }) == Errc::EmptyAggregate);
    CHECK(code_of([] { aggregate({{0, 5, 100, false, NAN, NAN, "x"}}); }) == Errc::EmptyAggregate);
}

TEST_CASE("no-go polar: every record infeasible, sweep completes") {
    SweepPlan plan = small_plan();
    plan.start_times = {0.0, 1.0};
    const SweepReport r = run_sweep(plan, make_performance_model(no_go_polar()), uniform_field());
    CHECK(r.records.size() == 6);
    CHECK(r.infeasible_records == 6);
    CHECK(r.aggregates.per_unc.empty());
    for (const auto& x : r.records) {
        CHECK_FALSE(x.feasible);
        CHECK(std::isnan(x.vt_hours));
        CHECK_FALSE(x.reason.empty());
    }
}

TEST_CASE("start outside the weather record is a plan error") {
    UniformSpec spec;
    spec.times = {0.0, 3.0};
    SweepPlan plan = small_plan();
    plan.start_times = {100.0};
    CHECK(code_of([&] { run_sweep(plan, make_performance_model(beam_reach_polar()), uniform_field(spec)); }) ==
          Errc::InvalidPlan);
}

TEST_CASE("route running off the weather record becomes an infeasible record") {
    UniformSpec spec;
    spec.times = {0.0, 3.0, 6.0, 9.0, 12.0, 15.0, 18.0, 21.0};
    const SweepReport r = run_sweep(small_plan(), make_performance_model(beam_reach_polar()), uniform_field(spec));
    REQUIRE(r.records.size() == 3);
    CHECK_FALSE(r.records[0].feasible); // 40 h at 50%
    CHECK(r.records[0].reason.find("OutOfDomain") != std::string::npos);
    CHECK(r.records[1].feasible);       // 20 h
    CHECK(r.records[2].feasible);
}

TEST_CASE("serial and parallel sweeps agree exactly") {
    const EnvironmentField f = functional_field(-4, 4, -4, 8, 1.0, 0.0, 60, [](double la, double lo, Hours t) -> std::array<double, 3> {
        const double ang = 0.4 * la - 0.3 * lo + 0.04 * t;
        return {12 * std::sin(ang), 12 * std::cos(ang), 1.0 + 0.2 * std::sin(0.05 * t)};
    });
    SweepPlan plan = small_plan();
    plan.finish = {1.0, 3.0};
    plan.dn_list = {30.0, 45.0};
    plan.unc_steps = 5;
    plan.start_times = {0.0, 6.0, 12.0, 24.0};
    const PerformanceModel m = make_performance_model(graded_polar(), kDefaultWaveCoeff, 2.0);
    const SweepReport serial = run_sweep(plan, m, f, {1});
    const SweepReport parallel = run_sweep(plan, m, f, {4});
    REQUIRE(serial.records.size() == 4 * 2 * 5);
    CHECK(serial.records == parallel.records);

    std::ostringstream a, b;
    write_sweep_summary_json(a, serial);
    write_sweep_summary_json(b, parallel);
    CHECK(a.str() == b.str());
}

TEST_CASE("sweep writers") {
    const SweepReport r = run_sweep(small_plan(), make_performance_model(beam_reach_polar()), uniform_field());
    std::ostringstream recs;
    write_sweep_records_csv(recs, r.records);
    CHECK(recs.str().rfind("start_iso,dn,unc_percent,feasible,vt_hours,vt_normalized,reason\n", 0) == 0);
    CHECK(recs.str().find("1970-01-01T00:00:00Z,25,100,true,") != std::string::npos);

    std::ostringstream agg;
    write_sweep_aggregates_csv(agg, r.aggregates);
    std::size_t lines = 0;
    for (char c : agg.str()) lines += c == '\n';
    CHECK(lines == 1 + 3);

    std::ostringstream js;
    write_sweep_summary_json(js, r);
    const auto doc = nlohmann::json::parse(js.str());
    CHECK(doc["infeasible_records"] == 0);

    std::ostringstream table;
    print_sweep_table(table, r.aggregates);
    CHECK(table.str().find("150") != std::string::npos);
}
