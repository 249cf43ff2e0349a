#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "wxroute/env.hpp"
#include "wxroute/error.hpp"
#include "wxroute/gci.hpp"
#include "wxroute/grid.hpp"
#include "wxroute/perf.hpp"
#include "wxroute/router.hpp"
#include "wxroute/sweep.hpp"
#include "wxroute/text.hpp"

namespace wxroute::cli {

namespace {

std::ofstream open_output(const std::filesystem::path& path) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::IoError, "cannot write " + path.string());
    return f;
}

void require(bool ok, const char* key) {
    if (!ok) throw Error(Errc::InvalidArgument, std::string("config key '") + key + "' is required");
}

PerformanceModel load_model(const RunConfig& cfg) {
    require(!cfg.polar.empty(), "polar");
    PerformanceModel m = make_performance_model(load_polar(cfg.polar), cfg.wave_coeff, cfg.heading_step_deg);
    return m;
}

EnvironmentField load_field(const RunConfig& cfg) {
    require(!cfg.environment.empty(), "environment");
    return load_environment(cfg.environment);
}

std::string fixed(double v, int digits = 6) {
    if (!std::isfinite(v)) return text::format_double(v);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, v);
    return buf;
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitError;
}

} // namespace

void apply_overrides(RunConfig& cfg, const Overrides& o) {
    if (o.dn.size() == 1) {
        cfg.dn = o.dn.front();
        cfg.dn_list = o.dn;
    } else if (!o.dn.empty()) {
        cfg.dn_list = o.dn;
        cfg.dn = o.dn.front();
    }
    if (!o.depart.empty()) {
        try {
            cfg.depart = parse_iso8601(o.depart);
        } catch (const Error& e) {
            throw Error(Errc::InvalidArgument, std::string("--depart: ") + e.what());
        }
    }
    if (o.unc_min) cfg.unc_min = *o.unc_min;
    if (o.unc_max) cfg.unc_max = *o.unc_max;
    if (o.unc_steps) cfg.unc_steps = *o.unc_steps;
    if (o.cadence_hours) {
        if (!cfg.start_window) {
            if (!cfg.depart) throw Error(Errc::InvalidArgument, "--cadence-hours needs config key 'start_window'");
            cfg.start_window = StartWindow{*cfg.depart, *cfg.depart, *o.cadence_hours};
        }
        cfg.start_window->cadence_hours = *o.cadence_hours;
        cfg.start_times.clear();
    }
    if (o.kw) cfg.wave_coeff = *o.kw;
    if (!o.out.empty()) cfg.output_dir = o.out;
    if (o.threads) cfg.threads = *o.threads;
}

int cmd_route(const RunConfig& cfg, std::ostream& out, std::ostream& err, bool dump_grid) {
    return guarded(err, [&] {
        require(cfg.start.has_value(), "start");
        require(cfg.finish.has_value(), "finish");
        require(cfg.dn.has_value(), "dn");
        require(cfg.depart.has_value(), "depart");
        const PerformanceModel model = load_model(cfg);
        const EnvironmentField field = load_field(cfg);
        const RoutingGrid grid = build_grid({*cfg.start, *cfg.finish, *cfg.dn});

        if (dump_grid) {
            auto f = open_output(cfg.output_dir / "grid.csv");
            grid.write_csv(f);
        }
        const RouteResult route = shortest_path(grid, model, field, *cfg.depart);
        {
            auto f = open_output(cfg.output_dir / "route.geojson");
            write_route_geojson(f, route);
        }
        {
            auto f = open_output(cfg.output_dir / "route.csv");
            write_route_csv(f, route);
        }
        if (!route.feasible) {
            out << "infeasible: no route from " << format_iso8601(route.depart) << " at d_n = "
                << text::format_double(*cfg.dn) << " nm\n";
            return static_cast<int>(kExitInfeasible);
        }
        out << "Vt = " << fixed(route.voyaging_time_hours) << " h  depart " << format_iso8601(route.depart)
            << "  arrive " << format_iso8601(route.path.back().arrival) << "  d_n = " << text::format_double(*cfg.dn)
            << " nm  ranks = " << grid.size() << '\n';
        return static_cast<int>(kExitOk);
    });
}

int cmd_gci(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        require(cfg.start.has_value(), "start");
        require(cfg.finish.has_value(), "finish");
        require(cfg.depart.has_value(), "depart");
        if (cfg.dn_list.size() != 3) {
            throw Error(Errc::InvalidArgument, "config key 'dn_list' must hold exactly three grid spacings");
        }
        if (!(cfg.gci_safety_factor > 0.0)) {
            throw Error(Errc::InvalidArgument, "config key 'gci_safety_factor' must be positive");
        }
        std::vector<double> dns = cfg.dn_list;
        std::sort(dns.begin(), dns.end());
        const PerformanceModel model = load_model(cfg);
        const EnvironmentField field = load_field(cfg);
        std::vector<RoutingGrid> grids;
        for (double dn : dns) grids.push_back(build_grid({*cfg.start, *cfg.finish, dn}));

        BatchEntry entry{*cfg.depart, {}};
        for (std::size_t i = 0; i < grids.size(); ++i) {
            const RouteResult r = shortest_path(grids[i], model, field, *cfg.depart);
            if (!r.feasible) {
                out << "infeasible: no route at d_n = " << text::format_double(dns[i]) << " nm\n";
                return static_cast<int>(kExitInfeasible);
            }
            entry.vt_by_dn[dns[i]] = r.voyaging_time_hours;
            out << "d_n = " << text::format_double(dns[i]) << " nm  Vt = " << fixed(r.voyaging_time_hours) << " h\n";
        }

        GridTriplet t;
        std::size_t k = 0;
        for (const auto& [dn, vt] : entry.vt_by_dn) t.grids[k++] = {dn, vt};
        const ConvergenceReport rep = analyze_convergence(t, cfg.gci_safety_factor);

        BatchResult row{*cfg.depart, rep, {}, t.grids[0].value};
        {
            auto f = open_output(cfg.output_dir / "convergence.csv");
            write_convergence_csv(f, {row});
        }
        {
            using json = nlohmann::ordered_json;
            const auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
            json doc;
            doc["depart"] = format_iso8601(*cfg.depart);
            doc["dn"] = dns;
            json vts = json::array();
            for (const auto& g : t.grids) vts.push_back(g.value);
            doc["vt_hours"] = std::move(vts);
            doc["p"] = num(rep.order_p);
            doc["f_ext"] = num(rep.f_extrapolated);
            doc["gci"] = num(rep.gci_fine);
            doc["converged"] = rep.converged;
            doc["monotone"] = rep.monotone;
            doc["exact"] = rep.exact;
            auto f = open_output(cfg.output_dir / "convergence.json");
            f << doc.dump(2) << '\n';
        }
        out << "p = " << fixed(rep.order_p) << "  Vt_ext = " << fixed(rep.f_extrapolated)
            << " h  GCI = " << fixed(rep.gci_fine, 7) << '\n';
        if (!rep.monotone) err << "warning: oscillatory convergence (monotone = false)\n";
        if (!rep.converged) err << "warning: observed order " << fixed(rep.order_p) << " is not above 1.0\n";
        return static_cast<int>(kExitOk);
    });
}

int cmd_gci_batch(const RunConfig& cfg, const std::string& batch_csv, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        std::ifstream in(batch_csv);
        if (!in) throw Error(Errc::IoError, "cannot open batch file " + batch_csv);
        const auto entries = read_batch_csv(in, batch_csv);
        const BatchConvergence batch = batch_convergence(entries, cfg.gci_safety_factor);
        {
            auto f = open_output(cfg.output_dir / "convergence.csv");
            write_convergence_csv(f, batch.results);
        }
        {
            auto f = open_output(cfg.output_dir / "convergence_summary.json");
            write_batch_summary_json(f, batch.summary);
        }
        for (const auto& r : batch.results) {
            if (!r.error.empty()) {
                err << "warning: " << format_iso8601(r.start) << ": " << r.error << '\n';
            } else if (!r.accepted()) {
                err << "warning: " << format_iso8601(r.start) << ": not converged"
                    << (r.report->monotone ? "" : " (oscillatory)") << '\n';
            }
        }
        const auto& s = batch.summary;
        out << "entries = " << s.entries << "  converged = " << s.accepted << " (" << fixed(100.0 * s.converged_fraction, 2)
            << "%)  mean GCI = " << fixed(s.mean_gci, 7) << "  mean Vt = " << fixed(s.mean_vt_hours, 3)
            << " h  mean error = " << fixed(s.mean_error_hours, 3) << " h\n";
        return static_cast<int>(kExitOk);
    });
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const SweepPlan plan = make_sweep_plan(cfg);
        plan.validate();
        const SweepReport report = run_sweep(plan, SweepOptions{cfg.threads});
        {
            auto f = open_output(cfg.output_dir / "sweep_records.csv");
            write_sweep_records_csv(f, report.records);
        }
        {
            auto f = open_output(cfg.output_dir / "sweep_aggregates.csv");
            write_sweep_aggregates_csv(f, report.aggregates);
        }
        {
            auto f = open_output(cfg.output_dir / "sweep_summary.json");
            write_sweep_summary_json(f, report);
        }
        print_sweep_table(out, report.aggregates);
        out << "records = " << report.records.size() << "  infeasible = " << report.infeasible_records << '\n';
        const bool any_paired = std::any_of(report.aggregates.per_unc.begin(), report.aggregates.per_unc.end(),
                                            [](const UncAggregate& a) { return a.paired_starts > 0; });
        if (!any_paired) {
            out << "infeasible: no start reaches the finish at every performance level\n";
            return static_cast<int>(kExitInfeasible);
        }
        return static_cast<int>(kExitOk);
    });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Minimum-time sailing routes with grid-convergence and performance-uncertainty analysis", "wxroute"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides o;
    std::string dn_text;
    bool dump_grid = false;
    std::string batch;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("-c,--config", config_path, "JSON run config (default: $WXROUTE_CONFIG)");
        sub->add_option("--dn", dn_text, "node spacing in nm, or a comma-separated list");
        sub->add_option("--depart", o.depart, "departure time, ISO-8601 UTC");
        sub->add_option("--kw", o.kw, "wave speed decrement per metre of Hs");
        sub->add_option("--out", o.out, "output directory");
        sub->add_option("--threads", o.threads, "worker threads (0 = all cores)");
    };
    auto* route = app.add_subcommand("route", "solve one minimum-time route");
    add_common(route);
    route->add_flag("--dump-grid", dump_grid, "also write grid.csv");
    auto* gci = app.add_subcommand("gci", "three-grid convergence study");
    add_common(gci);
    gci->add_option("--batch", batch, "analyse a start_iso,dn,vt_hours CSV instead of solving");
    auto* sweep = app.add_subcommand("sweep", "performance-uncertainty sweep");
    add_common(sweep);
    sweep->add_option("--unc-min", o.unc_min, "lowest performance level, %");
    sweep->add_option("--unc-max", o.unc_max, "highest performance level, %");
    sweep->add_option("--unc-steps", o.unc_steps, "number of performance levels");
    sweep->add_option("--cadence-hours", o.cadence_hours, "hours between departures in the start window");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitError;
    }

    return guarded(err, [&] {
        if (!dn_text.empty()) {
            for (const auto& f : text::split(dn_text, ',')) o.dn.push_back(text::parse_double(f, "--dn"));
        }
        RunConfig cfg;
        if (config_path.empty()) {
            if (const char* env = std::getenv(kConfigEnvVar)) config_path = env;
        }
        if (!config_path.empty()) cfg = load_run_config(config_path);
        apply_overrides(cfg, o);

        if (route->parsed()) return cmd_route(cfg, out, err, dump_grid);
        if (gci->parsed()) return batch.empty() ? cmd_gci(cfg, out, err) : cmd_gci_batch(cfg, batch, out, err);
        return cmd_sweep(cfg, out, err);
    });
}

} // namespace wxroute::cli
