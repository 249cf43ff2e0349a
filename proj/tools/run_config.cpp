#include "run_config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "wxroute/error.hpp"

namespace wxroute::cli {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad_key(const std::string& source, const std::string& key, const std::string& why) {
    throw Error(Errc::InvalidArgument, source + ": config key '" + key + "' " + why);
}

double number(const json& doc, const std::string& key, const std::string& source) {
    const auto& v = doc.at(key);
    if (!v.is_number()) bad_key(source, key, "must be a number");
    return v.get<double>();
}

std::filesystem::path path_of(const json& doc, const std::string& key, const std::filesystem::path& base,
                              const std::string& source) {
    const auto& v = doc.at(key);
    if (!v.is_string()) bad_key(source, key, "must be a path string");
    std::filesystem::path p = v.get<std::string>();
    return p.is_absolute() ? p : base / p;
}

Hours timestamp(const json& v, const std::string& key, const std::string& source) {
    if (!v.is_string()) bad_key(source, key, "must be an ISO-8601 string");
    try {
        return parse_iso8601(v.get<std::string>());
    } catch (const Error& e) {
        bad_key(source, key, e.what());
    }
}

GeoPoint point(const json& doc, const std::string& key, const std::string& source) {
    const auto& v = doc.at(key);
    if (!v.is_object() || !v.contains("lat") || !v.contains("lon") || !v["lat"].is_number() ||
        !v["lon"].is_number()) {
        bad_key(source, key, "must be an object {\"lat\": deg, \"lon\": deg}");
    }
    try {
        return GeoPoint(v["lat"].get<double>(), v["lon"].get<double>());
    } catch (const Error& e) {
        bad_key(source, key, e.what());
    }
}

} // namespace

RunConfig parse_run_config(const std::string& json_text, const std::filesystem::path& base, const std::string& source) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw Error(Errc::FormatError, source + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::FormatError, source + ": config must be a JSON object");

    static const std::vector<std::string> known = {
        "polar", "environment", "output_dir", "start", "finish", "dn", "dn_list", "depart", "wave_coeff",
        "heading_step_deg", "gci_safety_factor", "unc", "start_times", "start_window", "threads"};
    for (const auto& [key, value] : doc.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) bad_key(source, key, "is not recognised");
    }

    RunConfig cfg;
    if (doc.contains("polar")) cfg.polar = path_of(doc, "polar", base, source);
    if (doc.contains("environment")) cfg.environment = path_of(doc, "environment", base, source);
    cfg.output_dir = doc.contains("output_dir") ? path_of(doc, "output_dir", base, source) : base;
    if (doc.contains("start")) cfg.start = point(doc, "start", source);
    if (doc.contains("finish")) cfg.finish = point(doc, "finish", source);
    if (doc.contains("dn")) cfg.dn = number(doc, "dn", source);
    if (doc.contains("dn_list")) {
        if (!doc["dn_list"].is_array()) bad_key(source, "dn_list", "must be an array of numbers");
        for (const auto& v : doc["dn_list"]) {
            if (!v.is_number()) bad_key(source, "dn_list", "must be an array of numbers");
            cfg.dn_list.push_back(v.get<double>());
        }
    }
    if (doc.contains("depart")) cfg.depart = timestamp(doc["depart"], "depart", source);
    if (doc.contains("wave_coeff")) cfg.wave_coeff = number(doc, "wave_coeff", source);
    if (doc.contains("heading_step_deg")) cfg.heading_step_deg = number(doc, "heading_step_deg", source);
    if (doc.contains("gci_safety_factor")) cfg.gci_safety_factor = number(doc, "gci_safety_factor", source);
    if (doc.contains("unc")) {
        const auto& u = doc["unc"];
        if (!u.is_object()) bad_key(source, "unc", "must be an object {min, max, steps}");
        if (u.contains("min")) cfg.unc_min = number(u, "min", source + " unc");
        if (u.contains("max")) cfg.unc_max = number(u, "max", source + " unc");
        if (u.contains("steps")) {
            if (!u["steps"].is_number_integer()) bad_key(source, "unc.steps", "must be an integer");
            cfg.unc_steps = u["steps"].get<int>();
        }
    }
    if (doc.contains("start_times")) {
        if (!doc["start_times"].is_array()) bad_key(source, "start_times", "must be an array of ISO-8601 strings");
        for (const auto& v : doc["start_times"]) cfg.start_times.push_back(timestamp(v, "start_times", source));
    }
    if (doc.contains("start_window")) {
        const auto& w = doc["start_window"];
        if (!w.is_object() || !w.contains("first") || !w.contains("last")) {
            bad_key(source, "start_window", "must be an object {first, last, cadence_hours}");
        }
        StartWindow sw;
        sw.first = timestamp(w["first"], "start_window.first", source);
        sw.last = timestamp(w["last"], "start_window.last", source);
        if (w.contains("cadence_hours")) sw.cadence_hours = number(w, "cadence_hours", source + " start_window");
        cfg.start_window = sw;
    }
    if (doc.contains("threads")) {
        if (!doc["threads"].is_number_unsigned()) bad_key(source, "threads", "must be a non-negative integer");
        cfg.threads = doc["threads"].get<unsigned>();
    }
    return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open config file " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str(), path.parent_path().empty() ? "." : path.parent_path(), path.string());
}

std::vector<Hours> resolve_start_times(const RunConfig& cfg) {
    if (!cfg.start_times.empty()) return cfg.start_times;
    if (cfg.start_window) {
        return start_window(cfg.start_window->first, cfg.start_window->last, cfg.start_window->cadence_hours);
    }
    if (cfg.depart) return {*cfg.depart};
    throw Error(Errc::InvalidArgument, "config needs 'start_times', 'start_window' or 'depart'");
}

SweepPlan make_sweep_plan(const RunConfig& cfg) {
    if (!cfg.start) throw Error(Errc::InvalidArgument, "config key 'start' is required");
    if (!cfg.finish) throw Error(Errc::InvalidArgument, "config key 'finish' is required");
    SweepPlan plan;
    plan.start = *cfg.start;
    plan.finish = *cfg.finish;
    plan.dn_list = cfg.dn_list;
    if (plan.dn_list.empty() && cfg.dn) plan.dn_list.push_back(*cfg.dn);
    plan.unc_min_percent = cfg.unc_min;
    plan.unc_max_percent = cfg.unc_max;
    plan.unc_steps = cfg.unc_steps;
    plan.start_times = resolve_start_times(cfg);
    plan.polar_path = cfg.polar;
    plan.environment_path = cfg.environment;
    plan.wave_coeff = cfg.wave_coeff;
    plan.heading_step_deg = cfg.heading_step_deg;
    return plan;
}

} // namespace wxroute::cli
