#include "wxroute/env.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "wxroute/error.hpp"
#include "wxroute/text.hpp"

namespace wxroute {

namespace {

constexpr std::array<std::string_view, kVariableCount> kNames = {"wind_u", "wind_v", "wave_hs", "current_u",
                                                                  "current_v"};

// Reanalysis time stamps are whole seconds; anything tighter than this is
// round-off from the seconds -> hours conversion.
constexpr double kTimeUniformityTolH = 1e-6;

bool strictly_monotone(const std::vector<double>& axis) {
    if (axis.size() < 2) return false;
    const bool up = axis[1] > axis[0];
    for (std::size_t i = 1; i < axis.size(); ++i) {
        if (up ? !(axis[i] > axis[i - 1]) : !(axis[i] < axis[i - 1])) return false;
    }
    return true;
}

// Returns the lower index of the bracketing interval and the weight of the
// upper node, or nullopt outside the axis.
std::optional<std::pair<std::size_t, double>> bracket(const std::vector<double>& axis, double x) {
    const std::size_t n = axis.size();
    const bool up = axis.back() > axis.front();
    const double lo = up ? axis.front() : axis.back();
    const double hi = up ? axis.back() : axis.front();
    if (!(x >= lo && x <= hi)) return std::nullopt;

    std::size_t i = 0;
    if (up) {
        auto it = std::upper_bound(axis.begin(), axis.end(), x);
        i = static_cast<std::size_t>(std::distance(axis.begin(), it));
    } else {
        auto it = std::upper_bound(axis.begin(), axis.end(), x, std::greater<>());
        i = static_cast<std::size_t>(std::distance(axis.begin(), it));
    }
    // i is the first node strictly past x; step back to the interval start.
    i = (i == 0) ? 0 : i - 1;
    if (i >= n - 1) i = n - 2;
    const double w = (x - axis[i]) / (axis[i + 1] - axis[i]);
    return std::make_pair(i, w);
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Layer read_layer_csv(const std::filesystem::path& path, std::size_t rows, std::size_t cols) {
    std::istringstream in(slurp(path));
    Layer values;
    values.reserve(rows * cols);
    std::string line;
    std::size_t row = 0;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        const auto fields = text::split(line, ',');
        if (fields.size() != cols) {
            std::ostringstream os;
            os << path.string() << " line " << line_no << ": " << fields.size() << " columns, lon_axis has " << cols;
            throw Error(Errc::AxisMismatch, os.str());
        }
        for (const auto& f : fields) {
            const double v = text::parse_double(f, path.string() + " line " + std::to_string(line_no));
            if (!std::isfinite(v)) throw Error(Errc::FormatError, path.string() + ": non-finite value");
            values.push_back(v);
        }
        ++row;
    }
    if (row != rows) {
        std::ostringstream os;
        os << path.string() << ": " << row << " rows, lat_axis has " << rows;
        throw Error(Errc::AxisMismatch, os.str());
    }
    return values;
}

std::vector<double> read_axis(const nlohmann::json& doc, const char* key, const std::string& where) {
    if (!doc.contains(key) || !doc[key].is_array()) {
        throw Error(Errc::FormatError, where + ": missing array '" + key + "'");
    }
    std::vector<double> axis;
    for (const auto& v : doc[key]) {
        if (!v.is_number()) throw Error(Errc::FormatError, where + ": non-numeric entry in '" + key + "'");
        axis.push_back(v.get<double>());
    }
    return axis;
}

} // namespace

std::string_view variable_name(Variable v) noexcept { return kNames[static_cast<std::size_t>(v)]; }

std::optional<Variable> variable_from_name(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kNames.size(); ++i) {
        if (kNames[i] == name) return static_cast<Variable>(i);
    }
    return std::nullopt;
}

EnvironmentField::EnvironmentField(std::vector<double> lat_axis, std::vector<double> lon_axis,
                                   std::vector<Hours> time_axis, std::array<std::vector<Layer>, kVariableCount> layers)
    : lat_axis_(std::move(lat_axis)), lon_axis_(std::move(lon_axis)), time_axis_(std::move(time_axis)),
      layers_(std::move(layers)) {
    if (!strictly_monotone(lat_axis_)) throw Error(Errc::FormatError, "lat_axis must be strictly monotone with >= 2 entries");
    if (!strictly_monotone(lon_axis_)) throw Error(Errc::FormatError, "lon_axis must be strictly monotone with >= 2 entries");
    for (double lat : lat_axis_) {
        if (!(lat >= -90.0 && lat <= 90.0)) throw Error(Errc::FormatError, "lat_axis value outside [-90, 90]");
    }
    if (std::fabs(lon_axis_.back() - lon_axis_.front()) > 360.0) {
        throw Error(Errc::FormatError, "lon_axis spans more than 360 degrees");
    }
    if (time_axis_.empty()) throw Error(Errc::FormatError, "time_axis is empty");
    for (std::size_t k = 1; k < time_axis_.size(); ++k) {
        if (!(time_axis_[k] > time_axis_[k - 1])) throw Error(Errc::FormatError, "time_axis must be strictly increasing");
    }
    if (time_axis_.size() > 1) {
        step_ = time_axis_[1] - time_axis_[0];
        for (std::size_t k = 2; k < time_axis_.size(); ++k) {
            const double dt = time_axis_[k] - time_axis_[k - 1];
            if (std::fabs(dt - step_) > kTimeUniformityTolH) {
                std::ostringstream os;
                os << "time step " << k << " is " << dt << " h after its predecessor, expected " << step_ << " h";
                throw Error(Errc::GapInTime, os.str());
            }
        }
    }

    const std::size_t cells = lat_axis_.size() * lon_axis_.size();
    for (std::size_t v = 0; v < kVariableCount; ++v) {
        const auto& series = layers_[v];
        const auto name = std::string(kNames[v]);
        const bool optional = v == static_cast<std::size_t>(Variable::CurrentU) ||
                              v == static_cast<std::size_t>(Variable::CurrentV);
        if (series.empty()) {
            if (optional) continue;
            throw Error(Errc::AxisMismatch, "missing layers for variable " + name);
        }
        if (series.size() != time_axis_.size()) {
            std::ostringstream os;
            os << name << " has " << series.size() << " time steps, time_axis has " << time_axis_.size();
            throw Error(Errc::AxisMismatch, os.str());
        }
        for (const auto& layer : series) {
            if (layer.size() != cells) throw Error(Errc::AxisMismatch, name + " layer size differs from lat x lon");
            for (double x : layer) {
                if (!std::isfinite(x)) throw Error(Errc::FormatError, name + " contains a non-finite value");
                if (v == static_cast<std::size_t>(Variable::WaveHs) && x < 0.0) {
                    throw Error(Errc::FormatError, "wave_hs contains a negative height");
                }
            }
        }
    }
    if (has(Variable::CurrentU) != has(Variable::CurrentV)) {
        throw Error(Errc::AxisMismatch, "current_u and current_v must be declared together");
    }
}

Hours EnvironmentField::valid_from() const noexcept {
    if (time_axis_.size() == 1) return -std::numeric_limits<double>::infinity();
    return time_axis_.front() - step_ / 2.0;
}

Hours EnvironmentField::valid_until() const noexcept {
    if (time_axis_.size() == 1) return std::numeric_limits<double>::infinity();
    return time_axis_.back() + step_ / 2.0;
}

std::size_t EnvironmentField::time_index(Hours t) const {
    if (!covers_time(t)) {
        std::ostringstream os;
        os << "time " << (std::isfinite(t) ? format_iso8601(t) : std::string("non-finite"))
           << " outside the weather record " << format_iso8601(time_axis_.front()) << " .. "
           << format_iso8601(time_axis_.back());
        throw Error(Errc::OutOfDomain, os.str());
    }
    if (time_axis_.size() == 1) return 0;
    const double frac = (t - time_axis_.front()) / step_;
    // ceil(x - 0.5) rounds to nearest with exact halves going down
    const double k = std::ceil(frac - 0.5);
    if (k <= 0.0) return 0;
    const auto idx = static_cast<std::size_t>(k);
    return std::min(idx, time_axis_.size() - 1);
}

EnvironmentField::Cell EnvironmentField::locate(const GeoPoint& p) const {
    const auto by = bracket(lat_axis_, p.lat());
    std::optional<std::pair<std::size_t, double>> bx;
    for (double shift : {0.0, 360.0, -360.0}) {
        bx = bracket(lon_axis_, p.lon() + shift);
        if (bx) break;
    }
    if (!by || !bx) {
        std::ostringstream os;
        os << "point (" << p.lat() << ", " << p.lon() << ") outside the weather lattice";
        throw Error(Errc::OutOfDomain, os.str());
    }
    return {by->first, by->first + 1, bx->first, bx->first + 1, by->second, bx->second};
}

double EnvironmentField::interpolate(const Layer& layer, const Cell& c) const noexcept {
    const std::size_t cols = lon_axis_.size();
    const double v00 = layer[c.i0 * cols + c.j0];
    const double v01 = layer[c.i0 * cols + c.j1];
    const double v10 = layer[c.i1 * cols + c.j0];
    const double v11 = layer[c.i1 * cols + c.j1];
    const double lower = (1.0 - c.wx) * v00 + c.wx * v01;
    const double upper = (1.0 - c.wx) * v10 + c.wx * v11;
    return (1.0 - c.wy) * lower + c.wy * upper;
}

EnvSample EnvironmentField::sample(const GeoPoint& p, Hours t) const {
    const std::size_t k = time_index(t);
    const Cell cell = locate(p);
    const auto at = [&](Variable v) { return interpolate(layers(v)[k], cell); };

    const double u = at(Variable::WindU);
    const double v = at(Variable::WindV);
    EnvSample s;
    s.wind_speed_kn = std::hypot(u, v);
    s.wind_dir_from_deg = s.wind_speed_kn > 0.0 ? normalize_bearing(rad_to_deg(std::atan2(u, v)) + 180.0) : 0.0;
    s.wave_hs_m = std::max(0.0, at(Variable::WaveHs));
    if (has(Variable::CurrentU)) {
        s.current_u_kn = at(Variable::CurrentU);
        s.current_v_kn = at(Variable::CurrentV);
    }
    return s;
}

EnvironmentField load_environment(const std::filesystem::path& manifest_path) {
    const std::string where = manifest_path.string();
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(slurp(manifest_path));
    } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::FormatError, where + ": " + e.what());
    }
    if (!doc.is_object()) throw Error(Errc::FormatError, where + ": manifest must be a JSON object");

    auto lat = read_axis(doc, "lat_axis", where);
    auto lon = read_axis(doc, "lon_axis", where);

    if (!doc.contains("time_axis") || !doc["time_axis"].is_array()) {
        throw Error(Errc::FormatError, where + ": missing array 'time_axis'");
    }
    std::vector<Hours> times;
    for (const auto& t : doc["time_axis"]) {
        if (!t.is_string()) throw Error(Errc::FormatError, where + ": time_axis entries must be ISO-8601 strings");
        times.push_back(parse_iso8601(t.get<std::string>()));
    }

    if (!doc.contains("variables") || !doc["variables"].is_object()) {
        throw Error(Errc::FormatError, where + ": missing object 'variables'");
    }
    const auto base = manifest_path.parent_path();
    std::array<std::vector<Layer>, kVariableCount> layers;
    for (const auto& [name, files] : doc["variables"].items()) {
        const auto var = variable_from_name(name);
        if (!var) throw Error(Errc::FormatError, where + ": unknown variable '" + name + "'");
        if (!files.is_array()) throw Error(Errc::FormatError, where + ": variable '" + name + "' must list CSV files");
        if (files.size() != times.size()) {
            std::ostringstream os;
            os << where << ": variable '" << name << "' lists " << files.size() << " files for " << times.size()
               << " time steps";
            throw Error(Errc::AxisMismatch, os.str());
        }
        auto& series = layers[static_cast<std::size_t>(*var)];
        for (const auto& f : files) {
            if (!f.is_string()) throw Error(Errc::FormatError, where + ": file entries must be strings");
            series.push_back(read_layer_csv(base / f.get<std::string>(), lat.size(), lon.size()));
        }
    }
    try {
        return EnvironmentField(std::move(lat), std::move(lon), std::move(times), std::move(layers));
    } catch (const Error& e) {
        throw Error(e.code(), where + ": " + e.what());
    }
}

std::filesystem::path save_environment(const EnvironmentField& field, const std::filesystem::path& dir,
                                       std::string_view stem) {
    std::filesystem::create_directories(dir);
    nlohmann::ordered_json doc;
    doc["lat_axis"] = field.lat_axis();
    doc["lon_axis"] = field.lon_axis();
    auto& times = doc["time_axis"] = nlohmann::ordered_json::array();
    for (Hours t : field.time_axis()) times.push_back(format_iso8601(t));

    auto& vars = doc["variables"] = nlohmann::ordered_json::object();
    const std::size_t cols = field.lon_axis().size();
    for (std::size_t v = 0; v < kVariableCount; ++v) {
        const auto var = static_cast<Variable>(v);
        if (!field.has(var)) continue;
        auto& files = vars[std::string(variable_name(var))] = nlohmann::ordered_json::array();
        const auto& series = field.layers(var);
        for (std::size_t k = 0; k < series.size(); ++k) {
            std::ostringstream name;
            name << stem << '_' << variable_name(var) << '_' << k << ".csv";
            std::ofstream out(dir / name.str());
            if (!out) throw Error(Errc::IoError, "cannot write " + (dir / name.str()).string());
            for (std::size_t i = 0; i < series[k].size(); ++i) {
                out << text::format_double(series[k][i]) << (((i + 1) % cols == 0) ? '\n' : ',');
            }
            files.push_back(name.str());
        }
    }
    const auto manifest = dir / (std::string(stem) + ".json");
    std::ofstream out(manifest);
    if (!out) throw Error(Errc::IoError, "cannot write " + manifest.string());
    out << doc.dump(2) << '\n';
    return manifest;
}

} // namespace wxroute
