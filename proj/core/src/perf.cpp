#include "wxroute/perf.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "wxroute/error.hpp"
#include "wxroute/text.hpp"

namespace wxroute {

namespace {

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) return false;
    }
    return !v.empty();
}

struct AxisPos {
    std::size_t i0, i1;
    double w; // weight of i1
};

AxisPos clamp_locate(const std::vector<double>& axis, double x) noexcept {
    if (axis.size() == 1 || x <= axis.front()) return {0, 0, 0.0};
    if (x >= axis.back()) return {axis.size() - 1, axis.size() - 1, 0.0};
    const auto it = std::upper_bound(axis.begin(), axis.end(), x);
    const auto i1 = static_cast<std::size_t>(std::distance(axis.begin(), it));
    const std::size_t i0 = i1 - 1;
    return {i0, i1, (x - axis[i0]) / (axis[i1] - axis[i0])};
}

double fold_twa(double twa_deg) noexcept {
    double a = std::fmod(std::fabs(twa_deg), 360.0);
    if (a > 180.0) a = 360.0 - a;
    return a;
}

char detect_separator(const std::string& line) {
    if (line.find(';') != std::string::npos) return ';';
    if (line.find('\t') != std::string::npos) return '\t';
    return ',';
}

} // namespace

PolarTable::PolarTable(std::vector<double> tws_axis, std::vector<double> twa_axis,
                       std::vector<std::vector<double>> speed_kn)
    : tws_(std::move(tws_axis)), twa_(std::move(twa_axis)), speed_(std::move(speed_kn)) {
    if (!strictly_increasing(tws_)) throw Error(Errc::FormatError, "polar TWS axis must be strictly increasing");
    if (!strictly_increasing(twa_)) throw Error(Errc::FormatError, "polar TWA axis must be strictly increasing");
    if (tws_.front() < 0.0) throw Error(Errc::FormatError, "polar TWS axis has a negative wind speed");
    if (twa_.front() < 0.0 || twa_.back() > 180.0) {
        throw Error(Errc::FormatError, "polar TWA axis must lie within [0, 180]");
    }
    if (speed_.size() != twa_.size()) throw Error(Errc::FormatError, "polar needs one speed row per TWA");
    for (const auto& row : speed_) {
        if (row.size() != tws_.size()) throw Error(Errc::FormatError, "polar needs one speed column per TWS");
        for (double s : row) {
            if (!std::isfinite(s) || s < 0.0) throw Error(Errc::FormatError, "polar speeds must be finite and >= 0");
        }
    }
}

double PolarTable::speed(double tws_kn, double twa_deg) const noexcept {
    const AxisPos a = clamp_locate(twa_, fold_twa(twa_deg));
    const AxisPos s = clamp_locate(tws_, tws_kn);
    const double lo = (1.0 - s.w) * speed_[a.i0][s.i0] + s.w * speed_[a.i0][s.i1];
    const double hi = (1.0 - s.w) * speed_[a.i1][s.i0] + s.w * speed_[a.i1][s.i1];
    return std::max(0.0, (1.0 - a.w) * lo + a.w * hi);
}

double polar_speed(const PolarTable& polar, double tws_kn, double twa_deg) noexcept {
    return polar.speed(tws_kn, twa_deg);
}

PolarTable read_polar_csv(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::vector<std::string>> rows;
    char sep = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) continue;
        if (sep == 0) sep = detect_separator(line);
        rows.push_back(text::split(line, sep));
    }
    if (rows.size() < 2) throw Error(Errc::FormatError, source + ": polar needs a header row and at least one TWA row");

    const auto& header = rows.front();
    std::string corner = header.front();
    std::transform(corner.begin(), corner.end(), corner.begin(), [](unsigned char c) { return std::toupper(c); });
    if (corner.rfind("TWA", 0) != 0) {
        throw Error(Errc::FormatError, source + ": first cell must be 'TWA', found '" + header.front() + "'");
    }
    std::vector<double> tws;
    for (std::size_t j = 1; j < header.size(); ++j) tws.push_back(text::parse_double(header[j], source + " header"));

    std::vector<double> twa;
    std::vector<std::vector<double>> speed;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        const std::string where = source + " row " + std::to_string(i + 1);
        if (r.size() != header.size()) {
            throw Error(Errc::FormatError, where + ": expected " + std::to_string(header.size()) + " fields");
        }
        twa.push_back(text::parse_double(r.front(), where));
        std::vector<double> row;
        for (std::size_t j = 1; j < r.size(); ++j) row.push_back(text::parse_double(r[j], where));
        speed.push_back(std::move(row));
    }
    try {
        return PolarTable(std::move(tws), std::move(twa), std::move(speed));
    } catch (const Error& e) {
        throw Error(e.code(), source + ": " + e.what());
    }
}

PolarTable load_polar(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::IoError, "cannot open polar file " + path.string());
    return read_polar_csv(in, path.string());
}

void write_polar_csv(std::ostream& out, const PolarTable& polar) {
    out << "TWA";
    for (double s : polar.tws_axis()) out << ',' << text::format_double(s);
    out << '\n';
    for (std::size_t i = 0; i < polar.twa_axis().size(); ++i) {
        out << text::format_double(polar.twa_axis()[i]);
        for (double v : polar.speeds()[i]) out << ',' << text::format_double(v);
        out << '\n';
    }
}

void save_polar(const std::filesystem::path& path, const PolarTable& polar) {
    std::ofstream out(path);
    if (!out) throw Error(Errc::IoError, "cannot write " + path.string());
    write_polar_csv(out, polar);
}

void PerformanceModel::validate() const {
    if (!polar) throw Error(Errc::InvalidArgument, "performance model has no polar table");
    if (!(unc_factor > 0.0) || !std::isfinite(unc_factor)) {
        throw Error(Errc::InvalidScale, "performance scale factor must be positive");
    }
    if (!(wave_coeff >= 0.0) || !std::isfinite(wave_coeff)) {
        throw Error(Errc::InvalidArgument, "wave decrement coefficient must be >= 0");
    }
    if (!(heading_step_deg > 0.0 && heading_step_deg <= 90.0)) {
        throw Error(Errc::InvalidArgument, "heading step must lie in (0, 90] degrees");
    }
    const double count = 360.0 / heading_step_deg;
    if (std::fabs(count - std::round(count)) > 1e-9) {
        throw Error(Errc::InvalidArgument, "heading step must divide 360 degrees evenly");
    }
}

PerformanceModel make_performance_model(PolarTable polar, double wave_coeff, double heading_step_deg) {
    PerformanceModel m;
    m.polar = std::make_shared<const PolarTable>(std::move(polar));
    m.wave_coeff = wave_coeff;
    m.heading_step_deg = heading_step_deg;
    m.validate();
    return m;
}

PerformanceModel scale_performance(const PerformanceModel& model, double unc_percent) {
    if (!(unc_percent > 0.0) || !std::isfinite(unc_percent)) {
        std::ostringstream os;
        os << "performance scaling of " << unc_percent << "% is not positive";
        throw Error(Errc::InvalidScale, os.str());
    }
    PerformanceModel scaled = model;
    scaled.unc_factor = unc_percent / 100.0;
    return scaled;
}

double wave_factor(const PerformanceModel& model, double hs_m) noexcept {
    return std::max(0.0, 1.0 - model.wave_coeff * hs_m);
}

double boat_speed(const PerformanceModel& model, double tws_kn, double twa_deg, double hs_m) noexcept {
    return model.polar->speed(tws_kn, twa_deg) * model.unc_factor * wave_factor(model, hs_m);
}

HeadingSolution effective_speed_over_ground(const PerformanceModel& model, const EnvSample& env,
                                            double course_bearing_deg) {
    const double course = deg_to_rad(course_bearing_deg);
    const double sc = std::sin(course);
    const double cc = std::cos(course);
    // current resolved along the course and to starboard of it
    const double cur_along = env.current_u_kn * sc + env.current_v_kn * cc;
    const double cur_cross = env.current_u_kn * cc - env.current_v_kn * sc;

    // The tolerance is stated for the unscaled boat; scaling it with the
    // performance factor keeps the admissible headings, and so the chosen
    // heading in still water, independent of that factor.
    const double tolerance = kCourseMadeGoodTolKn * model.unc_factor;
    const auto candidates = static_cast<int>(std::lround(360.0 / model.heading_step_deg));
    HeadingSolution best{0.0, normalize_bearing(course_bearing_deg)};
    for (int k = 0; k < candidates; ++k) {
        const double offset_deg = k * model.heading_step_deg;
        const double heading = course_bearing_deg + offset_deg;
        const double v = boat_speed(model, env.wind_speed_kn, heading - env.wind_dir_from_deg, env.wave_hs_m);
        const double offset = deg_to_rad(offset_deg);
        const double along = (k == 0 ? v : v * std::cos(offset)) + cur_along;
        const double cross = (k == 0 ? 0.0 : v * std::sin(offset)) + cur_cross;
        if (std::fabs(cross) > tolerance) continue;
        if (along > best.sog_kn) best = {along, normalize_bearing(heading)};
    }
    return best;
}

ArcCost arc_cost(const PerformanceModel& model, const EnvironmentField& field, const GeoPoint& from,
                 const GeoPoint& to, Hours depart) {
    const double course = initial_bearing(from, to);
    const EnvSample env = field.sample(from, depart);
    const HeadingSolution h = effective_speed_over_ground(model, env, course);
    if (!(h.sog_kn > 0.0)) return {std::numeric_limits<double>::infinity(), h.heading_deg};
    return {haversine_distance(from, to) / h.sog_kn, h.heading_deg};
}

} // namespace wxroute
