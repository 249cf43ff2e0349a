#pragma once

// Shared synthetic inputs for the unit and acceptance suites.

#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include "wxroute/env.hpp"
#include "wxroute/geo.hpp"
#include "wxroute/perf.hpp"

namespace wxroute::test {

/// Beam-reach polar: 0 kn inside +-40 deg of the wind, 4 kn at 45, a flat
/// 5 kn from 60 to 120 deg, easing off downwind. Independent of TWS.
inline PolarTable beam_reach_polar() {
    const std::vector<double> tws = {0.0, 5.0, 10.0, 20.0, 30.0};
    const std::vector<double> twa = {0.0, 40.0, 45.0, 60.0, 90.0, 120.0, 150.0, 180.0};
    const std::vector<double> row_speed = {0.0, 0.0, 4.0, 5.0, 5.0, 5.0, 4.5, 4.0};
    std::vector<std::vector<double>> speed;
    for (double s : row_speed) speed.emplace_back(tws.size(), s);
    return PolarTable(tws, twa, speed);
}

/// Polar whose speed rises with wind speed and varies smoothly with angle;
/// used where the optimum route should bend.
inline PolarTable graded_polar() {
    const std::vector<double> tws = {0.0, 6.0, 12.0, 20.0, 30.0};
    const std::vector<double> twa = {0.0, 30.0, 45.0, 60.0, 90.0, 120.0, 150.0, 180.0};
    const std::vector<std::vector<double>> speed = {
        {0.0, 0.0, 0.0, 0.0, 0.0}, {0.0, 0.0, 0.0, 0.0, 0.0}, {0.0, 2.5, 4.0, 5.0, 5.2},
        {0.0, 3.2, 5.0, 6.2, 6.5}, {0.0, 3.6, 5.8, 7.0, 7.4}, {0.0, 3.5, 5.9, 7.4, 7.8},
        {0.0, 3.0, 5.2, 6.8, 7.3}, {0.0, 2.6, 4.4, 6.0, 6.6}};
    return PolarTable(tws, twa, speed);
}

/// Zero speed at every angle and wind speed.
inline PolarTable no_go_polar() {
    const std::vector<double> tws = {0.0, 10.0, 30.0};
    const std::vector<double> twa = {0.0, 90.0, 180.0};
    return PolarTable(tws, twa, std::vector<std::vector<double>>(3, std::vector<double>(3, 0.0)));
}

struct UniformSpec {
    double lat_min = -5.0, lat_max = 5.0;
    double lon_min = -5.0, lon_max = 10.0;
    std::vector<Hours> times = {0.0};
    double wind_u = 0.0, wind_v = -10.0; // from due north at 10 kn
    double hs = 0.0;
    bool with_current = false;
    double current_u = 0.0, current_v = 0.0;
};

/// Spatially and temporally uniform field on a 3 x 3 lattice.
inline EnvironmentField uniform_field(const UniformSpec& s = {}) {
    const std::vector<double> lat = {s.lat_min, 0.5 * (s.lat_min + s.lat_max), s.lat_max};
    const std::vector<double> lon = {s.lon_min, 0.5 * (s.lon_min + s.lon_max), s.lon_max};
    const std::size_t cells = lat.size() * lon.size();
    std::array<std::vector<Layer>, kVariableCount> layers;
    const auto fill = [&](Variable v, double value) {
        layers[static_cast<std::size_t>(v)].assign(s.times.size(), Layer(cells, value));
    };
    fill(Variable::WindU, s.wind_u);
    fill(Variable::WindV, s.wind_v);
    fill(Variable::WaveHs, s.hs);
    if (s.with_current) {
        fill(Variable::CurrentU, s.current_u);
        fill(Variable::CurrentV, s.current_v);
    }
    return EnvironmentField(lat, lon, s.times, std::move(layers));
}

/// Field whose wind is sampled from an arbitrary function of (lat, lon, t)
/// on a regular lattice with a 3 h cadence.
inline EnvironmentField functional_field(double lat_min, double lat_max, double lon_min, double lon_max,
                                         double spacing_deg, Hours t0, std::size_t steps,
                                         const std::function<std::array<double, 3>(double, double, Hours)>& uv_hs) {
    std::vector<double> lat, lon;
    for (double x = lat_min; x <= lat_max + 1e-9; x += spacing_deg) lat.push_back(x);
    for (double x = lon_min; x <= lon_max + 1e-9; x += spacing_deg) lon.push_back(x);
    std::vector<Hours> times;
    for (std::size_t k = 0; k < steps; ++k) times.push_back(t0 + 3.0 * static_cast<double>(k));
    std::array<std::vector<Layer>, kVariableCount> layers;
    for (Hours t : times) {
        Layer u, v, hs;
        for (double la : lat) {
            for (double lo : lon) {
                const auto w = uv_hs(la, lo, t);
                u.push_back(w[0]);
                v.push_back(w[1]);
                hs.push_back(w[2]);
            }
        }
        layers[0].push_back(std::move(u));
        layers[1].push_back(std::move(v));
        layers[2].push_back(std::move(hs));
    }
    return EnvironmentField(lat, lon, times, std::move(layers));
}

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::atomic<int> counter{0};
        const auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
        path_ = std::filesystem::temp_directory_path() /
                ("wxroute_test_" + std::to_string(stamp) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const noexcept { return path_; }

private:
    std::filesystem::path path_;
};

} // namespace wxroute::test
