#include "wxroute/geo.hpp"

#include <cmath>
#include <sstream>

#include "wxroute/error.hpp"

namespace wxroute {

namespace {

// Central angles closer than this to 0 or pi are treated as coincident or
// antipodal for bearing purposes.
constexpr double kCoincidentRad = 1e-12;
constexpr double kAntipodalRad = 1e-9;

double central_angle(const GeoPoint& a, const GeoPoint& b) noexcept {
    const double lat1 = deg_to_rad(a.lat());
    const double lat2 = deg_to_rad(b.lat());
    const double dlat = lat2 - lat1;
    const double dlon = deg_to_rad(b.lon() - a.lon());
    const double s1 = std::sin(dlat / 2.0);
    const double s2 = std::sin(dlon / 2.0);
    double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
    h = std::fmin(1.0, std::fmax(0.0, h));
    return 2.0 * std::asin(std::sqrt(h));
}

struct Vec3 {
    double x, y, z;
};

Vec3 to_unit(const GeoPoint& p) noexcept {
    const double lat = deg_to_rad(p.lat());
    const double lon = deg_to_rad(p.lon());
    return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

GeoPoint from_unit(const Vec3& v) {
    const double lat = std::atan2(v.z, std::hypot(v.x, v.y));
    const double lon = std::atan2(v.y, v.x);
    return GeoPoint(rad_to_deg(lat), rad_to_deg(lon));
}

std::string describe(const GeoPoint& p) {
    std::ostringstream os;
    os << "(" << p.lat() << ", " << p.lon() << ")";
    return os.str();
}

} // namespace

double normalize_bearing(double deg) noexcept {
    double r = std::fmod(deg, 360.0);
    if (r < 0.0) r += 360.0;
    // fmod of a tiny negative value can round up to exactly 360
    if (r >= 360.0) r = 0.0;
    return r;
}

double normalize_longitude(double deg) noexcept {
    double r = std::fmod(deg + 180.0, 360.0);
    if (r < 0.0) r += 360.0;
    if (r >= 360.0) r = 0.0;
    return r - 180.0;
}

GeoPoint::GeoPoint(double lat_deg, double lon_deg) {
    if (!std::isfinite(lat_deg) || !std::isfinite(lon_deg)) {
        throw Error(Errc::InvalidArgument, "non-finite coordinate");
    }
    if (lat_deg < -90.0 || lat_deg > 90.0) {
        std::ostringstream os;
        os << "latitude " << lat_deg << " outside [-90, 90]";
        throw Error(Errc::InvalidArgument, os.str());
    }
    lat_ = lat_deg;
    lon_ = (lon_deg >= -180.0 && lon_deg < 180.0) ? lon_deg : normalize_longitude(lon_deg);
}

double haversine_distance(const GeoPoint& a, const GeoPoint& b) noexcept {
    return kEarthRadiusNm * central_angle(a, b);
}

double initial_bearing(const GeoPoint& a, const GeoPoint& b) {
    const double delta = central_angle(a, b);
    if (delta < kCoincidentRad) {
        throw Error(Errc::DegenerateGeometry, "bearing between coincident points " + describe(a));
    }
    if (kPi - delta < kAntipodalRad) {
        throw Error(Errc::DegenerateGeometry,
                    "bearing between antipodal points " + describe(a) + " and " + describe(b));
    }
    const double lat1 = deg_to_rad(a.lat());
    const double lat2 = deg_to_rad(b.lat());
    const double dlon = deg_to_rad(b.lon() - a.lon());
    const double y = std::sin(dlon) * std::cos(lat2);
    const double x = std::cos(lat1) * std::sin(lat2) - std::sin(lat1) * std::cos(lat2) * std::cos(dlon);
    return normalize_bearing(rad_to_deg(std::atan2(y, x)));
}

GeoPoint destination_point(const GeoPoint& origin, double bearing_deg, double distance_nm) {
    if (!(distance_nm >= 0.0) || !std::isfinite(bearing_deg)) {
        throw Error(Errc::InvalidArgument, "destination_point needs a finite bearing and distance >= 0");
    }
    if (distance_nm == 0.0) return origin;

    const double delta = distance_nm / kEarthRadiusNm;
    const double theta = deg_to_rad(bearing_deg);
    const double lat1 = deg_to_rad(origin.lat());
    const double lon1 = deg_to_rad(origin.lon());

    double sin_lat2 = std::sin(lat1) * std::cos(delta) + std::cos(lat1) * std::sin(delta) * std::cos(theta);
    sin_lat2 = std::fmin(1.0, std::fmax(-1.0, sin_lat2));
    const double lat2 = std::asin(sin_lat2);
    const double lon2 = lon1 + std::atan2(std::sin(theta) * std::sin(delta) * std::cos(lat1),
                                          std::cos(delta) - std::sin(lat1) * sin_lat2);
    return GeoPoint(rad_to_deg(lat2), normalize_longitude(rad_to_deg(lon2)));
}

GeoPoint great_circle_intermediate(const GeoPoint& a, const GeoPoint& b, double fraction) {
    if (!(fraction >= 0.0 && fraction <= 1.0)) {
        throw Error(Errc::InvalidArgument, "great-circle fraction outside [0, 1]");
    }
    const double delta = central_angle(a, b);
    if (kPi - delta < kAntipodalRad) {
        throw Error(Errc::DegenerateGeometry,
                    "no unique great circle between " + describe(a) + " and " + describe(b));
    }
    if (fraction == 0.0 || delta < kCoincidentRad) return a;
    if (fraction == 1.0) return b;

    const double sd = std::sin(delta);
    const double wa = std::sin((1.0 - fraction) * delta) / sd;
    const double wb = std::sin(fraction * delta) / sd;
    const Vec3 va = to_unit(a);
    const Vec3 vb = to_unit(b);
    return from_unit({wa * va.x + wb * vb.x, wa * va.y + wb * vb.y, wa * va.z + wb * vb.z});
}

} // namespace wxroute
