#pragma once

// Spherical-earth geodesy. Degrees at the API boundary, nautical miles for
// distances, bearings clockwise from true north in [0, 360).

namespace wxroute {

inline constexpr double kEarthRadiusNm = 3440.065;
inline constexpr double kPi = 3.14159265358979323846;

constexpr double deg_to_rad(double deg) noexcept { return deg * kPi / 180.0; }
constexpr double rad_to_deg(double rad) noexcept { return rad * 180.0 / kPi; }

/// Wraps any angle into [0, 360).
double normalize_bearing(double deg) noexcept;

/// Wraps any longitude into [-180, 180).
double normalize_longitude(double deg) noexcept;

class GeoPoint {
public:
    /// Throws Error(InvalidArgument) for non-finite input or |lat| > 90.
    GeoPoint(double lat_deg, double lon_deg);

    double lat() const noexcept { return lat_; }
    double lon() const noexcept { return lon_; }

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;

private:
    double lat_;
    double lon_;
};

double haversine_distance(const GeoPoint& a, const GeoPoint& b) noexcept;

/// Forward azimuth from a to b. Throws DegenerateGeometry when the points
/// coincide or are antipodal.
double initial_bearing(const GeoPoint& a, const GeoPoint& b);

GeoPoint destination_point(const GeoPoint& origin, double bearing_deg, double distance_nm);

/// Spherical linear interpolation along the great circle a -> b.
GeoPoint great_circle_intermediate(const GeoPoint& a, const GeoPoint& b, double fraction);

} // namespace wxroute
