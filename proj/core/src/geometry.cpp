#include "isc3/geometry.hpp"

#include <cmath>

#include "isc3/errors.hpp"

namespace isc3 {

namespace {
constexpr double kDegToRad = 3.14159265358979323846 / 180.0;
}

std::string to_string(Frame f) {
    return f == Frame::planar ? "planar" : "geodetic";
}

Frame frame_from_string(const std::string& s) {
    if (s == "planar") return Frame::planar;
    if (s == "geodetic") return Frame::geodetic;
    throw SchemaError("unknown frame '" + s + "' (expected planar or geodetic)");
}

void validate_point(const GeoPoint& p, const std::string& what) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
        throw ValidationError(what + ": coordinates must be finite");
    if (p.frame == Frame::geodetic) {
        if (p.y < -90.0 || p.y > 90.0)
            throw ValidationError(what + ": latitude out of [-90, 90]");
        if (p.x < -180.0 || p.x > 180.0)
            throw ValidationError(what + ": longitude out of [-180, 180]");
    }
}

double distance(const GeoPoint& a, const GeoPoint& b) {
    if (a.frame != b.frame)
        throw FrameMismatch("distance between points in different frames");
    if (a.frame == Frame::planar)
        return std::hypot(a.x - b.x, a.y - b.y);

    // Haversine on lat/lon degrees.
    const double lat1 = a.y * kDegToRad;
    const double lat2 = b.y * kDegToRad;
    const double dlat = (b.y - a.y) * kDegToRad;
    const double dlon = (b.x - a.x) * kDegToRad;
    const double s1 = std::sin(dlat / 2.0);
    const double s2 = std::sin(dlon / 2.0);
    const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
    return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

GeoPoint project_about(const GeoPoint& p, const GeoPoint& origin) {
    if (p.frame != Frame::geodetic || origin.frame != Frame::geodetic)
        throw FrameMismatch("project_about expects geodetic points");
    const double lat0 = origin.y * kDegToRad;
    GeoPoint out;
    out.frame = Frame::planar;
    out.x = kEarthRadiusKm * std::cos(lat0) * (p.x - origin.x) * kDegToRad;
    out.y = kEarthRadiusKm * (p.y - origin.y) * kDegToRad;
    return out;
}

GeoPoint point_along(const GeoPoint& a, const GeoPoint& b, double t_km) {
    if (a.frame != b.frame)
        throw FrameMismatch("point_along between points in different frames");
    const double len = distance(a, b);
    if (len <= 0.0) return a;
    const double u = t_km / len;
    return GeoPoint{a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u, a.frame};
}

}  // namespace isc3
