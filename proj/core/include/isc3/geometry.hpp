#pragma once

#include <string>

namespace isc3 {

// Mean Earth radius used for great-circle distances.
inline constexpr double kEarthRadiusKm = 6371.0;

enum class Frame { planar, geodetic };

std::string to_string(Frame f);
Frame frame_from_string(const std::string& s);

// A point either in a local planar frame (x east, y north, km) or in
// geodetic coordinates (x = longitude deg, y = latitude deg).
struct GeoPoint {
    double x = 0.0;
    double y = 0.0;
    Frame frame = Frame::planar;

    bool operator==(const GeoPoint& other) const = default;
};

// Throws ValidationError on non-finite coordinates or geodetic bounds.
void validate_point(const GeoPoint& p, const std::string& what);

// Euclidean for planar points, haversine (radius 6371.0 km) for geodetic.
// Throws FrameMismatch when the frames differ.
double distance(const GeoPoint& a, const GeoPoint& b);

// Local-tangent (equirectangular) projection of a geodetic point about
// `origin`, yielding planar km east/north of the origin.
GeoPoint project_about(const GeoPoint& p, const GeoPoint& origin);

// Point at `t` km from `a` along the straight planar segment a -> b.
GeoPoint point_along(const GeoPoint& a, const GeoPoint& b, double t_km);

}  // namespace isc3
