#pragma once

#include <string>

#include "isc3/constraints.hpp"
#include "isc3/instance.hpp"
#include "isc3/plan.hpp"

namespace isc3 {

// Layers mirror the scene: stations, depot, one polyline per trip,
// base-station rings at the radius where the achievable rate meets the
// minimum demand, and no-fly zones.
struct RenderSpec {
    int canvas_px = 800;  // >= 100
    bool stations = true;
    bool depot = true;
    bool trips = true;
    bool coverage_rings = true;
    bool no_fly_zones = true;
};

// Distance at which a base station's Shannon rate drops to min_rate_bps
// (closed form from the path-loss model).
double coverage_radius_km(const BaseStation& bs, double min_rate_bps, const LinkParams& link);

// Self-contained SVG (no external references). Throws ArgumentError for a
// canvas under 100 px.
std::string render_svg(const DeliveryInstance& instance, const RoutePlan* plan,
                       const Isc3Demands& demands, const LinkParams& link, const RenderSpec& spec);

}  // namespace isc3
