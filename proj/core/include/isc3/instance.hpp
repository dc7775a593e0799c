#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "isc3/geometry.hpp"

namespace isc3 {

struct Station {
    std::string id;
    GeoPoint location;
    int demand = 1;                          // packages, >= 1
    double required_sensing_accuracy = 0.9;  // fraction in (0, 1]
};

struct BaseStation {
    std::string id;
    GeoPoint location;
    double tx_power_dbm = 40.0;
    double carrier_freq_mhz = 2000.0;
    double bandwidth_hz = 1.0e6;
};

struct Weather {
    double visibility = 1.0;      // fraction in (0, 1]
    double wind_speed_mps = 0.0;  // informational
};

struct NoFlyZone {
    GeoPoint center;
    double radius_km = 0.0;
};

// The delivery scene being solved. Immutable after construction; safe to
// share across concurrent solver runs.
struct DeliveryInstance {
    Frame frame = Frame::planar;
    GeoPoint depot;
    std::vector<Station> stations;
    std::vector<BaseStation> base_stations;
    Weather weather;
    std::vector<NoFlyZone> no_fly_zones;  // stored and rendered, not constrained

    // Throws ValidationError on any invariant breach (no stations,
    // duplicate ids, demand < 1, accuracy/visibility out of range, frame
    // inconsistencies).
    void validate() const;

    int station_index(const std::string& id) const;  // throws UnknownStation
};

// The Step-1 performance thresholds the route must satisfy.
struct Isc3Demands {
    double min_data_rate_bps = 200000.0;
    double min_sensing_accuracy = 0.95;
    double energy_budget_per_trip_wh = 200.0;
    int capacity = 20;
    double max_trip_distance_km = 75.0;

    void validate() const;
};

// Instance file I/O (schema in docs/README; unknown keys rejected).
DeliveryInstance load_instance(const std::string& path);
DeliveryInstance parse_instance(const std::string& json_text);
std::string instance_to_json_text(const DeliveryInstance& instance);
void save_instance(const DeliveryInstance& instance, const std::string& path);

// Geodetic instances are mapped to a local planar frame about the depot;
// planar instances are returned unchanged.
DeliveryInstance project_to_planar(const DeliveryInstance& instance);

// Seeded, byte-reproducible random scene: depot at the area center,
// stations and base stations uniform over the square, demands uniform in
// [demand_lo, demand_hi].
DeliveryInstance generate_instance(std::uint64_t seed, int n_stations, double area_side_km,
                                   int n_base_stations, int demand_lo, int demand_hi);

// Row/column 0 is the depot, then stations in declaration order.
std::vector<std::vector<double>> distance_matrix(const DeliveryInstance& instance);

}  // namespace isc3
