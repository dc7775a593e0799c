#pragma once

#include <vector>

namespace isc3 {

// A giant tour is a permutation of station indices (0-based, matching
// DeliveryInstance::stations order; distance-matrix row = index + 1).
// Station ids appear only at the serialization boundary.
using GiantTour = std::vector<int>;

// One depot-anchored trip: depot -> stations -> depot.
struct Trip {
    std::vector<int> stations;  // station indices in visit order
    double length_km = 0.0;
    int load = 0;
    double energy_wh = 0.0;
};

struct RoutePlan {
    std::vector<Trip> trips;
    double total_length_km = 0.0;
};

struct Objective {
    double total_length_km = 0.0;
    double penalty = 0.0;
    double value = 0.0;  // total_length_km + penalty

    bool feasible() const { return penalty == 0.0; }
};

}  // namespace isc3
