#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isc3/instance.hpp"
#include "isc3/plan.hpp"

namespace isc3 {

struct LinkParams {
    double noise_power_dbm = -100.0;
    double sample_step_km = 0.1;  // trajectory sampling granularity, > 0
};

struct EnergyParams {
    double energy_per_km_wh = 2.5;
    double energy_per_delivery_wh = 1.0;
};

struct SensingParams {
    double base_accuracy = 0.98;  // sensor accuracy in perfect visibility
};

// Physics models bundled for the evaluation path.
struct Models {
    LinkParams link;
    EnergyParams energy;
    SensingParams sensing;
};

enum class ConstraintKind { capacity, trip_distance, trip_energy, data_rate, sensing };

std::string to_string(ConstraintKind k);

struct ConstraintRecord {
    ConstraintKind kind;
    bool pass = true;
    double worst_value = 0.0;  // extremal observed value (min for lower bounds, max for upper)
    double threshold = 0.0;
    double violation = 0.0;    // >= 0, in the threshold's own units
    int trip_index = -1;       // -1 when no trip is implicated
    std::optional<GeoPoint> worst_point;
    std::string detail;
};

struct FeasibilityReport {
    std::vector<ConstraintRecord> records;  // one per ConstraintKind, fixed order
    bool pass = false;                      // true iff every record passes
};

struct PenaltyWeights {
    double capacity = 1000.0;
    double trip_distance = 1000.0;
    double trip_energy = 1000.0;
    double data_rate = 1000.0;
    double sensing = 1000.0;
};

// Free-space path loss in dB: 20 log10(d_km) + 20 log10(f_mhz) + 32.44,
// with d clamped below at 1 m. Throws ArgumentError for f <= 0.
double fspl_db(double d_km, double f_mhz);

// Shannon rate B log2(1 + SNR) against the best base station; 0 when none.
double achievable_rate(const GeoPoint& p, const std::vector<BaseStation>& base_stations,
                       const LinkParams& link);

// Effective sensing accuracy under the given weather: base_accuracy * visibility.
double sensing_accuracy(const Weather& weather, const SensingParams& sensing);

double trip_energy(double trip_length_km, int n_deliveries, const EnergyParams& e);

// Minimum achievable rate over samples taken every sample_step km along the
// straight leg a -> b, endpoints included. Returns the minimum and where it
// occurred. Sample positions k*step are a subset of those for step/2, so
// refining the step can only lower the reported minimum.
std::pair<double, GeoPoint> leg_min_rate(const GeoPoint& a, const GeoPoint& b,
                                         const std::vector<BaseStation>& base_stations,
                                         const LinkParams& link);

// Per-trip capacity / distance / energy checks plus the sampled
// communication-rate check along every leg and the per-station sensing
// check. Throws UnknownStation if the plan references stations outside the
// instance.
FeasibilityReport check_route_feasibility(const RoutePlan& plan, const Isc3Demands& demands,
                                          const DeliveryInstance& instance, const LinkParams& link,
                                          const EnergyParams& energy, const SensingParams& sensing);

// Weighted sum of threshold-normalized violations; exactly 0 iff the report passes.
double penalty(const FeasibilityReport& report, const PenaltyWeights& weights);

namespace detail {

// Backend hooks for the shared constraint walk. The instance-backed checker
// computes distances and leg minima directly; the solver evaluation context
// serves them from caches. Both must yield identical reports.
struct CheckHooks {
    int n_stations = 0;
    std::function<int(int)> demand;
    std::function<double(int, int)> node_dist;  // nodes: 0 = depot, station i at i + 1
    std::function<std::pair<double, GeoPoint>(int, int)> leg_rate;
    std::function<const std::string&(int)> station_id;
    std::function<double(int)> sensing_threshold;
    double accuracy = 1.0;
};

FeasibilityReport run_feasibility_checks(const RoutePlan& plan, const Isc3Demands& demands,
                                         const EnergyParams& energy, const CheckHooks& hooks);

}  // namespace detail

}  // namespace isc3
