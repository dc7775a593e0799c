#include "isc3/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include "isc3/errors.hpp"
#include "isc3/strfmt.hpp"

namespace isc3 {

namespace {
constexpr double kMinFsplDistanceKm = 0.001;  // 1 m clamp, keeps log10 finite
}

std::string to_string(ConstraintKind k) {
    switch (k) {
        case ConstraintKind::capacity: return "capacity";
        case ConstraintKind::trip_distance: return "trip_distance";
        case ConstraintKind::trip_energy: return "trip_energy";
        case ConstraintKind::data_rate: return "data_rate";
        case ConstraintKind::sensing: return "sensing";
    }
    return "unknown";
}

double fspl_db(double d_km, double f_mhz) {
    if (!(f_mhz > 0.0)) throw ArgumentError("fspl_db: carrier frequency must be > 0 MHz");
    if (d_km < 0.0) throw ArgumentError("fspl_db: distance must be >= 0");
    const double d = std::max(d_km, kMinFsplDistanceKm);
    return 20.0 * std::log10(d) + 20.0 * std::log10(f_mhz) + 32.44;
}

double achievable_rate(const GeoPoint& p, const std::vector<BaseStation>& base_stations,
                       const LinkParams& link) {
    double best = 0.0;
    for (const auto& bs : base_stations) {
        const double d = distance(p, bs.location);
        const double snr_db = bs.tx_power_dbm - fspl_db(d, bs.carrier_freq_mhz) - link.noise_power_dbm;
        const double snr = std::pow(10.0, snr_db / 10.0);
        best = std::max(best, bs.bandwidth_hz * std::log2(1.0 + snr));
    }
    return best;
}

double sensing_accuracy(const Weather& weather, const SensingParams& sensing) {
    return sensing.base_accuracy * weather.visibility;
}

double trip_energy(double trip_length_km, int n_deliveries, const EnergyParams& e) {
    return e.energy_per_km_wh * trip_length_km + e.energy_per_delivery_wh * n_deliveries;
}

std::pair<double, GeoPoint> leg_min_rate(const GeoPoint& a, const GeoPoint& b,
                                         const std::vector<BaseStation>& base_stations,
                                         const LinkParams& link) {
    if (!(link.sample_step_km > 0.0)) throw ArgumentError("sample_step_km must be > 0");
    const double len = distance(a, b);
    double best = std::numeric_limits<double>::infinity();
    GeoPoint where = a;
    const auto consider = [&](const GeoPoint& p) {
        const double r = achievable_rate(p, base_stations, link);
        if (r < best) {
            best = r;
            where = p;
        }
    };
    const long long k_max = static_cast<long long>(std::floor(len / link.sample_step_km));
    for (long long k = 0; k <= k_max; ++k) consider(point_along(a, b, k * link.sample_step_km));
    if (k_max * link.sample_step_km < len) consider(b);
    return {best, where};
}

namespace detail {

// Constraint evaluation shared by the direct (instance-backed) checker and
// the cached evaluation context in routing.cpp. The hooks abstract where
// distances and per-leg rate minima come from; both backends must agree
// bit-for-bit, which the tests assert.
FeasibilityReport run_feasibility_checks(const RoutePlan& plan, const Isc3Demands& demands,
                                         const EnergyParams& energy, const CheckHooks& hooks) {
    constexpr double kInf = std::numeric_limits<double>::infinity();

    ConstraintRecord cap{ConstraintKind::capacity, true, 0.0, static_cast<double>(demands.capacity),
                         0.0, -1, std::nullopt, ""};
    ConstraintRecord dist{ConstraintKind::trip_distance, true, 0.0, demands.max_trip_distance_km,
                          0.0, -1, std::nullopt, ""};
    ConstraintRecord ener{ConstraintKind::trip_energy, true, 0.0, demands.energy_budget_per_trip_wh,
                          0.0, -1, std::nullopt, ""};
    ConstraintRecord rate{ConstraintKind::data_rate, true, kInf, demands.min_data_rate_bps,
                          0.0, -1, std::nullopt, ""};
    ConstraintRecord sens{ConstraintKind::sensing, true, kInf, demands.min_sensing_accuracy,
                          0.0, -1, std::nullopt, ""};

    for (std::size_t t = 0; t < plan.trips.size(); ++t) {
        const auto& stations = plan.trips[t].stations;
        int load = 0;
        double length = 0.0;
        int prev = 0;  // depot node
        for (int s : stations) {
            if (s < 0 || s >= hooks.n_stations)
                throw UnknownStation("plan references station index " + std::to_string(s) +
                                     " outside the instance");
            load += hooks.demand(s);
            length += hooks.node_dist(prev, s + 1);
            prev = s + 1;
        }
        length += hooks.node_dist(prev, 0);

        const double e = trip_energy(length, static_cast<int>(stations.size()), energy);
        const int ti = static_cast<int>(t);
        if (load > cap.worst_value) {
            cap.worst_value = load;
            cap.trip_index = ti;
        }
        if (length > dist.worst_value) {
            dist.worst_value = length;
            dist.trip_index = ti;
        }
        if (e > ener.worst_value) {
            ener.worst_value = e;
            ener.trip_index = ti;
        }

        // Communication: sampled minimum along every leg of the trip.
        prev = 0;
        for (std::size_t i = 0; i <= stations.size(); ++i) {
            const int next = i < stations.size() ? stations[i] + 1 : 0;
            const auto [r, where] = hooks.leg_rate(prev, next);
            if (r < rate.worst_value) {
                rate.worst_value = r;
                rate.trip_index = ti;
                rate.worst_point = where;
            }
            prev = next;
        }

        // Sensing at each delivery point. The modeled accuracy is uniform
        // over the scene, so the worst offender is the station with the
        // highest effective threshold.
        for (int s : stations) {
            const double threshold = hooks.sensing_threshold(s);
            if (std::isinf(sens.worst_value) || threshold > sens.threshold) {
                sens.worst_value = hooks.accuracy;
                sens.threshold = threshold;
                sens.trip_index = ti;
                sens.detail = "station " + hooks.station_id(s);
            }
        }
    }

    cap.violation = std::max(0.0, cap.worst_value - cap.threshold);
    dist.violation = std::max(0.0, dist.worst_value - dist.threshold);
    ener.violation = std::max(0.0, ener.worst_value - ener.threshold);
    rate.violation = std::isinf(rate.worst_value) ? 0.0
                                                  : std::max(0.0, rate.threshold - rate.worst_value);
    sens.violation = std::isinf(sens.worst_value) ? 0.0
                                                  : std::max(0.0, sens.threshold - sens.worst_value);

    cap.pass = cap.violation == 0.0;
    dist.pass = dist.violation == 0.0;
    ener.pass = ener.violation == 0.0;
    rate.pass = rate.violation == 0.0;
    sens.pass = sens.violation == 0.0;

    if (cap.trip_index >= 0) cap.detail = "trip " + std::to_string(cap.trip_index);
    if (dist.trip_index >= 0) dist.detail = "trip " + std::to_string(dist.trip_index);
    if (ener.trip_index >= 0) ener.detail = "trip " + std::to_string(ener.trip_index);
    if (rate.trip_index >= 0) {
        rate.detail = "trip " + std::to_string(rate.trip_index) + " at (" +
                      fmt_double(rate.worst_point->x) + ", " + fmt_double(rate.worst_point->y) + ")";
    }

    FeasibilityReport report;
    report.records = {cap, dist, ener, rate, sens};
    report.pass = cap.pass && dist.pass && ener.pass && rate.pass && sens.pass;
    return report;
}

}  // namespace detail

FeasibilityReport check_route_feasibility(const RoutePlan& plan, const Isc3Demands& demands,
                                          const DeliveryInstance& instance, const LinkParams& link,
                                          const EnergyParams& energy, const SensingParams& sensing) {
    demands.validate();
    const double acc = sensing_accuracy(instance.weather, sensing);
    auto point_at = [&](int node) -> const GeoPoint& {
        return node == 0 ? instance.depot : instance.stations[node - 1].location;
    };
    detail::CheckHooks hooks;
    hooks.n_stations = static_cast<int>(instance.stations.size());
    hooks.demand = [&](int s) { return instance.stations[s].demand; };
    hooks.node_dist = [&](int a, int b) { return distance(point_at(a), point_at(b)); };
    hooks.leg_rate = [&](int a, int b) {
        return leg_min_rate(point_at(a), point_at(b), instance.base_stations, link);
    };
    hooks.station_id = [&](int s) -> const std::string& { return instance.stations[s].id; };
    hooks.sensing_threshold = [&](int s) {
        return std::max(demands.min_sensing_accuracy, instance.stations[s].required_sensing_accuracy);
    };
    hooks.accuracy = acc;
    return detail::run_feasibility_checks(plan, demands, energy, hooks);
}

double penalty(const FeasibilityReport& report, const PenaltyWeights& weights) {
    auto weight_of = [&](ConstraintKind k) {
        switch (k) {
            case ConstraintKind::capacity: return weights.capacity;
            case ConstraintKind::trip_distance: return weights.trip_distance;
            case ConstraintKind::trip_energy: return weights.trip_energy;
            case ConstraintKind::data_rate: return weights.data_rate;
            case ConstraintKind::sensing: return weights.sensing;
        }
        return 0.0;
    };
    double total = 0.0;
    for (const auto& rec : report.records) {
        if (rec.violation <= 0.0) continue;
        const double w = weight_of(rec.kind);
        if (w < 0.0) throw ArgumentError("penalty weights must be >= 0");
        total += w * (rec.violation / rec.threshold);
    }
    return total;
}

}  // namespace isc3
