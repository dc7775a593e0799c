#include "isc3/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "isc3/errors.hpp"

namespace isc3 {

EvalContext::EvalContext(const DeliveryInstance& instance, const Isc3Demands& demands,
                         const Models& models, const PenaltyWeights& weights)
    : instance_(&instance), demands_(demands), models_(models), weights_(weights) {
    instance.validate();
    demands.validate();
    dist_ = distance_matrix(instance);

    const std::size_t n = dist_.size();
    auto point_at = [&](std::size_t node) -> const GeoPoint& {
        return node == 0 ? instance.depot : instance.stations[node - 1].location;
    };
    leg_rate_.assign(n, std::vector<std::pair<double, GeoPoint>>(n));
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            if (a == b) {
                leg_rate_[a][b] = {achievable_rate(point_at(a), instance.base_stations, models.link),
                                   point_at(a)};
                continue;
            }
            leg_rate_[a][b] =
                leg_min_rate(point_at(a), point_at(b), instance.base_stations, models.link);
        }
    }

    accuracy_ = sensing_accuracy(instance.weather, models.sensing);
    sensing_threshold_.reserve(instance.stations.size());
    for (const auto& s : instance.stations)
        sensing_threshold_.push_back(std::max(demands.min_sensing_accuracy, s.required_sensing_accuracy));
}

FeasibilityReport EvalContext::check(const RoutePlan& plan) const {
    detail::CheckHooks hooks;
    hooks.n_stations = n_stations();
    hooks.demand = [this](int s) { return instance_->stations[s].demand; };
    hooks.node_dist = [this](int a, int b) { return dist_[a][b]; };
    hooks.leg_rate = [this](int a, int b) { return leg_rate_[a][b]; };
    hooks.station_id = [this](int s) -> const std::string& { return instance_->stations[s].id; };
    hooks.sensing_threshold = [this](int s) { return sensing_threshold_[s]; };
    hooks.accuracy = accuracy_;
    return detail::run_feasibility_checks(plan, demands_, models_.energy, hooks);
}

namespace {

// Verifies each station is individually servable: solo round trip within
// the distance and energy budgets, demand within capacity.
void check_servable(const EvalContext& ctx) {
    const auto& demands = ctx.demands();
    const auto& energy = ctx.models().energy;
    for (int s = 0; s < ctx.n_stations(); ++s) {
        const auto& st = ctx.instance().stations[s];
        const double round_trip = 2.0 * ctx.dist()[0][s + 1];
        if (st.demand > demands.capacity)
            throw InstanceInfeasible("station '" + st.id + "' demand exceeds capacity");
        if (round_trip > demands.max_trip_distance_km)
            throw InstanceInfeasible("station '" + st.id + "' round trip exceeds max trip distance");
        if (trip_energy(round_trip, 1, energy) > demands.energy_budget_per_trip_wh)
            throw InstanceInfeasible("station '" + st.id + "' round trip exceeds energy budget");
    }
}

Trip make_trip(const GiantTour& tour, std::size_t begin, std::size_t end, const EvalContext& ctx) {
    Trip trip;
    trip.stations.assign(tour.begin() + begin, tour.begin() + end);
    int prev = 0;
    for (int s : trip.stations) {
        trip.load += ctx.instance().stations[s].demand;
        trip.length_km += ctx.dist()[prev][s + 1];
        prev = s + 1;
    }
    trip.length_km += ctx.dist()[prev][0];
    trip.energy_wh = trip_energy(trip.length_km, static_cast<int>(trip.stations.size()),
                                 ctx.models().energy);
    return trip;
}

void validate_permutation(const GiantTour& tour, int n) {
    if (static_cast<int>(tour.size()) != n)
        throw ArgumentError("giant tour must visit every station exactly once");
    std::vector<bool> seen(n, false);
    for (int s : tour) {
        if (s < 0 || s >= n) throw UnknownStation("tour references station index " + std::to_string(s));
        if (seen[s]) throw ArgumentError("giant tour repeats station index " + std::to_string(s));
        seen[s] = true;
    }
}

}  // namespace

RoutePlan split_giant_tour(const GiantTour& tour, const EvalContext& ctx) {
    const int n = static_cast<int>(tour.size());
    validate_permutation(tour, ctx.n_stations());
    check_servable(ctx);

    const auto& demands = ctx.demands();
    const auto& energy = ctx.models().energy;
    const auto& dist = ctx.dist();

    // Suffix DP over cut positions: best[i] = (length, trips) of the best
    // partition of tour[i..n). Arc (i, j) serves tour[i..j) as one trip.
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> best_len(n + 1, kInf);
    std::vector<int> best_trips(n + 1, std::numeric_limits<int>::max());
    best_len[n] = 0.0;
    best_trips[n] = 0;

    // Trip length of tour[i..j): out + chain + back, accumulated as j grows.
    auto node = [&](int k) { return tour[k] + 1; };
    std::vector<std::vector<double>> arc_len(n, std::vector<double>(n + 1, kInf));
    for (int i = n - 1; i >= 0; --i) {
        int load = 0;
        double chain = dist[0][node(i)];  // depot -> ... -> last in segment
        for (int j = i + 1; j <= n; ++j) {
            load += ctx.instance().stations[tour[j - 1]].demand;
            if (j > i + 1) chain += dist[node(j - 2)][node(j - 1)];
            if (load > demands.capacity) break;  // demands >= 1, monotone in j
            const double length = chain + dist[node(j - 1)][0];
            if (length > demands.max_trip_distance_km) continue;
            if (trip_energy(length, j - i, energy) > demands.energy_budget_per_trip_wh) continue;
            arc_len[i][j] = length;
            const double cand_len = length + best_len[j];
            const int cand_trips = 1 + best_trips[j];
            if (cand_len < best_len[i] ||
                (cand_len == best_len[i] && cand_trips < best_trips[i])) {
                best_len[i] = cand_len;
                best_trips[i] = cand_trips;
            }
        }
    }
    if (std::isinf(best_len[0]))
        throw InstanceInfeasible("no feasible partition of tour");  // unreachable after check_servable

    // Forward reconstruction, taking the earliest cut that achieves the
    // optimum; yields the lexicographically earliest cut sequence.
    RoutePlan plan;
    int i = 0;
    while (i < n) {
        for (int j = i + 1; j <= n; ++j) {
            if (std::isinf(arc_len[i][j])) continue;
            if (arc_len[i][j] + best_len[j] == best_len[i] && 1 + best_trips[j] == best_trips[i]) {
                plan.trips.push_back(make_trip(tour, i, j, ctx));
                i = j;
                break;
            }
        }
    }
    for (const auto& t : plan.trips) plan.total_length_km += t.length_km;
    return plan;
}

RoutePlan split_giant_tour(const GiantTour& tour, const DeliveryInstance& instance,
                           const Isc3Demands& demands, const EnergyParams& energy) {
    Models models;
    models.energy = energy;
    EvalContext ctx(instance, demands, models);
    return split_giant_tour(tour, ctx);
}

Objective evaluate(const GiantTour& tour, const EvalContext& ctx) {
    const RoutePlan plan = split_giant_tour(tour, ctx);
    const FeasibilityReport report = ctx.check(plan);
    Objective obj;
    obj.total_length_km = plan.total_length_km;
    obj.penalty = penalty(report, ctx.weights());
    obj.value = obj.total_length_km + obj.penalty;
    return obj;
}

Objective evaluate(const GiantTour& tour, const DeliveryInstance& instance,
                   const Isc3Demands& demands, const Models& models, const PenaltyWeights& weights) {
    EvalContext ctx(instance, demands, models, weights);
    return evaluate(tour, ctx);
}

GiantTour apply_move(const GiantTour& tour, const Move& move) {
    const int n = static_cast<int>(tour.size());
    auto in_range = [&](int k) { return k >= 0 && k < n; };
    GiantTour out = tour;
    switch (move.kind) {
        case MoveKind::two_opt: {
            if (!in_range(move.i) || !in_range(move.j) || move.i > move.j)
                throw IndexError("two_opt indices out of range");
            std::reverse(out.begin() + move.i, out.begin() + move.j + 1);
            return out;
        }
        case MoveKind::relocate: {
            if (!in_range(move.i) || !in_range(move.j))
                throw IndexError("relocate indices out of range");
            const int v = out[move.i];
            out.erase(out.begin() + move.i);
            out.insert(out.begin() + move.j, v);
            return out;
        }
        case MoveKind::swap: {
            if (!in_range(move.i) || !in_range(move.j))
                throw IndexError("swap indices out of range");
            std::swap(out[move.i], out[move.j]);
            return out;
        }
        case MoveKind::or_opt: {
            if (move.len < 1 || !in_range(move.i) || move.i + move.len > n ||
                move.j < 0 || move.j + move.len > n)
                throw IndexError("or_opt indices out of range");
            std::vector<int> seg(out.begin() + move.i, out.begin() + move.i + move.len);
            out.erase(out.begin() + move.i, out.begin() + move.i + move.len);
            out.insert(out.begin() + move.j, seg.begin(), seg.end());
            return out;
        }
    }
    throw IndexError("unknown move kind");
}

RoutePlan brute_force_optimum(const EvalContext& ctx) {
    const int n = ctx.n_stations();
    if (n > 9) throw TooLarge("brute_force_optimum is guarded at n <= 9, got n = " + std::to_string(n));
    check_servable(ctx);

    GiantTour perm(n);
    std::iota(perm.begin(), perm.end(), 0);

    bool found = false;
    double best_value = std::numeric_limits<double>::infinity();
    GiantTour best_tour;
    do {
        const Objective obj = evaluate(perm, ctx);
        if (!obj.feasible()) continue;
        if (obj.value < best_value) {
            best_value = obj.value;
            best_tour = perm;
            found = true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));

    if (!found) throw NoFeasiblePlan("no permutation yields a penalty-free plan");
    return split_giant_tour(best_tour, ctx);
}

}  // namespace isc3
