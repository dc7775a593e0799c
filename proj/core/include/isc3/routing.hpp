#pragma once

#include <vector>

#include "isc3/constraints.hpp"
#include "isc3/instance.hpp"
#include "isc3/plan.hpp"

namespace isc3 {

// Precomputed evaluation state for one (instance, demands, models) triple:
// distance matrix, per-leg minimum-rate cache, per-station sensing
// thresholds. Immutable once built; safe to share across concurrent
// evaluations.
class EvalContext {
public:
    EvalContext(const DeliveryInstance& instance, const Isc3Demands& demands, const Models& models,
                const PenaltyWeights& weights = {});

    const DeliveryInstance& instance() const { return *instance_; }
    const Isc3Demands& demands() const { return demands_; }
    const Models& models() const { return models_; }
    const PenaltyWeights& weights() const { return weights_; }
    const std::vector<std::vector<double>>& dist() const { return dist_; }
    int n_stations() const { return static_cast<int>(instance_->stations.size()); }

    // Same report as check_route_feasibility, served from the caches.
    FeasibilityReport check(const RoutePlan& plan) const;

private:
    const DeliveryInstance* instance_;
    Isc3Demands demands_;
    Models models_;
    PenaltyWeights weights_;
    std::vector<std::vector<double>> dist_;
    std::vector<std::vector<std::pair<double, GeoPoint>>> leg_rate_;
    std::vector<double> sensing_threshold_;
    double accuracy_ = 1.0;
};

// Cuts a giant tour into depot-anchored trips, each feasible w.r.t.
// capacity, max trip distance, and per-trip energy budget, minimizing the
// summed trip length (shortest path on the DAG of contiguous segments).
// Ties break toward fewer trips, then lexicographically earliest cuts.
// Throws InstanceInfeasible naming the first station whose solo round trip
// violates a budget.
RoutePlan split_giant_tour(const GiantTour& tour, const EvalContext& ctx);
RoutePlan split_giant_tour(const GiantTour& tour, const DeliveryInstance& instance,
                           const Isc3Demands& demands, const EnergyParams& energy);

// Split + feasibility + penalty; pure and deterministic.
Objective evaluate(const GiantTour& tour, const EvalContext& ctx);
Objective evaluate(const GiantTour& tour, const DeliveryInstance& instance,
                   const Isc3Demands& demands, const Models& models,
                   const PenaltyWeights& weights = {});

enum class MoveKind { two_opt, relocate, swap, or_opt };

struct Move {
    MoveKind kind;
    int i = 0;
    int j = 0;
    int len = 1;  // segment length for or_opt
};

// Returns the moved tour; the input is untouched. Throws IndexError for
// out-of-range indices. two_opt(i, i) and swap(i, i) are identities;
// two_opt is an involution.
GiantTour apply_move(const GiantTour& tour, const Move& move);

// Exact oracle: every permutation, optimally split, feasible minimum.
// Guarded at n <= 9 (throws TooLarge); throws NoFeasiblePlan when no
// permutation splits into a penalty-free plan.
RoutePlan brute_force_optimum(const EvalContext& ctx);

}  // namespace isc3
