#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "isc3/constraints.hpp"
#include "isc3/plan.hpp"
#include "isc3/routing.hpp"

namespace isc3 {

enum class Algorithm { aco, hybrid_pso, sa, ga };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);  // throws ArgumentError

struct GaParams {
    int population = 100;
    int tournament = 5;
    int elitism = 2;
    double mutation_rate = 0.1;  // per offspring, for each of swap and inversion
};

struct SaParams {
    double cooling = 0.95;       // geometric factor per epoch
    int epoch_factor = 100;      // proposals per epoch = epoch_factor * n
    int probes = 100;            // uphill probes used to calibrate T0
    double initial_accept = 0.8; // target acceptance for the median uphill probe
};

struct AcoParams {
    int ants = 25;
    double alpha = 1.0;
    double beta = 3.0;
    double evaporation = 0.5;
    double tau0 = 1.0;
    double tau_min_factor = 0.01;  // MMAS-style bounds [tau_min, tau_max] = factors * tau0
    double tau_max_factor = 10.0;
};

struct PsoParams {
    int swarm = 40;
    double inertia = 0.729;
    double cognitive = 1.49445;
    double social = 1.49445;
    int local_search_period = 10;  // 2-opt on the global best every k iterations
};

struct SolverConfig {
    Algorithm algorithm = Algorithm::sa;
    std::uint64_t seed = 0;
    long long eval_budget = 20000;
    std::optional<double> time_limit_s;  // unset by default; cutting on time trades determinism
    GaParams ga;
    SaParams sa;
    AcoParams aco;
    PsoParams pso;
    PenaltyWeights penalty_weights;

    void validate() const;  // throws ValidationError
};

enum class SolveStatus { ok, no_feasible_found };

struct TracePoint {
    long long eval_index;  // 1-based
    double best_value;
};

struct SolverResult {
    Algorithm algorithm = Algorithm::sa;
    std::uint64_t seed = 0;
    SolveStatus status = SolveStatus::ok;
    RoutePlan best_plan;
    Objective best_objective;
    FeasibilityReport feasibility;
    long long evaluations_used = 0;
    double wall_time_s = 0.0;
    std::vector<TracePoint> convergence_trace;  // non-increasing best-so-far
    SolverConfig config;                        // echo, defaults filled in
};

// Runs the configured metaheuristic. Deterministic for fixed inputs and
// seed (when no time limit is set). When the budget ends with only
// penalized solutions the result carries status no_feasible_found and the
// least-penalized plan. Throws InstanceInfeasible when some station cannot
// be served even by a dedicated trip.
SolverResult solve(const DeliveryInstance& instance, const Isc3Demands& demands,
                   const Models& models, const SolverConfig& cfg);

struct ComparisonRow {
    SolverConfig config;
    std::optional<SolverResult> result;  // empty when the solve failed
    std::string error;                   // failure message, empty on success
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;  // ordered as the configs were given
};

// One solve per config; per-row failures are recorded, not propagated.
ComparisonTable compare(const DeliveryInstance& instance, const Isc3Demands& demands,
                        const Models& models, const std::vector<SolverConfig>& configs);

}  // namespace isc3
