#include <chrono>

#include "common.hpp"
#include "isc3/errors.hpp"
#include "isc3/log.hpp"

namespace isc3 {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::aco: return "aco";
        case Algorithm::hybrid_pso: return "hybrid_pso";
        case Algorithm::sa: return "sa";
        case Algorithm::ga: return "ga";
    }
    return "unknown";
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "aco") return Algorithm::aco;
    if (s == "hybrid_pso") return Algorithm::hybrid_pso;
    if (s == "sa") return Algorithm::sa;
    if (s == "ga") return Algorithm::ga;
    throw ArgumentError("unknown algorithm '" + s + "' (expected aco, hybrid_pso, sa, or ga)");
}

void SolverConfig::validate() const {
    if (eval_budget < 1) throw ValidationError("eval_budget must be >= 1");
    if (time_limit_s && *time_limit_s <= 0.0) throw ValidationError("time_limit_s must be > 0");
    if (ga.population < 1 || ga.tournament < 1 || ga.elitism < 0 ||
        ga.mutation_rate < 0.0 || ga.mutation_rate > 1.0)
        throw ValidationError("invalid ga parameters");
    if (sa.cooling <= 0.0 || sa.cooling >= 1.0 || sa.epoch_factor < 1 || sa.probes < 0 ||
        sa.initial_accept <= 0.0 || sa.initial_accept >= 1.0)
        throw ValidationError("invalid sa parameters");
    if (aco.ants < 1 || aco.evaporation < 0.0 || aco.evaporation > 1.0 || aco.tau0 <= 0.0 ||
        aco.tau_min_factor <= 0.0 || aco.tau_max_factor < aco.tau_min_factor)
        throw ValidationError("invalid aco parameters");
    if (pso.swarm < 1 || pso.local_search_period < 0)
        throw ValidationError("invalid pso parameters");
    if (penalty_weights.capacity < 0.0 || penalty_weights.trip_distance < 0.0 ||
        penalty_weights.trip_energy < 0.0 || penalty_weights.data_rate < 0.0 ||
        penalty_weights.sensing < 0.0)
        throw ValidationError("penalty weights must be >= 0");
}

SolverResult solve(const DeliveryInstance& instance, const Isc3Demands& demands,
                   const Models& models, const SolverConfig& cfg) {
    cfg.validate();
    const auto start = std::chrono::steady_clock::now();
    EvalContext ctx(instance, demands, models, cfg.penalty_weights);

    detail::Budget budget(ctx, cfg);
    Rng rng(cfg.seed);

    if (ctx.n_stations() == 1) {
        budget.eval(GiantTour{0});  // only one tour exists
    } else {
        switch (cfg.algorithm) {
            case Algorithm::aco: detail::run_aco(ctx, cfg, budget, rng); break;
            case Algorithm::hybrid_pso: detail::run_pso(ctx, cfg, budget, rng); break;
            case Algorithm::sa: detail::run_sa(ctx, cfg, budget, rng); break;
            case Algorithm::ga: detail::run_ga(ctx, cfg, budget, rng); break;
        }
    }

    SolverResult result;
    result.algorithm = cfg.algorithm;
    result.seed = cfg.seed;
    result.config = cfg;
    result.status = budget.has_feasible() ? SolveStatus::ok : SolveStatus::no_feasible_found;
    result.best_plan = split_giant_tour(budget.result_tour(), ctx);
    result.feasibility = ctx.check(result.best_plan);
    result.best_objective.total_length_km = result.best_plan.total_length_km;
    result.best_objective.penalty = penalty(result.feasibility, ctx.weights());
    result.best_objective.value =
        result.best_objective.total_length_km + result.best_objective.penalty;
    result.evaluations_used = budget.used();
    result.convergence_trace = budget.trace();
    result.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    log::info("solve ", to_string(cfg.algorithm), " seed=", cfg.seed,
              " evals=", result.evaluations_used, " best=", result.best_objective.value);
    return result;
}

ComparisonTable compare(const DeliveryInstance& instance, const Isc3Demands& demands,
                        const Models& models, const std::vector<SolverConfig>& configs) {
    if (configs.empty()) throw ArgumentError("compare requires at least one config");
    ComparisonTable table;
    table.rows.reserve(configs.size());
    for (const auto& cfg : configs) {
        ComparisonRow row;
        row.config = cfg;
        try {
            row.result = solve(instance, demands, models, cfg);
        } catch (const Error& e) {
            row.error = e.what();
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace isc3
