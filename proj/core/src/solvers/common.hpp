#pragma once

#include <chrono>
#include <limits>
#include <numeric>
#include <vector>

#include "isc3/rng.hpp"
#include "isc3/routing.hpp"
#include "isc3/solvers.hpp"

namespace isc3::detail {

// Budgeted objective evaluator shared by the four solvers. Counts
// evaluations, keeps the incumbents (best feasible by value, least
// penalized otherwise) and the convergence trace.
class Budget {
public:
    Budget(const EvalContext& ctx, const SolverConfig& cfg)
        : ctx_(ctx), limit_(cfg.eval_budget), time_limit_(cfg.time_limit_s),
          start_(std::chrono::steady_clock::now()) {}

    Objective eval(const GiantTour& tour) {
        const Objective obj = evaluate(tour, ctx_);
        ++used_;
        if (obj.value < best_value_) {
            best_value_ = obj.value;
            trace_.push_back({used_, obj.value});
        }
        if (obj.feasible()) {
            if (!has_feasible_ || obj.value < feasible_value_) {
                has_feasible_ = true;
                feasible_value_ = obj.value;
                feasible_tour_ = tour;
            }
        } else if (obj.penalty < least_penalty_ ||
                   (obj.penalty == least_penalty_ && obj.value < least_penalty_value_)) {
            least_penalty_ = obj.penalty;
            least_penalty_value_ = obj.value;
            least_penalty_tour_ = tour;
        }
        return obj;
    }

    bool exhausted() const {
        if (used_ >= limit_) return true;
        if (time_limit_) {
            const auto elapsed = std::chrono::duration<double>(
                std::chrono::steady_clock::now() - start_).count();
            if (elapsed >= *time_limit_) return true;
        }
        return false;
    }

    long long used() const { return used_; }
    const std::vector<TracePoint>& trace() const { return trace_; }
    bool has_feasible() const { return has_feasible_; }
    const GiantTour& result_tour() const {
        return has_feasible_ ? feasible_tour_ : least_penalty_tour_;
    }

private:
    const EvalContext& ctx_;
    long long limit_;
    std::optional<double> time_limit_;
    std::chrono::steady_clock::time_point start_;
    long long used_ = 0;
    double best_value_ = std::numeric_limits<double>::infinity();
    std::vector<TracePoint> trace_;
    bool has_feasible_ = false;
    double feasible_value_ = std::numeric_limits<double>::infinity();
    GiantTour feasible_tour_;
    double least_penalty_ = std::numeric_limits<double>::infinity();
    double least_penalty_value_ = std::numeric_limits<double>::infinity();
    GiantTour least_penalty_tour_;
};

inline GiantTour random_permutation(int n, Rng& rng) {
    GiantTour t(n);
    std::iota(t.begin(), t.end(), 0);
    shuffle(t, rng);
    return t;
}

// Uniform neighbor from {2-opt, relocate, swap}; identity-producing index
// pairs are avoided so a proposal never wastes an evaluation.
inline Move random_neighbor_move(int n, Rng& rng) {
    const int kind = uniform_int(rng, 0, 2);
    if (kind == 0) {
        const int i = uniform_int(rng, 0, n - 2);
        const int j = uniform_int(rng, i + 1, n - 1);
        return Move{MoveKind::two_opt, i, j, 1};
    }
    int i = uniform_int(rng, 0, n - 1);
    int j = uniform_int(rng, 0, n - 1);
    while (j == i) j = uniform_int(rng, 0, n - 1);
    return Move{kind == 1 ? MoveKind::relocate : MoveKind::swap, i, j, 1};
}

// First-improvement 2-opt descent, bounded by the remaining budget.
inline void two_opt_descent(GiantTour& tour, double& value, Budget& budget) {
    const int n = static_cast<int>(tour.size());
    bool improved = true;
    while (improved && !budget.exhausted()) {
        improved = false;
        for (int i = 0; i < n - 1 && !improved; ++i) {
            for (int j = i + 1; j < n && !improved; ++j) {
                if (budget.exhausted()) return;
                const GiantTour cand = apply_move(tour, Move{MoveKind::two_opt, i, j, 1});
                const Objective obj = budget.eval(cand);
                if (obj.value < value) {
                    tour = cand;
                    value = obj.value;
                    improved = true;
                }
            }
        }
    }
}

void run_sa(const EvalContext& ctx, const SolverConfig& cfg, Budget& budget, Rng& rng);
void run_ga(const EvalContext& ctx, const SolverConfig& cfg, Budget& budget, Rng& rng);
void run_aco(const EvalContext& ctx, const SolverConfig& cfg, Budget& budget, Rng& rng);
void run_pso(const EvalContext& ctx, const SolverConfig& cfg, Budget& budget, Rng& rng);

}  // namespace isc3::detail
