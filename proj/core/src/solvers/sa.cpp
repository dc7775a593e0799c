#include <algorithm>
#include <cmath>

#include "common.hpp"

namespace isc3::detail {

// Simulated annealing over giant tours. The starting temperature is
// calibrated from random probes so the median uphill move is accepted with
// the configured probability, which adapts the schedule to the instance
// scale.
void run_sa(const EvalContext& ctx, const SolverConfig& cfg, Budget& budget, Rng& rng) {
    const int n = ctx.n_stations();
    const SaParams& p = cfg.sa;

    GiantTour current = random_permutation(n, rng);
    if (budget.exhausted()) return;
    double current_value = budget.eval(current).value;

    std::vector<double> uphill;
    for (int k = 0; k < p.probes && !budget.exhausted(); ++k) {
        const GiantTour neighbor = apply_move(current, random_neighbor_move(n, rng));
        const double delta = budget.eval(neighbor).value - current_value;
        if (delta > 0.0) uphill.push_back(delta);
    }
    double temperature = 1.0;
    if (!uphill.empty()) {
        std::sort(uphill.begin(), uphill.end());
        const double median = uphill[(uphill.size() - 1) / 2];
        temperature = median / std::log(1.0 / p.initial_accept);
    }

    const long long epoch = static_cast<long long>(p.epoch_factor) * n;
    while (!budget.exhausted()) {
        for (long long k = 0; k < epoch && !budget.exhausted(); ++k) {
            const GiantTour neighbor = apply_move(current, random_neighbor_move(n, rng));
            const double value = budget.eval(neighbor).value;
            const double delta = value - current_value;
            if (delta <= 0.0 || uniform_unit(rng) < std::exp(-delta / temperature)) {
                current = neighbor;
                current_value = value;
            }
        }
        temperature *= p.cooling;
    }
}

}  // namespace isc3::detail
