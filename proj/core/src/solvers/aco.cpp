#include <algorithm>
#include <cmath>
#include <limits>

#include "common.hpp"

namespace isc3::detail {

// Ant colony over directed (depot + station) arcs with MMAS-style
// pheromone bounds and best-so-far deposit.
void run_aco(const EvalContext& ctx, const SolverConfig& cfg, Budget& budget, Rng& rng) {
    const int n = ctx.n_stations();
    const AcoParams& p = cfg.aco;
    const auto& dist = ctx.dist();

    const double tau_min = p.tau_min_factor * p.tau0;
    const double tau_max = p.tau_max_factor * p.tau0;
    std::vector<std::vector<double>> tau(n + 1, std::vector<double>(n + 1, p.tau0));

    // Heuristic attractiveness; distances clamped away from zero so
    // coincident points stay selectable.
    std::vector<std::vector<double>> eta(n + 1, std::vector<double>(n + 1, 0.0));
    double dist_sum = 0.0;
    int dist_count = 0;
    for (int i = 0; i <= n; ++i) {
        for (int j = 0; j <= n; ++j) {
            if (i == j) continue;
            eta[i][j] = 1.0 / std::max(dist[i][j], 1e-9);
            dist_sum += dist[i][j];
            ++dist_count;
        }
    }
    const double deposit_q = dist_count > 0 ? dist_sum / dist_count : 1.0;

    double best_value = std::numeric_limits<double>::infinity();
    GiantTour best_tour;

    std::vector<double> weight(n);
    while (!budget.exhausted()) {
        for (int ant = 0; ant < p.ants && !budget.exhausted(); ++ant) {
            GiantTour tour;
            tour.reserve(n);
            std::vector<bool> visited(n, false);
            int current = 0;  // depot node
            for (int step = 0; step < n; ++step) {
                double total = 0.0;
                for (int s = 0; s < n; ++s) {
                    weight[s] = 0.0;
                    if (visited[s]) continue;
                    weight[s] = std::pow(tau[current][s + 1], p.alpha) *
                                std::pow(eta[current][s + 1], p.beta);
                    total += weight[s];
                }
                int chosen = -1;
                if (total > 0.0) {
                    const double r = uniform_unit(rng) * total;
                    double cum = 0.0;
                    for (int s = 0; s < n; ++s) {
                        if (visited[s]) continue;
                        cum += weight[s];
                        if (cum >= r) {
                            chosen = s;
                            break;
                        }
                    }
                }
                if (chosen < 0) {  // numeric fallback: first unvisited
                    for (int s = 0; s < n && chosen < 0; ++s)
                        if (!visited[s]) chosen = s;
                }
                visited[chosen] = true;
                tour.push_back(chosen);
                current = chosen + 1;
            }

            const Objective obj = budget.eval(tour);
            if (obj.value < best_value) {
                best_value = obj.value;
                best_tour = tour;
            }
        }

        // Evaporate everywhere, deposit along the best-so-far tour, clamp.
        for (auto& row : tau)
            for (double& t : row) t = std::max(tau_min, t * (1.0 - p.evaporation));
        if (!best_tour.empty()) {
            const double deposit = deposit_q / std::max(best_value, 1e-9);
            int prev = 0;
            for (int s : best_tour) {
                tau[prev][s + 1] = std::min(tau_max, tau[prev][s + 1] + deposit);
                prev = s + 1;
            }
            tau[prev][0] = std::min(tau_max, tau[prev][0] + deposit);
        }
    }
}

}  // namespace isc3::detail
