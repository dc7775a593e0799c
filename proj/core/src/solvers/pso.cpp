#include <algorithm>
#include <limits>
#include <numeric>

#include "common.hpp"

namespace isc3::detail {

namespace {

// Random-key decoding: the permutation is the argsort of the keys, with
// the index as tie-breaker so decoding is total and deterministic.
GiantTour decode_keys(const std::vector<double>& keys) {
    GiantTour perm(keys.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(), [&](int a, int b) {
        if (keys[a] != keys[b]) return keys[a] < keys[b];
        return a < b;
    });
    return perm;
}

// Rewrites keys so they decode to `perm` while keeping the key multiset.
std::vector<double> encode_perm(const GiantTour& perm, std::vector<double> keys) {
    std::sort(keys.begin(), keys.end());
    std::vector<double> out(keys.size());
    for (std::size_t k = 0; k < perm.size(); ++k) out[perm[k]] = keys[k];
    return out;
}

}  // namespace

// Random-key PSO; the "hybrid" part is a periodic 2-opt descent on the
// global best, counted against the evaluation budget.
void run_pso(const EvalContext& ctx, const SolverConfig& cfg, Budget& budget, Rng& rng) {
    const int n = ctx.n_stations();
    const PsoParams& p = cfg.pso;

    struct Particle {
        std::vector<double> position;
        std::vector<double> velocity;
        std::vector<double> best_position;
        double best_value = std::numeric_limits<double>::infinity();
    };

    std::vector<Particle> swarm;
    swarm.reserve(p.swarm);
    std::vector<double> global_best_position;
    double global_best_value = std::numeric_limits<double>::infinity();

    for (int i = 0; i < p.swarm && !budget.exhausted(); ++i) {
        Particle particle;
        particle.position.resize(n);
        particle.velocity.assign(n, 0.0);
        for (double& x : particle.position) x = uniform_unit(rng);
        const double value = budget.eval(decode_keys(particle.position)).value;
        particle.best_position = particle.position;
        particle.best_value = value;
        if (value < global_best_value) {
            global_best_value = value;
            global_best_position = particle.position;
        }
        swarm.push_back(std::move(particle));
    }
    if (swarm.empty()) return;

    long long iteration = 0;
    while (!budget.exhausted()) {
        ++iteration;
        for (auto& particle : swarm) {
            if (budget.exhausted()) return;
            for (int d = 0; d < n; ++d) {
                const double r1 = uniform_unit(rng);
                const double r2 = uniform_unit(rng);
                particle.velocity[d] =
                    p.inertia * particle.velocity[d] +
                    p.cognitive * r1 * (particle.best_position[d] - particle.position[d]) +
                    p.social * r2 * (global_best_position[d] - particle.position[d]);
                particle.position[d] += particle.velocity[d];
            }
            const double value = budget.eval(decode_keys(particle.position)).value;
            if (value < particle.best_value) {
                particle.best_value = value;
                particle.best_position = particle.position;
            }
            if (value < global_best_value) {
                global_best_value = value;
                global_best_position = particle.position;
            }
        }

        if (p.local_search_period > 0 && iteration % p.local_search_period == 0 &&
            !budget.exhausted()) {
            GiantTour tour = decode_keys(global_best_position);
            double value = global_best_value;
            two_opt_descent(tour, value, budget);
            if (value < global_best_value) {
                global_best_value = value;
                global_best_position = encode_perm(tour, global_best_position);
            }
        }
    }
}

}  // namespace isc3::detail
