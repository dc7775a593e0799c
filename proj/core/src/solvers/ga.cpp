#include <algorithm>

#include "common.hpp"

namespace isc3::detail {

namespace {

struct Individual {
    GiantTour tour;
    double value = 0.0;
};

// Order crossover: the child keeps p1[a..b] in place and takes the
// remaining stations in p2's order, wrapping after b.
GiantTour order_crossover(const GiantTour& p1, const GiantTour& p2, Rng& rng) {
    const int n = static_cast<int>(p1.size());
    int a = uniform_int(rng, 0, n - 1);
    int b = uniform_int(rng, 0, n - 1);
    if (a > b) std::swap(a, b);

    GiantTour child(n, -1);
    std::vector<bool> used(n, false);
    for (int k = a; k <= b; ++k) {
        child[k] = p1[k];
        used[p1[k]] = true;
    }
    int write = (b + 1) % n;
    for (int k = 0; k < n; ++k) {
        const int candidate = p2[(b + 1 + k) % n];
        if (used[candidate]) continue;
        child[write] = candidate;
        write = (write + 1) % n;
    }
    return child;
}

void mutate(GiantTour& tour, double rate, Rng& rng) {
    const int n = static_cast<int>(tour.size());
    if (n < 2) return;
    if (uniform_unit(rng) < rate) {
        const int i = uniform_int(rng, 0, n - 1);
        int j = uniform_int(rng, 0, n - 1);
        while (j == i) j = uniform_int(rng, 0, n - 1);
        std::swap(tour[i], tour[j]);
    }
    if (uniform_unit(rng) < rate) {
        const int i = uniform_int(rng, 0, n - 2);
        const int j = uniform_int(rng, i + 1, n - 1);
        std::reverse(tour.begin() + i, tour.begin() + j + 1);
    }
}

}  // namespace

void run_ga(const EvalContext& ctx, const SolverConfig& cfg, Budget& budget, Rng& rng) {
    const int n = ctx.n_stations();
    const GaParams& p = cfg.ga;

    std::vector<Individual> population;
    population.reserve(p.population);
    for (int i = 0; i < p.population && !budget.exhausted(); ++i) {
        Individual ind;
        ind.tour = random_permutation(n, rng);
        ind.value = budget.eval(ind.tour).value;
        population.push_back(std::move(ind));
    }

    auto by_value = [](const Individual& a, const Individual& b) { return a.value < b.value; };

    while (!budget.exhausted()) {
        std::stable_sort(population.begin(), population.end(), by_value);

        std::vector<Individual> next;
        next.reserve(population.size());
        for (int e = 0; e < p.elitism && e < static_cast<int>(population.size()); ++e)
            next.push_back(population[e]);

        auto tournament = [&]() -> const Individual& {
            std::size_t winner = uniform_u64(rng, population.size());
            for (int k = 1; k < p.tournament; ++k) {
                const std::size_t challenger = uniform_u64(rng, population.size());
                if (population[challenger].value < population[winner].value) winner = challenger;
            }
            return population[winner];
        };

        while (next.size() < population.size() && !budget.exhausted()) {
            const Individual& p1 = tournament();
            const Individual& p2 = tournament();
            Individual child;
            child.tour = order_crossover(p1.tour, p2.tour, rng);
            mutate(child.tour, p.mutation_rate, rng);
            child.value = budget.eval(child.tour).value;
            next.push_back(std::move(child));
        }
        if (next.empty()) break;
        population = std::move(next);
    }
}

}  // namespace isc3::detail
