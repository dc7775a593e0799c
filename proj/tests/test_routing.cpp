#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>

#include "isc3/errors.hpp"
#include "isc3/routing.hpp"
#include "isc3/rng.hpp"
#include "helpers.hpp"

using namespace isc3;

namespace {

// Exhaustive split oracle: walk all 2^(n-1) contiguous partitions of the
// tour, keep the feasible minimum total length. Entirely independent of
// the DP in split_giant_tour.
double enumerate_partition_minimum(const GiantTour& tour, const EvalContext& ctx) {
    const int n = static_cast<int>(tour.size());
    const auto& dist = ctx.dist();
    const auto& demands = ctx.demands();
    const auto& energy = ctx.models().energy;

    auto segment_length = [&](int from, int to) {  // serves tour[from..to)
        double len = dist[0][tour[from] + 1];
        for (int k = from + 1; k < to; ++k) len += dist[tour[k - 1] + 1][tour[k] + 1];
        return len + dist[tour[to - 1] + 1][0];
    };
    auto segment_feasible = [&](int from, int to, double len) {
        int load = 0;
        for (int k = from; k < to; ++k) load += ctx.instance().stations[tour[k]].demand;
        if (load > demands.capacity) return false;
        if (len > demands.max_trip_distance_km) return false;
        return trip_energy(len, to - from, energy) <= demands.energy_budget_per_trip_wh;
    };

    double best = std::numeric_limits<double>::infinity();
    for (unsigned mask = 0; mask < (1u << (n - 1)); ++mask) {
        double total = 0.0;
        bool ok = true;
        int start = 0;
        for (int k = 0; k < n && ok; ++k) {
            const bool cut_after = k == n - 1 || (mask & (1u << k));
            if (!cut_after) continue;
            const double len = segment_length(start, k + 1);
            if (!segment_feasible(start, k + 1, len)) ok = false;
            total += len;
            start = k + 1;
        }
        if (ok) best = std::min(best, total);
    }
    return best;
}

GiantTour identity_tour(int n) {
    GiantTour t(n);
    std::iota(t.begin(), t.end(), 0);
    return t;
}

}  // namespace

TEST_CASE("split of a single station is one out-and-back trip") {
    DeliveryInstance inst;
    inst.frame = Frame::planar;
    inst.depot = {0.0, 0.0, Frame::planar};
    inst.stations.push_back({"A", {7.0, 0.0, Frame::planar}, 3, 0.9});
    inst.weather = {1.0, 0.0};
    EvalContext ctx(inst, testutil::paper_demands(), testutil::default_models());

    const RoutePlan plan = split_giant_tour(GiantTour{0}, ctx);
    REQUIRE(plan.trips.size() == 1);
    CHECK(plan.total_length_km == doctest::Approx(14.0).epsilon(1e-15));
    CHECK(plan.trips[0].load == 3);
    CHECK(plan.trips[0].energy_wh == doctest::Approx(2.5 * 14.0 + 1.0).epsilon(1e-12));
}

TEST_CASE("a station out of round-trip range makes the instance infeasible") {
    DeliveryInstance inst;
    inst.frame = Frame::planar;
    inst.depot = {0.0, 0.0, Frame::planar};
    inst.stations.push_back({"FAR", {40.0, 0.0, Frame::planar}, 1, 0.9});
    inst.weather = {1.0, 0.0};
    Isc3Demands demands;
    demands.max_trip_distance_km = 75.0;  // round trip is 80
    EvalContext ctx(inst, demands, testutil::default_models());
    try {
        split_giant_tour(GiantTour{0}, ctx);
        FAIL("expected InstanceInfeasible");
    } catch (const InstanceInfeasible& e) {
        CHECK(std::string(e.what()).find("FAR") != std::string::npos);
    }
}

TEST_CASE("split matches the exhaustive contiguous-partition oracle") {
    Rng rng(2024);
    for (int round = 0; round < 60; ++round) {
        const int n = 4 + static_cast<int>(uniform_u64(rng, 5));  // 4..8
        const auto inst = testutil::canonical_instance(1000 + round, n);
        EvalContext ctx(inst, testutil::paper_demands(), testutil::default_models());

        GiantTour tour = identity_tour(n);
        shuffle(tour, rng);

        const RoutePlan plan = split_giant_tour(tour, ctx);
        const double oracle = enumerate_partition_minimum(tour, ctx);
        CHECK(plan.total_length_km == oracle);  // exact, same arithmetic
    }
}

TEST_CASE("split ties break toward fewer trips") {
    // A at (1,0), B at (-1,0): one combined trip and two singleton trips
    // both total 4 km; the combined trip must win.
    DeliveryInstance inst;
    inst.frame = Frame::planar;
    inst.depot = {0.0, 0.0, Frame::planar};
    inst.stations.push_back({"A", {1.0, 0.0, Frame::planar}, 1, 0.9});
    inst.stations.push_back({"B", {-1.0, 0.0, Frame::planar}, 1, 0.9});
    inst.weather = {1.0, 0.0};
    EvalContext ctx(inst, testutil::paper_demands(), testutil::default_models());

    const RoutePlan plan = split_giant_tour(GiantTour{0, 1}, ctx);
    CHECK(plan.total_length_km == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(plan.trips.size() == 1);
}

TEST_CASE("split respects capacity by cutting trips") {
    DeliveryInstance inst;
    inst.frame = Frame::planar;
    inst.depot = {0.0, 0.0, Frame::planar};
    inst.stations.push_back({"A", {1.0, 0.0, Frame::planar}, 15, 0.9});
    inst.stations.push_back({"B", {2.0, 0.0, Frame::planar}, 15, 0.9});
    inst.weather = {1.0, 0.0};
    Isc3Demands demands;  // capacity 20 forces separate trips
    EvalContext ctx(inst, demands, testutil::default_models());

    const RoutePlan plan = split_giant_tour(GiantTour{0, 1}, ctx);
    REQUIRE(plan.trips.size() == 2);
    CHECK(plan.trips[0].load == 15);
    CHECK(plan.trips[1].load == 15);
    CHECK(plan.total_length_km == doctest::Approx(6.0).epsilon(1e-15));
}

TEST_CASE("every split plan is a partition of the stations") {
    Rng rng(77);
    const auto inst = testutil::canonical_instance(9);
    EvalContext ctx(inst, testutil::paper_demands(), testutil::default_models());
    for (int round = 0; round < 30; ++round) {
        GiantTour tour = identity_tour(static_cast<int>(inst.stations.size()));
        shuffle(tour, rng);
        const RoutePlan plan = split_giant_tour(tour, ctx);
        std::vector<int> seen(inst.stations.size(), 0);
        for (const auto& trip : plan.trips)
            for (int s : trip.stations) seen[s]++;
        CHECK(std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; }));
        const double sum = std::accumulate(plan.trips.begin(), plan.trips.end(), 0.0,
                                           [](double acc, const Trip& t) { return acc + t.length_km; });
        CHECK(plan.total_length_km == doctest::Approx(sum).epsilon(1e-12));
    }
}

TEST_CASE("moves behave as permutation operators") {
    const GiantTour tour{0, 1, 2, 3, 4, 5};

    SUBCASE("swap with itself is the identity") {
        CHECK(apply_move(tour, {MoveKind::swap, 2, 2, 1}) == tour);
    }
    SUBCASE("two_opt is an involution") {
        const auto once = apply_move(tour, {MoveKind::two_opt, 1, 4, 1});
        CHECK(once != tour);
        CHECK(apply_move(once, {MoveKind::two_opt, 1, 4, 1}) == tour);
        CHECK(apply_move(tour, {MoveKind::two_opt, 3, 3, 1}) == tour);
    }
    SUBCASE("relocate then its inverse restores the tour") {
        const auto moved = apply_move(tour, {MoveKind::relocate, 0, 3, 1});
        CHECK(moved == GiantTour{1, 2, 3, 0, 4, 5});
        CHECK(apply_move(moved, {MoveKind::relocate, 3, 0, 1}) == tour);
    }
    SUBCASE("or_opt shifts a segment and inverts") {
        const auto moved = apply_move(tour, {MoveKind::or_opt, 0, 2, 2});
        CHECK(moved == GiantTour{2, 3, 0, 1, 4, 5});
        CHECK(apply_move(moved, {MoveKind::or_opt, 2, 0, 2}) == tour);
    }
    SUBCASE("out-of-range indices throw") {
        CHECK_THROWS_AS(apply_move(tour, {MoveKind::swap, 0, 6, 1}), IndexError);
        CHECK_THROWS_AS(apply_move(tour, {MoveKind::two_opt, 4, 2, 1}), IndexError);
        CHECK_THROWS_AS(apply_move(tour, {MoveKind::or_opt, 5, 0, 3}), IndexError);
    }
    SUBCASE("results remain permutations") {
        Rng rng(31);
        GiantTour cur = tour;
        for (int k = 0; k < 200; ++k) {
            const int kind = uniform_int(rng, 0, 3);
            Move m;
            m.kind = static_cast<MoveKind>(kind);
            m.i = uniform_int(rng, 0, 5);
            m.j = uniform_int(rng, 0, 5);
            m.len = 1;
            if (m.kind == MoveKind::two_opt && m.i > m.j) std::swap(m.i, m.j);
            if (m.kind == MoveKind::or_opt) {
                m.len = uniform_int(rng, 1, 2);
                m.i = uniform_int(rng, 0, 6 - m.len);
                m.j = uniform_int(rng, 0, 6 - m.len);
            }
            cur = apply_move(cur, m);
            GiantTour sorted = cur;
            std::sort(sorted.begin(), sorted.end());
            CHECK(sorted == GiantTour{0, 1, 2, 3, 4, 5});
        }
    }
}

TEST_CASE("evaluate is pure and deterministic") {
    const auto inst = testutil::canonical_instance(1, 8);
    EvalContext ctx(inst, testutil::paper_demands(), testutil::default_models());
    GiantTour tour = identity_tour(8);
    const Objective a = evaluate(tour, ctx);
    const Objective b = evaluate(tour, ctx);
    CHECK(a.value == b.value);
    CHECK(a.total_length_km == b.total_length_km);
    CHECK(a.penalty == b.penalty);
    CHECK(a.value == a.total_length_km + a.penalty);
}

TEST_CASE("evaluate is invariant under consistent station relabeling") {
    const auto inst = testutil::canonical_instance(12, 7);
    EvalContext ctx(inst, testutil::paper_demands(), testutil::default_models());

    // Reverse the declaration order (ids move with their data).
    DeliveryInstance relabeled = inst;
    std::reverse(relabeled.stations.begin(), relabeled.stations.end());
    EvalContext ctx2(relabeled, testutil::paper_demands(), testutil::default_models());

    Rng rng(5);
    for (int round = 0; round < 10; ++round) {
        GiantTour tour = identity_tour(7);
        shuffle(tour, rng);
        GiantTour mapped(tour.size());
        for (std::size_t i = 0; i < tour.size(); ++i) mapped[i] = 6 - tour[i];
        CHECK(evaluate(tour, ctx).value == doctest::Approx(evaluate(mapped, ctx2).value).epsilon(1e-12));
    }
}

TEST_CASE("brute force optimum") {
    SUBCASE("two symmetric stations give a unique value") {
        DeliveryInstance inst;
        inst.frame = Frame::planar;
        inst.depot = {0.0, 0.0, Frame::planar};
        inst.stations.push_back({"A", {2.0, 0.0, Frame::planar}, 1, 0.9});
        inst.stations.push_back({"B", {-2.0, 0.0, Frame::planar}, 1, 0.9});
        inst.weather = {1.0, 0.0};
        EvalContext ctx(inst, testutil::paper_demands(), testutil::default_models());
        const RoutePlan plan = brute_force_optimum(ctx);
        CHECK(plan.total_length_km == doctest::Approx(8.0).epsilon(1e-15));
    }
    SUBCASE("n = 10 trips the guard") {
        const auto inst = testutil::canonical_instance(1, 10);
        EvalContext ctx(inst, testutil::paper_demands(), testutil::default_models());
        CHECK_THROWS_AS(brute_force_optimum(ctx), TooLarge);
    }
    SUBCASE("optimum lower-bounds every random tour") {
        const auto inst = testutil::canonical_instance(3, 6);
        EvalContext ctx(inst, testutil::paper_demands(), testutil::default_models());
        const RoutePlan best = brute_force_optimum(ctx);
        Rng rng(111);
        for (int round = 0; round < 50; ++round) {
            GiantTour tour = identity_tour(6);
            shuffle(tour, rng);
            CHECK(evaluate(tour, ctx).value >= best.total_length_km - 1e-9);
        }
    }
}
