#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isc3/errors.hpp"
#include "isc3/routing.hpp"
#include "isc3/rng.hpp"
#include "helpers.hpp"

using namespace isc3;

namespace {

// Independent of the library path: the textbook chain, written out.
double oracle_rate(const GeoPoint& p, const BaseStation& bs, double noise_dbm) {
    const double d = std::max(std::hypot(p.x - bs.location.x, p.y - bs.location.y), 0.001);
    const double fspl = 20.0 * std::log10(d) + 20.0 * std::log10(bs.carrier_freq_mhz) + 32.44;
    const double snr_db = bs.tx_power_dbm - fspl - noise_dbm;
    return bs.bandwidth_hz * std::log2(1.0 + std::pow(10.0, snr_db / 10.0));
}

RoutePlan random_plan(const DeliveryInstance& inst, Rng& rng) {
    GiantTour tour(inst.stations.size());
    for (std::size_t i = 0; i < tour.size(); ++i) tour[i] = static_cast<int>(i);
    shuffle(tour, rng);
    RoutePlan plan;
    std::size_t i = 0;
    while (i < tour.size()) {
        const std::size_t len = 1 + uniform_u64(rng, std::min<std::size_t>(4, tour.size() - i));
        Trip trip;
        trip.stations.assign(tour.begin() + i, tour.begin() + i + len);
        plan.trips.push_back(std::move(trip));
        i += len;
    }
    return plan;
}

}  // namespace

TEST_CASE("fspl_db at reference arguments") {
    CHECK(fspl_db(1.0, 1.0) == doctest::Approx(32.44).epsilon(1e-12));
    CHECK(fspl_db(10.0, 100.0) == doctest::Approx(92.44).epsilon(1e-12));
    // d = 0 clamps to 1 m.
    CHECK(fspl_db(0.0, 2000.0) ==
          doctest::Approx(-27.56 + 20.0 * std::log10(2000.0)).epsilon(1e-12));
    CHECK(fspl_db(0.0, 2000.0) == fspl_db(0.001, 2000.0));
    CHECK_THROWS_AS(fspl_db(1.0, 0.0), ArgumentError);
    CHECK_THROWS_AS(fspl_db(-1.0, 100.0), ArgumentError);
}

TEST_CASE("fspl_db is non-decreasing in distance and frequency") {
    double prev = fspl_db(0.001, 500.0);
    for (double d = 0.01; d < 100.0; d *= 1.7) {
        const double v = fspl_db(d, 500.0);
        CHECK(v >= prev);
        prev = v;
    }
    prev = fspl_db(5.0, 1.0);
    for (double f = 2.0; f < 10000.0; f *= 2.1) {
        const double v = fspl_db(5.0, f);
        CHECK(v >= prev);
        prev = v;
    }
}

TEST_CASE("achievable_rate basics") {
    LinkParams link;
    CHECK(achievable_rate(GeoPoint{0, 0, Frame::planar}, {}, link) == 0.0);

    // SNR exactly 0 dB with B = 1 MHz: rate is 1 Mbit/s. At d = 1 km and
    // f = 1 MHz the path loss is 32.44 dB, so tx = noise + 32.44.
    BaseStation bs{"B", {1.0, 0.0, Frame::planar}, -100.0 + 32.44, 1.0, 1.0e6};
    const double rate = achievable_rate(GeoPoint{0.0, 0.0, Frame::planar}, {bs}, link);
    CHECK(rate == doctest::Approx(1.0e6).epsilon(1e-9));
}

TEST_CASE("achievable_rate equals the hand-composed FSPL/SNR/Shannon chain") {
    const auto inst = testutil::canonical_instance(1);
    LinkParams link;
    Rng rng(99);
    for (int k = 0; k < 50; ++k) {
        const GeoPoint p{uniform_real(rng, 0.0, 30.0), uniform_real(rng, 0.0, 30.0), Frame::planar};
        double expected = 0.0;
        for (const auto& bs : inst.base_stations)
            expected = std::max(expected, oracle_rate(p, bs, link.noise_power_dbm));
        CHECK(achievable_rate(p, inst.base_stations, link) ==
              doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("achievable_rate is monotone non-increasing away from a lone base station") {
    LinkParams link;
    std::vector<BaseStation> bs{{"B", {0.0, 0.0, Frame::planar}, 40.0, 2000.0, 1.0e6}};
    double prev = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 1000; ++i) {
        const GeoPoint p{0.01 * (i + 1), 0.0, Frame::planar};
        const double r = achievable_rate(p, bs, link);
        CHECK(r <= prev);
        prev = r;
    }
}

TEST_CASE("sensing_accuracy is base times visibility") {
    CHECK(sensing_accuracy({1.0, 0.0}, {0.98}) == doctest::Approx(0.98));
    CHECK(sensing_accuracy({0.9, 0.0}, {0.98}) == doctest::Approx(0.882));
    CHECK(sensing_accuracy({0.73, 0.0}, {1.0}) == doctest::Approx(0.73));
}

TEST_CASE("trip_energy is linear") {
    EnergyParams e{2.5, 1.0};
    CHECK(trip_energy(0.0, 0, e) == 0.0);
    CHECK(trip_energy(75.0, 5, e) == doctest::Approx(192.5).epsilon(1e-15));
    // Sum over trips equals energy of concatenated lengths/counts.
    CHECK(trip_energy(30.0, 2, e) + trip_energy(45.0, 3, e) ==
          doctest::Approx(trip_energy(75.0, 5, e)).epsilon(1e-12));
}

TEST_CASE("empty plan passes with zero violations") {
    const auto inst = testutil::canonical_instance(1);
    const Models m = testutil::default_models();
    const auto report = check_route_feasibility(RoutePlan{}, testutil::paper_demands(), inst,
                                                m.link, m.energy, m.sensing);
    CHECK(report.pass);
    for (const auto& rec : report.records) {
        CHECK(rec.pass);
        CHECK(rec.violation == 0.0);
    }
    CHECK(penalty(report, PenaltyWeights{}) == 0.0);
}

TEST_CASE("over-length trip fails the distance record with the exact violation") {
    DeliveryInstance inst;
    inst.frame = Frame::planar;
    inst.depot = {0.0, 0.0, Frame::planar};
    inst.stations.push_back({"FAR", {40.0, 0.0, Frame::planar}, 1, 0.5});
    // Strong signal everywhere so only the distance record can fail.
    inst.base_stations.push_back({"B", {20.0, 0.0, Frame::planar}, 80.0, 2000.0, 1.0e6});
    inst.weather = {1.0, 0.0};

    Isc3Demands demands;
    demands.max_trip_distance_km = 75.0;
    demands.min_sensing_accuracy = 0.5;
    demands.energy_budget_per_trip_wh = 500.0;

    RoutePlan plan;
    Trip t;
    t.stations = {0};
    plan.trips.push_back(t);

    const Models m = testutil::default_models();
    const auto report = check_route_feasibility(plan, demands, inst, m.link, m.energy, m.sensing);
    CHECK_FALSE(report.pass);
    const auto& rec = report.records[1];
    CHECK(rec.kind == ConstraintKind::trip_distance);
    CHECK_FALSE(rec.pass);
    CHECK(rec.worst_value == doctest::Approx(80.0).epsilon(1e-15));
    CHECK(rec.violation == doctest::Approx(5.0).epsilon(1e-12));
}

TEST_CASE("plans referencing unknown stations are rejected") {
    const auto inst = testutil::canonical_instance(1);
    RoutePlan plan;
    Trip t;
    t.stations = {42};
    plan.trips.push_back(t);
    const Models m = testutil::default_models();
    CHECK_THROWS_AS(
        check_route_feasibility(plan, testutil::paper_demands(), inst, m.link, m.energy, m.sensing),
        UnknownStation);
}

TEST_CASE("cached evaluation context reproduces the direct checker bit-for-bit") {
    const auto inst = testutil::canonical_instance(5);
    const Models m = testutil::default_models();
    const Isc3Demands demands = testutil::paper_demands();
    EvalContext ctx(inst, demands, m);
    Rng rng(4242);
    for (int k = 0; k < 25; ++k) {
        const RoutePlan plan = random_plan(inst, rng);
        const auto direct = check_route_feasibility(plan, demands, inst, m.link, m.energy, m.sensing);
        const auto cached = ctx.check(plan);
        REQUIRE(direct.records.size() == cached.records.size());
        CHECK(direct.pass == cached.pass);
        for (std::size_t i = 0; i < direct.records.size(); ++i) {
            CHECK(direct.records[i].worst_value == cached.records[i].worst_value);
            CHECK(direct.records[i].violation == cached.records[i].violation);
            CHECK(direct.records[i].pass == cached.records[i].pass);
        }
        CHECK(penalty(direct, PenaltyWeights{}) == penalty(cached, PenaltyWeights{}));
    }
}

TEST_CASE("feasibility report matches a 10x finer sampler") {
    const auto inst = testutil::canonical_instance(1);
    Models m = testutil::default_models();
    const Isc3Demands demands = testutil::paper_demands();
    EvalContext ctx(inst, demands, m);

    GiantTour tour;
    for (std::size_t i = 0; i < inst.stations.size(); ++i) tour.push_back(static_cast<int>(i));
    const RoutePlan plan = split_giant_tour(tour, ctx);

    const auto coarse = check_route_feasibility(plan, demands, inst, m.link, m.energy, m.sensing);
    LinkParams fine_link = m.link;
    fine_link.sample_step_km = m.link.sample_step_km / 10.0;
    const auto fine = check_route_feasibility(plan, demands, inst, fine_link, m.energy, m.sensing);

    for (std::size_t i = 0; i < coarse.records.size(); ++i) {
        CHECK(coarse.records[i].pass == fine.records[i].pass);
        if (coarse.records[i].kind == ConstraintKind::data_rate) {
            // The finer sweep can only lower the minimum, and on a smooth
            // field by no more than a sliver.
            CHECK(fine.records[i].worst_value <= coarse.records[i].worst_value);
            CHECK(fine.records[i].worst_value ==
                  doctest::Approx(coarse.records[i].worst_value).epsilon(0.01));
        } else {
            CHECK(coarse.records[i].worst_value == fine.records[i].worst_value);
        }
    }
}

TEST_CASE("halving the sample step never flips a failing rate check to passing") {
    // Weak coverage: the rate constraint fails on many plans.
    auto inst = testutil::canonical_instance(17);
    inst.base_stations.resize(1);
    inst.base_stations[0].tx_power_dbm = 10.0;

    Isc3Demands demands = testutil::paper_demands();
    Models coarse_models = testutil::default_models();
    Models fine_models = coarse_models;
    fine_models.link.sample_step_km = coarse_models.link.sample_step_km / 2.0;

    Rng rng(555);
    int failing_seen = 0;
    for (int k = 0; k < 40; ++k) {
        const RoutePlan plan = random_plan(inst, rng);
        const auto coarse = check_route_feasibility(plan, demands, inst, coarse_models.link,
                                                    coarse_models.energy, coarse_models.sensing);
        const auto fine = check_route_feasibility(plan, demands, inst, fine_models.link,
                                                  fine_models.energy, fine_models.sensing);
        const auto& coarse_rate = coarse.records[3];
        const auto& fine_rate = fine.records[3];
        REQUIRE(coarse_rate.kind == ConstraintKind::data_rate);
        if (!coarse_rate.pass) {
            ++failing_seen;
            CHECK_FALSE(fine_rate.pass);
        }
        CHECK(fine_rate.worst_value <= coarse_rate.worst_value);
    }
    CHECK(failing_seen > 0);  // the property must actually bite
}

TEST_CASE("penalty arithmetic") {
    FeasibilityReport report;
    ConstraintRecord rec;
    rec.kind = ConstraintKind::trip_distance;
    rec.pass = false;
    rec.threshold = 75.0;
    rec.worst_value = 82.5;
    rec.violation = 7.5;  // 10% of the threshold
    report.records.push_back(rec);
    report.pass = false;

    PenaltyWeights w{};
    w.trip_distance = 100.0;
    CHECK(penalty(report, w) == doctest::Approx(10.0).epsilon(1e-12));

    PenaltyWeights doubled = w;
    doubled.trip_distance *= 2.0;
    CHECK(penalty(report, doubled) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("feasibility iff zero penalty on randomized plans") {
    auto inst = testutil::canonical_instance(23);
    inst.base_stations.resize(2);
    inst.base_stations[0].tx_power_dbm = 14.0;  // marginal coverage: both outcomes occur
    inst.base_stations[1].tx_power_dbm = 14.0;
    const Models m = testutil::default_models();
    Isc3Demands demands = testutil::paper_demands();
    demands.max_trip_distance_km = 40.0;
    EvalContext ctx(inst, demands, m);

    Rng rng(808);
    int pass_seen = 0, fail_seen = 0;
    for (int k = 0; k < 60; ++k) {
        const RoutePlan plan = random_plan(inst, rng);
        const auto report = ctx.check(plan);
        const double p = penalty(report, PenaltyWeights{});
        CHECK(report.pass == (p == 0.0));
        (report.pass ? pass_seen : fail_seen)++;
    }
    CHECK(pass_seen > 0);
    CHECK(fail_seen > 0);
}
