#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "isc3/errors.hpp"
#include "isc3/instance.hpp"
#include "isc3/json_io.hpp"
#include "helpers.hpp"

using namespace isc3;

TEST_CASE("planar distance is Euclidean") {
    GeoPoint a{0.0, 0.0, Frame::planar};
    GeoPoint b{3.0, 4.0, Frame::planar};
    CHECK(distance(a, b) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(distance(a, a) == 0.0);
    CHECK(distance(a, b) == distance(b, a));
}

TEST_CASE("geodetic distance is haversine") {
    GeoPoint a{10.0, 20.0, Frame::geodetic};
    CHECK(distance(a, a) == 0.0);

    // Antipodal points: half the great circle.
    GeoPoint p{0.0, 0.0, Frame::geodetic};
    GeoPoint q{180.0, 0.0, Frame::geodetic};
    CHECK(distance(p, q) == doctest::Approx(3.14159265358979323846 * 6371.0).epsilon(1e-12));
}

TEST_CASE("distance rejects mixed frames") {
    GeoPoint a{0.0, 0.0, Frame::planar};
    GeoPoint b{0.0, 0.0, Frame::geodetic};
    CHECK_THROWS_AS(distance(a, b), FrameMismatch);
}

TEST_CASE("generate_instance is a pure function of its arguments") {
    const auto a = generate_instance(1, 10, 30.0, 5, 1, 5);
    const auto b = generate_instance(1, 10, 30.0, 5, 1, 5);
    CHECK(instance_to_json_text(a) == instance_to_json_text(b));

    const auto c = generate_instance(2, 10, 30.0, 5, 1, 5);
    bool any_coord_differs = false;
    for (std::size_t i = 0; i < a.stations.size(); ++i)
        if (a.stations[i].location.x != c.stations[i].location.x) any_coord_differs = true;
    CHECK(any_coord_differs);
}

TEST_CASE("generate_instance validates arguments") {
    CHECK_THROWS_AS(generate_instance(1, 0, 30.0, 5, 1, 5), ArgumentError);
    CHECK_THROWS_AS(generate_instance(1, 5, -1.0, 5, 1, 5), ArgumentError);
    CHECK_THROWS_AS(generate_instance(1, 5, 30.0, 5, 0, 5), ArgumentError);
    CHECK_THROWS_AS(generate_instance(1, 5, 30.0, 5, 3, 2), ArgumentError);
}

TEST_CASE("generated instances put the depot at the area center") {
    const auto inst = generate_instance(7, 4, 20.0, 2, 1, 3);
    CHECK(inst.depot.x == 10.0);
    CHECK(inst.depot.y == 10.0);
    for (const auto& s : inst.stations) {
        CHECK(s.location.x >= 0.0);
        CHECK(s.location.x <= 20.0);
        CHECK(s.demand >= 1);
        CHECK(s.demand <= 3);
    }
}

TEST_CASE("save/load round trip is structurally identical") {
    const auto inst = testutil::canonical_instance(3);
    testutil::TempFile file("inst");
    save_instance(inst, file.path());
    const auto loaded = load_instance(file.path());
    CHECK(instance_to_json(loaded) == instance_to_json(inst));
    CHECK(loaded.stations.size() == 10);
}

TEST_CASE("load rejects malformed and invalid files") {
    testutil::TempFile file("bad");

    SUBCASE("missing file") { CHECK_THROWS_AS(load_instance("/nonexistent/nowhere.json"), ParseError); }
    SUBCASE("malformed JSON") {
        file.write("{oops");
        CHECK_THROWS_AS(load_instance(file.path()), ParseError);
    }
    SUBCASE("zero stations") {
        file.write(R"({"frame":"planar","depot":{"x":0,"y":0},"stations":[],
            "base_stations":[],"weather":{"visibility":1.0,"wind_speed_mps":0}})");
        CHECK_THROWS_AS(load_instance(file.path()), ValidationError);
    }
    SUBCASE("demand zero names the station") {
        file.write(R"({"frame":"planar","depot":{"x":0,"y":0},
            "stations":[{"id":"S9","x":1,"y":1,"demand":0,"required_sensing_accuracy":0.9}],
            "base_stations":[],"weather":{"visibility":1.0,"wind_speed_mps":0}})");
        try {
            load_instance(file.path());
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(std::string(e.what()).find("S9") != std::string::npos);
        }
    }
    SUBCASE("unknown key rejected") {
        file.write(R"({"frame":"planar","depot":{"x":0,"y":0},
            "stations":[{"id":"A","x":1,"y":1,"demand":1,"required_sensing_accuracy":0.9}],
            "base_stations":[],"weather":{"visibility":1.0,"wind_speed_mps":0},"surprise":1})");
        CHECK_THROWS_AS(load_instance(file.path()), SchemaError);
    }
    SUBCASE("missing field names the field") {
        file.write(R"({"frame":"planar","depot":{"x":0,"y":0},
            "stations":[{"id":"A","x":1,"y":1,"demand":1}],
            "base_stations":[],"weather":{"visibility":1.0,"wind_speed_mps":0}})");
        try {
            load_instance(file.path());
            FAIL("expected SchemaError");
        } catch (const SchemaError& e) {
            CHECK(std::string(e.what()).find("required_sensing_accuracy") != std::string::npos);
        }
    }
    SUBCASE("duplicate station ids") {
        file.write(R"({"frame":"planar","depot":{"x":0,"y":0},
            "stations":[{"id":"A","x":1,"y":1,"demand":1,"required_sensing_accuracy":0.9},
                        {"id":"A","x":2,"y":2,"demand":1,"required_sensing_accuracy":0.9}],
            "base_stations":[],"weather":{"visibility":1.0,"wind_speed_mps":0}})");
        CHECK_THROWS_AS(load_instance(file.path()), ValidationError);
    }
}

TEST_CASE("geodetic instances load and project about the depot") {
    testutil::TempFile file("geo");
    file.write(R"({"frame":"geodetic","depot":{"lon":103.8,"lat":1.35},
        "stations":[{"id":"A","lon":103.9,"lat":1.35,"demand":2,"required_sensing_accuracy":0.9},
                    {"id":"B","lon":103.8,"lat":1.45,"demand":1,"required_sensing_accuracy":0.9}],
        "base_stations":[{"id":"T1","lon":103.85,"lat":1.4,"tx_power_dbm":40,
                          "carrier_freq_mhz":2000,"bandwidth_hz":1000000}],
        "weather":{"visibility":1.0,"wind_speed_mps":2.0}})");
    const auto geo = load_instance(file.path());
    CHECK(geo.frame == Frame::geodetic);

    const auto flat = project_to_planar(geo);
    CHECK(flat.frame == Frame::planar);
    CHECK(flat.depot.x == 0.0);
    CHECK(flat.depot.y == 0.0);
    // Local-tangent displacements agree with haversine at city scale.
    const double haversine_a = distance(geo.depot, geo.stations[0].location);
    const double planar_a = distance(flat.depot, flat.stations[0].location);
    CHECK(planar_a == doctest::Approx(haversine_a).epsilon(1e-4));
}

TEST_CASE("distance_matrix indexes depot first and matches pairwise distance") {
    const auto inst = testutil::canonical_instance(1);
    const auto m = distance_matrix(inst);
    REQUIRE(m.size() == inst.stations.size() + 1);

    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(m[i][i] == 0.0);
        for (std::size_t j = 0; j < m.size(); ++j) CHECK(m[i][j] == m[j][i]);
    }
    // Recompute element-wise from the points.
    for (std::size_t i = 1; i < m.size(); ++i) {
        CHECK(m[0][i] == distance(inst.depot, inst.stations[i - 1].location));
        for (std::size_t j = 1; j < m.size(); ++j)
            CHECK(m[i][j] == distance(inst.stations[i - 1].location, inst.stations[j - 1].location));
    }
    // Euclidean triangle inequality.
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            for (std::size_t k = 0; k < m.size(); ++k)
                CHECK(m[i][k] <= m[i][j] + m[j][k] + 1e-9);
}

TEST_CASE("one station at the depot yields a zero matrix") {
    DeliveryInstance inst;
    inst.frame = Frame::planar;
    inst.depot = {5.0, 5.0, Frame::planar};
    inst.stations.push_back({"A", {5.0, 5.0, Frame::planar}, 1, 0.9});
    inst.weather = {1.0, 0.0};
    const auto m = distance_matrix(inst);
    REQUIRE(m.size() == 2);
    CHECK(m[0][0] == 0.0);
    CHECK(m[0][1] == 0.0);
    CHECK(m[1][0] == 0.0);
    CHECK(m[1][1] == 0.0);
}

TEST_CASE("demands validation") {
    Isc3Demands d;
    CHECK_NOTHROW(d.validate());
    d.min_sensing_accuracy = 1.2;
    CHECK_THROWS_AS(d.validate(), ValidationError);
    d = {};
    d.capacity = 0;
    CHECK_THROWS_AS(d.validate(), ValidationError);
    d = {};
    d.max_trip_distance_km = 0.0;
    CHECK_THROWS_AS(d.validate(), ValidationError);
}

TEST_CASE("station_index resolves ids and rejects unknowns") {
    const auto inst = testutil::canonical_instance(1);
    CHECK(inst.station_index("S1") == 0);
    CHECK(inst.station_index("S10") == 9);
    CHECK_THROWS_AS(inst.station_index("S11"), UnknownStation);
}
