#include "isc3/instance.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "isc3/errors.hpp"
#include "isc3/json_io.hpp"
#include "isc3/rng.hpp"

namespace isc3 {

using json = nlohmann::ordered_json;

namespace {

// Strict object access: every key must be known, required keys present.
void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!known.count(key))
            throw SchemaError(where + ": unknown key '" + key + "'");
    }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw SchemaError(where + ": missing key '" + key + "'");
    return *it;
}

double as_number(const json& v, const std::string& where) {
    if (!v.is_number()) throw SchemaError(where + ": expected a number");
    return v.get<double>();
}

int as_int(const json& v, const std::string& where) {
    if (!v.is_number_integer()) throw SchemaError(where + ": expected an integer");
    return v.get<int>();
}

std::string as_string(const json& v, const std::string& where) {
    if (!v.is_string()) throw SchemaError(where + ": expected a string");
    return v.get<std::string>();
}

GeoPoint parse_point(const json& obj, Frame frame, const std::string& where,
                     std::set<std::string>* consumed_keys = nullptr) {
    GeoPoint p;
    p.frame = frame;
    if (frame == Frame::planar) {
        p.x = as_number(require(obj, "x", where), where + ".x");
        p.y = as_number(require(obj, "y", where), where + ".y");
        if (consumed_keys) consumed_keys->insert({"x", "y"});
    } else {
        p.x = as_number(require(obj, "lon", where), where + ".lon");
        p.y = as_number(require(obj, "lat", where), where + ".lat");
        if (consumed_keys) consumed_keys->insert({"lon", "lat"});
    }
    return p;
}

}  // namespace

void DeliveryInstance::validate() const {
    if (stations.empty()) throw ValidationError("instance must have at least one station");
    validate_point(depot, "depot");
    if (depot.frame != frame) throw ValidationError("depot frame differs from instance frame");

    std::set<std::string> ids;
    for (const auto& s : stations) {
        if (s.id.empty()) throw ValidationError("station with empty id");
        if (!ids.insert(s.id).second)
            throw ValidationError("duplicate station id '" + s.id + "'");
        validate_point(s.location, "station '" + s.id + "'");
        if (s.location.frame != frame)
            throw ValidationError("station '" + s.id + "' frame differs from instance frame");
        if (s.demand < 1)
            throw ValidationError("station '" + s.id + "': demand must be >= 1");
        if (!(s.required_sensing_accuracy > 0.0 && s.required_sensing_accuracy <= 1.0))
            throw ValidationError("station '" + s.id + "': required_sensing_accuracy out of (0, 1]");
    }
    std::set<std::string> bs_ids;
    for (const auto& b : base_stations) {
        if (b.id.empty()) throw ValidationError("base station with empty id");
        if (!bs_ids.insert(b.id).second)
            throw ValidationError("duplicate base station id '" + b.id + "'");
        validate_point(b.location, "base station '" + b.id + "'");
        if (b.location.frame != frame)
            throw ValidationError("base station '" + b.id + "' frame differs from instance frame");
        if (!(b.bandwidth_hz > 0.0))
            throw ValidationError("base station '" + b.id + "': bandwidth_hz must be > 0");
        if (!(b.carrier_freq_mhz > 0.0))
            throw ValidationError("base station '" + b.id + "': carrier_freq_mhz must be > 0");
    }
    if (!(weather.visibility > 0.0 && weather.visibility <= 1.0))
        throw ValidationError("weather.visibility out of (0, 1]");
    if (weather.wind_speed_mps < 0.0)
        throw ValidationError("weather.wind_speed_mps must be >= 0");
    for (const auto& z : no_fly_zones) {
        validate_point(z.center, "no-fly zone center");
        if (z.center.frame != frame)
            throw ValidationError("no-fly zone frame differs from instance frame");
        if (z.radius_km < 0.0) throw ValidationError("no-fly zone radius must be >= 0");
    }
}

int DeliveryInstance::station_index(const std::string& id) const {
    for (std::size_t i = 0; i < stations.size(); ++i)
        if (stations[i].id == id) return static_cast<int>(i);
    throw UnknownStation("unknown station id '" + id + "'");
}

void Isc3Demands::validate() const {
    if (!(min_data_rate_bps > 0.0)) throw ValidationError("min_data_rate_bps must be > 0");
    if (!(min_sensing_accuracy > 0.0 && min_sensing_accuracy <= 1.0))
        throw ValidationError("min_sensing_accuracy out of (0, 1]");
    if (!(energy_budget_per_trip_wh > 0.0))
        throw ValidationError("energy_budget_per_trip_wh must be > 0");
    if (capacity < 1) throw ValidationError("capacity must be >= 1");
    if (!(max_trip_distance_km > 0.0)) throw ValidationError("max_trip_distance_km must be > 0");
}

DeliveryInstance instance_from_json(const json& root) {
    if (!root.is_object()) throw SchemaError("instance: top level must be an object");
    reject_unknown_keys(root, {"frame", "depot", "stations", "base_stations", "weather", "no_fly_zones"},
                        "instance");

    DeliveryInstance inst;
    inst.frame = frame_from_string(as_string(require(root, "frame", "instance"), "instance.frame"));

    const json& depot = require(root, "depot", "instance");
    if (!depot.is_object()) throw SchemaError("instance.depot: expected an object");
    std::set<std::string> depot_keys;
    inst.depot = parse_point(depot, inst.frame, "instance.depot", &depot_keys);
    reject_unknown_keys(depot, depot_keys, "instance.depot");

    const json& stations = require(root, "stations", "instance");
    if (!stations.is_array()) throw SchemaError("instance.stations: expected an array");
    for (const auto& sj : stations) {
        const std::string where = "station[" + std::to_string(inst.stations.size()) + "]";
        if (!sj.is_object()) throw SchemaError(where + ": expected an object");
        Station s;
        s.id = as_string(require(sj, "id", where), where + ".id");
        std::set<std::string> keys{"id", "demand", "required_sensing_accuracy"};
        s.location = parse_point(sj, inst.frame, where, &keys);
        reject_unknown_keys(sj, keys, where);
        s.demand = as_int(require(sj, "demand", where), where + ".demand");
        s.required_sensing_accuracy =
            as_number(require(sj, "required_sensing_accuracy", where), where + ".required_sensing_accuracy");
        inst.stations.push_back(std::move(s));
    }

    const json& bss = require(root, "base_stations", "instance");
    if (!bss.is_array()) throw SchemaError("instance.base_stations: expected an array");
    for (const auto& bj : bss) {
        const std::string where = "base_station[" + std::to_string(inst.base_stations.size()) + "]";
        if (!bj.is_object()) throw SchemaError(where + ": expected an object");
        BaseStation b;
        b.id = as_string(require(bj, "id", where), where + ".id");
        std::set<std::string> keys{"id", "tx_power_dbm", "carrier_freq_mhz", "bandwidth_hz"};
        b.location = parse_point(bj, inst.frame, where, &keys);
        reject_unknown_keys(bj, keys, where);
        b.tx_power_dbm = as_number(require(bj, "tx_power_dbm", where), where + ".tx_power_dbm");
        b.carrier_freq_mhz = as_number(require(bj, "carrier_freq_mhz", where), where + ".carrier_freq_mhz");
        b.bandwidth_hz = as_number(require(bj, "bandwidth_hz", where), where + ".bandwidth_hz");
        inst.base_stations.push_back(std::move(b));
    }

    const json& weather = require(root, "weather", "instance");
    if (!weather.is_object()) throw SchemaError("instance.weather: expected an object");
    reject_unknown_keys(weather, {"visibility", "wind_speed_mps"}, "instance.weather");
    inst.weather.visibility = as_number(require(weather, "visibility", "instance.weather"),
                                        "instance.weather.visibility");
    inst.weather.wind_speed_mps = as_number(require(weather, "wind_speed_mps", "instance.weather"),
                                            "instance.weather.wind_speed_mps");

    if (auto it = root.find("no_fly_zones"); it != root.end()) {
        if (!it->is_array()) throw SchemaError("instance.no_fly_zones: expected an array");
        for (const auto& zj : *it) {
            const std::string where = "no_fly_zone[" + std::to_string(inst.no_fly_zones.size()) + "]";
            if (!zj.is_object()) throw SchemaError(where + ": expected an object");
            reject_unknown_keys(zj, {"center", "radius_km"}, where);
            NoFlyZone z;
            const json& center = require(zj, "center", where);
            if (!center.is_object()) throw SchemaError(where + ".center: expected an object");
            std::set<std::string> ckeys;
            z.center = parse_point(center, inst.frame, where + ".center", &ckeys);
            reject_unknown_keys(center, ckeys, where + ".center");
            z.radius_km = as_number(require(zj, "radius_km", where), where + ".radius_km");
            inst.no_fly_zones.push_back(z);
        }
    }

    inst.validate();
    return inst;
}

DeliveryInstance parse_instance(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("instance JSON: ") + e.what());
    }
    return instance_from_json(root);
}

DeliveryInstance load_instance(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open instance file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_instance(buf.str());
}

json instance_to_json(const DeliveryInstance& instance) {
    json root;
    root["frame"] = to_string(instance.frame);
    root["depot"] = point_to_json(instance.depot);
    root["stations"] = json::array();
    for (const auto& s : instance.stations) {
        json sj;
        sj["id"] = s.id;
        json pt = point_to_json(s.location);
        for (auto& [k, v] : pt.items()) sj[k] = v;
        sj["demand"] = s.demand;
        sj["required_sensing_accuracy"] = s.required_sensing_accuracy;
        root["stations"].push_back(std::move(sj));
    }
    root["base_stations"] = json::array();
    for (const auto& b : instance.base_stations) {
        json bj;
        bj["id"] = b.id;
        json pt = point_to_json(b.location);
        for (auto& [k, v] : pt.items()) bj[k] = v;
        bj["tx_power_dbm"] = b.tx_power_dbm;
        bj["carrier_freq_mhz"] = b.carrier_freq_mhz;
        bj["bandwidth_hz"] = b.bandwidth_hz;
        root["base_stations"].push_back(std::move(bj));
    }
    root["weather"] = {{"visibility", instance.weather.visibility},
                       {"wind_speed_mps", instance.weather.wind_speed_mps}};
    root["no_fly_zones"] = json::array();
    for (const auto& z : instance.no_fly_zones) {
        json zj;
        zj["center"] = point_to_json(z.center);
        zj["radius_km"] = z.radius_km;
        root["no_fly_zones"].push_back(std::move(zj));
    }
    return root;
}

std::string instance_to_json_text(const DeliveryInstance& instance) {
    return instance_to_json(instance).dump(2) + "\n";
}

void save_instance(const DeliveryInstance& instance, const std::string& path) {
    instance.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write instance file '" + path + "'");
    out << instance_to_json_text(instance);
}

DeliveryInstance project_to_planar(const DeliveryInstance& instance) {
    if (instance.frame == Frame::planar) return instance;
    DeliveryInstance out = instance;
    out.frame = Frame::planar;
    const GeoPoint origin = instance.depot;
    out.depot = project_about(instance.depot, origin);
    for (auto& s : out.stations) s.location = project_about(s.location, origin);
    for (auto& b : out.base_stations) b.location = project_about(b.location, origin);
    for (auto& z : out.no_fly_zones) z.center = project_about(z.center, origin);
    return out;
}

DeliveryInstance generate_instance(std::uint64_t seed, int n_stations, double area_side_km,
                                   int n_base_stations, int demand_lo, int demand_hi) {
    if (n_stations < 1) throw ArgumentError("n_stations must be >= 1");
    if (n_base_stations < 0) throw ArgumentError("n_base_stations must be >= 0");
    if (!(area_side_km > 0.0)) throw ArgumentError("area_side_km must be > 0");
    if (demand_lo < 1) throw ArgumentError("demand_lo must be >= 1");
    if (demand_hi < demand_lo) throw ArgumentError("demand_hi must be >= demand_lo");

    Rng rng(seed);
    DeliveryInstance inst;
    inst.frame = Frame::planar;
    inst.depot = GeoPoint{area_side_km / 2.0, area_side_km / 2.0, Frame::planar};
    inst.weather = Weather{1.0, 0.0};

    for (int i = 0; i < n_stations; ++i) {
        Station s;
        s.id = "S" + std::to_string(i + 1);
        s.location = GeoPoint{uniform_real(rng, 0.0, area_side_km),
                              uniform_real(rng, 0.0, area_side_km), Frame::planar};
        s.demand = uniform_int(rng, demand_lo, demand_hi);
        s.required_sensing_accuracy = uniform_real(rng, 0.80, 0.95);
        inst.stations.push_back(std::move(s));
    }
    for (int i = 0; i < n_base_stations; ++i) {
        BaseStation b;
        b.id = "B" + std::to_string(i + 1);
        b.location = GeoPoint{uniform_real(rng, 0.0, area_side_km),
                              uniform_real(rng, 0.0, area_side_km), Frame::planar};
        inst.base_stations.push_back(std::move(b));
    }
    inst.validate();
    return inst;
}

std::vector<std::vector<double>> distance_matrix(const DeliveryInstance& instance) {
    const std::size_t n = instance.stations.size() + 1;
    std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
    auto point_at = [&](std::size_t i) -> const GeoPoint& {
        return i == 0 ? instance.depot : instance.stations[i - 1].location;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = distance(point_at(i), point_at(j));
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    return m;
}

}  // namespace isc3
