#include "isc3/json_io.hpp"

#include <cmath>
#include <limits>
#include <set>
#include <sstream>

#include "isc3/errors.hpp"
#include "isc3/strfmt.hpp"

namespace isc3 {

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& known, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        if (!known.count(key)) throw SchemaError(where + ": unknown key '" + key + "'");
    }
}

double get_number(const json& obj, const std::string& key, double fallback, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number()) throw SchemaError(where + "." + key + ": expected a number");
    return it->get<double>();
}

long long get_integer(const json& obj, const std::string& key, long long fallback,
                      const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_number_integer()) throw SchemaError(where + "." + key + ": expected an integer");
    return it->get<long long>();
}

const json& expect_object(const json& j, const std::string& where) {
    if (!j.is_object()) throw SchemaError(where + ": expected an object");
    return j;
}

}  // namespace

json point_to_json(const GeoPoint& p) {
    json j;
    if (p.frame == Frame::planar) {
        j["x"] = p.x;
        j["y"] = p.y;
    } else {
        j["lon"] = p.x;
        j["lat"] = p.y;
    }
    return j;
}

GeoPoint point_from_json(const json& j, Frame frame, const std::string& where) {
    expect_object(j, where);
    GeoPoint p;
    p.frame = frame;
    if (frame == Frame::planar) {
        reject_unknown(j, {"x", "y"}, where);
        if (!j.contains("x") || !j.contains("y")) throw SchemaError(where + ": missing x/y");
        p.x = j.at("x").get<double>();
        p.y = j.at("y").get<double>();
    } else {
        reject_unknown(j, {"lon", "lat"}, where);
        if (!j.contains("lon") || !j.contains("lat")) throw SchemaError(where + ": missing lon/lat");
        p.x = j.at("lon").get<double>();
        p.y = j.at("lat").get<double>();
    }
    return p;
}

json demands_to_json(const Isc3Demands& d) {
    json j;
    j["min_data_rate_bps"] = d.min_data_rate_bps;
    j["min_sensing_accuracy"] = d.min_sensing_accuracy;
    j["energy_budget_per_trip_wh"] = d.energy_budget_per_trip_wh;
    j["capacity"] = d.capacity;
    j["max_trip_distance_km"] = d.max_trip_distance_km;
    return j;
}

Isc3Demands demands_from_json(const json& j, const Isc3Demands& defaults) {
    expect_object(j, "demands");
    reject_unknown(j, {"min_data_rate_bps", "min_sensing_accuracy", "energy_budget_per_trip_wh",
                       "capacity", "max_trip_distance_km"}, "demands");
    Isc3Demands d = defaults;
    d.min_data_rate_bps = get_number(j, "min_data_rate_bps", d.min_data_rate_bps, "demands");
    d.min_sensing_accuracy = get_number(j, "min_sensing_accuracy", d.min_sensing_accuracy, "demands");
    d.energy_budget_per_trip_wh =
        get_number(j, "energy_budget_per_trip_wh", d.energy_budget_per_trip_wh, "demands");
    d.capacity = static_cast<int>(get_integer(j, "capacity", d.capacity, "demands"));
    d.max_trip_distance_km = get_number(j, "max_trip_distance_km", d.max_trip_distance_km, "demands");
    d.validate();
    return d;
}

json models_to_json(const Models& m) {
    json j;
    j["link"] = {{"noise_power_dbm", m.link.noise_power_dbm},
                 {"sample_step_km", m.link.sample_step_km}};
    j["energy"] = {{"energy_per_km_wh", m.energy.energy_per_km_wh},
                   {"energy_per_delivery_wh", m.energy.energy_per_delivery_wh}};
    j["sensing"] = {{"base_accuracy", m.sensing.base_accuracy}};
    return j;
}

Models models_from_parent_json(const json& parent, const Models& defaults) {
    Models m = defaults;
    if (auto it = parent.find("link"); it != parent.end()) {
        expect_object(*it, "link");
        reject_unknown(*it, {"noise_power_dbm", "sample_step_km"}, "link");
        m.link.noise_power_dbm = get_number(*it, "noise_power_dbm", m.link.noise_power_dbm, "link");
        m.link.sample_step_km = get_number(*it, "sample_step_km", m.link.sample_step_km, "link");
        if (!(m.link.sample_step_km > 0.0)) throw ValidationError("link.sample_step_km must be > 0");
    }
    if (auto it = parent.find("energy"); it != parent.end()) {
        expect_object(*it, "energy");
        reject_unknown(*it, {"energy_per_km_wh", "energy_per_delivery_wh"}, "energy");
        m.energy.energy_per_km_wh =
            get_number(*it, "energy_per_km_wh", m.energy.energy_per_km_wh, "energy");
        m.energy.energy_per_delivery_wh =
            get_number(*it, "energy_per_delivery_wh", m.energy.energy_per_delivery_wh, "energy");
        if (m.energy.energy_per_km_wh < 0.0 || m.energy.energy_per_delivery_wh < 0.0)
            throw ValidationError("energy parameters must be >= 0");
    }
    if (auto it = parent.find("sensing"); it != parent.end()) {
        expect_object(*it, "sensing");
        reject_unknown(*it, {"base_accuracy"}, "sensing");
        m.sensing.base_accuracy = get_number(*it, "base_accuracy", m.sensing.base_accuracy, "sensing");
        if (!(m.sensing.base_accuracy > 0.0 && m.sensing.base_accuracy <= 1.0))
            throw ValidationError("sensing.base_accuracy out of (0, 1]");
    }
    return m;
}

json penalty_weights_to_json(const PenaltyWeights& w) {
    json j;
    j["capacity"] = w.capacity;
    j["trip_distance"] = w.trip_distance;
    j["trip_energy"] = w.trip_energy;
    j["data_rate"] = w.data_rate;
    j["sensing"] = w.sensing;
    return j;
}

PenaltyWeights penalty_weights_from_json(const json& j, const PenaltyWeights& defaults) {
    expect_object(j, "penalty_weights");
    reject_unknown(j, {"capacity", "trip_distance", "trip_energy", "data_rate", "sensing"},
                   "penalty_weights");
    PenaltyWeights w = defaults;
    w.capacity = get_number(j, "capacity", w.capacity, "penalty_weights");
    w.trip_distance = get_number(j, "trip_distance", w.trip_distance, "penalty_weights");
    w.trip_energy = get_number(j, "trip_energy", w.trip_energy, "penalty_weights");
    w.data_rate = get_number(j, "data_rate", w.data_rate, "penalty_weights");
    w.sensing = get_number(j, "sensing", w.sensing, "penalty_weights");
    return w;
}

json solver_config_to_json(const SolverConfig& cfg) {
    json j;
    j["algorithm"] = to_string(cfg.algorithm);
    j["seed"] = cfg.seed;
    j["eval_budget"] = cfg.eval_budget;
    if (cfg.time_limit_s) j["time_limit_s"] = *cfg.time_limit_s;
    j["ga"] = {{"population", cfg.ga.population},
               {"tournament", cfg.ga.tournament},
               {"elitism", cfg.ga.elitism},
               {"mutation_rate", cfg.ga.mutation_rate}};
    j["sa"] = {{"cooling", cfg.sa.cooling},
               {"epoch_factor", cfg.sa.epoch_factor},
               {"probes", cfg.sa.probes},
               {"initial_accept", cfg.sa.initial_accept}};
    j["aco"] = {{"ants", cfg.aco.ants},
                {"alpha", cfg.aco.alpha},
                {"beta", cfg.aco.beta},
                {"evaporation", cfg.aco.evaporation},
                {"tau0", cfg.aco.tau0},
                {"tau_min_factor", cfg.aco.tau_min_factor},
                {"tau_max_factor", cfg.aco.tau_max_factor}};
    j["pso"] = {{"swarm", cfg.pso.swarm},
                {"inertia", cfg.pso.inertia},
                {"cognitive", cfg.pso.cognitive},
                {"social", cfg.pso.social},
                {"local_search_period", cfg.pso.local_search_period}};
    j["penalty_weights"] = penalty_weights_to_json(cfg.penalty_weights);
    return j;
}

SolverConfig solver_config_from_json(const json& j, const SolverConfig& defaults) {
    expect_object(j, "solver");
    reject_unknown(j, {"algorithm", "seed", "eval_budget", "time_limit_s", "ga", "sa", "aco", "pso",
                       "penalty_weights"}, "solver");
    SolverConfig cfg = defaults;
    if (auto it = j.find("algorithm"); it != j.end()) {
        if (!it->is_string()) throw SchemaError("solver.algorithm: expected a string");
        cfg.algorithm = algorithm_from_string(it->get<std::string>());
    }
    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_integer()) throw SchemaError("solver.seed: expected an integer");
        cfg.seed = it->get<std::uint64_t>();
    }
    cfg.eval_budget = get_integer(j, "eval_budget", cfg.eval_budget, "solver");
    if (auto it = j.find("time_limit_s"); it != j.end()) {
        if (!it->is_number()) throw SchemaError("solver.time_limit_s: expected a number");
        cfg.time_limit_s = it->get<double>();
    }
    if (auto it = j.find("ga"); it != j.end()) {
        expect_object(*it, "solver.ga");
        reject_unknown(*it, {"population", "tournament", "elitism", "mutation_rate"}, "solver.ga");
        cfg.ga.population = static_cast<int>(get_integer(*it, "population", cfg.ga.population, "solver.ga"));
        cfg.ga.tournament = static_cast<int>(get_integer(*it, "tournament", cfg.ga.tournament, "solver.ga"));
        cfg.ga.elitism = static_cast<int>(get_integer(*it, "elitism", cfg.ga.elitism, "solver.ga"));
        cfg.ga.mutation_rate = get_number(*it, "mutation_rate", cfg.ga.mutation_rate, "solver.ga");
    }
    if (auto it = j.find("sa"); it != j.end()) {
        expect_object(*it, "solver.sa");
        reject_unknown(*it, {"cooling", "epoch_factor", "probes", "initial_accept"}, "solver.sa");
        cfg.sa.cooling = get_number(*it, "cooling", cfg.sa.cooling, "solver.sa");
        cfg.sa.epoch_factor = static_cast<int>(get_integer(*it, "epoch_factor", cfg.sa.epoch_factor, "solver.sa"));
        cfg.sa.probes = static_cast<int>(get_integer(*it, "probes", cfg.sa.probes, "solver.sa"));
        cfg.sa.initial_accept = get_number(*it, "initial_accept", cfg.sa.initial_accept, "solver.sa");
    }
    if (auto it = j.find("aco"); it != j.end()) {
        expect_object(*it, "solver.aco");
        reject_unknown(*it, {"ants", "alpha", "beta", "evaporation", "tau0", "tau_min_factor",
                             "tau_max_factor"}, "solver.aco");
        cfg.aco.ants = static_cast<int>(get_integer(*it, "ants", cfg.aco.ants, "solver.aco"));
        cfg.aco.alpha = get_number(*it, "alpha", cfg.aco.alpha, "solver.aco");
        cfg.aco.beta = get_number(*it, "beta", cfg.aco.beta, "solver.aco");
        cfg.aco.evaporation = get_number(*it, "evaporation", cfg.aco.evaporation, "solver.aco");
        cfg.aco.tau0 = get_number(*it, "tau0", cfg.aco.tau0, "solver.aco");
        cfg.aco.tau_min_factor = get_number(*it, "tau_min_factor", cfg.aco.tau_min_factor, "solver.aco");
        cfg.aco.tau_max_factor = get_number(*it, "tau_max_factor", cfg.aco.tau_max_factor, "solver.aco");
    }
    if (auto it = j.find("pso"); it != j.end()) {
        expect_object(*it, "solver.pso");
        reject_unknown(*it, {"swarm", "inertia", "cognitive", "social", "local_search_period"},
                       "solver.pso");
        cfg.pso.swarm = static_cast<int>(get_integer(*it, "swarm", cfg.pso.swarm, "solver.pso"));
        cfg.pso.inertia = get_number(*it, "inertia", cfg.pso.inertia, "solver.pso");
        cfg.pso.cognitive = get_number(*it, "cognitive", cfg.pso.cognitive, "solver.pso");
        cfg.pso.social = get_number(*it, "social", cfg.pso.social, "solver.pso");
        cfg.pso.local_search_period =
            static_cast<int>(get_integer(*it, "local_search_period", cfg.pso.local_search_period, "solver.pso"));
    }
    if (auto it = j.find("penalty_weights"); it != j.end())
        cfg.penalty_weights = penalty_weights_from_json(*it, cfg.penalty_weights);
    cfg.validate();
    return cfg;
}

json plan_to_json(const RoutePlan& plan, const DeliveryInstance& instance) {
    json j;
    j["trips"] = json::array();
    j["trip_details"] = json::array();
    for (const auto& trip : plan.trips) {
        json ids = json::array();
        for (int s : trip.stations) ids.push_back(instance.stations[s].id);
        j["trips"].push_back(std::move(ids));
        j["trip_details"].push_back({{"length_km", trip.length_km},
                                     {"load", trip.load},
                                     {"energy_wh", trip.energy_wh}});
    }
    j["total_length_km"] = plan.total_length_km;
    return j;
}

RoutePlan plan_from_json(const json& j, const DeliveryInstance& instance) {
    expect_object(j, "plan");
    reject_unknown(j, {"trips", "trip_details", "total_length_km"}, "plan");
    if (!j.contains("trips") || !j.at("trips").is_array())
        throw SchemaError("plan.trips: expected an array");
    RoutePlan plan;
    const json& trips = j.at("trips");
    const json* details = j.contains("trip_details") ? &j.at("trip_details") : nullptr;
    if (details && (!details->is_array() || details->size() != trips.size()))
        throw SchemaError("plan.trip_details: must parallel plan.trips");
    for (std::size_t t = 0; t < trips.size(); ++t) {
        const json& ids = trips[t];
        if (!ids.is_array()) throw SchemaError("plan.trips: each trip must be an array of ids");
        Trip trip;
        for (const auto& id : ids) {
            if (!id.is_string()) throw SchemaError("plan.trips: station ids must be strings");
            trip.stations.push_back(instance.station_index(id.get<std::string>()));
        }
        if (details) {
            const json& d = (*details)[t];
            expect_object(d, "plan.trip_details");
            trip.length_km = get_number(d, "length_km", 0.0, "plan.trip_details");
            trip.load = static_cast<int>(get_integer(d, "load", 0, "plan.trip_details"));
            trip.energy_wh = get_number(d, "energy_wh", 0.0, "plan.trip_details");
        }
        plan.trips.push_back(std::move(trip));
    }
    plan.total_length_km = get_number(j, "total_length_km", 0.0, "plan");
    return plan;
}

json objective_to_json(const Objective& o) {
    json j;
    j["total_length_km"] = o.total_length_km;
    j["penalty"] = o.penalty;
    j["value"] = o.value;
    return j;
}

Objective objective_from_json(const json& j) {
    expect_object(j, "objective");
    Objective o;
    o.total_length_km = get_number(j, "total_length_km", 0.0, "objective");
    o.penalty = get_number(j, "penalty", 0.0, "objective");
    o.value = get_number(j, "value", 0.0, "objective");
    return o;
}

namespace {

ConstraintKind constraint_from_string(const std::string& s) {
    if (s == "capacity") return ConstraintKind::capacity;
    if (s == "trip_distance") return ConstraintKind::trip_distance;
    if (s == "trip_energy") return ConstraintKind::trip_energy;
    if (s == "data_rate") return ConstraintKind::data_rate;
    if (s == "sensing") return ConstraintKind::sensing;
    throw SchemaError("unknown constraint kind '" + s + "'");
}

}  // namespace

json report_to_json(const FeasibilityReport& report, Frame frame) {
    json j;
    j["pass"] = report.pass;
    j["records"] = json::array();
    for (const auto& rec : report.records) {
        json r;
        r["constraint"] = to_string(rec.kind);
        r["pass"] = rec.pass;
        if (std::isfinite(rec.worst_value))
            r["worst_value"] = rec.worst_value;
        else
            r["worst_value"] = nullptr;  // no observation (empty plan)
        r["threshold"] = rec.threshold;
        r["violation"] = rec.violation;
        r["trip_index"] = rec.trip_index;
        if (rec.worst_point) {
            json p = point_to_json(*rec.worst_point);
            p["frame"] = to_string(frame);
            r["worst_point"] = std::move(p);
        } else {
            r["worst_point"] = nullptr;
        }
        r["detail"] = rec.detail;
        j["records"].push_back(std::move(r));
    }
    return j;
}

FeasibilityReport report_from_json(const json& j, Frame frame) {
    expect_object(j, "feasibility");
    FeasibilityReport report;
    report.pass = j.value("pass", false);
    if (!j.contains("records") || !j.at("records").is_array())
        throw SchemaError("feasibility.records: expected an array");
    for (const auto& r : j.at("records")) {
        expect_object(r, "feasibility.records[]");
        ConstraintRecord rec;
        rec.kind = constraint_from_string(r.value("constraint", ""));
        rec.pass = r.value("pass", false);
        if (r.contains("worst_value") && !r.at("worst_value").is_null())
            rec.worst_value = r.at("worst_value").get<double>();
        else
            rec.worst_value = std::numeric_limits<double>::infinity();
        rec.threshold = get_number(r, "threshold", 0.0, "feasibility.records[]");
        rec.violation = get_number(r, "violation", 0.0, "feasibility.records[]");
        rec.trip_index = static_cast<int>(get_integer(r, "trip_index", -1, "feasibility.records[]"));
        if (r.contains("worst_point") && !r.at("worst_point").is_null()) {
            json p = r.at("worst_point");
            p.erase("frame");
            rec.worst_point = point_from_json(p, frame, "feasibility.records[].worst_point");
        }
        rec.detail = r.value("detail", "");
        report.records.push_back(std::move(rec));
    }
    return report;
}

json result_to_json(const SolverResult& result, const DeliveryInstance& instance) {
    json j;
    j["algorithm"] = to_string(result.algorithm);
    j["seed"] = result.seed;
    j["status"] = result.status == SolveStatus::ok ? "ok" : "no_feasible_found";
    j["best_plan"] = plan_to_json(result.best_plan, instance);
    j["best_objective"] = objective_to_json(result.best_objective);
    j["feasibility"] = report_to_json(result.feasibility, instance.frame);
    j["evaluations_used"] = result.evaluations_used;
    j["wall_time_s"] = result.wall_time_s;
    j["convergence_trace"] = json::array();
    for (const auto& tp : result.convergence_trace)
        j["convergence_trace"].push_back(json::array({tp.eval_index, tp.best_value}));
    j["config"] = solver_config_to_json(result.config);
    return j;
}

SolverResult result_from_json(const json& j, const DeliveryInstance& instance) {
    expect_object(j, "result");
    SolverResult result;
    if (!j.contains("algorithm") || !j.at("algorithm").is_string())
        throw SchemaError("result.algorithm: expected a string");
    result.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    if (!j.contains("seed") || !j.at("seed").is_number_integer())
        throw SchemaError("result.seed: expected an integer");
    result.seed = j.at("seed").get<std::uint64_t>();
    const std::string status = j.value("status", "");
    if (status == "ok")
        result.status = SolveStatus::ok;
    else if (status == "no_feasible_found")
        result.status = SolveStatus::no_feasible_found;
    else
        throw SchemaError("result.status: expected ok or no_feasible_found");
    if (!j.contains("best_plan")) throw SchemaError("result: missing best_plan");
    result.best_plan = plan_from_json(j.at("best_plan"), instance);
    if (!j.contains("best_objective")) throw SchemaError("result: missing best_objective");
    result.best_objective = objective_from_json(j.at("best_objective"));
    if (!j.contains("feasibility")) throw SchemaError("result: missing feasibility");
    result.feasibility = report_from_json(j.at("feasibility"), instance.frame);
    result.evaluations_used = get_integer(j, "evaluations_used", 0, "result");
    result.wall_time_s = get_number(j, "wall_time_s", 0.0, "result");
    if (j.contains("convergence_trace")) {
        const json& trace = j.at("convergence_trace");
        if (!trace.is_array()) throw SchemaError("result.convergence_trace: expected an array");
        double prev = std::numeric_limits<double>::infinity();
        for (const auto& tp : trace) {
            if (!tp.is_array() || tp.size() != 2)
                throw SchemaError("result.convergence_trace: expected [index, value] pairs");
            TracePoint point{tp[0].get<long long>(), tp[1].get<double>()};
            if (point.best_value > prev)
                throw ValidationError("result.convergence_trace: best-so-far must be non-increasing");
            prev = point.best_value;
            result.convergence_trace.push_back(point);
        }
    }
    if (!j.contains("config")) throw SchemaError("result: missing config");
    result.config = solver_config_from_json(j.at("config"));
    return result;
}

std::string comparison_to_csv(const ComparisonTable& table) {
    std::ostringstream out;
    out << "algorithm,total_length_km,feasible,evaluations,wall_time_s,seed\n";
    for (const auto& row : table.rows) {
        out << to_string(row.config.algorithm) << ',';
        if (row.result) {
            const auto& r = *row.result;
            out << fmt_double(r.best_objective.total_length_km) << ','
                << (r.best_objective.feasible() ? "true" : "false") << ','
                << r.evaluations_used << ','
                << fmt_double(r.wall_time_s) << ',';
        } else {
            out << ",false,0,0,";
        }
        out << row.config.seed << '\n';
    }
    return out.str();
}

std::string comparison_to_text(const ComparisonTable& table) {
    const std::vector<std::string> header = {"algorithm", "total_length_km", "feasible",
                                             "evaluations", "wall_time_s", "seed"};
    std::vector<std::vector<std::string>> cells;
    bool any_error = false;
    for (const auto& row : table.rows) {
        std::vector<std::string> line;
        line.push_back(to_string(row.config.algorithm));
        if (row.result) {
            const auto& r = *row.result;
            line.push_back(fmt_double(r.best_objective.total_length_km));
            line.push_back(r.best_objective.feasible() ? "true" : "false");
            line.push_back(std::to_string(r.evaluations_used));
            line.push_back(fmt_double(r.wall_time_s));
        } else {
            any_error = true;
            line.insert(line.end(), {"-", "false", "-", "-"});
        }
        line.push_back(std::to_string(row.config.seed));
        if (!row.error.empty()) line.push_back(row.error);
        cells.push_back(std::move(line));
    }
    std::vector<std::string> head = header;
    if (any_error) head.push_back("error");
    std::vector<std::size_t> width(head.size());
    for (std::size_t c = 0; c < head.size(); ++c) width[c] = head[c].size();
    for (const auto& line : cells)
        for (std::size_t c = 0; c < line.size() && c < width.size(); ++c)
            width[c] = std::max(width[c], line[c].size());

    std::ostringstream out;
    auto emit_row = [&](const std::vector<std::string>& line) {
        for (std::size_t c = 0; c < line.size(); ++c) {
            if (c) out << "  ";
            out << line[c];
            if (c + 1 < line.size())
                out << std::string(width[c] > line[c].size() ? width[c] - line[c].size() : 0, ' ');
        }
        out << '\n';
    };
    emit_row(head);
    for (const auto& line : cells) emit_row(line);
    return out.str();
}

json strip_volatile(json j) {
    if (j.is_object()) {
        j.erase("wall_time_s");
        j.erase("timings");
        j.erase("ingested_at");
        for (auto& [_, value] : j.items()) value = strip_volatile(value);
    } else if (j.is_array()) {
        for (auto& value : j) value = strip_volatile(value);
    }
    return j;
}

}  // namespace isc3
