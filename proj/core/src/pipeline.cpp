#include "isc3/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "isc3/edge.hpp"
#include "isc3/errors.hpp"
#include "isc3/log.hpp"
#include "isc3/strfmt.hpp"

namespace isc3 {

namespace {

std::string utc_now_iso8601() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::string error_kind_of(const Error& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const SchemaError*>(&e)) return "SchemaError";
    if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
    if (dynamic_cast<const ArgumentError*>(&e)) return "ArgumentError";
    if (dynamic_cast<const FrameMismatch*>(&e)) return "FrameMismatch";
    if (dynamic_cast<const UnknownStation*>(&e)) return "UnknownStation";
    if (dynamic_cast<const IndexError*>(&e)) return "IndexError";
    if (dynamic_cast<const InstanceInfeasible*>(&e)) return "InstanceInfeasible";
    if (dynamic_cast<const NoFeasiblePlan*>(&e)) return "NoFeasiblePlan";
    if (dynamic_cast<const TooLarge*>(&e)) return "TooLarge";
    if (dynamic_cast<const InfeasiblePlanRejected*>(&e)) return "InfeasiblePlanRejected";
    if (dynamic_cast<const AgentUnavailable*>(&e)) return "AgentUnavailable";
    if (dynamic_cast<const AgentInvalidResponse*>(&e)) return "AgentInvalidResponse";
    if (dynamic_cast<const TransportError*>(&e)) return "TransportError";
    if (dynamic_cast<const BindError*>(&e)) return "BindError";
    if (dynamic_cast<const RemoteError*>(&e)) return "RemoteError";
    return "Error";
}

json parse_json_file(const std::string& path, const std::string& what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + what + " '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw ParseError(what + " '" + path + "': " + e.what());
    }
}

}  // namespace

json scene_summary_to_json(const SceneSummary& s) {
    json j;
    j["n_stations"] = s.n_stations;
    j["total_demand"] = s.total_demand;
    j["n_base_stations"] = s.n_base_stations;
    j["visibility"] = s.visibility;
    return j;
}

SceneSummary scene_summary_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("scene_summary: expected an object");
    SceneSummary s;
    if (!j.contains("n_stations") || !j.at("n_stations").is_number_integer())
        throw SchemaError("scene_summary.n_stations: expected an integer");
    s.n_stations = j.at("n_stations").get<int>();
    s.total_demand = j.value("total_demand", 0);
    s.n_base_stations = j.value("n_base_stations", 0);
    s.visibility = j.value("visibility", 1.0);
    return s;
}

SceneSummary ScenePackage::summary() const {
    SceneSummary s;
    s.n_stations = static_cast<int>(instance.stations.size());
    for (const auto& st : instance.stations) s.total_demand += st.demand;
    s.n_base_stations = static_cast<int>(instance.base_stations.size());
    s.visibility = instance.weather.visibility;
    return s;
}

void TaskSpec::validate() const {
    if (task != "express_delivery")
        throw ValidationError("task must be 'express_delivery', got '" + task + "'");
    demands.validate();
    solver.validate();
}

json task_spec_to_json(const TaskSpec& t) {
    json j;
    j["task"] = t.task;
    j["demands"] = demands_to_json(t.demands);
    j["solver"] = solver_config_to_json(t.solver);
    j["offload"] = t.offload;
    j["edge_address"] = t.edge_address;
    return j;
}

TaskSpec task_spec_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("task_spec: expected an object");
    static const std::set<std::string> known{"task", "demands", "solver", "offload", "edge_address"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw SchemaError("task_spec: unknown key '" + key + "'");
    TaskSpec t;
    if (!j.contains("task") || !j.at("task").is_string())
        throw SchemaError("task_spec.task: expected a string");
    t.task = j.at("task").get<std::string>();
    if (!j.contains("demands")) throw SchemaError("task_spec: missing demands");
    t.demands = demands_from_json(j.at("demands"));
    if (!j.contains("solver")) throw SchemaError("task_spec: missing solver");
    t.solver = solver_config_from_json(j.at("solver"));
    if (j.contains("offload")) {
        if (!j.at("offload").is_boolean()) throw SchemaError("task_spec.offload: expected a boolean");
        t.offload = j.at("offload").get<bool>();
    }
    if (j.contains("edge_address")) {
        if (!j.at("edge_address").is_string())
            throw SchemaError("task_spec.edge_address: expected a string");
        t.edge_address = j.at("edge_address").get<std::string>();
    }
    t.validate();
    return t;
}

RuleBasedAgent::RuleBasedAgent(SolverConfig base, bool algorithm_forced, std::string edge_address,
                               RulePolicy policy)
    : base_(std::move(base)), algorithm_forced_(algorithm_forced),
      edge_address_(std::move(edge_address)), policy_(policy) {}

TaskSpec RuleBasedAgent::plan(const Isc3Demands& demands, const SceneSummary& scene) {
    TaskSpec t;
    t.demands = demands;
    t.solver = base_;
    if (!algorithm_forced_)
        t.solver.algorithm =
            scene.n_stations <= policy_.sa_station_limit ? Algorithm::sa : Algorithm::ga;
    t.edge_address = edge_address_;
    t.offload = scene.n_stations > policy_.offload_station_limit || !edge_address_.empty();
    t.validate();
    return t;
}

ExternalAgent::ExternalAgent(std::string address, SolverConfig base, bool algorithm_forced,
                             std::string edge_address, double timeout_s)
    : address_(std::move(address)), base_(std::move(base)), algorithm_forced_(algorithm_forced),
      edge_address_(std::move(edge_address)), timeout_s_(timeout_s) {}

TaskSpec ExternalAgent::plan(const Isc3Demands& demands, const SceneSummary& scene) {
    json params;
    params["demands"] = demands_to_json(demands);
    params["scene_summary"] = scene_summary_to_json(scene);
    json solver = solver_config_to_json(base_);
    if (!algorithm_forced_) solver.erase("algorithm");  // let the remote policy choose
    params["solver"] = std::move(solver);
    params["edge_address"] = edge_address_;

    json result;
    try {
        EdgeConnection conn(address_, timeout_s_);
        result = conn.call("cognize", params, "cognize-1");
    } catch (const TransportError& e) {
        throw AgentUnavailable("external agent at '" + address_ + "' unreachable: " + e.what());
    } catch (const RemoteError& e) {
        throw AgentInvalidResponse("external agent error response: " + std::string(e.what()));
    }
    try {
        return task_spec_from_json(result);
    } catch (const Error& e) {
        throw AgentInvalidResponse("external agent returned a malformed TaskSpec: " +
                                   std::string(e.what()));
    }
}

std::string to_string(TelemetryEventKind k) {
    switch (k) {
        case TelemetryEventKind::depart: return "depart";
        case TelemetryEventKind::waypoint: return "waypoint";
        case TelemetryEventKind::deliver: return "deliver";
        case TelemetryEventKind::trip_return: return "return";
        case TelemetryEventKind::abort: return "abort";
    }
    return "unknown";
}

json telemetry_to_json(const TelemetryLog& log) {
    json j;
    j["abort_count"] = log.abort_count;
    j["events"] = json::array();
    for (const auto& e : log.events) {
        json ej;
        ej["time_s"] = e.time_s;
        ej["position"] = point_to_json(e.position);
        ej["battery_wh"] = e.battery_wh;
        ej["rate_bps"] = e.rate_bps;
        ej["event"] = to_string(e.kind);
        ej["trip_index"] = e.trip_index;
        ej["station_id"] = e.station_id;
        j["events"].push_back(std::move(ej));
    }
    return j;
}

std::string telemetry_to_csv(const TelemetryLog& log) {
    std::ostringstream out;
    out << "time_s,x_km,y_km,battery_wh,rate_bps,event,trip_index,station_id\n";
    for (const auto& e : log.events) {
        out << fmt_double(e.time_s) << ',' << fmt_double(e.position.x) << ','
            << fmt_double(e.position.y) << ',' << fmt_double(e.battery_wh) << ','
            << fmt_double(e.rate_bps) << ',' << to_string(e.kind) << ',' << e.trip_index << ','
            << e.station_id << '\n';
    }
    return out.str();
}

RunConfig run_config_from_json(const json& j) {
    if (!j.is_object()) throw SchemaError("run config: top level must be an object");
    static const std::set<std::string> known{"demands", "scene", "agent", "solver", "edge",
                                             "link",    "energy", "sensing", "cruise_speed_mps",
                                             "seed"};
    for (const auto& [key, _] : j.items())
        if (!known.count(key)) throw SchemaError("run config: unknown key '" + key + "'");

    RunConfig cfg;
    cfg.demands = demands_from_json(j.contains("demands") ? j.at("demands") : json::object());

    if (auto it = j.find("scene"); it != j.end()) {
        if (it->is_string()) {
            cfg.scene_path = it->get<std::string>();
        } else if (it->is_object()) {
            if (!it->contains("instance") || !it->at("instance").is_string())
                throw SchemaError("run config scene.instance: expected a string path");
            cfg.scene_path = it->at("instance").get<std::string>();
        } else {
            throw SchemaError("run config scene: expected a string or an object");
        }
    }

    if (auto it = j.find("agent"); it != j.end()) {
        if (it->is_string()) {
            cfg.agent_kind = it->get<std::string>();
        } else if (it->is_object()) {
            cfg.agent_kind = it->value("kind", "rule_based");
            cfg.agent_address = it->value("address", "");
        } else {
            throw SchemaError("run config agent: expected a string or an object");
        }
        if (cfg.agent_kind != "rule_based" && cfg.agent_kind != "external")
            throw SchemaError("run config agent: kind must be rule_based or external");
        if (cfg.agent_kind == "external" && cfg.agent_address.empty())
            throw SchemaError("run config agent: external agent requires an address");
    }

    if (auto it = j.find("seed"); it != j.end()) {
        if (!it->is_number_integer()) throw SchemaError("run config seed: expected an integer");
        cfg.solver.seed = it->get<std::uint64_t>();
    }
    if (auto it = j.find("solver"); it != j.end()) {
        cfg.solver = solver_config_from_json(*it, cfg.solver);
        cfg.algorithm_specified = it->is_object() && it->contains("algorithm");
    }

    if (auto it = j.find("edge"); it != j.end()) {
        if (it->is_string()) {
            cfg.edge_address = it->get<std::string>();
        } else if (it->is_object()) {
            cfg.edge_address = it->value("address", "");
            cfg.edge_fallback_local = it->value("fallback_local", true);
        } else {
            throw SchemaError("run config edge: expected a string or an object");
        }
    }

    cfg.models = models_from_parent_json(j);

    if (auto it = j.find("cruise_speed_mps"); it != j.end()) {
        if (!it->is_number()) throw SchemaError("run config cruise_speed_mps: expected a number");
        cfg.cruise_speed_mps = it->get<double>();
        if (!(cfg.cruise_speed_mps > 0.0)) throw ValidationError("cruise_speed_mps must be > 0");
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    return run_config_from_json(parse_json_file(path, "run config"));
}

Isc3Demands generate_demands(const std::string& config_path) {
    const json j = parse_json_file(config_path, "run config");
    if (!j.is_object()) throw SchemaError("run config: top level must be an object");
    return demands_from_json(j.contains("demands") ? j.at("demands") : json::object());
}

ScenePackage ingest_scene(const std::string& path) {
    ScenePackage scene;
    scene.instance = project_to_planar(load_instance(path));
    scene.source_path = path;
    scene.ingested_at = utc_now_iso8601();
    return scene;
}

TaskSpec cognize(const Isc3Demands& demands, const ScenePackage& scene, DecisionAgent& agent) {
    scene.instance.validate();
    return agent.plan(demands, scene.summary());
}

DecideOutcome decide(const TaskSpec& task, const ScenePackage& scene, const Models& models,
                     bool fallback_local) {
    task.validate();
    DecideOutcome out;
    if (task.offload && !task.edge_address.empty()) {
        try {
            out.result =
                solve_remote(task.edge_address, scene.instance, task.demands, task.solver, models);
            return out;
        } catch (const TransportError& e) {
            if (!fallback_local) throw;
            out.fallback_used = true;
            out.fallback_reason = e.what();
            log::info("edge offload failed (", e.what(), "), falling back to local solve");
        }
    }
    out.result = solve(scene.instance, task.demands, models, task.solver);
    return out;
}

TelemetryLog execute(const RoutePlan& plan, const DeliveryInstance& instance,
                     const Isc3Demands& demands, const Models& models, double cruise_speed_mps) {
    if (!(cruise_speed_mps > 0.0)) throw ArgumentError("cruise_speed_mps must be > 0");
    const FeasibilityReport report =
        check_route_feasibility(plan, demands, instance, models.link, models.energy, models.sensing);
    if (!report.pass)
        throw InfeasiblePlanRejected("execute requires a plan that passes feasibility");

    TelemetryLog log;
    const double step = models.link.sample_step_km;
    const double budget = demands.energy_budget_per_trip_wh;
    auto rate_at = [&](const GeoPoint& p) {
        return achievable_rate(p, instance.base_stations, models.link);
    };

    double total_km = 0.0;  // across trips; the clock never resets
    double last_time = -1.0;
    auto emit = [&](TelemetryEventKind kind, const GeoPoint& pos, double battery, double rate,
                    int trip, const std::string& sid) {
        // Coincident points advance the clock by one nanosecond so event
        // times stay strictly increasing.
        double t = total_km * 1000.0 / cruise_speed_mps;
        if (t <= last_time) t = last_time + 1e-9;
        last_time = t;
        log.events.push_back({t, pos, battery, rate, kind, trip, sid});
    };

    for (std::size_t ti = 0; ti < plan.trips.size(); ++ti) {
        const Trip& trip = plan.trips[ti];
        const int trip_index = static_cast<int>(ti);
        double trip_km = 0.0;  // battery resets to full at each depot departure
        int delivered = 0;
        bool aborted = false;
        GeoPoint prev = instance.depot;

        emit(TelemetryEventKind::depart, prev, budget, rate_at(prev), trip_index, "");

        const std::size_t n_legs = trip.stations.size() + 1;
        for (std::size_t leg = 0; leg < n_legs && !aborted; ++leg) {
            const bool to_depot = leg == trip.stations.size();
            const GeoPoint target =
                to_depot ? instance.depot : instance.stations[trip.stations[leg]].location;
            const double len = distance(prev, target);
            const double trip_base = trip_km;
            const double total_base = total_km;

            const long long k_max = static_cast<long long>(std::floor(len / step));
            for (long long k = 1; k <= k_max; ++k) {
                const double at = k * step;
                if (at >= len) break;  // endpoint handled below
                const GeoPoint pos = point_along(prev, target, at);
                trip_km = trip_base + at;
                total_km = total_base + at;
                const double battery = budget - trip_energy(trip_km, delivered, models.energy);
                const double rate = rate_at(pos);
                if (battery < 0.0 || rate < demands.min_data_rate_bps) {
                    emit(TelemetryEventKind::abort, pos, battery, rate, trip_index, "");
                    ++log.abort_count;
                    aborted = true;
                    break;
                }
                emit(TelemetryEventKind::waypoint, pos, battery, rate, trip_index, "");
            }
            if (aborted) break;

            trip_km = trip_base + len;
            total_km = total_base + len;
            if (!to_depot) ++delivered;  // delivery energy is spent at the handover
            const double battery = budget - trip_energy(trip_km, delivered, models.energy);
            const double rate = rate_at(target);
            if (battery < 0.0 || rate < demands.min_data_rate_bps) {
                emit(TelemetryEventKind::abort, target, battery, rate, trip_index, "");
                ++log.abort_count;
                break;
            }
            if (to_depot) {
                emit(TelemetryEventKind::trip_return, target, battery, rate, trip_index, "");
            } else {
                emit(TelemetryEventKind::deliver, target, battery, rate, trip_index,
                     instance.stations[trip.stations[leg]].id);
            }
            prev = target;
        }
    }
    return log;
}

const std::vector<std::string>& pipeline_step_labels() {
    static const std::vector<std::string> labels{"demands", "cognition", "ingestion", "decision",
                                                 "execution"};
    return labels;
}

json pipeline_report_to_json(const PipelineReport& report) {
    json j;
    j["steps"] = report.steps_completed;
    if (!report.error_step.empty()) {
        j["error"] = {{"step", report.error_step},
                      {"kind", report.error_kind},
                      {"message", report.error_message}};
    }
    if (report.demands) j["demands"] = demands_to_json(*report.demands);
    if (report.task) j["task"] = task_spec_to_json(*report.task);
    if (report.scene) {
        json sj;
        sj["source"] = report.scene->source_path;
        sj["ingested_at"] = report.scene->ingested_at;
        sj["summary"] = scene_summary_to_json(report.scene->summary());
        j["scene"] = std::move(sj);
    }
    if (report.solve && report.scene) {
        json dj;
        dj["result"] = result_to_json(*report.solve, report.scene->instance);
        dj["fallback"] = {{"used", report.fallback_used}, {"reason", report.fallback_reason}};
        j["decision"] = std::move(dj);
    }
    if (report.telemetry) j["telemetry"] = telemetry_to_json(*report.telemetry);
    json timings;
    for (const auto& [label, seconds] : report.timings) timings[label] = seconds;
    j["timings"] = std::move(timings);
    return j;
}

PipelineReport run_pipeline(const std::string& config_path) {
    PipelineReport report;

    const auto record_error = [&](const std::string& step, const Error& e) {
        report.error_step = step;
        report.error_kind = error_kind_of(e);
        report.error_message = e.what();
        log::error("pipeline step '", step, "' failed: ", e.what());
    };
    const auto timed = [&](const std::string& label, auto&& fn) {
        const auto start = std::chrono::steady_clock::now();
        fn();
        report.timings.emplace_back(
            label, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    };

    // Step 1: demand generation.
    RunConfig cfg;
    try {
        timed("demands", [&] {
            cfg = load_run_config(config_path);
            report.demands = cfg.demands;
        });
    } catch (const Error& e) {
        record_error("demands", e);
        return report;
    }
    report.steps_completed.push_back("demands");

    // Scene ingestion runs before cognition (the agent is briefed with the
    // scene summary) but is reported under its own step label; a scene
    // failure is an ingestion failure.
    ScenePackage scene;
    try {
        timed("ingestion", [&] {
            if (cfg.scene_path.empty()) throw ParseError("run config names no scene instance file");
            scene = ingest_scene(cfg.scene_path);
        });
    } catch (const Error& e) {
        record_error("ingestion", e);
        return report;
    }

    // Step 2: task cognition.
    TaskSpec task;
    try {
        timed("cognition", [&] {
            if (cfg.agent_kind == "external") {
                ExternalAgent agent(cfg.agent_address, cfg.solver, cfg.algorithm_specified,
                                    cfg.edge_address);
                task = cognize(cfg.demands, scene, agent);
            } else {
                RuleBasedAgent agent(cfg.solver, cfg.algorithm_specified, cfg.edge_address);
                task = cognize(cfg.demands, scene, agent);
            }
        });
    } catch (const Error& e) {
        record_error("cognition", e);
        return report;
    }
    report.steps_completed.push_back("cognition");
    report.task = task;
    report.steps_completed.push_back("ingestion");
    report.scene = scene;

    // Step 4: decision (local solve or edge offload).
    DecideOutcome outcome;
    try {
        timed("decision", [&] { outcome = decide(task, scene, cfg.models, cfg.edge_fallback_local); });
    } catch (const Error& e) {
        record_error("decision", e);
        return report;
    }
    report.steps_completed.push_back("decision");
    report.solve = outcome.result;
    report.fallback_used = outcome.fallback_used;
    report.fallback_reason = outcome.fallback_reason;

    // Step 5: embodied execution (simulated).
    try {
        timed("execution", [&] {
            if (outcome.result.status != SolveStatus::ok)
                throw InfeasiblePlanRejected("solver found no feasible plan to execute");
            report.telemetry = execute(outcome.result.best_plan, scene.instance, task.demands,
                                       cfg.models, cfg.cruise_speed_mps);
        });
    } catch (const Error& e) {
        record_error("execution", e);
        return report;
    }
    report.steps_completed.push_back("execution");
    return report;
}

}  // namespace isc3
