#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "isc3/instance.hpp"
#include "isc3/json_io.hpp"
#include "isc3/plan.hpp"
#include "isc3/solvers.hpp"

namespace isc3 {

// Compact scene description handed to decision agents; small enough to
// cross the wire to an external one.
struct SceneSummary {
    int n_stations = 0;
    int total_demand = 0;
    int n_base_stations = 0;
    double visibility = 1.0;
};

json scene_summary_to_json(const SceneSummary& s);
SceneSummary scene_summary_from_json(const json& j);

// The ingested delivery scene plus provenance.
struct ScenePackage {
    DeliveryInstance instance;
    std::string source_path;
    std::string ingested_at;  // ISO 8601, UTC

    SceneSummary summary() const;
};

// What the decision agent settles on: the task, its demands, the solver to
// run, and whether to offload the solve.
struct TaskSpec {
    std::string task = "express_delivery";
    Isc3Demands demands;
    SolverConfig solver;
    bool offload = false;
    std::string edge_address;  // empty when none configured

    void validate() const;  // throws ValidationError
};

json task_spec_to_json(const TaskSpec& t);
TaskSpec task_spec_from_json(const json& j);

// Agent boundary. The rule-based agent gives deterministic behavior; the
// external agent delegates over the edge wire protocol, where a real
// decision model can sit.
class DecisionAgent {
public:
    virtual ~DecisionAgent() = default;
    virtual TaskSpec plan(const Isc3Demands& demands, const SceneSummary& scene) = 0;
};

struct RulePolicy {
    int sa_station_limit = 12;       // SA up to here, GA beyond
    int offload_station_limit = 25;  // offload for larger scenes
};

class RuleBasedAgent : public DecisionAgent {
public:
    RuleBasedAgent(SolverConfig base, bool algorithm_forced, std::string edge_address,
                   RulePolicy policy = {});
    TaskSpec plan(const Isc3Demands& demands, const SceneSummary& scene) override;

private:
    SolverConfig base_;
    bool algorithm_forced_;
    std::string edge_address_;
    RulePolicy policy_;
};

class ExternalAgent : public DecisionAgent {
public:
    ExternalAgent(std::string address, SolverConfig base, bool algorithm_forced,
                  std::string edge_address, double timeout_s = 30.0);
    // Throws AgentUnavailable when the remote end is unreachable and
    // AgentInvalidResponse when its reply does not validate as a TaskSpec.
    TaskSpec plan(const Isc3Demands& demands, const SceneSummary& scene) override;

private:
    std::string address_;
    SolverConfig base_;
    bool algorithm_forced_;
    std::string edge_address_;
    double timeout_s_;
};

enum class TelemetryEventKind { depart, waypoint, deliver, trip_return, abort };

std::string to_string(TelemetryEventKind k);

struct TelemetryEvent {
    double time_s = 0.0;
    GeoPoint position;
    double battery_wh = 0.0;
    double rate_bps = 0.0;
    TelemetryEventKind kind = TelemetryEventKind::waypoint;
    int trip_index = -1;
    std::string station_id;  // set for deliver events
};

struct TelemetryLog {
    std::vector<TelemetryEvent> events;
    int abort_count = 0;
};

json telemetry_to_json(const TelemetryLog& log);
std::string telemetry_to_csv(const TelemetryLog& log);

// Parsed run configuration (file schema in the README).
struct RunConfig {
    Isc3Demands demands;
    std::string scene_path;
    std::string agent_kind = "rule_based";  // rule_based | external
    std::string agent_address;
    SolverConfig solver;
    bool algorithm_specified = false;
    std::string edge_address;
    bool edge_fallback_local = true;
    Models models;
    double cruise_speed_mps = 15.0;
};

RunConfig run_config_from_json(const json& j);
RunConfig load_run_config(const std::string& path);

// Step 1: demands from the run-config file; absent fields take the
// defaults (200 kbps, 0.95, 200 Wh, 20 packages, 75 km).
Isc3Demands generate_demands(const std::string& config_path);

// Step 3 (ingestion): load, validate, and normalize the scene to planar.
ScenePackage ingest_scene(const std::string& path);

// Step 2: the agent turns demands + scene summary into a TaskSpec.
TaskSpec cognize(const Isc3Demands& demands, const ScenePackage& scene, DecisionAgent& agent);

struct DecideOutcome {
    SolverResult result;
    bool fallback_used = false;
    std::string fallback_reason;
};

// Step 4: local solve or edge offload (identical results for identical
// seeds); transport failures fall back to the local path when enabled.
DecideOutcome decide(const TaskSpec& task, const ScenePackage& scene, const Models& models,
                     bool fallback_local = true);

// Step 5: kinematic execution of a feasible plan (constant cruise speed,
// straight legs, per-sample battery and rate bookkeeping). Throws
// InfeasiblePlanRejected when the plan does not pass feasibility under the
// same models.
TelemetryLog execute(const RoutePlan& plan, const DeliveryInstance& instance,
                     const Isc3Demands& demands, const Models& models, double cruise_speed_mps);

struct PipelineReport {
    std::vector<std::string> steps_completed;  // prefix of the five canonical labels
    std::string error_step;                    // empty when the run completed
    std::string error_kind;
    std::string error_message;
    std::optional<Isc3Demands> demands;
    std::optional<TaskSpec> task;
    std::optional<ScenePackage> scene;
    std::optional<SolverResult> solve;
    bool fallback_used = false;
    std::string fallback_reason;
    std::optional<TelemetryLog> telemetry;
    std::vector<std::pair<std::string, double>> timings;  // step label -> seconds
};

json pipeline_report_to_json(const PipelineReport& report);

// Steps 1..5 in order; a step failure truncates the report at that step
// with the error recorded.
PipelineReport run_pipeline(const std::string& config_path);

// Names the step labels in canonical report order.
const std::vector<std::string>& pipeline_step_labels();

}  // namespace isc3
