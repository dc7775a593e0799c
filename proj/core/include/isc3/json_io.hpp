#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "isc3/constraints.hpp"
#include "isc3/instance.hpp"
#include "isc3/plan.hpp"
#include "isc3/solvers.hpp"

namespace isc3 {

// Ordered JSON keeps key insertion order, which makes every emitted
// document byte-reproducible for identical inputs.
using json = nlohmann::ordered_json;

json point_to_json(const GeoPoint& p);
GeoPoint point_from_json(const json& j, Frame frame, const std::string& where);

// In-memory forms of the instance file schema (implemented with the file
// loader in instance.cpp).
json instance_to_json(const DeliveryInstance& instance);
DeliveryInstance instance_from_json(const json& j);

json demands_to_json(const Isc3Demands& d);
// Absent fields take the corresponding value from `defaults`; unknown keys rejected.
Isc3Demands demands_from_json(const json& j, const Isc3Demands& defaults = {});

json models_to_json(const Models& m);
// Reads optional `link` / `energy` / `sensing` keys from a parent object.
Models models_from_parent_json(const json& parent, const Models& defaults = {});

json penalty_weights_to_json(const PenaltyWeights& w);
PenaltyWeights penalty_weights_from_json(const json& j, const PenaltyWeights& defaults = {});

json solver_config_to_json(const SolverConfig& cfg);
SolverConfig solver_config_from_json(const json& j, const SolverConfig& defaults = {});

// Plans serialize station ids; parsing resolves them against the instance
// (UnknownStation on failure) and keeps the numeric fields verbatim.
json plan_to_json(const RoutePlan& plan, const DeliveryInstance& instance);
RoutePlan plan_from_json(const json& j, const DeliveryInstance& instance);

json objective_to_json(const Objective& o);
Objective objective_from_json(const json& j);

json report_to_json(const FeasibilityReport& report, Frame frame);
FeasibilityReport report_from_json(const json& j, Frame frame);

json result_to_json(const SolverResult& result, const DeliveryInstance& instance);
SolverResult result_from_json(const json& j, const DeliveryInstance& instance);

// CSV columns: algorithm,total_length_km,feasible,evaluations,wall_time_s,seed.
// Doubles use shortest round-trip formatting, so re-parsing recovers the
// exact values.
std::string comparison_to_csv(const ComparisonTable& table);
std::string comparison_to_text(const ComparisonTable& table);

// Removes run-volatile keys (wall_time_s, timings, ingested_at) at any
// depth; used by determinism checks.
json strip_volatile(json j);

}  // namespace isc3
