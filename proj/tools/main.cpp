// isc3route: operator CLI for the UAV express-delivery route optimizer and
// ISC3 pipeline simulator. Subcommands: generate, solve, evaluate, bench,
// pipeline, serve, render.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "isc3/edge.hpp"
#include "isc3/errors.hpp"
#include "isc3/instance.hpp"
#include "isc3/json_io.hpp"
#include "isc3/log.hpp"
#include "isc3/pipeline.hpp"
#include "isc3/render.hpp"
#include "isc3/routing.hpp"
#include "isc3/solvers.hpp"

namespace {

using isc3::json;

// Canonical benchmark scene: 10 stations, 5 base stations, 30 km square,
// demands 1..5, solved under the default ISC3 thresholds.
constexpr int kCanonicalStations = 10;
constexpr double kCanonicalAreaKm = 30.0;
constexpr int kCanonicalBaseStations = 5;
constexpr int kCanonicalDemandLo = 1;
constexpr int kCanonicalDemandHi = 5;

json parse_json_file(const std::string& path, const std::string& what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw isc3::ParseError("cannot open " + what + " '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        return json::parse(buf.str());
    } catch (const json::parse_error& e) {
        throw isc3::ParseError(what + " '" + path + "': " + e.what());
    }
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw isc3::Error("cannot write '" + path + "'");
    out << content;
}

void write_or_print(const std::string& out_path, const std::string& content) {
    if (out_path.empty())
        std::cout << content;
    else
        write_file(out_path, content);
}

// A demands file is either a bare demands object or any JSON document with
// a top-level "demands" key (a run config works).
isc3::Isc3Demands load_demands_file(const std::string& path) {
    const json j = parse_json_file(path, "demands file");
    if (j.is_object() && j.contains("demands")) return isc3::demands_from_json(j.at("demands"));
    return isc3::demands_from_json(j);
}

struct SharedInputs {
    isc3::Isc3Demands demands;
    isc3::Models models;
    isc3::SolverConfig solver;
};

// Precedence: built-in defaults < --config file < dedicated flags.
SharedInputs gather_inputs(const std::string& config_path, const std::string& demands_path) {
    SharedInputs in;
    if (!config_path.empty()) {
        const json j = parse_json_file(config_path, "config");
        if (!j.is_object()) throw isc3::SchemaError("config: top level must be an object");
        if (j.contains("demands")) in.demands = isc3::demands_from_json(j.at("demands"));
        in.models = isc3::models_from_parent_json(j);
        if (j.contains("solver")) in.solver = isc3::solver_config_from_json(j.at("solver"));
        if (j.contains("seed") && !j.contains("solver")) {
            if (!j.at("seed").is_number_integer())
                throw isc3::SchemaError("config.seed: expected an integer");
            in.solver.seed = j.at("seed").get<std::uint64_t>();
        }
    }
    if (!demands_path.empty()) in.demands = load_demands_file(demands_path);
    return in;
}

isc3::RoutePlan load_plan_file(const std::string& path, const isc3::DeliveryInstance& instance) {
    json j = parse_json_file(path, "plan file");
    if (j.is_object() && j.contains("best_plan")) j = j.at("best_plan");
    return isc3::plan_from_json(j, instance);
}

int cmd_generate(std::uint64_t seed, int stations, double area, int base_stations, int demand_lo,
                 int demand_hi, const std::string& out) {
    const isc3::DeliveryInstance instance =
        isc3::generate_instance(seed, stations, area, base_stations, demand_lo, demand_hi);
    isc3::save_instance(instance, out);
    std::cout << "wrote " << out << " (" << instance.stations.size() << " stations, "
              << instance.base_stations.size() << " base stations)\n";
    return 0;
}

int cmd_solve(const std::string& instance_path, SharedInputs in, const std::string& edge,
              const std::string& out) {
    const isc3::DeliveryInstance instance =
        isc3::project_to_planar(isc3::load_instance(instance_path));
    isc3::SolverResult result;
    if (edge.empty()) {
        result = isc3::solve(instance, in.demands, in.models, in.solver);
    } else {
        result = isc3::solve_remote(edge, instance, in.demands, in.solver, in.models);
    }
    write_or_print(out, isc3::result_to_json(result, instance).dump(2) + "\n");
    if (result.status != isc3::SolveStatus::ok) {
        std::cerr << "no feasible plan found within budget (least-penalized plan reported)\n";
        return 3;
    }
    return 0;
}

int cmd_evaluate(const std::string& instance_path, const std::string& plan_path, SharedInputs in,
                 const std::string& out) {
    const isc3::DeliveryInstance instance =
        isc3::project_to_planar(isc3::load_instance(instance_path));
    const isc3::RoutePlan plan = load_plan_file(plan_path, instance);
    const isc3::FeasibilityReport report = isc3::check_route_feasibility(
        plan, in.demands, instance, in.models.link, in.models.energy, in.models.sensing);
    write_or_print(out, isc3::report_to_json(report, instance.frame).dump(2) + "\n");
    return report.pass ? 0 : 3;
}

int cmd_bench(const std::string& instance_path, SharedInputs in, std::uint64_t seed,
              long long budget, const std::string& out, const std::string& format) {
    isc3::DeliveryInstance instance;
    if (instance_path.empty()) {
        instance = isc3::generate_instance(seed, kCanonicalStations, kCanonicalAreaKm,
                                           kCanonicalBaseStations, kCanonicalDemandLo,
                                           kCanonicalDemandHi);
    } else {
        instance = isc3::project_to_planar(isc3::load_instance(instance_path));
    }

    std::vector<isc3::SolverConfig> configs;
    for (const auto algorithm : {isc3::Algorithm::aco, isc3::Algorithm::hybrid_pso,
                                 isc3::Algorithm::sa, isc3::Algorithm::ga}) {
        isc3::SolverConfig cfg = in.solver;
        cfg.algorithm = algorithm;
        cfg.seed = seed;
        cfg.eval_budget = budget;
        configs.push_back(cfg);
    }
    const isc3::ComparisonTable table = isc3::compare(instance, in.demands, in.models, configs);

    if (format == "json") {
        json rows = json::array();
        for (const auto& row : table.rows) {
            json rj;
            rj["algorithm"] = isc3::to_string(row.config.algorithm);
            if (row.result) rj["result"] = isc3::result_to_json(*row.result, instance);
            if (!row.error.empty()) rj["error"] = row.error;
            rows.push_back(std::move(rj));
        }
        write_or_print(out, rows.dump(2) + "\n");
    } else {
        write_or_print(out.empty() ? "bench.csv" : out, isc3::comparison_to_csv(table));
    }
    std::cout << isc3::comparison_to_text(table);

    int exit_code = 0;
    for (const auto& row : table.rows) {
        if (!row.error.empty()) return 2;
        if (row.result->status != isc3::SolveStatus::ok) exit_code = 3;
    }
    return exit_code;
}

int cmd_pipeline(const std::string& config_path, const std::string& out,
                 const std::string& telemetry_csv) {
    const isc3::PipelineReport report = isc3::run_pipeline(config_path);
    write_or_print(out, isc3::pipeline_report_to_json(report).dump(2) + "\n");
    if (!telemetry_csv.empty() && report.telemetry)
        write_file(telemetry_csv, isc3::telemetry_to_csv(*report.telemetry));
    if (!report.error_step.empty()) {
        std::cerr << "pipeline failed at step '" << report.error_step << "': "
                  << report.error_message << "\n";
        const std::string& kind = report.error_kind;
        return (kind == "InstanceInfeasible" || kind == "NoFeasiblePlan" ||
                kind == "InfeasiblePlanRejected")
                   ? 3
                   : 2;
    }
    return 0;
}

int cmd_serve(const std::string& bind, const std::string& config_path) {
    const isc3::HostPort hp = isc3::parse_address(bind);
    isc3::EdgeServerConfig server_config;
    if (!config_path.empty()) {
        const json j = parse_json_file(config_path, "config");
        server_config.models = isc3::models_from_parent_json(j);
    }
    isc3::EdgeServer server(server_config);
    const int port = server.start(hp.host, hp.port);
    std::cout << "edge server listening on " << hp.host << ":" << port << "\n";
    server.wait();
    return 0;
}

int cmd_render(const std::string& instance_path, const std::string& plan_path, SharedInputs in,
               const isc3::RenderSpec& spec, const std::string& out) {
    const isc3::DeliveryInstance instance =
        isc3::project_to_planar(isc3::load_instance(instance_path));
    std::optional<isc3::RoutePlan> plan;
    if (!plan_path.empty()) plan = load_plan_file(plan_path, instance);
    const std::string svg = isc3::render_svg(instance, plan ? &*plan : nullptr, in.demands,
                                             in.models.link, spec);
    write_file(out, svg);
    std::cout << "wrote " << out << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"UAV express-delivery route optimization and ISC3 pipeline simulation"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "Generate a seeded random delivery instance");
    std::uint64_t gen_seed = 42;
    int gen_stations = kCanonicalStations;
    double gen_area = kCanonicalAreaKm;
    int gen_bs = kCanonicalBaseStations;
    int gen_demand_lo = kCanonicalDemandLo;
    int gen_demand_hi = kCanonicalDemandHi;
    std::string gen_out = "instance.json";
    gen->add_option("--seed", gen_seed, "RNG seed");
    gen->add_option("--stations", gen_stations, "Number of delivery stations");
    gen->add_option("--area", gen_area, "Square area side, km");
    gen->add_option("--base-stations", gen_bs, "Number of base stations");
    gen->add_option("--demand-min", gen_demand_lo, "Minimum station demand");
    gen->add_option("--demand-max", gen_demand_hi, "Maximum station demand");
    gen->add_option("--out", gen_out, "Output instance file");

    // solve
    auto* solve_cmd = app.add_subcommand("solve", "Solve one instance with one algorithm");
    std::string solve_instance, solve_demands, solve_config, solve_edge, solve_out;
    std::string solve_algorithm = "sa";
    std::uint64_t solve_seed = 0;
    long long solve_budget = 20000;
    std::string solve_format = "json";
    solve_cmd->add_option("--instance", solve_instance, "Instance file")->required();
    solve_cmd->add_option("--demands", solve_demands, "Demands JSON file");
    solve_cmd->add_option("--config", solve_config, "Config JSON file (solver/link/energy/sensing)");
    solve_cmd->add_option("--algorithm", solve_algorithm, "aco | hybrid_pso | sa | ga")
        ->check(CLI::IsMember({"aco", "hybrid_pso", "sa", "ga"}));
    solve_cmd->add_option("--seed", solve_seed, "RNG seed");
    solve_cmd->add_option("--budget", solve_budget, "Objective evaluation budget");
    solve_cmd->add_option("--edge", solve_edge, "Offload to edge server at host:port");
    solve_cmd->add_option("--out", solve_out, "Result JSON path (stdout when omitted)");
    solve_cmd->add_option("--format", solve_format, "Output format")->check(CLI::IsMember({"json"}));
    bool solve_seed_given = false, solve_budget_given = false, solve_algorithm_given = false;
    solve_cmd->callback([&] {
        solve_seed_given = solve_cmd->count("--seed") > 0;
        solve_budget_given = solve_cmd->count("--budget") > 0;
        solve_algorithm_given = solve_cmd->count("--algorithm") > 0;
    });

    // evaluate
    auto* eval_cmd = app.add_subcommand("evaluate", "Feasibility report for a plan on an instance");
    std::string eval_instance, eval_plan, eval_demands, eval_config, eval_out;
    eval_cmd->add_option("--instance", eval_instance, "Instance file")->required();
    eval_cmd->add_option("--plan", eval_plan, "Plan or result JSON file")->required();
    eval_cmd->add_option("--demands", eval_demands, "Demands JSON file");
    eval_cmd->add_option("--config", eval_config, "Config JSON file");
    eval_cmd->add_option("--out", eval_out, "Report JSON path (stdout when omitted)");

    // bench
    auto* bench_cmd = app.add_subcommand("bench", "Run all four solvers and tabulate");
    std::string bench_instance, bench_demands, bench_config, bench_out;
    std::uint64_t bench_seed = 42;
    long long bench_budget = 20000;
    std::string bench_format = "csv";
    bench_cmd->add_option("--instance", bench_instance,
                          "Instance file (canonical generated scene when omitted)");
    bench_cmd->add_option("--demands", bench_demands, "Demands JSON file");
    bench_cmd->add_option("--config", bench_config, "Config JSON file");
    bench_cmd->add_option("--seed", bench_seed, "RNG seed (also seeds the canonical scene)");
    bench_cmd->add_option("--budget", bench_budget, "Objective evaluation budget per solver");
    bench_cmd->add_option("--out", bench_out, "CSV path (default bench.csv)");
    bench_cmd->add_option("--format", bench_format, "csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    // pipeline
    auto* pipe_cmd = app.add_subcommand("pipeline", "Run the five-step ISC3 pipeline");
    std::string pipe_config, pipe_out, pipe_telemetry;
    pipe_cmd->add_option("--config", pipe_config, "Run-config JSON file")->required();
    pipe_cmd->add_option("--out", pipe_out, "Report JSON path (stdout when omitted)");
    pipe_cmd->add_option("--telemetry-csv", pipe_telemetry, "Also write telemetry as CSV");

    // serve
    auto* serve_cmd = app.add_subcommand("serve", "Run the edge solve service");
    std::string serve_bind = "127.0.0.1:7787";
    std::string serve_config;
    serve_cmd->add_option("--bind", serve_bind, "Bind address host:port");
    serve_cmd->add_option("--config", serve_config, "Config JSON file (model defaults)");

    // render
    auto* render_cmd = app.add_subcommand("render", "Render instance and plan to SVG");
    std::string render_instance, render_plan, render_demands, render_config;
    std::string render_out = "render.svg";
    isc3::RenderSpec render_spec;
    bool no_stations = false, no_depot = false, no_trips = false, no_rings = false, no_zones = false;
    render_cmd->add_option("--instance", render_instance, "Instance file")->required();
    render_cmd->add_option("--plan", render_plan, "Plan or result JSON file");
    render_cmd->add_option("--demands", render_demands, "Demands JSON file (ring radius)");
    render_cmd->add_option("--config", render_config, "Config JSON file");
    render_cmd->add_option("--out", render_out, "SVG path");
    render_cmd->add_option("--canvas", render_spec.canvas_px, "Canvas size, px (>= 100)");
    render_cmd->add_flag("--no-stations", no_stations, "Hide stations");
    render_cmd->add_flag("--no-depot", no_depot, "Hide depot");
    render_cmd->add_flag("--no-trips", no_trips, "Hide trip polylines");
    render_cmd->add_flag("--no-rings", no_rings, "Hide coverage rings");
    render_cmd->add_flag("--no-zones", no_zones, "Hide no-fly zones");
    std::string render_format = "svg";
    render_cmd->add_option("--format", render_format, "Output format")
        ->check(CLI::IsMember({"svg"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (gen->parsed())
            return cmd_generate(gen_seed, gen_stations, gen_area, gen_bs, gen_demand_lo,
                                gen_demand_hi, gen_out);
        if (solve_cmd->parsed()) {
            SharedInputs in = gather_inputs(solve_config, solve_demands);
            if (solve_algorithm_given || solve_config.empty())
                in.solver.algorithm = isc3::algorithm_from_string(solve_algorithm);
            if (solve_seed_given) in.solver.seed = solve_seed;
            if (solve_budget_given) in.solver.eval_budget = solve_budget;
            return cmd_solve(solve_instance, std::move(in), solve_edge, solve_out);
        }
        if (eval_cmd->parsed())
            return cmd_evaluate(eval_instance, eval_plan, gather_inputs(eval_config, eval_demands),
                                eval_out);
        if (bench_cmd->parsed())
            return cmd_bench(bench_instance, gather_inputs(bench_config, bench_demands), bench_seed,
                             bench_budget, bench_out, bench_format);
        if (pipe_cmd->parsed()) return cmd_pipeline(pipe_config, pipe_out, pipe_telemetry);
        if (serve_cmd->parsed()) return cmd_serve(serve_bind, serve_config);
        if (render_cmd->parsed()) {
            render_spec.stations = !no_stations;
            render_spec.depot = !no_depot;
            render_spec.trips = !no_trips;
            render_spec.coverage_rings = !no_rings;
            render_spec.no_fly_zones = !no_zones;
            return cmd_render(render_instance, render_plan,
                              gather_inputs(render_config, render_demands), render_spec, render_out);
        }
    } catch (const isc3::InstanceInfeasible& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const isc3::NoFeasiblePlan& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const isc3::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
