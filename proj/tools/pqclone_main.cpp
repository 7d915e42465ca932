// pqclone CLI: feasibility checks, failure-probability optimization,
// identification, boundary-surface export, machine simulation and the
// brute-force grid oracle, all over problem JSON files.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pqclone/machine.hpp"
#include "pqclone/optimize.hpp"
#include "pqclone/oracle.hpp"

using json = nlohmann::ordered_json;
using namespace pqclone;

namespace {

struct RunConfig {
    std::string command;
    std::string problem_path;
    std::string q_text;
    double tol = kPsdTol;
    uint64_t seed = 12345;
    long shots = 100000;
    double grid_step = 0.005;
    int resolution = 50;
    int multistart = 0;
    bool census = false;
    std::string output_path;
};

json vector_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

ParameterPoint parse_q(const std::string& text, int n) {
    std::vector<double> values;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        try {
            values.push_back(std::stod(item));
        } catch (const std::exception&) {
            fail("InvalidArgument", "--q expects comma-separated decimals");
        }
    }
    if (static_cast<int>(values.size()) != n) {
        fail("InvalidArgument", "--q needs one value per state");
    }
    for (double v : values) {
        if (!(v >= 0.0 && v <= 1.0)) {
            fail("InvalidArgument", "--q components must lie in [0,1]");
        }
    }
    return ParameterPoint::create(
        Eigen::Map<Eigen::VectorXd>(values.data(), values.size()));
}

void emit(const RunConfig& config, const std::string& text) {
    if (config.output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(config.output_path);
    if (!out) fail("InvalidArgument", "cannot write " + config.output_path);
    out << text;
}

json optimum_json(const Optimum& opt) {
    json doc;
    doc["q"] = vector_json(opt.q_star.q);
    doc["p"] = vector_json(opt.q_star.p);
    doc["Q"] = opt.Q;
    doc["success"] = opt.success;
    doc["det"] = opt.det_at_opt;
    doc["certificate"] = certificate_name(opt.certificate);
    if (std::isfinite(opt.gradient_residual)) {
        doc["gradient_residual"] = opt.gradient_residual;
    } else {
        doc["gradient_residual"] = nullptr;
    }
    doc["converged"] = opt.converged;
    return doc;
}

OptimizeOptions make_options(const RunConfig& config) {
    OptimizeOptions options;
    options.psd_tol = config.tol;
    options.multistart = config.multistart;
    return options;
}

int run_check(const RunConfig& config) {
    const CloningProblem problem = load_problem(config.problem_path);
    if (config.q_text.empty()) fail("InvalidArgument", "check requires --q");
    const ParameterPoint q = parse_q(config.q_text, problem.count());
    const FeasibilityReport report = check(problem, q, config.tol);
    json doc;
    doc["command"] = "check";
    doc["q"] = vector_json(q.q);
    doc["p"] = vector_json(q.p);
    doc["feasible"] = report.feasible;
    doc["det"] = report.det;
    doc["min_eig"] = report.min_eig;
    doc["on_surface"] = report.on_surface;
    emit(config, doc.dump(2) + "\n");
    return report.feasible ? 0 : 2;
}

int run_optimize(const RunConfig& config) {
    const CloningProblem problem = load_problem(config.problem_path);
    const Optimum opt = optimize(problem, make_options(config));
    const FeasibilityReport report = check(problem, opt.q_star, config.tol);
    json doc;
    doc["command"] = "optimize";
    doc.update(optimum_json(opt));
    doc["min_eig"] = report.min_eig;
    emit(config, doc.dump(2) + "\n");
    return 0;
}

int run_identify(const RunConfig& config) {
    const CloningProblem problem = load_problem(config.problem_path);
    const Optimum opt = identify(problem.states(), problem.priors(), problem.m(),
                                 make_options(config));
    const CloningProblem ident = CloningProblem::create(
        problem.states(), problem.m(), problem.m() + 1,
        AlphaGram::identity(problem.count()), problem.priors());
    const FeasibilityReport report = check(ident, opt.q_star, config.tol);
    json doc;
    doc["command"] = "identify";
    doc["mode"] = problem.m() > 1 ? "generalized" : "standard";
    doc.update(optimum_json(opt));
    doc["min_eig"] = report.min_eig;
    emit(config, doc.dump(2) + "\n");
    return 0;
}

int run_surface(const RunConfig& config) {
    const CloningProblem problem = load_problem(config.problem_path);
    OptimizeOptions options = make_options(config);
    const auto mesh = surface_mesh(problem, config.resolution, options);
    const detail::SurfaceForm form = detail::surface_form(problem);
    std::string csv = "q1,q2,q3,det\n";
    char line[160];
    for (const auto& point : mesh) {
        const double det = detail::det_m(form, point.q);
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g,%.17g\n", point.q(0),
                      point.q(1), point.q(2), det);
        csv += line;
    }
    emit(config, csv);
    return 0;
}

int run_simulate(const RunConfig& config) {
    const CloningProblem problem = load_problem(config.problem_path);
    ParameterPoint q = ParameterPoint::ones(problem.count());
    std::optional<Optimum> opt;
    if (!config.q_text.empty()) {
        q = parse_q(config.q_text, problem.count());
    } else {
        opt = optimize(problem, make_options(config));
        q = opt->q_star;
    }
    const CloningMachine machine = construct(problem, q, config.tol);
    const SimulationResult result = simulate_all(machine, config.shots, config.seed);

    json doc;
    doc["command"] = "simulate";
    doc["q"] = vector_json(machine.q);
    doc["p"] = vector_json(machine.p);
    if (opt) {
        doc["Q"] = opt->Q;
        doc["success"] = opt->success;
        doc["certificate"] = certificate_name(opt->certificate);
    }
    doc["gram_deviation"] = machine.gram_deviation;
    doc["seed"] = result.seed;
    doc["shots"] = result.shots;
    json per_state = json::array();
    for (size_t i = 0; i < result.success_counts.size(); ++i) {
        json row;
        row["index"] = i;
        row["shots"] = result.shots_run[i];
        row["successes"] = result.success_counts[i];
        row["rate"] = result.rates[i];
        row["p"] = machine.success_weight(static_cast<int>(i));
        per_state.push_back(std::move(row));
    }
    doc["per_state"] = std::move(per_state);
    emit(config, doc.dump(2) + "\n");
    return 0;
}

int run_oracle(const RunConfig& config) {
    const CloningProblem problem = load_problem(config.problem_path);
    const GridSpec grid = GridSpec::create(config.grid_step);
    const Optimum opt = grid_optimum(problem, grid, config.tol);
    json doc;
    doc["command"] = "oracle";
    doc["grid_step"] = config.grid_step;
    doc.update(optimum_json(opt));
    if (config.census) {
        const CensusResult census = region_census(problem, grid, config.tol);
        json c;
        c["feasible"] = census.feasible;
        c["infeasible"] = census.infeasible;
        c["near_surface"] = census.near_surface;
        c["near_band"] = census.near_band;
        c["single_component"] = census.single_component;
        c["component_size"] = census.component_size;
        doc["census"] = std::move(c);
    }
    emit(config, doc.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Probabilistic cloning and identification of N known pure states"};
    app.require_subcommand(1);

    RunConfig config;
    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("problem", config.problem_path, "problem JSON file")
            ->required();
        cmd->add_option("--tol", config.tol,
                        "relative PSD tolerance (default 1e-10)");
        cmd->add_option("--output", config.output_path,
                        "write the result here instead of stdout");
        return cmd;
    };

    auto* cmd_check = add_common(app.add_subcommand(
        "check", "test realizability at a failure-probability vector"));
    cmd_check->add_option("--q", config.q_text, "comma-separated q in [0,1]^N")
        ->required();

    auto* cmd_opt = add_common(app.add_subcommand(
        "optimize", "minimize the prior-weighted failure probability"));
    cmd_opt->add_option("--multistart", config.multistart,
                        "ray multistart count (default 8*2^N, at least 64)");

    auto* cmd_ident = add_common(app.add_subcommand(
        "identify", "optimize with alpha forced to the identity (the file's "
                    "alpha and n are ignored; m > 1 runs in generalized mode)"));
    cmd_ident->add_option("--multistart", config.multistart,
                          "ray multistart count (default 8*2^N, at least 64)");

    auto* cmd_surface = add_common(app.add_subcommand(
        "surface", "emit the det = 0 boundary mesh as CSV (N = 3)"));
    cmd_surface->add_option("--resolution", config.resolution,
                            "directions per angle (default 50)");

    auto* cmd_sim = add_common(app.add_subcommand(
        "simulate", "construct the machine and sample the flag measurement"));
    cmd_sim->add_option("--q", config.q_text,
                        "machine point (default: the optimizer's q*)");
    cmd_sim->add_option("--shots", config.shots, "shots per state (default 100000)");
    cmd_sim->add_option("--seed", config.seed, "RNG seed (default 12345)");
    cmd_sim->add_option("--multistart", config.multistart,
                        "ray multistart count when optimizing");

    auto* cmd_oracle = add_common(app.add_subcommand(
        "oracle", "brute-force grid optimum (independent reference)"));
    cmd_oracle->add_option("--grid-step", config.grid_step,
                           "grid step in (0, 0.1] (default 0.005)");
    cmd_oracle->add_flag("--census", config.census,
                         "also classify every grid point and check connectivity");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_check->parsed()) return run_check(config);
        if (cmd_opt->parsed()) return run_optimize(config);
        if (cmd_ident->parsed()) return run_identify(config);
        if (cmd_surface->parsed()) return run_surface(config);
        if (cmd_sim->parsed()) return run_simulate(config);
        if (cmd_oracle->parsed()) return run_oracle(config);
    } catch (const Error& e) {
        json err;
        err["error"] = e.name();
        err["detail"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 1;
    } catch (const std::exception& e) {
        json err;
        err["error"] = "InternalError";
        err["detail"] = e.what();
        std::cout << err.dump(2) << "\n";
        return 1;
    }
    return 1;
}
