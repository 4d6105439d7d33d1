// pimlab: condition certificates, simulation and verification experiments for
// the state-dependent-delay reaction-diffusion equation.
//
// Exit codes:
//   0  success (check: verdict certified; experiment: every non-informational experiment passed)
//   1  check not certified, synthesis infeasible, or an experiment failed
//   2  usage or configuration error
//   3  integration failure (non-finite state)

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pimlab/pimlab.hpp"

namespace fs = std::filesystem;
using namespace pimlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIntegration = 3;

fs::path default_output_dir() {
    if (const char* env = std::getenv("PIMLAB_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

void write_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

struct CommonOptions {
    std::string config;
    std::string format;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::size_t jobs = 1;
};

int cmd_check(const CommonOptions& o, std::optional<std::size_t> n_override, std::optional<double> mu_override,
              bool allow_uncertified) {
    auto cfg = load_run_config(o.config);
    const std::size_t N = n_override.value_or(cfg.N);
    const auto mu = mu_override ? mu_override : cfg.mu;
    const auto report = condition_report(cfg.problem, N, mu);
    const std::string text = o.format == "csv" ? to_csv(report) : to_json(report) + "\n";
    std::cout << text;
    if (!o.output.empty()) write_file(o.output, text);
    if (report.verdict == Verdict::neither_certified && !allow_uncertified) return kExitFail;
    return kExitOk;
}

int cmd_synthesize(const CommonOptions& o, std::size_t N, double length, std::optional<double> p,
                   std::optional<double> mb, std::optional<double> lb, std::optional<double> margin,
                   std::optional<double> position) {
    SynthesisOptions opt;
    if (!o.config.empty()) opt = load_run_config(o.config).synthesis;
    if (margin) opt.plus_margin = *margin;
    if (position) opt.minus_position = *position;
    opt.jobs = o.jobs;

    NonlinearitySpec nl;
    if (p) {
        nl = certified(NonlinearitySpec::nicholson(*p));
    } else if (mb && lb) {
        nl = NonlinearitySpec::custom(*mb, *lb);
    } else {
        std::cerr << "synthesize: give --p (nicholson) or both --M_b and --L_b\n";
        return kExitUsage;
    }
    const auto res = synthesize_params(N, nl, length, opt);
    std::string text;
    if (o.format == "csv") {
        std::ostringstream out;
        out.precision(17);
        out << "key,value\n";
        if (res.feasible) {
            const auto& f = *res.feasible;
            out << "feasible,true\nr," << f.r << "\nM_xi," << f.M_xi << "\nplus_integral," << f.plus_integral
                << "\nminus_integral," << f.minus_integral << "\nM1_p," << f.M1_p << "\nM1_full," << f.M1_full
                << "\nbound3," << f.bound3 << '\n';
        } else {
            out << "feasible,false\nbinding_constraint," << res.infeasible->binding_constraint << '\n';
        }
        text = out.str();
    } else {
        text = to_json(res) + "\n";
    }
    std::cout << text;
    if (!o.output.empty()) write_file(o.output, text);
    return res.feasible ? kExitOk : kExitFail;
}

int cmd_simulate(const CommonOptions& o, std::optional<double> horizon, std::optional<std::size_t> stride) {
    auto cfg = load_run_config(o.config);
    auto problem = cfg.problem;
    if (stride) problem.stride = *stride;
    problem.steps = problem.steps_for(horizon.value_or(cfg.simulation.horizon));
    const auto seed = o.seed.value_or(cfg.simulation.seed);
    const auto phi =
        make_initial(problem.op, problem.delay, cfg.simulation.family, cfg.simulation.amplitude, seed);
    const auto record = evolve(problem, phi);

    std::ostringstream out;
    if (o.format == "json") {
        out << to_json(record) << '\n';
    } else {
        write_csv(out, record);
    }
    const fs::path path = o.output.empty() ? default_output_dir() / ("simulate." + o.format) : fs::path(o.output);
    write_file(path, out.str());
    std::cerr << "wrote " << record.samples.size() << " samples to " << path.string() << '\n';
    return kExitOk;
}

int cmd_experiment(const CommonOptions& o, const std::string& name, std::optional<std::size_t> trials,
                   std::optional<double> horizon) {
    auto cfg = load_run_config(o.config);
    auto ex = cfg.experiment;
    if (o.seed) ex.seed = *o.seed;
    if (trials) ex.trials = *trials;
    if (horizon) ex.horizon = *horizon;
    ex.jobs = o.jobs;
    const auto& problem = cfg.problem;

    std::vector<ExperimentResult> results;
    if (name == "cone-invariance") {
        for (auto cone : {Cone::positive, Cone::negative}) {
            auto c = ex;
            c.cone = cone;
            results.push_back(run_cone_invariance(problem, c));
        }
    } else if (name == "coincidence") {
        for (auto cone : {Cone::positive, Cone::negative}) {
            auto c = ex;
            c.cone = cone;
            results.push_back(run_coincidence(problem, c));
        }
        results.push_back(run_coincidence_witness(problem, ex));
    } else if (name == "lipschitz") {
        results.push_back(run_lipschitz_sampling(problem, ex));
    } else if (name == "attraction") {
        results.push_back(run_attraction_rate(problem, ex, cfg.N));
    } else {
        std::cerr << "experiment: unknown name '" << name
                  << "' (expected cone-invariance, coincidence, lipschitz, attraction)\n";
        return kExitUsage;
    }

    const fs::path dir = o.output.empty() ? default_output_dir() : fs::path(o.output);
    fs::create_directories(dir);
    emit(results, (dir / (name + ".json")).string(), OutputFormat::json);
    emit(results, (dir / (name + ".csv")).string(), OutputFormat::csv);
    std::cout << (o.format == "csv" ? to_csv(results) : to_json(results) + "\n");

    bool ok = true;
    for (const auto& r : results) {
        std::cerr << r.name << ": " << r.status << '\n';
        if (!r.informational && r.status == "fail") ok = false;
    }
    return ok ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"pimlab: spectral-gap certificates and verification experiments for a delay PDE"};
    app.require_subcommand(1);
    CommonOptions o;

    std::string check_fmt = "json", syn_fmt = "json", sim_fmt = "csv", exp_fmt = "json";
    auto add_format = [](CLI::App* sub, std::string& target) {
        sub->add_option("--format", target, "Output format (json or csv)")->check(CLI::IsMember({"json", "csv"}));
    };

    auto* check = app.add_subcommand("check", "Evaluate the spectral-gap conditions and print the report");
    std::optional<std::size_t> check_n;
    std::optional<double> check_mu;
    bool allow_uncertified = false;
    check->add_option("--config", o.config, "Run configuration (JSON)")->required();
    check->add_option("--N", check_n, "Override conditions.N");
    check->add_option("--mu", check_mu, "Override mu (default (lambda_{N+1} - lambda_N) / 2)");
    check->add_option("--output", o.output, "Also write the report to this file");
    check->add_flag("--allow-uncertified", allow_uncertified, "Exit 0 even when nothing is certified");
    add_format(check, check_fmt);

    auto* synth = app.add_subcommand("synthesize", "Search parameters realizing a partial-manifold certificate");
    std::size_t syn_n = 0;
    double syn_length = 0.0;
    std::optional<double> syn_p, syn_mb, syn_lb, syn_margin, syn_pos;
    synth->add_option("--N", syn_n, "Spectral cut N")->required()->check(CLI::PositiveNumber);
    synth->add_option("--length", syn_length, "Domain length L")->required()->check(CLI::PositiveNumber);
    synth->add_option("--p", syn_p, "Nicholson amplitude p");
    synth->add_option("--M_b", syn_mb, "Custom sup bound of b");
    synth->add_option("--L_b", syn_lb, "Custom Lipschitz constant of b");
    synth->add_option("--margin", syn_margin, "Relative margin below the xi+ integral bound");
    synth->add_option("--minus-position", syn_pos, "Position of the xi- integral inside its window, in (0, 1]");
    synth->add_option("--config", o.config, "Optional config providing synthesis grids");
    synth->add_option("--output", o.output, "Also write the result to this file");
    synth->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    add_format(synth, syn_fmt);

    auto* sim = app.add_subcommand("simulate", "Integrate from the configured initial data and write the trajectory");
    std::optional<double> sim_horizon;
    std::optional<std::size_t> sim_stride;
    sim->add_option("--config", o.config, "Run configuration (JSON)")->required();
    sim->add_option("--horizon", sim_horizon, "Override simulation.horizon");
    sim->add_option("--stride", sim_stride, "Sampling stride in steps");
    sim->add_option("--seed", o.seed, "Override simulation.seed");
    sim->add_option("--output", o.output, "Trajectory file (default $PIMLAB_OUTPUT_DIR/simulate.<format>)");
    add_format(sim, sim_fmt);

    auto* exp = app.add_subcommand("experiment", "Run a verification experiment");
    std::string exp_name;
    std::optional<std::size_t> exp_trials;
    std::optional<double> exp_horizon;
    exp->add_option("name", exp_name, "cone-invariance | coincidence | lipschitz | attraction")->required();
    exp->add_option("--config", o.config, "Run configuration (JSON)")->required();
    exp->add_option("--seed", o.seed, "Override experiments.seed");
    exp->add_option("--trials", exp_trials, "Override experiments.trials");
    exp->add_option("--horizon", exp_horizon, "Override experiments.horizon");
    exp->add_option("--jobs", o.jobs, "Worker threads (results do not depend on this)")->check(CLI::PositiveNumber);
    exp->add_option("--output", o.output, "Output directory (default $PIMLAB_OUTPUT_DIR)");
    add_format(exp, exp_fmt);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }
    o.format = check->parsed() ? check_fmt : synth->parsed() ? syn_fmt : sim->parsed() ? sim_fmt : exp_fmt;

    try {
        if (check->parsed()) return cmd_check(o, check_n, check_mu, allow_uncertified);
        if (synth->parsed()) return cmd_synthesize(o, syn_n, syn_length, syn_p, syn_mb, syn_lb, syn_margin, syn_pos);
        if (sim->parsed()) return cmd_simulate(o, sim_horizon, sim_stride);
        if (exp->parsed()) return cmd_experiment(o, exp_name, exp_trials, exp_horizon);
    } catch (const ConfigError& e) {
        std::cerr << "config error at " << e.key_path() << ": " << e.what() << '\n';
        return kExitUsage;
    } catch (const IntegrationFailure& e) {
        std::cerr << "integration failure at step " << e.step_index() << ": " << e.what() << '\n';
        return kExitIntegration;
    } catch (const ContractViolation& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}
