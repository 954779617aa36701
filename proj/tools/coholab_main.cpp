// Command-line front end: one experiment per invocation, JSON or table
// report on stdout or to --out. Exit codes: 0 all verdicts hold (or verdict
// gating disabled), 1 operational error, 2 a mathematical bound violated
// under --strict.

#include <coholab/report.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

struct CliArgs {
    coholab::ExperimentConfig config;
    std::string config_path;
    bool seed_given = false;
    std::uint64_t seed_value = 0;
};

void add_common_options(CLI::App* cmd, CliArgs& args) {
    auto& c = args.config;
    cmd->add_option("--config", args.config_path, "experiment config file (flags override its fields)");
    cmd->add_option("--algebra", c.algebra_path, "algebra definition file");
    cmd->add_option("--builtin", c.builtin, "builtin algebra (m2|m3|dual-numbers|t2|t3|matrix:K|upper:K|direct-sum:A:B)");
    cmd->add_option("--module", c.module, "coefficient bimodule (regular|dual|zero|file)");
    cmd->add_option("--n", c.n, "cochain degree");
    cmd->add_option("--eps", c.eps, "perturbation sizes")->delimiter(',');
    cmd->add_option("--perturb", c.perturb, "perturbation kind (bounded-smooth|oscillatory|coordinate-clip)");
    cmd->add_option("--lambda-set", c.lambda_set, "scalar set (tcircle:COUNT|one-i|ball:COUNT:RADIUS|one)");
    cmd->add_option("--span", c.span, "spanning set (basis|indices:i,j,...)");
    cmd->add_option("--m-max", c.m_max, "iteration cap");
    cmd->add_option("--tol", c.tol, "iteration tolerance");
    cmd->add_option("--seed", args.seed_value, "RNG seed")->each([&args](const std::string&) { args.seed_given = true; });
    cmd->add_option("--trials", c.trials, "trial count for vanishing/probe tasks");
    cmd->add_option("--format", c.format, "output format (json|table)");
    cmd->add_flag("--strict", c.strict, "exit 2 when any mathematical verdict fails");
    cmd->add_option("--out", c.out_path, "write the report to a file instead of stdout");
}

} // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"coholab: Hochschild cohomology of finite-dimensional algebras "
                 "and repair of approximately multilinear cocycles"};
    app.require_subcommand(1);

    std::vector<std::pair<std::string, std::string>> tasks = {
        {"cohomology", "exact cohomology dimensions H^0..H^n"},
        {"repair", "perturb a planted cocycle and repair it, verifying every bound"},
        {"derivation", "recover a planted inner derivation from a perturbed triple"},
        {"coboundary-repair", "repair an approximate coboundary to an exact pair dG = F"},
        {"vanishing", "exact vanishing versus the approximate route at degree n"},
        {"probe", "degree-1 vanishing over the module family {regular, dual, zero}"},
    };

    std::vector<std::unique_ptr<CliArgs>> per_task;
    for (const auto& [name, help] : tasks) {
        auto args = std::make_unique<CliArgs>();
        args->config.task = name;
        add_common_options(app.add_subcommand(name, help), *args);
        per_task.push_back(std::move(args));
    }

    CLI11_PARSE(app, argc, argv);

    CliArgs* chosen = nullptr;
    for (std::size_t i = 0; i < tasks.size(); ++i)
        if (app.get_subcommand(tasks[i].first)->parsed()) chosen = per_task[i].get();
    if (!chosen) {
        std::cerr << "error: no task selected\n";
        return 1;
    }

    try {
        coholab::ExperimentConfig config;
        if (!chosen->config_path.empty()) {
            std::ifstream in(chosen->config_path);
            if (!in) throw std::runtime_error("cannot open config file: " + chosen->config_path);
            coholab::json j = coholab::json::parse(in);
            config = coholab::config_from_json(j);
        }
        // explicit flags override config-file fields
        CLI::App* cmd = app.get_subcommand(chosen->config.task);
        auto overridden = [&](const char* flag) { return cmd->count(flag) > 0; };
        config.task = chosen->config.task;
        if (overridden("--algebra")) config.algebra_path = chosen->config.algebra_path;
        if (overridden("--builtin")) config.builtin = chosen->config.builtin;
        if (overridden("--module") || config.module.empty()) config.module = chosen->config.module;
        if (overridden("--n")) config.n = chosen->config.n;
        if (overridden("--eps")) config.eps = chosen->config.eps;
        if (overridden("--perturb")) config.perturb = chosen->config.perturb;
        if (overridden("--lambda-set")) config.lambda_set = chosen->config.lambda_set;
        if (overridden("--span")) config.span = chosen->config.span;
        if (overridden("--m-max")) config.m_max = chosen->config.m_max;
        if (overridden("--tol")) config.tol = chosen->config.tol;
        if (chosen->seed_given) config.seed = chosen->seed_value;
        if (overridden("--trials")) config.trials = chosen->config.trials;
        if (overridden("--format")) config.format = chosen->config.format;
        if (chosen->config.strict) config.strict = true;
        if (overridden("--out")) config.out_path = chosen->config.out_path;
        if (chosen->config_path.empty() && config.module.empty()) config.module = "regular";

        coholab::StabilityReport report = coholab::run(config);
        std::string text = config.format == "table" ? coholab::render_table(report) : report.to_json_string();
        if (!config.out_path.empty()) {
            std::ofstream out(config.out_path);
            if (!out) throw std::runtime_error("cannot write report to: " + config.out_path);
            out << text;
        } else {
            std::cout << text;
        }
        if (config.strict && !report.all_hold) return 2;
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int main(int argc, char** argv) {
    try {
        return run_cli(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
