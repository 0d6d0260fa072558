#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "afem/driver.hpp"

namespace {

afem::ProblemData load_problem(const std::string& experiment, const std::string& problem_path) {
    if (!problem_path.empty()) return afem::parse_problem_file(problem_path);
    if (experiment == "single") return afem::single_parameter_problem();
    if (experiment == "multi") return afem::multi_parameter_problem();
    throw CLI::ValidationError("--experiment must be 'single' or 'multi'");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive FEM parameter estimation for elliptic PDE problems"};
    app.require_subcommand(1);

    auto* run = app.add_subcommand("run", "Run the adaptive refinement loop");
    std::string experiment, problem_path, marking = "weighted", out_path;
    double theta = 0.5, rho_tol = 0.0, sigma = 0.0;
    long max_elements = 50000;
    std::uint64_t seed = 0;
    bool defer_p = false;
    run->add_option("--experiment", experiment, "Built-in experiment: single | multi");
    run->add_option("--problem", problem_path, "Problem description file");
    run->add_option("--theta", theta, "Doerfler marking parameter in (0,1]");
    run->add_option("--marking", marking, "weighted | classical")
        ->check(CLI::IsMember({"weighted", "classical"}));
    run->add_option("--max-elements", max_elements, "Element budget");
    run->add_option("--rho-tol", rho_tol, "Stop once the estimator falls below this value");
    run->add_option("--sigma", sigma, "Std deviation of Gaussian measurement noise");
    run->add_option("--seed", seed, "RNG seed for the noise draw");
    run->add_flag("--defer-p", defer_p, "Solve for the parameter only on the final mesh");
    run->add_option("--out", out_path, "CSV output path (default: stdout)");

    auto* rate = app.add_subcommand("rate", "Fit a convergence rate from a results CSV");
    std::string in_path, column = "rho";
    double window = 0.5;
    rate->add_option("--in", in_path, "Results CSV")->required();
    rate->add_option("--column", column, "Column to fit (default: rho)");
    rate->add_option("--window", window, "Fraction of trailing levels to fit over");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            if (experiment.empty() == problem_path.empty())
                throw CLI::ValidationError("give exactly one of --experiment or --problem");
            afem::ProblemData problem = load_problem(experiment, problem_path);
            afem::RunConfig config;
            config.theta = theta;
            config.marking = marking == "classical" ? afem::RunConfig::Marking::Classical
                                                    : afem::RunConfig::Marking::Weighted;
            config.max_elements = max_elements;
            config.rho_tol = rho_tol;
            config.sigma = sigma;
            config.seed = seed;
            config.solve_p_every_level = !defer_p;
            auto records = afem::adaptive_loop(config, problem);
            if (out_path.empty()) {
                afem::write_csv(std::cout, records, problem.n_q);
            } else {
                std::ofstream out(out_path);
                if (!out) throw std::runtime_error("cannot open '" + out_path + "'");
                afem::write_csv(out, records, problem.n_q);
            }
        } else if (rate->parsed()) {
            std::ifstream in(in_path);
            if (!in) throw std::runtime_error("cannot open '" + in_path + "'");
            afem::CsvTable table = afem::read_csv(in);
            double slope = afem::fit_rate(table.column("n_elements"), table.column(column), window);
            std::cout << slope << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
