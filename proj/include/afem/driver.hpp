#ifndef AFEM_DRIVER_HPP
#define AFEM_DRIVER_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "afem/estimator.hpp"
#include "afem/lsq.hpp"
#include "afem/problem.hpp"

namespace afem {

struct RunConfig {
    enum class Marking { Weighted, Classical };

    double theta = 0.5;
    Marking marking = Marking::Weighted;
    long max_elements = 50000;
    double rho_tol = 0.0;
    double sigma = 0.0;
    std::uint64_t seed = 0;
    bool solve_p_every_level = true;
    int initial_cells = 4;
};

struct AdaptiveRecord {
    int level = 0;
    long n_elements = 0;
    double eta_total = 0.0;   // (sum_i eta_i^2)^{1/2}
    double zeta_total = 0.0;  // (sum_j zeta_j^2)^{1/2}
    double rho = 0.0;         // (2 eta^2 zeta^2)^{1/2}
    std::optional<double> classical_rho;
    Eigen::VectorXd p_estimate;  // empty if not solved on this level
    std::optional<double> p_error;
    long marked_count = 0;
    double wall_time_ms = 0.0;
};

// Minimal Doerfler set: elements sorted by squared indicator descending
// (ties by ascending index), shortest prefix with sum >= theta * total.
// Empty when all indicators vanish.
std::vector<int> doerfler_mark(const Eigen::VectorXd& indicators_sq, double theta);

// Seeded Gaussian perturbation G* + N(0, sigma^2); hand-rolled Box-Muller
// so that runs are reproducible bit for bit.
Eigen::VectorXd perturb_measurements(const Eigen::VectorXd& exact, double sigma,
                                     std::uint64_t seed);

// Adaptive loop: solve components, estimate, mark, refine, until the
// element budget or estimator tolerance is reached. The measurements are
// perturbed once up front (sigma > 0 requires problem.exact_p-style exact
// measurements already stored in problem.measurements).
std::vector<AdaptiveRecord> adaptive_loop(const RunConfig& config, const ProblemData& problem);

// Least-squares slope of log(quantity) vs log(n_elements) over the last
// `window` fraction of the records. Needs >= 4 points in the window.
double fit_rate(const std::vector<double>& n_elements, const std::vector<double>& quantity,
                double window = 0.5);

// Synthesize measurements G(u_H(exact_p)) on a uniformly refined mesh with
// at least min_elements elements.
Eigen::VectorXd synthesize_measurements(const ProblemData& problem, long min_elements = 30000);

void write_csv(std::ostream& out, const std::vector<AdaptiveRecord>& records, int n_q);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;  // NaN for empty fields

    std::vector<double> column(const std::string& name) const;
};
CsvTable read_csv(std::istream& in);

}  // namespace afem

#endif
