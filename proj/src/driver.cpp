#include "afem/driver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace afem {

std::vector<int> doerfler_mark(const Eigen::VectorXd& indicators_sq, double theta) {
    if (theta <= 0.0 || theta > 1.0) throw std::invalid_argument("theta must be in (0,1]");
    double total = indicators_sq.sum();
    if (total <= 0.0) return {};

    std::vector<int> order(indicators_sq.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (indicators_sq[a] != indicators_sq[b]) return indicators_sq[a] > indicators_sq[b];
        return a < b;
    });

    std::vector<int> marked;
    double sum = 0.0;
    for (int t : order) {
        if (sum >= theta * total) break;
        marked.push_back(t);
        sum += indicators_sq[t];
    }
    return marked;
}

Eigen::VectorXd perturb_measurements(const Eigen::VectorXd& exact, double sigma,
                                     std::uint64_t seed) {
    if (sigma < 0.0) throw std::invalid_argument("sigma must be >= 0");
    if (sigma == 0.0) return exact;
    std::mt19937_64 rng(seed);
    auto uniform = [&] {
        // (0,1], avoids log(0)
        return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    };
    Eigen::VectorXd out = exact;
    for (Eigen::Index k = 0; k < out.size(); ++k) {
        double u1 = uniform(), u2 = uniform();
        out[k] += sigma * std::sqrt(-2.0 * std::log(u1)) *
                  std::cos(2.0 * std::numbers::pi * u2);
    }
    return out;
}

Eigen::VectorXd synthesize_measurements(const ProblemData& problem, long min_elements) {
    if (!problem.exact_p) throw std::invalid_argument("no exact parameter to synthesize from");
    DomainConfig domain{4, problem.regions};
    Triangulation mesh = build_initial(domain);
    while (mesh.n_elements() < min_elements) {
        std::vector<int> all(mesh.n_elements());
        std::iota(all.begin(), all.end(), 0);
        mesh = refine(mesh, all);
    }
    FeSpace space(mesh);
    ComponentSolutions comps = solve_all(space, problem);
    DiscreteFunction u = combine_state(comps, *problem.exact_p);
    Eigen::VectorXd g(problem.n_c);
    for (int j = 0; j < problem.n_c; ++j)
        g[j] = evaluate_functional(problem.measure_data[j], u);
    return g;
}

std::vector<AdaptiveRecord> adaptive_loop(const RunConfig& config, const ProblemData& problem_in) {
    using clock = std::chrono::steady_clock;

    ProblemData problem = problem_in;
    if (problem.measurements.size() == 0)
        problem.measurements = synthesize_measurements(problem);
    problem.measurements = perturb_measurements(problem.measurements, config.sigma, config.seed);

    Triangulation mesh = build_initial({config.initial_cells, problem.regions});
    if (config.max_elements <= mesh.n_elements())
        throw std::invalid_argument("max_elements must exceed the initial element count");

    std::vector<AdaptiveRecord> records;
    for (int level = 0;; ++level) {
        auto t0 = clock::now();
        AdaptiveRecord rec;
        rec.level = level;
        rec.n_elements = mesh.n_elements();

        FeSpace space(mesh);
        ComponentSolutions comps;
        try {
            comps = solve_all(space, problem);
        } catch (const std::exception&) {
            // flush what we have; the partial history is still useful
            if (!records.empty()) return records;
            throw;
        }
        IndicatorField field = compute_field(problem.A, problem, comps);
        rec.eta_total = std::sqrt(field.eta_total_sq);
        rec.zeta_total = std::sqrt(field.zeta_total_sq);
        rec.rho = std::sqrt(2.0 * field.eta_total_sq * field.zeta_total_sq);

        bool classical = config.marking == RunConfig::Marking::Classical;
        LsqSystem sys = assemble_system(space, comps, problem);
        Eigen::VectorXd marking_ind = field.rho_sq;
        if (classical || config.solve_p_every_level) {
            solve_parameter(sys, problem);
            rec.p_estimate = sys.p_star;
            if (problem.exact_p) rec.p_error = (sys.p_star - *problem.exact_p).norm();
        }
        if (classical) {
            marking_ind = classical_indicator(problem.A, problem, comps, sys.p_star);
            rec.classical_rho = std::sqrt(marking_ind.sum());
        }

        std::vector<int> marked = doerfler_mark(marking_ind, config.theta);
        rec.marked_count = static_cast<long>(marked.size());
        rec.wall_time_ms =
            std::chrono::duration<double, std::milli>(clock::now() - t0).count();

        bool stop = marked.empty() || rec.rho <= config.rho_tol ||
                    mesh.n_elements() > config.max_elements;
        if (stop && rec.p_estimate.size() == 0) {
            // deferred parameter solve on the final mesh
            solve_parameter(sys, problem);
            rec.p_estimate = sys.p_star;
            if (problem.exact_p) rec.p_error = (sys.p_star - *problem.exact_p).norm();
        }
        records.push_back(std::move(rec));
        if (stop) break;
        mesh = refine(mesh, marked);
    }
    return records;
}

double fit_rate(const std::vector<double>& n_elements, const std::vector<double>& quantity,
                double window) {
    if (n_elements.size() != quantity.size()) throw std::invalid_argument("size mismatch");
    auto count = static_cast<std::size_t>(std::ceil(window * n_elements.size()));
    if (count < 4) throw std::invalid_argument("need at least 4 records in the fit window");
    std::size_t start = n_elements.size() - count;

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = start; k < n_elements.size(); ++k) {
        double x = std::log(n_elements[k]);
        double y = std::log(quantity[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    double m = static_cast<double>(count);
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

void write_csv(std::ostream& out, const std::vector<AdaptiveRecord>& records, int n_q) {
    out << "level,n_elements,eta_total,zeta_total,rho,classical_rho";
    for (int i = 1; i <= n_q; ++i) out << ",p_" << i;
    out << ",p_error,marked_count,wall_time_ms\n";
    out.precision(17);
    for (const auto& r : records) {
        out << r.level << ',' << r.n_elements << ',' << r.eta_total << ',' << r.zeta_total << ','
            << r.rho << ',';
        if (r.classical_rho) out << *r.classical_rho;
        for (int i = 0; i < n_q; ++i) {
            out << ',';
            if (r.p_estimate.size() > 0) out << r.p_estimate[i];
        }
        out << ',';
        if (r.p_error) out << *r.p_error;
        out << ',' << r.marked_count << ',' << r.wall_time_ms << '\n';
    }
}

std::vector<double> CsvTable::column(const std::string& name) const {
    auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw std::invalid_argument("no column '" + name + "'");
    std::size_t idx = it - columns.begin();
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& row : rows) out.push_back(row[idx]);
    return out;
}

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV");
    std::istringstream header(line);
    std::string field;
    while (std::getline(header, field, ',')) table.columns.push_back(field);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::vector<double> values;
        while (std::getline(row, field, ','))
            values.push_back(field.empty() ? std::nan("") : std::stod(field));
        values.resize(table.columns.size(), std::nan(""));
        table.rows.push_back(std::move(values));
    }
    return table;
}

}  // namespace afem
