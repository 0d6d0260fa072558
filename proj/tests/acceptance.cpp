// Acceptance gate: one pass/fail line per criterion, exit code = number of
// failed criteria. Runs the full experiment battery, so expect a few minutes.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "afem/components.hpp"
#include "afem/driver.hpp"
#include "afem/estimator.hpp"
#include "afem/lsq.hpp"
#include "afem/mesh.hpp"
#include "afem/problem.hpp"
#include "afem/space.hpp"

using namespace afem;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s: criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    if (!ok) ++failures;
}

void sub(bool ok, const std::string& detail) {
    std::printf("    %s  %s\n", ok ? "ok  " : "FAIL", detail.c_str());
}

Triangulation refine_all(const Triangulation& mesh) {
    std::vector<int> all(mesh.n_elements());
    std::iota(all.begin(), all.end(), 0);
    return refine(mesh, all);
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

// ---- criterion 1: exact-value oracles on a uniform mesh ----

void criterion1() {
    ProblemData prob = multi_parameter_problem();
    Triangulation mesh = build_initial({4, prob.regions});
    std::vector<double> e1, e2;
    FeSpace space(mesh);
    ComponentSolutions comps = solve_all(space, prob);
    while (true) {
        e1.push_back(energy_norm_sq(prob.A, comps.state[1]));
        e2.push_back(energy_norm_sq(prob.A, comps.state[2]));
        if (mesh.n_elements() >= 30000) break;
        mesh = refine_all(mesh);
        space = FeSpace(mesh);
        comps = solve_all(space, prob);
    }

    bool monotone = true;
    for (std::size_t k = 1; k < e1.size(); ++k)
        monotone = monotone && e1[k] > e1[k - 1] && e2[k] > e2[k - 1];

    const double target1 = 2.0 / 45.0;
    const double target2 = 5.0 * std::numbers::pi * std::numbers::pi / 4.0;
    bool ok1 = e1.back() >= target1 - 1e-4 && e1.back() <= target1;
    bool ok2 = e2.back() >= target2 - 1e-2 && e2.back() <= target2;

    // G1(u_H(1)) for the single-parameter problem: u_H(1) = u_{H,1} and the
    // functional is the shared T1 measurement
    double g1 = evaluate_functional(prob.measure_data[1], comps.state[1]);
    bool ok3 = std::abs(g1 - 11.0 / 960.0) <= 2e-4;

    LsqSystem sys = assemble_system(space, comps, prob);
    Eigen::VectorXd p(2);
    p << 2.0, 0.5;
    Eigen::VectorXd predicted = sys.B.transpose() * p + sys.g0;
    Eigen::VectorXd gbar(3);
    const double pi = std::numbers::pi;
    gbar << (11.0 * pi + 160.0) / (480.0 * pi), (11.0 * pi - 160.0) / (480.0 * pi),
        121.0 / 4608.0;
    bool ok4 = ((predicted - gbar).array().abs() <= 5e-4).all();

    sub(ok1, "|||u_1|||^2 = " + fmt(e1.back()) + " in [2/45 - 1e-4, 2/45] = [" +
                 fmt(target1 - 1e-4) + ", " + fmt(target1) + "]");
    sub(ok2, "|||u_2|||^2 = " + fmt(e2.back()) + " in [5pi^2/4 - 1e-2, 5pi^2/4]");
    sub(monotone, "both energies increase monotonically from below");
    sub(ok3, "G_1(u_H(1)) = " + fmt(g1) + " vs 11/960 +- 2e-4");
    sub(ok4, "B^T (2, 1/2) componentwise within 5e-4 of the reference measurements");
    report(1, ok1 && ok2 && monotone && ok3 && ok4,
           "exact-value oracles on a uniform mesh with " + std::to_string(mesh.n_elements()) +
               " elements");
}

// ---- criteria 2, 3, 6: single-parameter runs ----

std::vector<AdaptiveRecord> run(const ProblemData& prob, RunConfig config) {
    return adaptive_loop(config, prob);
}

struct Pending {
    bool ok = false;
    std::string detail;
};

void criteria_2_3(Pending& six) {
    ProblemData prob = single_parameter_problem();

    RunConfig weighted;
    weighted.max_elements = 50000;
    auto wrec = run(prob, weighted);

    RunConfig classical = weighted;
    classical.marking = RunConfig::Marking::Classical;
    auto crec = run(prob, classical);

    auto column = [](const std::vector<AdaptiveRecord>& recs, auto&& get) {
        std::vector<double> out;
        for (const auto& r : recs) out.push_back(get(r));
        return out;
    };
    auto nelem = [&](const std::vector<AdaptiveRecord>& recs) {
        return column(recs, [](const AdaptiveRecord& r) { return double(r.n_elements); });
    };

    double slope_rho = fit_rate(nelem(wrec), column(wrec, [](const AdaptiveRecord& r) {
                                    return r.rho;
                                }));
    double slope_perr = fit_rate(nelem(wrec), column(wrec, [](const AdaptiveRecord& r) {
                                     return *r.p_error;
                                 }));
    double slope_crho = fit_rate(nelem(crec), column(crec, [](const AdaptiveRecord& r) {
                                     return *r.classical_rho;
                                 }));
    double slope_cperr = fit_rate(nelem(crec), column(crec, [](const AdaptiveRecord& r) {
                                      return *r.p_error;
                                  }));
    bool ok2 = slope_rho >= -1.15 && slope_rho <= -0.85 && slope_perr >= -1.25 &&
               slope_perr <= -0.75 && slope_crho >= -0.65 && slope_crho <= -0.35 &&
               slope_cperr >= -1.25 && slope_cperr <= -0.75;
    report(2, ok2,
           "replication slopes: rho " + fmt(slope_rho) + ", p-error " + fmt(slope_perr) +
               ", comparison estimator " + fmt(slope_crho) + ", its p-error " + fmt(slope_cperr));

    RunConfig deep = weighted;
    deep.max_elements = 500000;
    auto drec = run(prob, deep);
    double final_err = *drec.back().p_error;
    report(3, final_err <= 1e-5,
           "parameter convergence: |1 - p| = " + fmt(final_err) + " <= 1e-5 at " +
               std::to_string(drec.back().n_elements) + " elements");

    // ratio boundedness on the weighted run
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& r : wrec) {
        if (r.level < 3) continue;
        double ratio = *r.p_error / (r.eta_total * r.zeta_total);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    six.ok = hi / lo <= 50.0;
    six.detail = "|p* - p_l| / (eta zeta) ratio spread over levels >= 3: max/min = " +
                 fmt(hi / lo) + " <= 50";
}

// ---- criterion 4: noise study ----

void criterion4() {
    ProblemData prob = multi_parameter_problem();
    RunConfig config;
    config.max_elements = 100000;
    config.seed = 42;

    const double sigmas[3] = {1e-3, 1e-5, 1e-7};
    std::vector<std::vector<AdaptiveRecord>> noisy;
    for (double s : sigmas) {
        config.sigma = s;
        noisy.push_back(run(prob, config));
    }
    config.sigma = 0.0;
    auto clean = run(prob, config);

    double e0 = *clean.back().p_error;
    double err[3];
    for (int k = 0; k < 3; ++k) err[k] = *noisy[k].back().p_error;
    bool ordered = err[0] > err[1] && err[1] > err[2];

    // the noise-induced plateau: offset of the final parameter from the
    // unperturbed run on the identical final mesh
    bool plateaus = true;
    for (int k = 0; k < 3; ++k) {
        double offset = (noisy[k].back().p_estimate - clean.back().p_estimate).norm();
        plateaus = plateaus && offset >= sigmas[k] / 100.0 && offset <= sigmas[k] * 100.0;
        sub(offset >= sigmas[k] / 100.0 && offset <= sigmas[k] * 100.0,
            "sigma " + fmt(sigmas[k]) + ": error " + fmt(err[k]) + ", plateau offset " +
                fmt(offset) + " within factor 100 of sigma");
    }

    bool identical = true;
    for (const auto& recs : noisy) {
        identical = identical && recs.size() == clean.size();
        if (!identical) break;
        for (std::size_t l = 0; l < recs.size(); ++l)
            identical = identical &&
                        std::abs(recs[l].rho - clean[l].rho) <= 1e-12 * clean[l].rho;
    }
    sub(ordered, "final errors strictly ordered across sigma");
    sub(e0 <= 1e-4, "sigma 0 error " + fmt(e0) + " <= 1e-4");
    sub(identical, "rho sequences of all four runs identical to 1e-12 relative");
    report(4, ordered && plateaus && e0 <= 1e-4 && identical,
           "noise study at seed 42, budget 100000 elements");
}

// ---- criterion 5: property suite ----

void criterion5() {
    bool all_ok = true;

    {  // estimator identity on 20 random refinement states
        ProblemData prob = multi_parameter_problem();
        Triangulation mesh = build_initial({4, prob.regions});
        std::mt19937 rng(2026);
        bool ok = true;
        for (int state = 0; state < 20; ++state) {
            FeSpace space(mesh);
            ComponentSolutions comps = solve_all(space, prob);
            IndicatorField field = compute_field(prob.A, prob, comps);
            double expect = 2.0 * field.eta_total_sq * field.zeta_total_sq;
            ok = ok && std::abs(field.rho_total_sq() - expect) <= 1e-12 * expect;
            std::vector<int> marked;
            for (int t = 0; t < mesh.n_elements(); ++t)
                if (rng() % 5 == 0) marked.push_back(t);
            if (marked.empty()) marked.push_back(0);
            mesh = refine(mesh, marked);
        }
        sub(ok, "sum rho^2 = 2 (sum eta^2)(sum zeta^2) to 1e-12 on 20 random states");
        all_ok = all_ok && ok;
    }

    {  // dual-computation agreement over a full multi-measurement run: the
       // assembly throws on any >1e-9 disagreement, so completing is the check
        ProblemData prob = multi_parameter_problem();
        RunConfig config;
        config.max_elements = 20000;
        bool ok = true;
        std::size_t levels = 0;
        try {
            levels = adaptive_loop(config, prob).size();
        } catch (const std::exception&) {
            ok = false;
        }
        sub(ok, "B dual-computation agreement to 1e-9 on all " + std::to_string(levels) +
                    " levels of a multi-measurement run");
        all_ok = all_ok && ok;
    }

    {  // Galerkin residual per solve
        ProblemData prob = multi_parameter_problem();
        Triangulation mesh = build_initial({4, prob.regions});
        for (int l = 0; l < 4; ++l) mesh = refine_all(mesh);
        FeSpace space(mesh);
        ComponentSolutions comps = solve_all(space, prob);
        SparseMatrix K = assemble_stiffness(space, prob.A);
        bool ok = true;
        auto check_one = [&](const DiscreteFunction& v, const DataPair& data) {
            Eigen::VectorXd b = assemble_load(space, data);
            ok = ok && (K * v.coeffs - b).norm() <= 1e-9 * std::max(b.norm(), 1.0);
        };
        for (int i = 0; i <= prob.n_q; ++i) check_one(comps.state[i], prob.state_data[i]);
        for (int j = 0; j < prob.n_c; ++j) check_one(comps.costate[j], prob.measure_data[j]);
        sub(ok, "Galerkin residual <= 1e-9 for every component solve");
        all_ok = all_ok && ok;
    }

    {  // conformity and the son estimate through a random refinement history
        Triangulation mesh = build_initial({4, single_parameter_problem().regions});
        std::mt19937 rng(5);
        bool ok = true;
        for (int step = 0; step < 8; ++step) {
            std::vector<int> marked;
            for (int t = 0; t < mesh.n_elements(); ++t)
                if (rng() % 4 == 0) marked.push_back(t);
            long before = mesh.n_elements();
            try {
                mesh = refine(mesh, marked);  // asserts the son estimate itself
            } catch (const std::exception&) {
                ok = false;
                break;
            }
            ok = ok && is_conforming(mesh) && mesh.n_elements() >= before;
        }
        sub(ok, "conformity and son estimate after every refine");
        all_ok = all_ok && ok;
    }

    {  // Doerfler minimality vs exhaustive subset search
        std::mt19937 rng(77);
        std::uniform_real_distribution<double> unif(0.0, 1.0);
        bool ok = true;
        for (int trial = 0; trial < 30; ++trial) {
            int n = 4 + static_cast<int>(rng() % 12);  // <= 15 elements
            Eigen::VectorXd ind(n);
            for (int t = 0; t < n; ++t) ind[t] = unif(rng);
            double theta = 0.1 + 0.85 * unif(rng);
            auto marked = doerfler_mark(ind, theta);
            double sum = 0.0;
            for (int t : marked) sum += ind[t];
            ok = ok && sum >= theta * ind.sum() - 1e-14;
            int best = n + 1;
            for (unsigned mask = 0; mask < (1u << n); ++mask) {
                double s = 0.0;
                int size = 0;
                for (int t = 0; t < n; ++t)
                    if (mask & (1u << t)) s += ind[t], ++size;
                if (s >= theta * ind.sum()) best = std::min(best, size);
            }
            ok = ok && static_cast<int>(marked.size()) == best;
        }
        sub(ok, "Doerfler sets match brute-force minimal cardinality on 30 synthetic sets");
        all_ok = all_ok && ok;
    }

    {  // estimator reduction under uniform refinement
        ProblemData prob = single_parameter_problem();
        Triangulation coarse = build_initial({4, prob.regions});
        coarse = refine_all(refine_all(coarse));
        FeSpace coarse_space(coarse);
        ComponentSolutions comps = solve_all(coarse_space, prob);
        Triangulation fine = refine_all(coarse);
        FeSpace fine_space(fine);
        const double bound = std::pow(2.0, -0.25) + 1e-12;
        auto ratio = [&](const WeightedData& data, const DiscreteFunction& vH) {
            DiscreteFunction lifted = prolongate(vH, fine_space);
            return element_indicators(prob.A, data, lifted).sum() /
                   element_indicators(prob.A, data, vH).sum();
        };
        double r_state = ratio({{1.0, prob.state_data[1]}}, comps.state[1]);
        double r_costate = ratio({{1.0, prob.measure_data[0]}}, comps.costate[0]);
        bool ok = r_state <= bound && r_costate <= bound;
        sub(ok, "squared-indicator reduction factors " + fmt(r_state) + ", " + fmt(r_costate) +
                    " <= 2^(-1/4) + 1e-12");
        all_ok = all_ok && ok;
    }

    {  // Pythagoras identity between nested Galerkin solutions
        ProblemData prob = single_parameter_problem();
        Triangulation coarse = build_initial({4, prob.regions});
        for (int l = 0; l < 3; ++l) coarse = refine_all(coarse);
        FeSpace coarse_space(coarse);
        ComponentSolutions cc = solve_all(coarse_space, prob);
        Triangulation fine = refine_all(coarse);
        FeSpace fine_space(fine);
        ComponentSolutions fc = solve_all(fine_space, prob);
        DiscreteFunction lifted = prolongate(cc.state[1], fine_space);
        DiscreteFunction diff;
        diff.space = &fine_space;
        diff.coeffs = fc.state[1].coeffs - lifted.coeffs;
        double lhs = energy_norm_sq(prob.A, diff);
        double rhs = energy_norm_sq(prob.A, fc.state[1]) - energy_norm_sq(prob.A, cc.state[1]);
        bool ok = std::abs(lhs - rhs) <= 1e-8;
        sub(ok, "|||u_h - u_H|||^2 - (|||u_h|||^2 - |||u_H|||^2) = " + fmt(lhs - rhs) +
                    ", within 1e-8");
        all_ok = all_ok && ok;
    }

    report(5, all_ok, "property suite");
}

}  // namespace

int main() {
    Pending six;
    criterion1();
    criteria_2_3(six);
    criterion4();
    criterion5();
    report(6, six.ok, six.detail);
    std::printf("%d criterion(s) failed\n", failures);
    return failures;
}
