#include "afem/lsq.hpp"

#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace afem {

LsqSystem assemble_system(const FeSpace& space, const ComponentSolutions& comps,
                          const ProblemData& problem) {
    LsqSystem sys;
    sys.B.resize(problem.n_q, problem.n_c);
    sys.g0.resize(problem.n_c);

    std::vector<Eigen::VectorXd> state_loads(problem.n_q);
    for (int i = 0; i < problem.n_q; ++i)
        state_loads[i] = assemble_load(space, problem.state_data[i + 1]);

    for (int j = 0; j < problem.n_c; ++j) {
        sys.g0[j] = evaluate_functional(problem.measure_data[j], comps.state[0]);
        for (int i = 0; i < problem.n_q; ++i) {
            double primal = evaluate_functional(problem.measure_data[j], comps.state[i + 1]);
            // dual route: B_ij = b(e_i, z_{H,j})
            double dual = state_loads[i].dot(comps.costate[j].coeffs);
            // relative gate with an absolute floor for entries that vanish
            // by symmetry
            double scale = std::max(std::abs(primal), std::abs(dual));
            if (std::abs(primal - dual) > std::max(1e-9 * scale, 1e-12))
                throw std::runtime_error("B entry dual-computation mismatch at (" +
                                         std::to_string(i) + "," + std::to_string(j) + ")");
            sys.B(i, j) = primal;
        }
    }
    sys.rhs = sys.B * (problem.measurements - sys.g0);
    return sys;
}

Eigen::VectorXd solve_parameter(LsqSystem& sys, const ProblemData& problem) {
    Eigen::MatrixXd H =
        sys.B * sys.B.transpose() +
        problem.alpha * Eigen::MatrixXd::Identity(problem.n_q, problem.n_q);

    Eigen::VectorXd p;
    if (!problem.constraint) {
        if (sys.rhs.norm() == 0.0) {
            p = Eigen::VectorXd::Zero(problem.n_q);
            sys.p_star = p;
            sys.residual_norm = sys.residual(p, problem).norm();
            return p;
        }
        // a consistent right-hand side hides rank deficiency from a
        // residual check, so gate on the spectrum directly
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        if (es.eigenvalues().minCoeff() <= 1e-12 * es.eigenvalues().maxCoeff())
            throw std::runtime_error("least-squares system is rank deficient (alpha = 0?)");
        Eigen::LDLT<Eigen::MatrixXd> ldlt(H);
        p = ldlt.solve(sys.rhs);
        double rel = (H * p - sys.rhs).norm() / sys.rhs.norm();
        if (rel > 1e-10)
            throw std::runtime_error("normal-equations solve failed the residual contract");
    } else {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
        double lambda_max = es.eigenvalues().maxCoeff();
        if (lambda_max <= 0.0) throw std::runtime_error("degenerate least-squares Hessian");
        double step = 1.0 / lambda_max;
        auto project = [&](Eigen::VectorXd q) {
            return q.cwiseMax(problem.constraint->lo).cwiseMin(problem.constraint->hi);
        };
        p = project(Eigen::VectorXd::Zero(problem.n_q));
        for (int it = 0; it < 100000; ++it) {
            Eigen::VectorXd next = project(p - step * (H * p - sys.rhs));
            if ((next - p).norm() <= 1e-10 * std::max(1.0, p.norm())) {
                p = next;
                break;
            }
            p = next;
        }
    }

    sys.p_star = p;
    sys.residual_norm = sys.residual(p, problem).norm();
    return p;
}

double evaluate_J(const LsqSystem& sys, const ProblemData& problem, const Eigen::VectorXd& p) {
    return 0.5 * sys.residual(p, problem).squaredNorm() + 0.5 * problem.alpha * p.squaredNorm();
}

}  // namespace afem
