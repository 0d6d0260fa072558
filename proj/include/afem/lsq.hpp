#ifndef AFEM_LSQ_HPP
#define AFEM_LSQ_HPP

#include "afem/components.hpp"
#include "afem/problem.hpp"

namespace afem {

// Discrete least-squares system: B_ij = G_j(u_{H,i}), normal equations
// (B B^T + alpha I) p = B (G* - G(u_{H,0})).
struct LsqSystem {
    Eigen::MatrixXd B;       // n_q x n_c
    Eigen::VectorXd g0;      // G(u_{H,0})
    Eigen::VectorXd rhs;     // B (G* - g0)
    Eigen::VectorXd p_star;  // empty until solve_parameter
    double residual_norm = 0.0;

    Eigen::VectorXd residual(const Eigen::VectorXd& p, const ProblemData& problem) const {
        return B.transpose() * p + g0 - problem.measurements;
    }
};

// Fills B via G_j(u_{H,i}) and verifies each entry against the dual route
// b(e_i, z_{H,j}) to 1e-9 relative; disagreement signals an assembly or
// solver bug and throws.
LsqSystem assemble_system(const FeSpace& space, const ComponentSolutions& comps,
                          const ProblemData& problem);

// Unconstrained: direct normal-equations solve. Box-constrained: projected
// gradient with step 1/lambda_max, iterated to a 1e-10 KKT fixed point.
Eigen::VectorXd solve_parameter(LsqSystem& sys, const ProblemData& problem);

// J_H(p) = 1/2 ||B^T p + g0 - G*||^2 + alpha/2 ||p||^2
double evaluate_J(const LsqSystem& sys, const ProblemData& problem, const Eigen::VectorXd& p);

}  // namespace afem

#endif
