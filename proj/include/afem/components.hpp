#ifndef AFEM_COMPONENTS_HPP
#define AFEM_COMPONENTS_HPP

#include <vector>

#include "afem/problem.hpp"
#include "afem/space.hpp"

namespace afem {

// State components u_{H,0..n_q} and co-state components z_{H,1..n_c},
// all on the same space. The bilinear form is symmetric, so both sets
// share one stiffness factorization.
struct ComponentSolutions {
    std::vector<DiscreteFunction> state;    // n_q + 1
    std::vector<DiscreteFunction> costate;  // n_c
};

ComponentSolutions solve_all(const FeSpace& space, const ProblemData& problem);

// u_H(p) = u_{H,0} + sum_i p_i u_{H,i}
DiscreteFunction combine_state(const ComponentSolutions& comps, const Eigen::VectorXd& p);

// z_H(p) = sum_j r_j z_{H,j} for residual weights r
DiscreteFunction combine_costate(const ComponentSolutions& comps, const Eigen::VectorXd& residual);

}  // namespace afem

#endif
