#ifndef AFEM_ESTIMATOR_HPP
#define AFEM_ESTIMATOR_HPP

#include <utility>
#include <vector>

#include "afem/components.hpp"
#include "afem/problem.hpp"
#include "afem/space.hpp"

namespace afem {

// Linear combination sum_k w_k * data_k, used for the classical estimator
// where the residual data is a parameter-weighted combination.
using WeightedData = std::vector<std::pair<double, DataPair>>;

// Squared residual indicators of all elements for one data/function pair:
//   eta(T)^2 = h_T^2 ||f + div(fvec + A grad v)||_{L2(T)}^2
//            + h_T ||[[(fvec + A grad v) . n]]||_{L2(dT cap Omega)}^2
// For P1 with elementwise-constant A and fvec the divergence vanishes.
// Every interior edge contributes to both adjacent elements.
Eigen::VectorXd element_indicators(const Coefficient& A, const WeightedData& data,
                                   const DiscreteFunction& v);

// Single-element convenience wrapper.
double element_indicator(const Coefficient& A, const DataPair& data, const DiscreteFunction& v,
                         int t);

// Per-element squared indicators of all components plus the weighted
// product indicator rho(T)^2.
struct IndicatorField {
    Eigen::MatrixXd eta_sq;   // (n_q+1) x #T
    Eigen::MatrixXd zeta_sq;  // n_c x #T
    double eta_total_sq = 0.0;
    double zeta_total_sq = 0.0;
    Eigen::VectorXd rho_sq;  // #T

    double rho_total_sq() const { return rho_sq.sum(); }
};

IndicatorField compute_field(const Coefficient& A, const ProblemData& problem,
                             const ComponentSolutions& comps);

// Classical comparison indicator: eta(T, u_H(p))^2 + zeta(T, z_H(p))^2 with
// the p-weighted state data and the residual-weighted measurement data.
Eigen::VectorXd classical_indicator(const Coefficient& A, const ProblemData& problem,
                                    const ComponentSolutions& comps, const Eigen::VectorXd& p);

}  // namespace afem

#endif
