#include "afem/components.hpp"

#include <stdexcept>

namespace afem {

ComponentSolutions solve_all(const FeSpace& space, const ProblemData& problem) {
    SpdSolver solver(assemble_stiffness(space, problem.A));
    ComponentSolutions comps;
    auto solve_one = [&](const DataPair& data) -> DiscreteFunction {
        if (data.is_zero()) return DiscreteFunction::zero(space);
        return {&space, solver.solve(assemble_load(space, data))};
    };
    comps.state.reserve(problem.n_q + 1);
    for (const DataPair& data : problem.state_data) comps.state.push_back(solve_one(data));
    comps.costate.reserve(problem.n_c);
    for (const DataPair& data : problem.measure_data) comps.costate.push_back(solve_one(data));
    return comps;
}

DiscreteFunction combine_state(const ComponentSolutions& comps, const Eigen::VectorXd& p) {
    if (p.size() + 1 != static_cast<Eigen::Index>(comps.state.size()))
        throw std::invalid_argument("parameter dimension mismatch");
    DiscreteFunction u = comps.state[0];
    for (Eigen::Index i = 0; i < p.size(); ++i) u.coeffs += p[i] * comps.state[i + 1].coeffs;
    return u;
}

DiscreteFunction combine_costate(const ComponentSolutions& comps, const Eigen::VectorXd& residual) {
    if (residual.size() != static_cast<Eigen::Index>(comps.costate.size()))
        throw std::invalid_argument("residual dimension mismatch");
    DiscreteFunction z = DiscreteFunction::zero(*comps.costate[0].space);
    for (Eigen::Index j = 0; j < residual.size(); ++j)
        z.coeffs += residual[j] * comps.costate[j].coeffs;
    return z;
}

}  // namespace afem
