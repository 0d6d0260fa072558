#include "afem/estimator.hpp"

#include <cmath>

namespace afem {

namespace {

Eigen::VectorXd indicators_with_table(const EdgeTable& table, const Coefficient& A,
                                      const WeightedData& data, const DiscreteFunction& v) {
    const auto& mesh = v.space->mesh();
    int n = mesh.n_elements();
    Eigen::VectorXd ind = Eigen::VectorXd::Zero(n);

    // elementwise-constant flux fvec + A grad v and mesh size h_T = |T|^{1/2}
    std::vector<Vec2> flux(n);
    Eigen::VectorXd h(n);
    for (int t = 0; t < n; ++t) {
        const auto& el = mesh.elements[t];
        Vec2 fvec = Vec2::Zero();
        for (const auto& [w, d] : data) fvec += w * d.vec.on_region(el.region);
        flux[t] = fvec + A.on_region(el.region) * v.gradient(t);
        h[t] = std::sqrt(mesh.area(t));

        // div(flux) = 0 elementwise, so the volume term is h_T^2 ||f||_T^2
        bool any_scalar = false;
        for (const auto& [w, d] : data) any_scalar |= !d.scalar.is_zero();
        if (any_scalar) {
            double f_sq = integrate(mesh, t, [&](const Vec2& x, const double*) {
                double f = 0.0;
                for (const auto& [w, d] : data) f += w * d.scalar.eval(x, el.region);
                return f * f;
            });
            ind[t] += h[t] * h[t] * f_sq;
        }
    }

    for (const auto& edge : table.edges) {
        if (edge.right < 0) continue;
        Vec2 tangent = mesh.vertices[edge.b] - mesh.vertices[edge.a];
        double len = tangent.norm();
        Vec2 normal(tangent[1] / len, -tangent[0] / len);
        double jump = (flux[edge.left] - flux[edge.right]).dot(normal);
        double jump_sq = len * jump * jump;
        ind[edge.left] += h[edge.left] * jump_sq;
        ind[edge.right] += h[edge.right] * jump_sq;
    }
    return ind;
}

}  // namespace

Eigen::VectorXd element_indicators(const Coefficient& A, const WeightedData& data,
                                   const DiscreteFunction& v) {
    EdgeTable table(v.space->mesh());
    return indicators_with_table(table, A, data, v);
}

double element_indicator(const Coefficient& A, const DataPair& data, const DiscreteFunction& v,
                         int t) {
    return element_indicators(A, {{1.0, data}}, v)[t];
}

IndicatorField compute_field(const Coefficient& A, const ProblemData& problem,
                             const ComponentSolutions& comps) {
    const auto& mesh = comps.state[0].space->mesh();
    EdgeTable table(mesh);
    int n = mesh.n_elements();

    IndicatorField field;
    field.eta_sq.resize(problem.n_q + 1, n);
    field.zeta_sq.resize(problem.n_c, n);
    for (int i = 0; i <= problem.n_q; ++i)
        field.eta_sq.row(i) =
            indicators_with_table(table, A, {{1.0, problem.state_data[i]}}, comps.state[i])
                .transpose();
    for (int j = 0; j < problem.n_c; ++j)
        field.zeta_sq.row(j) =
            indicators_with_table(table, A, {{1.0, problem.measure_data[j]}}, comps.costate[j])
                .transpose();

    field.eta_total_sq = field.eta_sq.sum();
    field.zeta_total_sq = field.zeta_sq.sum();
    Eigen::VectorXd eta_row = field.eta_sq.colwise().sum().transpose();
    Eigen::VectorXd zeta_row = field.zeta_sq.colwise().sum().transpose();
    field.rho_sq = field.eta_total_sq * zeta_row + field.zeta_total_sq * eta_row;
    return field;
}

Eigen::VectorXd classical_indicator(const Coefficient& A, const ProblemData& problem,
                                    const ComponentSolutions& comps, const Eigen::VectorXd& p) {
    DiscreteFunction u = combine_state(comps, p);

    Eigen::VectorXd residual(problem.n_c);
    for (int j = 0; j < problem.n_c; ++j)
        residual[j] = evaluate_functional(problem.measure_data[j], u) - problem.measurements[j];
    DiscreteFunction z = combine_costate(comps, residual);

    WeightedData state_data{{1.0, problem.state_data[0]}};
    for (int i = 0; i < problem.n_q; ++i) state_data.emplace_back(p[i], problem.state_data[i + 1]);
    WeightedData measure_data;
    for (int j = 0; j < problem.n_c; ++j)
        measure_data.emplace_back(residual[j], problem.measure_data[j]);

    EdgeTable table(u.space->mesh());
    return indicators_with_table(table, A, state_data, u) +
           indicators_with_table(table, A, measure_data, z);
}

}  // namespace afem
