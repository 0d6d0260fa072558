#include "afem/space.hpp"

#include <stdexcept>

namespace afem {

FeSpace::FeSpace(const Triangulation& mesh) : mesh_(&mesh) {
    EdgeTable table(mesh);
    dof_of_vertex_.assign(mesh.n_vertices(), -1);
    for (int v = 0; v < mesh.n_vertices(); ++v)
        if (!table.vertex_on_boundary[v]) dof_of_vertex_[v] = n_dofs_++;
}

DiscreteFunction DiscreteFunction::zero(const FeSpace& space) {
    return {&space, Eigen::VectorXd::Zero(space.n_dofs())};
}

double DiscreteFunction::vertex_value(int vertex) const {
    int d = space->dof(vertex);
    return d < 0 ? 0.0 : coeffs[d];
}

Vec2 DiscreteFunction::gradient(int t) const {
    const auto& mesh = space->mesh();
    auto grads = hat_gradients(mesh, t);
    Vec2 g = Vec2::Zero();
    for (int k = 0; k < 3; ++k) g += vertex_value(mesh.elements[t].v[k]) * grads.col(k);
    return g;
}

Eigen::Matrix<double, 2, 3> hat_gradients(const Triangulation& mesh, int t) {
    const auto& e = mesh.elements[t];
    const Vec2& p0 = mesh.vertices[e.v[0]];
    const Vec2& p1 = mesh.vertices[e.v[1]];
    const Vec2& p2 = mesh.vertices[e.v[2]];
    double inv2a = 0.5 / mesh.area(t);
    Eigen::Matrix<double, 2, 3> g;
    // grad lambda_k = perp of opposite edge / (2|T|)
    g.col(0) = inv2a * Vec2(p1[1] - p2[1], p2[0] - p1[0]);
    g.col(1) = inv2a * Vec2(p2[1] - p0[1], p0[0] - p2[0]);
    g.col(2) = inv2a * Vec2(p0[1] - p1[1], p1[0] - p0[0]);
    return g;
}

SparseMatrix assemble_stiffness(const FeSpace& space, const Coefficient& A) {
    const auto& mesh = space.mesh();
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(9 * mesh.n_elements());
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const auto& el = mesh.elements[t];
        auto grads = hat_gradients(mesh, t);
        const Eigen::Matrix2d& At = A.on_region(el.region);
        double area = mesh.area(t);
        for (int i = 0; i < 3; ++i) {
            int di = space.dof(el.v[i]);
            if (di < 0) continue;
            for (int j = 0; j < 3; ++j) {
                int dj = space.dof(el.v[j]);
                if (dj < 0) continue;
                triplets.emplace_back(di, dj, area * grads.col(j).dot(At * grads.col(i)));
            }
        }
    }
    SparseMatrix K(space.n_dofs(), space.n_dofs());
    K.setFromTriplets(triplets.begin(), triplets.end());
    return K;
}

Eigen::VectorXd assemble_load(const FeSpace& space, const DataPair& data) {
    const auto& mesh = space.mesh();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(space.n_dofs());
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const auto& el = mesh.elements[t];
        auto grads = hat_gradients(mesh, t);
        Vec2 fvec = data.vec.on_region(el.region);
        for (int k = 0; k < 3; ++k) {
            int d = space.dof(el.v[k]);
            if (d < 0) continue;
            double val = 0.0;
            if (!data.scalar.is_zero())
                val = integrate(mesh, t, [&](const Vec2& x, const double* bary) {
                    return data.scalar.eval(x, el.region) * bary[k];
                });
            rhs[d] += val - mesh.area(t) * fvec.dot(grads.col(k));
        }
    }
    return rhs;
}

double evaluate_functional(const DataPair& data, const DiscreteFunction& v) {
    const auto& mesh = v.space->mesh();
    double sum = 0.0;
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const auto& el = mesh.elements[t];
        if (!data.scalar.is_zero())
            sum += integrate(mesh, t, [&](const Vec2& x, const double* bary) {
                double vh = bary[0] * v.vertex_value(el.v[0]) + bary[1] * v.vertex_value(el.v[1]) +
                            bary[2] * v.vertex_value(el.v[2]);
                return data.scalar.eval(x, el.region) * vh;
            });
        Vec2 gvec = data.vec.on_region(el.region);
        if (!gvec.isZero(0.0)) sum -= mesh.area(t) * gvec.dot(v.gradient(t));
    }
    return sum;
}

double energy_norm_sq(const Coefficient& A, const DiscreteFunction& v) {
    const auto& mesh = v.space->mesh();
    double sum = 0.0;
    for (int t = 0; t < mesh.n_elements(); ++t) {
        Vec2 g = v.gradient(t);
        sum += mesh.area(t) * g.dot(A.on_region(mesh.elements[t].region) * g);
    }
    return sum;
}

SpdSolver::SpdSolver(const SparseMatrix& matrix) : matrix_(matrix) {
    factorization_.compute(matrix_);
    if (factorization_.info() != Eigen::Success)
        throw std::runtime_error("SPD factorization failed");
}

Eigen::VectorXd SpdSolver::solve(const Eigen::VectorXd& rhs) const {
    double rhs_norm = rhs.norm();
    if (rhs_norm == 0.0) return Eigen::VectorXd::Zero(rhs.size());
    Eigen::VectorXd x = factorization_.solve(rhs);
    if (factorization_.info() != Eigen::Success)
        throw std::runtime_error("SPD solve failed");
    double rel_res = (matrix_ * x - rhs).norm() / rhs_norm;
    if (rel_res > 1e-10)
        throw std::runtime_error("SPD solve residual " + std::to_string(rel_res) +
                                 " exceeds tolerance");
    return x;
}

Eigen::VectorXd solve_spd(const SparseMatrix& matrix, const Eigen::VectorXd& rhs) {
    return SpdSolver(matrix).solve(rhs);
}

DiscreteFunction prolongate(const DiscreteFunction& coarse, const FeSpace& fine) {
    const auto& mesh = fine.mesh();
    int n_coarse = coarse.space->mesh().n_vertices();
    // vertex values on the fine mesh; parents precede children, so one pass
    std::vector<double> values(mesh.n_vertices());
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        if (v < n_coarse) {
            values[v] = coarse.vertex_value(v);
        } else {
            auto [a, b] = mesh.vertex_parents[v];
            values[v] = 0.5 * (values[a] + values[b]);
        }
    }
    DiscreteFunction result = DiscreteFunction::zero(fine);
    for (int v = 0; v < mesh.n_vertices(); ++v) {
        int d = fine.dof(v);
        if (d >= 0) result.coeffs[d] = values[v];
    }
    return result;
}

}  // namespace afem
