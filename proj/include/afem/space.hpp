#ifndef AFEM_SPACE_HPP
#define AFEM_SPACE_HPP

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "afem/mesh.hpp"
#include "afem/problem.hpp"

namespace afem {

using SparseMatrix = Eigen::SparseMatrix<double>;

// P1 space on a triangulation with homogeneous Dirichlet conditions:
// DOFs are the interior vertices.
class FeSpace {
public:
    explicit FeSpace(const Triangulation& mesh);

    const Triangulation& mesh() const { return *mesh_; }
    int n_dofs() const { return n_dofs_; }
    // DOF of a vertex, -1 on the boundary
    int dof(int vertex) const { return dof_of_vertex_[vertex]; }

private:
    const Triangulation* mesh_;
    std::vector<int> dof_of_vertex_;
    int n_dofs_ = 0;
};

struct DiscreteFunction {
    const FeSpace* space = nullptr;
    Eigen::VectorXd coeffs;  // values at interior vertices

    static DiscreteFunction zero(const FeSpace& space);

    double vertex_value(int vertex) const;
    // constant gradient on element t
    Vec2 gradient(int t) const;
};

// P1 hat-function gradients on element t, one column per local vertex.
Eigen::Matrix<double, 2, 3> hat_gradients(const Triangulation& mesh, int t);

// Symmetric 6-point degree-4 quadrature: integrates f over element t.
template <class F>
double integrate(const Triangulation& mesh, int t, F&& f) {
    static constexpr double w1 = 0.223381589678011;
    static constexpr double w2 = 0.109951743655322;
    static constexpr double a1 = 0.445948490915965;
    static constexpr double a2 = 0.091576213509771;
    static constexpr double b1 = 1.0 - 2.0 * a1;
    static constexpr double b2 = 1.0 - 2.0 * a2;
    static constexpr double pts[6][3] = {
        {b1, a1, a1}, {a1, b1, a1}, {a1, a1, b1}, {b2, a2, a2}, {a2, b2, a2}, {a2, a2, b2},
    };
    static constexpr double wts[6] = {w1, w1, w1, w2, w2, w2};
    const auto& e = mesh.elements[t];
    double sum = 0.0;
    for (int q = 0; q < 6; ++q) {
        Vec2 x = pts[q][0] * mesh.vertices[e.v[0]] + pts[q][1] * mesh.vertices[e.v[1]] +
                 pts[q][2] * mesh.vertices[e.v[2]];
        sum += wts[q] * f(x, pts[q]);
    }
    return sum * mesh.area(t);
}

// Stiffness matrix of a(u,v) = int A grad u . grad v; exact for P1 and
// elementwise-constant A.
SparseMatrix assemble_stiffness(const FeSpace& space, const Coefficient& A);

// Load vector of F(v) = int f v - fvec . grad v. The vector part is exact;
// the scalar part uses the degree-4 rule.
Eigen::VectorXd assemble_load(const FeSpace& space, const DataPair& data);

// G(v) = int g v - gvec . grad v, same quadrature contract as assemble_load.
double evaluate_functional(const DataPair& data, const DiscreteFunction& v);

// a(v, v)
double energy_norm_sq(const Coefficient& A, const DiscreteFunction& v);

// Sparse Cholesky wrapper reusable across right-hand sides. Solutions are
// checked against the 1e-10 relative-residual contract.
class SpdSolver {
public:
    explicit SpdSolver(const SparseMatrix& matrix);
    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

private:
    SparseMatrix matrix_;
    Eigen::SimplicialLDLT<SparseMatrix> factorization_;
};

Eigen::VectorXd solve_spd(const SparseMatrix& matrix, const Eigen::VectorXd& rhs);

// Re-express a function from a coarser space on a refined mesh (nested
// spaces: values at new vertices are edge-midpoint averages).
DiscreteFunction prolongate(const DiscreteFunction& coarse, const FeSpace& fine);

}  // namespace afem

#endif
