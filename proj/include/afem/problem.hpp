#ifndef AFEM_PROBLEM_HPP
#define AFEM_PROBLEM_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "afem/mesh.hpp"

namespace afem {

// Region-tagged analytic scalar function. The optional region mask is an
// element region id (see Element::region); -1 applies everywhere.
struct ScalarField {
    enum class Kind { Zero, Poly2, SinProd, Const };

    Kind kind = Kind::Zero;
    std::array<double, 6> coef{};  // Poly2 basis {1, x, y, x^2, x*y, y^2}
    double amp = 0.0;              // SinProd: amp * sin(fx*pi*x) * sin(fy*pi*y)
    double freq_x = 0.0, freq_y = 0.0;
    double value = 0.0;  // Const
    int region = -1;

    static ScalarField zero() { return {}; }
    static ScalarField poly2(const std::array<double, 6>& coef);
    static ScalarField sin_prod(double amp, double freq_x, double freq_y);
    static ScalarField constant(double value, int region = -1);

    // value at x for an element carrying elem_region
    double eval(const Vec2& x, int elem_region) const;
    bool is_zero() const { return kind == Kind::Zero; }
};

// Piecewise-constant 2-vector: `value` on the masked region, zero outside.
struct VectorField {
    Vec2 value = Vec2::Zero();
    int region = -1;

    Vec2 on_region(int elem_region) const {
        return (region < 0 || region == elem_region) ? value : Vec2(Vec2::Zero());
    }
    bool is_zero() const { return value.isZero(0.0); }
};

struct DataPair {
    ScalarField scalar;
    VectorField vec;

    bool is_zero() const { return scalar.is_zero() && vec.is_zero(); }
};

// Per-region symmetric positive definite 2x2 diffusion matrix. Region ids
// match Element::region (0 = rest). Throws on lookup of an uncovered tag.
class Coefficient {
public:
    static Coefficient identity(int n_regions = 0);

    Coefficient() { set(0, Eigen::Matrix2d::Identity()); }

    void set(int region, const Eigen::Matrix2d& matrix);
    const Eigen::Matrix2d& on_region(int region) const;

private:
    std::vector<std::optional<Eigen::Matrix2d>> by_region_;
};

struct BoxConstraint {
    Eigen::VectorXd lo, hi;
};

struct ProblemData {
    int n_q = 0;
    int n_c = 0;
    std::vector<Region> regions;
    Coefficient A;
    std::vector<DataPair> state_data;    // n_q + 1 entries, [0] is F0
    std::vector<DataPair> measure_data;  // n_c entries
    double alpha = 0.0;
    Eigen::VectorXd measurements;  // G*
    std::optional<BoxConstraint> constraint;
    std::optional<Eigen::VectorXd> exact_p;  // known true parameter, if any

    void validate() const;
};

// Built-in benchmark problems with exact analytic measurements.
ProblemData single_parameter_problem();
ProblemData multi_parameter_problem();

ProblemData parse_problem_file(const std::string& path);

}  // namespace afem

#endif
