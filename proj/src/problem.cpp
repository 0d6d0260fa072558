#include "afem/problem.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace afem {

ScalarField ScalarField::poly2(const std::array<double, 6>& coef) {
    ScalarField f;
    f.kind = Kind::Poly2;
    f.coef = coef;
    return f;
}

ScalarField ScalarField::sin_prod(double amp, double freq_x, double freq_y) {
    ScalarField f;
    f.kind = Kind::SinProd;
    f.amp = amp;
    f.freq_x = freq_x;
    f.freq_y = freq_y;
    return f;
}

ScalarField ScalarField::constant(double value, int region) {
    ScalarField f;
    f.kind = Kind::Const;
    f.value = value;
    f.region = region;
    return f;
}

double ScalarField::eval(const Vec2& x, int elem_region) const {
    if (region >= 0 && region != elem_region) return 0.0;
    switch (kind) {
        case Kind::Zero:
            return 0.0;
        case Kind::Poly2:
            return coef[0] + coef[1] * x[0] + coef[2] * x[1] + coef[3] * x[0] * x[0] +
                   coef[4] * x[0] * x[1] + coef[5] * x[1] * x[1];
        case Kind::SinProd:
            return amp * std::sin(freq_x * std::numbers::pi * x[0]) *
                   std::sin(freq_y * std::numbers::pi * x[1]);
        case Kind::Const:
            return value;
    }
    return 0.0;
}

Coefficient Coefficient::identity(int n_regions) {
    Coefficient c;
    for (int r = 0; r <= n_regions; ++r) c.set(r, Eigen::Matrix2d::Identity());
    return c;
}

void Coefficient::set(int region, const Eigen::Matrix2d& matrix) {
    if (region < 0) throw std::invalid_argument("negative region tag");
    if ((matrix - matrix.transpose()).norm() > 1e-14 * matrix.norm())
        throw std::invalid_argument("coefficient matrix must be symmetric");
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(matrix);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw std::invalid_argument("coefficient matrix must be positive definite");
    if (region >= static_cast<int>(by_region_.size())) by_region_.resize(region + 1);
    by_region_[region] = matrix;
}

const Eigen::Matrix2d& Coefficient::on_region(int region) const {
    if (region < 0 || region >= static_cast<int>(by_region_.size()) || !by_region_[region])
        throw std::runtime_error("coefficient has no entry for region tag " +
                                 std::to_string(region));
    return *by_region_[region];
}

void ProblemData::validate() const {
    if (n_q < 1) throw std::invalid_argument("need at least one parameter");
    if (n_c < 1) throw std::invalid_argument("need at least one measurement");
    if (static_cast<int>(state_data.size()) != n_q + 1)
        throw std::invalid_argument("state_data must have n_q + 1 entries");
    if (static_cast<int>(measure_data.size()) != n_c)
        throw std::invalid_argument("measure_data must have n_c entries");
    if (alpha < 0.0) throw std::invalid_argument("alpha must be >= 0");
    if (constraint) {
        if (constraint->lo.size() != n_q || constraint->hi.size() != n_q ||
            (constraint->lo.array() > constraint->hi.array()).any())
            throw std::invalid_argument("invalid box constraint");
    }
    if (measurements.size() != 0 && measurements.size() != n_c)
        throw std::invalid_argument("measurements must have n_c entries");
    if (measurements.size() == 0 && !exact_p)
        throw std::invalid_argument("either measurements or exact_p must be given");
}

namespace {

std::vector<Region> benchmark_regions() {
    return {
        Region::half_plane("T1", Vec2(1, 1), 1.5, true),
        Region::half_plane("T2", Vec2(1, 1), 0.5, false),
        Region::box("T3", Vec2(0.25, 0.25), Vec2(0.75, 0.75)),
    };
}

// f1 = 2 x(1-x) + 2 y(1-y), so that -div(grad u1) = f1 holds for
// u1 = x y (1-x)(1-y), the state the measurement values correspond to
ScalarField f1_field() { return ScalarField::poly2({0, 2, 2, -2, 0, -2}); }

// f2 = 5 pi^2 sin(pi x) sin(2 pi y)
ScalarField f2_field() {
    return ScalarField::sin_prod(5.0 * std::numbers::pi * std::numbers::pi, 1.0, 2.0);
}

}  // namespace

ProblemData single_parameter_problem() {
    ProblemData p;
    p.regions = benchmark_regions();
    p.n_q = 1;
    p.n_c = 1;
    p.A = Coefficient::identity(3);
    p.state_data.resize(2);
    p.state_data[1].scalar = f1_field();
    p.measure_data.resize(1);
    p.measure_data[0].vec = {Vec2(1, 0), 1};  // g1 = (1,0) on T1
    p.alpha = 0.0;
    p.measurements = Eigen::VectorXd::Constant(1, 11.0 / 960.0);
    p.exact_p = Eigen::VectorXd::Constant(1, 1.0);
    p.validate();
    return p;
}

ProblemData multi_parameter_problem() {
    ProblemData p;
    p.regions = benchmark_regions();
    p.n_q = 2;
    p.n_c = 3;
    p.A = Coefficient::identity(3);
    p.state_data.resize(3);
    p.state_data[1].scalar = f1_field();
    p.state_data[2].scalar = f2_field();
    p.measure_data.resize(3);
    // ordered so that G(u(p*)) matches the reference measurement vector
    // componentwise: first the T2 functional, then the T1 functional
    p.measure_data[0].vec = {Vec2(-1, 0), 2};
    p.measure_data[1].vec = {Vec2(1, 0), 1};
    p.measure_data[2].scalar = ScalarField::constant(1.0, 3);
    p.alpha = 0.0;
    const double pi = std::numbers::pi;
    p.measurements.resize(3);
    p.measurements << (11.0 * pi + 160.0) / (480.0 * pi), (11.0 * pi - 160.0) / (480.0 * pi),
        121.0 / 4608.0;
    p.exact_p = Eigen::VectorXd(2);
    *p.exact_p << 2.0, 0.5;
    p.validate();
    return p;
}

namespace {

int region_id(const ProblemData& p, const std::string& name) {
    if (name == "rest") return 0;
    for (int r = 0; r < static_cast<int>(p.regions.size()); ++r)
        if (p.regions[r].name == name) return r + 1;
    throw std::invalid_argument("unknown region '" + name + "'");
}

// Terms after "state i" / "measure j": any of
//   zero | poly2 c0..c5 | sinprod amp fx fy | const v [in R] | vec vx vy [in R]
DataPair parse_data_terms(std::istringstream& in, const ProblemData& p, int line_no) {
    DataPair pair;
    std::string term;
    while (in >> term) {
        auto mask = [&](int& target) {
            std::streampos pos = in.tellg();
            std::string kw, name;
            if (in >> kw && kw == "in" && in >> name) {
                target = region_id(p, name);
            } else if (pos == std::streampos(-1)) {
                // already at end of line before the lookahead
                in.clear(std::ios::eofbit);
            } else {
                in.clear();
                in.seekg(pos);
            }
        };
        if (term == "zero") {
            pair.scalar = ScalarField::zero();
        } else if (term == "poly2") {
            std::array<double, 6> c{};
            for (double& x : c) in >> x;
            pair.scalar = ScalarField::poly2(c);
            mask(pair.scalar.region);
        } else if (term == "sinprod") {
            double amp, fx, fy;
            in >> amp >> fx >> fy;
            pair.scalar = ScalarField::sin_prod(amp, fx, fy);
            mask(pair.scalar.region);
        } else if (term == "const") {
            double v;
            in >> v;
            pair.scalar = ScalarField::constant(v);
            mask(pair.scalar.region);
        } else if (term == "vec") {
            in >> pair.vec.value[0] >> pair.vec.value[1];
            mask(pair.vec.region);
        } else {
            throw std::invalid_argument("line " + std::to_string(line_no) +
                                        ": unknown data term '" + term + "'");
        }
        if (!in && !in.eof())
            throw std::invalid_argument("line " + std::to_string(line_no) + ": malformed term");
    }
    return pair;
}

}  // namespace

ProblemData parse_problem_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw std::runtime_error("cannot open problem file '" + path + "'");

    ProblemData p;
    p.A = Coefficient();  // identity on "rest"; extended once regions are known
    std::vector<std::pair<int, DataPair>> states, measures;
    bool have_coeff = false;

    std::string line;
    int line_no = 0;
    while (std::getline(file, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream in(line);
        std::string key;
        if (!(in >> key)) continue;

        if (key == "n_q") {
            in >> p.n_q;
        } else if (key == "n_c") {
            in >> p.n_c;
        } else if (key == "alpha") {
            in >> p.alpha;
        } else if (key == "region") {
            std::string name, kind;
            in >> name >> kind;
            if (kind == "halfplane") {
                double a1, a2, c;
                std::string cmp;
                in >> a1 >> a2 >> cmp >> c;
                if (cmp != "gt" && cmp != "lt")
                    throw std::invalid_argument("halfplane comparison must be gt or lt");
                p.regions.push_back(Region::half_plane(name, Vec2(a1, a2), c, cmp == "gt"));
            } else if (kind == "box") {
                double x0, y0, x1, y1;
                in >> x0 >> y0 >> x1 >> y1;
                p.regions.push_back(Region::box(name, Vec2(x0, y0), Vec2(x1, y1)));
            } else {
                throw std::invalid_argument("unknown region kind '" + kind + "'");
            }
        } else if (key == "coeff") {
            std::string name;
            double a, b, c, d;
            in >> name >> a >> b >> c >> d;
            Eigen::Matrix2d m;
            m << a, b, c, d;
            p.A.set(region_id(p, name), m);
            have_coeff = true;
        } else if (key == "state") {
            int i;
            in >> i;
            states.emplace_back(i, parse_data_terms(in, p, line_no));
        } else if (key == "measure") {
            int j;
            in >> j;
            measures.emplace_back(j, parse_data_terms(in, p, line_no));
        } else if (key == "measurements") {
            std::vector<double> v;
            double x;
            while (in >> x) v.push_back(x);
            p.measurements = Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
        } else if (key == "exact_p") {
            std::vector<double> v;
            double x;
            while (in >> x) v.push_back(x);
            p.exact_p = Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
        } else if (key == "box_lo" || key == "box_hi") {
            std::vector<double> v;
            double x;
            while (in >> x) v.push_back(x);
            if (!p.constraint) p.constraint = BoxConstraint{};
            auto& target = (key == "box_lo") ? p.constraint->lo : p.constraint->hi;
            target = Eigen::Map<Eigen::VectorXd>(v.data(), v.size());
        } else {
            throw std::invalid_argument("line " + std::to_string(line_no) + ": unknown key '" +
                                        key + "'");
        }
    }

    if (!have_coeff) p.A = Coefficient::identity(static_cast<int>(p.regions.size()));
    p.state_data.resize(p.n_q + 1);
    for (auto& [i, d] : states) {
        if (i < 0 || i > p.n_q) throw std::invalid_argument("state index out of range");
        p.state_data[i] = d;
    }
    p.measure_data.resize(p.n_c);
    for (auto& [j, d] : measures) {
        if (j < 1 || j > p.n_c) throw std::invalid_argument("measure index out of range");
        p.measure_data[j - 1] = d;
    }
    p.validate();
    return p;
}

}  // namespace afem
