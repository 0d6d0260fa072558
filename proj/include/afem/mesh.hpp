#ifndef AFEM_MESH_HPP
#define AFEM_MESH_HPP

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace afem {

using Vec2 = Eigen::Vector2d;

// Subdomain of the unit square used for tagging elements and masking data.
// Half-plane: {x : a.dot(x) > c} (or < c); box: open rectangle (lo, hi).
struct Region {
    enum class Kind { HalfPlane, Box };

    std::string name;
    Kind kind = Kind::HalfPlane;
    Vec2 normal = Vec2::Zero();
    double offset = 0.0;
    bool greater = true;
    Vec2 lo = Vec2::Zero();
    Vec2 hi = Vec2::Zero();

    static Region half_plane(std::string name, const Vec2& normal, double offset, bool greater);
    static Region box(std::string name, const Vec2& lo, const Vec2& hi);

    bool contains(const Vec2& x) const;
};

struct Element {
    // Vertex indices in counterclockwise order. The refinement edge is
    // always (v[0], v[1]); bisection inserts its midpoint m and produces
    // children (v[2], v[0], m) and (v[1], v[2], m).
    std::array<int, 3> v{};
    int region = 0;      // 0 = untagged rest, 1.. = region index + 1
    int generation = 0;  // bisection depth
};

class Triangulation {
public:
    std::vector<Vec2> vertices;
    std::vector<Element> elements;
    // For vertices created by refinement: the endpoints of the bisected
    // edge. {-1,-1} for vertices of the initial mesh. Parent indices are
    // always smaller than the child index.
    std::vector<std::array<int, 2>> vertex_parents;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_elements() const { return static_cast<int>(elements.size()); }

    double area(int t) const;
    double diameter(int t) const;
    Vec2 barycenter(int t) const;
};

// Edge connectivity of a conforming mesh. Each edge stores its vertex pair
// and the one or two adjacent elements (right == -1 on the boundary).
struct EdgeTable {
    struct Edge {
        int a, b;
        int left = -1, right = -1;
    };
    std::vector<Edge> edges;
    std::vector<bool> vertex_on_boundary;

    explicit EdgeTable(const Triangulation& mesh);
};

struct DomainConfig {
    int cells_per_side = 4;
    std::vector<Region> regions;
};

// Criss-cross triangulation of the unit square whose element boundaries
// resolve all region interfaces exactly. Throws std::invalid_argument if
// some region interface cuts through an element.
Triangulation build_initial(const DomainConfig& config);

// Coarsest conforming NVB refinement in which every marked element has
// been bisected at least once.
Triangulation refine(const Triangulation& mesh, const std::vector<int>& marked);

// max_T diam(T)^2 / |T|
double shape_regularity(const Triangulation& mesh);

// Conformity check: consistent orientation, positive areas, every edge
// shared by one or two elements. Returns false on any violation.
bool is_conforming(const Triangulation& mesh);

// Debug dump: "v x y" per vertex, "t i j k r tag" per element with r the
// local index of the refinement edge (always 0 in this representation).
void write_mesh(std::ostream& out, const Triangulation& mesh);

}  // namespace afem

#endif
