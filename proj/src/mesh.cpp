#include "afem/mesh.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <ostream>
#include <stdexcept>

namespace afem {

namespace {

constexpr double kGeomTol = 1e-12;

// +1 strictly inside, -1 strictly outside, 0 on the interface
int side_of(const Region& r, const Vec2& x) {
    if (r.kind == Region::Kind::HalfPlane) {
        double s = r.normal.dot(x) - r.offset;
        if (std::abs(s) <= kGeomTol) return 0;
        bool in = r.greater ? (s > 0) : (s < 0);
        return in ? 1 : -1;
    }
    // box: on boundary if on the frame, inside if strictly within
    double dx = std::min(x[0] - r.lo[0], r.hi[0] - x[0]);
    double dy = std::min(x[1] - r.lo[1], r.hi[1] - x[1]);
    double s = std::min(dx, dy);
    if (std::abs(s) <= kGeomTol) return 0;
    return s > 0 ? 1 : -1;
}

double signed_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]));
}

}  // namespace

Region Region::half_plane(std::string name, const Vec2& normal, double offset, bool greater) {
    Region r;
    r.name = std::move(name);
    r.kind = Kind::HalfPlane;
    r.normal = normal;
    r.offset = offset;
    r.greater = greater;
    return r;
}

Region Region::box(std::string name, const Vec2& lo, const Vec2& hi) {
    Region r;
    r.name = std::move(name);
    r.kind = Kind::Box;
    r.lo = lo;
    r.hi = hi;
    return r;
}

bool Region::contains(const Vec2& x) const {
    return side_of(*this, x) > 0;
}

double Triangulation::area(int t) const {
    const auto& e = elements[t];
    return signed_area(vertices[e.v[0]], vertices[e.v[1]], vertices[e.v[2]]);
}

double Triangulation::diameter(int t) const {
    const auto& e = elements[t];
    double d = 0.0;
    for (int i = 0; i < 3; ++i)
        d = std::max(d, (vertices[e.v[i]] - vertices[e.v[(i + 1) % 3]]).norm());
    return d;
}

Vec2 Triangulation::barycenter(int t) const {
    const auto& e = elements[t];
    return (vertices[e.v[0]] + vertices[e.v[1]] + vertices[e.v[2]]) / 3.0;
}

EdgeTable::EdgeTable(const Triangulation& mesh) {
    std::map<std::pair<int, int>, int> index;
    for (int t = 0; t < mesh.n_elements(); ++t) {
        const auto& el = mesh.elements[t];
        for (int k = 0; k < 3; ++k) {
            int a = el.v[k], b = el.v[(k + 1) % 3];
            auto key = std::minmax(a, b);
            auto it = index.find(key);
            if (it == index.end()) {
                index.emplace(key, static_cast<int>(edges.size()));
                edges.push_back({key.first, key.second, t, -1});
            } else {
                Edge& e = edges[it->second];
                if (e.right != -1)
                    throw std::runtime_error("non-conforming mesh: edge shared by >2 elements");
                e.right = t;
            }
        }
    }
    vertex_on_boundary.assign(mesh.n_vertices(), false);
    for (const Edge& e : edges) {
        if (e.right == -1) {
            vertex_on_boundary[e.a] = true;
            vertex_on_boundary[e.b] = true;
        }
    }
}

Triangulation build_initial(const DomainConfig& config) {
    int n = config.cells_per_side;
    if (n < 1) throw std::invalid_argument("cells_per_side must be >= 1");
    double h = 1.0 / n;

    Triangulation mesh;
    // lattice vertices, then cell centers
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            mesh.vertices.emplace_back(i * h, j * h);
    auto lattice = [&](int i, int j) { return j * (n + 1) + i; };

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            int c = mesh.n_vertices();
            mesh.vertices.emplace_back((i + 0.5) * h, (j + 0.5) * h);
            int v00 = lattice(i, j), v10 = lattice(i + 1, j);
            int v11 = lattice(i + 1, j + 1), v01 = lattice(i, j + 1);
            // four triangles per cell; the cell side is the longest edge
            // and becomes the refinement edge (v[0], v[1])
            mesh.elements.push_back({{v00, v10, c}, 0, 0});
            mesh.elements.push_back({{v10, v11, c}, 0, 0});
            mesh.elements.push_back({{v11, v01, c}, 0, 0});
            mesh.elements.push_back({{v01, v00, c}, 0, 0});
        }
    }
    mesh.vertex_parents.assign(mesh.vertices.size(), {-1, -1});

    // tag elements and require every region interface to be resolved
    for (int t = 0; t < mesh.n_elements(); ++t) {
        Element& el = mesh.elements[t];
        Vec2 mid = mesh.barycenter(t);
        for (int r = 0; r < static_cast<int>(config.regions.size()); ++r) {
            const Region& reg = config.regions[r];
            int sm = side_of(reg, mid);
            for (int k = 0; k < 3; ++k) {
                int sv = side_of(reg, mesh.vertices[el.v[k]]);
                if (sv != 0 && sv != sm)
                    throw std::invalid_argument("region '" + reg.name +
                                                "' is not resolved by the initial mesh");
            }
            if (sm > 0 && el.region == 0) el.region = r + 1;
        }
    }
    return mesh;
}

Triangulation refine(const Triangulation& mesh, const std::vector<int>& marked) {
    int n_old = mesh.n_elements();
    for (int t : marked)
        if (t < 0 || t >= n_old) throw std::invalid_argument("marked element out of range");

    // Edge-based closure: an element with any marked edge must have its
    // refinement edge (local edge 0) marked as well. Iterate to fixpoint
    // in ascending element order.
    std::map<std::pair<int, int>, bool> edge_marked;
    auto key = [](int a, int b) { return std::pair<int, int>(std::min(a, b), std::max(a, b)); };
    auto mark_edge = [&](int a, int b) -> bool {
        bool& m = edge_marked[key(a, b)];
        bool changed = !m;
        m = true;
        return changed;
    };
    for (int t : marked) {
        const auto& v = mesh.elements[t].v;
        mark_edge(v[0], v[1]);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int t = 0; t < n_old; ++t) {
            const auto& v = mesh.elements[t].v;
            bool e1 = edge_marked.count(key(v[1], v[2])) != 0;
            bool e2 = edge_marked.count(key(v[2], v[0])) != 0;
            if ((e1 || e2) && mark_edge(v[0], v[1])) changed = true;
        }
    }

    Triangulation fine;
    fine.vertices = mesh.vertices;
    fine.vertex_parents = mesh.vertex_parents;

    std::map<std::pair<int, int>, int> midpoint;
    auto mid_vertex = [&](int a, int b) {
        auto k = key(a, b);
        auto it = midpoint.find(k);
        if (it != midpoint.end()) return it->second;
        int idx = fine.n_vertices();
        fine.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
        fine.vertex_parents.push_back({k.first, k.second});
        midpoint.emplace(k, idx);
        return idx;
    };

    int refined_count = 0;
    for (int t = 0; t < n_old; ++t) {
        const Element& el = mesh.elements[t];
        const auto& v = el.v;
        bool m0 = edge_marked.count(key(v[0], v[1])) != 0;
        bool m1 = edge_marked.count(key(v[1], v[2])) != 0;
        bool m2 = edge_marked.count(key(v[2], v[0])) != 0;
        if (!m0) {
            // closure guarantees untouched elements have no marked edge
            fine.elements.push_back(el);
            continue;
        }
        ++refined_count;
        int m = mid_vertex(v[0], v[1]);
        Element c1{{v[2], v[0], m}, el.region, el.generation + 1};
        Element c2{{v[1], v[2], m}, el.region, el.generation + 1};
        if (m2) {
            int m2v = mid_vertex(v[2], v[0]);
            fine.elements.push_back({{m, v[2], m2v}, el.region, el.generation + 2});
            fine.elements.push_back({{v[0], m, m2v}, el.region, el.generation + 2});
        } else {
            fine.elements.push_back(c1);
        }
        if (m1) {
            int m1v = mid_vertex(v[1], v[2]);
            fine.elements.push_back({{m, v[1], m1v}, el.region, el.generation + 2});
            fine.elements.push_back({{v[2], m, m1v}, el.region, el.generation + 2});
        } else {
            fine.elements.push_back(c2);
        }
    }

    // son estimate: #(T_H \ T_h) + #T_H <= #T_h
    if (refined_count + n_old > fine.n_elements())
        throw std::logic_error("son estimate violated");
    return fine;
}

double shape_regularity(const Triangulation& mesh) {
    double worst = 0.0;
    for (int t = 0; t < mesh.n_elements(); ++t) {
        double d = mesh.diameter(t);
        worst = std::max(worst, d * d / mesh.area(t));
    }
    return worst;
}

bool is_conforming(const Triangulation& mesh) {
    for (int t = 0; t < mesh.n_elements(); ++t)
        if (mesh.area(t) <= 0.0) return false;
    try {
        EdgeTable table(mesh);
        // hanging vertex: a vertex lying on an edge it does not terminate
        // is impossible once every edge has <= 2 neighbors AND each pair of
        // adjacent elements shares a full edge; detect leftovers by checking
        // that boundary edges tile the square's boundary exactly.
        double boundary_len = 0.0;
        for (const auto& e : table.edges)
            if (e.right == -1)
                boundary_len += (mesh.vertices[e.a] - mesh.vertices[e.b]).norm();
        double total_area = 0.0;
        for (int t = 0; t < mesh.n_elements(); ++t) total_area += mesh.area(t);
        // for the unit square: perimeter 4, area 1; a hanging vertex makes a
        // formerly interior edge count as two boundary half-edges
        return std::abs(total_area - 1.0) < 1e-10 && std::abs(boundary_len - 4.0) < 1e-10;
    } catch (const std::runtime_error&) {
        return false;
    }
}

void write_mesh(std::ostream& out, const Triangulation& mesh) {
    for (const Vec2& v : mesh.vertices) out << "v " << v[0] << ' ' << v[1] << '\n';
    for (const Element& e : mesh.elements)
        out << "t " << e.v[0] << ' ' << e.v[1] << ' ' << e.v[2] << " 0 " << e.region << '\n';
}

}  // namespace afem
