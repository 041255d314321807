#include "trispectral/mesh.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace trispectral::pde {

using dirichlet::Edge;

TriangleElement TriangleElement::from_vertices(const Vec2& a, const Vec2& b, const Vec2& c) {
    TriangleElement e;
    e.vertices = {a, b, c};
    auto compute = [&e] {
        const Vec2& v0 = e.vertices[0];
        const Vec2& v1 = e.vertices[1];
        const Vec2& v2 = e.vertices[2];
        e.jac[0][0] = v1[0] - v0[0];
        e.jac[0][1] = v2[0] - v0[0];
        e.jac[1][0] = v1[1] - v0[1];
        e.jac[1][1] = v2[1] - v0[1];
        e.det = e.jac[0][0] * e.jac[1][1] - e.jac[0][1] * e.jac[1][0];
    };
    compute();
    if (e.det < 0.0) {
        std::swap(e.vertices[1], e.vertices[2]);
        compute();
    }
    if (!(e.det > 1e-14)) throw std::invalid_argument("TriangleElement: degenerate triangle");
    const double a11 = e.jac[0][0], a12 = e.jac[0][1], a21 = e.jac[1][0], a22 = e.jac[1][1];
    // det * (J^T J)^{-1}
    e.metric[0][0] = (a12 * a12 + a22 * a22) / e.det;
    e.metric[0][1] = -(a11 * a12 + a21 * a22) / e.det;
    e.metric[1][0] = e.metric[0][1];
    e.metric[1][1] = (a11 * a11 + a21 * a21) / e.det;
    return e;
}

Vec2 TriangleElement::map(double xi, double eta) const {
    return {vertices[0][0] + jac[0][0] * xi + jac[0][1] * eta, vertices[0][1] + jac[1][0] * xi + jac[1][1] * eta};
}

void TriangleElement::unmap(double x, double y, double& xi, double& eta) const {
    const double rx = x - vertices[0][0], ry = y - vertices[0][1];
    xi = (jac[1][1] * rx - jac[0][1] * ry) / det;
    eta = (-jac[1][0] * rx + jac[0][0] * ry) / det;
}

std::pair<Vec2, Vec2> TriangleElement::edge_endpoints(Edge edge) const {
    switch (edge) {
        case Edge::x0: return {map(0, 0), map(0, 1)};
        case Edge::y0: return {map(0, 0), map(1, 0)};
        case Edge::z0: return {map(0, 1), map(1, 0)};
    }
    throw std::logic_error("bad edge");
}

double TriangleElement::edge_length(Edge edge) const {
    const auto [p, q] = edge_endpoints(edge);
    return std::hypot(q[0] - p[0], q[1] - p[1]);
}

namespace {

bool close(const Vec2& a, const Vec2& b, double tol) {
    return std::abs(a[0] - b[0]) <= tol && std::abs(a[1] - b[1]) <= tol;
}

}  // namespace

PolygonMesh PolygonMesh::build(const std::vector<std::array<Vec2, 3>>& triangles, double tol) {
    PolygonMesh mesh;
    for (const auto& t : triangles) {
        mesh.elements.push_back(TriangleElement::from_vertices(t[0], t[1], t[2]));
    }
    const Edge edges[3] = {Edge::x0, Edge::y0, Edge::z0};
    struct Slot {
        int elem;
        Edge edge;
        Vec2 p, q;
        bool matched = false;
    };
    std::vector<Slot> slots;
    for (int e = 0; e < static_cast<int>(mesh.elements.size()); ++e) {
        for (Edge ed : edges) {
            const auto [p, q] = mesh.elements[e].edge_endpoints(ed);
            slots.push_back({e, ed, p, q});
        }
    }
    for (size_t i = 0; i < slots.size(); ++i) {
        if (slots[i].matched) continue;
        for (size_t j = i + 1; j < slots.size(); ++j) {
            if (slots[j].matched || slots[j].elem == slots[i].elem) continue;
            const bool same = close(slots[i].p, slots[j].p, tol) && close(slots[i].q, slots[j].q, tol);
            const bool rev = close(slots[i].p, slots[j].q, tol) && close(slots[i].q, slots[j].p, tol);
            if (!same && !rev) {
                // Edges agreeing at both endpoint regions but not matching
                // as a pair indicate a mismatch beyond tolerance.
                const int shared = (close(slots[i].p, slots[j].p, tol) || close(slots[i].p, slots[j].q, tol) ? 1 : 0) +
                                   (close(slots[i].q, slots[j].p, tol) || close(slots[i].q, slots[j].q, tol) ? 1 : 0);
                if (shared == 2) {
                    throw std::invalid_argument("PolygonMesh: shared edge endpoints mismatch beyond tolerance");
                }
                continue;
            }
            if (slots[i].matched) {
                throw std::invalid_argument("PolygonMesh: edge shared by more than two elements");
            }
            slots[i].matched = slots[j].matched = true;
            mesh.interfaces.push_back({slots[i].elem, slots[j].elem, slots[i].edge, slots[j].edge, rev});
        }
    }
    for (const Slot& s : slots) {
        if (!s.matched) mesh.boundary.push_back({s.elem, s.edge});
    }
    return mesh;
}

PolygonMesh PolygonMesh::reference_hexagon() {
    const Vec2 A{0, 0}, B{1, 0}, C{1, 1}, D{0, 2}, E{0, 1}, F{-1, 1.5};
    return build({{A, B, C}, {A, C, E}, {E, C, D}, {E, F, A}});
}

int PolygonMesh::locate(double x, double y, double tol) const {
    for (int e = 0; e < static_cast<int>(elements.size()); ++e) {
        double xi, eta;
        elements[e].unmap(x, y, xi, eta);
        if (xi >= -tol && eta >= -tol && xi + eta <= 1.0 + tol) return e;
    }
    return -1;
}

}  // namespace trispectral::pde
