#pragma once

#include <array>
#include <vector>

#include "trispectral/dirichlet.hpp"

namespace trispectral::pde {

using Vec2 = std::array<double, 2>;

/// A physical triangle with its affine map from the unit simplex:
/// F(xi,eta) = v0 + xi (v1-v0) + eta (v2-v0).  Vertices are stored
/// counterclockwise (reordered on construction if needed).
struct TriangleElement {
    std::array<Vec2, 3> vertices;
    double jac[2][2];   // columns v1-v0, v2-v0
    double det = 0.0;   // positive after orientation fix
    double metric[2][2];  // det * (J^T J)^{-1}, the flux pullback

    static TriangleElement from_vertices(const Vec2& a, const Vec2& b, const Vec2& c);

    Vec2 map(double xi, double eta) const;
    /// Inverse map; points outside the closed simplex come out with
    /// negative or >1 coordinates.
    void unmap(double x, double y, double& xi, double& eta) const;

    /// Physical endpoints of a reference edge under its trace
    /// parameterization (s = 0 and s = 1).
    std::pair<Vec2, Vec2> edge_endpoints(dirichlet::Edge edge) const;
    double edge_length(dirichlet::Edge edge) const;
};

/// A conforming collection of triangles with interface adjacency.
struct PolygonMesh {
    struct Interface {
        int elem_a = 0, elem_b = 0;
        dirichlet::Edge edge_a = dirichlet::Edge::x0, edge_b = dirichlet::Edge::x0;
        bool reversed = false;  // parameterizations run in opposite directions
    };
    struct BoundaryEdge {
        int elem = 0;
        dirichlet::Edge edge = dirichlet::Edge::x0;
    };

    std::vector<TriangleElement> elements;
    std::vector<Interface> interfaces;
    std::vector<BoundaryEdge> boundary;

    /// Builds adjacency by matching edge endpoints within tol; throws on
    /// inconsistent sharing (mismatched endpoints or >2 elements per edge).
    static PolygonMesh build(const std::vector<std::array<Vec2, 3>>& triangles, double tol = 1e-12);

    /// The paper's reference hexagon split into four triangles.
    static PolygonMesh reference_hexagon();

    /// Element containing the physical point (first match), or -1.
    int locate(double x, double y, double tol = 1e-12) const;
};

}  // namespace trispectral::pde
