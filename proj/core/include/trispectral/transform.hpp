#pragma once

#include <functional>
#include <vector>

#include "trispectral/coefficients.hpp"
#include "trispectral/jacobi1d.hpp"
#include "trispectral/triops.hpp"

namespace trispectral::transform {

/// Tensor quadrature grid for P^(a,b,c) expansions: an outer rule in x for
/// the weight x^a (1-x)^(b+c+1) and an inner rule in t = y/(1-x) for the
/// weight t^b (1-t)^c.  Mapped points are (x_i, (1-x_i) t_j), all inside
/// the closed triangle.
struct TriangleGrid {
    triops::ParameterTriple p;
    jacobi1d::QuadratureRule1D x_rule;
    jacobi1d::QuadratureRule1D t_rule;

    int num_x() const { return static_cast<int>(x_rule.nodes.size()); }
    int num_t() const { return static_cast<int>(t_rule.nodes.size()); }
    double point_x(int i) const { return x_rule.nodes[i]; }
    double point_y(int i, int j) const { return (1.0 - x_rule.nodes[i]) * t_rule.nodes[j]; }
};

/// Grid sized N+1+pad in each direction (pad covers weighted integrands).
TriangleGrid make_grid(const triops::ParameterTriple& p, int N, int pad = 2);

/// Orthogonality constants d_{n,k} of the weighted inner product,
/// assembled from the 1-D norms of the two tensor factors.
struct NormalizationTable {
    std::vector<std::vector<double>> d;  // d[n][k]
};
NormalizationTable norm_constants(const triops::ParameterTriple& p, int N);
double norm_constant(const triops::ParameterTriple& p, int n, int k);

/// Point values -> coefficients: exact for polynomial f of total degree
/// <= N.  values is laid out i-major: values[i*num_t + j] = f at (i,j).
CoefficientVector analysis_from_grid(const TriangleGrid& grid, std::span<const double> values, int N);
CoefficientVector analysis(const triops::ParameterTriple& p, const std::function<double(double, double)>& f,
                           int N, int pad = 2);

/// Coefficients -> values on the grid (i-major layout).
std::vector<double> synthesis(const triops::ParameterTriple& p, const CoefficientVector& coeffs,
                              const TriangleGrid& grid);

/// Re-expand a P-family coefficient vector in another P basis at degree N.
CoefficientVector reexpand(const CoefficientVector& src, const triops::ParameterTriple& dst, int N, int pad = 2);

/// 1-D shifted-Legendre analysis of edge data on [0,1].
std::vector<double> legendre_edge_transform(const std::function<double(double)>& g, int N, int pad = 2);

}  // namespace trispectral::transform
