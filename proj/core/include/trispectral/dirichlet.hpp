#pragma once

#include <vector>

#include "trispectral/blockbanded.hpp"
#include "trispectral/coefficients.hpp"
#include "trispectral/triops.hpp"

namespace trispectral::dirichlet {

/// Which edges (x=0, y=0, z=0) a Q basis respects.
struct EdgeFlags {
    int a = 0, b = 0, c = 0;

    bool operator==(const EdgeFlags&) const = default;
};

enum class Edge { x0, y0, z0 };

std::string to_string(const EdgeFlags& f);

/// Evaluate a Q expansion directly from the defining combinations of
/// weighted P expansions and univariate polynomials.
double q_eval(const EdgeFlags& flags, const CoefficientVector& coeffs, double x, double y);

/// Value of the single basis member Q_{n,k} (test oracle convenience).
double q_eval_single(const EdgeFlags& flags, int n, int k, double x, double y);

bool legal_conversion_step(const EdgeFlags& src, const EdgeFlags& dst);

/// One legal step down the edge-flag lattice: coefficients in the src
/// family re-expanded in the dst family.  Block upper bidiagonal with
/// diagonal or upper bidiagonal blocks.
BlockBandedMatrix q_conversion(const EdgeFlags& src, const EdgeFlags& dst, int col_blocks);

/// Composition of legal steps from src down to dst (dst flags a subset of
/// src flags); every path yields the same operator.
BlockBandedMatrix q_conversion_path(const EdgeFlags& src, const EdgeFlags& dst, int col_blocks);

/// Partial derivatives of the two-edge bases into P^(0,0,0):
/// d/dy on (0,1,1), d/dx on (1,0,1), d/dz on (1,1,0).  Other pairs are
/// unsupported (the assemblies never need them).
BlockBandedMatrix q_derivative(const EdgeFlags& src, triops::Direction dir, int col_blocks);

/// Maps Q coefficients to shifted-Legendre coefficients of the trace on
/// one edge.  Edge parameterizations: x=0 by y in [0,1]; y=0 and z=0 by
/// x in [0,1].
struct RestrictionOperator {
    Edge edge;
    BlockBandedMatrix matrix;
};

/// Restriction of the src family (which must flag the requested edge),
/// converting down to the matching one-edge family as needed.
RestrictionOperator restriction(Edge edge, const EdgeFlags& src, int col_blocks);

/// The stacked three-edge restriction of Q^(1,1,1).
struct FullRestriction {
    RestrictionOperator x0, y0, z0;
};
FullRestriction full_restriction(int col_blocks);

/// Point on an edge for trace parameter s in [0,1].
void edge_point(Edge edge, double s, double& x, double& y);

}  // namespace trispectral::dirichlet
