#pragma once

#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "trispectral/blockbanded.hpp"
#include "trispectral/coefficients.hpp"

namespace trispectral::triops {

/// The (a,b,c) exponents identifying a triangle basis/weight.  This
/// artifact restricts parameters to small nonnegative integers.
struct ParameterTriple {
    int a = 0, b = 0, c = 0;

    bool operator==(const ParameterTriple&) const = default;
    auto operator<=>(const ParameterTriple&) const = default;
};

std::string to_string(const ParameterTriple& t);

enum class Axis { a, b, c };
enum class Direction { x, y, z };

enum class OperatorKind { S, L, Dx, Dy, Dz, Wx, Wy, Wz, Jx, Jy };

struct OperatorDescriptor {
    OperatorKind kind;
    ParameterTriple source;
    ParameterTriple target;
};

ParameterTriple conversion_target(const ParameterTriple& src, Axis which);
ParameterTriple lowering_target(const ParameterTriple& src, Axis which);
ParameterTriple differentiation_target(const ParameterTriple& src, Direction dir);
ParameterTriple weighted_differentiation_target(const ParameterTriple& src, Direction dir);

/// Conversion S_{src}^{src+e_which}: expansion coefficients in the raised
/// basis.  Block-bandwidths (0,1); diagonal blocks for the a-step, upper
/// bidiagonal blocks for the b- and c-steps.  col_blocks column blocks in,
/// the same number of row blocks out.
BlockBandedMatrix conversion(const ParameterTriple& src, Axis which, int col_blocks);

/// Lowering L_{src}^{src-e_which}: multiplication by x, y or z = 1-x-y
/// while decrementing the matching parameter.  Block-bandwidths (1,0);
/// one extra row block out.
BlockBandedMatrix lowering(const ParameterTriple& src, Axis which, int col_blocks);

/// Differentiation D: block-superdiagonal, one fewer row block out.
BlockBandedMatrix differentiation(const ParameterTriple& src, Direction dir, int col_blocks);

/// Weighted differentiation W (derivative of weight times expansion):
/// block-subdiagonal, one extra row block out.
BlockBandedMatrix weighted_differentiation(const ParameterTriple& src, Direction dir, int col_blocks);

/// Entries of the coefficient-space multiplication operators (the
/// transposed Jacobi operators) for column (n,k): the expansions of
/// x*P_{n,k} and y*P_{n,k}.  Derived from the three-term recurrences of
/// the two univariate tensor factors, valid for every nonnegative triple.
struct JacobiColumn {
    // x*P_{n,k} = x_dn*P_{n-1,k} + x_diag*P_{n,k} + x_up*P_{n+1,k}
    double x_dn = 0.0, x_diag = 0.0, x_up = 0.0;
    // y*P_{n,k} = sum over dn in {-1,0,1}, dk in {-1,0,1} of
    //   y[dn+1][dk+1] * P_{n+dn, k+dk}
    double y[3][3] = {};
};
JacobiColumn jacobi_column(const ParameterTriple& p, int n, int k);

/// Multiplication-by-x and multiplication-by-y operators on coefficient
/// vectors (J_x^T and J_y^T), truncated to N+1 column blocks and N+2 row
/// blocks.  x-operator: block-tridiagonal with diagonal blocks;
/// y-operator: block-tridiagonal with tridiagonal blocks.
struct JacobiOperators {
    BlockBandedMatrix mult_x;
    BlockBandedMatrix mult_y;
};
JacobiOperators jacobi_operators(const ParameterTriple& p, int N);

/// Laplacian from P^(0,0,0) coefficients to P^(2,2,2) coefficients.
/// Columns 0..N, rows 0..N-2; declared profile (2,4)/(0,4).
BlockBandedMatrix laplacian_strong(int N);

/// Laplacian from xyz*P^(1,1,1) coefficients to P^(1,1,1) coefficients.
/// Columns 0..N, rows 0..N+1; declared profile (1,2)/(2,2).
BlockBandedMatrix laplacian_weighted(int N);

/// Laplacian from (xyz)^2*P^(2,2,2) coefficients to P^(0,0,0)
/// coefficients.  Columns 0..N, rows 0..N+4.
BlockBandedMatrix laplacian_w2(int N);

/// Squared Laplacian from (xyz)^2*P^(2,2,2) to P^(2,2,2) coefficients.
/// Columns 0..N, rows 0..N+2.
BlockBandedMatrix biharmonic(int N);

/// Weighted Helmholtz operator Delta_W + k^2 S M_v L acting on
/// xyz*P^(1,1,1) coefficients.  v must be supplied as P^(0,0,0)
/// coefficients (deg(v) <= N); columns 0..N, rows 0..N+1.
BlockBandedMatrix helmholtz_weighted(const CoefficientVector& v_coeffs, double k, int N);

/// Memoizing factory for single-step operators; safe for concurrent use.
/// Named compositions and multi-element assembly go through this to avoid
/// rebuilding identical factors.
class OperatorFactory {
public:
    const BlockBandedMatrix& conversion(const ParameterTriple& src, Axis which, int col_blocks);
    const BlockBandedMatrix& lowering(const ParameterTriple& src, Axis which, int col_blocks);
    const BlockBandedMatrix& differentiation(const ParameterTriple& src, Direction dir, int col_blocks);
    const BlockBandedMatrix& weighted_differentiation(const ParameterTriple& src, Direction dir, int col_blocks);

private:
    using Key = std::tuple<int, int, int, int, int, int>;  // kind, axis/dir, a, b, c, col_blocks
    const BlockBandedMatrix& get(Key key, const std::function<BlockBandedMatrix()>& build);
    std::mutex mutex_;
    std::map<Key, BlockBandedMatrix> cache_;
};

/// Composition of single raises from src to dst (every component of dst
/// >= src); any raise order yields the same operator.
BlockBandedMatrix conversion_path(const ParameterTriple& src, const ParameterTriple& dst, int col_blocks);

/// Composition of single lowerings from src down to dst; represents
/// multiplication by x^(da) y^(db) z^(dc) with d = src - dst.
BlockBandedMatrix lowering_path(const ParameterTriple& src, const ParameterTriple& dst, int col_blocks);

}  // namespace trispectral::triops
