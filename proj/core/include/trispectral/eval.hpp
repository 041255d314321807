#pragma once

#include <array>
#include <vector>

#include "trispectral/blockbanded.hpp"
#include "trispectral/coefficients.hpp"
#include "trispectral/triops.hpp"

namespace trispectral::eval {

/// The degree-n blocks of the Jacobi operators J_x, J_y of P^(a,b,c):
/// A_n (diagonal coupling), B_n (coupling up to degree n+1) and C_n
/// (coupling from degree n+1 down to n).  The x-blocks are diagonal, the
/// y-blocks tridiagonal; tridiagonal rows are stored as (k, k+d) for
/// d in {-1,0,1}.
struct RecurrenceBlocks {
    int n = 0;
    std::vector<double> ax;                   // A_n^x[k,k], length n+1
    std::vector<double> bx;                   // B_n^x[k,k], length n+1
    std::vector<double> cx;                   // C_n^x[k,k], length n+1
    std::vector<std::array<double, 3>> ay;    // A_n^y[k, k+d], length n+1
    std::vector<std::array<double, 3>> by;    // B_n^y[k, k+d], length n+1
    std::vector<std::array<double, 3>> cy;    // C_n^y[k, k+d], length n+2
};

RecurrenceBlocks recurrence_blocks(const triops::ParameterTriple& p, int n);

/// Structured left-inverse of the stacked B_n = [B_n^x; B_n^y]:
/// B_n^+ B_n = I_{n+2}, applied in O(n).
struct PseudoInverse {
    std::vector<double> bx_inv;  // 1 / B_n^x[j,j], length n+1
    std::vector<double> b1;      // correction row, length n+1 (two trailing nonzeros)
    double b2_inv = 0.0;         // 1 / B_n^y[n, n+1]
};

PseudoInverse pseudo_inverse(const RecurrenceBlocks& blocks);

/// All P_{n,k}(x,y) for n <= N by forward substitution on the
/// block-lower-triangular recurrence system; block n of the result has
/// n+1 entries.
std::vector<std::vector<double>> forward_recurrence(const triops::ParameterTriple& p, int N, double x, double y);

/// Clenshaw evaluation of a P^(a,b,c) expansion at one point, O(N^2).
/// Valid on the whole closed triangle (including the x = 1 vertex line).
double eval_point(const triops::ParameterTriple& p, const CoefficientVector& coeffs, double x, double y);

/// Multiplication operator M_q for a degree-d polynomial q given by
/// P^(a,b,c) coefficients: M_q f = coefficients of q*f.  Built by the
/// operator-valued Clenshaw recurrence with deg(q) guard blocks appended
/// and trimmed.  Returns a square truncation on blocks 0..N.
BlockBandedMatrix multiplication_operator(const CoefficientVector& q_coeffs, const triops::ParameterTriple& p,
                                          int N);

}  // namespace trispectral::eval
