#pragma once

#include <span>
#include <vector>

namespace trispectral::jacobi1d {

/// Parameters of a shifted Jacobi family on [0,1].
///
/// The family p_k(x) = P_k^{(alpha,beta)}(2x-1) is orthogonal with respect
/// to the weight (1-x)^alpha * x^beta on [0,1].  Polynomials are kept
/// unnormalized; norms are supplied separately by norm_squared().
struct JacobiParams1D {
    double alpha = 0.0;  ///< exponent of the (1-x) factor
    double beta = 0.0;   ///< exponent of the x factor
};

/// Coefficients of the multiplication recurrence
///   x p_k(x) = c[k-1] p_{k-1}(x) + a[k] p_k(x) + b[k] p_{k+1}(x),
/// indexed so that a,b,c all have length n_max+1 (c[k] couples p_{k+1}
/// down to p_k).
struct ThreeTermCoeffs {
    std::vector<double> a;
    std::vector<double> b;
    std::vector<double> c;
};

/// Gauss rule on (0,1) for the weight (1-x)^alpha x^beta.
struct QuadratureRule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Recurrence coefficients of the shifted family, exact closed forms.
///
/// The degenerate k = 0 case (where the generic formula for a_0 is 0/0
/// when alpha+beta = 0) uses the limit value a_0 = (beta+1)/(alpha+beta+2),
/// which is the coefficient read off p_1(x) = (alpha+beta+2)x - (beta+1).
ThreeTermCoeffs three_term_coeffs(const JacobiParams1D& p, int n_max);

/// Single recurrence coefficients without building the whole table.
double coeff_a(const JacobiParams1D& p, int k);
double coeff_b(const JacobiParams1D& p, int k);
double coeff_c(const JacobiParams1D& p, int k);

/// Clenshaw evaluation of sum_k coeffs[k] p_k(x) by back substitution on
/// the transposed recurrence system.
double eval_clenshaw_1d(const JacobiParams1D& p, std::span<const double> coeffs, double x);

/// Values of p_0..p_n at x by forward recurrence.
std::vector<double> eval_all_1d(const JacobiParams1D& p, int n, double x);

/// Values and first derivatives of p_0..p_n at x by forward recurrence.
void eval_all_with_derivative_1d(const JacobiParams1D& p, int n, double x,
                                 std::vector<double>& values,
                                 std::vector<double>& derivatives);

/// n-point Gauss rule via Golub-Welsch on the symmetrized recurrence.
/// Throws std::runtime_error if the tridiagonal eigensolver fails to
/// converge (a defect, never silently ignored).
QuadratureRule1D gauss_rule(const JacobiParams1D& p, int n);

/// Integral of (1-x)^alpha x^beta p_k(x)^2 over [0,1] in closed form.
/// Rejects |alpha| or |beta| larger than 100.
double norm_squared_1d(const JacobiParams1D& p, int k);

/// Same closed form without the magnitude guard, for the internal tensor
/// factors whose first parameter grows like twice the degree.
double norm_squared_1d_unchecked(const JacobiParams1D& p, int k);

/// Total mass of the weight, i.e. the Beta function B(beta+1, alpha+1).
double weight_mass(const JacobiParams1D& p);

}  // namespace trispectral::jacobi1d
