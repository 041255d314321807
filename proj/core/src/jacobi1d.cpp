#include "trispectral/jacobi1d.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace trispectral::jacobi1d {

namespace {

void check_params(const JacobiParams1D& p) {
    if (!(p.alpha > -1.0) || !(p.beta > -1.0)) {
        throw std::invalid_argument("jacobi1d: parameters must satisfy alpha > -1 and beta > -1, got alpha=" +
                                    std::to_string(p.alpha) + " beta=" + std::to_string(p.beta));
    }
}

}  // namespace

double coeff_a(const JacobiParams1D& p, int k) {
    const double al = p.alpha, be = p.beta;
    if (k == 0) return (be + 1.0) / (al + be + 2.0);
    const double s = 2.0 * k + al + be;
    return ((be * be - al * al) / (s * (s + 2.0)) + 1.0) / 2.0;
}

double coeff_b(const JacobiParams1D& p, int k) {
    const double al = p.alpha, be = p.beta;
    if (k == 0) return 1.0 / (al + be + 2.0);
    const double s = 2.0 * k + al + be;
    return (k + 1.0) * (k + al + be + 1.0) / ((s + 1.0) * (s + 2.0));
}

double coeff_c(const JacobiParams1D& p, int k) {
    const double al = p.alpha, be = p.beta;
    const double s = 2.0 * k + 2.0 + al + be;
    return (k + 1.0 + al) * (k + 1.0 + be) / (s * (s + 1.0));
}

ThreeTermCoeffs three_term_coeffs(const JacobiParams1D& p, int n_max) {
    check_params(p);
    if (n_max < 0) throw std::invalid_argument("jacobi1d: n_max must be nonnegative");
    ThreeTermCoeffs t;
    t.a.resize(n_max + 1);
    t.b.resize(n_max + 1);
    t.c.resize(n_max + 1);
    for (int k = 0; k <= n_max; ++k) {
        t.a[k] = coeff_a(p, k);
        t.b[k] = coeff_b(p, k);
        t.c[k] = coeff_c(p, k);
    }
    return t;
}

double eval_clenshaw_1d(const JacobiParams1D& p, std::span<const double> coeffs, double x) {
    check_params(p);
    if (coeffs.empty()) throw std::invalid_argument("jacobi1d: empty coefficient vector");
    const int n = static_cast<int>(coeffs.size()) - 1;
    double v1 = 0.0, v2 = 0.0;  // v_{k+1}, v_{k+2}
    for (int k = n; k >= 1; --k) {
        const double v = (coeffs[k] + (x - coeff_a(p, k)) * v1 - coeff_c(p, k) * v2) / coeff_b(p, k - 1);
        v2 = v1;
        v1 = v;
    }
    return coeffs[0] + (x - coeff_a(p, 0)) * v1 - coeff_c(p, 0) * v2;
}

std::vector<double> eval_all_1d(const JacobiParams1D& p, int n, double x) {
    check_params(p);
    std::vector<double> v(n + 1);
    v[0] = 1.0;
    if (n == 0) return v;
    double pm1 = 1.0, pk = (x - coeff_a(p, 0)) / coeff_b(p, 0);
    v[1] = pk;
    for (int k = 1; k < n; ++k) {
        const double pn = ((x - coeff_a(p, k)) * pk - coeff_c(p, k - 1) * pm1) / coeff_b(p, k);
        pm1 = pk;
        pk = pn;
        v[k + 1] = pk;
    }
    return v;
}

void eval_all_with_derivative_1d(const JacobiParams1D& p, int n, double x,
                                 std::vector<double>& values, std::vector<double>& derivatives) {
    check_params(p);
    values.assign(n + 1, 0.0);
    derivatives.assign(n + 1, 0.0);
    values[0] = 1.0;
    if (n == 0) return;
    values[1] = (x - coeff_a(p, 0)) / coeff_b(p, 0);
    derivatives[1] = 1.0 / coeff_b(p, 0);
    for (int k = 1; k < n; ++k) {
        const double bk = coeff_b(p, k), ak = coeff_a(p, k), ck = coeff_c(p, k - 1);
        values[k + 1] = ((x - ak) * values[k] - ck * values[k - 1]) / bk;
        derivatives[k + 1] = (values[k] + (x - ak) * derivatives[k] - ck * derivatives[k - 1]) / bk;
    }
}

double norm_squared_1d(const JacobiParams1D& p, int k) {
    if (std::abs(p.alpha) > 100.0 || std::abs(p.beta) > 100.0) {
        throw std::invalid_argument("jacobi1d: |alpha|,|beta| > 100 rejected (norm overflow)");
    }
    return norm_squared_1d_unchecked(p, k);
}

double norm_squared_1d_unchecked(const JacobiParams1D& p, int k) {
    check_params(p);
    if (k < 0) throw std::invalid_argument("jacobi1d: degree must be nonnegative");
    const double al = p.alpha, be = p.beta;
    if (k == 0) {
        // Gamma(a+1)Gamma(b+1)/Gamma(a+b+2); avoids the removable pole at a+b = -1.
        return std::exp(std::lgamma(al + 1.0) + std::lgamma(be + 1.0) - std::lgamma(al + be + 2.0));
    }
    const double lg = std::lgamma(k + al + 1.0) + std::lgamma(k + be + 1.0) - std::lgamma(k + al + be + 1.0) -
                      std::lgamma(k + 1.0);
    return std::exp(lg) / (2.0 * k + al + be + 1.0);
}

double weight_mass(const JacobiParams1D& p) { return norm_squared_1d_unchecked(p, 0); }

namespace {

// Implicit-shift QL on a symmetric tridiagonal matrix, accumulating the
// rotations into the row vector z (initially e_0^T).  d and z come out as
// unordered eigenvalues and first eigenvector components.
void tridiag_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
    const int n = static_cast<int>(d.size());
    if (n == 1) return;
    const double eps = std::numeric_limits<double>::epsilon();
    e.resize(n, 0.0);
    for (int l = 0; l < n; ++l) {
        int iter = 0;
        int m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                if (iter++ == 60) {
                    throw std::runtime_error("jacobi1d: symmetric QL eigensolver failed to converge");
                }
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, pp = 0.0;
                int i;
                for (i = m - 1; i >= l; --i) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= pp;
                        e[m] = 0.0;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - pp;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    pp = s * r;
                    d[i + 1] = g + pp;
                    g = c * r - b;
                    f = z[i + 1];
                    z[i + 1] = s * z[i] + c * f;
                    z[i] = c * z[i] - s * f;
                }
                if (r == 0.0 && i >= l) continue;
                d[l] -= pp;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

QuadratureRule1D gauss_rule(const JacobiParams1D& p, int n) {
    check_params(p);
    if (n < 1) throw std::invalid_argument("jacobi1d: gauss rule needs n >= 1");
    std::vector<double> d(n), e(n > 1 ? n - 1 : 0), z(n, 0.0);
    for (int k = 0; k < n; ++k) d[k] = coeff_a(p, k);
    for (int k = 0; k + 1 < n; ++k) e[k] = std::sqrt(coeff_b(p, k) * coeff_c(p, k));
    z[0] = 1.0;
    tridiag_ql(d, e, z);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int i, int j) { return d[i] < d[j]; });

    const double mass = weight_mass(p);
    QuadratureRule1D rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = d[order[i]];
        rule.weights[i] = mass * z[order[i]] * z[order[i]];
    }
    return rule;
}

}  // namespace trispectral::jacobi1d
