#include "trispectral/dense.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace trispectral {

std::vector<double> DenseMatrix::matvec(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != cols_) throw std::invalid_argument("DenseMatrix::matvec size mismatch");
    std::vector<double> y(rows_, 0.0);
    for (int i = 0; i < rows_; ++i) {
        const double* r = row(i);
        double s = 0.0;
        for (int j = 0; j < cols_; ++j) s += r[j] * x[j];
        y[i] = s;
    }
    return y;
}

namespace {

// Householder reflector for x (length len, x[0] = alpha): returns tau and
// writes v (v[0] implicit 1) over x[1:], beta over x[0].
double make_householder(double* x, int len) {
    double sigma = 0.0;
    for (int i = 1; i < len; ++i) sigma += x[i] * x[i];
    const double alpha = x[0];
    if (sigma == 0.0) return 0.0;
    const double mu = std::sqrt(alpha * alpha + sigma);
    const double beta = alpha <= 0.0 ? mu : -mu;
    const double tau = (beta - alpha) / beta;
    const double inv = 1.0 / (alpha - beta);
    for (int i = 1; i < len; ++i) x[i] *= inv;
    x[0] = beta;
    return tau;
}

constexpr int kPanel = 32;

}  // namespace

LeastSquaresResult least_squares_solve(DenseMatrix a, std::vector<double> b) {
    const int m = a.rows(), n = a.cols();
    if (static_cast<int>(b.size()) != m) throw std::invalid_argument("least_squares_solve: rhs size mismatch");
    if (m < n) throw std::invalid_argument("least_squares_solve: needs rows >= cols");

    std::vector<double> V;      // panel, column-major, ld = mm
    std::vector<double> T;      // w x w, row-major
    std::vector<double> W;      // w x ntrail, row-major
    std::vector<double> tau(kPanel), z(kPanel), wb(kPanel);

    for (int j0 = 0; j0 < n; j0 += kPanel) {
        const int w = std::min(kPanel, n - j0);
        const int mm = m - j0;
        V.assign(static_cast<size_t>(mm) * w, 0.0);
        for (int r = 0; r < mm; ++r) {
            const double* arow = a.row(j0 + r) + j0;
            for (int k = 0; k < w; ++k) V[static_cast<size_t>(k) * mm + r] = arow[k];
        }
        // Unblocked QR of the panel.
        for (int k = 0; k < w; ++k) {
            double* xk = V.data() + static_cast<size_t>(k) * mm + k;
            tau[k] = make_householder(xk, mm - k);
            if (tau[k] != 0.0) {
                for (int c = k + 1; c < w; ++c) {
                    double* xc = V.data() + static_cast<size_t>(c) * mm + k;
                    double dot = xc[0];
                    for (int i = 1; i < mm - k; ++i) dot += xk[i] * xc[i];
                    dot *= tau[k];
                    xc[0] -= dot;
                    for (int i = 1; i < mm - k; ++i) xc[i] -= dot * xk[i];
                }
            }
        }
        // Write the R panel back, then normalize V (unit diagonal, zero above).
        for (int k = 0; k < w; ++k) {
            double* arow = a.row(j0 + k) + j0;
            for (int c = 0; c < w; ++c) arow[c] = c >= k ? V[static_cast<size_t>(c) * mm + k] : 0.0;
        }
        for (int k = 0; k < w; ++k) {
            for (int r = 0; r < k; ++r) V[static_cast<size_t>(k) * mm + r] = 0.0;
            V[static_cast<size_t>(k) * mm + k] = 1.0;
        }
        // T for the compact WY form: T[k][k] = tau_k, T[0:k,k] = -tau_k T V^T v_k.
        T.assign(static_cast<size_t>(w) * w, 0.0);
        for (int k = 0; k < w; ++k) {
            for (int l = 0; l < k; ++l) {
                double s = 0.0;
                const double* vl = V.data() + static_cast<size_t>(l) * mm;
                const double* vk = V.data() + static_cast<size_t>(k) * mm;
                for (int r = k; r < mm; ++r) s += vl[r] * vk[r];
                z[l] = s;
            }
            for (int l = 0; l < k; ++l) {
                double s = 0.0;
                for (int q = l; q < k; ++q) s += T[static_cast<size_t>(l) * w + q] * z[q];
                T[static_cast<size_t>(l) * w + k] = -tau[k] * s;
            }
            T[static_cast<size_t>(k) * w + k] = tau[k];
        }
        // Apply (I - V T^T V^T) to the trailing columns and the rhs.
        const int ntrail = n - j0 - w;
        if (ntrail > 0) {
            W.assign(static_cast<size_t>(w) * ntrail, 0.0);
            for (int r = 0; r < mm; ++r) {
                const double* arow = a.row(j0 + r) + j0 + w;
                for (int k = 0; k < w; ++k) {
                    const double vk = V[static_cast<size_t>(k) * mm + r];
                    if (vk == 0.0) continue;
                    double* wrow = W.data() + static_cast<size_t>(k) * ntrail;
                    for (int j = 0; j < ntrail; ++j) wrow[j] += vk * arow[j];
                }
            }
            for (int k = w - 1; k >= 0; --k) {
                double* wk = W.data() + static_cast<size_t>(k) * ntrail;
                const double tkk = T[static_cast<size_t>(k) * w + k];
                for (int j = 0; j < ntrail; ++j) wk[j] *= tkk;
                for (int l = 0; l < k; ++l) {
                    const double t = T[static_cast<size_t>(l) * w + k];
                    if (t == 0.0) continue;
                    const double* wl = W.data() + static_cast<size_t>(l) * ntrail;
                    for (int j = 0; j < ntrail; ++j) wk[j] += t * wl[j];
                }
            }
            for (int r = 0; r < mm; ++r) {
                double* arow = a.row(j0 + r) + j0 + w;
                for (int k = 0; k < w; ++k) {
                    const double vk = V[static_cast<size_t>(k) * mm + r];
                    if (vk == 0.0) continue;
                    const double* wrow = W.data() + static_cast<size_t>(k) * ntrail;
                    for (int j = 0; j < ntrail; ++j) arow[j] -= vk * wrow[j];
                }
            }
        }
        for (int k = 0; k < w; ++k) {
            double s = 0.0;
            const double* vk = V.data() + static_cast<size_t>(k) * mm;
            for (int r = k; r < mm; ++r) s += vk[r] * b[j0 + r];
            wb[k] = s;
        }
        for (int k = w - 1; k >= 0; --k) {
            wb[k] *= T[static_cast<size_t>(k) * w + k];
            for (int l = 0; l < k; ++l) wb[k] += T[static_cast<size_t>(l) * w + k] * wb[l];
        }
        for (int r = 0; r < mm; ++r) {
            double s = 0.0;
            for (int k = 0; k < w; ++k) s += V[static_cast<size_t>(k) * mm + r] * wb[k];
            b[j0 + r] -= s;
        }
    }

    double max_diag = 0.0;
    for (int j = 0; j < n; ++j) max_diag = std::max(max_diag, std::abs(a(j, j)));
    const double tol = max_diag * std::numeric_limits<double>::epsilon() * 4.0;
    LeastSquaresResult res;
    res.x.assign(n, 0.0);
    for (int j = n - 1; j >= 0; --j) {
        if (!(std::abs(a(j, j)) > tol)) {
            throw std::runtime_error("least_squares_solve: rank deficiency detected at column " + std::to_string(j));
        }
        double s = b[j];
        const double* arow = a.row(j);
        for (int k = j + 1; k < n; ++k) s -= arow[k] * res.x[k];
        res.x[j] = s / a(j, j);
    }
    double rr = 0.0;
    for (int i = n; i < m; ++i) rr += b[i] * b[i];
    res.residual_norm = std::sqrt(rr);
    return res;
}

std::vector<double> dense_lu_solve(DenseMatrix a, std::vector<double> b) {
    const int n = a.rows();
    if (a.cols() != n || static_cast<int>(b.size()) != n) throw std::invalid_argument("dense_lu_solve: not square");
    for (int j = 0; j < n; ++j) {
        int piv = j;
        double pmax = std::abs(a(j, j));
        for (int i = j + 1; i < n; ++i) {
            if (std::abs(a(i, j)) > pmax) {
                pmax = std::abs(a(i, j));
                piv = i;
            }
        }
        if (pmax == 0.0) throw std::runtime_error("dense_lu_solve: singular at pivot " + std::to_string(j));
        if (piv != j) {
            for (int c = 0; c < n; ++c) std::swap(a(j, c), a(piv, c));
            std::swap(b[j], b[piv]);
        }
        for (int i = j + 1; i < n; ++i) {
            const double l = a(i, j) / a(j, j);
            if (l == 0.0) continue;
            a(i, j) = l;
            double* ri = a.row(i);
            const double* rj = a.row(j);
            for (int c = j + 1; c < n; ++c) ri[c] -= l * rj[c];
            b[i] -= l * b[j];
        }
    }
    std::vector<double> x(n);
    for (int j = n - 1; j >= 0; --j) {
        double s = b[j];
        const double* rj = a.row(j);
        for (int k = j + 1; k < n; ++k) s -= rj[k] * x[k];
        x[j] = s / a(j, j);
    }
    return x;
}

}  // namespace trispectral
