#include "trispectral/eval.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace trispectral::eval {

using triops::ParameterTriple;

RecurrenceBlocks recurrence_blocks(const ParameterTriple& p, int n) {
    if (n < 0) throw std::invalid_argument("recurrence_blocks: n >= 0 required");
    RecurrenceBlocks blocks;
    blocks.n = n;
    blocks.ax.assign(n + 1, 0.0);
    blocks.bx.assign(n + 1, 0.0);
    blocks.cx.assign(n + 1, 0.0);
    blocks.ay.assign(n + 1, {0.0, 0.0, 0.0});
    blocks.by.assign(n + 1, {0.0, 0.0, 0.0});
    blocks.cy.assign(n + 2, {0.0, 0.0, 0.0});
    for (int k = 0; k <= n; ++k) {
        const triops::JacobiColumn col = triops::jacobi_column(p, n, k);
        blocks.ax[k] = col.x_diag;
        blocks.bx[k] = col.x_up;
        // A_n^y[k,l] is the P_{n,l} coefficient of y*P_{n,k}; B_n^y[k,l]
        // the P_{n+1,l} coefficient.
        for (int d = -1; d <= 1; ++d) {
            const int l = k + d;
            if (l >= 0 && l <= n) blocks.ay[k][d + 1] = col.y[1][d + 1];
            if (l >= 0 && l <= n + 1) blocks.by[k][d + 1] = col.y[2][d + 1];
        }
    }
    for (int k = 0; k <= n + 1; ++k) {
        const triops::JacobiColumn col = triops::jacobi_column(p, n + 1, k);
        if (k <= n) blocks.cx[k] = col.x_dn;
        for (int d = -1; d <= 1; ++d) {
            const int l = k + d;
            if (l >= 0 && l <= n) blocks.cy[k][d + 1] = col.y[0][d + 1];
        }
    }
    return blocks;
}

PseudoInverse pseudo_inverse(const RecurrenceBlocks& blocks) {
    const int n = blocks.n;
    PseudoInverse inv;
    inv.bx_inv.resize(n + 1);
    for (int j = 0; j <= n; ++j) {
        if (blocks.bx[j] == 0.0) {
            throw std::runtime_error("pseudo_inverse: zero pivot in B_n^x at " + std::to_string(j) +
                                     " (invalid parameter regime)");
        }
        inv.bx_inv[j] = 1.0 / blocks.bx[j];
    }
    const double b2 = blocks.by[n][2];  // B_n^y[n, n+1]
    if (b2 == 0.0) throw std::runtime_error("pseudo_inverse: B_n^y[n,n+1] vanishes (invalid parameter regime)");
    inv.b2_inv = 1.0 / b2;
    inv.b1.assign(n + 1, 0.0);
    // Row chosen so that b1^T B_n^x + b2^{-1} (row n of B_n^y) = e_{n+1}^T.
    if (n >= 1) inv.b1[n - 1] = -inv.b2_inv * blocks.by[n][0] * inv.bx_inv[n - 1];
    inv.b1[n] = -inv.b2_inv * blocks.by[n][1] * inv.bx_inv[n];
#ifndef NDEBUG
    // B_n^+ B_n = I_{n+2} on the two nontrivial columns touched by b1.
    for (int col = std::max(0, n - 1); col <= n + 1; ++col) {
        double dot = 0.0;
        for (int j = 0; j <= n; ++j) {
            double bxv = (j == col) ? blocks.bx[j] : 0.0;
            dot += inv.b1[j] * bxv;
        }
        const int d = col - n;
        if (d >= -1 && d <= 1) dot += inv.b2_inv * blocks.by[n][d + 1];
        assert(std::abs(dot - (col == n + 1 ? 1.0 : 0.0)) < 1e-12);
    }
#endif
    return inv;
}

std::vector<std::vector<double>> forward_recurrence(const ParameterTriple& p, int N, double x, double y) {
    std::vector<std::vector<double>> vals(N + 1);
    vals[0] = {1.0};
    std::vector<double> ux, uy;
    for (int r = 0; r < N; ++r) {
        const RecurrenceBlocks blocks = recurrence_blocks(p, r);
        const PseudoInverse inv = pseudo_inverse(blocks);
        const std::vector<double>& pr = vals[r];
        ux.assign(r + 1, 0.0);
        uy.assign(r + 1, 0.0);
        for (int k = 0; k <= r; ++k) {
            ux[k] = (blocks.ax[k] - x) * pr[k];
            double s = -y * pr[k];
            for (int d = -1; d <= 1; ++d) {
                const int l = k + d;
                if (l >= 0 && l <= r) s += blocks.ay[k][d + 1] * pr[l];
            }
            uy[k] = s;
        }
        if (r >= 1) {
            const RecurrenceBlocks prev = recurrence_blocks(p, r - 1);
            const std::vector<double>& pm = vals[r - 1];
            for (int k = 0; k <= r; ++k) {
                if (k <= r - 1) ux[k] += prev.cx[k] * pm[k];
                double s = 0.0;
                for (int d = -1; d <= 1; ++d) {
                    const int l = k + d;
                    if (l >= 0 && l <= r - 1) s += prev.cy[k][d + 1] * pm[l];
                }
                uy[k] += s;
            }
        }
        std::vector<double> next(r + 2);
        for (int j = 0; j <= r; ++j) next[j] = -inv.bx_inv[j] * ux[j];
        double tail = 0.0;
        for (int j = 0; j <= r; ++j) tail += inv.b1[j] * ux[j];
        tail += inv.b2_inv * uy[r];
        next[r + 1] = -tail;
        vals[r + 1] = std::move(next);
    }
    return vals;
}

double eval_point(const ParameterTriple& p, const CoefficientVector& coeffs, double x, double y) {
    const int N = coeffs.degree();
    if (N < 0) throw std::invalid_argument("eval_point: empty coefficient vector");
    if (N == 0) return coeffs.at(0, 0);
    // Backward substitution on the transposed block-lower-triangular system.
    std::vector<double> v1(coeffs.blocks()[N]);  // v_{c+1}
    std::vector<double> v2;                      // v_{c+2}
    std::vector<double> wx, vc;
    for (int c = N - 1; c >= 0; --c) {
        const RecurrenceBlocks bc = recurrence_blocks(p, c);
        const PseudoInverse ic = pseudo_inverse(bc);
        vc.assign(c + 1, 0.0);
        // w = B_c^{+T} v_{c+1}: x-part length c+1 plus a single y-entry at
        // index c.
        wx.assign(c + 1, 0.0);
        const double vtop = v1[c + 1];
        for (int j = 0; j <= c; ++j) wx[j] = ic.bx_inv[j] * v1[j] + ic.b1[j] * vtop;
        const double wy = ic.b2_inv * vtop;
        // G_c^T w
        for (int j = 0; j <= c; ++j) vc[j] = (bc.ax[j] - x) * wx[j];
        if (c >= 1) vc[c - 1] += bc.ay[c][0] * wy;
        vc[c] += (bc.ay[c][1] - y) * wy;
        // H_{c+1}^T (B_{c+1}^{+T} v_{c+2}); H_{c+1} stacks the level-c C blocks.
        if (c + 1 <= N - 1) {
            const RecurrenceBlocks bn = recurrence_blocks(p, c + 1);
            const PseudoInverse in = pseudo_inverse(bn);
            const double vtop2 = v2[c + 2];
            const double wy2 = in.b2_inv * vtop2;
            for (int j = 0; j <= c; ++j) {
                const double wxj = in.bx_inv[j] * v2[j] + in.b1[j] * vtop2;
                vc[j] += bc.cx[j] * wxj;
            }
            vc[c] += bc.cy[c + 1][0] * wy2;
        }
        for (int j = 0; j <= c; ++j) vc[j] = coeffs.at(c, j) - vc[j];
        v2 = std::move(v1);
        v1 = vc;
    }
    return v1[0];
}

BlockBandedMatrix multiplication_operator(const CoefficientVector& q_coeffs, const ParameterTriple& p, int N) {
    CoefficientVector q = q_coeffs;
    q.trim_trailing_zero_blocks();
    const int d = q.degree();
    if (d > N) throw std::invalid_argument("multiplication_operator: deg(q) exceeds N");
    const int guard = d;
    const int M = N + 1 + guard;  // working truncation in blocks
    const std::vector<int> sizes = degree_graded_sizes(M);

    if (d == 0) {
        return BlockBandedMatrix::identity(degree_graded_sizes(N + 1)).scaled(q.at(0, 0));
    }

    const triops::JacobiOperators jac = triops::jacobi_operators(p, M - 1);
    const BlockBandedMatrix X = jac.mult_x.trimmed(M, M);
    const BlockBandedMatrix Y = jac.mult_y.trimmed(M, M);
    const BlockBandedMatrix I = BlockBandedMatrix::identity(sizes);

    // Operator-valued Clenshaw: the scalar recursion with x,y replaced by
    // left multiplication with the (commuting) truncated operators.
    std::vector<BlockBandedMatrix> v1, v2;  // V_{c+1}, V_{c+2}
    v1.reserve(d + 1);
    for (int j = 0; j <= d; ++j) v1.push_back(I.scaled(q.at(d, j)));
    for (int c = d - 1; c >= 0; --c) {
        const RecurrenceBlocks bc = recurrence_blocks(p, c);
        const PseudoInverse ic = pseudo_inverse(bc);
        std::vector<BlockBandedMatrix> vc;
        vc.reserve(c + 1);
        // W_x[j] = bx_inv[j] V_{c+1}[j] + b1[j] V_{c+1}[c+1]; W_y = b2_inv V_{c+1}[c+1].
        std::vector<BlockBandedMatrix> wxs;
        wxs.reserve(c + 1);
        for (int j = 0; j <= c; ++j) {
            BlockBandedMatrix w = v1[j].scaled(ic.bx_inv[j]);
            if (ic.b1[j] != 0.0) w = add(w, v1[c + 1], 1.0, ic.b1[j]);
            wxs.push_back(std::move(w));
        }
        const BlockBandedMatrix wy = v1[c + 1].scaled(ic.b2_inv);
        for (int j = 0; j <= c; ++j) {
            // t collects the subtracted part: (ax[j] I - X) W_x[j] plus the
            // A^y, Y and C couplings that hit entry j, as in eval_point.
            BlockBandedMatrix t = add(wxs[j].scaled(bc.ax[j]), multiply(X, wxs[j]), 1.0, -1.0);
            if (j == c) {
                t = add(t, wy, 1.0, bc.ay[c][1]);
                t = add(t, multiply(Y, wy), 1.0, -1.0);
            }
            if (j == c - 1) t = add(t, wy, 1.0, bc.ay[c][0]);
            if (c + 1 <= d - 1) {
                const RecurrenceBlocks bn = recurrence_blocks(p, c + 1);
                const PseudoInverse in = pseudo_inverse(bn);
                BlockBandedMatrix wxj = v2[j].scaled(in.bx_inv[j]);
                if (in.b1[j] != 0.0) wxj = add(wxj, v2[c + 2], 1.0, in.b1[j]);
                t = add(t, wxj, 1.0, bc.cx[j]);
                if (j == c) t = add(t, v2[c + 2], 1.0, bc.cy[c + 1][0] * in.b2_inv);
            }
            vc.push_back(add(I, t, q.at(c, j), -1.0));
        }
        v2 = std::move(v1);
        v1 = std::move(vc);
    }
    return v1[0].trimmed(N + 1, N + 1);
}

}  // namespace trispectral::eval
