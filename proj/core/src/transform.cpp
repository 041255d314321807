#include "trispectral/transform.hpp"

#include <cmath>
#include <stdexcept>

namespace trispectral::transform {

using jacobi1d::JacobiParams1D;
using triops::ParameterTriple;

TriangleGrid make_grid(const ParameterTriple& p, int N, int pad) {
    if (N < 0 || pad < 0) throw std::invalid_argument("make_grid: bad sizes");
    const int m = N + 1 + pad;
    TriangleGrid grid;
    grid.p = p;
    grid.x_rule = jacobi1d::gauss_rule({static_cast<double>(p.b + p.c + 1), static_cast<double>(p.a)}, m);
    grid.t_rule = jacobi1d::gauss_rule({static_cast<double>(p.c), static_cast<double>(p.b)}, m);
    return grid;
}

double norm_constant(const ParameterTriple& p, int n, int k) {
    const JacobiParams1D ft{static_cast<double>(p.c), static_cast<double>(p.b)};
    const JacobiParams1D fx{static_cast<double>(2 * k + p.b + p.c + 1), static_cast<double>(p.a)};
    return jacobi1d::norm_squared_1d_unchecked(ft, k) * jacobi1d::norm_squared_1d_unchecked(fx, n - k);
}

NormalizationTable norm_constants(const ParameterTriple& p, int N) {
    NormalizationTable table;
    table.d.resize(N + 1);
    for (int n = 0; n <= N; ++n) {
        table.d[n].resize(n + 1);
        for (int k = 0; k <= n; ++k) table.d[n][k] = norm_constant(p, n, k);
    }
    return table;
}

CoefficientVector analysis_from_grid(const TriangleGrid& grid, std::span<const double> values, int N) {
    const int nx = grid.num_x(), nt = grid.num_t();
    if (static_cast<int>(values.size()) != nx * nt) throw std::invalid_argument("analysis_from_grid: value count");
    for (double v : values) {
        if (!std::isfinite(v)) throw std::invalid_argument("analysis_from_grid: non-finite sample");
    }
    const ParameterTriple p = grid.p;
    const JacobiParams1D ft{static_cast<double>(p.c), static_cast<double>(p.b)};

    // Inner transform: g[k][i] = sum_j tw_j Pt_k(t_j) f(x_i, (1-x_i) t_j).
    std::vector<std::vector<double>> pt(nt);
    for (int j = 0; j < nt; ++j) pt[j] = jacobi1d::eval_all_1d(ft, N, grid.t_rule.nodes[j]);
    std::vector<std::vector<double>> g(N + 1, std::vector<double>(nx, 0.0));
    std::vector<double> terms(nt);
    for (int i = 0; i < nx; ++i) {
        for (int k = 0; k <= N; ++k) {
            for (int j = 0; j < nt; ++j) terms[j] = grid.t_rule.weights[j] * pt[j][k] * values[i * nt + j];
            g[k][i] = pairwise_sum(terms);
        }
    }

    // Outer transform per k with the (1-x)^k factor folded into the integrand.
    CoefficientVector out = CoefficientVector::zeros({BasisFamily::P, p.a, p.b, p.c}, N);
    std::vector<double> h(nx), xt(nx);
    std::vector<std::vector<double>> px(nx);
    for (int k = 0; k <= N; ++k) {
        const JacobiParams1D fx{static_cast<double>(2 * k + p.b + p.c + 1), static_cast<double>(p.a)};
        for (int i = 0; i < nx; ++i) {
            px[i] = jacobi1d::eval_all_1d(fx, N - k, grid.x_rule.nodes[i]);
            h[i] = grid.x_rule.weights[i] * std::pow(1.0 - grid.x_rule.nodes[i], k) * g[k][i];
        }
        for (int n = k; n <= N; ++n) {
            for (int i = 0; i < nx; ++i) xt[i] = px[i][n - k] * h[i];
            out.at(n, k) = pairwise_sum(xt) / norm_constant(p, n, k);
        }
    }
    return out;
}

CoefficientVector analysis(const ParameterTriple& p, const std::function<double(double, double)>& f, int N,
                           int pad) {
    const TriangleGrid grid = make_grid(p, N, pad);
    const int nx = grid.num_x(), nt = grid.num_t();
    std::vector<double> values(static_cast<size_t>(nx) * nt);
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < nt; ++j) values[i * nt + j] = f(grid.point_x(i), grid.point_y(i, j));
    }
    return analysis_from_grid(grid, values, N);
}

std::vector<double> synthesis(const ParameterTriple& p, const CoefficientVector& coeffs, const TriangleGrid& grid) {
    const int nx = grid.num_x(), nt = grid.num_t();
    const int N = coeffs.degree();
    const JacobiParams1D ft{static_cast<double>(p.c), static_cast<double>(p.b)};
    std::vector<double> values(static_cast<size_t>(nx) * nt, 0.0);
    // Per x-node: 1-D sums in x per k, then a weighted t expansion.
    std::vector<double> sk(N + 1);
    std::vector<double> xcoeffs;
    for (int i = 0; i < nx; ++i) {
        const double xi = grid.x_rule.nodes[i];
        double wk = 1.0;  // (1-x)^k
        for (int k = 0; k <= N; ++k) {
            const JacobiParams1D fx{static_cast<double>(2 * k + p.b + p.c + 1), static_cast<double>(p.a)};
            xcoeffs.assign(N - k + 1, 0.0);
            for (int n = k; n <= N; ++n) xcoeffs[n - k] = coeffs.at(n, k);
            sk[k] = wk * jacobi1d::eval_clenshaw_1d(fx, xcoeffs, xi);
            wk *= 1.0 - xi;
        }
        for (int j = 0; j < nt; ++j) {
            values[i * nt + j] = jacobi1d::eval_clenshaw_1d(ft, sk, grid.t_rule.nodes[j]);
        }
    }
    return values;
}

CoefficientVector reexpand(const CoefficientVector& src, const ParameterTriple& dst, int N, int pad) {
    if (src.basis().family != BasisFamily::P) throw std::invalid_argument("reexpand: source must be a P family");
    const ParameterTriple src_p{src.basis().a, src.basis().b, src.basis().c};
    const TriangleGrid grid = make_grid(dst, std::max(N, src.degree()), pad);
    const std::vector<double> values = synthesis(src_p, src, grid);
    CoefficientVector out = analysis_from_grid(grid, values, std::max(N, src.degree()));
    return out;
}

std::vector<double> legendre_edge_transform(const std::function<double(double)>& g, int N, int pad) {
    const jacobi1d::JacobiParams1D leg{0.0, 0.0};
    const jacobi1d::QuadratureRule1D rule = jacobi1d::gauss_rule(leg, N + 1 + pad);
    const int m = static_cast<int>(rule.nodes.size());
    std::vector<std::vector<double>> pv(m);
    std::vector<double> gv(m);
    for (int i = 0; i < m; ++i) {
        pv[i] = jacobi1d::eval_all_1d(leg, N, rule.nodes[i]);
        gv[i] = g(rule.nodes[i]);
        if (!std::isfinite(gv[i])) throw std::invalid_argument("legendre_edge_transform: non-finite sample");
    }
    std::vector<double> coeffs(N + 1), terms(m);
    for (int n = 0; n <= N; ++n) {
        for (int i = 0; i < m; ++i) terms[i] = rule.weights[i] * pv[i][n] * gv[i];
        coeffs[n] = (2.0 * n + 1.0) * pairwise_sum(terms);
    }
    return coeffs;
}

}  // namespace trispectral::transform
