#include "trispectral/triops.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "trispectral/eval.hpp"
#include "trispectral/jacobi1d.hpp"

namespace trispectral::triops {

using jacobi1d::JacobiParams1D;

std::string to_string(const ParameterTriple& t) {
    return "(" + std::to_string(t.a) + "," + std::to_string(t.b) + "," + std::to_string(t.c) + ")";
}

namespace {

void require_nonnegative(const ParameterTriple& t, const char* what) {
    if (t.a < 0 || t.b < 0 || t.c < 0) {
        throw std::invalid_argument(std::string(what) + ": triple " + to_string(t) + " has a negative parameter");
    }
}

// Emit helper enforcing the index conventions: P_{m,l} exists only for
// 0 <= l <= m; terms falling outside simply drop.
struct ColumnEmitter {
    BlockBandedMatrix& out;
    int n, k;
    void operator()(int m, int l, double value) const {
        if (l < 0 || m < 0 || l > m || m >= out.num_row_blocks() || value == 0.0) return;
        out.add_at(m, n, l, k, value);
    }
};

}  // namespace

ParameterTriple conversion_target(const ParameterTriple& src, Axis which) {
    switch (which) {
        case Axis::a: return {src.a + 1, src.b, src.c};
        case Axis::b: return {src.a, src.b + 1, src.c};
        case Axis::c: return {src.a, src.b, src.c + 1};
    }
    throw std::logic_error("bad axis");
}

ParameterTriple lowering_target(const ParameterTriple& src, Axis which) {
    switch (which) {
        case Axis::a: return {src.a - 1, src.b, src.c};
        case Axis::b: return {src.a, src.b - 1, src.c};
        case Axis::c: return {src.a, src.b, src.c - 1};
    }
    throw std::logic_error("bad axis");
}

ParameterTriple differentiation_target(const ParameterTriple& src, Direction dir) {
    switch (dir) {
        case Direction::x: return {src.a + 1, src.b, src.c + 1};
        case Direction::y: return {src.a, src.b + 1, src.c + 1};
        case Direction::z: return {src.a + 1, src.b + 1, src.c};
    }
    throw std::logic_error("bad direction");
}

ParameterTriple weighted_differentiation_target(const ParameterTriple& src, Direction dir) {
    switch (dir) {
        case Direction::x: return {src.a - 1, src.b, src.c - 1};
        case Direction::y: return {src.a, src.b - 1, src.c - 1};
        case Direction::z: return {src.a - 1, src.b - 1, src.c};
    }
    throw std::logic_error("bad direction");
}

BlockBandedMatrix conversion(const ParameterTriple& src, Axis which, int col_blocks) {
    require_nonnegative(src, "conversion");
    const double a = src.a, b = src.b, c = src.c;
    const BlockProfile prof = which == Axis::a ? BlockProfile{0, 1, 0, 0} : BlockProfile{0, 1, 0, 1};
    BlockBandedMatrix out = BlockBandedMatrix::degree_graded(col_blocks, col_blocks, prof);
    for (int n = 0; n < col_blocks; ++n) {
        for (int k = 0; k <= n; ++k) {
            ColumnEmitter emit{out, n, k};
            if (which == Axis::a) {
                const double den = 2 * n + a + b + c + 2;
                emit(n, k, (n + k + a + b + c + 2) / den);
                emit(n - 1, k, (n + k + b + c + 1) / den);
            } else if (which == Axis::b) {
                const double den = (2 * n + a + b + c + 2) * (2 * k + b + c + 1);
                emit(n, k, (n + k + a + b + c + 2) * (k + b + c + 1) / den);
                emit(n - 1, k, -(n - k + a) * (k + b + c + 1) / den);
                emit(n - 1, k - 1, (k + c) * (n + k + b + c + 1) / den);
                emit(n, k - 1, -(k + c) * (n - k + 1) / den);
            } else {
                const double den = (2 * n + a + b + c + 2) * (2 * k + b + c + 1);
                emit(n, k, (n + k + a + b + c + 2) * (k + b + c + 1) / den);
                emit(n - 1, k, -(n - k + a) * (k + b + c + 1) / den);
                emit(n - 1, k - 1, -(k + b) * (n + k + b + c + 1) / den);
                emit(n, k - 1, (k + b) * (n - k + 1) / den);
            }
        }
    }
    return out;
}

BlockBandedMatrix lowering(const ParameterTriple& src, Axis which, int col_blocks) {
    require_nonnegative(src, "lowering");
    const ParameterTriple dst = lowering_target(src, which);
    if (dst.a < 0 || dst.b < 0 || dst.c < 0) {
        throw std::invalid_argument("lowering: cannot lower a zero parameter of " + to_string(src));
    }
    const double a = src.a, b = src.b, c = src.c;
    const BlockProfile prof = which == Axis::a ? BlockProfile{1, 0, 0, 0} : BlockProfile{1, 0, 1, 0};
    BlockBandedMatrix out = BlockBandedMatrix::degree_graded(col_blocks + 1, col_blocks, prof);
    for (int n = 0; n < col_blocks; ++n) {
        for (int k = 0; k <= n; ++k) {
            ColumnEmitter emit{out, n, k};
            if (which == Axis::a) {
                const double den = 2 * n + a + b + c + 2;
                emit(n, k, (n - k + a) / den);
                emit(n + 1, k, (n - k + 1) / den);
            } else if (which == Axis::b) {
                const double den = (2 * k + b + c + 1) * (2 * n + a + b + c + 2);
                emit(n, k, (k + b) * (n + k + b + c + 1) / den);
                emit(n, k + 1, -(k + 1) * (n - k + a) / den);
                emit(n + 1, k, -(k + b) * (n - k + 1) / den);
                emit(n + 1, k + 1, (k + 1) * (n + k + a + b + c + 2) / den);
            } else {
                const double den = (2 * k + b + c + 1) * (2 * n + a + b + c + 2);
                emit(n, k, (k + c) * (n + k + b + c + 1) / den);
                emit(n, k + 1, (k + 1) * (n - k + a) / den);
                emit(n + 1, k, -(k + c) * (n - k + 1) / den);
                emit(n + 1, k + 1, -(k + 1) * (n + k + a + b + c + 2) / den);
            }
        }
    }
    return out;
}

BlockBandedMatrix differentiation(const ParameterTriple& src, Direction dir, int col_blocks) {
    require_nonnegative(src, "differentiation");
    const double a = src.a, b = src.b, c = src.c;
    BlockProfile prof{-1, 1, 0, 1};
    if (dir == Direction::y) prof = {-1, 1, -1, 1};
    BlockBandedMatrix out = BlockBandedMatrix::degree_graded(std::max(col_blocks - 1, 0), col_blocks, prof);
    for (int n = 0; n < col_blocks; ++n) {
        for (int k = 0; k <= n; ++k) {
            ColumnEmitter emit{out, n, k};
            const double pre = 2 * k + b + c + 1;
            if (dir == Direction::x) {
                emit(n - 1, k, (n + k + a + b + c + 2) * (k + b + c + 1) / pre);
                emit(n - 1, k - 1, (k + b) * (n + k + b + c + 1) / pre);
            } else if (dir == Direction::y) {
                emit(n - 1, k - 1, k + b + c + 1);
            } else {
                emit(n - 1, k, -(n + k + a + b + c + 2) * (k + b + c + 1) / pre);
                emit(n - 1, k - 1, (k + c) * (n + k + b + c + 1) / pre);
            }
        }
    }
    return out;
}

BlockBandedMatrix weighted_differentiation(const ParameterTriple& src, Direction dir, int col_blocks) {
    require_nonnegative(src, "weighted_differentiation");
    const ParameterTriple dst = weighted_differentiation_target(src, dir);
    if (dst.a < 0 || dst.b < 0 || dst.c < 0) {
        throw std::invalid_argument("weighted_differentiation: illegal parameter decrement from " + to_string(src));
    }
    const double a = src.a, b = src.b, c = src.c;
    BlockProfile prof{1, -1, 1, 0};
    if (dir == Direction::y) prof = {1, -1, 1, -1};
    BlockBandedMatrix out = BlockBandedMatrix::degree_graded(col_blocks + 1, col_blocks, prof);
    for (int n = 0; n < col_blocks; ++n) {
        for (int k = 0; k <= n; ++k) {
            ColumnEmitter emit{out, n, k};
            const double pre = 2 * k + b + c + 1;
            if (dir == Direction::x) {
                emit(n + 1, k, -(k + c) * (n - k + 1) / pre);
                emit(n + 1, k + 1, -(k + 1) * (n - k + a) / pre);
            } else if (dir == Direction::y) {
                emit(n + 1, k + 1, -(k + 1.0));
            } else {
                emit(n + 1, k, (k + b) * (n - k + 1) / pre);
                emit(n + 1, k + 1, -(k + 1) * (n - k + a) / pre);
            }
        }
    }
    return out;
}

JacobiColumn jacobi_column(const ParameterTriple& p, int n, int k) {
    require_nonnegative(p, "jacobi_column");
    const int m = n - k;
    const double A = 2 * k + p.b + p.c + 1;
    const JacobiParams1D fx{A, static_cast<double>(p.a)};
    const JacobiParams1D ft{static_cast<double>(p.c), static_cast<double>(p.b)};

    JacobiColumn col;
    col.x_diag = jacobi1d::coeff_a(fx, m);
    col.x_up = jacobi1d::coeff_b(fx, m);
    if (m >= 1) col.x_dn = jacobi1d::coeff_c(fx, m - 1);

    const double a = p.a;
    const double ta = jacobi1d::coeff_a(ft, k);
    const double tb = jacobi1d::coeff_b(ft, k);

    // k+1 line: raise the (1-x)-exponent of the x-factor twice.
    {
        const double s1 = 2 * m + A + a + 1, s2 = s1 + 1, s0 = s1 - 1;
        col.y[2][2] = tb * (m + A + a + 1) * (m + A + a + 2) / (s1 * s2);
        if (m >= 1) col.y[1][2] = tb * (-2.0) * (m + a) * (m + A + a + 1) / (s2 * s0);
        if (m >= 2) col.y[0][2] = tb * (m + a) * (m - 1 + a) / (s1 * s0);
    }
    // k line: multiply the x-factor by (1-x) at fixed parameters.
    {
        col.y[1][1] = ta * (1.0 - jacobi1d::coeff_a(fx, m));
        col.y[2][1] = ta * (-jacobi1d::coeff_b(fx, m));
        if (m >= 1) col.y[0][1] = ta * (-jacobi1d::coeff_c(fx, m - 1));
    }
    // k-1 line: multiply by (1-x)^2, lowering the (1-x)-exponent twice.
    if (k >= 1) {
        const double tc = jacobi1d::coeff_c(ft, k - 1);
        const double s1 = 2 * m + A + a + 1, s0 = s1 - 1, s2 = s1 + 1;
        col.y[0][0] = tc * (m + A) * (m + A - 1) / (s1 * s0);
        col.y[1][0] = tc * (-2.0) * (m + 1) * (m + A) / (s0 * s2);
        col.y[2][0] = tc * (m + 1) * (m + 2) / (s1 * s2);
    }
    return col;
}

JacobiOperators jacobi_operators(const ParameterTriple& p, int N) {
    JacobiOperators ops{
        BlockBandedMatrix::degree_graded(N + 2, N + 1, BlockProfile{1, 1, 0, 0}),
        BlockBandedMatrix::degree_graded(N + 2, N + 1, BlockProfile{1, 1, 1, 1}),
    };
    for (int n = 0; n <= N; ++n) {
        for (int k = 0; k <= n; ++k) {
            const JacobiColumn col = jacobi_column(p, n, k);
            ColumnEmitter ex{ops.mult_x, n, k};
            ex(n - 1, k, col.x_dn);
            ex(n, k, col.x_diag);
            ex(n + 1, k, col.x_up);
            ColumnEmitter ey{ops.mult_y, n, k};
            for (int dn = -1; dn <= 1; ++dn) {
                for (int dk = -1; dk <= 1; ++dk) {
                    ey(n + dn, k + dk, col.y[dn + 1][dk + 1]);
                }
            }
        }
    }
    return ops;
}

BlockBandedMatrix laplacian_strong(int N) {
    if (N < 2) throw std::invalid_argument("laplacian_strong: N >= 2 required");
    const int C = N + 1;
    const BlockBandedMatrix dx1 = differentiation({0, 0, 0}, Direction::x, C);
    const BlockBandedMatrix dx2 = differentiation({1, 0, 1}, Direction::x, C - 1);
    const BlockBandedMatrix sx1 = conversion({2, 0, 2}, Axis::b, C - 2);
    const BlockBandedMatrix sx2 = conversion({2, 1, 2}, Axis::c, C - 2);
    const std::array<BlockBandedMatrix, 4> xs{sx2, sx1, dx2, dx1};
    BlockBandedMatrix term_x = compose_chain(std::span<const BlockBandedMatrix>(xs));

    const BlockBandedMatrix dy1 = differentiation({0, 0, 0}, Direction::y, C);
    const BlockBandedMatrix dy2 = differentiation({0, 1, 1}, Direction::y, C - 1);
    const BlockBandedMatrix sy1 = conversion({0, 2, 2}, Axis::a, C - 2);
    const BlockBandedMatrix sy2 = conversion({1, 2, 2}, Axis::a, C - 2);
    const std::array<BlockBandedMatrix, 4> ys{sy2, sy1, dy2, dy1};
    const BlockBandedMatrix term_y = compose_chain(std::span<const BlockBandedMatrix>(ys));

    return add(term_x, term_y).with_profile(BlockProfile{2, 4, 0, 4});
}

BlockBandedMatrix laplacian_weighted(int N) {
    if (N < 1) throw std::invalid_argument("laplacian_weighted: N >= 1 required");
    const int C = N + 1;
    const BlockBandedMatrix wx = weighted_differentiation({1, 1, 1}, Direction::x, C);
    const BlockBandedMatrix lx = lowering({0, 1, 0}, Axis::b, C + 1);
    const BlockBandedMatrix dx = differentiation({0, 0, 0}, Direction::x, C + 2);
    const BlockBandedMatrix sx = conversion({1, 0, 1}, Axis::b, C + 1);
    const std::array<BlockBandedMatrix, 4> xs{sx, dx, lx, wx};
    BlockBandedMatrix term_x = compose_chain(std::span<const BlockBandedMatrix>(xs));

    const BlockBandedMatrix wy = weighted_differentiation({1, 1, 1}, Direction::y, C);
    const BlockBandedMatrix ly = lowering({1, 0, 0}, Axis::a, C + 1);
    const BlockBandedMatrix dy = differentiation({0, 0, 0}, Direction::y, C + 2);
    const BlockBandedMatrix sy = conversion({0, 1, 1}, Axis::a, C + 1);
    const std::array<BlockBandedMatrix, 4> ys{sy, dy, ly, wy};
    const BlockBandedMatrix term_y = compose_chain(std::span<const BlockBandedMatrix>(ys));

    return add(term_x, term_y).with_profile(BlockProfile{1, 2, 2, 2});
}

BlockBandedMatrix laplacian_w2(int N) {
    if (N < 0) throw std::invalid_argument("laplacian_w2: N >= 0 required");
    const int C = N + 1;
    const BlockBandedMatrix wx1 = weighted_differentiation({2, 2, 2}, Direction::x, C);
    const BlockBandedMatrix lx1 = lowering({1, 2, 1}, Axis::b, C + 1);
    const BlockBandedMatrix wx2 = weighted_differentiation({1, 1, 1}, Direction::x, C + 2);
    const BlockBandedMatrix lx2 = lowering({0, 1, 0}, Axis::b, C + 3);
    const std::array<BlockBandedMatrix, 4> xs{lx2, wx2, lx1, wx1};
    BlockBandedMatrix term_x = compose_chain(std::span<const BlockBandedMatrix>(xs));

    const BlockBandedMatrix wy1 = weighted_differentiation({2, 2, 2}, Direction::y, C);
    const BlockBandedMatrix ly1 = lowering({2, 1, 1}, Axis::a, C + 1);
    const BlockBandedMatrix wy2 = weighted_differentiation({1, 1, 1}, Direction::y, C + 2);
    const BlockBandedMatrix ly2 = lowering({1, 0, 0}, Axis::a, C + 3);
    const std::array<BlockBandedMatrix, 4> ys{ly2, wy2, ly1, wy1};
    const BlockBandedMatrix term_y = compose_chain(std::span<const BlockBandedMatrix>(ys));

    return add(term_x, term_y);
}

BlockBandedMatrix biharmonic(int N) {
    if (N < 2) throw std::invalid_argument("biharmonic: N >= 2 required");
    const BlockBandedMatrix inner = laplacian_w2(N);     // rows 0..N+4 in P^(0,0,0)
    const BlockBandedMatrix outer = laplacian_strong(N + 4);  // cols 0..N+4, rows 0..N+2
    return multiply(outer, inner);
}

BlockBandedMatrix helmholtz_weighted(const CoefficientVector& v_coeffs, double k, int N) {
    BlockBandedMatrix base = laplacian_weighted(N);
    CoefficientVector v = v_coeffs;
    v.trim_trailing_zero_blocks();
    const bool v_zero = [&] {
        for (const auto& blk : v.blocks()) {
            for (double x : blk) {
                if (x != 0.0) return false;
            }
        }
        return true;
    }();
    if (v_zero || k == 0.0) return base;
    if (!(v.basis() == BasisTag{BasisFamily::P, 0, 0, 0})) {
        throw std::invalid_argument("helmholtz_weighted: v must be P(0,0,0) coefficients, got " +
                                    trispectral::to_string(v.basis()));
    }
    if (v.degree() > N) throw std::invalid_argument("helmholtz_weighted: deg(v) exceeds N");

    const int C = N + 1;
    const BlockBandedMatrix l1 = lowering({1, 1, 1}, Axis::a, C);
    const BlockBandedMatrix l2 = lowering({0, 1, 1}, Axis::b, C + 1);
    const BlockBandedMatrix l3 = lowering({0, 0, 1}, Axis::c, C + 2);
    const BlockBandedMatrix mv = eval::multiplication_operator(v, {0, 0, 0}, C + 2);
    const BlockBandedMatrix s1 = conversion({0, 0, 0}, Axis::c, C + 3);
    const BlockBandedMatrix s2 = conversion({0, 0, 1}, Axis::b, C + 3);
    const BlockBandedMatrix s3 = conversion({0, 1, 1}, Axis::a, C + 3);
    const std::array<BlockBandedMatrix, 7> chain{s3, s2, s1, mv, l3, l2, l1};
    const BlockBandedMatrix term = compose_chain(std::span<const BlockBandedMatrix>(chain)).trimmed(C + 1, C);
    return add(base, term, 1.0, k * k);
}

const BlockBandedMatrix& OperatorFactory::get(Key key, const std::function<BlockBandedMatrix()>& build) {
    std::scoped_lock lock(mutex_);
    auto it = cache_.find(key);
    if (it == cache_.end()) it = cache_.emplace(key, build()).first;
    return it->second;
}

const BlockBandedMatrix& OperatorFactory::conversion(const ParameterTriple& src, Axis which, int col_blocks) {
    return get({0, static_cast<int>(which), src.a, src.b, src.c, col_blocks},
               [&] { return triops::conversion(src, which, col_blocks); });
}

const BlockBandedMatrix& OperatorFactory::lowering(const ParameterTriple& src, Axis which, int col_blocks) {
    return get({1, static_cast<int>(which), src.a, src.b, src.c, col_blocks},
               [&] { return triops::lowering(src, which, col_blocks); });
}

const BlockBandedMatrix& OperatorFactory::differentiation(const ParameterTriple& src, Direction dir,
                                                          int col_blocks) {
    return get({2, static_cast<int>(dir), src.a, src.b, src.c, col_blocks},
               [&] { return triops::differentiation(src, dir, col_blocks); });
}

const BlockBandedMatrix& OperatorFactory::weighted_differentiation(const ParameterTriple& src, Direction dir,
                                                                   int col_blocks) {
    return get({3, static_cast<int>(dir), src.a, src.b, src.c, col_blocks},
               [&] { return triops::weighted_differentiation(src, dir, col_blocks); });
}

BlockBandedMatrix conversion_path(const ParameterTriple& src, const ParameterTriple& dst, int col_blocks) {
    if (dst.a < src.a || dst.b < src.b || dst.c < src.c) {
        throw std::invalid_argument("conversion_path: destination must raise every parameter");
    }
    BlockBandedMatrix out = BlockBandedMatrix::identity(degree_graded_sizes(col_blocks));
    ParameterTriple at = src;
    while (!(at == dst)) {
        Axis which = at.a < dst.a ? Axis::a : (at.b < dst.b ? Axis::b : Axis::c);
        out = multiply(conversion(at, which, col_blocks), out);
        at = conversion_target(at, which);
    }
    return out;
}

BlockBandedMatrix lowering_path(const ParameterTriple& src, const ParameterTriple& dst, int col_blocks) {
    if (dst.a > src.a || dst.b > src.b || dst.c > src.c) {
        throw std::invalid_argument("lowering_path: destination must lower every parameter");
    }
    BlockBandedMatrix out = BlockBandedMatrix::identity(degree_graded_sizes(col_blocks));
    ParameterTriple at = src;
    int cols = col_blocks;
    while (!(at == dst)) {
        Axis which = at.a > dst.a ? Axis::a : (at.b > dst.b ? Axis::b : Axis::c);
        out = multiply(lowering(at, which, cols), out);
        at = lowering_target(at, which);
        ++cols;
    }
    return out;
}

}  // namespace trispectral::triops
