#include "trispectral/dirichlet.hpp"

#include <cmath>
#include <stdexcept>

#include "trispectral/eval.hpp"
#include "trispectral/jacobi1d.hpp"

namespace trispectral::dirichlet {

using jacobi1d::JacobiParams1D;
using triops::Direction;
using triops::ParameterTriple;

std::string to_string(const EdgeFlags& f) {
    return "(" + std::to_string(f.a) + "," + std::to_string(f.b) + "," + std::to_string(f.c) + ")";
}

namespace {

void check_flags(const EdgeFlags& f) {
    if ((f.a != 0 && f.a != 1) || (f.b != 0 && f.b != 1) || (f.c != 0 && f.c != 1)) {
        throw std::invalid_argument("dirichlet: edge flags must lie in {0,1}, got " + to_string(f));
    }
}

int flag_count(const EdgeFlags& f) { return f.a + f.b + f.c; }

// sum_m d[m] (1-x)^m p_m(y/(1-x)) with p_m the shifted family of tp,
// evaluated without dividing by (1-x).
double weighted_diagonal_sum(const JacobiParams1D& tp, std::span<const double> d, double x, double y) {
    if (d.empty()) return 0.0;
    const double omx = 1.0 - x;
    double rprev = 0.0, r = 1.0;
    double total = d[0];
    for (size_t m = 1; m < d.size(); ++m) {
        const int mm = static_cast<int>(m) - 1;
        const double am = jacobi1d::coeff_a(tp, mm);
        const double bm = jacobi1d::coeff_b(tp, mm);
        const double cm = mm >= 1 ? jacobi1d::coeff_c(tp, mm - 1) : 0.0;
        const double rnext = ((y - am * omx) * r - cm * omx * omx * rprev) / bm;
        rprev = r;
        r = rnext;
        total += d[m] * r;
    }
    return total;
}

// 1-D sum over the k = const exceptional lines: sum_n coeffs[n] p_n(x).
double line_sum(const JacobiParams1D& p, std::span<const double> coeffs, double x) {
    if (coeffs.empty()) return 0.0;
    return jacobi1d::eval_clenshaw_1d(p, coeffs, x);
}

// Bulk evaluation helper: weight(x,y) * P^{(p)} expansion of the shifted
// coefficient array picked out by pick(n,k) for blocks n0.., k-offset dk.
double weighted_bulk(const ParameterTriple& p, const CoefficientVector& c, int dn, int dk, double weight, double x,
                     double y) {
    const int N = c.degree();
    const int M = N - dn;
    if (M < 0 || weight == 0.0) return 0.0;
    CoefficientVector shifted = CoefficientVector::zeros({BasisFamily::P, p.a, p.b, p.c}, M);
    bool any = false;
    for (int m = 0; m <= M; ++m) {
        for (int l = 0; l <= m; ++l) {
            const int n = m + dn, k = l + dk;
            if (k > n || k < 0) continue;
            // Only interior (non-exceptional) source indices belong to the bulk;
            // the caller zeroes exceptional ones out of c beforehand.
            const double v = c.at(n, k);
            if (v != 0.0) any = true;
            shifted.at(m, l) = v;
        }
    }
    if (!any) return 0.0;
    return weight * eval::eval_point(p, shifted, x, y);
}

}  // namespace

double q_eval(const EdgeFlags& flags, const CoefficientVector& coeffs, double x, double y) {
    check_flags(flags);
    const int N = coeffs.degree();
    const double z = 1.0 - x - y;
    CoefficientVector bulk = coeffs;  // exceptional entries cleared below

    auto take_line = [&](int fixed_k, int shift) {
        // Collect c[n][fixed_k] for n >= shift into a dense array indexed by
        // n - shift, clearing them from the bulk copy.
        std::vector<double> line(std::max(0, N - shift + 1), 0.0);
        for (int n = shift; n <= N; ++n) {
            if (fixed_k <= n) {
                line[n - shift] = bulk.at(n, fixed_k);
                bulk.at(n, fixed_k) = 0.0;
            }
        }
        return line;
    };
    auto take_diagonal = [&](int shift) {
        std::vector<double> diag(std::max(0, N - shift + 1), 0.0);
        for (int n = shift; n <= N; ++n) {
            diag[n - shift] = bulk.at(n, n);
            bulk.at(n, n) = 0.0;
        }
        return diag;
    };

    const int count = flag_count(flags);
    double value = 0.0;
    if (count == 1 && flags.a == 1) {
        // Q^(1,0,0): diagonal members are P_{n,n}; bulk is x P^(1,0,0).
        const std::vector<double> diag = take_diagonal(0);
        value += weighted_diagonal_sum({0.0, 0.0}, diag, x, y);
        value += weighted_bulk({1, 0, 0}, bulk, 1, 0, x, x, y);
    } else if (count == 1 && flags.b == 1) {
        const std::vector<double> line = take_line(0, 0);
        value += line_sum({0.0, 0.0}, line, x);
        value += weighted_bulk({0, 1, 0}, bulk, 1, 1, y, x, y);
    } else if (count == 1 && flags.c == 1) {
        const std::vector<double> line = take_line(0, 0);
        value += line_sum({0.0, 0.0}, line, x);
        value += weighted_bulk({0, 0, 1}, bulk, 1, 1, z, x, y);
    } else if (count == 2 && flags.c == 0) {
        // Q^(1,1,0)
        value += bulk.at(0, 0);
        bulk.at(0, 0) = 0.0;
        const std::vector<double> line0 = take_line(0, 1);
        value += x * line_sum({0.0, 1.0}, line0, x);
        const std::vector<double> diag = take_diagonal(1);
        value += y * weighted_diagonal_sum({0.0, 1.0}, diag, x, y);
        value += weighted_bulk({1, 1, 0}, bulk, 2, 1, x * y, x, y);
    } else if (count == 2 && flags.b == 0) {
        // Q^(1,0,1)
        value += bulk.at(0, 0);
        bulk.at(0, 0) = 0.0;
        const std::vector<double> line0 = take_line(0, 1);
        value += x * line_sum({0.0, 1.0}, line0, x);
        const std::vector<double> diag = take_diagonal(1);
        value += z * weighted_diagonal_sum({1.0, 0.0}, diag, x, y);
        value += weighted_bulk({1, 0, 1}, bulk, 2, 1, x * z, x, y);
    } else if (count == 2 && flags.a == 0) {
        // Q^(0,1,1)
        value += bulk.at(0, 0);
        bulk.at(0, 0) = 0.0;
        const std::vector<double> line0 = take_line(0, 1);
        value += (1.0 - x) * line_sum({1.0, 0.0}, line0, x);
        if (N >= 1) {
            const std::vector<double> line1 = take_line(1, 1);
            value += (1.0 - x - 2.0 * y) * line_sum({1.0, 0.0}, line1, x);
        }
        value += weighted_bulk({0, 1, 1}, bulk, 2, 2, y * z, x, y);
    } else if (count == 3) {
        value += bulk.at(0, 0);
        bulk.at(0, 0) = 0.0;
        if (N >= 1) {
            value += bulk.at(1, 0) * (1.0 - 2.0 * x);
            value += bulk.at(1, 1) * (1.0 - x - 2.0 * y);
            bulk.at(1, 0) = 0.0;
            bulk.at(1, 1) = 0.0;
        }
        const std::vector<double> line0 = take_line(0, 2);
        value += x * (1.0 - x) * line_sum({1.0, 1.0}, line0, x);
        if (N >= 2) {
            const std::vector<double> line1 = take_line(1, 2);
            value += x * (1.0 - x - 2.0 * y) * line_sum({1.0, 1.0}, line1, x);
        }
        const std::vector<double> diag = take_diagonal(2);
        value += y * z * weighted_diagonal_sum({1.0, 1.0}, diag, x, y);
        value += weighted_bulk({1, 1, 1}, bulk, 3, 2, x * y * z, x, y);
    } else {
        throw std::invalid_argument("q_eval: undefined flag combination " + to_string(flags));
    }
    return value;
}

double q_eval_single(const EdgeFlags& flags, int n, int k, double x, double y) {
    CoefficientVector c = CoefficientVector::unit({BasisFamily::Q, flags.a, flags.b, flags.c}, n, n, k);
    return q_eval(flags, c, x, y);
}

bool legal_conversion_step(const EdgeFlags& src, const EdgeFlags& dst) {
    const int ds = flag_count(src), dd = flag_count(dst);
    if (ds != dd + 1) return false;
    if (dst.a > src.a || dst.b > src.b || dst.c > src.c) return false;
    return true;
}

namespace {

enum class StepId {
    S100_P,
    S010_P,
    S001_P,
    S110_100,
    S110_010,
    S101_100,
    S101_001,
    S011_010,
    S011_001,
    S111_011,
    S111_101,
    S111_110,
};

StepId step_id(const EdgeFlags& src, const EdgeFlags& dst) {
    auto pack = [](const EdgeFlags& f) { return f.a * 4 + f.b * 2 + f.c; };
    const int s = pack(src), d = pack(dst);
    if (s == 4 && d == 0) return StepId::S100_P;
    if (s == 2 && d == 0) return StepId::S010_P;
    if (s == 1 && d == 0) return StepId::S001_P;
    if (s == 6 && d == 4) return StepId::S110_100;
    if (s == 6 && d == 2) return StepId::S110_010;
    if (s == 5 && d == 4) return StepId::S101_100;
    if (s == 5 && d == 1) return StepId::S101_001;
    if (s == 3 && d == 2) return StepId::S011_010;
    if (s == 3 && d == 1) return StepId::S011_001;
    if (s == 7 && d == 3) return StepId::S111_011;
    if (s == 7 && d == 5) return StepId::S111_101;
    if (s == 7 && d == 6) return StepId::S111_110;
    throw std::invalid_argument("q_conversion: illegal step");
}

}  // namespace

BlockBandedMatrix q_conversion(const EdgeFlags& src, const EdgeFlags& dst, int col_blocks) {
    check_flags(src);
    check_flags(dst);
    if (!legal_conversion_step(src, dst)) {
        throw std::invalid_argument("q_conversion: illegal step " + to_string(src) + " -> " + to_string(dst));
    }
    const StepId id = step_id(src, dst);
    // Note: targets with an exceptional diagonal member -- (1,0,0), (1,0,1)
    // and (1,1,0) -- make the generic recurrences drop their (n-1, n-1)
    // reference exactly when k = n-1; the k != n-1 guards below encode that.
    BlockBandedMatrix out = BlockBandedMatrix::degree_graded(col_blocks, col_blocks, BlockProfile{0, 1, 0, 1});
    for (int n = 0; n < col_blocks; ++n) {
        for (int k = 0; k <= n; ++k) {
            auto emit = [&](int m, int l, double v) {
                if (l < 0 || m < 0 || l > m || m >= out.num_row_blocks() || v == 0.0) return;
                out.add_at(m, n, l, k, v);
            };
            const double dn = n, dk = k;
            switch (id) {
                case StepId::S100_P:
                    if (k == n) {
                        emit(n, n, 1.0);
                    } else {
                        const double v = (dn - dk) / (2 * dn + 1);
                        emit(n, k, v);
                        emit(n - 1, k, v);
                    }
                    break;
                case StepId::S010_P:
                case StepId::S001_P: {
                    const double sgn = id == StepId::S001_P ? -1.0 : 1.0;
                    if (k == 0) {
                        emit(n, 0, (dn + 1) / (2 * dn + 1));
                        emit(n - 1, 0, -dn / (2 * dn + 1));
                    } else {
                        const double den = 2 * (2 * dn + 1);
                        emit(n, k, sgn * (dn + dk + 1) / den);
                        emit(n, k - 1, -(dn - dk + 1) / den);
                        emit(n - 1, k, -sgn * (dn - dk) / den);
                        emit(n - 1, k - 1, (dn + dk) / den);
                    }
                    break;
                }
                case StepId::S110_100:
                case StepId::S101_100: {
                    const double sgn = id == StepId::S101_100 ? -1.0 : 1.0;
                    if (n == 0) {
                        emit(0, 0, 1.0);
                    } else if (k == 0) {
                        emit(n, 0, n == 1 ? 1.0 : (dn + 1) / (2 * dn));
                        if (n >= 2) emit(n - 1, 0, -0.5);
                    } else if (k == n) {
                        emit(n, n, sgn * 0.5);
                        emit(n, n - 1, -0.5);
                        emit(n - 1, n - 1, 0.5);
                    } else {
                        const double den = 4 * dn;
                        emit(n, k, sgn * (dn + dk + 1) / den);
                        emit(n, k - 1, -(dn - dk) / den);
                        if (k != n - 1) emit(n - 1, k, -sgn * (dn - dk) / den);
                        emit(n - 1, k - 1, (dn + dk - 1) / den);
                    }
                    break;
                }
                case StepId::S110_010:
                case StepId::S101_001: {
                    if (n == 0) {
                        emit(0, 0, 1.0);
                    } else if (k == 0) {
                        emit(n, 0, 0.5);
                        emit(n - 1, 0, 0.5);
                    } else if (k == n) {
                        emit(n, n, 1.0);
                    } else {
                        const double v = (dn - dk) / (2 * dn);
                        emit(n, k, v);
                        emit(n - 1, k, v);
                    }
                    break;
                }
                case StepId::S011_010:
                case StepId::S011_001: {
                    const double sgn = id == StepId::S011_001 ? -1.0 : 1.0;
                    if (n == 0) {
                        emit(0, 0, 1.0);
                    } else if (k == 0) {
                        emit(n, 0, -0.5);
                        emit(n - 1, 0, 0.5);
                    } else if (k == 1) {
                        const double den = 2 * dn;
                        emit(n, 1, -sgn * 2 * (dn + 1) / den);
                        emit(n, 0, -sgn * 0.5);
                        emit(n - 1, 1, sgn * 2 * (dn - 1) / den);
                        emit(n - 1, 0, sgn * 0.5);
                    } else {
                        const double den = 2 * dn * (2 * dk - 1);
                        emit(n, k, -sgn * (dk - 1) * (dn + dk) / den);
                        emit(n, k - 1, -(dk - 1) * (dn - dk + 1) / den);
                        emit(n - 1, k, sgn * (dk - 1) * (dn - dk) / den);
                        emit(n - 1, k - 1, (dk - 1) * (dn + dk - 1) / den);
                    }
                    break;
                }
                case StepId::S111_011: {
                    if (n == 0) {
                        emit(0, 0, 1.0);
                    } else if (n == 1 && k == 0) {
                        emit(1, 0, 2.0);
                        emit(0, 0, -1.0);
                    } else if (n == 1 && k == 1) {
                        emit(1, 1, 1.0);
                    } else if (k == n) {
                        emit(n, n, 1.0);
                    } else {
                        const double v = (k == 0 ? dn - 1 : dn - dk) / (2 * dn - 1);
                        emit(n, k, v);
                        emit(n - 1, k, v);
                    }
                    break;
                }
                case StepId::S111_101:
                case StepId::S111_110: {
                    const double sgn = id == StepId::S111_110 ? -1.0 : 1.0;
                    if (n == 0) {
                        emit(0, 0, 1.0);
                    } else if (n == 1 && k == 0) {
                        emit(1, 0, -2.0);
                        emit(0, 0, 1.0);
                    } else if (n == 1 && k == 1) {
                        emit(1, 1, sgn * 2.0);
                        emit(1, 0, sgn * 1.0);
                        emit(0, 0, -sgn * 1.0);
                    } else if (k == 0) {
                        emit(n, 0, -(dn - 1) / (2 * dn - 1));
                        emit(n - 1, 0, (dn - 1) / (2 * dn - 1));
                    } else if (k == 1) {
                        const double den = 2 * dn - 1;
                        emit(n, 1, sgn * 2 * (dn + 1) / den);
                        emit(n, 0, sgn * (dn - 1) / den);
                        if (n != 2) emit(n - 1, 1, -sgn * 2 * (dn - 1) / den);
                        emit(n - 1, 0, -sgn * (dn - 1) / den);
                    } else if (k == n) {
                        const double v = (dn - 1) / (2 * dn - 1);
                        emit(n, n, sgn * v);
                        emit(n, n - 1, -v);
                        emit(n - 1, n - 1, v);
                    } else {
                        const double den = (2 * dn - 1) * (2 * dk - 1);
                        emit(n, k, sgn * (dn + dk) * (dk - 1) / den);
                        emit(n, k - 1, -(dn - dk) * (dk - 1) / den);
                        if (k != n - 1) emit(n - 1, k, -sgn * (dn - dk) * (dk - 1) / den);
                        emit(n - 1, k - 1, (dn + dk - 2) * (dk - 1) / den);
                    }
                    break;
                }
            }
        }
    }
    return out;
}

BlockBandedMatrix q_conversion_path(const EdgeFlags& src, const EdgeFlags& dst, int col_blocks) {
    check_flags(src);
    check_flags(dst);
    if (dst.a > src.a || dst.b > src.b || dst.c > src.c) {
        throw std::invalid_argument("q_conversion_path: flags " + to_string(dst) + " not below " + to_string(src));
    }
    BlockBandedMatrix out = BlockBandedMatrix::identity(degree_graded_sizes(col_blocks));
    EdgeFlags at = src;
    // Clear flags axis by axis: c first, then b, then a (the choice is
    // immaterial; every path yields the same operator).
    while (!(at == dst)) {
        EdgeFlags next = at;
        if (at.c > dst.c) {
            next.c = 0;
        } else if (at.b > dst.b) {
            next.b = 0;
        } else {
            next.a = 0;
        }
        out = multiply(q_conversion(at, next, col_blocks), out);
        at = next;
    }
    return out;
}

BlockBandedMatrix q_derivative(const EdgeFlags& src, Direction dir, int col_blocks) {
    check_flags(src);
    const bool dy_011 = src == EdgeFlags{0, 1, 1} && dir == Direction::y;
    const bool dx_101 = src == EdgeFlags{1, 0, 1} && dir == Direction::x;
    const bool dz_110 = src == EdgeFlags{1, 1, 0} && dir == Direction::z;
    if (!dy_011 && !dx_101 && !dz_110) {
        throw std::invalid_argument("q_derivative: unsupported (flags, direction) pair " + to_string(src));
    }
    BlockProfile prof = dy_011 ? BlockProfile{-1, 1, -1, 1} : BlockProfile{-1, 1, 0, 1};
    BlockBandedMatrix out = BlockBandedMatrix::degree_graded(std::max(col_blocks - 1, 0), col_blocks, prof);
    for (int n = 1; n < col_blocks; ++n) {
        for (int k = 0; k <= n; ++k) {
            auto emit = [&](int m, int l, double v) {
                if (l < 0 || m < 0 || l > m || m >= out.num_row_blocks() || v == 0.0) return;
                out.add_at(m, n, l, k, v);
            };
            const double dn = n, dk = k;
            if (dy_011) {
                if (k == 1) {
                    emit(n - 1, 0, -2.0);
                } else if (k >= 2) {
                    emit(n - 1, k - 1, 1.0 - dk);
                }
            } else if (dx_101) {
                if (k == 0) {
                    emit(n - 1, 0, dn);
                } else if (k == n) {
                    emit(n - 1, n - 1, -dn);
                } else {
                    emit(n - 1, k - 1, (dk - dn) / 2);
                    emit(n - 1, k, (dk - dn) / 2);
                }
            } else {
                if (k == 0) {
                    emit(n - 1, 0, -dn);
                } else if (k == n) {
                    emit(n - 1, n - 1, dn);
                } else {
                    emit(n - 1, k - 1, (dn - dk) / 2);
                    emit(n - 1, k, -(dn - dk) / 2);
                }
            }
        }
    }
    return out;
}

RestrictionOperator restriction(Edge edge, const EdgeFlags& src, int col_blocks) {
    check_flags(src);
    EdgeFlags one{edge == Edge::x0 ? 1 : 0, edge == Edge::y0 ? 1 : 0, edge == Edge::z0 ? 1 : 0};
    if ((one.a && !src.a) || (one.b && !src.b) || (one.c && !src.c)) {
        throw std::invalid_argument("restriction: flags " + to_string(src) + " do not cover the requested edge");
    }
    // One-edge restriction: a single nonzero per block.
    const std::vector<int> row_sizes(col_blocks, 1);
    BlockProfile prof{0, 0, 0, edge == Edge::x0 ? col_blocks : 0};
    BlockBandedMatrix r(row_sizes, degree_graded_sizes(col_blocks), prof);
    for (int n = 0; n < col_blocks; ++n) r.set(n, n, 0, edge == Edge::x0 ? n : 0, 1.0);
    if (src == one) return {edge, std::move(r)};
    return {edge, multiply(r, q_conversion_path(src, one, col_blocks))};
}

FullRestriction full_restriction(int col_blocks) {
    const EdgeFlags all{1, 1, 1};
    return {restriction(Edge::x0, all, col_blocks), restriction(Edge::y0, all, col_blocks),
            restriction(Edge::z0, all, col_blocks)};
}

void edge_point(Edge edge, double s, double& x, double& y) {
    switch (edge) {
        case Edge::x0: x = 0.0; y = s; return;
        case Edge::y0: x = s; y = 0.0; return;
        case Edge::z0: x = s; y = 1.0 - s; return;
    }
}

}  // namespace trispectral::dirichlet
