#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "trispectral/dirichlet.hpp"
#include "trispectral/eval.hpp"
#include "trispectral/jacobi1d.hpp"
#include "trispectral/transform.hpp"
#include "trispectral/triops.hpp"

using namespace trispectral;

#define CHECK_NEAR(a, b, tol)                                                              \
    do {                                                                                   \
        const double va = (a), vb = (b);                                                   \
        if (!(std::abs(va - vb) <= (tol))) {                                               \
            std::printf("FAIL %s:%d: %s = %.17g vs %s = %.17g\n", __FILE__, __LINE__, #a, \
                        va, #b, vb);                                                       \
            std::exit(1);                                                                  \
        }                                                                                  \
    } while (0)

int main() {
    // shifted Legendre basics
    const jacobi1d::JacobiParams1D leg{0.0, 0.0};
    const auto t = jacobi1d::three_term_coeffs(leg, 3);
    CHECK_NEAR(t.a[0], 0.5, 1e-15);
    CHECK_NEAR(t.b[0], 0.5, 1e-15);
    const double c1[] = {0.0, 1.0};
    CHECK_NEAR(jacobi1d::eval_clenshaw_1d(leg, c1, 0.3), -0.4, 1e-15);
    const double c2[] = {1.0, 1.0, 1.0};
    CHECK_NEAR(jacobi1d::eval_clenshaw_1d(leg, c2, 0.5), 0.5, 1e-14);

    const auto rule = jacobi1d::gauss_rule(leg, 5);
    double s = 0.0;
    for (int i = 0; i < 5; ++i) s += rule.weights[i] * std::pow(rule.nodes[i], 9.0);
    CHECK_NEAR(s, 0.1, 1e-14);

    CHECK_NEAR(jacobi1d::norm_squared_1d(leg, 1), 1.0 / 3.0, 1e-15);
    CHECK_NEAR(jacobi1d::norm_squared_1d({1.0, 0.0}, 0), 0.5, 1e-15);

    // P_{1,1}(0.2,0.3) = x + 2y - 1 = -0.2 by forward recurrence and Clenshaw
    const triops::ParameterTriple p000{0, 0, 0};
    const auto vals = eval::forward_recurrence(p000, 3, 0.2, 0.3);
    CHECK_NEAR(vals[1][1], -0.2, 1e-14);
    CHECK_NEAR(vals[1][0], 3 * 0.2 - 1.0, 1e-14);
    CoefficientVector e11 = CoefficientVector::unit({BasisFamily::P, 0, 0, 0}, 4, 1, 1);
    CHECK_NEAR(eval::eval_point(p000, e11, 0.2, 0.3), -0.2, 1e-14);

    // transform: x = 1/3 + 1/3 P_{1,0}
    auto fx = transform::analysis(p000, [](double x, double) { return x; }, 4);
    CHECK_NEAR(fx.at(0, 0), 1.0 / 3.0, 1e-13);
    CHECK_NEAR(fx.at(1, 0), 1.0 / 3.0, 1e-13);
    CHECK_NEAR(fx.at(1, 1), 0.0, 1e-13);
    CHECK_NEAR(transform::norm_constant(p000, 1, 1), 1.0 / 12.0, 1e-15);

    // conversion round trip: f = x in (0,0,0) converted to (1,0,0) evaluates equal
    auto S = triops::conversion(p000, triops::Axis::a, 5);
    auto fx100 = matvec(S, fx);
    fx100.set_basis({BasisFamily::P, 1, 0, 0});
    CHECK_NEAR(eval::eval_point({1, 0, 0}, fx100, 0.3, 0.4), 0.3, 1e-13);

    // laplacian of xyz: Delta_W e0 vs transform of -2(x+y)
    auto lw = triops::laplacian_weighted(8);
    CoefficientVector e0 = CoefficientVector::unit({BasisFamily::P, 1, 1, 1}, 8, 0, 0);
    auto lhs = matvec(lw, e0);
    auto rhs = transform::analysis({1, 1, 1}, [](double x, double y) { return -2.0 * (x + y); }, 9);
    for (int n = 0; n <= 9; ++n) {
        for (int k = 0; k <= n; ++k) CHECK_NEAR(lhs.at(n, k), rhs.at(n, k), 1e-12);
    }

    // Q basis: Q_{1,1}^{(1,1,1)}(0.2,0.3) = 1 - x - 2y = 0.2
    CHECK_NEAR(dirichlet::q_eval_single({1, 1, 1}, 1, 1, 0.2, 0.3), 0.2, 1e-14);

    // conversion of a random Q^(1,1,1) expansion to P^(0,0,0) evaluates equal
    CoefficientVector qc = CoefficientVector::zeros({BasisFamily::Q, 1, 1, 1}, 6);
    unsigned seed = 12345;
    for (auto& blk : qc.blocks()) {
        for (auto& v : blk) {
            seed = seed * 1664525u + 1013904223u;
            v = (seed >> 8) * (1.0 / (1 << 24)) - 0.5;
        }
    }
    auto ts = dirichlet::q_conversion_path({1, 1, 1}, {0, 0, 0}, 7);
    auto pc = matvec(ts, qc);
    pc.set_basis({BasisFamily::P, 0, 0, 0});
    for (int i = 0; i < 5; ++i) {
        const double x = 0.13 + 0.11 * i, y = 0.8 * (1.0 - x) * (0.2 + 0.13 * i);
        CHECK_NEAR(dirichlet::q_eval({1, 1, 1}, qc, x, y), eval::eval_point(p000, pc, x, y), 1e-12);
    }

    std::printf("smoke OK\n");
    return 0;
}
