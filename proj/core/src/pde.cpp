#include "trispectral/pde.hpp"

#include <cmath>
#include <iostream>
#include <stdexcept>

#include "trispectral/eval.hpp"
#include "trispectral/jacobi1d.hpp"
#include "trispectral/transform.hpp"

namespace trispectral::pde {

using dirichlet::Edge;
using dirichlet::EdgeFlags;
using triops::Axis;
using triops::Direction;
using triops::ParameterTriple;

double evaluate_solution(const CoefficientVector& u, double x, double y) {
    const BasisTag& tag = u.basis();
    switch (tag.family) {
        case BasisFamily::P:
            return eval::eval_point({tag.a, tag.b, tag.c}, u, x, y);
        case BasisFamily::WeightedP: {
            const double w = std::pow(x, tag.a) * std::pow(y, tag.b) * std::pow(1.0 - x - y, tag.c);
            return w * eval::eval_point({tag.a, tag.b, tag.c}, u, x, y);
        }
        case BasisFamily::Q:
            return dirichlet::q_eval({tag.a, tag.b, tag.c}, u, x, y);
        case BasisFamily::LegendreEdge: {
            const std::vector<double> flat = u.flatten();
            return jacobi1d::eval_clenshaw_1d({0.0, 0.0}, flat, x);
        }
    }
    throw std::logic_error("evaluate_solution: unknown basis");
}

namespace {

// Relative residual of a square banded solve.
double square_residual(const BlockBandedMatrix& a, std::span<const double> x, std::span<const double> b) {
    const std::vector<double> ax = a.matvec_flat(x);
    double rr = 0.0, bb = 0.0, xx = 0.0, fro = 0.0;
    for (size_t i = 0; i < ax.size(); ++i) {
        const double d = ax[i] - b[i];
        rr += d * d;
        bb += b[i] * b[i];
    }
    for (double v : x) xx += v * v;
    a.for_each_nonzero([&](int, int, double v) { fro += v * v; });
    return std::sqrt(rr) / (std::sqrt(fro) * std::sqrt(xx) + std::sqrt(bb) + 1e-300);
}

PdeSolution square_banded_solve(const BlockBandedMatrix& op, const CoefficientVector& rhs, BasisTag out_basis) {
    const int nb = op.num_col_blocks();
    const BlockBandedMatrix sq = op.trimmed(nb, nb);
    const BandMatrix band = to_band(sq);
    const std::vector<double> b = rhs.flatten();
    if (static_cast<int>(b.size()) != band.size()) {
        throw std::invalid_argument("square_banded_solve: rhs does not match truncation");
    }
    const std::vector<double> x = band_lu_solve(band, b);
    PdeSolution sol;
    sol.u = CoefficientVector::unflatten(out_basis, x, sq.col_block_sizes());
    sol.residual_norm = square_residual(sq, x, b);
    sol.block_norms = sol.u.block_norms();
    return sol;
}

}  // namespace

PdeSolution solve_poisson_zero_dirichlet(const CoefficientVector& f111, int N) {
    if (!(f111.basis() == BasisTag{BasisFamily::P, 1, 1, 1})) {
        throw std::invalid_argument("solve_poisson: forcing must be P(1,1,1) coefficients");
    }
    CoefficientVector rhs = f111;
    if (rhs.num_blocks() > N + 1) rhs.blocks().resize(N + 1);
    rhs.pad_to_blocks(N + 1);
    const BlockBandedMatrix lw = triops::laplacian_weighted(N);
    return square_banded_solve(lw, rhs, {BasisFamily::WeightedP, 1, 1, 1});
}

PdeSolution solve_poisson_zero_dirichlet(const ScalarField& f, int N) {
    return solve_poisson_zero_dirichlet(transform::analysis({1, 1, 1}, f, N), N);
}

PdeSolution solve_helmholtz_zero_dirichlet(const ScalarField& v, double k, const ScalarField& f, int N) {
    if (N < 2.0 * k) {
        std::cerr << "helmholtz: N = " << N << " is below 2k = " << 2.0 * k
                  << "; oscillations may be unresolved\n";
    }
    CoefficientVector vc = transform::analysis({0, 0, 0}, v, std::min(N, 24));
    double scale = 0.0;
    for (const auto& blk : vc.blocks()) {
        for (double q : blk) scale = std::max(scale, std::abs(q));
    }
    vc.trim_trailing_zero_blocks(1e-13 * scale);
    const BlockBandedMatrix op = triops::helmholtz_weighted(vc, k, N);
    const CoefficientVector rhs = transform::analysis({1, 1, 1}, f, N);
    return square_banded_solve(op, rhs, {BasisFamily::WeightedP, 1, 1, 1});
}

PdeSolution solve_biharmonic(const ScalarField& f, int N) {
    const BlockBandedMatrix op = triops::biharmonic(N);
    const CoefficientVector rhs = transform::analysis({2, 2, 2}, f, N);
    return square_banded_solve(op, rhs, {BasisFamily::WeightedP, 2, 2, 2});
}

SystemBuilder::SystemBuilder(int tau_columns, std::vector<int> field_block_counts)
    : tau_columns_(tau_columns), field_blocks_(std::move(field_block_counts)) {
    field_offsets_.resize(field_blocks_.size() + 1);
    field_offsets_[0] = tau_columns_;
    for (size_t f = 0; f < field_blocks_.size(); ++f) {
        field_offsets_[f + 1] = field_offsets_[f] + field_blocks_[f] * (field_blocks_[f] + 1) / 2;
    }
}

int SystemBuilder::cols() const { return field_offsets_.back(); }

int SystemBuilder::add_rows(std::span<const Term> terms, std::span<const double> rhs) {
    if (terms.empty()) throw std::invalid_argument("SystemBuilder: empty row group");
    Group g;
    g.start_row = total_rows_;
    g.nrows = terms.front().op->rows();
    for (const Term& t : terms) {
        if (t.field < 0 || t.field >= static_cast<int>(field_blocks_.size())) {
            throw std::invalid_argument("SystemBuilder: bad field index");
        }
        if (t.op->rows() != g.nrows) throw std::invalid_argument("SystemBuilder: row structure mismatch in group");
        const int expect = field_blocks_[t.field] * (field_blocks_[t.field] + 1) / 2;
        if (t.op->cols() != expect) {
            throw std::invalid_argument("SystemBuilder: operator columns do not match field size");
        }
        StoredTerm st;
        st.field = t.field;
        st.scale = t.scale;
        st.op = *t.op;
        if (t.flip_rows) st.op.scale_block_rows([](int n) { return n % 2 ? -1.0 : 1.0; });
        g.terms.push_back(std::move(st));
    }
    if (!rhs.empty()) {
        if (static_cast<int>(rhs.size()) != g.nrows) throw std::invalid_argument("SystemBuilder: rhs size mismatch");
        g.rhs.assign(rhs.begin(), rhs.end());
    }
    total_rows_ += g.nrows;
    groups_.push_back(std::move(g));
    return groups_.back().start_row;
}

int SystemBuilder::add_pin_row(int field, int n, int k, double rhs_value) {
    Group g;
    g.start_row = total_rows_;
    g.nrows = 1;
    g.pin_field = field;
    g.pin_n = n;
    g.pin_k = k;
    g.rhs.assign(1, rhs_value);
    total_rows_ += 1;
    groups_.push_back(std::move(g));
    return groups_.back().start_row;
}

void SystemBuilder::set_tau(int row, int tau_index, double value) {
    if (tau_index < 0 || tau_index >= tau_columns_) throw std::invalid_argument("SystemBuilder: bad tau index");
    tau_entries_.emplace_back(row, tau_index, value);
}

SystemBuilder::Solution SystemBuilder::solve() const {
    DenseMatrix a(total_rows_, cols());
    std::vector<double> b(total_rows_, 0.0);
    for (const Group& g : groups_) {
        if (g.pin_field >= 0) {
            const int off = field_offsets_[g.pin_field] + g.pin_n * (g.pin_n + 1) / 2 + g.pin_k;
            a(g.start_row, off) = 1.0;
        } else {
            for (const StoredTerm& t : g.terms) {
                const int coff = field_offsets_[t.field];
                const int roff = g.start_row;
                const double s = t.scale;
                t.op.for_each_nonzero([&](int r, int c, double v) { a(roff + r, coff + c) += s * v; });
            }
        }
        for (size_t i = 0; i < g.rhs.size(); ++i) b[g.start_row + i] = g.rhs[i];
    }
    for (const auto& [row, tau, value] : tau_entries_) a(row, tau) = value;

    LeastSquaresResult ls = least_squares_solve(std::move(a), std::move(b));
    Solution sol;
    sol.residual_norm = ls.residual_norm;
    sol.tau.assign(ls.x.begin(), ls.x.begin() + tau_columns_);
    for (size_t f = 0; f < field_blocks_.size(); ++f) {
        const std::span<const double> seg(ls.x.data() + field_offsets_[f],
                                          ls.x.data() + field_offsets_[f + 1]);
        sol.fields.push_back(
            CoefficientVector::unflatten(BasisTag{}, seg, degree_graded_sizes(field_blocks_[f])));
    }
    return sol;
}

namespace {

BlockBandedMatrix laplacian_dirichlet_q(int C) {
    using namespace trispectral::triops;
    const BlockBandedMatrix tsx = dirichlet::q_conversion_path({1, 1, 1}, {1, 0, 1}, C);
    const BlockBandedMatrix tdx = dirichlet::q_derivative({1, 0, 1}, Direction::x, C);
    const BlockBandedMatrix dx = differentiation({0, 0, 0}, Direction::x, C - 1);
    const BlockBandedMatrix sx = conversion({1, 0, 1}, Axis::b, C - 2);
    const BlockBandedMatrix termx = multiply(sx, multiply(dx, multiply(tdx, tsx)));

    const BlockBandedMatrix tsy = dirichlet::q_conversion_path({1, 1, 1}, {0, 1, 1}, C);
    const BlockBandedMatrix tdy = dirichlet::q_derivative({0, 1, 1}, Direction::y, C);
    const BlockBandedMatrix dy = differentiation({0, 0, 0}, Direction::y, C - 1);
    const BlockBandedMatrix sy = conversion({0, 1, 1}, Axis::a, C - 2);
    const BlockBandedMatrix termy = multiply(sy, multiply(dy, multiply(tdy, tsy)));
    return add(termx, termy).with_profile(BlockProfile{1, 4, 1, 4});
}

}  // namespace

PdeSolution solve_laplace_dirichlet(const EdgeData& f_x0, const EdgeData& g_y0, const EdgeData& h_hyp, int N) {
    const int C = N + 1;
    const dirichlet::FullRestriction R = dirichlet::full_restriction(C);
    const BlockBandedMatrix lap = laplacian_dirichlet_q(C);

    const std::vector<double> fc = transform::legendre_edge_transform(f_x0, N);
    const std::vector<double> gc = transform::legendre_edge_transform(g_y0, N);
    const std::vector<double> hc = transform::legendre_edge_transform(h_hyp, N);

    SystemBuilder sys(2, {C});
    const SystemBuilder::Term tx{0, &R.x0.matrix};
    const int row_f = sys.add_rows(std::span(&tx, 1), fc);
    sys.set_tau(row_f, 0, 1.0);
    const SystemBuilder::Term ty{0, &R.y0.matrix};
    const int row_g = sys.add_rows(std::span(&ty, 1), gc);
    sys.set_tau(row_g, 1, 1.0);
    const SystemBuilder::Term tz{0, &R.z0.matrix};
    sys.add_rows(std::span(&tz, 1), hc);
    const SystemBuilder::Term tl{0, &lap};
    sys.add_rows(std::span(&tl, 1));

    SystemBuilder::Solution s = sys.solve();
    PdeSolution sol;
    sol.u = std::move(s.fields[0]);
    sol.u.set_basis({BasisFamily::Q, 1, 1, 1});
    sol.tau = std::move(s.tau);
    sol.residual_norm = s.residual_norm;
    sol.block_norms = sol.u.block_norms();
    return sol;
}

PdeSolution solve_transport(double c, const TransportData& data, int N) {
    EdgeFlags flags{0, 1, 0};
    bool need_left = false, need_hyp = false;
    if (c < 0.0) {
        flags = {1, 1, 0};
        need_left = true;
    } else if (c > 1.0) {
        flags = {0, 1, 1};
        need_hyp = true;
    }
    if (!data.bottom) throw std::invalid_argument("transport: bottom-edge data is always required");
    if (need_left != data.left.has_value()) {
        throw std::invalid_argument(need_left ? "transport: c < 0 requires left-edge data"
                                              : "transport: left-edge data is not used in this regime");
    }
    if (need_hyp != data.hypotenuse.has_value()) {
        throw std::invalid_argument(need_hyp ? "transport: c > 1 requires hypotenuse data"
                                             : "transport: hypotenuse data is not used in this regime");
    }

    const int C = N + 1;
    SystemBuilder sys(0, {C});

    const dirichlet::RestrictionOperator ry = dirichlet::restriction(Edge::y0, flags, C);
    const std::vector<double> bc = transform::legendre_edge_transform(data.bottom, N);
    const SystemBuilder::Term tb{0, &ry.matrix};
    sys.add_rows(std::span(&tb, 1), bc);

    dirichlet::RestrictionOperator rx{Edge::x0, {}}, rz{Edge::z0, {}};
    if (need_left) {
        rx = dirichlet::restriction(Edge::x0, flags, C);
        const std::vector<double> lc = transform::legendre_edge_transform(*data.left, N);
        const SystemBuilder::Term tl{0, &rx.matrix};
        sys.add_rows(std::span(&tl, 1), lc);
    }
    if (need_hyp) {
        rz = dirichlet::restriction(Edge::z0, flags, C);
        const std::vector<double> hcv = transform::legendre_edge_transform(*data.hypotenuse, N);
        const SystemBuilder::Term th{0, &rz.matrix};
        sys.add_rows(std::span(&th, 1), hcv);
    }

    // u_y - c u_x = 0 on P^(0,0,0)-converted coefficients, both derivative
    // outputs raised into the common basis P^(1,1,1).
    const BlockBandedMatrix ts = dirichlet::q_conversion_path(flags, {0, 0, 0}, C);
    const BlockBandedMatrix termy =
        multiply(triops::conversion({0, 1, 1}, Axis::a, C - 1), triops::differentiation({0, 0, 0}, Direction::y, C));
    const BlockBandedMatrix termx =
        multiply(triops::conversion({1, 0, 1}, Axis::b, C - 1), triops::differentiation({0, 0, 0}, Direction::x, C));
    const BlockBandedMatrix op = multiply(add(termy, termx, 1.0, -c), ts);
    const SystemBuilder::Term tp{0, &op};
    sys.add_rows(std::span(&tp, 1));

    SystemBuilder::Solution s = sys.solve();
    PdeSolution sol;
    sol.u = std::move(s.fields[0]);
    sol.u.set_basis({BasisFamily::Q, flags.a, flags.b, flags.c});
    sol.residual_norm = s.residual_norm;
    sol.block_norms = sol.u.block_norms();
    return sol;
}

FirstOrderSolution solve_first_order_system(FirstOrderKind kind, const ScalarField& f, int N) {
    const int C = N + 1;
    SystemBuilder sys(0, {C, C, C});  // u, v, w

    const BlockBandedMatrix ts111 = dirichlet::q_conversion_path({1, 1, 1}, {0, 0, 0}, C);
    const BlockBandedMatrix ts101 = dirichlet::q_conversion_path({1, 0, 1}, {0, 0, 0}, C);
    const BlockBandedMatrix ts011 = dirichlet::q_conversion_path({0, 1, 1}, {0, 0, 0}, C);

    // Companion definitions are imposed on all C row blocks; the block-N
    // rows (where the derivative of u contributes nothing) pin the
    // companions' top modes and keep the stacked system full rank.
    const int top_block[] = {C};
    const BlockBandedMatrix vdef_u =
        multiply(triops::differentiation({0, 0, 0}, Direction::x, C), ts111).extended_rows(top_block);
    const BlockBandedMatrix vdef_v = multiply(triops::conversion_path({0, 0, 0}, {1, 0, 1}, C), ts101);
    const BlockBandedMatrix wdef_u =
        multiply(triops::differentiation({0, 0, 0}, Direction::y, C), ts111).extended_rows(top_block);
    const BlockBandedMatrix wdef_w = multiply(triops::conversion_path({0, 0, 0}, {0, 1, 1}, C), ts011);

    if (kind == FirstOrderKind::DirichletPoisson) {
        for (Edge e : {Edge::x0, Edge::y0, Edge::z0}) {
            const dirichlet::RestrictionOperator r = dirichlet::restriction(e, {1, 1, 1}, C);
            const SystemBuilder::Term t{0, &r.matrix};
            sys.add_rows(std::span(&t, 1));
        }
    } else {
        const dirichlet::RestrictionOperator rvx = dirichlet::restriction(Edge::x0, {1, 0, 1}, C);
        const dirichlet::RestrictionOperator rwy = dirichlet::restriction(Edge::y0, {0, 1, 1}, C);
        const dirichlet::RestrictionOperator rvz = dirichlet::restriction(Edge::z0, {1, 0, 1}, C);
        const dirichlet::RestrictionOperator rwz = dirichlet::restriction(Edge::z0, {0, 1, 1}, C);
        const SystemBuilder::Term t1{1, &rvx.matrix, -1.0};
        sys.add_rows(std::span(&t1, 1));
        const SystemBuilder::Term t2{2, &rwy.matrix, -1.0};
        sys.add_rows(std::span(&t2, 1));
        const SystemBuilder::Term t3[2] = {{1, &rvz.matrix}, {2, &rwz.matrix}};
        sys.add_rows(std::span(t3, 2));
        sys.add_pin_row(0, 0, 0, 0.0);  // Neumann gauge: fix the mean mode
    }

    {
        const SystemBuilder::Term t[2] = {{0, &vdef_u}, {1, &vdef_v, -1.0}};
        sys.add_rows(std::span(t, 2));
    }
    {
        const SystemBuilder::Term t[2] = {{0, &wdef_u}, {2, &wdef_w, -1.0}};
        sys.add_rows(std::span(t, 2));
    }
    {
        const BlockBandedMatrix tdx = dirichlet::q_derivative({1, 0, 1}, Direction::x, C);
        const BlockBandedMatrix tdy = dirichlet::q_derivative({0, 1, 1}, Direction::y, C);
        const CoefficientVector fc = transform::analysis({0, 0, 0}, f, N - 1);
        const std::vector<double> rhs = fc.flatten();
        const SystemBuilder::Term t[2] = {{1, &tdx}, {2, &tdy}};
        sys.add_rows(std::span(t, 2), rhs);
    }

    SystemBuilder::Solution s = sys.solve();
    FirstOrderSolution sol;
    sol.u = std::move(s.fields[0]);
    sol.u.set_basis({BasisFamily::Q, 1, 1, 1});
    sol.v = std::move(s.fields[1]);
    sol.v.set_basis({BasisFamily::Q, 1, 0, 1});
    sol.w = std::move(s.fields[2]);
    sol.w.set_basis({BasisFamily::Q, 0, 1, 1});
    sol.residual_norm = s.residual_norm;
    return sol;
}

namespace {

struct FluxTraceOps {
    const BlockBandedMatrix* s1 = nullptr;  // applied to the first flux field
    const BlockBandedMatrix* s2 = nullptr;  // applied to the second
    double scale_s1 = 0.0, scale_s2 = 0.0;
};

}  // namespace

PolygonSolution solve_polygon_helmholtz(const PolygonMesh& mesh, double k, const ScalarField& bc, int N) {
    const int C = N + 1;
    const int E = static_cast<int>(mesh.elements.size());
    if (E == 0) throw std::invalid_argument("solve_polygon_helmholtz: empty mesh");

    std::vector<int> blocks(3 * E, C);
    SystemBuilder sys(0, std::move(blocks));

    // Reference operators shared by every element.
    const BlockBandedMatrix ts111 = dirichlet::q_conversion_path({1, 1, 1}, {0, 0, 0}, C);
    const BlockBandedMatrix ts101 = dirichlet::q_conversion_path({1, 0, 1}, {0, 0, 0}, C);
    const BlockBandedMatrix ts011 = dirichlet::q_conversion_path({0, 1, 1}, {0, 0, 0}, C);
    const int top_block[] = {C};
    const BlockBandedMatrix du_x =
        multiply(triops::conversion({1, 0, 1}, Axis::b, C - 1),
                 multiply(triops::differentiation({0, 0, 0}, Direction::x, C), ts111))
            .extended_rows(top_block);
    const BlockBandedMatrix du_y =
        multiply(triops::conversion({0, 1, 1}, Axis::a, C - 1),
                 multiply(triops::differentiation({0, 0, 0}, Direction::y, C), ts111))
            .extended_rows(top_block);
    const BlockBandedMatrix conv_s1 = multiply(triops::conversion_path({0, 0, 0}, {1, 1, 1}, C), ts101);
    const BlockBandedMatrix conv_s2 = multiply(triops::conversion_path({0, 0, 0}, {1, 1, 1}, C), ts011);
    const BlockBandedMatrix tdx = dirichlet::q_derivative({1, 0, 1}, Direction::x, C);
    const BlockBandedMatrix tdy = dirichlet::q_derivative({0, 1, 1}, Direction::y, C);
    const BlockBandedMatrix ts111_sq = ts111.trimmed(C - 1, C);

    const dirichlet::RestrictionOperator ru_x0 = dirichlet::restriction(Edge::x0, {1, 1, 1}, C);
    const dirichlet::RestrictionOperator ru_y0 = dirichlet::restriction(Edge::y0, {1, 1, 1}, C);
    const dirichlet::RestrictionOperator ru_z0 = dirichlet::restriction(Edge::z0, {1, 1, 1}, C);
    const dirichlet::RestrictionOperator rs1_x0 = dirichlet::restriction(Edge::x0, {1, 0, 1}, C);
    const dirichlet::RestrictionOperator rs1_z0 = dirichlet::restriction(Edge::z0, {1, 0, 1}, C);
    const dirichlet::RestrictionOperator rs2_y0 = dirichlet::restriction(Edge::y0, {0, 1, 1}, C);
    const dirichlet::RestrictionOperator rs2_z0 = dirichlet::restriction(Edge::z0, {0, 1, 1}, C);

    auto u_restriction = [&](Edge e) -> const BlockBandedMatrix& {
        switch (e) {
            case Edge::x0: return ru_x0.matrix;
            case Edge::y0: return ru_y0.matrix;
            default: return ru_z0.matrix;
        }
    };
    auto flux_terms = [&](int elem, Edge e, double sign, bool flip,
                          std::vector<SystemBuilder::Term>& out) {
        const double len = mesh.elements[elem].edge_length(e);
        switch (e) {
            case Edge::x0:
                out.push_back({3 * elem + 1, &rs1_x0.matrix, -sign / len, flip});
                break;
            case Edge::y0:
                out.push_back({3 * elem + 2, &rs2_y0.matrix, -sign / len, flip});
                break;
            case Edge::z0:
                out.push_back({3 * elem + 1, &rs1_z0.matrix, sign / len, flip});
                out.push_back({3 * elem + 2, &rs2_z0.matrix, sign / len, flip});
                break;
        }
    };

    for (int e = 0; e < E; ++e) {
        const TriangleElement& el = mesh.elements[e];
        {
            const SystemBuilder::Term t[3] = {{3 * e, &du_x, el.metric[0][0]},
                                              {3 * e, &du_y, el.metric[0][1]},
                                              {3 * e + 1, &conv_s1, -1.0}};
            sys.add_rows(std::span(t, 3));
        }
        {
            const SystemBuilder::Term t[3] = {{3 * e, &du_x, el.metric[1][0]},
                                              {3 * e, &du_y, el.metric[1][1]},
                                              {3 * e + 2, &conv_s2, -1.0}};
            sys.add_rows(std::span(t, 3));
        }
        {
            const SystemBuilder::Term t[3] = {{3 * e + 1, &tdx},
                                              {3 * e + 2, &tdy},
                                              {3 * e, &ts111_sq, el.det * k * k}};
            sys.add_rows(std::span(t, 3));
        }
    }

    for (const PolygonMesh::BoundaryEdge& be : mesh.boundary) {
        const TriangleElement& el = mesh.elements[be.elem];
        std::vector<double> data = transform::legendre_edge_transform(
            [&](double s) {
                double xi, eta;
                dirichlet::edge_point(be.edge, s, xi, eta);
                const Vec2 p = el.map(xi, eta);
                return bc(p[0], p[1]);
            },
            N);
        const SystemBuilder::Term t{3 * be.elem, &u_restriction(be.edge)};
        sys.add_rows(std::span(&t, 1), data);
    }

    for (const PolygonMesh::Interface& itf : mesh.interfaces) {
        {
            const SystemBuilder::Term t[2] = {{3 * itf.elem_a, &u_restriction(itf.edge_a)},
                                              {3 * itf.elem_b, &u_restriction(itf.edge_b), -1.0, itf.reversed}};
            sys.add_rows(std::span(t, 2));
        }
        {
            std::vector<SystemBuilder::Term> t;
            flux_terms(itf.elem_a, itf.edge_a, 1.0, false, t);
            flux_terms(itf.elem_b, itf.edge_b, 1.0, itf.reversed, t);
            sys.add_rows(t);
        }
    }

    SystemBuilder::Solution s = sys.solve();
    PolygonSolution sol;
    sol.residual_norm = s.residual_norm;
    sol.elements.resize(E);
    for (int e = 0; e < E; ++e) {
        sol.elements[e].u = std::move(s.fields[3 * e]);
        sol.elements[e].u.set_basis({BasisFamily::Q, 1, 1, 1});
        sol.elements[e].flux_x = std::move(s.fields[3 * e + 1]);
        sol.elements[e].flux_x.set_basis({BasisFamily::Q, 1, 0, 1});
        sol.elements[e].flux_y = std::move(s.fields[3 * e + 2]);
        sol.elements[e].flux_y.set_basis({BasisFamily::Q, 0, 1, 1});
    }
    return sol;
}

double evaluate_polygon(const PolygonMesh& mesh, const PolygonSolution& sol, double x, double y) {
    const int e = mesh.locate(x, y, 1e-10);
    if (e < 0) return std::nan("");
    double xi, eta;
    mesh.elements[e].unmap(x, y, xi, eta);
    return dirichlet::q_eval({1, 1, 1}, sol.elements[e].u, xi, eta);
}

void element_gradient(const TriangleElement& elem, const ElementSolution& es, double xi, double eta, double& ux,
                      double& uy) {
    const double s1 = dirichlet::q_eval({1, 0, 1}, es.flux_x, xi, eta);
    const double s2 = dirichlet::q_eval({0, 1, 1}, es.flux_y, xi, eta);
    // sigma = (1/det) J sigma_hat
    ux = (elem.jac[0][0] * s1 + elem.jac[0][1] * s2) / elem.det;
    uy = (elem.jac[1][0] * s1 + elem.jac[1][1] * s2) / elem.det;
}

InterfaceJumps measure_interface_jumps(const PolygonMesh& mesh, const PolygonSolution& sol, int samples) {
    InterfaceJumps jumps;
    for (const PolygonMesh::Interface& itf : mesh.interfaces) {
        const TriangleElement& ea = mesh.elements[itf.elem_a];
        const TriangleElement& eb = mesh.elements[itf.elem_b];
        // Physical outward normal of elem_a's edge via the inverse-transpose map.
        double nref[2];
        switch (itf.edge_a) {
            case Edge::x0: nref[0] = -1.0; nref[1] = 0.0; break;
            case Edge::y0: nref[0] = 0.0; nref[1] = -1.0; break;
            default: nref[0] = 1.0; nref[1] = 1.0; break;
        }
        // J^{-T} n = (1/det) [d -c; -b a] n
        double nx = (ea.jac[1][1] * nref[0] - ea.jac[1][0] * nref[1]) / ea.det;
        double ny = (-ea.jac[0][1] * nref[0] + ea.jac[0][0] * nref[1]) / ea.det;
        const double nn = std::hypot(nx, ny);
        nx /= nn;
        ny /= nn;
        for (int i = 0; i < samples; ++i) {
            const double s = (i + 0.5) / samples;
            double xa, ya;
            dirichlet::edge_point(itf.edge_a, s, xa, ya);
            const Vec2 p = ea.map(xa, ya);
            const double sb = itf.reversed ? 1.0 - s : s;
            double xb, yb;
            dirichlet::edge_point(itf.edge_b, sb, xb, yb);
            const Vec2 pb = eb.map(xb, yb);
            if (std::abs(p[0] - pb[0]) > 1e-9 || std::abs(p[1] - pb[1]) > 1e-9) {
                throw std::logic_error("measure_interface_jumps: interface parameterizations disagree");
            }
            const double va = dirichlet::q_eval({1, 1, 1}, sol.elements[itf.elem_a].u, xa, ya);
            const double vb = dirichlet::q_eval({1, 1, 1}, sol.elements[itf.elem_b].u, xb, yb);
            jumps.value = std::max(jumps.value, std::abs(va - vb));
            double uxa, uya, uxb, uyb;
            element_gradient(ea, sol.elements[itf.elem_a], xa, ya, uxa, uya);
            element_gradient(eb, sol.elements[itf.elem_b], xb, yb, uxb, uyb);
            jumps.flux = std::max(jumps.flux, std::abs((uxa - uxb) * nx + (uya - uyb) * ny));
        }
    }
    return jumps;
}

}  // namespace trispectral::pde
