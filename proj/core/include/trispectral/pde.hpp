#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "trispectral/blockbanded.hpp"
#include "trispectral/coefficients.hpp"
#include "trispectral/dense.hpp"
#include "trispectral/dirichlet.hpp"
#include "trispectral/mesh.hpp"
#include "trispectral/triops.hpp"

namespace trispectral::pde {

using ScalarField = std::function<double(double, double)>;
using EdgeData = std::function<double(double)>;

/// Solved coefficients plus diagnostics.
struct PdeSolution {
    CoefficientVector u;
    std::vector<double> tau;           // empty for square solves
    double residual_norm = 0.0;        // relative for square, absolute ls residual otherwise
    std::vector<double> block_norms;   // ||u_n|| per degree block
};

/// Evaluate a solution in any of the tagged bases (weighted bases include
/// the weight factor).
double evaluate_solution(const CoefficientVector& u, double x, double y);

/// -------- zero-Dirichlet solves (square banded systems) --------

PdeSolution solve_poisson_zero_dirichlet(const ScalarField& f, int N);
PdeSolution solve_poisson_zero_dirichlet(const CoefficientVector& f111, int N);
PdeSolution solve_helmholtz_zero_dirichlet(const ScalarField& v, double k, const ScalarField& f, int N);
PdeSolution solve_biharmonic(const ScalarField& f, int N);

/// -------- tau-method and stacked least-squares systems --------

/// Laplace with prescribed Dirichlet data on the three edges (x=0 data as
/// a function of y; y=0 and hypotenuse data as functions of x).  Solution
/// in Q^(1,1,1) plus the two tau corrections.
PdeSolution solve_laplace_dirichlet(const EdgeData& f_x0, const EdgeData& g_y0, const EdgeData& h_hyp, int N);

/// Transport u_y = c u_x; which edges carry data depends on c:
/// 0 <= c <= 1 bottom only, c > 1 bottom + hypotenuse, c < 0 bottom + left.
struct TransportData {
    EdgeData bottom;                      // always required
    std::optional<EdgeData> left;         // required for c < 0
    std::optional<EdgeData> hypotenuse;   // required for c > 1
};
PdeSolution solve_transport(double c, const TransportData& data, int N);

/// First-order reformulation of the Poisson problem: u with companions
/// v = u_x in Q^(1,0,1) and w = u_y in Q^(0,1,1).
struct FirstOrderSolution {
    CoefficientVector u, v, w;
    double residual_norm = 0.0;
};
enum class FirstOrderKind { DirichletPoisson, NeumannPoisson };
FirstOrderSolution solve_first_order_system(FirstOrderKind kind, const ScalarField& f, int N);

/// -------- multi-element Helmholtz on a polygon --------

struct ElementSolution {
    CoefficientVector u;       // Q^(1,1,1)
    CoefficientVector flux_x;  // Q^(1,0,1): first Piola flux component
    CoefficientVector flux_y;  // Q^(0,1,1): second Piola flux component
};
struct PolygonSolution {
    std::vector<ElementSolution> elements;
    double residual_norm = 0.0;
};

/// Helmholtz u_xx + u_yy + k^2 u = 0 with Dirichlet data on the polygon
/// boundary; value and normal-derivative continuity imposed across
/// interfaces.  bc receives physical coordinates.
PolygonSolution solve_polygon_helmholtz(const PolygonMesh& mesh, double k, const ScalarField& bc, int N);

/// Value of the polygon solution at a physical point (element located
/// automatically; returns NaN outside the mesh).
double evaluate_polygon(const PolygonMesh& mesh, const PolygonSolution& sol, double x, double y);

/// Physical gradient of the solution on one element at a reference point,
/// reconstructed from the Piola flux fields.
void element_gradient(const TriangleElement& elem, const ElementSolution& es, double xi, double eta, double& ux,
                      double& uy);

struct InterfaceJumps {
    double value = 0.0;  // max |u_a - u_b| over interface samples
    double flux = 0.0;   // max normal-derivative jump
};
InterfaceJumps measure_interface_jumps(const PolygonMesh& mesh, const PolygonSolution& sol, int samples = 20);

/// -------- generic stacked-system assembly --------

/// Dense assembler for rectangular block systems: a few leading scalar
/// (tau) columns followed by degree-graded coefficient fields.  Rows are
/// appended group by group; every solve goes through Householder QR.
class SystemBuilder {
public:
    SystemBuilder(int tau_columns, std::vector<int> field_block_counts);

    struct Term {
        int field = 0;
        const BlockBandedMatrix* op = nullptr;
        double scale = 1.0;
        bool flip_rows = false;  // multiply row block n by (-1)^n
    };

    /// Appends one row group; all terms must have identical row structure.
    /// Returns the starting global row index of the group.
    int add_rows(std::span<const Term> terms, std::span<const double> rhs = {});
    /// Single scalar row: entry 1 at (field, block n, index k).
    int add_pin_row(int field, int n, int k, double rhs_value);
    void set_tau(int row, int tau_index, double value);

    int rows() const { return total_rows_; }
    int cols() const;

    struct Solution {
        std::vector<double> tau;
        std::vector<CoefficientVector> fields;  // tagged by caller afterwards
        double residual_norm = 0.0;
    };
    Solution solve() const;

private:
    int tau_columns_;
    std::vector<int> field_blocks_;
    std::vector<int> field_offsets_;
    int total_rows_ = 0;
    struct StoredTerm {
        int field = 0;
        double scale = 1.0;
        BlockBandedMatrix op;  // already row-flipped when requested
    };
    struct Group {
        int start_row = 0;
        int nrows = 0;
        std::vector<StoredTerm> terms;
        std::vector<double> rhs;
        int pin_field = -1, pin_n = 0, pin_k = 0;
    };
    std::vector<Group> groups_;
    std::vector<std::tuple<int, int, double>> tau_entries_;
};

}  // namespace trispectral::pde
