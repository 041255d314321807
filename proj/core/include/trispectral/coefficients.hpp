#pragma once

#include <span>
#include <string>
#include <vector>

namespace trispectral {

/// Which expansion family a coefficient vector lives in.
enum class BasisFamily {
    P,             ///< Jacobi polynomials on the triangle, parameters (a,b,c)
    WeightedP,     ///< x^a y^b z^c times the P^{(a,b,c)} family
    Q,             ///< Dirichlet basis with edge flags (a,b,c) in {0,1}
    LegendreEdge,  ///< shifted Legendre coefficients of an edge trace
};

struct BasisTag {
    BasisFamily family = BasisFamily::P;
    int a = 0, b = 0, c = 0;

    bool operator==(const BasisTag&) const = default;
};

std::string to_string(const BasisTag& tag);

/// Expansion coefficients blocked by total degree: block n holds the n+1
/// values f_{n,0..n}.  Legendre-edge vectors use blocks of size one.
class CoefficientVector {
public:
    CoefficientVector() = default;
    CoefficientVector(BasisTag tag, std::vector<std::vector<double>> blocks);

    /// All-zero vector with blocks 0..degree.
    static CoefficientVector zeros(BasisTag tag, int degree);
    /// Unit vector for mode (n,k).
    static CoefficientVector unit(BasisTag tag, int degree, int n, int k);

    const BasisTag& basis() const { return tag_; }
    void set_basis(BasisTag tag) { tag_ = tag; }

    int num_blocks() const { return static_cast<int>(blocks_.size()); }
    int degree() const { return num_blocks() - 1; }
    const std::vector<std::vector<double>>& blocks() const { return blocks_; }
    std::vector<std::vector<double>>& blocks() { return blocks_; }

    double at(int n, int k) const { return blocks_[n][k]; }
    double& at(int n, int k) { return blocks_[n][k]; }

    /// Total number of scalar entries.
    int size() const;

    /// Concatenate blocks in degree-graded order.
    std::vector<double> flatten() const;
    /// Rebuild from a flat vector using this vector's block sizes.
    static CoefficientVector unflatten(BasisTag tag, std::span<const double> flat,
                                       std::span<const int> block_sizes);

    /// Euclidean norm of each block.
    std::vector<double> block_norms() const;

    /// Drop trailing blocks that are identically zero (always keeps block 0).
    void trim_trailing_zero_blocks(double tol = 0.0);
    /// Append zero blocks until there are `nblocks` blocks (degree-graded sizes).
    void pad_to_blocks(int nblocks);

private:
    BasisTag tag_;
    std::vector<std::vector<double>> blocks_;
};

/// Block sizes 1,2,...,nblocks of a degree-graded vector.
std::vector<int> degree_graded_sizes(int nblocks);

/// Fixed-order pairwise summation (deterministic regardless of chunking).
double pairwise_sum(std::span<const double> v);

}  // namespace trispectral
