#pragma once

#include <functional>
#include <span>
#include <vector>

#include "trispectral/coefficients.hpp"

namespace trispectral {

/// Sparsity profile of a block-banded matrix with banded blocks.
/// Block (i,j) is stored iff -block_upper <= i-j <= block_lower; within a
/// stored block, entry (r,c) is retained iff -sub_upper <= r-c <= sub_lower.
/// Negative values are allowed (a purely block-superdiagonal operator has
/// block_lower = -1).
struct BlockProfile {
    int block_lower = 0;
    int block_upper = 0;
    int sub_lower = 0;
    int sub_upper = 0;

    bool operator==(const BlockProfile&) const = default;
};

/// Componentwise sum (the exact support bound of a product).
BlockProfile compose_profiles(const BlockProfile& a, const BlockProfile& b);
/// Componentwise max (the support bound of a sum).
BlockProfile union_profiles(const BlockProfile& a, const BlockProfile& b);

/// Scalar banded matrix, diagonal-major storage.
class BandMatrix {
public:
    BandMatrix(int n, int lower, int upper);

    int size() const { return n_; }
    int lower() const { return kl_; }
    int upper() const { return ku_; }

    double at(int i, int j) const;
    void set(int i, int j, double v);

private:
    int n_, kl_, ku_;
    std::vector<double> data_;  // (kl+ku+1) x n, entry (i,j) at [(i-j+ku) + j*ld]
};

/// Block-banded matrix with banded blocks; the container for every
/// operator in this project.  Entries outside the declared profile read
/// as exactly zero; writing outside the profile throws.
class BlockBandedMatrix {
public:
    BlockBandedMatrix() = default;
    BlockBandedMatrix(std::vector<int> row_block_sizes, std::vector<int> col_block_sizes, BlockProfile profile);

    /// Degree-graded blocks (block n has n+1 rows/cols).
    static BlockBandedMatrix degree_graded(int num_row_blocks, int num_col_blocks, BlockProfile profile);
    static BlockBandedMatrix identity(std::span<const int> block_sizes);

    const BlockProfile& profile() const { return prof_; }
    const std::vector<int>& row_block_sizes() const { return row_sizes_; }
    const std::vector<int>& col_block_sizes() const { return col_sizes_; }
    int num_row_blocks() const { return static_cast<int>(row_sizes_.size()); }
    int num_col_blocks() const { return static_cast<int>(col_sizes_.size()); }
    int rows() const { return row_offsets_.back(); }
    int cols() const { return col_offsets_.back(); }
    int row_offset(int i) const { return row_offsets_[i]; }
    int col_offset(int j) const { return col_offsets_[j]; }

    bool block_stored(int i, int j) const;
    bool entry_stored(int i, int j, int r, int c) const;

    /// Entry (r,c) of block (i,j); zero outside the profile.
    double at(int i, int j, int r, int c) const;
    void set(int i, int j, int r, int c, double v);
    void add_at(int i, int j, int r, int c, double v);

    /// Stored entries with nonzero value.
    long long nnz() const;
    /// Visit stored nonzero entries as (global_row, global_col, value).
    void for_each_nonzero(const std::function<void(int, int, double)>& fn) const;

    BlockBandedMatrix scaled(double factor) const;
    /// Multiply every entry of block row i by factor(i).
    void scale_block_rows(const std::function<double(int)>& factor);

    /// Keep only the leading row/column blocks.
    BlockBandedMatrix trimmed(int num_row_blocks, int num_col_blocks) const;
    /// Append zero row blocks of the given sizes.
    BlockBandedMatrix extended_rows(std::span<const int> extra_row_sizes) const;
    /// Re-declare the stored profile (must contain every current nonzero).
    BlockBandedMatrix with_profile(BlockProfile profile) const;

    std::vector<double> matvec_flat(std::span<const double> v) const;

private:
    std::vector<int> row_sizes_, col_sizes_;
    std::vector<int> row_offsets_, col_offsets_;  // size +1 prefix sums
    BlockProfile prof_;
    int band_height_ = 0;                 // sub_lower + sub_upper + 1, clamped at 0
    std::vector<long long> slot_offsets_; // payload offset per stored block slot
    std::vector<double> payload_;         // per block: band_height_ x cols, column-of-diagonals

    int slot_index(int i, int j) const;   // -1 if not stored
    friend BlockBandedMatrix multiply(const BlockBandedMatrix&, const BlockBandedMatrix&);
    friend BlockBandedMatrix add(const BlockBandedMatrix&, const BlockBandedMatrix&, double, double);
};

/// Exact banded product; bandwidths add componentwise.
BlockBandedMatrix multiply(const BlockBandedMatrix& a, const BlockBandedMatrix& b);
/// alpha*A + beta*B on the union profile.
BlockBandedMatrix add(const BlockBandedMatrix& a, const BlockBandedMatrix& b, double alpha = 1.0,
                      double beta = 1.0);
/// Right-to-left product of a chain (chain.front() applied last).
BlockBandedMatrix compose_chain(std::span<const BlockBandedMatrix> chain);

CoefficientVector matvec(const BlockBandedMatrix& a, const CoefficientVector& v);

/// Flatten a square block-banded matrix to a scalar band matrix under
/// degree-graded ordering.  Scalar bandwidths are the tight bounds implied
/// by the declared block and sub-bandwidths.
BandMatrix to_band(const BlockBandedMatrix& a);

/// Band LU with partial pivoting (factored once, reusable solves).
class BandLU {
public:
    explicit BandLU(const BandMatrix& a);
    std::vector<double> solve(std::span<const double> rhs) const;

private:
    int n_, kl_, ku_;  // ku_ is the expanded upper bandwidth kl+ku
    std::vector<double> ab_;
    std::vector<int> ipiv_;
};

/// Factor-and-solve convenience.  Throws std::runtime_error naming the
/// pivot index when a pivot is singular to working precision.
std::vector<double> band_lu_solve(const BandMatrix& a, std::span<const double> rhs);

}  // namespace trispectral
