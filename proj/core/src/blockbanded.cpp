#include "trispectral/blockbanded.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace trispectral {

BlockProfile compose_profiles(const BlockProfile& a, const BlockProfile& b) {
    return {a.block_lower + b.block_lower, a.block_upper + b.block_upper, a.sub_lower + b.sub_lower,
            a.sub_upper + b.sub_upper};
}

BlockProfile union_profiles(const BlockProfile& a, const BlockProfile& b) {
    return {std::max(a.block_lower, b.block_lower), std::max(a.block_upper, b.block_upper),
            std::max(a.sub_lower, b.sub_lower), std::max(a.sub_upper, b.sub_upper)};
}

BandMatrix::BandMatrix(int n, int lower, int upper) : n_(n), kl_(lower), ku_(upper) {
    if (n < 1 || lower < 0 || upper < 0) throw std::invalid_argument("BandMatrix: bad shape");
    data_.assign(static_cast<size_t>(kl_ + ku_ + 1) * n_, 0.0);
}

double BandMatrix::at(int i, int j) const {
    const int d = i - j;
    if (d > kl_ || -d > ku_) return 0.0;
    return data_[static_cast<size_t>(d + ku_) + static_cast<size_t>(j) * (kl_ + ku_ + 1)];
}

void BandMatrix::set(int i, int j, double v) {
    const int d = i - j;
    if (d > kl_ || -d > ku_) throw std::out_of_range("BandMatrix::set outside band");
    data_[static_cast<size_t>(d + ku_) + static_cast<size_t>(j) * (kl_ + ku_ + 1)] = v;
}

namespace {

std::vector<int> prefix_sums(const std::vector<int>& sizes) {
    std::vector<int> off(sizes.size() + 1, 0);
    for (size_t i = 0; i < sizes.size(); ++i) off[i + 1] = off[i] + sizes[i];
    return off;
}

}  // namespace

BlockBandedMatrix::BlockBandedMatrix(std::vector<int> row_block_sizes, std::vector<int> col_block_sizes,
                                     BlockProfile profile)
    : row_sizes_(std::move(row_block_sizes)), col_sizes_(std::move(col_block_sizes)), prof_(profile) {
    row_offsets_ = prefix_sums(row_sizes_);
    col_offsets_ = prefix_sums(col_sizes_);
    band_height_ = std::max(0, prof_.sub_lower + prof_.sub_upper + 1);
    slot_offsets_.assign(static_cast<size_t>(num_row_blocks()) * num_col_blocks(), -1);
    long long total = 0;
    for (int j = 0; j < num_col_blocks(); ++j) {
        for (int i = std::max(0, j - prof_.block_upper);
             i <= std::min(num_row_blocks() - 1, j + prof_.block_lower); ++i) {
            slot_offsets_[static_cast<size_t>(i) * num_col_blocks() + j] = total;
            total += static_cast<long long>(band_height_) * col_sizes_[j];
        }
    }
    payload_.assign(total, 0.0);
}

BlockBandedMatrix BlockBandedMatrix::degree_graded(int num_row_blocks, int num_col_blocks, BlockProfile profile) {
    return BlockBandedMatrix(degree_graded_sizes(num_row_blocks), degree_graded_sizes(num_col_blocks), profile);
}

BlockBandedMatrix BlockBandedMatrix::identity(std::span<const int> block_sizes) {
    std::vector<int> sizes(block_sizes.begin(), block_sizes.end());
    BlockBandedMatrix m(sizes, sizes, BlockProfile{0, 0, 0, 0});
    for (int i = 0; i < m.num_row_blocks(); ++i) {
        for (int r = 0; r < sizes[i]; ++r) m.set(i, i, r, r, 1.0);
    }
    return m;
}

int BlockBandedMatrix::slot_index(int i, int j) const {
    if (i < 0 || j < 0 || i >= num_row_blocks() || j >= num_col_blocks()) return -1;
    const long long off = slot_offsets_[static_cast<size_t>(i) * num_col_blocks() + j];
    return off < 0 ? -1 : 1;
}

bool BlockBandedMatrix::block_stored(int i, int j) const { return slot_index(i, j) >= 0; }

bool BlockBandedMatrix::entry_stored(int i, int j, int r, int c) const {
    if (!block_stored(i, j)) return false;
    const int d = r - c;
    return d <= prof_.sub_lower && -d <= prof_.sub_upper;
}

double BlockBandedMatrix::at(int i, int j, int r, int c) const {
    if (i < 0 || j < 0 || i >= num_row_blocks() || j >= num_col_blocks()) return 0.0;
    const long long off = slot_offsets_[static_cast<size_t>(i) * num_col_blocks() + j];
    if (off < 0) return 0.0;
    const int d = r - c;
    if (d > prof_.sub_lower || -d > prof_.sub_upper) return 0.0;
    return payload_[off + (d + prof_.sub_upper) + static_cast<long long>(c) * band_height_];
}

void BlockBandedMatrix::set(int i, int j, int r, int c, double v) {
    const long long off = slot_offsets_[static_cast<size_t>(i) * num_col_blocks() + j];
    const int d = r - c;
    if (off < 0 || d > prof_.sub_lower || -d > prof_.sub_upper) {
        throw std::out_of_range("BlockBandedMatrix::set outside the declared profile (block " + std::to_string(i) +
                                "," + std::to_string(j) + " entry " + std::to_string(r) + "," + std::to_string(c) +
                                ")");
    }
    payload_[off + (d + prof_.sub_upper) + static_cast<long long>(c) * band_height_] = v;
}

void BlockBandedMatrix::add_at(int i, int j, int r, int c, double v) {
    const long long off = slot_offsets_[static_cast<size_t>(i) * num_col_blocks() + j];
    const int d = r - c;
    if (off < 0 || d > prof_.sub_lower || -d > prof_.sub_upper) {
        throw std::out_of_range("BlockBandedMatrix::add_at outside the declared profile");
    }
    payload_[off + (d + prof_.sub_upper) + static_cast<long long>(c) * band_height_] += v;
}

long long BlockBandedMatrix::nnz() const {
    long long count = 0;
    for_each_nonzero([&](int, int, double) { ++count; });
    return count;
}

void BlockBandedMatrix::for_each_nonzero(const std::function<void(int, int, double)>& fn) const {
    for (int j = 0; j < num_col_blocks(); ++j) {
        for (int i = std::max(0, j - prof_.block_upper);
             i <= std::min(num_row_blocks() - 1, j + prof_.block_lower); ++i) {
            const long long off = slot_offsets_[static_cast<size_t>(i) * num_col_blocks() + j];
            if (off < 0) continue;
            for (int c = 0; c < col_sizes_[j]; ++c) {
                const int rlo = std::max(0, c - prof_.sub_upper);
                const int rhi = std::min(row_sizes_[i] - 1, c + prof_.sub_lower);
                for (int r = rlo; r <= rhi; ++r) {
                    const double v = payload_[off + (r - c + prof_.sub_upper) + static_cast<long long>(c) * band_height_];
                    if (v != 0.0) fn(row_offsets_[i] + r, col_offsets_[j] + c, v);
                }
            }
        }
    }
}

BlockBandedMatrix BlockBandedMatrix::scaled(double factor) const {
    BlockBandedMatrix out = *this;
    for (double& v : out.payload_) v *= factor;
    return out;
}

void BlockBandedMatrix::scale_block_rows(const std::function<double(int)>& factor) {
    for (int i = 0; i < num_row_blocks(); ++i) {
        const double f = factor(i);
        for (int j = std::max(0, i - prof_.block_lower);
             j <= std::min(num_col_blocks() - 1, i + prof_.block_upper); ++j) {
            const long long off = slot_offsets_[static_cast<size_t>(i) * num_col_blocks() + j];
            if (off < 0) continue;
            for (int c = 0; c < col_sizes_[j]; ++c) {
                for (int d = 0; d < band_height_; ++d) {
                    payload_[off + d + static_cast<long long>(c) * band_height_] *= f;
                }
            }
        }
    }
}

BlockBandedMatrix BlockBandedMatrix::trimmed(int num_row_blocks_out, int num_col_blocks_out) const {
    num_row_blocks_out = std::min(num_row_blocks_out, num_row_blocks());
    num_col_blocks_out = std::min(num_col_blocks_out, num_col_blocks());
    std::vector<int> rs(row_sizes_.begin(), row_sizes_.begin() + num_row_blocks_out);
    std::vector<int> cs(col_sizes_.begin(), col_sizes_.begin() + num_col_blocks_out);
    BlockBandedMatrix out(std::move(rs), std::move(cs), prof_);
    for (int j = 0; j < out.num_col_blocks(); ++j) {
        for (int i = std::max(0, j - prof_.block_upper);
             i <= std::min(out.num_row_blocks() - 1, j + prof_.block_lower); ++i) {
            const long long src = slot_offsets_[static_cast<size_t>(i) * num_col_blocks() + j];
            const long long dst = out.slot_offsets_[static_cast<size_t>(i) * out.num_col_blocks() + j];
            if (src < 0 || dst < 0) continue;
            std::copy_n(payload_.begin() + src, static_cast<long long>(band_height_) * col_sizes_[j],
                        out.payload_.begin() + dst);
        }
    }
    return out;
}

BlockBandedMatrix BlockBandedMatrix::extended_rows(std::span<const int> extra_row_sizes) const {
    std::vector<int> rs = row_sizes_;
    rs.insert(rs.end(), extra_row_sizes.begin(), extra_row_sizes.end());
    BlockBandedMatrix out(std::move(rs), col_sizes_, prof_);
    for (int j = 0; j < num_col_blocks(); ++j) {
        for (int i = std::max(0, j - prof_.block_upper);
             i <= std::min(num_row_blocks() - 1, j + prof_.block_lower); ++i) {
            const long long src = slot_offsets_[static_cast<size_t>(i) * num_col_blocks() + j];
            const long long dst = out.slot_offsets_[static_cast<size_t>(i) * out.num_col_blocks() + j];
            if (src < 0 || dst < 0) continue;
            std::copy_n(payload_.begin() + src, static_cast<long long>(band_height_) * col_sizes_[j],
                        out.payload_.begin() + dst);
        }
    }
    return out;
}

BlockBandedMatrix BlockBandedMatrix::with_profile(BlockProfile profile) const {
    BlockBandedMatrix out(row_sizes_, col_sizes_, profile);
    bool ok = true;
    for (int j = 0; j < num_col_blocks(); ++j) {
        for (int i = std::max(0, j - prof_.block_upper);
             i <= std::min(num_row_blocks() - 1, j + prof_.block_lower); ++i) {
            const long long off = slot_offsets_[static_cast<size_t>(i) * num_col_blocks() + j];
            if (off < 0) continue;
            for (int c = 0; c < col_sizes_[j]; ++c) {
                const int rlo = std::max(0, c - prof_.sub_upper);
                const int rhi = std::min(row_sizes_[i] - 1, c + prof_.sub_lower);
                for (int r = rlo; r <= rhi; ++r) {
                    const double v = payload_[off + (r - c + prof_.sub_upper) + static_cast<long long>(c) * band_height_];
                    if (v == 0.0) continue;
                    if (!out.entry_stored(i, j, r, c)) {
                        ok = false;
                    } else {
                        out.set(i, j, r, c, v);
                    }
                }
            }
        }
    }
    if (!ok) throw std::invalid_argument("with_profile: new profile does not contain every nonzero");
    return out;
}

std::vector<double> BlockBandedMatrix::matvec_flat(std::span<const double> v) const {
    if (static_cast<int>(v.size()) != cols()) {
        throw std::invalid_argument("matvec: dimension mismatch (" + std::to_string(v.size()) + " vs " +
                                    std::to_string(cols()) + ")");
    }
    std::vector<double> out(rows(), 0.0);
    for (int j = 0; j < num_col_blocks(); ++j) {
        for (int i = std::max(0, j - prof_.block_upper);
             i <= std::min(num_row_blocks() - 1, j + prof_.block_lower); ++i) {
            const long long off = slot_offsets_[static_cast<size_t>(i) * num_col_blocks() + j];
            if (off < 0) continue;
            const int roff = row_offsets_[i], coff = col_offsets_[j];
            for (int c = 0; c < col_sizes_[j]; ++c) {
                const double vc = v[coff + c];
                if (vc == 0.0) continue;
                const int rlo = std::max(0, c - prof_.sub_upper);
                const int rhi = std::min(row_sizes_[i] - 1, c + prof_.sub_lower);
                for (int r = rlo; r <= rhi; ++r) {
                    out[roff + r] += payload_[off + (r - c + prof_.sub_upper) + static_cast<long long>(c) * band_height_] * vc;
                }
            }
        }
    }
    return out;
}

CoefficientVector matvec(const BlockBandedMatrix& a, const CoefficientVector& v) {
    if (a.num_col_blocks() != v.num_blocks()) {
        throw std::invalid_argument("matvec: column block structure does not match vector (" +
                                    std::to_string(a.num_col_blocks()) + " vs " + std::to_string(v.num_blocks()) +
                                    ")");
    }
    for (int j = 0; j < a.num_col_blocks(); ++j) {
        if (a.col_block_sizes()[j] != static_cast<int>(v.blocks()[j].size())) {
            throw std::invalid_argument("matvec: block size mismatch at block " + std::to_string(j));
        }
    }
    const std::vector<double> flat = v.flatten();
    const std::vector<double> out = a.matvec_flat(flat);
    return CoefficientVector::unflatten(v.basis(), out, a.row_block_sizes());
}

BlockBandedMatrix multiply(const BlockBandedMatrix& a, const BlockBandedMatrix& b) {
    if (a.col_sizes_ != b.row_sizes_) {
        throw std::invalid_argument("multiply: inner block structures not conformable");
    }
    BlockBandedMatrix out(a.row_sizes_, b.col_sizes_, compose_profiles(a.prof_, b.prof_));
    // c(i,j) += a(i,k) b(k,j) over stored blocks, banded little products.
    for (int j = 0; j < b.num_col_blocks(); ++j) {
        for (int k = std::max(0, j - b.prof_.block_upper);
             k <= std::min(b.num_row_blocks() - 1, j + b.prof_.block_lower); ++k) {
            const long long boff = b.slot_offsets_[static_cast<size_t>(k) * b.num_col_blocks() + j];
            if (boff < 0) continue;
            for (int i = std::max(0, k - a.prof_.block_upper);
                 i <= std::min(a.num_row_blocks() - 1, k + a.prof_.block_lower); ++i) {
                const long long aoff = a.slot_offsets_[static_cast<size_t>(i) * a.num_col_blocks() + k];
                if (aoff < 0) continue;
                const long long ooff = out.slot_offsets_[static_cast<size_t>(i) * out.num_col_blocks() + j];
                if (ooff < 0) continue;  // out of range (clipped by matrix edge)
                const int rows_i = a.row_sizes_[i], mid = a.col_sizes_[k], cols_j = b.col_sizes_[j];
                for (int c = 0; c < cols_j; ++c) {
                    const int qlo = std::max(0, c - b.prof_.sub_upper);
                    const int qhi = std::min(mid - 1, c + b.prof_.sub_lower);
                    for (int q = qlo; q <= qhi; ++q) {
                        const double bv =
                            b.payload_[boff + (q - c + b.prof_.sub_upper) + static_cast<long long>(c) * b.band_height_];
                        if (bv == 0.0) continue;
                        const int rlo = std::max(0, q - a.prof_.sub_upper);
                        const int rhi = std::min(rows_i - 1, q + a.prof_.sub_lower);
                        for (int r = rlo; r <= rhi; ++r) {
                            const double av =
                                a.payload_[aoff + (r - q + a.prof_.sub_upper) + static_cast<long long>(q) * a.band_height_];
                            if (av == 0.0) continue;
                            out.payload_[ooff + (r - c + out.prof_.sub_upper) +
                                         static_cast<long long>(c) * out.band_height_] += av * bv;
                        }
                    }
                }
            }
        }
    }
    return out;
}

BlockBandedMatrix add(const BlockBandedMatrix& a, const BlockBandedMatrix& b, double alpha, double beta) {
    if (a.row_sizes_ != b.row_sizes_ || a.col_sizes_ != b.col_sizes_) {
        throw std::invalid_argument("add: block structures differ");
    }
    BlockBandedMatrix out(a.row_sizes_, a.col_sizes_, union_profiles(a.prof_, b.prof_));
    auto accumulate = [&out](const BlockBandedMatrix& m, double factor) {
        if (factor == 0.0) return;
        for (int j = 0; j < m.num_col_blocks(); ++j) {
            for (int i = std::max(0, j - m.prof_.block_upper);
                 i <= std::min(m.num_row_blocks() - 1, j + m.prof_.block_lower); ++i) {
                const long long off = m.slot_offsets_[static_cast<size_t>(i) * m.num_col_blocks() + j];
                if (off < 0) continue;
                for (int c = 0; c < m.col_sizes_[j]; ++c) {
                    const int rlo = std::max(0, c - m.prof_.sub_upper);
                    const int rhi = std::min(m.row_sizes_[i] - 1, c + m.prof_.sub_lower);
                    for (int r = rlo; r <= rhi; ++r) {
                        const double v =
                            m.payload_[off + (r - c + m.prof_.sub_upper) + static_cast<long long>(c) * m.band_height_];
                        if (v != 0.0) out.add_at(i, j, r, c, factor * v);
                    }
                }
            }
        }
    };
    accumulate(a, alpha);
    accumulate(b, beta);
    return out;
}

BlockBandedMatrix compose_chain(std::span<const BlockBandedMatrix> chain) {
    if (chain.empty()) throw std::invalid_argument("compose_chain: empty chain");
    BlockBandedMatrix out = chain.back();
    for (int i = static_cast<int>(chain.size()) - 2; i >= 0; --i) out = multiply(chain[i], out);
    return out;
}

BandMatrix to_band(const BlockBandedMatrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("to_band: matrix must be square overall");
    const BlockProfile& p = a.profile();
    // Tight scalar bandwidths implied by the declared profile.
    int kl = 0, ku = 0;
    for (int j = 0; j < a.num_col_blocks(); ++j) {
        const int cols_j = a.col_block_sizes()[j];
        if (cols_j == 0) continue;
        for (int i = std::max(0, j - p.block_upper); i <= std::min(a.num_row_blocks() - 1, j + p.block_lower);
             ++i) {
            if (!a.block_stored(i, j)) continue;
            const int rows_i = a.row_block_sizes()[i];
            if (rows_i == 0) continue;
            const int base = a.row_offset(i) - a.col_offset(j);
            const int max_rc = std::min(p.sub_lower, rows_i - 1);
            const int min_rc = std::max(-p.sub_upper, -(cols_j - 1));
            if (max_rc >= min_rc) {
                kl = std::max(kl, base + max_rc);
                ku = std::max(ku, -(base + min_rc));
            }
        }
    }
    BandMatrix band(a.rows(), std::max(kl, 0), std::max(ku, 0));
    a.for_each_nonzero([&](int i, int j, double v) { band.set(i, j, v); });
    return band;
}

BandLU::BandLU(const BandMatrix& a) : n_(a.size()), kl_(a.lower()), ku_(a.lower() + a.upper()) {
    const int ld = kl_ + ku_ + 1;
    ab_.assign(static_cast<size_t>(ld) * n_, 0.0);
    ipiv_.resize(n_);
    auto AB = [&](int i, int j) -> double& { return ab_[static_cast<size_t>(i - j + ku_) + static_cast<size_t>(j) * ld]; };
    double scale = 0.0;
    for (int j = 0; j < n_; ++j) {
        for (int i = std::max(0, j - a.upper()); i <= std::min(n_ - 1, j + a.lower()); ++i) {
            const double v = a.at(i, j);
            AB(i, j) = v;
            scale = std::max(scale, std::abs(v));
        }
    }
    const double tol = scale * std::numeric_limits<double>::epsilon();
    for (int j = 0; j < n_; ++j) {
        const int ilast = std::min(n_ - 1, j + kl_);
        int piv = j;
        double pmax = std::abs(AB(j, j));
        for (int i = j + 1; i <= ilast; ++i) {
            const double v = std::abs(AB(i, j));
            if (v > pmax) {
                pmax = v;
                piv = i;
            }
        }
        if (!(pmax > tol)) {
            throw std::runtime_error("band_lu: pivot " + std::to_string(j) + " singular to working precision");
        }
        ipiv_[j] = piv;
        const int jlast = std::min(n_ - 1, j + ku_);
        if (piv != j) {
            for (int c = j; c <= jlast; ++c) std::swap(AB(j, c), AB(piv, c));
        }
        const double djj = AB(j, j);
        for (int i = j + 1; i <= ilast; ++i) {
            const double l = AB(i, j) / djj;
            AB(i, j) = l;
            if (l == 0.0) continue;
            for (int c = j + 1; c <= jlast; ++c) AB(i, c) -= l * AB(j, c);
        }
    }
}

std::vector<double> BandLU::solve(std::span<const double> rhs) const {
    if (static_cast<int>(rhs.size()) != n_) throw std::invalid_argument("BandLU::solve: rhs size mismatch");
    const int ld = kl_ + ku_ + 1;
    auto AB = [&](int i, int j) -> double {
        return ab_[static_cast<size_t>(i - j + ku_) + static_cast<size_t>(j) * ld];
    };
    std::vector<double> x(rhs.begin(), rhs.end());
    for (int j = 0; j < n_; ++j) {
        if (ipiv_[j] != j) std::swap(x[j], x[ipiv_[j]]);
        const double xj = x[j];
        if (xj == 0.0) continue;
        for (int i = j + 1; i <= std::min(n_ - 1, j + kl_); ++i) x[i] -= AB(i, j) * xj;
    }
    for (int j = n_ - 1; j >= 0; --j) {
        x[j] /= AB(j, j);
        const double xj = x[j];
        if (xj == 0.0) continue;
        for (int i = std::max(0, j - ku_); i < j; ++i) x[i] -= AB(i, j) * xj;
    }
    return x;
}

std::vector<double> band_lu_solve(const BandMatrix& a, std::span<const double> rhs) {
    return BandLU(a).solve(rhs);
}

}  // namespace trispectral
