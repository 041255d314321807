#include "trispectral/coefficients.hpp"

#include <cmath>
#include <stdexcept>

namespace trispectral {

std::string to_string(const BasisTag& tag) {
    switch (tag.family) {
        case BasisFamily::P:
            return "P(" + std::to_string(tag.a) + "," + std::to_string(tag.b) + "," + std::to_string(tag.c) + ")";
        case BasisFamily::WeightedP:
            return "weightedP(" + std::to_string(tag.a) + "," + std::to_string(tag.b) + "," +
                   std::to_string(tag.c) + ")";
        case BasisFamily::Q:
            return "Q(" + std::to_string(tag.a) + "," + std::to_string(tag.b) + "," + std::to_string(tag.c) + ")";
        case BasisFamily::LegendreEdge:
            return "legendre-edge";
    }
    return "?";
}

CoefficientVector::CoefficientVector(BasisTag tag, std::vector<std::vector<double>> blocks)
    : tag_(tag), blocks_(std::move(blocks)) {}

CoefficientVector CoefficientVector::zeros(BasisTag tag, int degree) {
    std::vector<std::vector<double>> blocks(degree + 1);
    for (int n = 0; n <= degree; ++n) {
        blocks[n].assign(tag.family == BasisFamily::LegendreEdge ? 1 : n + 1, 0.0);
    }
    return CoefficientVector(tag, std::move(blocks));
}

CoefficientVector CoefficientVector::unit(BasisTag tag, int degree, int n, int k) {
    CoefficientVector v = zeros(tag, degree);
    v.at(n, k) = 1.0;
    return v;
}

int CoefficientVector::size() const {
    int total = 0;
    for (const auto& b : blocks_) total += static_cast<int>(b.size());
    return total;
}

std::vector<double> CoefficientVector::flatten() const {
    std::vector<double> flat;
    flat.reserve(size());
    for (const auto& b : blocks_) flat.insert(flat.end(), b.begin(), b.end());
    return flat;
}

CoefficientVector CoefficientVector::unflatten(BasisTag tag, std::span<const double> flat,
                                               std::span<const int> block_sizes) {
    std::vector<std::vector<double>> blocks(block_sizes.size());
    size_t pos = 0;
    for (size_t n = 0; n < block_sizes.size(); ++n) {
        if (pos + block_sizes[n] > flat.size()) throw std::invalid_argument("unflatten: flat vector too short");
        blocks[n].assign(flat.begin() + pos, flat.begin() + pos + block_sizes[n]);
        pos += block_sizes[n];
    }
    if (pos != flat.size()) throw std::invalid_argument("unflatten: flat vector too long");
    return CoefficientVector(tag, std::move(blocks));
}

std::vector<double> CoefficientVector::block_norms() const {
    std::vector<double> norms(blocks_.size());
    for (size_t n = 0; n < blocks_.size(); ++n) {
        double s = 0.0;
        for (double v : blocks_[n]) s += v * v;
        norms[n] = std::sqrt(s);
    }
    return norms;
}

void CoefficientVector::trim_trailing_zero_blocks(double tol) {
    while (blocks_.size() > 1) {
        bool all_zero = true;
        for (double v : blocks_.back()) {
            if (std::abs(v) > tol) {
                all_zero = false;
                break;
            }
        }
        if (!all_zero) break;
        blocks_.pop_back();
    }
}

void CoefficientVector::pad_to_blocks(int nblocks) {
    while (static_cast<int>(blocks_.size()) < nblocks) {
        const int n = static_cast<int>(blocks_.size());
        blocks_.emplace_back(tag_.family == BasisFamily::LegendreEdge ? 1 : n + 1, 0.0);
    }
}

std::vector<int> degree_graded_sizes(int nblocks) {
    std::vector<int> sizes(nblocks);
    for (int n = 0; n < nblocks; ++n) sizes[n] = n + 1;
    return sizes;
}

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

}  // namespace trispectral
