#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "trispectral/coefficients.hpp"

namespace trispectral::io {

/// Shortest-exact decimal with up to 17 significant digits; round-trips
/// bit-exactly and is locale independent.
std::string format_double(double v);

/// Coefficient file schema (shared repo-wide):
///   {"basis": {"family": "P"|"weightedP"|"Q"|"legendre-edge",
///              "a": .., "b": .., "c": ..},
///    "degree": N,
///    "blocks": [[f00], [f10, f11], ...]}
std::string coefficients_to_json(const CoefficientVector& v);
void write_coefficients(const std::filesystem::path& path, const CoefficientVector& v);
CoefficientVector read_coefficients(const std::filesystem::path& path);

/// CSV writers used by the CLI: one header row then data rows.
void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows);

/// Diagnostics CSV (block_index, block_norm).
void write_block_norms(const std::filesystem::path& path, const std::vector<double>& norms);

/// FNV-1a hash of a file's bytes, as "fnv1a:<hex>".
std::string file_checksum(const std::filesystem::path& path);

}  // namespace trispectral::io
