#include "trispectral/io.hpp"

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace trispectral::io {

std::string format_double(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::string family_name(BasisFamily f) {
    switch (f) {
        case BasisFamily::P: return "P";
        case BasisFamily::WeightedP: return "weightedP";
        case BasisFamily::Q: return "Q";
        case BasisFamily::LegendreEdge: return "legendre-edge";
    }
    throw std::logic_error("bad family");
}

BasisFamily family_from(const std::string& s) {
    if (s == "P") return BasisFamily::P;
    if (s == "weightedP") return BasisFamily::WeightedP;
    if (s == "Q") return BasisFamily::Q;
    if (s == "legendre-edge") return BasisFamily::LegendreEdge;
    throw std::invalid_argument("unknown basis family '" + s + "'");
}

}  // namespace

std::string coefficients_to_json(const CoefficientVector& v) {
    std::ostringstream out;
    const BasisTag& tag = v.basis();
    out << "{\n  \"basis\": {\"family\": \"" << family_name(tag.family) << "\", \"a\": " << tag.a
        << ", \"b\": " << tag.b << ", \"c\": " << tag.c << "},\n";
    out << "  \"degree\": " << v.degree() << ",\n  \"blocks\": [\n";
    for (int n = 0; n < v.num_blocks(); ++n) {
        out << "    [";
        const auto& blk = v.blocks()[n];
        for (size_t k = 0; k < blk.size(); ++k) {
            if (k) out << ", ";
            out << format_double(blk[k]);
        }
        out << (n + 1 < v.num_blocks() ? "],\n" : "]\n");
    }
    out << "  ]\n}\n";
    return out.str();
}

void write_coefficients(const std::filesystem::path& path, const CoefficientVector& v) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << coefficients_to_json(v);
}

CoefficientVector read_coefficients(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    nlohmann::json j = nlohmann::json::parse(f);
    BasisTag tag;
    tag.family = family_from(j.at("basis").at("family").get<std::string>());
    tag.a = j.at("basis").value("a", 0);
    tag.b = j.at("basis").value("b", 0);
    tag.c = j.at("basis").value("c", 0);
    std::vector<std::vector<double>> blocks;
    for (const auto& blk : j.at("blocks")) blocks.push_back(blk.get<std::vector<double>>());
    for (size_t n = 0; n < blocks.size(); ++n) {
        const size_t expect = tag.family == BasisFamily::LegendreEdge ? 1 : n + 1;
        if (blocks[n].size() != expect) {
            throw std::invalid_argument("coefficient file: block " + std::to_string(n) + " has " +
                                        std::to_string(blocks[n].size()) + " entries, expected " +
                                        std::to_string(expect));
        }
    }
    return CoefficientVector(tag, std::move(blocks));
}

void write_csv(const std::filesystem::path& path, const std::string& header,
               const std::vector<std::vector<double>>& rows) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string() + " for writing");
    f << header << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) f << ",";
            f << format_double(row[i]);
        }
        f << "\n";
    }
}

void write_block_norms(const std::filesystem::path& path, const std::vector<double>& norms) {
    std::vector<std::vector<double>> rows;
    for (size_t n = 0; n < norms.size(); ++n) rows.push_back({static_cast<double>(n), norms[n]});
    write_csv(path, "block_index,block_norm", rows);
}

std::string file_checksum(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    uint64_t hash = 1469598103934665603ull;
    char c;
    while (f.get(c)) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash));
    return std::string("fnv1a:") + buf;
}

}  // namespace trispectral::io
