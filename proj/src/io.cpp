#include "ricci/io.hpp"

#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace ricci {

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::span<const double>>& columns) {
    if (header.size() != columns.size() || columns.empty())
        throw std::invalid_argument("write_csv: header/column mismatch");
    const std::size_t rows = columns.front().size();
    for (const auto& c : columns)
        if (c.size() != rows) throw std::invalid_argument("write_csv: ragged columns");

    const auto parent = std::filesystem::path(path).parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);

    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out.precision(17);
    for (std::size_t j = 0; j < header.size(); ++j)
        out << header[j] << (j + 1 < header.size() ? "," : "\n");
    for (std::size_t i = 0; i < rows; ++i)
        for (std::size_t j = 0; j < columns.size(); ++j)
            out << columns[j][i] << (j + 1 < columns.size() ? "," : "\n");
}

void write_profile_csv(const std::string& path, const ProfileGrid& p) {
    write_csv(path, {"s", "psi"}, {p.s, p.psi});
}

void write_curvature_csv(const std::string& path, const ProfileGrid& p,
                         const CurvatureFields& c) {
    write_csv(path, {"s", "K0", "K1", "R", "Q"}, {p.s, c.K0, c.K1, c.R, c.Q});
}

}  // namespace ricci
