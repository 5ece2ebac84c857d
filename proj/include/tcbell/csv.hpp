#pragma once

#include <charconv>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "tcbell/protocol.hpp"
#include "tcbell/wigner.hpp"

namespace tcbell {

/// Locale-independent decimal formatting: shortest-general form at 12
/// significant digits ('.' decimal point, no grouping). Deterministic across
/// runs — CSV outputs must be byte-identical for identical inputs.
inline std::string format_number(double v) {
    char buf[40];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

inline void write_csv(std::ostream& os, const std::vector<std::string>& columns,
                      const std::vector<std::vector<double>>& rows) {
    for (size_t i = 0; i < columns.size(); ++i) {
        if (i) os << ',';
        os << columns[i];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_number(row[i]);
        }
        os << '\n';
    }
}

inline void write_csv(std::ostream& os, const SweepResult& sweep) {
    write_csv(os, sweep.columns, sweep.rows);
}

/// Grid CSV: header `re,im,w`, one row per point, im outer / re inner.
inline void write_csv(std::ostream& os, const PhaseSpaceGrid& grid) {
    os << "re,im,w\n";
    for (int j = 0; j < grid.spec.n_im; ++j)
        for (int i = 0; i < grid.spec.n_re; ++i)
            os << format_number(grid.spec.re_at(i)) << ',' << format_number(grid.spec.im_at(j))
               << ',' << format_number(grid.values(j, i)) << '\n';
}

/// Protocol summary CSV: four success branches plus the FAIL row; the
/// probability column sums to 1. FAIL carries no target/fidelity.
inline void write_csv(std::ostream& os, const ProtocolResult& res) {
    static const char* kTargets[4] = {"psi_minus", "phi_minus", "phi_plus", "psi_plus"};
    os << "branch,detectors,target,probability,bell_fidelity\n";
    for (int i = 0; i < 4; ++i) {
        const auto& b = res.branches[i];
        os << branch_name(b.id) << ',' << b.detectors << ',' << kTargets[i] << ','
           << format_number(b.probability) << ','
           << (b.has_state ? format_number(b.bell_fidelity) : std::string()) << '\n';
    }
    os << "fail,,," << format_number(res.fail_probability) << ",\n";
}

template <typename T>
inline void write_csv_file(const std::string& path, const T& payload) {
    std::ofstream os(path, std::ios::binary); // binary: no platform newline translation
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_csv(os, payload);
    if (!os) throw std::runtime_error("write failed: " + path);
}

} // namespace tcbell
