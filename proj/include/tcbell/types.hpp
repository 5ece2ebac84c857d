#pragma once

#include <complex>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tcbell {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Fock-space truncation cannot represent the requested state to the
/// required tail bound.
struct truncation_error : std::runtime_error {
    explicit truncation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Two states with different Fock cutoffs were combined where equal
/// cutoffs are required.
struct cutoff_mismatch : std::invalid_argument {
    explicit cutoff_mismatch(const std::string& what) : std::invalid_argument(what) {}
};

/// A state that must be normalized was not (beyond the documented tolerance).
struct not_normalized : std::invalid_argument {
    explicit not_normalized(const std::string& what) : std::invalid_argument(what) {}
};

/// Fractional part in [0, 1) for all real x, including negatives.
inline double frac(double x) { return x - std::floor(x); }

inline double sqr(double x) { return x * x; }

} // namespace tcbell
