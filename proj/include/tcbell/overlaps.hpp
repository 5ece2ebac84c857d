#pragma once

#include "tcbell/fock.hpp"

namespace tcbell {

/// Parameters of the branch/reference overlap
///   <j*alpha | alpha_tau^(sign)> with j in {-1, +1}, sign in {-1, +1}:
/// j selects the reference coherent state (+alpha or -alpha), sign selects
/// which of the two counter-rotating field branches.
struct OverlapParams {
    double nbar = 0.0;
    double tau = 0.0;
    int j = 1;
    int sign = +1;
};

namespace detail {
inline void validate(const OverlapParams& p) {
    if (p.j != 1 && p.j != -1) throw std::invalid_argument("overlap: j must be ±1");
    if (p.sign != 1 && p.sign != -1) throw std::invalid_argument("overlap: sign must be ±1");
    if (p.nbar < 0.0) throw std::invalid_argument("overlap: nbar < 0");
}
} // namespace detail

/// Poisson-weighted exact sum
///   sum_n (nbar^n j^n / n! e^{nbar}) exp(± i 2 pi tau [nbar + 1 + n - (n-nbar)^2/(4 nbar + 2)]).
/// cutoff < 0 selects the default policy for nbar.
inline cplx overlap_exact(const OverlapParams& p, int cutoff = -1) {
    detail::validate(p);
    const int nmax = cutoff < 0 ? default_cutoff(p.nbar) : cutoff;
    if (poisson_tail(p.nbar, nmax) > 1e-12)
        throw truncation_error("overlap_exact: cutoff too small for nbar");
    const double nu2 = 4.0 * p.nbar + 2.0;
    double w = std::exp(-p.nbar); // Poisson weight, multiplicative recurrence
    double jn = 1.0;
    cplx acc = 0.0;
    for (int n = 0; n <= nmax; ++n) {
        if (n > 0) {
            w *= p.nbar / n;
            jn *= p.j;
        }
        const double phase = 2.0 * pi * p.tau * (p.nbar + 1.0 + n - sqr(n - p.nbar) / nu2);
        acc += w * jn * std::exp(cplx(0.0, p.sign * phase));
    }
    return acc;
}

/// f_j(tau) = frac(tau + (1-j)/4 + 1/2) - 1/2, in [-1/2, 1/2): the distance of
/// the branch's accumulated rotation from the nearest aligned revival.
inline double fractional_offset(double tau, int j) {
    if (j != 1 && j != -1) throw std::invalid_argument("fractional_offset: j must be ±1");
    return frac(tau + (1.0 - j) / 4.0 + 0.5) - 0.5;
}

/// Dominant-term asymptotic overlap (Poisson summation, one Gaussian kept):
///   e^{± i 2 pi [nbar f_j(tau) + (nbar+1) tau]} / sqrt(1 ± i pi tau)
///     * exp(-2 pi^2 nbar f_j(tau)^2 / (1 ± i pi tau)).
/// Principal branch of the complex square root (the overlap's phase depends
/// on it). Valid for 4 nbar >> tau^2.
inline cplx overlap_approx(const OverlapParams& p) {
    detail::validate(p);
    const double f = fractional_offset(p.tau, p.j);
    const double s = static_cast<double>(p.sign);
    const cplx den(1.0, s * pi * p.tau);
    const cplx phase = std::exp(cplx(0.0, s * 2.0 * pi * (p.nbar * f + (p.nbar + 1.0) * p.tau)));
    return phase / std::sqrt(den) * std::exp(-2.0 * sqr(pi) * p.nbar * f * f / den);
}

/// b = 2/sqrt(4 + pi^2): the modulus squared of the branch/reference overlap
/// at half a revival — the per-discrimination success penalty.
inline double b_factor() { return 2.0 / std::sqrt(4.0 + sqr(pi)); }

/// nbar(m) = m + arctan(pi/2)/(2 pi): mean photon numbers making the critical
/// overlap real, which maximizes the postselected Bell fidelity.
inline double magic_nbar(int m) {
    if (m < 0) throw std::invalid_argument("magic_nbar: m < 0");
    return m + std::atan(pi / 2.0) / (2.0 * pi);
}

} // namespace tcbell
