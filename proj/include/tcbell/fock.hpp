#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <utility>

#include "tcbell/types.hpp"

namespace tcbell {

/// Pure state of the cavity mode in the truncated Fock basis.
/// amps[n] is the amplitude of |n>, n = 0..cutoff.
struct FieldState {
    Eigen::VectorXcd amps;

    FieldState() = default;
    explicit FieldState(int cutoff) : amps(Eigen::VectorXcd::Zero(cutoff + 1)) {}
    explicit FieldState(Eigen::VectorXcd a) : amps(std::move(a)) {}

    int cutoff() const { return static_cast<int>(amps.size()) - 1; }
    int dim() const { return static_cast<int>(amps.size()); }
    double norm() const { return amps.norm(); }

    double mean_photon() const {
        double m = 0.0;
        for (int n = 0; n <= cutoff(); ++n) m += n * std::norm(amps[n]);
        return m;
    }
    double photon_variance() const {
        double m = mean_photon(), m2 = 0.0;
        for (int n = 0; n <= cutoff(); ++n) m2 += double(n) * n * std::norm(amps[n]);
        return m2 - m * m;
    }
};

/// Default truncation for mean photon number nbar: generous enough that the
/// Poisson weight above the cutoff is far below 1e-12 for nbar <= ~100.
inline int default_cutoff(double nbar) {
    if (nbar < 0.0) throw std::invalid_argument("default_cutoff: nbar < 0");
    return static_cast<int>(std::ceil(nbar + 10.0 * std::sqrt(nbar) + 20.0));
}

/// Poisson(nbar) probability mass above n = cutoff, summed upward from
/// cutoff+1 (avoids the 1 - sum cancellation of the complementary form).
inline double poisson_tail(double nbar, int cutoff) {
    if (nbar < 0.0) throw std::invalid_argument("poisson_tail: nbar < 0");
    if (nbar == 0.0) return 0.0;
    const int n0 = cutoff + 1;
    if (n0 <= 0) return 1.0;
    // pmf(n0) via logs, then walk upward until terms stop mattering.
    double log_term = -nbar + n0 * std::log(nbar) - std::lgamma(double(n0) + 1.0);
    double term = std::exp(log_term);
    double sum = 0.0;
    for (int n = n0; ; ++n) {
        sum += term;
        term *= nbar / (n + 1);
        if (n > nbar && term < sum * 1e-18 + 1e-300) break;
    }
    return std::min(sum, 1.0); // rounding can push a saturated tail past 1
}

/// Coherent state |alpha> truncated at `cutoff` and renormalized.
/// Amplitudes by the stable multiplicative recurrence; throws when the
/// truncated Poisson tail would exceed 1e-12.
inline FieldState coherent_state(cplx alpha, int cutoff) {
    if (cutoff < 0) throw std::invalid_argument("coherent_state: negative cutoff");
    const double nbar = std::norm(alpha);
    if (poisson_tail(nbar, cutoff) > 1e-12)
        throw truncation_error("coherent_state: cutoff " + std::to_string(cutoff) +
                               " too small for nbar " + std::to_string(nbar));
    FieldState s(cutoff);
    s.amps[0] = std::exp(-nbar / 2.0);
    for (int n = 1; n <= cutoff; ++n) s.amps[n] = s.amps[n - 1] * alpha / std::sqrt(double(n));
    s.amps /= s.amps.norm();
    return s;
}

/// Fock basis state |n>.
inline FieldState fock_state(int n, int cutoff) {
    if (n < 0 || n > cutoff) throw std::invalid_argument("fock_state: n outside [0, cutoff]");
    FieldState s(cutoff);
    s.amps[n] = 1.0;
    return s;
}

/// <a|b>; requires equal cutoffs.
inline cplx inner_product(const FieldState& a, const FieldState& b) {
    if (a.cutoff() != b.cutoff())
        throw cutoff_mismatch("inner_product(FieldState): cutoffs " +
                              std::to_string(a.cutoff()) + " vs " + std::to_string(b.cutoff()));
    return a.amps.dot(b.amps); // Eigen dot conjugates the left argument
}

/// Zero-pad (or reject shrinking) to a new cutoff.
inline FieldState pad(const FieldState& s, int cutoff) {
    if (cutoff < s.cutoff()) throw std::invalid_argument("pad(FieldState): cannot shrink cutoff");
    FieldState out(cutoff);
    out.amps.head(s.dim()) = s.amps;
    return out;
}

namespace detail {

/// Fills the Fock-basis matrix elements <m|D(gamma)|n> of the displacement
/// operator, m,n = 0..dim-1, walking each diagonal a = |m-n| with the
/// three-term associated-Laguerre recurrence. Magnitudes are tracked as
/// mantissa/exponent pairs (power-of-two rescaling, lossless) so large
/// |gamma|^2 neither overflows L_k^{(a)} nor underflows the prefactor.
inline void displacement_matrix_into(cplx gamma, Eigen::MatrixXcd& d) {
    const int dim = static_cast<int>(d.rows());
    const double x = std::norm(gamma);
    if (x == 0.0) {
        d.setIdentity();
        return;
    }
    const double ax = std::abs(gamma);
    const cplx phase_u = gamma / ax;              // upper-triangle phase unit
    const cplx phase_l = -std::conj(gamma) / ax;  // lower-triangle phase unit

    const double lim_hi = 0x1p+500, lim_lo = 0x1p-500;
    auto renorm = [&](double& mant, long& e2) {
        double m = std::abs(mant);
        if (m > lim_hi || (m != 0.0 && m < lim_lo)) {
            int k;
            mant = std::frexp(mant, &k);
            e2 += k;
        }
    };

    // prefactor at n=0: pf0(a) = |gamma|^a / sqrt(a!) * exp(-x/2)
    double pf0 = std::exp(-x / 2.0);
    long pf0_e = 0;
    if (pf0 == 0.0) { // exp underflow: rebuild in mantissa/exponent form
        pf0 = 1.0;
        pf0_e = static_cast<long>(std::floor(-x / 2.0 * 1.4426950408889634)); // log2 e
        pf0 = std::exp2(-x / 2.0 * 1.4426950408889634 - double(pf0_e));
    }
    cplx ph_u = 1.0, ph_l = 1.0;

    for (int a = 0; a < dim; ++a) {
        if (a > 0) {
            pf0 *= ax / std::sqrt(double(a));
            renorm(pf0, pf0_e);
            ph_u *= phase_u;
            ph_l *= phase_l;
        }
        // walk n = 0..dim-1-a along the diagonal m = n + a
        double pf = pf0;
        long pf_e = pf0_e;
        double l_prev = 0.0, l_cur = 1.0; // L_{-1}, L_0
        long l_e = 0;
        for (int n = 0; n + a < dim; ++n) {
            if (n > 0) {
                // L_n^{(a)} from (n) L_n = (2n-1+a-x) L_{n-1} - (n-1+a) L_{n-2}
                double l_next = ((2.0 * n - 1.0 + a - x) * l_cur - (n - 1.0 + a) * l_prev) / n;
                l_prev = l_cur;
                l_cur = l_next;
                double m = std::abs(l_cur);
                if (m > lim_hi) {
                    l_cur = std::ldexp(l_cur, -512);
                    l_prev = std::ldexp(l_prev, -512);
                    l_e += 512;
                }
                pf *= std::sqrt(double(n) / double(n + a)); // sqrt(n!/(n+a)!) ratio step
                renorm(pf, pf_e);
            }
            const double mag = std::ldexp(pf * l_cur, static_cast<int>(pf_e + l_e));
            d(n + a, n) = ph_u * mag;
            if (a > 0) d(n, n + a) = ph_l * mag;
        }
    }
}

} // namespace detail

/// Dense Fock-basis matrix of D(gamma) = exp(gamma a^† - gamma* a) on the
/// first `dim` levels. Exactly unitary only in the infinite-dimensional
/// limit; rows near the cutoff lose mass for large |gamma|.
inline Eigen::MatrixXcd displacement_matrix(cplx gamma, int dim) {
    if (dim <= 0) throw std::invalid_argument("displacement_matrix: dim must be positive");
    Eigen::MatrixXcd d(dim, dim);
    detail::displacement_matrix_into(gamma, d);
    return d;
}

/// Applies D(beta) to a field state. Throws when the truncation sheds more
/// than 1e-8 of the squared norm (state pushed past the cutoff).
inline FieldState displace(const FieldState& s, cplx beta) {
    Eigen::MatrixXcd d(s.dim(), s.dim());
    detail::displacement_matrix_into(beta, d);
    FieldState out(d * s.amps);
    const double in2 = s.amps.squaredNorm();
    if (in2 > 0.0 && 1.0 - out.amps.squaredNorm() / in2 > 1e-8)
        throw truncation_error("displace: displaced state exceeds cutoff (norm loss > 1e-8)");
    return out;
}

} // namespace tcbell
