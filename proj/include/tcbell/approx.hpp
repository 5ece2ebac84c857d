#pragma once

#include "tcbell/dynamics.hpp"
#include "tcbell/overlaps.hpp"

namespace tcbell {

/// One of the two counter-rotating photonic branch states:
///   amplitude_n = p_n * exp(± i 2 pi tau [nbar + 1 + n - (n-nbar)^2/(4 nbar + 2)])
/// with p_n the (truncated, renormalized) coherent amplitudes of alpha.
/// Unit norm for every tau — the factors are pure phases.
inline FieldState photon_branch(cplx alpha, double tau, int sign, int cutoff) {
    if (sign != 1 && sign != -1) throw std::invalid_argument("photon_branch: sign must be ±1");
    FieldState s = coherent_state(alpha, cutoff);
    const double nbar = std::norm(alpha);
    const double nu2 = 4.0 * nbar + 2.0;
    for (int n = 0; n <= cutoff; ++n) {
        const double phase = 2.0 * pi * tau * (nbar + 1.0 + n - sqr(n - nbar) / nu2);
        s.amps[n] *= std::exp(cplx(0.0, sign * phase));
    }
    return s;
}

/// Large-nbar approximate evolved state at scaled time tau, organized as
/// three branches (atomic companions are computational-basis 4-vectors,
/// unnormalized):
///   (c- Psi- + d- Phi-_phi) |alpha>
///   ((c+ - d+)/2)(Psi+ - Phi+_{phi+2 pi tau}) |alpha_tau^+>
///   ((c+ + d+)/2)(Psi+ + Phi+_{phi-2 pi tau}) |alpha_tau^->
/// all divided by the numeric norm of the raw sum (the authoritative
/// normalization; the closed form is a separate cross-check).
struct ApproxState {
    double phi = 0.0; // field phase = Bell reference of the decomposition
    double tau = 0.0;
    Eigen::Vector4cd atoms_stationary, atoms_plus, atoms_minus;
    FieldState field_stationary, field_plus, field_minus;
    double norm = 1.0;            // norm of the unnormalized three-branch sum
    bool validity_warning = false; // tau at or beyond the dispersion bound sqrt(nbar)/(2 pi)

    /// Normalized computational-basis joint state.
    JointState joint() const {
        JointState s(field_stationary.cutoff());
        for (int k = 0; k < 4; ++k)
            s.amps.row(k) = (atoms_stationary[k] * field_stationary.amps +
                             atoms_plus[k] * field_plus.amps +
                             atoms_minus[k] * field_minus.amps)
                                .transpose() / norm;
        return s;
    }
};

namespace detail {
/// Computational-basis column of |Phi+_psi> = (e^{-i psi}|0,0> + e^{i psi}|1,1>)/sqrt(2).
inline Eigen::Vector4cd phi_plus_column(double psi) {
    const double r = 1.0 / std::sqrt(2.0);
    return {std::exp(cplx(0.0, -psi)) * r, 0.0, 0.0, std::exp(cplx(0.0, psi)) * r};
}
inline Eigen::Vector4cd phi_minus_column(double psi) {
    const double r = 1.0 / std::sqrt(2.0);
    return {std::exp(cplx(0.0, -psi)) * r, 0.0, 0.0, -std::exp(cplx(0.0, psi)) * r};
}
inline Eigen::Vector4cd psi_plus_column() {
    const double r = 1.0 / std::sqrt(2.0);
    return {0.0, r, r, 0.0};
}
inline Eigen::Vector4cd psi_minus_column() {
    const double r = 1.0 / std::sqrt(2.0);
    return {0.0, r, -r, 0.0};
}
} // namespace detail

/// Assembles the approximate state. The Bell decomposition is taken relative
/// to the field phase arg(alpha); an atom referenced to a different phi is
/// rebased first. cutoff < 0 selects the default policy.
inline ApproxState approx_state(const AtomicState& atom, cplx alpha, double tau, int cutoff = -1) {
    if (std::abs(atom.norm() - 1.0) > 1e-6)
        throw not_normalized("approx_state: atom not normalized");
    const double nbar = std::norm(alpha);
    const double phi = std::arg(alpha);
    const int nmax = cutoff < 0 ? default_cutoff(nbar) : cutoff;
    const AtomicState a = rebase_phase(atom, phi);

    ApproxState st;
    st.phi = phi;
    st.tau = tau;
    st.validity_warning = 2.0 * pi * std::abs(tau) >= std::sqrt(nbar);
    st.atoms_stationary = a.c_minus * detail::psi_minus_column() + a.d_minus * detail::phi_minus_column(phi);
    st.atoms_plus = (a.c_plus - a.d_plus) * 0.5 *
                    (detail::psi_plus_column() - detail::phi_plus_column(phi + 2.0 * pi * tau));
    st.atoms_minus = (a.c_plus + a.d_plus) * 0.5 *
                     (detail::psi_plus_column() + detail::phi_plus_column(phi - 2.0 * pi * tau));
    st.field_stationary = coherent_state(alpha, nmax);
    st.field_plus = photon_branch(alpha, tau, +1, nmax);
    st.field_minus = photon_branch(alpha, tau, -1, nmax);

    st.norm = 1.0;
    JointState raw = st.joint();
    st.norm = raw.norm();
    if (st.norm < 1e-300) throw not_normalized("approx_state: degenerate zero-norm assembly");
    return st;
}

/// Closed-form normalization N_tau of the three-branch sum, evaluated from
/// the overlap routines:
///   N^2 = 1 + Re[(c+ + d+)*(c+ - d+) <a_tau^-|a_tau^+>] sin^2(2 pi tau)
///         + 2 Re[d- conj(d+)] Im<a_tau^-|alpha> sin(2 pi tau)
///         + 2 Im[conj(c+) d-] Re<a_tau^-|alpha> sin(2 pi tau)
/// where <a_tau^-|alpha> = overlap_exact(j=1, tau, +) and
/// <a_tau^-|a_tau^+> = overlap_exact(j=1, 2 tau, +). Cross-checked in tests
/// against the numeric norm; the numeric norm is authoritative in ApproxState.
inline double normalization_closed_form(const AtomicState& atom, cplx alpha, double tau,
                                        int cutoff = -1) {
    if (std::abs(atom.norm() - 1.0) > 1e-6)
        throw not_normalized("normalization_closed_form: atom not normalized");
    const double nbar = std::norm(alpha);
    const AtomicState a = rebase_phase(atom, std::arg(alpha));
    const cplx z = overlap_exact({nbar, tau, 1, +1}, cutoff);
    const cplx z2 = overlap_exact({nbar, 2.0 * tau, 1, +1}, cutoff);
    const double s = std::sin(2.0 * pi * tau);
    const double n2 = 1.0 +
        (std::conj(a.c_plus + a.d_plus) * (a.c_plus - a.d_plus) * z2).real() * s * s +
        2.0 * (a.d_minus * std::conj(a.d_plus)).real() * z.imag() * s +
        2.0 * (std::conj(a.c_plus) * a.d_minus).imag() * z.real() * s;
    return std::sqrt(n2);
}

/// F(tau) = |<approx(tau) | exact(t = tau t_r)>|^2.
inline double approximation_fidelity(const AtomicState& atom, cplx alpha, double tau,
                                     int cutoff = -1, double g = 1.0) {
    const double nbar = std::norm(alpha);
    const int nmax = cutoff < 0 ? default_cutoff(nbar) : cutoff;
    const FieldState field = coherent_state(alpha, nmax);
    const JointState exact = evolve_exact(atom, field, unscaled_time(tau, nbar, g), g);
    const JointState approx = approx_state(atom, alpha, tau, nmax).joint();
    return fidelity(approx, exact);
}

} // namespace tcbell
