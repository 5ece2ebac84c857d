#pragma once

#include <Eigen/Dense>

#include "tcbell/types.hpp"

namespace tcbell {

/// Two-atom state stored as Bell-basis amplitudes referenced to the phase phi:
///   |psi> = c_minus |Psi->  +  c_plus |Psi+>  +  d_minus |Phi-_phi>  +  d_plus |Phi+_phi>
/// with |Psi±> = (|0,1> ± |1,0>)/sqrt(2) and
///      |Phi±_phi> = (e^{-i phi}|0,0> ± e^{i phi}|1,1>)/sqrt(2).
struct AtomicState {
    cplx c_minus{0.0}, c_plus{0.0}, d_minus{0.0}, d_plus{0.0};
    double phi = 0.0;

    double norm() const {
        return std::sqrt(std::norm(c_minus) + std::norm(c_plus) +
                         std::norm(d_minus) + std::norm(d_plus));
    }
    AtomicState normalized() const {
        const double n = norm();
        if (n < 1e-300) throw not_normalized("AtomicState::normalized: zero state");
        return {c_minus / n, c_plus / n, d_minus / n, d_plus / n, phi};
    }

    static AtomicState psi_minus() { return {1.0, 0.0, 0.0, 0.0, 0.0}; }
    static AtomicState psi_plus() { return {0.0, 1.0, 0.0, 0.0, 0.0}; }
    static AtomicState phi_minus(double phi) { return {0.0, 0.0, 1.0, 0.0, phi}; }
    static AtomicState phi_plus(double phi) { return {0.0, 0.0, 0.0, 1.0, phi}; }
};

/// Unitary whose columns are the Bell states {Psi-, Psi+, Phi-_phi, Phi+_phi}
/// in the computational basis {|0,0>, |0,1>, |1,0>, |1,1>}.
inline Eigen::Matrix4cd bell_basis_matrix(double phi) {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx em = std::exp(cplx(0.0, -phi)) * r;
    const cplx ep = std::exp(cplx(0.0, phi)) * r;
    Eigen::Matrix4cd u;
    u << 0.0, 0.0, em, em,
         r,   r,   0.0, 0.0,
         -r,  r,   0.0, 0.0,
         0.0, 0.0, -ep, ep;
    return u;
}

inline Eigen::Vector4cd bell_amplitudes(const AtomicState& a) {
    return {a.c_minus, a.c_plus, a.d_minus, a.d_plus};
}

/// Bell -> computational amplitudes, order {|0,0>, |0,1>, |1,0>, |1,1>}.
/// Requires a normalized state (tolerance 1e-6); for raw amplitude algebra
/// use bell_basis_matrix directly.
inline Eigen::Vector4cd bell_to_computational(const AtomicState& a) {
    if (std::abs(a.norm() - 1.0) > 1e-6)
        throw not_normalized("bell_to_computational: atomic norm deviates from 1 by > 1e-6");
    return bell_basis_matrix(a.phi) * bell_amplitudes(a);
}

/// Computational -> Bell amplitudes at reference phase phi. Accepts
/// unnormalized input (used for postselected conditional states).
inline AtomicState computational_to_bell(const Eigen::Vector4cd& v, double phi) {
    Eigen::Vector4cd b = bell_basis_matrix(phi).adjoint() * v;
    return {b[0], b[1], b[2], b[3], phi};
}

/// Re-expresses the same physical state in the Bell basis of a different
/// reference phase.
inline AtomicState rebase_phase(const AtomicState& a, double new_phi) {
    Eigen::Vector4cd v = bell_basis_matrix(a.phi) * bell_amplitudes(a);
    return computational_to_bell(v, new_phi);
}

/// <a|b> for atomic states, handling different Bell reference phases.
inline cplx atomic_inner(const AtomicState& a, const AtomicState& b) {
    Eigen::Vector4cd va = bell_basis_matrix(a.phi) * bell_amplitudes(a);
    Eigen::Vector4cd vb = bell_basis_matrix(b.phi) * bell_amplitudes(b);
    return va.dot(vb);
}

} // namespace tcbell
