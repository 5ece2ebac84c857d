#pragma once

#include <Eigen/Dense>

#include "tcbell/atomic.hpp"
#include "tcbell/fock.hpp"
#include "tcbell/types.hpp"

namespace tcbell {

enum class AtomicBasis { computational, bell };

/// Pure state of (two atoms) x (cavity mode). Row k of `amps` holds the field
/// amplitudes attached to the k-th atomic basis vector; the atomic basis is
/// part of the value:
///   computational: {|0,0>, |0,1>, |1,0>, |1,1>}
///   bell:          {Psi-, Psi+, Phi-_phi, Phi+_phi} with the stored phi
struct JointState {
    Eigen::Matrix<cplx, 4, Eigen::Dynamic> amps;
    AtomicBasis basis = AtomicBasis::computational;
    double phi = 0.0; // Bell reference phase; meaningful when basis == bell

    JointState() = default;
    explicit JointState(int cutoff, AtomicBasis b = AtomicBasis::computational, double phi_ = 0.0)
        : amps(Eigen::Matrix<cplx, 4, Eigen::Dynamic>::Zero(4, cutoff + 1)), basis(b), phi(phi_) {}

    int cutoff() const { return static_cast<int>(amps.cols()) - 1; }
    int dim() const { return static_cast<int>(amps.cols()); }
    double norm() const { return amps.norm(); }
};

/// atom (x) field as a computational-basis joint state.
inline JointState product_state(const AtomicState& atom, const FieldState& field) {
    JointState s(field.cutoff());
    const Eigen::Vector4cd v = bell_basis_matrix(atom.phi) * bell_amplitudes(atom);
    for (int k = 0; k < 4; ++k) s.amps.row(k) = v[k] * field.amps.transpose();
    return s;
}

inline JointState to_computational(const JointState& s) {
    if (s.basis == AtomicBasis::computational) return s;
    JointState out = s;
    out.amps = bell_basis_matrix(s.phi) * s.amps;
    out.basis = AtomicBasis::computational;
    return out;
}

inline JointState to_bell(const JointState& s, double phi) {
    JointState comp = to_computational(s);
    JointState out = comp;
    out.amps = bell_basis_matrix(phi).adjoint() * comp.amps;
    out.basis = AtomicBasis::bell;
    out.phi = phi;
    return out;
}

/// Zero-pads the field register to a larger cutoff.
inline JointState pad(const JointState& s, int cutoff) {
    if (cutoff < s.cutoff()) throw std::invalid_argument("pad(JointState): cannot shrink cutoff");
    JointState out(cutoff, s.basis, s.phi);
    out.amps.leftCols(s.dim()) = s.amps;
    return out;
}

/// <a|b>; strict about matching cutoffs (pad explicitly when comparing
/// states evolved at different truncations). Basis mismatch is resolved by
/// converting to the computational basis.
inline cplx inner_product(const JointState& a, const JointState& b) {
    if (a.cutoff() != b.cutoff())
        throw cutoff_mismatch("inner_product(JointState): cutoffs " +
                              std::to_string(a.cutoff()) + " vs " + std::to_string(b.cutoff()));
    const bool same_frame = a.basis == b.basis &&
                            (a.basis == AtomicBasis::computational || a.phi == b.phi);
    if (same_frame) {
        cplx acc = 0.0;
        for (int k = 0; k < 4; ++k) acc += a.amps.row(k).conjugate().cwiseProduct(b.amps.row(k)).sum();
        return acc;
    }
    return inner_product(to_computational(a), to_computational(b));
}

/// |<a|b>|^2 with automatic zero-padding to the larger cutoff.
inline double fidelity(const JointState& a, const JointState& b) {
    const int n = std::max(a.cutoff(), b.cutoff());
    return std::norm(inner_product(pad(a, n), pad(b, n)));
}

/// Reduced field density matrix rho_{mn} = sum_k A_{k,m} conj(A_{k,n}).
/// Invariant under the atomic basis tag (conversions are atomic-side unitaries).
/// Note the index order: adjoint()*amps would give the transposed (conjugated)
/// matrix, which shares trace, purity and spectrum but mirrors phase space.
inline Eigen::MatrixXcd partial_trace_field(const JointState& s) {
    return s.amps.transpose() * s.amps.conjugate();
}

inline double purity(const Eigen::MatrixXcd& rho) {
    return (rho * rho).trace().real();
}

} // namespace tcbell
