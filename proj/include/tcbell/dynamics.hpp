#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "tcbell/joint.hpp"

namespace tcbell {

/// Model parameters of the resonant two-atom/one-mode interaction
/// H = hbar g (sigmaA+ + sigmaB+) a + h.c., with hbar = 1 throughout.
struct ModelParams {
    double g = 1.0;    // coupling, inverse time
    double nbar = 0.0; // mean photon number of the coherent drive field
    double phi = 0.0;  // coherent-state phase
};

/// Revival time t_r = (pi/g) sqrt(4 nbar + 2) of the Rabi oscillations.
inline double revival_time(double nbar, double g = 1.0) {
    if (g <= 0.0 || nbar < 0.0) throw std::invalid_argument("revival_time: need g > 0, nbar >= 0");
    return pi / g * std::sqrt(4.0 * nbar + 2.0);
}
inline double revival_time(const ModelParams& p) { return revival_time(p.nbar, p.g); }

/// Collapse time t_c = 1/(sqrt(2) g), independent of nbar.
inline double collapse_time(double g = 1.0) {
    if (g <= 0.0) throw std::invalid_argument("collapse_time: need g > 0");
    return 1.0 / (std::sqrt(2.0) * g);
}
inline double collapse_time(const ModelParams& p) { return collapse_time(p.g); }

/// Interaction time in units of the revival time: tau = t g / (pi sqrt(4 nbar + 2)).
inline double scaled_time(double t, double nbar, double g = 1.0) {
    return t / revival_time(nbar, g);
}
inline double scaled_time(double t, const ModelParams& p) { return scaled_time(t, p.nbar, p.g); }

inline double unscaled_time(double tau, double nbar, double g = 1.0) {
    return tau * revival_time(nbar, g);
}
inline double unscaled_time(double tau, const ModelParams& p) { return unscaled_time(tau, p.nbar, p.g); }

/// Closed-form evolved state, organized by atomic branch: the field vectors
/// attached to |0,0>, |1,1> and Psi+, plus the stationary Psi- branch. All
/// four field vectors share the extended cutoff N+2 (the |1,1> component of
/// the highest populated excitation manifold reaches Fock level N+2, so with
/// this extension the evolution is exactly unitary).
struct ExactSolution {
    FieldState chi0;       // attached to |0,0>
    FieldState chi1;       // attached to |1,1>
    FieldState chi_plus;   // attached to Psi+
    FieldState stationary; // attached to Psi- (= c_minus * input field, padded)

    /// Assembles the computational-basis joint state.
    JointState assemble() const {
        JointState s(chi0.cutoff());
        const double r = 1.0 / std::sqrt(2.0);
        s.amps.row(0) = chi0.amps.transpose();
        s.amps.row(1) = r * (chi_plus.amps + stationary.amps).transpose();
        s.amps.row(2) = r * (chi_plus.amps - stationary.amps).transpose();
        s.amps.row(3) = chi1.amps.transpose();
        return s;
    }
};

/// Branch-resolved closed-form solution at time t >= 0.
///
/// Per excitation manifold n (Rabi frequency w_n = g sqrt(4n-2)):
///   xi±  = e^{∓i w_n t}/2 ( c+ p_{n-1} ± [sqrt(n) c0 p_n + sqrt(n-1) c1 p_{n-2}]/sqrt(2n-1) )
///   xi_n = [sqrt(n-1) c0 p_n - sqrt(n) c1 p_{n-2}] / sqrt(2n-1)
///   chi0_n     = (sqrt(n)(xi- - xi+) + sqrt(n-1) xi_n)/sqrt(2n-1)
///   chi1_{n-2} = (sqrt(n-1)(xi- - xi+) - sqrt(n) xi_n)/sqrt(2n-1)   (n >= 2)
///   chip_{n-1} = xi- + xi+
/// with p_k = 0 outside [0, N] and chi0_0 = c0 p_0. (c0, c1 are the |0,0>,
/// |1,1> amplitudes; c± the Psi± amplitudes.)
inline ExactSolution exact_solution(const AtomicState& atom, const FieldState& field,
                                    double t, double g = 1.0) {
    if (t < 0.0) throw std::invalid_argument("exact_solution: t < 0");
    if (g <= 0.0) throw std::invalid_argument("exact_solution: g <= 0");
    if (std::abs(field.norm() - 1.0) > 1e-10)
        throw not_normalized("exact_solution: field not normalized");

    const int nin = field.cutoff();
    const int next = nin + 2;
    const Eigen::Vector4cd v = bell_basis_matrix(atom.phi) * bell_amplitudes(atom);
    const cplx c0 = v[0], c1 = v[3];
    const cplx cp = (v[1] + v[2]) / std::sqrt(2.0);
    const cplx cm = (v[1] - v[2]) / std::sqrt(2.0);
    auto p = [&](int k) -> cplx { return (k >= 0 && k <= nin) ? field.amps[k] : cplx(0.0); };

    ExactSolution sol{FieldState(next), FieldState(next), FieldState(next), FieldState(next)};
    sol.chi0.amps[0] = c0 * p(0);
    for (int n = 1; n <= next; ++n) {
        const double w = g * std::sqrt(4.0 * n - 2.0);
        const double den = std::sqrt(2.0 * n - 1.0);
        const double sn = std::sqrt(double(n)), snm = std::sqrt(double(n - 1));
        const cplx bracket = (sn * c0 * p(n) + snm * c1 * p(n - 2)) / den;
        const cplx em = std::exp(cplx(0.0, -w * t)), ep = std::exp(cplx(0.0, w * t));
        const cplx xim = em * 0.5 * (cp * p(n - 1) + bracket);
        const cplx xip = ep * 0.5 * (cp * p(n - 1) - bracket);
        const cplx xin = (snm * c0 * p(n) - sn * c1 * p(n - 2)) / den;
        sol.chi0.amps[n] = (sn * (xim - xip) + snm * xin) / den;
        if (n >= 2) sol.chi1.amps[n - 2] = (snm * (xim - xip) - sn * xin) / den;
        sol.chi_plus.amps[n - 1] = xim + xip;
    }
    sol.stationary.amps.head(nin + 1) = cm * field.amps;
    return sol;
}

/// Closed-form propagator. Field cutoff grows by 2 (see ExactSolution).
inline JointState evolve_exact(const AtomicState& atom, const FieldState& field,
                               double t, double g = 1.0) {
    return exact_solution(atom, field, t, g).assemble();
}

/// Brute-force propagator used as a validation oracle: builds each
/// total-excitation block of the Hamiltonian on the truncated joint space
/// (at most 4x4 in the computational basis) and applies exp(-iHt) through
/// numerical self-adjoint diagonalization. Independent of the closed form.
inline JointState evolve_oracle(const AtomicState& atom, const FieldState& field,
                                double t, double g = 1.0) {
    if (t < 0.0) throw std::invalid_argument("evolve_oracle: t < 0");
    if (g <= 0.0) throw std::invalid_argument("evolve_oracle: g <= 0");
    if (std::abs(field.norm() - 1.0) > 1e-10)
        throw not_normalized("evolve_oracle: field not normalized");

    const int nin = field.cutoff();
    const int next = nin + 2; // match evolve_exact's output cutoff
    JointState s(next);
    const Eigen::Vector4cd v = bell_basis_matrix(atom.phi) * bell_amplitudes(atom);
    for (int k = 0; k < 4; ++k) s.amps.row(k).head(nin + 1) = v[k] * field.amps.transpose();

    // excitation count carried by each atomic basis vector
    static constexpr int kAtomExc[4] = {0, 1, 1, 2};
    for (int exc = 0; exc <= next + 2; ++exc) {
        // members (atomic index k, photon number exc - kAtomExc[k])
        int rows[4], count = 0;
        int phot[4];
        for (int k = 0; k < 4; ++k) {
            const int n = exc - kAtomExc[k];
            if (n >= 0 && n <= next) {
                rows[count] = k;
                phot[count] = n;
                ++count;
            }
        }
        if (count == 0) continue;
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(count, count);
        for (int i = 0; i < count; ++i)
            for (int j = i + 1; j < count; ++j) {
                const int ki = rows[i], kj = rows[j];
                // couplings: |0,0> <-> |0,1>,|1,0| with sqrt(n_lower_exc_photons);
                // |0,1>,|1,0> <-> |1,1> likewise. |0,1> <-> |1,0> uncoupled.
                const bool pair_a = (ki == 0 && (kj == 1 || kj == 2));
                const bool pair_b = ((ki == 1 || ki == 2) && kj == 3);
                if (pair_a || pair_b) h(i, j) = h(j, i) = g * std::sqrt(double(phot[i]));
            }
        Eigen::VectorXcd vec(count);
        for (int i = 0; i < count; ++i) vec[i] = s.amps(rows[i], phot[i]);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
        Eigen::VectorXcd modal = es.eigenvectors().transpose() * vec;
        for (int i = 0; i < count; ++i)
            modal[i] *= std::exp(cplx(0.0, -es.eigenvalues()[i] * t));
        vec = es.eigenvectors() * modal;
        for (int i = 0; i < count; ++i) s.amps(rows[i], phot[i]) = vec[i];
    }
    return s;
}

/// <H> for a joint state (hbar = 1). Conserved under both propagators.
inline double energy_expectation(const JointState& state, double g = 1.0) {
    const JointState s = to_computational(state);
    const int nmax = s.cutoff();
    cplx acc = 0.0;
    for (int n = 1; n <= nmax; ++n) {
        const double sn = std::sqrt(double(n));
        acc += sn * std::conj(s.amps(0, n)) * (s.amps(1, n - 1) + s.amps(2, n - 1));
        acc += sn * (std::conj(s.amps(1, n)) + std::conj(s.amps(2, n))) * s.amps(3, n - 1);
    }
    return 2.0 * g * acc.real();
}

/// <a^† a + sum_i sigma_i^+ sigma_i^-> — total excitation number, conserved.
inline double excitation_expectation(const JointState& state) {
    const JointState s = to_computational(state);
    static constexpr int kAtomExc[4] = {0, 1, 1, 2};
    double acc = 0.0;
    for (int k = 0; k < 4; ++k)
        for (int n = 0; n <= s.cutoff(); ++n)
            acc += (n + kAtomExc[k]) * std::norm(s.amps(k, n));
    return acc;
}

} // namespace tcbell
