#pragma once

#include <array>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "tcbell/approx.hpp"
#include "tcbell/dynamics.hpp"

namespace tcbell {

enum class Engine { exact, approx };

enum class BranchId { psi_minus, phi_minus, phi_plus, psi_plus, fail };

inline const char* branch_name(BranchId id) {
    switch (id) {
        case BranchId::psi_minus: return "psi_minus";
        case BranchId::phi_minus: return "phi_minus";
        case BranchId::phi_plus: return "phi_plus";
        case BranchId::psi_plus: return "psi_plus";
        default: return "fail";
    }
}

/// Two-stage Ramsey-type Bell measurement: the atoms cross cavity 1
/// (prepared in |alpha>, read out against |±alpha>) and then cavity 2
/// (prepared in |i alpha>, read out against |±i alpha>), each stage lasting
/// the scaled interaction time tau.
struct ProtocolConfig {
    AtomicState atom;
    cplx alpha{6.0, 0.0};
    double tau1 = 0.5, tau2 = 0.5;
    double g = 1.0;
    int cutoff = -1;          // -1: default policy for |alpha|^2
    Engine engine = Engine::exact;
    double free_phase = 0.0;  // bare atomic phase accrued in transit between
                              // cavities; cavity 2 co-rotates (see run_protocol)
};

/// One success branch of the measurement tree.
struct BranchOutcome {
    BranchId id = BranchId::fail;
    std::string detectors;     // e.g. "(+alpha;+ialpha)" — ';' keeps CSV rows comma-safe
    double probability = 0.0;
    bool has_state = false;    // false when probability < 1e-14
    AtomicState state;         // postselected, normalized, Bell basis at phi = arg(alpha)
    double bell_fidelity = 0.0; // |<ideal Bell | state>|^2, NaN when !has_state
};

struct FailBreakdown {
    double stage1 = 0.0;             // neither +alpha nor -alpha detected
    double stage2_after_plus = 0.0;  // +alpha succeeded, stage 2 undetected
    double stage2_after_minus = 0.0; // -alpha succeeded, stage 2 undetected
};

struct ProtocolResult {
    std::array<BranchOutcome, 4> branches; // Psi-, Phi-, Phi+, Psi+ order
    double fail_probability = 0.0;
    FailBreakdown fail_breakdown;
    double success_probability = 0.0; // 1 - fail
    double total = 0.0;               // four branches + fail; == 1 up to rounding
};

/// Projects the field register onto |target> (von Neumann):
/// returns the *unnormalized* conditional atomic state expressed in the Bell
/// basis of phi_ref, and the branch probability (its squared norm).
/// Renormalization is left to the caller; probabilities below 1e-14 should be
/// treated as "no state" (the amplitudes are numerically meaningless).
inline std::pair<AtomicState, double> project_field(const JointState& joint,
                                                    const FieldState& target,
                                                    double phi_ref) {
    const JointState s = to_computational(joint);
    if (s.cutoff() != target.cutoff())
        throw cutoff_mismatch("project_field: joint cutoff " + std::to_string(s.cutoff()) +
                              " vs target " + std::to_string(target.cutoff()));
    Eigen::Vector4cd v;
    for (int k = 0; k < 4; ++k) v[k] = target.amps.dot(s.amps.row(k).transpose());
    const double p = v.squaredNorm();
    return {computational_to_bell(v, phi_ref), p};
}

namespace detail {

/// Evolves atom (x) fresh coherent field with the configured engine and
/// returns the joint state plus the matching readout targets |±field_alpha>.
struct StageResult {
    JointState joint;
    FieldState target_plus, target_minus;
};

inline StageResult run_stage(const AtomicState& atom, cplx field_alpha, double tau,
                             const ProtocolConfig& cfg, int nmax) {
    StageResult out;
    if (cfg.engine == Engine::exact) {
        const FieldState field = coherent_state(field_alpha, nmax);
        const double t = unscaled_time(tau, std::norm(field_alpha), cfg.g);
        out.joint = evolve_exact(atom, field, t, cfg.g);
    } else {
        out.joint = approx_state(atom, field_alpha, tau, nmax).joint();
    }
    out.target_plus = coherent_state(field_alpha, out.joint.cutoff());
    out.target_minus = coherent_state(-field_alpha, out.joint.cutoff());
    return out;
}

/// e^{-i theta N_atoms} in the computational basis (N_atoms = excitation count).
inline Eigen::Vector4cd transit_phase(const Eigen::Vector4cd& v, double theta) {
    const cplx f1 = std::exp(cplx(0.0, -theta));
    return {v[0], f1 * v[1], f1 * v[2], f1 * f1 * v[3]};
}

} // namespace detail

/// Runs the full measurement tree with exact conditional amplitudes (no
/// sampling). Detector labels follow the preparation: stage-1 readout
/// |+alpha> or |-alpha>, stage-2 readout |+i alpha> or |-i alpha>;
///   (+,+) -> Psi-,  (+,-) -> Phi-_phi,  (-,+) -> Phi+_phi,  (-,-) -> Psi+,
/// everything else -> FAIL. Fidelities are taken against the ideal Bell
/// states referenced to phi = arg(alpha) (the second-stage labels map back to
/// this reference through the quarter-rotation identity Phi±_{phi+pi/2} =
/// -i Phi∓_phi, which only contributes a global phase).
///
/// free_phase models the bare atomic evolution accrued between the cavities
/// in the interaction picture: the atoms pick up e^{-i theta N_atoms} while
/// cavity 2's preparation and targets co-rotate to |±i alpha e^{-i theta}>.
/// All branch probabilities are invariant under it (tested).
///
/// The input atom is renormalized internally; the returned conditional states
/// are normalized.
inline ProtocolResult run_protocol(const ProtocolConfig& cfg) {
    if (!(std::norm(cfg.alpha) > 0.0)) throw std::invalid_argument("run_protocol: |alpha|^2 must be > 0");
    if (!(cfg.tau1 > 0.0 && cfg.tau1 < 1.0 && cfg.tau2 > 0.0 && cfg.tau2 < 1.0))
        throw std::invalid_argument("run_protocol: tau1, tau2 must lie in (0, 1)");
    const double nbar = std::norm(cfg.alpha);
    const double phi = std::arg(cfg.alpha);
    const int nmax = cfg.cutoff < 0 ? default_cutoff(nbar) : cfg.cutoff;
    const AtomicState atom = rebase_phase(cfg.atom.normalized(), phi);

    // stage 1: cavity prepared in |alpha>
    const detail::StageResult s1 = detail::run_stage(atom, cfg.alpha, cfg.tau1, cfg, nmax);

    // stage 2 preparation: |i alpha e^{-i theta}> (co-rotating frame)
    const double theta = cfg.free_phase;
    const cplx alpha2 = cfg.alpha * std::exp(cplx(0.0, pi / 2.0 - theta));

    ProtocolResult res;
    const struct {
        BranchId id;
        int stage1_sign, stage2_sign;
        const char* detectors;
        AtomicState ideal;
    } table[4] = {
        {BranchId::psi_minus, +1, +1, "(+alpha;+ialpha)", AtomicState::psi_minus()},
        {BranchId::phi_minus, +1, -1, "(+alpha;-ialpha)", AtomicState::phi_minus(phi)},
        {BranchId::phi_plus, -1, +1, "(-alpha;+ialpha)", AtomicState::phi_plus(phi)},
        {BranchId::psi_plus, -1, -1, "(-alpha;-ialpha)", AtomicState::psi_plus()},
    };

    double p_stage1[2] = {0.0, 0.0};      // [0]: +alpha, [1]: -alpha
    double p_stage2_sum[2] = {0.0, 0.0};  // conditional success mass per stage-1 arm
    int branch_idx = 0;
    for (int arm = 0; arm < 2; ++arm) {
        const FieldState& tgt1 = arm == 0 ? s1.target_plus : s1.target_minus;
        auto [cond1, p1] = project_field(s1.joint, tgt1, phi);
        p_stage1[arm] = p1;
        if (p1 < 1e-14) {
            for (int d2 = 0; d2 < 2; ++d2, ++branch_idx) {
                auto& b = res.branches[branch_idx];
                b.id = table[branch_idx].id;
                b.detectors = table[branch_idx].detectors;
                b.probability = 0.0;
                b.has_state = false;
                b.bell_fidelity = std::numeric_limits<double>::quiet_NaN();
            }
            continue;
        }
        // normalize, then apply the transit phase in the computational basis
        Eigen::Vector4cd v1 = bell_basis_matrix(phi) * bell_amplitudes(cond1) / std::sqrt(p1);
        v1 = detail::transit_phase(v1, theta);
        const AtomicState atom2 = computational_to_bell(v1, std::arg(alpha2));

        const detail::StageResult s2 = detail::run_stage(atom2, alpha2, cfg.tau2, cfg, nmax);
        for (int d2 = 0; d2 < 2; ++d2, ++branch_idx) {
            auto& b = res.branches[branch_idx];
            b.id = table[branch_idx].id;
            b.detectors = table[branch_idx].detectors;
            const FieldState& tgt2 = d2 == 0 ? s2.target_plus : s2.target_minus;
            auto [cond2, p2] = project_field(s2.joint, tgt2, phi);
            b.probability = p1 * p2;
            if (p2 < 1e-14) {
                b.has_state = false;
                b.bell_fidelity = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            p_stage2_sum[arm] += p2;
            // undo the transit phase so the state is reported in the lab frame
            Eigen::Vector4cd v2 = bell_basis_matrix(phi) * bell_amplitudes(cond2) / std::sqrt(p2);
            v2 = detail::transit_phase(v2, -theta);
            b.state = computational_to_bell(v2, phi);
            b.has_state = true;
            b.bell_fidelity = std::norm(atomic_inner(table[branch_idx].ideal, b.state));
        }
    }

    res.fail_breakdown.stage1 = 1.0 - p_stage1[0] - p_stage1[1];
    res.fail_breakdown.stage2_after_plus = p_stage1[0] * (1.0 - p_stage2_sum[0]);
    res.fail_breakdown.stage2_after_minus = p_stage1[1] * (1.0 - p_stage2_sum[1]);
    double succ = 0.0;
    for (const auto& b : res.branches) succ += b.probability;
    res.success_probability = succ;
    res.fail_probability = 1.0 - succ;
    res.total = succ + res.fail_probability;
    return res;
}

/// Tabular sweep output consumed by the CSV layer.
struct SweepResult {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

namespace detail {
inline std::vector<double> linspace(double lo, double hi, int steps) {
    if (steps < 1) throw std::invalid_argument("linspace: steps < 1");
    std::vector<double> v(steps);
    if (steps == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < steps; ++i) v[i] = lo + (hi - lo) * i / (steps - 1);
    return v;
}

inline std::vector<double> protocol_row(double x, const ProtocolResult& r) {
    std::vector<double> row{x};
    for (const auto& b : r.branches) row.push_back(b.bell_fidelity);
    row.push_back(r.success_probability);
    return row;
}
} // namespace detail

/// Per-branch Bell fidelity as a function of nbar at fixed tau. The coherent
/// phase tracks the atom's Bell reference phi.
inline SweepResult fidelity_vs_nbar(const AtomicState& atom, double nbar_min, double nbar_max,
                                    int steps, double tau = 0.5, Engine engine = Engine::exact,
                                    double g = 1.0) {
    SweepResult out;
    out.columns = {"nbar", "F_psi_minus", "F_phi_minus", "F_phi_plus", "F_psi_plus", "p_success"};
    for (double nbar : detail::linspace(nbar_min, nbar_max, steps)) {
        ProtocolConfig cfg;
        cfg.atom = atom;
        cfg.alpha = std::sqrt(nbar) * std::exp(cplx(0.0, atom.phi));
        cfg.tau1 = cfg.tau2 = tau;
        cfg.engine = engine;
        cfg.g = g;
        out.rows.push_back(detail::protocol_row(nbar, run_protocol(cfg)));
    }
    return out;
}

/// Per-branch Bell fidelity as a function of tau at fixed nbar.
inline SweepResult fidelity_vs_tau(const AtomicState& atom, double nbar, double tau_min,
                                   double tau_max, int steps, Engine engine = Engine::exact,
                                   double g = 1.0) {
    SweepResult out;
    out.columns = {"tau", "F_psi_minus", "F_phi_minus", "F_phi_plus", "F_psi_plus", "p_success"};
    for (double tau : detail::linspace(tau_min, tau_max, steps)) {
        ProtocolConfig cfg;
        cfg.atom = atom;
        cfg.alpha = std::sqrt(nbar) * std::exp(cplx(0.0, atom.phi));
        cfg.tau1 = cfg.tau2 = tau;
        cfg.engine = engine;
        cfg.g = g;
        out.rows.push_back(detail::protocol_row(tau, run_protocol(cfg)));
    }
    return out;
}

} // namespace tcbell
