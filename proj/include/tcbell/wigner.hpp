#pragma once

#include <ostream>

#include "tcbell/fock.hpp"

namespace tcbell {

/// Rectangular phase-space grid, endpoints inclusive.
struct GridSpec {
    double re_min = -10.0, re_max = 10.0, im_min = -10.0, im_max = 10.0;
    int n_re = 201, n_im = 201;

    static GridSpec square(double extent, int n) {
        return {-extent, extent, -extent, extent, n, n};
    }
    double re_at(int i) const { return re_min + (re_max - re_min) * i / (n_re - 1); }
    double im_at(int j) const { return im_min + (im_max - im_min) * j / (n_im - 1); }
    double cell_area() const {
        return (re_max - re_min) / (n_re - 1) * (im_max - im_min) / (n_im - 1);
    }
    void validate() const {
        if (n_re < 2 || n_im < 2) throw std::invalid_argument("GridSpec: need n_re, n_im >= 2");
        if (!(re_max > re_min) || !(im_max > im_min))
            throw std::invalid_argument("GridSpec: empty extent");
    }
};

/// Wigner function sampled on a grid; values(j, i) = W(re_at(i) + i*im_at(j)).
struct PhaseSpaceGrid {
    GridSpec spec;
    Eigen::MatrixXd values;           // n_im rows, n_re cols
    double max_imag_residual = 0.0;   // largest |Im| discarded (sanity record)

    double riemann_sum() const { return values.sum() * spec.cell_area(); }
};

namespace detail {

/// tr(rho D(2 beta) P) as a complex number, P the photon parity operator.
/// Same diagonal-walking scheme as displacement_matrix_into, fused with the
/// contraction so no matrix is materialized per grid point.
inline cplx wigner_trace(const Eigen::MatrixXcd& rho, cplx beta) {
    const int dim = static_cast<int>(rho.rows());
    const cplx gamma = 2.0 * beta;
    const double x = std::norm(gamma);
    cplx acc = 0.0;
    if (x == 0.0) {
        for (int n = 0; n < dim; ++n) acc += (n & 1 ? -1.0 : 1.0) * rho(n, n);
        return acc;
    }
    const double ax = std::abs(gamma);
    const cplx phase_u = gamma / ax;
    const cplx phase_l = -std::conj(gamma) / ax;

    const double lim_hi = 0x1p+500, lim_lo = 0x1p-500;
    auto renorm = [&](double& mant, long& e2) {
        double m = std::abs(mant);
        if (m > lim_hi || (m != 0.0 && m < lim_lo)) {
            int k;
            mant = std::frexp(mant, &k);
            e2 += k;
        }
    };

    double pf0 = std::exp(-x / 2.0);
    long pf0_e = 0;
    if (pf0 == 0.0) {
        const double y = -x / 2.0 * 1.4426950408889634; // log2 scale
        pf0_e = static_cast<long>(std::floor(y));
        pf0 = std::exp2(y - double(pf0_e));
    }
    cplx ph_u = 1.0, ph_l = 1.0;

    for (int a = 0; a < dim; ++a) {
        if (a > 0) {
            pf0 *= ax / std::sqrt(double(a));
            renorm(pf0, pf0_e);
            ph_u *= phase_u;
            ph_l *= phase_l;
        }
        double pf = pf0;
        long pf_e = pf0_e;
        double l_prev = 0.0, l_cur = 1.0;
        long l_e = 0;
        double par = 1.0; // (-1)^n
        for (int n = 0; n + a < dim; ++n, par = -par) {
            if (n > 0) {
                double l_next = ((2.0 * n - 1.0 + a - x) * l_cur - (n - 1.0 + a) * l_prev) / n;
                l_prev = l_cur;
                l_cur = l_next;
                if (std::abs(l_cur) > lim_hi) {
                    l_cur = std::ldexp(l_cur, -512);
                    l_prev = std::ldexp(l_prev, -512);
                    l_e += 512;
                }
                pf *= std::sqrt(double(n) / double(n + a));
                renorm(pf, pf_e);
            }
            const double mag = std::ldexp(pf * l_cur, static_cast<int>(pf_e + l_e));
            if (a == 0) {
                acc += par * mag * rho(n, n);
            } else {
                // pair (n, n+a) contributes (-1)^n rho(n,n+a) D(n+a,n) and
                // its mirror (-1)^{n+a} rho(n+a,n) D(n,n+a); both share mag.
                const double sign_a = (a & 1) ? -1.0 : 1.0;
                acc += mag * par * (rho(n, n + a) * ph_u + sign_a * rho(n + a, n) * ph_l);
            }
        }
    }
    return acc;
}

inline void require_hermitian(const Eigen::MatrixXcd& rho) {
    if (rho.rows() != rho.cols()) throw std::invalid_argument("wigner: rho not square");
    const double res = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (res > 1e-8)
        throw std::invalid_argument("wigner: input not Hermitian (residual " + std::to_string(res) + ")");
}

} // namespace detail

/// W(beta) = (2/pi) tr(rho D(2 beta) P) — the displaced-parity form,
/// analytically equal to the characteristic-function integral. Error is
/// controlled solely by the Fock truncation of rho.
inline double wigner_point(const Eigen::MatrixXcd& rho, cplx beta) {
    detail::require_hermitian(rho);
    const cplx t = detail::wigner_trace(rho, beta) * (2.0 / pi);
    if (std::abs(t.imag()) >= 1e-10)
        throw std::runtime_error("wigner_point: imaginary residual >= 1e-10");
    return t.real();
}

/// Samples W over the grid. Throws on non-Hermitian input or if any point's
/// imaginary residual reaches 1e-10 (both indicate a corrupted density matrix).
inline PhaseSpaceGrid wigner_grid(const Eigen::MatrixXcd& rho, const GridSpec& spec) {
    spec.validate();
    detail::require_hermitian(rho);
    PhaseSpaceGrid grid{spec, Eigen::MatrixXd(spec.n_im, spec.n_re), 0.0};
    for (int j = 0; j < spec.n_im; ++j)
        for (int i = 0; i < spec.n_re; ++i) {
            const cplx t = detail::wigner_trace(rho, cplx(spec.re_at(i), spec.im_at(j))) * (2.0 / pi);
            grid.max_imag_residual = std::max(grid.max_imag_residual, std::abs(t.imag()));
            grid.values(j, i) = t.real();
        }
    if (grid.max_imag_residual >= 1e-10)
        throw std::runtime_error("wigner_grid: imaginary residual >= 1e-10");
    return grid;
}

} // namespace tcbell
