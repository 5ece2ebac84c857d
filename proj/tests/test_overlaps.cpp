#include <catch2/catch_amalgamated.hpp>

#include "tcbell/overlaps.hpp"

using namespace tcbell;

TEST_CASE("exact overlap: limiting values at tau = 0") {
    for (double nbar : {0.5, 4.0, 12.16, 36.16}) {
        const cplx same = overlap_exact({nbar, 0.0, 1, +1});
        CHECK(std::abs(same - 1.0) < 1e-12);
        // the alternating Poisson sum collapses to e^{-2 nbar}; it is evaluated
        // by cancelling O(1) terms, so only absolute accuracy ~1e-15 survives
        const cplx opposite = overlap_exact({nbar, 0.0, -1, +1});
        CHECK(opposite.real() ==
              Catch::Approx(std::exp(-2.0 * nbar)).epsilon(1e-4).margin(1e-14));
        CHECK(std::abs(opposite.imag()) < 1e-15);
    }
}

TEST_CASE("exact overlap: bounded and conjugate-symmetric in the branch sign") {
    for (double nbar : {3.3, 12.16, 50.0})
        for (double tau : {0.1, 0.25, 0.5, 0.77, 1.0})
            for (int j : {-1, 1}) {
                const cplx plus = overlap_exact({nbar, tau, j, +1});
                const cplx minus = overlap_exact({nbar, tau, j, -1});
                CHECK(std::abs(plus) <= 1.0 + 1e-12);
                CHECK(std::abs(minus - std::conj(plus)) < 1e-12);
            }
}

TEST_CASE("fractional offset") {
    CHECK(fractional_offset(0.5, -1) == 0.0);
    CHECK(fractional_offset(0.5, 1) == -0.5);
    CHECK(fractional_offset(0.0, 1) == 0.0);
    // stays in [-1/2, 1/2) for any tau, including negatives
    for (double tau : {-1.3, -0.5, 0.0, 0.24, 0.9, 2.75})
        for (int j : {-1, 1}) {
            const double f = fractional_offset(tau, j);
            CHECK(f >= -0.5);
            CHECK(f < 0.5);
        }
    // periodic with period 1
    CHECK(fractional_offset(0.3 + 1.0, -1) == Catch::Approx(fractional_offset(0.3, -1)).margin(1e-14));
}

TEST_CASE("asymptotic overlap: half-revival modulus is nbar-independent") {
    const double expected = std::pow(1.0 + sqr(pi) / 4.0, -0.25); // = sqrt(b)
    CHECK(expected == Catch::Approx(0.7328228108801712).epsilon(1e-12));
    for (double nbar : {5.0, 12.16, 36.16, 100.0}) {
        const cplx z = overlap_approx({nbar, 0.5, -1, +1});
        CHECK(std::abs(z) == Catch::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("asymptotic overlap: real exactly at the magic mean photon numbers") {
    for (int m : {0, 10, 36, 100}) {
        const cplx z = overlap_approx({magic_nbar(m), 0.5, -1, +1});
        CHECK(std::abs(z.imag()) < 1e-10);
        // detuning the mean photon number off the magic point breaks reality
        const cplx off = overlap_approx({magic_nbar(m) + 0.21, 0.5, -1, +1});
        CHECK(std::abs(off.imag()) > 1e-3);
    }
}

TEST_CASE("exact overlap converges to the asymptotic half-revival modulus") {
    const double target = std::sqrt(b_factor());
    const double dev10 = std::abs(std::abs(overlap_exact({12.16, 0.5, -1, +1})) - target);
    const double dev100 = std::abs(std::abs(overlap_exact({100.0, 0.5, -1, +1})) - target);
    CHECK(dev10 < 0.02);
    CHECK(dev100 < 0.005);
    CHECK(dev100 < dev10);
}

TEST_CASE("exact vs asymptotic overlap at nbar = 12.16") {
    const cplx e = overlap_exact({12.16, 0.5, -1, +1});
    const cplx a = overlap_approx({12.16, 0.5, -1, +1});
    CHECK(std::abs(std::abs(e) - std::abs(a)) < 2e-2);
    CHECK(std::abs(e - a) < 0.1); // includes the slower-converging phase
}

TEST_CASE("revival structure of the same-reference overlap") {
    for (double nbar : {12.16, 36.16}) {
        CHECK(std::abs(overlap_exact({nbar, 0.0, 1, +1})) == Catch::Approx(1.0).margin(1e-12));
        // collapse in between
        CHECK(std::abs(overlap_exact({nbar, 0.25, 1, +1})) < 0.05);
        // partial revival at tau = 1 (curvature of the phase prevents full return)
        const double rev = std::abs(overlap_exact({nbar, 1.0, 1, +1}));
        CHECK(rev > 0.5);
        CHECK(rev > 10.0 * std::abs(overlap_exact({nbar, 0.25, 1, +1})));
    }
}

TEST_CASE("dense tau grid: asymptotic tracks exact away from the revival shoulders") {
    // j = -1: revival centered at tau = 1/2; j = +1: revivals at tau = 0 and 1.
    // Exclude the transition bands where the Gaussian envelope rises/falls.
    const double nbar = 12.16;
    auto excluded = [](double tau, int j) {
        if (j == -1) return (tau > 0.30 && tau < 0.46) || (tau > 0.54 && tau < 0.70);
        return (tau > 0.04 && tau < 0.20) || (tau > 0.80 && tau < 0.96);
    };
    for (int j : {-1, 1}) {
        double max_dev = 0.0;
        for (int i = 0; i <= 400; ++i) {
            const double tau = i / 400.0;
            if (excluded(tau, j)) continue;
            const cplx e = overlap_exact({nbar, tau, j, +1});
            const cplx a = overlap_approx({nbar, tau, j, +1});
            max_dev = std::max(max_dev, std::abs(e.real() - a.real()));
        }
        CHECK(max_dev < 0.05);
    }
}

TEST_CASE("derived constants") {
    CHECK(b_factor() == Catch::Approx(2.0 / std::sqrt(4.0 + pi * pi)).epsilon(1e-15));
    CHECK(b_factor() == Catch::Approx(0.537).margin(5e-4));
    CHECK(magic_nbar(36) == Catch::Approx(36.16).margin(5e-4));
    CHECK(magic_nbar(0) == Catch::Approx(0.16).margin(5e-4));
    CHECK(magic_nbar(12) == Catch::Approx(12.16).margin(5e-4));
    CHECK(magic_nbar(5) - magic_nbar(4) == Catch::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(overlap_exact({4.0, 0.5, 0, +1}), std::invalid_argument);
    CHECK_THROWS_AS(overlap_exact({4.0, 0.5, 1, 2}), std::invalid_argument);
    CHECK_THROWS_AS(overlap_exact({-1.0, 0.5, 1, 1}), std::invalid_argument);
    CHECK_THROWS_AS(overlap_exact({25.0, 0.5, 1, 1}, 20), truncation_error);
    CHECK_THROWS_AS(magic_nbar(-1), std::invalid_argument);
    CHECK_THROWS_AS(fractional_offset(0.3, 2), std::invalid_argument);
}
