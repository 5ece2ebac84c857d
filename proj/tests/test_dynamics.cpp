#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "tcbell/dynamics.hpp"

using namespace tcbell;

namespace {

AtomicState random_atom(std::mt19937& rng) {
    std::normal_distribution<double> nd;
    std::uniform_real_distribution<double> ud(0.0, 2.0 * pi);
    AtomicState a{cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng)),
                  cplx(nd(rng), nd(rng)), ud(rng)};
    return a.normalized();
}

const AtomicState kExampleAtom =
    AtomicState{cplx(0.5554, 0.0), cplx(0.3213, 0.5004), cplx(-0.2053, 0.3726),
                cplx(0.1046, 0.3819), 1.37}
        .normalized();

} // namespace

TEST_CASE("time scales") {
    CHECK(revival_time(0.0, 1.0) == Catch::Approx(pi * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(revival_time(0.0, 1.0) == Catch::Approx(4.4429).margin(5e-5));
    CHECK(revival_time(36.16, 1.0) == Catch::Approx(pi * std::sqrt(146.64)).epsilon(1e-14));
    CHECK(revival_time(36.16, 1.0) == Catch::Approx(38.0431).margin(5e-4));
    CHECK(collapse_time(1.0) == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));

    // doubling g halves both
    CHECK(revival_time(7.0, 2.0) == Catch::Approx(revival_time(7.0, 1.0) / 2.0).epsilon(1e-14));
    CHECK(collapse_time(2.0) == Catch::Approx(collapse_time(1.0) / 2.0).epsilon(1e-14));

    CHECK(scaled_time(revival_time(36.16), 36.16) == Catch::Approx(1.0).epsilon(1e-14));
    CHECK(scaled_time(0.0, 5.0) == 0.0);
    CHECK(unscaled_time(0.5, 36.16) == Catch::Approx(19.0216).margin(5e-4));
    const double t = 7.345;
    CHECK(unscaled_time(scaled_time(t, 12.16, 1.7), 12.16, 1.7) == Catch::Approx(t).epsilon(1e-14));

    const ModelParams p{2.0, 9.0, 0.3};
    CHECK(revival_time(p) == Catch::Approx(revival_time(9.0, 2.0)).epsilon(1e-14));
    CHECK(collapse_time(p) == Catch::Approx(collapse_time(2.0)).epsilon(1e-14));
}

TEST_CASE("singlet atom is stationary for coherent fields") {
    std::mt19937 rng(21);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (double nbar : {1.0, 12.16, 36.16}) {
        const cplx alpha = std::sqrt(nbar) * std::exp(cplx(0.0, 0.9));
        const FieldState field = coherent_state(alpha, default_cutoff(nbar));
        const JointState initial = product_state(AtomicState::psi_minus(), field);
        for (int rep = 0; rep < 5; ++rep) {
            const double t = ud(rng) * 2.0 * revival_time(nbar);
            CHECK(fidelity(evolve_exact(AtomicState::psi_minus(), field, t), initial) >=
                  1.0 - 1e-10);
        }
    }
}

TEST_CASE("singlet atom is a fixed point on every Fock level") {
    const int nmax = 14;
    for (int n = 0; n <= 10; ++n) {
        const FieldState f = fock_state(n, nmax);
        const JointState initial = product_state(AtomicState::psi_minus(), f);
        const double t = 0.8 + 0.1 * n;
        CHECK(fidelity(evolve_exact(AtomicState::psi_minus(), f, t), initial) >= 1.0 - 1e-12);
        CHECK(fidelity(evolve_oracle(AtomicState::psi_minus(), f, t), initial) >= 1.0 - 1e-12);
    }
}

TEST_CASE("evolution at t=0 reproduces the input product state") {
    const FieldState field = coherent_state(std::sqrt(36.16) * std::exp(cplx(0.0, 1.37)), 140);
    const JointState initial = product_state(kExampleAtom, field);
    CHECK(fidelity(evolve_exact(kExampleAtom, field, 0.0), initial) >= 1.0 - 1e-12);
    CHECK(fidelity(evolve_oracle(kExampleAtom, field, 0.0), initial) >= 1.0 - 1e-12);
}

TEST_CASE("closed form agrees with the diagonalization oracle") {
    std::mt19937 rng(22);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    for (double nbar : {1.0, 5.0, 20.0, 50.0}) {
        const int nmax = default_cutoff(nbar);
        for (int rep = 0; rep < 8; ++rep) {
            const AtomicState atom = random_atom(rng);
            const cplx alpha = std::sqrt(nbar) * std::exp(cplx(0.0, 2.0 * pi * ud(rng)));
            const FieldState field = coherent_state(alpha, nmax);
            const double t = ud(rng) * 2.0 * revival_time(nbar);
            const JointState a = evolve_exact(atom, field, t);
            const JointState b = evolve_oracle(atom, field, t);
            REQUIRE(a.cutoff() == b.cutoff());
            CHECK(fidelity(a, b) >= 1.0 - 1e-8);
            CHECK(a.norm() == Catch::Approx(1.0).margin(1e-10));
            CHECK(b.norm() == Catch::Approx(1.0).margin(1e-10));
        }
    }
}

TEST_CASE("example state at half the revival matches the oracle") {
    const double nbar = 36.16;
    const FieldState field = coherent_state(std::sqrt(nbar) * std::exp(cplx(0.0, 1.37)),
                                            default_cutoff(nbar));
    const double t = revival_time(nbar) / 2.0;
    CHECK(fidelity(evolve_exact(kExampleAtom, field, t), evolve_oracle(kExampleAtom, field, t)) >=
          1.0 - 1e-8);
}

TEST_CASE("energy and excitation number are conserved") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> ud(0.0, 1.0);
    const double nbar = 12.16, g = 1.3;
    const FieldState field = coherent_state(std::sqrt(nbar), default_cutoff(nbar));
    for (int rep = 0; rep < 4; ++rep) {
        const AtomicState atom = random_atom(rng);
        const JointState initial = product_state(atom, field);
        const double e0 = energy_expectation(initial, g);
        const double x0 = excitation_expectation(initial);
        const double t = ud(rng) * 2.0 * revival_time(nbar, g);
        for (const JointState& evolved :
             {evolve_exact(atom, field, t, g), evolve_oracle(atom, field, t, g)}) {
            CHECK(energy_expectation(evolved, g) == Catch::Approx(e0).margin(1e-8));
            CHECK(excitation_expectation(evolved) == Catch::Approx(x0).margin(1e-8));
        }
    }
}

TEST_CASE("evolution is strongly continuous in t") {
    const double nbar = 20.0;
    const FieldState field = coherent_state(std::sqrt(nbar) * std::exp(cplx(0.0, 0.4)),
                                            default_cutoff(nbar));
    const double t = 0.37 * revival_time(nbar);
    const double dt = 1e-6 * revival_time(nbar);
    CHECK(fidelity(evolve_exact(kExampleAtom, field, t), evolve_exact(kExampleAtom, field, t + dt)) >
          1.0 - 1e-6);
}

TEST_CASE("branch-resolved solution assembles to the joint state") {
    const double nbar = 9.0;
    const FieldState field = coherent_state(3.0, default_cutoff(nbar));
    const double t = 0.3 * revival_time(nbar);
    const ExactSolution sol = exact_solution(kExampleAtom, field, t);
    const JointState s = sol.assemble();
    CHECK(s.norm() == Catch::Approx(1.0).margin(1e-10));
    // branch norms: |c0 chi0|^2-style bookkeeping must add up to 1
    const double total = sol.chi0.amps.squaredNorm() + sol.chi1.amps.squaredNorm() +
                         sol.chi_plus.amps.squaredNorm() + sol.stationary.amps.squaredNorm();
    CHECK(total == Catch::Approx(1.0).margin(1e-10));
    // the stationary branch is exactly c_minus * field
    const cplx cm = kExampleAtom.c_minus;
    CHECK((sol.stationary.amps.head(field.dim()) - cm * field.amps).norm() < 1e-12);
}

TEST_CASE("invalid arguments are rejected") {
    const FieldState field = coherent_state(1.0, 30);
    CHECK_THROWS_AS(evolve_exact(kExampleAtom, field, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(evolve_oracle(kExampleAtom, field, -1.0), std::invalid_argument);
    FieldState bad = field;
    bad.amps *= 1.5;
    CHECK_THROWS_AS(evolve_exact(kExampleAtom, bad, 1.0), not_normalized);
    CHECK_THROWS_AS(revival_time(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(revival_time(1.0, 0.0), std::invalid_argument);
}
