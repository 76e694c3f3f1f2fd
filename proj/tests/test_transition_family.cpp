#include <doctest.h>

#include <stdexcept>

#include <random>

#include "cubicproc/closed_form.hpp"
#include "cubicproc/evolve.hpp"
#include "cubicproc/transition_family.hpp"
#include "support.hpp"

using cubic::CubicTensor;
using cubic::SimplexVector;
using cubic::TransitionFamily;

TEST_CASE("unit gap returns the base tensor unchanged") {
    std::mt19937_64 rng(3);
    auto base = testsupport::random_valid_tensor(3, rng);
    TransitionFamily f(base, SimplexVector::uniform(3));
    for (int s : {0, 1, 4}) {
        const CubicTensor& t = f.transition(s, s + 1);
        for (std::size_t r = 0; r < base.entries().size(); ++r)
            CHECK(t.entries()[r] == base.entries()[r]);
    }
}

TEST_CASE("uniform base is invariant under composition") {
    TransitionFamily f(CubicTensor::uniform(3), SimplexVector::validated({0.2, 0.2, 0.6}));
    const CubicTensor& t = f.transition(0, 4);
    for (double v : t.entries()) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("two-step composition of the eps=0 mixing base at uniform start") {
    auto fam = cubic::example1_family(0.0);
    auto x0 = SimplexVector::uniform(3);
    TransitionFamily f(fam.tensor(0.0, 1.0, x0), x0);
    const CubicTensor& p02 = f.transition(0, 2);

    // Independent oracle: direct 729-term summation through x^(1).
    auto x1 = cubic::evolve(f.base(), x0);
    auto oracle = testsupport::brute_force_compose(f.base(), f.base(), x1.probs());
    for (std::size_t r = 0; r < p02.entries().size(); ++r)
        CHECK(p02.entries()[r] == doctest::Approx(oracle.entries()[r]).epsilon(1e-14));

    // Exact fractions at the uniform start: triple rows (11/27 to self,
    // 8/27 elsewhere), mixed rows uniform. Note these differ from the
    // closed-form family values at (0,2); see test_closed_form.
    for (int i = 0; i < 3; ++i)
        for (int l = 0; l < 3; ++l)
            CHECK(p02(i, i, i, l) ==
                  doctest::Approx(l == i ? 11.0 / 27.0 : 8.0 / 27.0).epsilon(1e-13));
    CHECK(p02(0, 1, 2, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
    CHECK(p02(0, 0, 1, 2) == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("composed tensors stay valid") {
    std::mt19937_64 rng(9);
    for (int rep = 0; rep < 5; ++rep) {
        auto base = testsupport::random_valid_tensor(3, rng);
        TransitionFamily f(base, testsupport::random_simplex(3, rng));
        for (int t = 2; t <= 6; ++t) {
            auto report = cubic::validate_tensor(f.transition(0, t), 1e-9);
            CHECK(report.passed());
        }
    }
}

TEST_CASE("fundamental equation holds at the construction split") {
    std::mt19937_64 rng(15);
    auto base = testsupport::random_valid_tensor(3, rng);
    TransitionFamily f(base, testsupport::random_simplex(3, rng));
    for (int t = 2; t <= 5; ++t) CHECK(cubic::fundamental_residual(f, 0, t - 1, t) <= 1e-14);
}

TEST_CASE("fundamental equation holds at every admissible split") {
    std::mt19937_64 rng(27);
    for (int rep = 0; rep < 10; ++rep) {
        auto base = testsupport::random_valid_tensor(3, rng);
        TransitionFamily f(base, testsupport::random_simplex(3, rng));
        for (int s = 0; s <= 1; ++s)
            for (int t = s + 2; t <= s + 5; ++t)
                for (int tau = s + 1; tau < t; ++tau)
                    CHECK(cubic::fundamental_residual(f, s, tau, t) <= 1e-10);
    }
}

TEST_CASE("oracle agreement for a split away from the construction") {
    std::mt19937_64 rng(41);
    auto base = testsupport::random_valid_tensor(3, rng);
    auto x0 = testsupport::random_simplex(3, rng);
    TransitionFamily f(base, x0);
    // both sides rebuilt by brute force: p05 vs compose(p02, p25; x2)
    const CubicTensor& lhs = f.transition(0, 5);
    auto rhs = testsupport::brute_force_compose(f.transition(0, 2), f.transition(2, 5),
                                                f.distribution(2).probs());
    for (std::size_t r = 0; r < lhs.entries().size(); ++r)
        CHECK(lhs.entries()[r] == doctest::Approx(rhs.entries()[r]).epsilon(1e-12));
}

TEST_CASE("contraction identity") {
    std::mt19937_64 rng(55);
    auto base = testsupport::random_valid_tensor(3, rng);
    auto x0 = testsupport::random_simplex(3, rng);
    TransitionFamily f(base, x0);

    SUBCASE("unit gap is the definition of evolve") {
        CHECK(cubic::contraction_identity_residual(f, 0, 1) <= 1e-14);
    }
    SUBCASE("multi-step identity via the brute force") {
        CHECK(cubic::contraction_identity_residual(f, 0, 4) <= 1e-10);
        auto direct = testsupport::brute_force_evolve(f.transition(0, 4), x0.probs());
        for (int l = 0; l < 3; ++l)
            CHECK(f.distribution(4)[l] == doctest::Approx(direct[l]).epsilon(1e-12));
    }
    SUBCASE("uniform base gives an exactly uniform identity") {
        TransitionFamily u(CubicTensor::uniform(3), x0);
        CHECK(cubic::contraction_identity_residual(u, 0, 3) <= 1e-15);
    }
}

TEST_CASE("gap constraints and the horizon cap") {
    TransitionFamily f(CubicTensor::uniform(3), SimplexVector::uniform(3), 4);
    CHECK_THROWS_AS(f.transition(2, 2), std::invalid_argument);
    CHECK_THROWS_AS(f.transition(3, 1), std::invalid_argument);
    CHECK_THROWS_AS(f.transition(0, 5), std::invalid_argument);  // beyond the cap
    CHECK_THROWS_AS(cubic::fundamental_residual(f, 0, 0, 2), std::invalid_argument);
    CHECK_NOTHROW(f.transition(0, 4));
}
