#include <doctest.h>

#include <stdexcept>

#include <random>

#include "cubicproc/closed_form.hpp"
#include "cubicproc/evolve.hpp"
#include "support.hpp"

using cubic::CubicTensor;
using cubic::SimplexVector;

TEST_CASE("uniform tensor maps everything to the uniform distribution") {
    auto t = CubicTensor::uniform(3);
    auto y = cubic::evolve(t, SimplexVector::validated({0.7, 0.2, 0.1}));
    for (int l = 0; l < 3; ++l) CHECK(y[l] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
}

TEST_CASE("point mass picks out its own row") {
    std::mt19937_64 rng(7);
    auto t = testsupport::random_valid_tensor(3, rng);
    auto y = cubic::evolve(t, SimplexVector::point_mass(3, 2));
    for (int l = 0; l < 3; ++l) CHECK(y[l] == doctest::Approx(t(2, 2, 2, l)).epsilon(1e-15));
}

TEST_CASE("mixing family at eps=0: one step of (1/2,1/2,0)") {
    auto fam = cubic::example1_family(0.0);
    auto x0 = SimplexVector::validated({0.5, 0.5, 0.0});
    auto base = fam.tensor(0.0, 1.0, x0);
    auto y = cubic::evolve(base, x0);
    // hand value x_l^3 + (1 - sum x^3)/3, cross-checked by the brute force
    CHECK(y[0] == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
    CHECK(y[1] == doctest::Approx(3.0 / 8.0).epsilon(1e-14));
    CHECK(y[2] == doctest::Approx(1.0 / 4.0).epsilon(1e-14));
    auto oracle = testsupport::brute_force_evolve(base, x0.probs());
    for (int l = 0; l < 3; ++l) CHECK(y[l] == doctest::Approx(oracle[l]).epsilon(1e-14));
}

TEST_CASE("staged contraction equals the naive triple loop") {
    std::mt19937_64 rng(11);
    for (int n = 2; n <= 4; ++n)
        for (int rep = 0; rep < 25; ++rep) {
            auto t = testsupport::random_valid_tensor(n, rng);
            auto x = testsupport::random_simplex(n, rng);
            auto y = cubic::evolve(t, x);
            auto oracle = testsupport::brute_force_evolve(t, x.probs());
            for (int l = 0; l < n; ++l) CHECK(std::abs(y[l] - oracle[l]) <= 1e-14);
        }
}

TEST_CASE("evolve preserves the simplex") {
    std::mt19937_64 rng(13);
    for (int n = 2; n <= 4; ++n)
        for (int rep = 0; rep < 30; ++rep) {
            auto t = testsupport::random_valid_tensor(n, rng);
            auto x = testsupport::random_simplex(n, rng);
            auto y = cubic::evolve(t, x);
            CHECK(y.mass_defect() <= 1e-12);
            CHECK(y.min_entry() >= 0.0);
        }
}

TEST_CASE("re-symmetrizing a symmetric tensor leaves evolve bit-identical") {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 10; ++rep) {
        auto t = testsupport::random_valid_tensor(3, rng);
        auto x = testsupport::random_simplex(3, rng);
        auto a = cubic::evolve(t, x);
        auto b = cubic::evolve(cubic::symmetrize_tensor(t), x);
        for (int l = 0; l < 3; ++l) CHECK(a[l] == b[l]);
    }
}

TEST_CASE("evolve checks dimensions") {
    CHECK_THROWS_AS(cubic::evolve(CubicTensor::uniform(3), SimplexVector::uniform(4)),
                    std::invalid_argument);
}

TEST_CASE("iterate") {
    auto t = CubicTensor::uniform(3);
    auto x0 = SimplexVector::validated({0.9, 0.05, 0.05});

    SUBCASE("horizon 0 keeps only the initial state") {
        auto traj = cubic::iterate(t, x0, 0);
        REQUIRE(traj.states.size() == 1);
        CHECK(traj.states[0][0] == doctest::Approx(0.9));
    }
    SUBCASE("uniform law is absorbing") {
        auto traj = cubic::iterate(t, x0, 5);
        REQUIRE(traj.states.size() == 6);
        for (std::size_t g = 1; g < traj.states.size(); ++g)
            for (int l = 0; l < 3; ++l)
                CHECK(traj.states[g][l] == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    }
    SUBCASE("two steps compose the brute force with itself") {
        auto fam = cubic::example1_family(0.0);
        auto start = SimplexVector::validated({0.5, 0.5, 0.0});
        auto base = fam.tensor(0.0, 1.0, start);
        auto traj = cubic::iterate(base, start, 2);
        auto once = testsupport::brute_force_evolve(base, start.probs());
        auto twice = testsupport::brute_force_evolve(base, once);
        double mass = 0.0;
        for (int l = 0; l < 3; ++l) {
            CHECK(traj.states[2][l] == doctest::Approx(twice[l]).epsilon(1e-13));
            mass += traj.states[2][l];
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
    }
    SUBCASE("negative horizon is rejected") {
        CHECK_THROWS_AS(cubic::iterate(t, x0, -1), std::invalid_argument);
    }
}
