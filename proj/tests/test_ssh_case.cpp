#include <doctest.h>

#include <cmath>

#include "hmmident/hmm.hpp"
#include "hmmident/matrix.hpp"
#include "hmmident/ssh_case.hpp"

using hmmident::Matrix;
using hmmident::Tolerance;

TEST_CASE("transition matrix is stochastic with an absorbing final state") {
    Matrix a = hmmident::ssh_transition();
    REQUIRE(a.rows() == 7);
    REQUIRE(a.cols() == 7);
    for (std::size_t i = 0; i < 7; ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < 7; ++j) {
            CHECK(a(i, j) >= 0.0);
            sum += a(i, j);
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(a(6, 6) == doctest::Approx(1.0));
    CHECK(a(0, 0) == doctest::Approx(0.6170 / 1.0).epsilon(1e-3));
}

TEST_CASE("observation matrix confuses fixed state groups") {
    for (double eps : {0.0, 0.05, 0.1, 0.2, 0.5}) {
        Matrix b = hmmident::ssh_observation(eps);
        REQUIRE(b.rows() == 7);
        REQUIRE(b.cols() == 3);
        double c = 1.0 - 2.0 * eps;
        CHECK(b(0, 0) == doctest::Approx(eps));
        CHECK(b(0, 1) == doctest::Approx(c));
        CHECK(b(1, 0) == doctest::Approx(c));
        CHECK(b(2, 2) == doctest::Approx(c));

        // Rows 1 and 5 agree, as do rows 2, 4, 6 and 7 (1-based).
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(b(0, k) == b(4, k));
            CHECK(b(1, k) == b(3, k));
            CHECK(b(1, k) == b(5, k));
            CHECK(b(1, k) == b(6, k));
        }
        for (std::size_t i = 0; i < 7; ++i) {
            double sum = b(i, 0) + b(i, 1) + b(i, 2);
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    CHECK_THROWS_AS(hmmident::ssh_observation(-0.01), std::invalid_argument);
    CHECK_THROWS_AS(hmmident::ssh_observation(0.51), std::invalid_argument);
}

TEST_CASE("single-observer case study starts from the stationary distribution") {
    Tolerance tol;
    hmmident::HmmParams h = hmmident::ssh_single(0.1, tol);
    CHECK(hmmident::validate(h, tol).empty());
    CHECK(hmmident::is_stationary(h.pi, h.A, tol));
    // The chain is absorbed by the final state, so the stationary
    // distribution concentrates there.
    CHECK(h.pi[6] == doctest::Approx(1.0).epsilon(1e-9));
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(std::abs(h.pi[i]) <= 1e-9);
    }
}

TEST_CASE("multi-observer case study validates the homogeneity flag") {
    Tolerance tol;
    hmmident::MultiHmmParams same = hmmident::ssh_multi({0.1, 0.1}, true, tol);
    CHECK(hmmident::validate(same, tol).empty());

    hmmident::MultiHmmParams contradictory =
        hmmident::ssh_multi({0.05, 0.1}, true, tol);
    CHECK(!hmmident::validate(contradictory, tol).empty());

    CHECK_THROWS_AS(hmmident::ssh_multi({0.1}, false, tol), std::invalid_argument);
}
