#include <doctest.h>

#include <cmath>
#include <vector>

#include "hmmident/hmm.hpp"
#include "hmmident/matrix.hpp"
#include "hmmident/ssh_case.hpp"
#include "test_support.hpp"

using hmmident::EquivalenceReport;
using hmmident::HmmParams;
using hmmident::Matrix;
using hmmident::MultiHmmParams;
using hmmident::QuasiHmm;
using hmmident::SequenceEvaluator;
using hmmident::Tolerance;

namespace {

bool has_violation(const std::vector<hmmident::Violation>& v, const std::string& field) {
    for (const auto& item : v) {
        if (item.field.find(field) != std::string::npos) {
            return true;
        }
    }
    return false;
}

}  // namespace

TEST_CASE("validation catches structural and stochasticity violations") {
    Tolerance tol;
    HmmParams ok{{0.5, 0.5},
                 Matrix({{0.9, 0.1}, {0.2, 0.8}}),
                 Matrix({{0.8, 0.2}, {0.3, 0.7}})};
    CHECK(hmmident::validate(ok, tol).empty());

    HmmParams bad_rowsum = ok;
    bad_rowsum.A = Matrix({{0.9, 0.2}, {0.2, 0.8}});
    CHECK(has_violation(hmmident::validate(bad_rowsum, tol), "A"));

    HmmParams negative = ok;
    negative.B = Matrix({{1.2, -0.2}, {0.3, 0.7}});
    CHECK(has_violation(hmmident::validate(negative, tol), "B"));

    HmmParams bad_pi = ok;
    bad_pi.pi = {0.7, 0.7};
    CHECK(has_violation(hmmident::validate(bad_pi, tol), "pi"));

    HmmParams tiny_alphabet = ok;
    tiny_alphabet.B = Matrix({{1.0}, {1.0}});
    CHECK(has_violation(hmmident::validate(tiny_alphabet, tol), "B"));

    HmmParams shape = ok;
    shape.B = Matrix({{0.8, 0.2}});
    CHECK(!hmmident::validate(shape, tol).empty());
}

TEST_CASE("multi-observer validation checks the homogeneity flag both ways") {
    Tolerance tol;
    Matrix a({{0.9, 0.1}, {0.2, 0.8}});
    Matrix b1({{0.8, 0.2}, {0.3, 0.7}});
    Matrix b2({{0.6, 0.4}, {0.1, 0.9}});

    MultiHmmParams good{{0.5, 0.5}, a, {b1, b2}, false};
    CHECK(hmmident::validate(good, tol).empty());

    MultiHmmParams claims_homog{{0.5, 0.5}, a, {b1, b2}, true};
    CHECK(!hmmident::validate(claims_homog, tol).empty());

    MultiHmmParams denies_homog{{0.5, 0.5}, a, {b1, b1}, false};
    CHECK(!hmmident::validate(denies_homog, tol).empty());

    MultiHmmParams single_observer{{0.5, 0.5}, a, {b1}, false};
    CHECK(!hmmident::validate(single_observer, tol).empty());
}

TEST_CASE("sequence probability matches the independent forward recursion") {
    auto g = test_support::make_rng(307);
    std::uniform_int_distribution<std::size_t> pick_len(1, 5);
    for (int trial = 0; trial < 20; ++trial) {
        std::size_t q = 2 + trial % 3;
        std::size_t kappa = 2 + trial % 2;
        HmmParams h = test_support::random_hmm(g, q, kappa);
        std::uniform_int_distribution<std::size_t> pick_letter(1, kappa);
        for (int s = 0; s < 10; ++s) {
            std::vector<std::size_t> y(pick_len(g));
            for (auto& v : y) {
                v = pick_letter(g);
            }
            double lib = hmmident::sequence_prob(h, y);
            double oracle = test_support::forward_prob(h.pi, h.A, h.B, y);
            CHECK(std::abs(lib - oracle) <= 1e-12);
        }
    }
    HmmParams h = test_support::random_hmm(g, 2, 2);
    CHECK_THROWS_AS(hmmident::sequence_prob(h, {}), std::invalid_argument);
    CHECK_THROWS_AS(hmmident::sequence_prob(h, {3}), std::out_of_range);
    CHECK_THROWS_AS(hmmident::sequence_prob(h, {0}), std::out_of_range);
}

TEST_CASE("multi-observer probability matches the tuple forward recursion") {
    auto g = test_support::make_rng(311);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t q = 2 + trial % 3;
        MultiHmmParams h{test_support::random_distribution(g, q),
                         test_support::random_stochastic(g, q, q),
                         {test_support::random_stochastic(g, q, 2),
                          test_support::random_stochastic(g, q, 3)},
                         false};
        std::uniform_int_distribution<std::size_t> l1(1, 2), l2(1, 3), len(1, 3);
        for (int s = 0; s < 10; ++s) {
            std::vector<std::vector<std::size_t>> tuples(len(g));
            for (auto& t : tuples) {
                t = {l1(g), l2(g)};
            }
            double lib = hmmident::sequence_prob_multi(h, tuples);
            double oracle = test_support::forward_prob_multi(h.pi, h.A, h.Bs, tuples);
            CHECK(std::abs(lib - oracle) <= 1e-12);
        }
    }
}

TEST_CASE("probabilities over all sequences of a fixed length sum to one") {
    auto g = test_support::make_rng(313);
    HmmParams h = test_support::random_hmm(g, 3, 3);
    for (std::size_t len = 1; len <= 4; ++len) {
        double total = 0.0;
        test_support::for_each_sequence(3, len, [&](const std::vector<std::size_t>& y) {
            total += hmmident::sequence_prob(h, y);
        });
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }

    MultiHmmParams mh{test_support::random_distribution(g, 3),
                      test_support::random_stochastic(g, 3, 3),
                      {test_support::random_stochastic(g, 3, 2),
                       test_support::random_stochastic(g, 3, 3)},
                      false};
    SequenceEvaluator eval(mh);
    for (std::size_t len = 1; len <= 3; ++len) {
        double total = 0.0;
        test_support::for_each_sequence(eval.codec().total_letters(), len,
                                        [&](const std::vector<std::size_t>& flat) {
                                            total += eval.prob_flat(flat);
                                        });
        CHECK(std::abs(total - 1.0) <= 1e-12);
    }
}

TEST_CASE("marginalizing the last letter recovers the shorter sequence") {
    auto g = test_support::make_rng(317);
    HmmParams h = test_support::random_hmm(g, 3, 3);
    std::uniform_int_distribution<std::size_t> pick(1, 3);
    for (int s = 0; s < 20; ++s) {
        std::vector<std::size_t> y(3);
        for (auto& v : y) {
            v = pick(g);
        }
        double joint = 0.0;
        for (std::size_t k = 1; k <= 3; ++k) {
            std::vector<std::size_t> extended = y;
            extended.push_back(k);
            joint += hmmident::sequence_prob(h, extended);
        }
        CHECK(std::abs(joint - hmmident::sequence_prob(h, y)) <= 1e-12);
    }
}

TEST_CASE("hand-traced deterministic alternating chain") {
    // Two states that swap every step and emit their own index.
    HmmParams h{{1.0, 0.0},
                Matrix({{0.0, 1.0}, {1.0, 0.0}}),
                Matrix::identity(2)};
    CHECK(hmmident::sequence_prob(h, {1}) == doctest::Approx(1.0));
    CHECK(hmmident::sequence_prob(h, {2}) == doctest::Approx(0.0));
    CHECK(hmmident::sequence_prob(h, {1, 2, 1}) == doctest::Approx(1.0));
    CHECK(hmmident::sequence_prob(h, {1, 1, 1}) == doctest::Approx(0.0));
    CHECK(hmmident::sequence_prob(h, {1, 2, 2}) == doctest::Approx(0.0));
}

TEST_CASE("stationary distribution on known chains") {
    Tolerance tol;
    std::vector<double> even =
        hmmident::stationary_distribution(Matrix({{0.5, 0.5}, {0.5, 0.5}}), tol);
    CHECK(even[0] == doctest::Approx(0.5));
    CHECK(even[1] == doctest::Approx(0.5));

    std::vector<double> skew = hmmident::stationary_distribution(
        Matrix({{0.9, 0.1}, {0.3, 0.7}}), tol);
    // pi = pi A solved by hand: pi = (0.75, 0.25).
    CHECK(skew[0] == doctest::Approx(0.75));
    CHECK(skew[1] == doctest::Approx(0.25));

    // Periodic chain: the power iteration has no limit.
    CHECK_THROWS_AS(
        hmmident::stationary_distribution(Matrix({{0.0, 1.0}, {1.0, 0.0}}), tol),
        hmmident::matrix_error);

    // Reducible chain: the limit depends on the start, no unique answer.
    CHECK_THROWS_AS(hmmident::stationary_distribution(
                        Matrix({{1.0, 0.0}, {0.0, 1.0}}), tol),
                    hmmident::matrix_error);

    CHECK_THROWS_AS(
        hmmident::stationary_distribution(Matrix({{0.9, 0.2}, {0.3, 0.7}}), tol),
        std::invalid_argument);
}

TEST_CASE("relabeled states leave every sequence probability unchanged") {
    auto g = test_support::make_rng(331);
    for (int trial = 0; trial < 5; ++trial) {
        HmmParams h = test_support::random_hmm(g, 4, 3);
        auto sigma = test_support::random_permutation(g, 4);
        HmmParams relabeled = test_support::permute_states(h, sigma);
        EquivalenceReport rep = hmmident::equivalent(h, relabeled, 4, Tolerance(1e-10, 1e-12));
        CHECK(rep.equivalent);
    }
}

TEST_CASE("equivalence finds a short witness for a perturbed model") {
    auto g = test_support::make_rng(337);
    HmmParams h = test_support::random_hmm(g, 3, 3);
    HmmParams other = h;
    // Move mass from the largest entry of one emission row to the smallest;
    // the row stays stochastic and every entry stays in [0, 1].
    std::size_t lo = 0, hi = 0;
    for (std::size_t k = 1; k < other.kappa(); ++k) {
        if (other.B(0, k) < other.B(0, lo)) lo = k;
        if (other.B(0, k) > other.B(0, hi)) hi = k;
    }
    other.B(0, lo) += 0.05;
    other.B(0, hi) -= 0.05;
    EquivalenceReport rep = hmmident::equivalent(h, other, 4, Tolerance(1e-10, 1e-12));
    CHECK(!rep.equivalent);
    REQUIRE(rep.counterexample.has_value());
    CHECK(rep.counterexample->size() <= 2);
    CHECK(std::abs(rep.p1 - rep.p2) > 1e-10);
}

TEST_CASE("evaluator flat and tuple probabilities agree through the codec") {
    auto g = test_support::make_rng(347);
    MultiHmmParams mh{test_support::random_distribution(g, 3),
                      test_support::random_stochastic(g, 3, 3),
                      {test_support::random_stochastic(g, 3, 2),
                       test_support::random_stochastic(g, 3, 3)},
                      false};
    SequenceEvaluator eval(mh);
    const auto& codec = eval.codec();
    test_support::for_each_sequence(codec.total_letters(), 2,
                                    [&](const std::vector<std::size_t>& flat) {
        std::vector<std::vector<std::size_t>> tuples;
        tuples.reserve(flat.size());
        for (std::size_t f : flat) {
            tuples.push_back(codec.decode(f));
        }
        CHECK(std::abs(eval.prob_flat(flat) - eval.prob_tuples(tuples)) <= 1e-14);
        CHECK(std::abs(eval.prob_tuples(tuples) -
                       hmmident::sequence_prob_multi(mh, tuples)) <= 1e-14);
    });
}

TEST_CASE("quasi model with trivial one-vector reproduces the plain model") {
    auto g = test_support::make_rng(353);
    HmmParams h = test_support::random_hmm(g, 3, 2);
    QuasiHmm quasi{h.pi, h.A, {h.B}, std::vector<double>(3, 1.0), "trivial wrap"};
    for (std::size_t len = 1; len <= 3; ++len) {
        test_support::for_each_sequence(2, len, [&](const std::vector<std::size_t>& y) {
            CHECK(std::abs(hmmident::quasi_sequence_prob_single(quasi, y) -
                           hmmident::sequence_prob(h, y)) <= 1e-14);
        });
    }
    EquivalenceReport rep = hmmident::equivalent(
        SequenceEvaluator(h), SequenceEvaluator(quasi), 4, Tolerance(1e-12, 1e-14));
    CHECK(rep.equivalent);
}
