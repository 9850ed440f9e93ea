#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <set>
#include <vector>

#include "hmmident/hmm.hpp"
#include "hmmident/identifiability.hpp"
#include "hmmident/krank.hpp"
#include "hmmident/matrix.hpp"
#include "hmmident/ssh_case.hpp"
#include "hmmident/tensor_ops.hpp"
#include "test_support.hpp"

using hmmident::EquivalenceReport;
using hmmident::HmmParams;
using hmmident::InflationOptions;
using hmmident::Matrix;
using hmmident::MultiHmmParams;
using hmmident::NStarVariant;
using hmmident::QuasiHmm;
using hmmident::ScheduleStep;
using hmmident::SequenceEvaluator;
using hmmident::Setting;
using hmmident::Tolerance;
using hmmident::Verdict;

namespace {

// An unambiguously identifiable 2-state model: all factor kranks are 2 and
// the stack is full.
HmmParams small_identifiable() {
    return HmmParams{{0.5, 0.5},
                     Matrix({{0.9, 0.1}, {0.2, 0.8}}),
                     Matrix({{0.8, 0.2}, {0.3, 0.7}})};
}

bool quasi_equivalent(const HmmParams& h, const QuasiHmm& quasi, std::size_t len,
                      const Tolerance& tol) {
    return hmmident::equivalent(SequenceEvaluator(h), SequenceEvaluator(quasi),
                                len, tol)
        .equivalent;
}

Matrix quasi_stack(const QuasiHmm& quasi) {
    std::vector<Matrix> factors = quasi.Bs;
    factors.push_back(quasi.A);
    return factors.size() == 1 ? factors[0] : hmmident::row_tensor_multi(factors);
}

}  // namespace

TEST_CASE("identifiable model gets a clean affirmative verdict") {
    Tolerance tol;
    HmmParams h = small_identifiable();
    Verdict v = hmmident::verdict_single(h, tol);
    CHECK(v.identifiable);
    CHECK(v.setting == Setting::single);
    CHECK(v.required_q == 2);
    CHECK(v.joint.value == 2);
    CHECK(v.factor_A.value == 2);
    CHECK(v.factor_Bs.size() == 1);
    CHECK(v.factor_Bs[0].value == 2);
    CHECK(!v.counterexample.has_value());
    CHECK(!hmmident::construct_rank1_recombination(h, tol).has_value());
    CHECK(hmmident::check_minimality_necessary(h, tol));
}

TEST_CASE("full stack krank alone does not certify: equal transition rows") {
    // Both states behave identically but emit distinctly: the stack
    // B (x)row A has full Kruskal rank, yet the model collapses to one state.
    Tolerance tol;
    HmmParams h{{0.5, 0.5},
                Matrix({{0.5, 0.5}, {0.5, 0.5}}),
                Matrix::identity(2)};
    Verdict v = hmmident::verdict_single(h, tol);
    CHECK(v.joint.value == 2);
    CHECK(v.joint.full());
    CHECK(v.factor_A.value == 1);
    CHECK(!v.identifiable);
    REQUIRE(v.counterexample.has_value());

    const QuasiHmm& quasi = *v.counterexample;
    CHECK(quasi.provenance.find("transition") != std::string::npos);
    CHECK(quasi_equivalent(h, quasi, 5, Tolerance(1e-10, 1e-12)));

    // Not a relabeling/rescaling of the original parameter set.
    Matrix w = hmmident::build_W(h);
    CHECK(!hmmident::find_perm_scale(w, quasi_stack(quasi), tol).has_value());
}

TEST_CASE("equal emission rows admit an equivalent recombination") {
    Tolerance tol;
    auto g = test_support::make_rng(401);
    for (int trial = 0; trial < 10; ++trial) {
        std::size_t q = 3 + trial % 2;
        HmmParams h = test_support::random_hmm(g, q, 3);
        for (std::size_t k = 0; k < 3; ++k) {
            h.B(2, k) = h.B(0, k);  // plant an equal pair {0, 2}
        }
        Verdict v = hmmident::verdict_single(h, tol);
        CHECK(!v.identifiable);
        CHECK(v.factor_Bs[0].value == 1);
        REQUIRE(v.counterexample.has_value());

        const QuasiHmm& quasi = *v.counterexample;
        CHECK(quasi.provenance.find("observation") != std::string::npos);
        CHECK(quasi.q() == q);
        CHECK(quasi_equivalent(h, quasi, 3, Tolerance(1e-9, 1e-12)));
        CHECK(!hmmident::find_perm_scale(hmmident::build_W(h), quasi_stack(quasi),
                                         tol)
                   .has_value());

        // The merge folds row 2 into row 0 and adjusts the bookkeeping.
        CHECK(quasi.pi[2] == doctest::Approx(h.pi[2] - h.pi[0]));
        CHECK(quasi.one_vec[0] == doctest::Approx(2.0));
        CHECK(quasi.one_vec[2] == doctest::Approx(1.0));
    }
}

TEST_CASE("recombination scans emission pairs before transition pairs") {
    Tolerance tol;
    // Equal pair {0, 1} in B and equal pair {1, 2} in A; the emission pair
    // must win the scan.
    HmmParams h{{0.2, 0.3, 0.5},
                Matrix({{0.2, 0.3, 0.5}, {0.6, 0.2, 0.2}, {0.6, 0.2, 0.2}}),
                Matrix({{0.4, 0.6}, {0.4, 0.6}, {0.1, 0.9}})};
    auto quasi = hmmident::construct_rank1_recombination(h, tol);
    REQUIRE(quasi.has_value());
    CHECK(quasi->provenance.find("observation") != std::string::npos);
    CHECK(quasi->provenance.find("rows 1 and 2") != std::string::npos);
    CHECK(quasi_equivalent(h, *quasi, 4, Tolerance(1e-9, 1e-12)));
}

TEST_CASE("homogeneous verdict collapses to the single-observer condition") {
    Tolerance tol;
    auto g = test_support::make_rng(409);
    for (int trial = 0; trial < 8; ++trial) {
        HmmParams h = test_support::random_hmm(g, 3, 3);
        if (trial % 2 == 0) {
            for (std::size_t k = 0; k < 3; ++k) {
                h.B(1, k) = h.B(0, k);  // force a failing case half the time
            }
        }
        Verdict base = hmmident::verdict_single(h, tol);
        for (std::size_t m : {std::size_t{2}, std::size_t{3}}) {
            MultiHmmParams multi{h.pi, h.A, std::vector<Matrix>(m, h.B), true};
            Verdict v = hmmident::verdict_homogeneous(multi, tol);
            CHECK(v.setting == Setting::multi_homogeneous);
            CHECK(v.observers == m);
            CHECK(v.identifiable == base.identifiable);
            CHECK(v.joint.value == base.joint.value);
        }
    }

    MultiHmmParams not_homog{{0.5, 0.5},
                             Matrix({{0.9, 0.1}, {0.2, 0.8}}),
                             {Matrix({{0.8, 0.2}, {0.3, 0.7}}),
                              Matrix({{0.6, 0.4}, {0.1, 0.9}})},
                             false};
    CHECK_THROWS_AS(hmmident::verdict_homogeneous(not_homog, tol),
                    std::invalid_argument);
}

TEST_CASE("negative homogeneous verdict carries a multi-observer counterexample") {
    Tolerance tol;
    MultiHmmParams multi = hmmident::ssh_multi({0.1, 0.1}, true, tol);
    Verdict v = hmmident::verdict_homogeneous(multi, tol);
    CHECK(!v.identifiable);
    REQUIRE(v.counterexample.has_value());
    const QuasiHmm& quasi = *v.counterexample;
    REQUIRE(quasi.Bs.size() == 2);
    // The merge acts on the transition side bookkeeping only; the observation
    // matrices are untouched.
    CHECK(quasi.Bs[0].approx_equal(multi.Bs[0], 0.0));
    CHECK(quasi.Bs[1].approx_equal(multi.Bs[1], 0.0));
    EquivalenceReport rep =
        hmmident::equivalent(SequenceEvaluator(multi), SequenceEvaluator(quasi),
                             2, Tolerance(1e-9, 1e-12));
    CHECK(rep.equivalent);
}

TEST_CASE("heterogeneous observers can compensate for weak factors") {
    Tolerance tol;
    MultiHmmParams multi = hmmident::ssh_multi({0.05, 0.1}, false, tol);
    Verdict v = hmmident::verdict_heterogeneous(multi, tol);
    CHECK(v.setting == Setting::multi_heterogeneous);
    CHECK(v.identifiable);
    CHECK(v.joint.value == 7);
    CHECK(v.joint.full());
    CHECK(v.factor_A.value == 7);
    CHECK(v.factor_Bs[0].value == 1);
    CHECK(v.factor_Bs[1].value == 1);
    CHECK(v.sum_route_fires());  // 7 + 1 + 1 - 2 = 7 >= 7
    CHECK(!v.counterexample.has_value());

    CHECK_THROWS_AS(
        hmmident::verdict_heterogeneous(hmmident::ssh_multi({0.1, 0.1}, true, tol),
                                        tol),
        std::invalid_argument);
}

TEST_CASE("negative heterogeneous verdict with a joint observation pair") {
    Tolerance tol;
    // Rows 0 and 1 equal in A and in both observation factors: the joint
    // stack has a dependent pair and the observation-side merge applies.
    Matrix a({{0.3, 0.3, 0.4}, {0.3, 0.3, 0.4}, {0.1, 0.1, 0.8}});
    Matrix b1({{0.6, 0.4}, {0.6, 0.4}, {0.2, 0.8}});
    Matrix b2({{0.1, 0.9}, {0.1, 0.9}, {0.5, 0.5}});
    MultiHmmParams multi{{0.25, 0.35, 0.4}, a, {b1, b2}, false};
    Verdict v = hmmident::verdict_heterogeneous(multi, tol);
    CHECK(!v.identifiable);
    CHECK(v.joint.value == 1);
    REQUIRE(v.joint.certificate.has_value());
    CHECK(*v.joint.certificate == std::vector<std::size_t>{0, 1});
    REQUIRE(v.counterexample.has_value());
    EquivalenceReport rep = hmmident::equivalent(SequenceEvaluator(multi),
                                                 SequenceEvaluator(*v.counterexample),
                                                 3, Tolerance(1e-9, 1e-12));
    CHECK(rep.equivalent);
}

TEST_CASE("negative heterogeneous verdict without any proportional pair") {
    Tolerance tol;
    // A has one behaviour for all states and the first observer's three rows
    // are dependent as a triple but pairwise distinct, so the joint stack has
    // Kruskal rank 2 while no row pair is proportional in every factor.
    Matrix a({{1.0 / 3, 1.0 / 3, 1.0 / 3},
              {1.0 / 3, 1.0 / 3, 1.0 / 3},
              {1.0 / 3, 1.0 / 3, 1.0 / 3}});
    Matrix b1({{0.6, 0.4}, {0.2, 0.8}, {0.4, 0.6}});  // row 2 = mean of 0 and 1
    Matrix b2({{0.5, 0.5}, {0.5, 0.5}, {0.5, 0.5}});
    MultiHmmParams multi{{0.2, 0.5, 0.3}, a, {b1, b2}, false};
    Verdict v = hmmident::verdict_heterogeneous(multi, tol);
    CHECK(!v.identifiable);
    CHECK(v.joint.value == 2);
    REQUIRE(v.joint.certificate.has_value());
    CHECK(v.joint.certificate->size() == 3);
    CHECK(!v.counterexample.has_value());
}

TEST_CASE("verdict_multi dispatches on the homogeneity flag") {
    Tolerance tol;
    MultiHmmParams homog = hmmident::ssh_multi({0.1, 0.1}, true, tol);
    CHECK(hmmident::verdict_multi(homog, tol).setting == Setting::multi_homogeneous);
    MultiHmmParams hetero = hmmident::ssh_multi({0.05, 0.1}, false, tol);
    CHECK(hmmident::verdict_multi(hetero, tol).setting ==
          Setting::multi_heterogeneous);
}

TEST_CASE("schedule verdict checks every step") {
    Tolerance tol;
    HmmParams good = small_identifiable();
    ScheduleStep ok{good.A, good.B};
    ScheduleStep bad{good.A, Matrix({{0.5, 0.5}, {0.5, 0.5}})};

    auto all_good = hmmident::verdict_nonstationary({ok, ok, ok}, tol);
    CHECK(all_good.identifiable);
    CHECK(all_good.steps.size() == 3);
    CHECK(all_good.steps[0].setting == Setting::non_stationary);

    auto mixed = hmmident::verdict_nonstationary({ok, bad}, tol);
    CHECK(!mixed.identifiable);
    CHECK(mixed.steps[0].identifiable);
    CHECK(!mixed.steps[1].identifiable);
    CHECK(mixed.steps[1].note.find("step 2") != std::string::npos);
    CHECK(!mixed.steps[1].counterexample.has_value());

    CHECK_THROWS_AS(hmmident::verdict_nonstationary({}, tol), std::invalid_argument);

    ScheduleStep drift{Matrix({{1.0}}), Matrix({{0.5, 0.5}})};
    CHECK_THROWS_AS(hmmident::verdict_nonstationary({ok, drift}, tol),
                    std::invalid_argument);
}

TEST_CASE("minimality necessary condition tracks krank(A)") {
    Tolerance tol;
    CHECK(hmmident::check_minimality_necessary(small_identifiable(), tol));
    HmmParams collapsed{{0.5, 0.5},
                        Matrix({{0.5, 0.5}, {0.5, 0.5}}),
                        Matrix({{0.8, 0.2}, {0.3, 0.7}})};
    CHECK(!hmmident::check_minimality_necessary(collapsed, tol));
}

TEST_CASE("state inflation with default options yields a stochastic model") {
    Tolerance tol;
    auto g = test_support::make_rng(419);
    for (int trial = 0; trial < 5; ++trial) {
        HmmParams h = test_support::random_hmm(g, 3, 2);
        QuasiHmm quasi = hmmident::construct_state_inflation(h, 5);
        CHECK(quasi.q() == 5);
        REQUIRE(quasi.Bs.size() == 1);

        // The default split produces a genuine HMM again.
        HmmParams inflated{quasi.pi, quasi.A, quasi.Bs[0]};
        CHECK(hmmident::validate(inflated, tol).empty());
        for (double v : quasi.one_vec) {
            CHECK(v == doctest::Approx(1.0));
        }
        CHECK(quasi_equivalent(h, quasi, 4, Tolerance(1e-10, 1e-12)));
    }
}

TEST_CASE("randomized inflation stays equivalent while scrambling parameters") {
    auto g = test_support::make_rng(421);
    HmmParams h = test_support::random_hmm(g, 3, 3);
    InflationOptions opts;
    opts.randomize = true;
    opts.seed = 99;
    QuasiHmm quasi = hmmident::construct_state_inflation(h, 4, opts);
    CHECK(quasi.q() == 4);
    CHECK(quasi_equivalent(h, quasi, 4, Tolerance(1e-10, 1e-12)));

    bool one_vec_trivial = true;
    for (double v : quasi.one_vec) {
        one_vec_trivial = one_vec_trivial && std::abs(v - 1.0) <= 1e-12;
    }
    CHECK(!one_vec_trivial);

    // Same seed reproduces the construction exactly.
    QuasiHmm again = hmmident::construct_state_inflation(h, 4, opts);
    CHECK(again.A.approx_equal(quasi.A, 0.0));
    CHECK(again.Bs[0].approx_equal(quasi.Bs[0], 0.0));
}

TEST_CASE("inflation edge cases") {
    Tolerance tol;
    HmmParams h = small_identifiable();
    QuasiHmm same = hmmident::construct_state_inflation(h, 2);
    CHECK(same.q() == 2);
    CHECK(same.A.approx_equal(h.A, 1e-12));
    CHECK(quasi_equivalent(h, same, 4, Tolerance(1e-12, 1e-14)));

    CHECK_THROWS_AS(hmmident::construct_state_inflation(h, 1),
                    std::invalid_argument);
}

TEST_CASE("window length bounds match hand-computed tables") {
    auto strong = hmmident::n_star(NStarVariant::single_strong, 7, {3});
    CHECK(strong.n_star == 3);
    REQUIRE(strong.binomial_trace.size() == 3);
    CHECK(strong.binomial_trace[0].second == 3);
    CHECK(strong.binomial_trace[1].second == 6);
    CHECK(strong.binomial_trace[2].second == 10);

    CHECK(hmmident::n_star(NStarVariant::single_weak, 7, {3}).n_star == 4);
    CHECK(hmmident::n_star(NStarVariant::homogeneous, 7, {3}, 3).n_star == 1);
    CHECK(hmmident::n_star(NStarVariant::heterogeneous, 7, {3, 3}, 2).n_star == 1);

    for (std::size_t q = 2; q <= 10; ++q) {
        CHECK(hmmident::n_star(NStarVariant::single_strong, q, {2}).n_star == q - 1);
        CHECK(hmmident::n_star(NStarVariant::single_weak, q, {2}).n_star == q);
    }
}

TEST_CASE("window length bound argument validation") {
    CHECK_THROWS_AS(hmmident::n_star(NStarVariant::single_strong, 1, {2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(hmmident::n_star(NStarVariant::single_strong, 4, {1}),
                    std::invalid_argument);
    CHECK_THROWS_AS(hmmident::n_star(NStarVariant::single_strong, 4, {2, 2}),
                    std::invalid_argument);
    CHECK_THROWS_AS(hmmident::n_star(NStarVariant::homogeneous, 4, {2}, 1),
                    std::invalid_argument);
    CHECK_THROWS_AS(hmmident::n_star(NStarVariant::heterogeneous, 4, {2, 2}, 3),
                    std::invalid_argument);
}

TEST_CASE("window length bound is monotone across the parameter grid") {
    for (std::size_t kappa = 2; kappa <= 5; ++kappa) {
        std::size_t prev = 0;
        for (std::size_t q = 2; q <= 10; ++q) {
            std::size_t n = hmmident::n_star(NStarVariant::single_strong, q, {kappa}).n_star;
            CHECK(n >= prev);
            prev = n;
            CHECK(hmmident::n_star(NStarVariant::single_weak, q, {kappa}).n_star >= n);
            if (kappa > 2) {
                std::size_t smaller =
                    hmmident::n_star(NStarVariant::single_strong, q, {kappa - 1}).n_star;
                CHECK(n <= smaller);
            }
            for (std::size_t m = 2; m <= 4; ++m) {
                std::size_t homog =
                    hmmident::n_star(NStarVariant::homogeneous, q, {kappa}, m).n_star;
                CHECK(homog <= n);
                if (m > 2) {
                    CHECK(homog <= hmmident::n_star(NStarVariant::homogeneous, q,
                                                    {kappa}, m - 1)
                                       .n_star);
                }
            }
        }
    }
}

TEST_CASE("binomial coefficients and saturation") {
    CHECK(hmmident::binomial(5, 2) == 10);
    CHECK(hmmident::binomial(0, 0) == 1);
    CHECK(hmmident::binomial(3, 5) == 0);
    CHECK(hmmident::binomial(10, 0) == 1);
    CHECK(hmmident::binomial(100, 50) ==
          std::numeric_limits<std::uint64_t>::max());
}

TEST_CASE("witness stack matches a brute-force monomial enumeration") {
    Tolerance tol;
    for (std::size_t kappa : {std::size_t{2}, std::size_t{3}}) {
        for (std::size_t n = 1; n <= 3; ++n) {
            auto w = hmmident::vandermonde_witness(4, {kappa}, n);
            std::set<std::uint64_t> monomials;
            test_support::for_each_sequence(kappa, n,
                                            [&](const std::vector<std::size_t>& y) {
                std::uint64_t prod = 1;
                for (std::size_t letter : y) {
                    prod *= w.generators[0][letter - 1];
                }
                monomials.insert(prod);
            });
            CHECK(w.distinct_monomials == monomials.size());
            CHECK(w.distinct_monomials ==
                  hmmident::binomial(n + kappa - 1, kappa - 1));
            CHECK(w.rank == std::min<std::size_t>(4, monomials.size()));
            CHECK(w.krank_value == w.rank);
        }
    }
}

TEST_CASE("multi-observer witness generator layout") {
    // Homogeneous copies share one generator list, reported per observer.
    auto homog = hmmident::vandermonde_witness(4, {2}, 1, 2);
    REQUIRE(homog.generators.size() == 2);
    CHECK(homog.generators[0] == std::vector<std::uint64_t>{2, 3});
    CHECK(homog.generators[1] == homog.generators[0]);
    CHECK(homog.distinct_monomials == 3);  // {4, 6, 9}
    CHECK(homog.rank == 3);

    // Heterogeneous observers get disjoint primes.
    auto hetero = hmmident::vandermonde_witness(4, {2, 2}, 1, 2);
    REQUIRE(hetero.generators.size() == 2);
    CHECK(hetero.generators[0] == std::vector<std::uint64_t>{2, 3});
    CHECK(hetero.generators[1] == std::vector<std::uint64_t>{5, 7});
    CHECK(hetero.distinct_monomials == 4);  // {10, 14, 15, 21}
    CHECK(hetero.rank == 4);
    CHECK(hetero.achieves_q);
}

TEST_CASE("witness input validation and overflow guards") {
    CHECK_THROWS_AS(hmmident::vandermonde_witness(4, {2}, 0), std::invalid_argument);
    CHECK_THROWS_AS(hmmident::vandermonde_witness(1, {2}, 2), std::invalid_argument);
    CHECK_THROWS_AS(hmmident::vandermonde_witness(4, {2}, 2, 1,
                                                  std::vector<std::uint64_t>{2, 4}),
                    std::invalid_argument);  // 4 is not prime
    CHECK_THROWS_AS(hmmident::vandermonde_witness(4, {2}, 2, 1,
                                                  std::vector<std::uint64_t>{3, 3}),
                    std::invalid_argument);  // duplicates

    // (q-1) * N * log2(generator) pushes entries past exact-integer range.
    CHECK_THROWS_AS(hmmident::vandermonde_witness(30, {2}, 30),
                    std::domain_error);
}
