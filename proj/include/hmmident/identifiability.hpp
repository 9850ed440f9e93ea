#pragma once

#include <cstdint>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hmmident/hmm.hpp"
#include "hmmident/krank.hpp"
#include "hmmident/matrix.hpp"

namespace hmmident {

enum class Setting { single, multi_homogeneous, multi_heterogeneous, non_stationary };

const char* setting_name(Setting s);

// Identifiability decision for one model. The governing matrix is the
// row-tensor stack of the observation factor(s) with A:
//   single / homogeneous:  W  = B (x)row A
//   heterogeneous:         W* = B1 (x)row ... (x)row Bm (x)row A
//
// Single-observer and homogeneous verdicts additionally require every factor
// to have Kruskal rank >= 2: a proportional row pair in A or B admits the
// rank-1 recombination below, which produces an equivalent parameter set that
// is not a permutation/scaling of the original even when the stack itself has
// full Kruskal rank. The heterogeneous verdict is decided by the joint stack
// alone; jointly considered observers can compensate for factors of Kruskal
// rank 1.
struct Verdict {
    Setting setting = Setting::single;
    std::size_t required_q = 0;
    std::size_t observers = 1;

    KrankResult joint;                  // exact krank of the governing stack
    KrankResult factor_A;
    std::vector<KrankResult> factor_Bs; // one entry per observer

    // Cheaper sufficient route: the Sylvester-type lower bound on the stack
    // computed from the factor kranks. fires() means the bound alone already
    // certifies krank(stack) = q.
    KrankBound sum_route{0, 0, BoundMethod::sylvester_sum, false};

    bool identifiable = false;
    std::optional<QuasiHmm> counterexample;
    std::string note;

    bool sum_route_fires() const { return sum_route.lower >= required_q; }
};

Verdict verdict_single(const HmmParams& h, const Tolerance& tol);

// Requires h.homogeneous; the condition collapses to the single-observer one
// on (A, Bs[0]) for every observer count.
Verdict verdict_homogeneous(const MultiHmmParams& h, const Tolerance& tol);

// Requires a heterogeneous h; decided by the joint stack alone.
Verdict verdict_heterogeneous(const MultiHmmParams& h, const Tolerance& tol);

// Dispatch on h.homogeneous.
Verdict verdict_multi(const MultiHmmParams& h, const Tolerance& tol);

// Time-varying single-observer model: one (A, B) pair per step.
struct ScheduleStep {
    Matrix A;
    Matrix B;
};

struct ScheduleVerdict {
    std::vector<Verdict> steps;
    bool identifiable = false;  // all steps pass
};

// Per-step single-observer verdicts; identifiable iff every step is.
// Schedules carry no initial distribution, so no counterexamples are built.
ScheduleVerdict verdict_nonstationary(const std::vector<ScheduleStep>& schedule,
                                      const Tolerance& tol);

// Necessary minimality condition: a q-state minimal model has krank(A) = q.
// false certifies only that this necessary condition fails.
bool check_minimality_necessary(const HmmParams& h, const Tolerance& tol);

// Rank-1 recombination: if two rows of B (or of A) are proportional, the two
// corresponding rank-1 terms of the stack merge into one, yielding a
// parameter set with the same state count that reproduces every sequence
// probability but is not a permutation/scaling of the original. Scans B row
// pairs first, then A row pairs, each in lexicographic order, and uses the
// first proportional pair. Returns nothing when no proportional pair exists.
std::optional<QuasiHmm> construct_rank1_recombination(const HmmParams& h,
                                                      const Tolerance& tol);

struct InflationOptions {
    bool randomize = false;      // random state permutation + positive scaling
    std::uint64_t seed = 0x5eed5eed5eedULL;
};

// State inflation: embeds the q-state model into q_tilde >= q states by
// duplicating states (copy matrix S, q_tilde x q) and splitting their weight
// on the way back (split matrix T, q x q_tilde, T*S = I_q). With the default
// options the result is again a stochastic model; randomize additionally
// conjugates by a permutation and a positive diagonal scaling, which leaves
// every sequence probability unchanged but scrambles the parameters.
QuasiHmm construct_state_inflation(const HmmParams& h, std::size_t q_tilde,
                                   const InflationOptions& options = {},
                                   const Tolerance& tol = {});

enum class NStarVariant { single_strong, single_weak, homogeneous, heterogeneous };

const char* n_star_variant_name(NStarVariant v);

// Minimal observation length certifying generic identifiability: the number
// of distinct monomials the observation window can generate must reach q.
//   single-strong:  C(N + kappa - 1, kappa - 1)        >= q
//   single-weak:    C(N + kappa - 2, kappa - 1)        >= q
//   homogeneous:    C(N*m + kappa - 1, kappa - 1)      >= q
//   heterogeneous:  C(N*m + kappa' - 1, kappa' - 1)    >= q,  kappa' = prod kappa_j
struct NStarBound {
    NStarVariant variant = NStarVariant::single_strong;
    std::size_t q = 0;
    std::vector<std::size_t> kappas;
    std::size_t m = 1;
    std::size_t n_star = 0;
    // (N, binomial value) for N = 1..n_star; values saturate at uint64 max.
    std::vector<std::pair<std::size_t, std::uint64_t>> binomial_trace;
};

// kappas: one entry for the single/homogeneous variants, m entries for the
// heterogeneous variant. m defaults to 1 (single variants) and must be >= 2
// for the multi-observer variants.
NStarBound n_star(NStarVariant variant, std::size_t q,
                  const std::vector<std::size_t>& kappas, std::size_t m = 1);

// Binomial coefficient, saturating at uint64 max instead of overflowing.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

// Explicit generic-identifiability witness: observation matrices whose
// columns are geometric progressions of distinct prime generators. The
// N-step stack of such matrices has rows that are powers of per-sequence
// monomial products, so its rank is min(q, #distinct monomials) and the
// binomial conditions above are exercised concretely.
struct VandermondeWitness {
    std::size_t q = 0;
    std::vector<std::size_t> kappas;   // per observer
    std::size_t m = 1;                 // observer count per step
    std::size_t n = 0;                 // steps
    std::vector<std::vector<std::uint64_t>> generators;  // primes per observer
    std::size_t distinct_monomials = 0;
    std::size_t rank = 0;
    std::size_t krank_value = 0;
    bool achieves_q = false;           // rank == q
};

// kappas as in n_star: one entry with m >= 2 means m homogeneous copies
// (shared generators); m entries means heterogeneous observers (disjoint
// generators). Default generators are the first primes, assigned in order.
// Throws when any stack entry could exceed 2^53 (the exact-integer range of
// double), with guidance to use smaller primes or a shorter window. Within
// that range the stack is an exact integer matrix, so rank and krank are
// decided exactly (modular elimination), independent of the tolerance.
VandermondeWitness vandermonde_witness(
    std::size_t q, const std::vector<std::size_t>& kappas, std::size_t n,
    std::size_t m = 1,
    const std::optional<std::vector<std::uint64_t>>& generators = std::nullopt,
    const Tolerance& tol = {});

}  // namespace hmmident
