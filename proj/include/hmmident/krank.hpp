#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hmmident/matrix.hpp"

namespace hmmident {

// Kruskal rank over rows: the largest K such that every K-subset of rows is
// linearly independent at the tolerance.
struct KrankResult {
    std::size_t value = 0;
    // A minimal dependent row subset of size value+1 (0-based indices,
    // lexicographically smallest at that size), or nullopt when no dependent
    // subset exists ("full": value equals the row count).
    std::optional<std::vector<std::size_t>> certificate;
    // Smallest nonzero pivot magnitude rejected across the rank decisions
    // performed, when any was rejected. Diagnostic only.
    std::optional<double> near_threshold;

    bool full() const { return !certificate.has_value(); }
};

enum class BoundMethod { exact, coherence, sylvester_sum, trivial };

struct KrankBound {
    std::size_t lower = 0;
    std::size_t upper = 0;
    BoundMethod method = BoundMethod::trivial;
    // Set when a zero row forced the coherence bound to zero.
    bool from_zero_row = false;
};

const char* bound_method_name(BoundMethod m);

// Exact Kruskal rank by ascending subset enumeration with early exit.
// Pre-filters: zero-row scan, then a mutual-coherence certificate that skips
// subset sizes which cannot be dependent.
KrankResult krank(const Matrix& m, const Tolerance& tol);

// Mutual-coherence lower bound ceil(1/mu) on the Kruskal rank, where mu is
// the largest absolute cosine between distinct normalized rows. Orthogonal
// rows (mu = 0) certify the row count. A zero row yields lower = 0 with
// from_zero_row set.
KrankBound krank_lower_coherence(const Matrix& m, const Tolerance& tol);

// Sylvester-style lower bound for a two-factor row tensor product with q
// rows: min(ka + kb - 1, q), or 0 when either factor krank is 0.
KrankBound krank_bound_row_tensor(std::size_t ka, std::size_t kb, std::size_t q);

// Multi-factor version: min(sum(kranks) - (count - 1), q), or 0 when any
// factor krank is 0.
KrankBound krank_bound_multi(const std::vector<std::size_t>& kranks, std::size_t q);

struct PropertyCheck {
    bool passed = false;
    std::string detail;
};

// Structural properties of the row tensor product, checked constructively on
// a concrete pair of factors with equal row counts:
//  - commute_permutation: A (x)row B equals (B (x)row A) * P for an explicit
//    column permutation P;
//  - krank_symmetry: the two orders have equal Kruskal rank;
//  - dominates_kronecker: krank(A (x)row B) >= krank(kron(A, B));
//  - self_power: krank(B (x)row B) >= krank(B).
struct KrankPropertyReport {
    PropertyCheck commute_permutation;
    PropertyCheck krank_symmetry;
    PropertyCheck dominates_kronecker;
    PropertyCheck self_power;

    bool all_passed() const;
};

KrankPropertyReport verify_krank_properties(const Matrix& a, const Matrix& b,
                                            const Tolerance& tol);

}  // namespace hmmident
