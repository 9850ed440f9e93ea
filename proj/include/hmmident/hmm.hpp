#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hmmident/matrix.hpp"
#include "hmmident/tensor_ops.hpp"

namespace hmmident {

// Discrete-time HMM with one observer: q hidden states, kappa output letters,
// row-stochastic transition matrix A (q x q) and observation matrix B
// (q x kappa) whose row i is the emission distribution of state i.
struct HmmParams {
    std::vector<double> pi;
    Matrix A;
    Matrix B;

    std::size_t q() const { return A.rows(); }
    std::size_t kappa() const { return B.cols(); }
};

// m >= 2 conditionally independent observers sharing the hidden chain.
struct MultiHmmParams {
    std::vector<double> pi;
    Matrix A;
    std::vector<Matrix> Bs;
    bool homogeneous = false;

    std::size_t q() const { return A.rows(); }
    std::size_t m() const { return Bs.size(); }
    std::vector<std::size_t> kappas() const;
};

// HMM-shaped parameter set without stochasticity guarantees, evaluated with a
// generalized one-vector in place of 1_q. Produced by the counterexample
// constructions; equivalent to some true HMM by construction.
struct QuasiHmm {
    std::vector<double> pi;
    Matrix A;
    std::vector<Matrix> Bs;
    std::vector<double> one_vec;
    std::string provenance;

    std::size_t q() const { return A.rows(); }
    bool single_observer() const { return Bs.size() == 1; }
    std::vector<std::size_t> kappas() const;
};

struct Violation {
    std::string field;
    std::string message;
};

std::vector<Violation> validate(const HmmParams& h, const Tolerance& tol);
std::vector<Violation> validate(const MultiHmmParams& h, const Tolerance& tol);

// True when pi solves pi = pi * A at the tolerance (sum-normalized inputs).
bool is_stationary(const std::vector<double>& pi, const Matrix& a, const Tolerance& tol);

// Stationary distribution by power convergence: A is squared repeatedly until
// all rows of the power agree, which covers aperiodic chains with a single
// recurrent class. Throws matrix_error naming reducibility/periodicity as the
// suspected cause when the rows never meet.
std::vector<double> stationary_distribution(const Matrix& a, const Tolerance& tol);

// Governing row-tensor stacks: B (x)row A, and B1 (x)row ... Bm (x)row A.
Matrix build_W(const HmmParams& h);
Matrix build_W_multi(const MultiHmmParams& h);

// Observation probability of a letter sequence (letters 1-based), computed as
// the literal operator chain pi * WE(y1) * WE(y2) * ... * WE(yN) * 1_q with
// WE(k) = diag(B(:,k)) * A.
double sequence_prob(const HmmParams& h, const std::vector<std::size_t>& y,
                     const std::optional<std::vector<double>>& pi_override = std::nullopt);

// Multi-observer version; ys[t] is the m-tuple of letters observed at time t.
double sequence_prob_multi(const MultiHmmParams& h,
                           const std::vector<std::vector<std::size_t>>& ys,
                           const std::optional<std::vector<double>>& pi_override = std::nullopt);

// Same chain, with the stored generalized one-vector at the end.
double quasi_sequence_prob(const QuasiHmm& h,
                           const std::vector<std::vector<std::size_t>>& ys);
double quasi_sequence_prob_single(const QuasiHmm& h, const std::vector<std::size_t>& y);

// Uniform evaluation surface over HmmParams, MultiHmmParams and QuasiHmm:
// per-letter operators M(k) indexed by the flat letter codec, a left vector
// and a closing vector.
class SequenceEvaluator {
  public:
    explicit SequenceEvaluator(const HmmParams& h);
    explicit SequenceEvaluator(const MultiHmmParams& h);
    explicit SequenceEvaluator(const QuasiHmm& h);

    const LetterCodec& codec() const { return codec_; }
    std::size_t q() const { return a_.rows(); }

    // flat 1-based letters per step
    double prob_flat(const std::vector<std::size_t>& flat) const;
    double prob_tuples(const std::vector<std::vector<std::size_t>>& tuples) const;

    // left vector after consuming one flat letter (used by the enumeration)
    std::vector<double> step(const std::vector<double>& v, std::size_t flat_letter) const;
    const std::vector<double>& start() const { return pi_; }
    double close(const std::vector<double>& v) const { return dot(v, one_); }

  private:
    LetterCodec codec_;
    std::vector<double> pi_;
    Matrix a_;
    std::vector<Matrix> bs_;
    std::vector<double> one_;
};

struct EquivalenceReport {
    bool equivalent = false;
    std::size_t max_len = 0;
    // First disagreeing sequence, shortest length first and lexicographic
    // within a length; letters reported as tuples per step.
    std::optional<std::vector<std::vector<std::size_t>>> counterexample;
    double p1 = 0.0;
    double p2 = 0.0;
};

// Compares observation probabilities on every sequence up to max_len. The
// two models must share the letter alphabet. Probabilities are compared at
// the absolute threshold tol.threshold(1).
EquivalenceReport equivalent(const SequenceEvaluator& e1, const SequenceEvaluator& e2,
                             std::size_t max_len, const Tolerance& tol);

EquivalenceReport equivalent(const HmmParams& h1, const HmmParams& h2,
                             std::size_t max_len, const Tolerance& tol);

}  // namespace hmmident
