#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "hmmident/matrix.hpp"

namespace hmmident {

// Alphabet bookkeeping for one or more observers. Letters are 1-based and
// flat indices enumerate letter tuples lexicographically with observer 1 as
// the most significant position, also 1-based.
class LetterCodec {
  public:
    explicit LetterCodec(std::vector<std::size_t> kappas);

    std::size_t observers() const { return kappas_.size(); }
    std::size_t kappa(std::size_t j) const { return kappas_.at(j); }
    const std::vector<std::size_t>& kappas() const { return kappas_; }
    std::size_t total_letters() const { return total_; }

    // (y_1, ..., y_m) with y_j in {1..kappa_j}  ->  flat index in {1..total}.
    std::size_t encode(const std::vector<std::size_t>& letters) const;
    std::vector<std::size_t> decode(std::size_t flat_index) const;

  private:
    std::vector<std::size_t> kappas_;
    std::size_t total_;
};

// Kronecker product, row-major block layout: out[(i1,i2),(j1,j2)] = a(i1,j1)*b(i2,j2).
Matrix kron(const Matrix& a, const Matrix& b);

// Row-wise tensor product: row i of the result is kron of row i of a with
// row i of b. Both inputs must have the same number of rows.
Matrix row_tensor(const Matrix& a, const Matrix& b);

// Left fold of row_tensor over two or more factors.
Matrix row_tensor_multi(const std::vector<Matrix>& factors);

// Selector E(k) of shape (total_letters*q) x q holding I_q in the k-th
// row partition (k is 1-based) and zeros elsewhere.
Matrix selector_E(std::size_t k, std::size_t q, std::size_t total_letters);

// diag of the k-th column of b (k is 1-based).
Matrix diag_column(const Matrix& b, std::size_t k);

// If v = alpha * u for some scalar, returns alpha; nullopt when u is zero at
// the threshold or no scalar fits entrywise within the threshold.
std::optional<double> proportional_factor(const std::vector<double>& u,
                                          const std::vector<double>& v, double thresh);

// Permutation/scaling relation between two matrices with the same shape:
// succeeds with (perm, scale) such that h_bar = P * S * h, where S scales
// row j of h by scale[j] and row i of P*S*h is row perm[i] of S*h.
// Scale factors may be negative. Requires h to have no zero rows.
struct PermScale {
    std::vector<std::size_t> perm;   // perm[i] = row of h matched to row i of h_bar
    std::vector<double> scale;       // scale[j] = factor applied to row j of h

    Matrix permutation_matrix() const;
    Matrix scaling_matrix() const;
};

std::optional<PermScale> find_perm_scale(const Matrix& h, const Matrix& h_bar,
                                         const Tolerance& tol);

}  // namespace hmmident
