#include "hmmident/tensor_ops.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hmmident {

LetterCodec::LetterCodec(std::vector<std::size_t> kappas) : kappas_(std::move(kappas)) {
    if (kappas_.empty()) {
        throw std::invalid_argument("letter codec: needs at least one observer");
    }
    total_ = 1;
    for (std::size_t k : kappas_) {
        if (k < 2) {
            throw std::invalid_argument("letter codec: every alphabet needs at least 2 letters");
        }
        total_ *= k;
    }
}

std::size_t LetterCodec::encode(const std::vector<std::size_t>& letters) const {
    if (letters.size() != kappas_.size()) {
        throw std::invalid_argument("letter codec: tuple arity does not match observer count");
    }
    std::size_t idx = 0;
    for (std::size_t j = 0; j < letters.size(); ++j) {
        if (letters[j] < 1 || letters[j] > kappas_[j]) {
            throw std::out_of_range("letter codec: letter out of range");
        }
        idx = idx * kappas_[j] + (letters[j] - 1);
    }
    return idx + 1;
}

std::vector<std::size_t> LetterCodec::decode(std::size_t flat_index) const {
    if (flat_index < 1 || flat_index > total_) {
        throw std::out_of_range("letter codec: flat index out of range");
    }
    std::size_t rest = flat_index - 1;
    std::vector<std::size_t> letters(kappas_.size());
    for (std::size_t j = kappas_.size(); j-- > 0;) {
        letters[j] = rest % kappas_[j] + 1;
        rest /= kappas_[j];
    }
    return letters;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i1 = 0; i1 < a.rows(); ++i1) {
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            const double v = a(i1, j1);
            if (v == 0.0) continue;
            for (std::size_t i2 = 0; i2 < b.rows(); ++i2) {
                for (std::size_t j2 = 0; j2 < b.cols(); ++j2) {
                    out(i1 * b.rows() + i2, j1 * b.cols() + j2) = v * b(i2, j2);
                }
            }
        }
    }
    return out;
}

Matrix row_tensor(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("row_tensor: factors must have the same number of rows");
    }
    Matrix out(a.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j1 = 0; j1 < a.cols(); ++j1) {
            const double v = a(i, j1);
            for (std::size_t j2 = 0; j2 < b.cols(); ++j2) {
                out(i, j1 * b.cols() + j2) = v * b(i, j2);
            }
        }
    }
    return out;
}

Matrix row_tensor_multi(const std::vector<Matrix>& factors) {
    if (factors.size() < 2) {
        throw std::invalid_argument("row_tensor_multi: needs at least two factors");
    }
    Matrix acc = factors.front();
    for (std::size_t k = 1; k < factors.size(); ++k) {
        acc = row_tensor(acc, factors[k]);
    }
    return acc;
}

Matrix selector_E(std::size_t k, std::size_t q, std::size_t total_letters) {
    if (q == 0 || total_letters == 0) {
        throw std::invalid_argument("selector: zero-sized shape");
    }
    if (k < 1 || k > total_letters) {
        throw std::out_of_range("selector: letter index out of range");
    }
    Matrix out(total_letters * q, q);
    for (std::size_t i = 0; i < q; ++i) {
        out((k - 1) * q + i, i) = 1.0;
    }
    return out;
}

Matrix diag_column(const Matrix& b, std::size_t k) {
    if (k < 1 || k > b.cols()) {
        throw std::out_of_range("diag_column: column index out of range");
    }
    Matrix out(b.rows(), b.rows());
    for (std::size_t i = 0; i < b.rows(); ++i) {
        out(i, i) = b(i, k - 1);
    }
    return out;
}

Matrix PermScale::permutation_matrix() const {
    Matrix p(perm.size(), perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) p(i, perm[i]) = 1.0;
    return p;
}

Matrix PermScale::scaling_matrix() const {
    Matrix s(scale.size(), scale.size());
    for (std::size_t j = 0; j < scale.size(); ++j) s(j, j) = scale[j];
    return s;
}

// If v = alpha * u for some scalar, returns alpha. u must be nonzero.
std::optional<double> proportional_factor(const std::vector<double>& u,
                                          const std::vector<double>& v, double thresh) {
    std::size_t p = 0;
    for (std::size_t j = 1; j < u.size(); ++j) {
        if (std::abs(u[j]) > std::abs(u[p])) p = j;
    }
    if (std::abs(u[p]) <= thresh) return std::nullopt;
    const double alpha = v[p] / u[p];
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (std::abs(v[j] - alpha * u[j]) > thresh) return std::nullopt;
    }
    return alpha;
}

namespace {

bool assign_rows(std::size_t i, const std::vector<std::vector<std::size_t>>& candidates,
                 std::vector<bool>& used, std::vector<std::size_t>& perm) {
    if (i == candidates.size()) return true;
    for (std::size_t j : candidates[i]) {
        if (used[j]) continue;
        used[j] = true;
        perm[i] = j;
        if (assign_rows(i + 1, candidates, used, perm)) return true;
        used[j] = false;
    }
    return false;
}

}  // namespace

std::optional<PermScale> find_perm_scale(const Matrix& h, const Matrix& h_bar,
                                         const Tolerance& tol) {
    if (h.rows() != h_bar.rows() || h.cols() != h_bar.cols()) {
        throw std::invalid_argument("find_perm_scale: shape mismatch");
    }
    const double scale_in = std::max(h.max_abs(), h_bar.max_abs());
    const double thresh = tol.threshold(scale_in);

    for (std::size_t j = 0; j < h.rows(); ++j) {
        bool zero = true;
        for (std::size_t c = 0; c < h.cols(); ++c) {
            if (std::abs(h(j, c)) > thresh) {
                zero = false;
                break;
            }
        }
        if (zero) {
            throw std::invalid_argument("find_perm_scale: reference matrix has a zero row");
        }
    }

    const std::size_t n = h.rows();
    std::vector<std::vector<std::size_t>> candidates(n);
    std::vector<std::vector<double>> factors(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double> bar_row = h_bar.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            const auto alpha = proportional_factor(h.row(j), bar_row, thresh);
            if (alpha && std::abs(*alpha) > thresh) {
                candidates[i].push_back(j);
                factors[i][j] = *alpha;
            }
        }
        if (candidates[i].empty()) return std::nullopt;
    }

    std::vector<bool> used(n, false);
    std::vector<std::size_t> perm(n, 0);
    if (!assign_rows(0, candidates, used, perm)) return std::nullopt;

    PermScale result;
    result.perm = perm;
    result.scale.assign(n, 1.0);
    for (std::size_t i = 0; i < n; ++i) {
        result.scale[perm[i]] = factors[i][perm[i]];
    }

    const Matrix rebuilt = result.permutation_matrix() * result.scaling_matrix() * h;
    if (!h_bar.approx_equal(rebuilt, thresh * static_cast<double>(h.cols()))) {
        return std::nullopt;
    }
    return result;
}

}  // namespace hmmident
