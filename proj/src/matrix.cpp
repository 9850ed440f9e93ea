#include "hmmident/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace hmmident {

Tolerance::Tolerance(double rel, double abs) : rel_eps(rel), abs_eps(abs) {
    if (!std::isfinite(rel) || !std::isfinite(abs) || rel < 0.0 || abs < 0.0) {
        throw std::invalid_argument("tolerance: rel_eps and abs_eps must be finite and >= 0");
    }
}

double Tolerance::threshold(double scale) const {
    return std::max(abs_eps, rel_eps * std::abs(scale));
}

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("matrix: zero-sized dimension");
    }
}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (rows == 0 || cols == 0) {
        throw std::invalid_argument("matrix: zero-sized dimension");
    }
    if (data_.size() != rows * cols) {
        throw std::invalid_argument("matrix: entry count does not match shape");
    }
    check_entries();
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
    if (rows_ == 0 || cols_ == 0) {
        throw std::invalid_argument("matrix: zero-sized dimension");
    }
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw std::invalid_argument("matrix: ragged initializer");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
    check_entries();
}

void Matrix::check_entries() const {
    for (double v : data_) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("matrix: non-finite entry");
        }
    }
}

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) {
        throw std::invalid_argument("matrix: zero-sized dimension");
    }
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols_) {
            throw std::invalid_argument("matrix: ragged rows");
        }
        for (std::size_t j = 0; j < m.cols_; ++j) m(i, j) = rows[i][j];
    }
    m.check_entries();
    return m;
}

Matrix Matrix::row_vector(const std::vector<double>& entries) {
    return from_rows({entries});
}

double Matrix::at(std::size_t i, std::size_t j) const {
    if (i >= rows_ || j >= cols_) {
        throw std::out_of_range("matrix: index out of range");
    }
    return (*this)(i, j);
}

void Matrix::set(std::size_t i, std::size_t j, double value) {
    if (i >= rows_ || j >= cols_) {
        throw std::out_of_range("matrix: index out of range");
    }
    if (!std::isfinite(value)) {
        throw std::invalid_argument("matrix: non-finite entry");
    }
    (*this)(i, j) = value;
}

std::vector<double> Matrix::row(std::size_t i) const {
    if (i >= rows_) throw std::out_of_range("matrix: row index out of range");
    return std::vector<double>(data_.begin() + i * cols_, data_.begin() + (i + 1) * cols_);
}

std::vector<double> Matrix::col(std::size_t j) const {
    if (j >= cols_) throw std::out_of_range("matrix: column index out of range");
    std::vector<double> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
    return out;
}

Matrix Matrix::rows_subset(const std::vector<std::size_t>& indices) const {
    if (indices.empty()) throw std::invalid_argument("matrix: empty row subset");
    Matrix out(indices.size(), cols_);
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (indices[k] >= rows_) throw std::out_of_range("matrix: subset row out of range");
        for (std::size_t j = 0; j < cols_; ++j) out(k, j) = (*this)(indices[k], j);
    }
    return out;
}

Matrix Matrix::transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
}

Matrix Matrix::operator*(const Matrix& other) const {
    if (cols_ != other.rows_) {
        throw std::invalid_argument("matrix: product shape mismatch");
    }
    Matrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t k = 0; k < cols_; ++k) {
            const double v = (*this)(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < other.cols_; ++j) {
                out(i, j) += v * other(k, j);
            }
        }
    }
    return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("matrix: sum shape mismatch");
    }
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + other.data_[i];
    return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw std::invalid_argument("matrix: difference shape mismatch");
    }
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - other.data_[i];
    return out;
}

Matrix Matrix::scaled(double factor) const {
    if (!std::isfinite(factor)) throw std::invalid_argument("matrix: non-finite scale");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * factor;
    return out;
}

double Matrix::max_abs() const {
    double best = 0.0;
    for (double v : data_) best = std::max(best, std::abs(v));
    return best;
}

bool Matrix::approx_equal(const Matrix& other, double tol_abs) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) return false;
    for (std::size_t i = 0; i < data_.size(); ++i) {
        if (std::abs(data_[i] - other.data_[i]) > tol_abs) return false;
    }
    return true;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
    std::vector<std::vector<double>> out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = row(i);
    return out;
}

std::vector<double> vec_times_matrix(const std::vector<double>& v, const Matrix& m) {
    if (v.size() != m.rows()) {
        throw std::invalid_argument("vec_times_matrix: length mismatch");
    }
    std::vector<double> out(m.cols(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        if (v[i] == 0.0) continue;
        for (std::size_t j = 0; j < m.cols(); ++j) out[j] += v[i] * m(i, j);
    }
    return out;
}

std::vector<double> matrix_times_vec(const Matrix& m, const std::vector<double>& v) {
    if (v.size() != m.cols()) {
        throw std::invalid_argument("matrix_times_vec: length mismatch");
    }
    std::vector<double> out(m.rows(), 0.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

RankInfo rank_info(const Matrix& m, const Tolerance& tol) {
    const double thresh = tol.threshold(m.max_abs());
    Matrix work = m;
    const std::size_t r = work.rows();
    const std::size_t c = work.cols();

    RankInfo info;
    std::size_t pivot_row = 0;
    for (std::size_t col = 0; col < c && pivot_row < r; ++col) {
        std::size_t best = pivot_row;
        double best_abs = std::abs(work(pivot_row, col));
        for (std::size_t i = pivot_row + 1; i < r; ++i) {
            const double a = std::abs(work(i, col));
            if (a > best_abs) {
                best = i;
                best_abs = a;
            }
        }
        if (best_abs <= thresh) {
            if (best_abs > 0.0) {
                if (!info.smallest_rejected_pivot ||
                    best_abs < *info.smallest_rejected_pivot) {
                    info.smallest_rejected_pivot = best_abs;
                }
            }
            continue;
        }
        if (best != pivot_row) {
            for (std::size_t j = 0; j < c; ++j) {
                std::swap(work(pivot_row, j), work(best, j));
            }
        }
        const double pivot = work(pivot_row, col);
        for (std::size_t i = pivot_row + 1; i < r; ++i) {
            const double f = work(i, col) / pivot;
            if (f == 0.0) continue;
            work(i, col) = 0.0;
            for (std::size_t j = col + 1; j < c; ++j) {
                work(i, j) -= f * work(pivot_row, j);
            }
        }
        ++pivot_row;
        ++info.rank;
    }
    return info;
}

std::size_t rank(const Matrix& m, const Tolerance& tol) {
    return rank_info(m, tol).rank;
}

bool rows_dependent(const Matrix& m, const std::vector<std::size_t>& subset,
                    const Tolerance& tol) {
    if (subset.empty()) {
        throw std::invalid_argument("rows_dependent: empty subset");
    }
    std::set<std::size_t> seen(subset.begin(), subset.end());
    if (seen.size() != subset.size()) {
        throw std::invalid_argument("rows_dependent: duplicate index in subset");
    }
    if (*seen.rbegin() >= m.rows()) {
        throw std::out_of_range("rows_dependent: row index out of range");
    }
    return rank(m.rows_subset(subset), tol) < subset.size();
}

namespace {

// Solves the square system M x = b by elimination with partial pivoting.
// Caller guarantees M is well conditioned enough for the use at hand.
std::vector<double> solve_square(Matrix m, std::vector<double> b, const Tolerance& tol) {
    const std::size_t n = m.rows();
    const double thresh = tol.threshold(m.max_abs());
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t best = col;
        for (std::size_t i = col + 1; i < n; ++i) {
            if (std::abs(m(i, col)) > std::abs(m(best, col))) best = i;
        }
        if (std::abs(m(best, col)) <= thresh) {
            throw matrix_error("solve: singular system");
        }
        if (best != col) {
            for (std::size_t j = 0; j < n; ++j) std::swap(m(col, j), m(best, j));
            std::swap(b[col], b[best]);
        }
        for (std::size_t i = col + 1; i < n; ++i) {
            const double f = m(i, col) / m(col, col);
            if (f == 0.0) continue;
            for (std::size_t j = col; j < n; ++j) m(i, j) -= f * m(col, j);
            b[i] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t j = ii + 1; j < n; ++j) s -= m(ii, j) * x[j];
        x[ii] = s / m(ii, ii);
    }
    return x;
}

}  // namespace

std::optional<Matrix> solve_left_factor(const Matrix& product, const Matrix& factor,
                                        const Tolerance& tol) {
    if (product.cols() != factor.cols()) {
        throw std::invalid_argument("solve_left_factor: column count mismatch");
    }
    const std::size_t k = factor.rows();
    if (rank(factor, tol) < k) {
        throw matrix_error("solve_left_factor: factor is rank-deficient, solution not unique");
    }

    // X = product * factor^T * (factor * factor^T)^{-1}, then residual check.
    const Matrix ft = factor.transpose();
    const Matrix gram = factor * ft;
    const Matrix rhs = product * ft;

    Matrix x(product.rows(), k);
    for (std::size_t i = 0; i < product.rows(); ++i) {
        std::vector<double> sol = solve_square(gram, rhs.row(i), tol);
        for (std::size_t j = 0; j < k; ++j) x(i, j) = sol[j];
    }

    const Matrix resid = x * factor - product;
    const double scale = std::max({1.0, product.max_abs(), x.max_abs() * factor.max_abs()});
    if (resid.max_abs() > tol.threshold(scale) * static_cast<double>(factor.cols())) {
        return std::nullopt;
    }
    return x;
}

}  // namespace hmmident
