#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace hmmident {

// Tolerance policy shared by every numeric decision in the library.
// A pivot (or residual) is treated as zero when its magnitude is at most
// max(abs_eps, rel_eps * scale), where scale is the largest entry magnitude
// of the matrix under consideration.
struct Tolerance {
    double rel_eps = 1e-9;
    double abs_eps = 1e-12;

    Tolerance() = default;
    Tolerance(double rel, double abs);

    double threshold(double scale) const;
};

class matrix_error : public std::logic_error {
  public:
    explicit matrix_error(const std::string& what) : std::logic_error(what) {}
};

// Dense row-major matrix of doubles. Construction rejects empty shapes and
// non-finite entries, so downstream code may assume both.
class Matrix {
  public:
    Matrix(std::size_t rows, std::size_t cols);
    Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);
    Matrix(std::initializer_list<std::initializer_list<double>> rows);

    static Matrix identity(std::size_t n);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);
    static Matrix row_vector(const std::vector<double>& entries);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double at(std::size_t i, std::size_t j) const;
    void set(std::size_t i, std::size_t j, double value);

    std::vector<double> row(std::size_t i) const;
    std::vector<double> col(std::size_t j) const;
    Matrix rows_subset(const std::vector<std::size_t>& indices) const;

    Matrix transpose() const;
    Matrix operator*(const Matrix& other) const;
    Matrix operator+(const Matrix& other) const;
    Matrix operator-(const Matrix& other) const;
    Matrix scaled(double factor) const;

    double max_abs() const;
    bool approx_equal(const Matrix& other, double tol_abs) const;
    std::vector<std::vector<double>> to_rows() const;

  private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<double> data_;

    void check_entries() const;
};

// Row-vector times matrix and matrix times column-vector, used for the
// probability chains where pi and the one-vector stay plain vectors.
std::vector<double> vec_times_matrix(const std::vector<double>& v, const Matrix& m);
std::vector<double> matrix_times_vec(const Matrix& m, const std::vector<double>& v);
double dot(const std::vector<double>& a, const std::vector<double>& b);

struct RankInfo {
    std::size_t rank = 0;
    // Smallest nonzero pivot magnitude that fell below the acceptance
    // threshold, if any pivot was rejected. Diagnostic only.
    std::optional<double> smallest_rejected_pivot;
};

// Row reduction with partial pivoting. The pivot acceptance threshold is
// max(abs_eps, rel_eps * max_abs(m)) computed once from the input matrix.
RankInfo rank_info(const Matrix& m, const Tolerance& tol);
std::size_t rank(const Matrix& m, const Tolerance& tol);

// True when the selected rows are linearly dependent at the tolerance.
// Indices are 0-based, must be in range and distinct.
bool rows_dependent(const Matrix& m, const std::vector<std::size_t>& subset,
                    const Tolerance& tol);

// Solves X * factor = product for X when factor has full row rank.
// Returns std::nullopt when the system is inconsistent at the tolerance;
// throws matrix_error when factor is rank-deficient (solution not unique).
std::optional<Matrix> solve_left_factor(const Matrix& product, const Matrix& factor,
                                        const Tolerance& tol);

}  // namespace hmmident
