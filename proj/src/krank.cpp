#include "hmmident/krank.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "hmmident/tensor_ops.hpp"

namespace hmmident {

const char* bound_method_name(BoundMethod m) {
    switch (m) {
        case BoundMethod::exact: return "exact";
        case BoundMethod::coherence: return "coherence";
        case BoundMethod::sylvester_sum: return "sylvester-sum";
        case BoundMethod::trivial: return "trivial";
    }
    return "unknown";
}

namespace {

bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
    const std::size_t k = idx.size();
    for (std::size_t pos = k; pos-- > 0;) {
        if (idx[pos] < n - (k - pos)) {
            ++idx[pos];
            for (std::size_t p = pos + 1; p < k; ++p) idx[p] = idx[p - 1] + 1;
            return true;
        }
    }
    return false;
}

std::vector<std::size_t> first_combination(std::size_t k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    return idx;
}

// Largest absolute cosine between distinct rows, rows pre-normalized.
// Returns nullopt when a row is zero at the threshold.
std::optional<double> mutual_coherence(const Matrix& m, double zero_thresh) {
    std::vector<std::vector<double>> unit(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<double> r = m.row(i);
        double norm = std::sqrt(dot(r, r));
        bool zero = true;
        for (double v : r) {
            if (std::abs(v) > zero_thresh) {
                zero = false;
                break;
            }
        }
        if (zero) return std::nullopt;
        for (double& v : r) v /= norm;
        unit[i] = std::move(r);
    }
    double mu = 0.0;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = i + 1; j < m.rows(); ++j) {
            mu = std::max(mu, std::abs(dot(unit[i], unit[j])));
        }
    }
    return mu;
}

}  // namespace

KrankResult krank(const Matrix& m, const Tolerance& tol) {
    const std::size_t r = m.rows();
    const std::size_t c = m.cols();
    const double zero_thresh = tol.threshold(m.max_abs());

    KrankResult result;

    for (std::size_t i = 0; i < r; ++i) {
        bool zero = true;
        for (std::size_t j = 0; j < c; ++j) {
            if (std::abs(m(i, j)) > zero_thresh) {
                zero = false;
                break;
            }
        }
        if (zero) {
            result.value = 0;
            result.certificate = std::vector<std::size_t>{i};
            return result;
        }
    }

    const std::size_t cap = std::min(r, c);

    // Sizes s with (s-1)*mu < 1 cannot contain a dependent subset; skip them.
    // The margin keeps the certificate decision away from the float boundary.
    std::size_t start = 2;
    if (const auto mu = mutual_coherence(m, zero_thresh)) {
        if (*mu > 0.0) {
            while (start <= cap && (static_cast<double>(start) - 1.0) * (*mu) < 0.999) {
                ++start;
            }
        } else {
            start = cap + 1;
        }
    }

    auto note_rejected = [&result](const RankInfo& info) {
        if (info.smallest_rejected_pivot &&
            (!result.near_threshold ||
             *info.smallest_rejected_pivot < *result.near_threshold)) {
            result.near_threshold = info.smallest_rejected_pivot;
        }
    };

    for (std::size_t s = start; s <= cap; ++s) {
        std::vector<std::size_t> idx = first_combination(s);
        do {
            const RankInfo info = rank_info(m.rows_subset(idx), tol);
            note_rejected(info);
            if (info.rank < s) {
                result.value = s - 1;
                result.certificate = idx;
                return result;
            }
        } while (next_combination(idx, r));
    }

    result.value = cap;
    if (r > c) {
        // Every (c+1)-subset is dependent and all c-subsets were independent,
        // so the lexicographically first one is a minimal certificate.
        result.certificate = first_combination(c + 1);
    }
    return result;
}

KrankBound krank_lower_coherence(const Matrix& m, const Tolerance& tol) {
    KrankBound bound;
    bound.method = BoundMethod::coherence;
    bound.upper = std::min(m.rows(), m.cols());

    const double zero_thresh = tol.threshold(m.max_abs());
    const auto mu = mutual_coherence(m, zero_thresh);
    if (!mu) {
        bound.lower = 0;
        bound.from_zero_row = true;
        return bound;
    }
    if (*mu <= 0.0) {
        bound.lower = m.rows();
        return bound;
    }
    const double raw = 1.0 / *mu;
    auto lower = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    bound.lower = std::clamp<std::size_t>(lower, 1, bound.upper);
    return bound;
}

KrankBound krank_bound_row_tensor(std::size_t ka, std::size_t kb, std::size_t q) {
    KrankBound bound;
    bound.method = BoundMethod::sylvester_sum;
    bound.upper = q;
    bound.lower = (ka == 0 || kb == 0) ? 0 : std::min(ka + kb - 1, q);
    return bound;
}

KrankBound krank_bound_multi(const std::vector<std::size_t>& kranks, std::size_t q) {
    if (kranks.empty()) {
        throw std::invalid_argument("krank_bound_multi: needs at least one factor");
    }
    KrankBound bound;
    bound.method = BoundMethod::sylvester_sum;
    bound.upper = q;
    std::size_t sum = 0;
    for (std::size_t k : kranks) {
        if (k == 0) {
            bound.lower = 0;
            return bound;
        }
        sum += k;
    }
    bound.lower = std::min(sum - (kranks.size() - 1), q);
    return bound;
}

bool KrankPropertyReport::all_passed() const {
    return commute_permutation.passed && krank_symmetry.passed &&
           dominates_kronecker.passed && self_power.passed;
}

KrankPropertyReport verify_krank_properties(const Matrix& a, const Matrix& b,
                                            const Tolerance& tol) {
    if (a.rows() != b.rows()) {
        throw std::invalid_argument("verify_krank_properties: row counts differ");
    }
    KrankPropertyReport report;

    const Matrix ab = row_tensor(a, b);
    const Matrix ba = row_tensor(b, a);

    {
        // Column (jb, ja) of B (x)row A carries the same products as column
        // (ja, jb) of A (x)row B; P moves each one into place.
        Matrix p(ba.cols(), ba.cols());
        for (std::size_t jb = 0; jb < b.cols(); ++jb) {
            for (std::size_t ja = 0; ja < a.cols(); ++ja) {
                p(jb * a.cols() + ja, ja * b.cols() + jb) = 1.0;
            }
        }
        const bool ok = ab.approx_equal(ba * p, tol.abs_eps);
        std::ostringstream os;
        os << "A(x)rowB " << (ok ? "equals" : "does not equal")
           << " (B(x)rowA)*P for the constructed column permutation";
        report.commute_permutation = {ok, os.str()};
    }

    const KrankResult k_ab = krank(ab, tol);
    const KrankResult k_ba = krank(ba, tol);
    {
        const bool ok = k_ab.value == k_ba.value;
        std::ostringstream os;
        os << "krank(A(x)rowB) = " << k_ab.value << ", krank(B(x)rowA) = " << k_ba.value;
        report.krank_symmetry = {ok, os.str()};
    }

    {
        // The rows of A (x)row B are the diagonal subset of the rows of
        // kron(A, B), so every K-subset that is independent in the full set
        // stays independent in the subset; the bound saturates at the row
        // count of the smaller matrix.
        const KrankResult k_kron = krank(kron(a, b), tol);
        const std::size_t expect = std::min(k_kron.value, ab.rows());
        const bool ok = k_ab.value >= expect;
        std::ostringstream os;
        os << "krank(A(x)rowB) = " << k_ab.value
           << " vs min(krank(kron(A,B)), q) = " << expect;
        report.dominates_kronecker = {ok, os.str()};
    }

    {
        const KrankResult k_b = krank(b, tol);
        const KrankResult k_bb = krank(row_tensor(b, b), tol);
        const bool ok = k_bb.value >= k_b.value;
        std::ostringstream os;
        os << "krank(B(x)rowB) = " << k_bb.value << " vs krank(B) = " << k_b.value;
        report.self_power = {ok, os.str()};
    }

    return report;
}

}  // namespace hmmident
