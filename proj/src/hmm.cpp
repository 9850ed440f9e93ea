#include "hmmident/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hmmident {

std::vector<std::size_t> MultiHmmParams::kappas() const {
    std::vector<std::size_t> out;
    out.reserve(Bs.size());
    for (const Matrix& b : Bs) out.push_back(b.cols());
    return out;
}

std::vector<std::size_t> QuasiHmm::kappas() const {
    std::vector<std::size_t> out;
    out.reserve(Bs.size());
    for (const Matrix& b : Bs) out.push_back(b.cols());
    return out;
}

namespace {

void check_stochastic_rows(const Matrix& m, const std::string& field, const Tolerance& tol,
                           std::vector<Violation>& out) {
    const double thresh = tol.threshold(1.0);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (m(i, j) < -thresh) {
                std::ostringstream os;
                os << "row " << i << " has negative entry at column " << j;
                out.push_back({field, os.str()});
            }
            sum += m(i, j);
        }
        if (std::abs(sum - 1.0) > thresh) {
            std::ostringstream os;
            os << "row " << i << " sums to " << sum << ", expected 1";
            out.push_back({field, os.str()});
        }
    }
}

void check_pi(const std::vector<double>& pi, std::size_t q, const Tolerance& tol,
              std::vector<Violation>& out) {
    if (pi.size() != q) {
        std::ostringstream os;
        os << "length " << pi.size() << " does not match q = " << q;
        out.push_back({"pi", os.str()});
        return;
    }
    const double thresh = tol.threshold(1.0);
    double sum = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        if (!std::isfinite(pi[i])) {
            out.push_back({"pi", "non-finite entry"});
            return;
        }
        if (pi[i] < -thresh) {
            std::ostringstream os;
            os << "negative entry at index " << i;
            out.push_back({"pi", os.str()});
        }
        sum += pi[i];
    }
    if (std::abs(sum - 1.0) > thresh) {
        std::ostringstream os;
        os << "sums to " << sum << ", expected 1";
        out.push_back({"pi", os.str()});
    }
}

bool matrices_equal(const Matrix& a, const Matrix& b, const Tolerance& tol) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    return a.approx_equal(b, tol.threshold(std::max(a.max_abs(), b.max_abs())));
}

}  // namespace

std::vector<Violation> validate(const HmmParams& h, const Tolerance& tol) {
    std::vector<Violation> out;
    if (h.A.rows() != h.A.cols()) {
        out.push_back({"A", "transition matrix must be square"});
    }
    if (h.B.rows() != h.A.rows()) {
        out.push_back({"B", "observation matrix row count must equal q"});
    }
    if (h.B.cols() < 2) {
        out.push_back({"B", "alphabet needs at least 2 letters"});
    }
    check_stochastic_rows(h.A, "A", tol, out);
    check_stochastic_rows(h.B, "B", tol, out);
    check_pi(h.pi, h.A.rows(), tol, out);
    return out;
}

std::vector<Violation> validate(const MultiHmmParams& h, const Tolerance& tol) {
    std::vector<Violation> out;
    if (h.A.rows() != h.A.cols()) {
        out.push_back({"A", "transition matrix must be square"});
    }
    check_stochastic_rows(h.A, "A", tol, out);
    check_pi(h.pi, h.A.rows(), tol, out);
    if (h.Bs.size() < 2) {
        out.push_back({"Bs", "multi-observer model needs m >= 2 observation matrices"});
    }
    for (std::size_t j = 0; j < h.Bs.size(); ++j) {
        std::ostringstream field;
        field << "Bs[" << j << "]";
        if (h.Bs[j].rows() != h.A.rows()) {
            out.push_back({field.str(), "observation matrix row count must equal q"});
        }
        if (h.Bs[j].cols() < 2) {
            out.push_back({field.str(), "alphabet needs at least 2 letters"});
        }
        check_stochastic_rows(h.Bs[j], field.str(), tol, out);
    }
    if (h.Bs.size() >= 2) {
        bool all_equal = true;
        for (std::size_t j = 1; j < h.Bs.size(); ++j) {
            if (!matrices_equal(h.Bs[0], h.Bs[j], tol)) {
                all_equal = false;
                break;
            }
        }
        if (h.homogeneous && !all_equal) {
            out.push_back({"homogeneous", "flag set but observation matrices differ"});
        }
        if (!h.homogeneous && all_equal) {
            out.push_back({"homogeneous",
                           "declared heterogeneous but all observation matrices are identical"});
        }
    }
    return out;
}

bool is_stationary(const std::vector<double>& pi, const Matrix& a, const Tolerance& tol) {
    const std::vector<double> next = vec_times_matrix(pi, a);
    double resid = 0.0;
    for (std::size_t i = 0; i < pi.size(); ++i) {
        resid = std::max(resid, std::abs(next[i] - pi[i]));
    }
    return resid <= tol.threshold(1.0);
}

std::vector<double> stationary_distribution(const Matrix& a, const Tolerance& tol) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("stationary_distribution: matrix must be square");
    }
    std::vector<Violation> v;
    check_stochastic_rows(a, "A", tol, v);
    if (!v.empty()) {
        throw std::invalid_argument("stationary_distribution: matrix is not row-stochastic: " +
                                    v.front().message);
    }

    const std::size_t q = a.rows();
    Matrix power = a;
    for (int iter = 0; iter < 64; ++iter) {
        double spread = 0.0;
        for (std::size_t j = 0; j < q; ++j) {
            double lo = power(0, j);
            double hi = lo;
            for (std::size_t i = 1; i < q; ++i) {
                lo = std::min(lo, power(i, j));
                hi = std::max(hi, power(i, j));
            }
            spread = std::max(spread, hi - lo);
        }
        if (spread <= 1e-13) {
            std::vector<double> pi(q, 0.0);
            for (std::size_t j = 0; j < q; ++j) {
                double s = 0.0;
                for (std::size_t i = 0; i < q; ++i) s += power(i, j);
                pi[j] = s / static_cast<double>(q);
            }
            double total = 0.0;
            for (double x : pi) total += x;
            for (double& x : pi) x /= total;
            if (!is_stationary(pi, a, tol)) {
                throw matrix_error(
                    "stationary_distribution: power limit is not a fixed point");
            }
            return pi;
        }
        power = power * power;
        for (std::size_t i = 0; i < q; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < q; ++j) s += power(i, j);
            for (std::size_t j = 0; j < q; ++j) power(i, j) /= s;
        }
    }
    throw matrix_error(
        "stationary_distribution: powers of A do not converge to a common row; "
        "the chain is likely reducible into separate classes or periodic");
}

Matrix build_W(const HmmParams& h) {
    Matrix w = row_tensor(h.B, h.A);
#ifndef NDEBUG
    // Block layout cross-check: column block k of W must be diag(B(:,k)) * A.
    for (std::size_t k = 1; k <= h.kappa(); ++k) {
        const Matrix block = diag_column(h.B, k) * h.A;
        for (std::size_t i = 0; i < w.rows(); ++i) {
            for (std::size_t j = 0; j < h.q(); ++j) {
                if (w(i, (k - 1) * h.q() + j) != block(i, j)) {
                    throw matrix_error("build_W: block layout mismatch");
                }
            }
        }
    }
#endif
    return w;
}

Matrix build_W_multi(const MultiHmmParams& h) {
    std::vector<Matrix> factors = h.Bs;
    factors.push_back(h.A);
    return row_tensor_multi(factors);
}

namespace {

std::vector<double> emission_scaled(const std::vector<double>& v,
                                    const std::vector<Matrix>& bs,
                                    const std::vector<std::size_t>& letters) {
    std::vector<double> out = v;
    for (std::size_t j = 0; j < bs.size(); ++j) {
        const std::size_t letter = letters[j];
        if (letter < 1 || letter > bs[j].cols()) {
            throw std::out_of_range("sequence: letter out of range");
        }
        for (std::size_t i = 0; i < out.size(); ++i) {
            out[i] *= bs[j](i, letter - 1);
        }
    }
    return out;
}

double chain_prob(const std::vector<double>& pi, const Matrix& a,
                  const std::vector<Matrix>& bs,
                  const std::vector<std::vector<std::size_t>>& ys,
                  const std::vector<double>& one_vec) {
    if (ys.empty()) {
        throw std::invalid_argument("sequence: empty sequence");
    }
    std::vector<double> v = pi;
    for (const auto& letters : ys) {
        if (letters.size() != bs.size()) {
            throw std::invalid_argument("sequence: tuple arity does not match observer count");
        }
        v = vec_times_matrix(emission_scaled(v, bs, letters), a);
    }
    return dot(v, one_vec);
}

}  // namespace

double sequence_prob(const HmmParams& h, const std::vector<std::size_t>& y,
                     const std::optional<std::vector<double>>& pi_override) {
    const std::vector<double>& pi = pi_override ? *pi_override : h.pi;
    if (pi.size() != h.q()) {
        throw std::invalid_argument("sequence: pi length does not match q");
    }
    std::vector<std::vector<std::size_t>> ys;
    ys.reserve(y.size());
    for (std::size_t letter : y) ys.push_back({letter});
    return chain_prob(pi, h.A, {h.B}, ys, std::vector<double>(h.q(), 1.0));
}

double sequence_prob_multi(const MultiHmmParams& h,
                           const std::vector<std::vector<std::size_t>>& ys,
                           const std::optional<std::vector<double>>& pi_override) {
    const std::vector<double>& pi = pi_override ? *pi_override : h.pi;
    if (pi.size() != h.q()) {
        throw std::invalid_argument("sequence: pi length does not match q");
    }
    return chain_prob(pi, h.A, h.Bs, ys, std::vector<double>(h.q(), 1.0));
}

double quasi_sequence_prob(const QuasiHmm& h,
                           const std::vector<std::vector<std::size_t>>& ys) {
    return chain_prob(h.pi, h.A, h.Bs, ys, h.one_vec);
}

double quasi_sequence_prob_single(const QuasiHmm& h, const std::vector<std::size_t>& y) {
    if (!h.single_observer()) {
        throw std::invalid_argument("sequence: quasi model has multiple observers");
    }
    std::vector<std::vector<std::size_t>> ys;
    ys.reserve(y.size());
    for (std::size_t letter : y) ys.push_back({letter});
    return quasi_sequence_prob(h, ys);
}

SequenceEvaluator::SequenceEvaluator(const HmmParams& h)
    : codec_({h.kappa()}), pi_(h.pi), a_(h.A), bs_({h.B}), one_(h.q(), 1.0) {}

SequenceEvaluator::SequenceEvaluator(const MultiHmmParams& h)
    : codec_(h.kappas()), pi_(h.pi), a_(h.A), bs_(h.Bs), one_(h.q(), 1.0) {}

SequenceEvaluator::SequenceEvaluator(const QuasiHmm& h)
    : codec_(h.kappas()), pi_(h.pi), a_(h.A), bs_(h.Bs), one_(h.one_vec) {}

std::vector<double> SequenceEvaluator::step(const std::vector<double>& v,
                                            std::size_t flat_letter) const {
    const std::vector<std::size_t> letters = codec_.decode(flat_letter);
    return vec_times_matrix(emission_scaled(v, bs_, letters), a_);
}

double SequenceEvaluator::prob_flat(const std::vector<std::size_t>& flat) const {
    if (flat.empty()) {
        throw std::invalid_argument("sequence: empty sequence");
    }
    std::vector<double> v = pi_;
    for (std::size_t k : flat) v = step(v, k);
    return close(v);
}

double SequenceEvaluator::prob_tuples(const std::vector<std::vector<std::size_t>>& tuples) const {
    return chain_prob(pi_, a_, bs_, tuples, one_);
}

namespace {

bool search_mismatch(const SequenceEvaluator& e1, const SequenceEvaluator& e2,
                     std::vector<double>& v1, std::vector<double>& v2,
                     std::vector<std::size_t>& prefix, std::size_t target_len,
                     double thresh, EquivalenceReport& report) {
    if (prefix.size() == target_len) {
        const double p1 = e1.close(v1);
        const double p2 = e2.close(v2);
        if (std::abs(p1 - p2) > thresh) {
            std::vector<std::vector<std::size_t>> tuples;
            tuples.reserve(prefix.size());
            for (std::size_t k : prefix) tuples.push_back(e1.codec().decode(k));
            report.counterexample = std::move(tuples);
            report.p1 = p1;
            report.p2 = p2;
            return true;
        }
        return false;
    }
    for (std::size_t k = 1; k <= e1.codec().total_letters(); ++k) {
        std::vector<double> n1 = e1.step(v1, k);
        std::vector<double> n2 = e2.step(v2, k);
        prefix.push_back(k);
        if (search_mismatch(e1, e2, n1, n2, prefix, target_len, thresh, report)) {
            return true;
        }
        prefix.pop_back();
    }
    return false;
}

}  // namespace

EquivalenceReport equivalent(const SequenceEvaluator& e1, const SequenceEvaluator& e2,
                             std::size_t max_len, const Tolerance& tol) {
    if (e1.codec().kappas() != e2.codec().kappas()) {
        throw std::invalid_argument("equivalent: letter alphabets do not match");
    }
    if (max_len == 0) {
        throw std::invalid_argument("equivalent: max_len must be positive");
    }
    EquivalenceReport report;
    report.max_len = max_len;
    const double thresh = tol.threshold(1.0);
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<double> v1 = e1.start();
        std::vector<double> v2 = e2.start();
        std::vector<std::size_t> prefix;
        if (search_mismatch(e1, e2, v1, v2, prefix, len, thresh, report)) {
            report.equivalent = false;
            return report;
        }
    }
    report.equivalent = true;
    return report;
}

EquivalenceReport equivalent(const HmmParams& h1, const HmmParams& h2,
                             std::size_t max_len, const Tolerance& tol) {
    return equivalent(SequenceEvaluator(h1), SequenceEvaluator(h2), max_len, tol);
}

}  // namespace hmmident
