#include "hmmident/identifiability.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hmmident/tensor_ops.hpp"

namespace hmmident {

const char* setting_name(Setting s) {
    switch (s) {
        case Setting::single: return "single";
        case Setting::multi_homogeneous: return "multi-homogeneous";
        case Setting::multi_heterogeneous: return "multi-heterogeneous";
        case Setting::non_stationary: return "non-stationary";
    }
    return "unknown";
}

const char* n_star_variant_name(NStarVariant v) {
    switch (v) {
        case NStarVariant::single_strong: return "single-strong";
        case NStarVariant::single_weak: return "single-weak";
        case NStarVariant::homogeneous: return "homogeneous";
        case NStarVariant::heterogeneous: return "heterogeneous";
    }
    return "unknown";
}

namespace {

void require_valid(const std::vector<Violation>& violations, const char* where) {
    if (!violations.empty()) {
        throw std::invalid_argument(std::string(where) + ": invalid model: " +
                                    violations.front().field + ": " +
                                    violations.front().message);
    }
}

std::string krank_summary(const char* name, const KrankResult& r) {
    std::ostringstream os;
    os << "krank(" << name << ") = " << r.value;
    return os.str();
}

// Shared body of the single-observer / homogeneous condition. pi is absent
// for schedule steps, which carry no initial distribution.
Verdict single_core(const Matrix& a, const Matrix& b,
                    const std::optional<std::vector<double>>& pi, Setting setting,
                    std::size_t observers, const Tolerance& tol) {
    Verdict v;
    v.setting = setting;
    v.required_q = a.rows();
    v.observers = observers;
    v.factor_A = krank(a, tol);
    v.factor_Bs.assign(observers, krank(b, tol));
    v.joint = krank(row_tensor(b, a), tol);
    v.sum_route =
        krank_bound_row_tensor(v.factor_A.value, v.factor_Bs[0].value, v.required_q);

    const bool joint_full = v.joint.value == v.required_q;
    const bool a_ok = v.factor_A.value >= 2;
    const bool b_ok = v.factor_Bs[0].value >= 2;
    v.identifiable = joint_full && a_ok && b_ok;

    std::ostringstream note;
    if (setting == Setting::multi_homogeneous) {
        note << "homogeneous observers collapse to the single-observer condition on (A, B); ";
    }
    if (v.identifiable) {
        note << "krank(B (x)row A) = " << v.joint.value << " = q and both factor kranks are >= 2";
        if (v.sum_route.lower >= v.required_q) {
            note << "; the Sylvester sum bound alone certifies the stack ("
                 << v.factor_A.value << " + " << v.factor_Bs[0].value << " - 1 >= q)";
        }
    } else {
        bool first = true;
        auto sep = [&]() -> std::ostringstream& {
            if (!first) note << "; ";
            first = false;
            return note;
        };
        if (!joint_full) {
            sep() << "krank(B (x)row A) = " << v.joint.value << " < q = " << v.required_q;
        }
        if (!b_ok) {
            sep() << krank_summary("B", v.factor_Bs[0])
                  << " < 2: a proportional observation-row pair admits a rank-1 recombination";
        }
        if (!a_ok) {
            sep() << krank_summary("A", v.factor_A)
                  << " < 2: a proportional transition-row pair admits a rank-1 recombination";
        }
    }
    v.note = note.str();

    if (!v.identifiable && pi.has_value()) {
        HmmParams h{*pi, a, b};
        v.counterexample = construct_rank1_recombination(h, tol);
        if (!v.counterexample) {
            v.note += "; no proportional row pair in A or B, so no explicit equivalent "
                      "parameter set is emitted (certificate-only evidence)";
        }
    }
    return v;
}

// Multi-observer analogue of the observation-side recombination: a row pair
// proportional in every observation factor merges on the transition side,
// leaving every B unchanged. (The transition-side variant does not extend to
// m >= 2 observers: the merged observation row no longer factors per
// observer.)
std::optional<QuasiHmm> recombine_multi_observation_side(const MultiHmmParams& h,
                                                         const Tolerance& tol) {
    const std::size_t q = h.q();
    std::vector<double> thresholds;
    thresholds.reserve(h.m());
    for (const Matrix& b : h.Bs) thresholds.push_back(tol.threshold(b.max_abs()));

    for (std::size_t i = 0; i + 1 < q; ++i) {
        for (std::size_t j = i + 1; j < q; ++j) {
            double joint_alpha = 1.0;
            bool all_proportional = true;
            for (std::size_t l = 0; l < h.m(); ++l) {
                const auto alpha =
                    proportional_factor(h.Bs[l].row(i), h.Bs[l].row(j), thresholds[l]);
                if (!alpha) {
                    all_proportional = false;
                    break;
                }
                joint_alpha *= *alpha;
            }
            if (!all_proportional) continue;

            Matrix a_tilde = h.A;
            for (std::size_t c = 0; c < q; ++c) {
                a_tilde.set(i, c, h.A(i, c) + joint_alpha * h.A(j, c));
            }
            // Post-multiply by C^T = I - e_i e_j^T: column j -= column i.
            Matrix a_hat = a_tilde;
            for (std::size_t r = 0; r < q; ++r) {
                a_hat.set(r, j, a_tilde(r, j) - a_tilde(r, i));
            }
            std::vector<double> pi_hat = h.pi;
            pi_hat[j] -= pi_hat[i];
            std::vector<double> one_hat(q, 1.0);
            one_hat[i] += 1.0;

            std::ostringstream prov;
            prov << "rank-1 recombination (multi-observer): rows " << (i + 1) << " and "
                 << (j + 1) << " proportional in every observation matrix (joint factor "
                 << joint_alpha << "); merged into row " << (i + 1)
                 << " on the transition side";
            return QuasiHmm{std::move(pi_hat), std::move(a_hat), h.Bs,
                            std::move(one_hat), prov.str()};
        }
    }
    return std::nullopt;
}

}  // namespace

Verdict verdict_single(const HmmParams& h, const Tolerance& tol) {
    require_valid(validate(h, tol), "verdict_single");
    return single_core(h.A, h.B, h.pi, Setting::single, 1, tol);
}

Verdict verdict_homogeneous(const MultiHmmParams& h, const Tolerance& tol) {
    require_valid(validate(h, tol), "verdict_homogeneous");
    if (!h.homogeneous) {
        throw std::invalid_argument(
            "verdict_homogeneous: model is heterogeneous; use verdict_heterogeneous");
    }
    Verdict v = single_core(h.A, h.Bs[0], std::nullopt, Setting::multi_homogeneous,
                            h.m(), tol);
    if (!v.identifiable) {
        v.counterexample = recombine_multi_observation_side(h, tol);
        if (!v.counterexample) {
            v.note += "; no row pair is proportional in the observation matrix, so no "
                      "explicit equivalent parameter set is emitted";
        }
    }
    return v;
}

Verdict verdict_heterogeneous(const MultiHmmParams& h, const Tolerance& tol) {
    require_valid(validate(h, tol), "verdict_heterogeneous");
    if (h.homogeneous) {
        throw std::invalid_argument(
            "verdict_heterogeneous: model is homogeneous; use verdict_homogeneous");
    }

    Verdict v;
    v.setting = Setting::multi_heterogeneous;
    v.required_q = h.q();
    v.observers = h.m();
    v.factor_A = krank(h.A, tol);
    v.factor_Bs.reserve(h.m());
    std::vector<std::size_t> factor_kranks;
    for (const Matrix& b : h.Bs) {
        v.factor_Bs.push_back(krank(b, tol));
        factor_kranks.push_back(v.factor_Bs.back().value);
    }
    factor_kranks.push_back(v.factor_A.value);
    v.sum_route = krank_bound_multi(factor_kranks, v.required_q);
    v.joint = krank(build_W_multi(h), tol);
    v.identifiable = v.joint.value == v.required_q;

    std::ostringstream note;
    if (v.identifiable) {
        note << "krank of the joint stack B1 (x)row ... (x)row Bm (x)row A is "
             << v.joint.value << " = q";
        if (v.sum_route.lower >= v.required_q) {
            std::size_t sum = 0;
            for (std::size_t k : factor_kranks) sum += k;
            note << "; the sum bound alone certifies it (" << sum << " - " << h.m()
                 << " >= " << v.required_q << ")";
        }
        bool any_weak = false;
        for (const KrankResult& r : v.factor_Bs) any_weak = any_weak || r.value < 2;
        if (any_weak) {
            note << "; jointly considered observers compensate for observation factors "
                    "of Kruskal rank 1";
        }
    } else {
        note << "krank of the joint stack is " << v.joint.value << " < q = "
             << v.required_q;
    }
    v.note = note.str();

    if (!v.identifiable) {
        v.counterexample = recombine_multi_observation_side(h, tol);
        if (!v.counterexample) {
            v.note += "; no row pair is proportional in every observation matrix, so no "
                      "explicit equivalent parameter set is emitted";
        }
    }
    return v;
}

Verdict verdict_multi(const MultiHmmParams& h, const Tolerance& tol) {
    return h.homogeneous ? verdict_homogeneous(h, tol) : verdict_heterogeneous(h, tol);
}

ScheduleVerdict verdict_nonstationary(const std::vector<ScheduleStep>& schedule,
                                      const Tolerance& tol) {
    if (schedule.empty()) {
        throw std::invalid_argument("verdict_nonstationary: empty schedule");
    }
    const std::size_t q = schedule.front().A.rows();
    for (std::size_t t = 0; t < schedule.size(); ++t) {
        const ScheduleStep& step = schedule[t];
        if (step.A.rows() != q || step.A.cols() != q || step.B.rows() != q) {
            std::ostringstream os;
            os << "verdict_nonstationary: step " << (t + 1)
               << " has a different state count than step 1";
            throw std::invalid_argument(os.str());
        }
        // Reuse the single-observer validator on a placeholder distribution.
        HmmParams probe{std::vector<double>(q, 1.0 / static_cast<double>(q)), step.A,
                        step.B};
        const auto violations = validate(probe, tol);
        if (!violations.empty()) {
            std::ostringstream os;
            os << "verdict_nonstationary: step " << (t + 1) << ": "
               << violations.front().field << ": " << violations.front().message;
            throw std::invalid_argument(os.str());
        }
    }

    ScheduleVerdict out;
    out.identifiable = true;
    out.steps.reserve(schedule.size());
    for (std::size_t t = 0; t < schedule.size(); ++t) {
        Verdict v = single_core(schedule[t].A, schedule[t].B, std::nullopt,
                                Setting::non_stationary, 1, tol);
        std::ostringstream prefix;
        prefix << "step " << (t + 1) << ": ";
        v.note = prefix.str() + v.note;
        out.identifiable = out.identifiable && v.identifiable;
        out.steps.push_back(std::move(v));
    }
    return out;
}

bool check_minimality_necessary(const HmmParams& h, const Tolerance& tol) {
    require_valid(validate(h, tol), "check_minimality_necessary");
    return krank(h.A, tol).value == h.q();
}

namespace {

struct MergeChoice {
    std::size_t i = 0;
    std::size_t j = 0;
    bool observation_side = false;  // proportional pair found in B (else in A)
    double alpha = 1.0;             // row j = alpha * row i of the paired factor
    bool reversed = false;          // pair matched as row i = alpha * row j
};

std::optional<MergeChoice> first_proportional_pair(const Matrix& factor, bool in_b,
                                                   const Tolerance& tol) {
    const double thresh = tol.threshold(factor.max_abs());
    for (std::size_t i = 0; i + 1 < factor.rows(); ++i) {
        for (std::size_t j = i + 1; j < factor.rows(); ++j) {
            if (const auto alpha = proportional_factor(factor.row(i), factor.row(j), thresh)) {
                return MergeChoice{i, j, in_b, *alpha, false};
            }
            if (const auto beta = proportional_factor(factor.row(j), factor.row(i), thresh)) {
                return MergeChoice{i, j, in_b, *beta, true};
            }
        }
    }
    return std::nullopt;
}

std::vector<double> combined_row(const Matrix& m, std::size_t i, std::size_t j,
                                 double wi, double wj) {
    std::vector<double> out(m.cols());
    for (std::size_t c = 0; c < m.cols(); ++c) out[c] = wi * m(i, c) + wj * m(j, c);
    return out;
}

}  // namespace

std::optional<QuasiHmm> construct_rank1_recombination(const HmmParams& h,
                                                      const Tolerance& tol) {
    require_valid(validate(h, tol), "construct_rank1_recombination");
    const std::size_t q = h.q();

    auto choice = first_proportional_pair(h.B, true, tol);
    if (!choice) choice = first_proportional_pair(h.A, false, tol);
    if (!choice) return std::nullopt;

    const std::size_t i = choice->i;
    const std::size_t j = choice->j;

    // Merge the two rank-1 terms b_i (x) a_i + b_j (x) a_j of the stack into
    // a single term placed at row i; row j keeps its own term.
    Matrix b_tilde = h.B;
    Matrix a_tilde = h.A;
    if (choice->observation_side) {
        if (!choice->reversed) {
            // b_j = alpha * b_i:  merged term = b_i (x) (a_i + alpha a_j)
            const auto merged = combined_row(h.A, i, j, 1.0, choice->alpha);
            for (std::size_t c = 0; c < q; ++c) a_tilde.set(i, c, merged[c]);
        } else {
            // b_i = alpha * b_j:  merged term = b_j (x) (alpha a_i + a_j)
            for (std::size_t c = 0; c < h.B.cols(); ++c) b_tilde.set(i, c, h.B(j, c));
            const auto merged = combined_row(h.A, i, j, choice->alpha, 1.0);
            for (std::size_t c = 0; c < q; ++c) a_tilde.set(i, c, merged[c]);
        }
    } else {
        if (!choice->reversed) {
            // a_j = alpha * a_i:  merged term = (b_i + alpha b_j) (x) a_i
            const auto merged = combined_row(h.B, i, j, 1.0, choice->alpha);
            for (std::size_t c = 0; c < h.B.cols(); ++c) b_tilde.set(i, c, merged[c]);
        } else {
            // a_i = alpha * a_j:  merged term = (alpha b_i + b_j) (x) a_j
            const auto merged = combined_row(h.B, i, j, choice->alpha, 1.0);
            for (std::size_t c = 0; c < h.B.cols(); ++c) b_tilde.set(i, c, merged[c]);
            for (std::size_t c = 0; c < q; ++c) a_tilde.set(i, c, h.A(j, c));
        }
    }

    // The original stack equals C^T times the merged stack with
    // C^T = I - e_i e_j^T, so the equivalent parameter set is
    //   pi^ = pi C^T,  A^ = A~ C^T,  B^ = B~,  1^ = (C^T)^{-1} 1 = 1 + e_i.
    Matrix a_hat = a_tilde;
    for (std::size_t r = 0; r < q; ++r) a_hat.set(r, j, a_tilde(r, j) - a_tilde(r, i));
    std::vector<double> pi_hat = h.pi;
    pi_hat[j] -= pi_hat[i];
    std::vector<double> one_hat(q, 1.0);
    one_hat[i] += 1.0;

    std::ostringstream prov;
    prov << "rank-1 recombination: rows " << (i + 1) << " and " << (j + 1) << " of "
         << (choice->observation_side ? "the observation matrix" : "the transition matrix")
         << " are proportional (factor " << choice->alpha << "); terms merged into row "
         << (i + 1);
    return QuasiHmm{std::move(pi_hat), std::move(a_hat), {std::move(b_tilde)},
                    std::move(one_hat), prov.str()};
}

QuasiHmm construct_state_inflation(const HmmParams& h, std::size_t q_tilde,
                                   const InflationOptions& options, const Tolerance& tol) {
    require_valid(validate(h, tol), "construct_state_inflation");
    const std::size_t q = h.q();
    if (q_tilde < q) {
        throw std::invalid_argument(
            "construct_state_inflation: q_tilde must be at least the state count");
    }

    std::mt19937_64 rng(options.seed);

    // Copy matrix S (q_tilde x q): the first q rows are the identity; each
    // extra row duplicates a state, cycling through them.
    std::vector<std::size_t> copied_state(q_tilde);
    for (std::size_t r = 0; r < q_tilde; ++r) {
        copied_state[r] = r < q ? r : (r - q) % q;
    }
    Matrix s(q_tilde, q);
    for (std::size_t r = 0; r < q_tilde; ++r) s.set(r, copied_state[r], 1.0);

    // Split matrix T (q x q_tilde): distributes each state's weight over its
    // copies; T * S = I_q because the weights of each state sum to one.
    Matrix t_split(q, q_tilde);
    {
        std::vector<std::vector<std::size_t>> copies(q);
        for (std::size_t r = 0; r < q_tilde; ++r) copies[copied_state[r]].push_back(r);
        std::uniform_real_distribution<double> weight_dist(0.5, 1.5);
        for (std::size_t c = 0; c < q; ++c) {
            std::vector<double> w(copies[c].size(), 1.0);
            if (options.randomize) {
                for (double& x : w) x = weight_dist(rng);
            }
            const double total = std::accumulate(w.begin(), w.end(), 0.0);
            for (std::size_t k = 0; k < copies[c].size(); ++k) {
                t_split.set(c, copies[c][k], w[k] / total);
            }
        }
    }

    // Optional permutation/positive scaling P = Pi * Lambda of the original
    // states; identity by default.
    std::vector<std::size_t> sigma(q);
    std::iota(sigma.begin(), sigma.end(), std::size_t{0});
    std::vector<double> lambda(q, 1.0);
    if (options.randomize) {
        std::shuffle(sigma.begin(), sigma.end(), rng);
        std::uniform_real_distribution<double> scale_dist(0.5, 2.0);
        for (double& x : lambda) x = scale_dist(rng);
    }
    Matrix perm(q, q);      // row r of (perm * X) is row sigma[r] of X
    Matrix p(q, q);         // P = perm * diag(lambda)
    Matrix p_inv(q, q);
    for (std::size_t r = 0; r < q; ++r) {
        perm.set(r, sigma[r], 1.0);
        p.set(r, sigma[r], lambda[sigma[r]]);
        p_inv.set(sigma[r], r, 1.0 / lambda[sigma[r]]);
    }

    const double check = (t_split * s - Matrix::identity(q)).max_abs();
    if (check > tol.threshold(1.0)) {
        throw matrix_error("construct_state_inflation: split/copy product is not the identity");
    }

    // Factored equivalent parameter set (telescopes against T*S = I):
    //   B~ = S P B,  A~ = S Pi A P^{-1} T,  pi~ = pi P^{-1} T,  1~ = S P 1_q.
    Matrix b_tilde = s * (p * h.B);
    Matrix a_tilde = s * (perm * h.A * p_inv) * t_split;
    std::vector<double> pi_tilde = vec_times_matrix(vec_times_matrix(h.pi, p_inv), t_split);
    std::vector<double> one_tilde = matrix_times_vec(s * p, std::vector<double>(q, 1.0));

    std::ostringstream prov;
    prov << "state inflation: " << q << " -> " << q_tilde << " states";
    if (options.randomize) {
        prov << ", randomized splits and state permutation/scaling (seed " << options.seed
             << ")";
    } else {
        prov << ", equal splits";
    }
    return QuasiHmm{std::move(pi_tilde), std::move(a_tilde), {std::move(b_tilde)},
                    std::move(one_tilde), prov.str()};
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 result = 1;
    const unsigned __int128 cap = std::numeric_limits<std::uint64_t>::max();
    for (std::uint64_t i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;  // exact: a prefix binomial times i divides
        if (result > cap) return std::numeric_limits<std::uint64_t>::max();
    }
    return static_cast<std::uint64_t>(result);
}

NStarBound n_star(NStarVariant variant, std::size_t q,
                  const std::vector<std::size_t>& kappas, std::size_t m) {
    if (q < 2) throw std::invalid_argument("n_star: q must be at least 2");
    if (kappas.empty()) throw std::invalid_argument("n_star: no alphabet sizes given");
    for (std::size_t k : kappas) {
        if (k < 2) throw std::invalid_argument("n_star: every alphabet needs >= 2 letters");
    }

    const bool multi = variant == NStarVariant::homogeneous ||
                       variant == NStarVariant::heterogeneous;
    if (multi && m < 2) {
        throw std::invalid_argument("n_star: multi-observer variants need m >= 2");
    }
    if (!multi && m != 1) {
        throw std::invalid_argument("n_star: single-observer variants take m = 1");
    }
    if (variant == NStarVariant::heterogeneous) {
        if (kappas.size() != m) {
            throw std::invalid_argument(
                "n_star: heterogeneous variant needs one alphabet size per observer");
        }
    } else if (kappas.size() != 1) {
        throw std::invalid_argument(
            "n_star: this variant takes a single shared alphabet size");
    }

    // Effective number of monomial variables: kappa for the single and
    // homogeneous variants, prod kappa_j for the heterogeneous one.
    std::uint64_t vars = 1;
    if (variant == NStarVariant::heterogeneous) {
        for (std::size_t k : kappas) {
            vars *= static_cast<std::uint64_t>(k);
            if (vars > (std::uint64_t{1} << 32)) {
                throw std::invalid_argument("n_star: combined alphabet is too large");
            }
        }
    } else {
        vars = kappas[0];
    }

    const auto condition_value = [&](std::uint64_t n) -> std::uint64_t {
        switch (variant) {
            case NStarVariant::single_strong:
                return binomial(n + vars - 1, vars - 1);
            case NStarVariant::single_weak:
                return binomial(n + vars - 2, vars - 1);
            case NStarVariant::homogeneous:
            case NStarVariant::heterogeneous:
                return binomial(n * m + vars - 1, vars - 1);
        }
        return 0;
    };

    NStarBound out;
    out.variant = variant;
    out.q = q;
    out.kappas = kappas;
    out.m = m;
    for (std::uint64_t n = 1; n <= static_cast<std::uint64_t>(q) + 1; ++n) {
        const std::uint64_t value = condition_value(n);
        out.binomial_trace.emplace_back(static_cast<std::size_t>(n), value);
        if (value >= q) {
            out.n_star = static_cast<std::size_t>(n);
            return out;
        }
    }
    throw std::logic_error("n_star: binomial condition not met within the expected range");
}

namespace {

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) return false;
    }
    return true;
}

std::vector<std::uint64_t> first_primes(std::size_t count) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t n = 2; out.size() < count; ++n) {
        if (is_prime(n)) out.push_back(n);
    }
    return out;
}

// The witness stack is an exact integer matrix whose entries span many
// orders of magnitude (powers 0..q-1 of the monomial products), which
// defeats floating-point elimination at any fixed relative threshold. Its
// row independence is instead decided exactly over GF(p): a row subset
// independent mod p is independent over the rationals, since a nonzero
// minor mod p lifts to a nonzero integer minor.
constexpr std::uint64_t kWitnessModulus = 2305843009213693951ULL;  // 2^61 - 1

std::uint64_t mod_mul(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::uint64_t>(
        static_cast<unsigned __int128>(a) * b % kWitnessModulus);
}

std::uint64_t mod_pow(std::uint64_t base, std::uint64_t exp) {
    std::uint64_t result = 1;
    while (exp != 0) {
        if (exp & 1) result = mod_mul(result, base);
        base = mod_mul(base, base);
        exp >>= 1;
    }
    return result;
}

std::uint64_t mod_inv(std::uint64_t a) { return mod_pow(a, kWitnessModulus - 2); }

std::size_t mod_rank(std::vector<std::vector<std::uint64_t>> rows) {
    if (rows.empty()) return 0;
    const std::size_t c = rows.front().size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < c && rank < rows.size(); ++col) {
        std::size_t pivot = rank;
        while (pivot < rows.size() && rows[pivot][col] == 0) ++pivot;
        if (pivot == rows.size()) continue;
        std::swap(rows[rank], rows[pivot]);
        const std::uint64_t inv = mod_inv(rows[rank][col]);
        for (std::size_t i = rank + 1; i < rows.size(); ++i) {
            if (rows[i][col] == 0) continue;
            const std::uint64_t f = mod_mul(rows[i][col], inv);
            for (std::size_t j = col; j < c; ++j) {
                const std::uint64_t sub = mod_mul(f, rows[rank][j]);
                rows[i][j] = (rows[i][j] + kWitnessModulus - sub) % kWitnessModulus;
            }
        }
        ++rank;
    }
    return rank;
}

std::size_t mod_krank(const std::vector<std::vector<std::uint64_t>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = rows.empty() ? 0 : rows.front().size();
    const std::size_t cap = std::min(r, c);
    for (std::size_t s = 1; s <= cap; ++s) {
        std::vector<std::size_t> idx(s);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        while (true) {
            std::vector<std::vector<std::uint64_t>> sub;
            sub.reserve(s);
            for (std::size_t i : idx) sub.push_back(rows[i]);
            if (mod_rank(std::move(sub)) < s) return s - 1;
            std::size_t pos = s;
            bool advanced = false;
            while (pos-- > 0) {
                if (idx[pos] < r - (s - pos)) {
                    ++idx[pos];
                    for (std::size_t t = pos + 1; t < s; ++t) idx[t] = idx[t - 1] + 1;
                    advanced = true;
                    break;
                }
            }
            if (!advanced) break;
        }
    }
    return cap;
}

}  // namespace

VandermondeWitness vandermonde_witness(
    std::size_t q, const std::vector<std::size_t>& kappas, std::size_t n, std::size_t m,
    const std::optional<std::vector<std::uint64_t>>& generators,
    const Tolerance& /*stack entries are exact integers; no tolerance enters*/) {
    if (q < 2) throw std::invalid_argument("vandermonde_witness: q must be at least 2");
    if (n < 1) throw std::invalid_argument("vandermonde_witness: need at least one step");
    if (kappas.empty()) {
        throw std::invalid_argument("vandermonde_witness: no alphabet sizes given");
    }
    for (std::size_t k : kappas) {
        if (k < 2) {
            throw std::invalid_argument(
                "vandermonde_witness: every alphabet needs >= 2 letters");
        }
    }
    const bool shared = kappas.size() == 1;  // single observer or homogeneous copies
    if (shared) {
        if (m < 1) throw std::invalid_argument("vandermonde_witness: m must be >= 1");
    } else if (kappas.size() != m) {
        throw std::invalid_argument(
            "vandermonde_witness: heterogeneous form needs one alphabet size per observer");
    }

    // Assign generators: a shared prime list for homogeneous copies, disjoint
    // lists per observer otherwise.
    const std::size_t needed =
        shared ? kappas[0] : std::accumulate(kappas.begin(), kappas.end(), std::size_t{0});
    std::vector<std::uint64_t> flat =
        generators ? *generators : first_primes(needed);
    if (flat.size() != needed) {
        std::ostringstream os;
        os << "vandermonde_witness: expected " << needed << " generators, got "
           << flat.size();
        throw std::invalid_argument(os.str());
    }
    {
        std::set<std::uint64_t> seen;
        for (std::uint64_t g : flat) {
            if (!is_prime(g)) {
                throw std::invalid_argument(
                    "vandermonde_witness: generators must be distinct primes");
            }
            if (!seen.insert(g).second) {
                throw std::invalid_argument(
                    "vandermonde_witness: generators must be distinct primes");
            }
        }
    }
    std::vector<std::vector<std::uint64_t>> per_observer;
    if (shared) {
        per_observer.assign(m, flat);
    } else {
        std::size_t at = 0;
        for (std::size_t k : kappas) {
            per_observer.emplace_back(flat.begin() + at, flat.begin() + at + k);
            at += k;
        }
    }

    // Every stack entry is a product of N*m generator powers with total
    // exponent at most (q-1)*N*m; it must stay below 2^53 so that double
    // arithmetic on the stack is exact.
    const std::uint64_t max_gen = *std::max_element(flat.begin(), flat.end());
    const double bits = static_cast<double>((q - 1) * n * m) *
                        std::log2(static_cast<double>(max_gen));
    if (bits >= 53.0) {
        throw std::domain_error(
            "vandermonde_witness: generator powers would exceed the exact range of "
            "double (2^53); use smaller primes, fewer states, or a shorter window");
    }

    // Stack width guard: (prod kappa_j)^n columns.
    double width_log2 = 0.0;
    for (const auto& gens : per_observer) {
        width_log2 += std::log2(static_cast<double>(gens.size()));
    }
    width_log2 *= static_cast<double>(n);
    if (width_log2 > 22.0) {
        throw std::domain_error(
            "vandermonde_witness: the stack would have more than 2^22 columns; use a "
            "shorter window or smaller alphabets");
    }

    // Each observation sequence contributes the product of its chosen
    // generators, one per (step, observer) slot; duplicate columns of the
    // stack carry equal monomials and never affect row independence, so the
    // distinct products are collected directly. Prefix products only collapse
    // further, keeping every intermediate set no larger than the final one.
    std::set<std::uint64_t> monomials{1};
    for (std::size_t t = 0; t < n; ++t) {
        for (const auto& gens : per_observer) {
            std::set<std::uint64_t> next;
            for (std::uint64_t prefix : monomials) {
                for (std::uint64_t g : gens) next.insert(prefix * g);
            }
            monomials = std::move(next);
        }
    }

    VandermondeWitness w;
    w.q = q;
    w.kappas = kappas;
    w.m = m;
    w.n = n;
    w.generators = std::move(per_observer);
    w.distinct_monomials = monomials.size();

    // Stack row i holds the i-th power of every monomial (the guards above
    // keep all entries exact); rank and row-krank are decided exactly in
    // modular arithmetic.
    std::vector<std::vector<std::uint64_t>> rows(
        q, std::vector<std::uint64_t>(monomials.size(), 1));
    {
        std::vector<std::uint64_t> nodes(monomials.begin(), monomials.end());
        for (std::size_t i = 1; i < q; ++i) {
            for (std::size_t c = 0; c < nodes.size(); ++c) {
                rows[i][c] = mod_mul(rows[i - 1][c], nodes[c]);
            }
        }
    }
    w.rank = mod_rank(rows);
    w.krank_value = mod_krank(rows);
    w.achieves_q = w.rank == q;
    return w;
}

}  // namespace hmmident
