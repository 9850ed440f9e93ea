// Python bindings. Matrices cross the boundary as nested lists of floats and
// structured results as plain dicts, so the module works without numpy.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hmmident/hmm.hpp"
#include "hmmident/identifiability.hpp"
#include "hmmident/krank.hpp"
#include "hmmident/matrix.hpp"
#include "hmmident/model_io.hpp"
#include "hmmident/ssh_case.hpp"
#include "hmmident/tensor_ops.hpp"

namespace py = pybind11;

namespace {

using hmmident::HmmParams;
using hmmident::InflationOptions;
using hmmident::KrankBound;
using hmmident::KrankResult;
using hmmident::Matrix;
using hmmident::MultiHmmParams;
using hmmident::NStarBound;
using hmmident::NStarVariant;
using hmmident::ParsedModel;
using hmmident::QuasiHmm;
using hmmident::ScheduleStep;
using hmmident::ScheduleVerdict;
using hmmident::SequenceEvaluator;
using hmmident::Tolerance;
using hmmident::VandermondeWitness;
using hmmident::Verdict;

using Rows = std::vector<std::vector<double>>;

Matrix mat(const Rows& rows) { return Matrix::from_rows(rows); }

std::vector<Matrix> mats(const std::vector<Rows>& rows_list) {
    std::vector<Matrix> out;
    out.reserve(rows_list.size());
    for (const auto& r : rows_list) {
        out.push_back(mat(r));
    }
    return out;
}

Tolerance tol_of(double rel, double abs) { return Tolerance(rel, abs); }

py::dict krank_dict(const KrankResult& k) {
    py::dict d;
    d["value"] = k.value;
    d["certificate"] = k.certificate ? py::cast(*k.certificate) : py::none();
    d["near_threshold"] =
        k.near_threshold ? py::cast(*k.near_threshold) : py::none();
    return d;
}

py::dict quasi_dict(const QuasiHmm& qh) {
    py::dict d;
    d["kind"] = "quasi-hmm";
    d["pi"] = qh.pi;
    d["A"] = qh.A.to_rows();
    py::list bs;
    for (const auto& b : qh.Bs) {
        bs.append(py::cast(b.to_rows()));
    }
    d["Bs"] = bs;
    d["one_vector"] = qh.one_vec;
    d["provenance"] = qh.provenance;
    d["json"] = hmmident::serialize_model(qh);
    return d;
}

py::dict verdict_dict(const Verdict& v) {
    py::dict d;
    d["setting"] = hmmident::setting_name(v.setting);
    d["q"] = v.required_q;
    d["observers"] = v.observers;
    d["identifiable"] = v.identifiable;
    d["joint"] = krank_dict(v.joint);
    d["factor_A"] = krank_dict(v.factor_A);
    py::list bs;
    for (const auto& kb : v.factor_Bs) {
        bs.append(krank_dict(kb));
    }
    d["factor_Bs"] = bs;
    py::dict sum_route;
    sum_route["lower"] = v.sum_route.lower;
    sum_route["upper"] = v.sum_route.upper;
    sum_route["method"] = hmmident::bound_method_name(v.sum_route.method);
    sum_route["fires"] = v.sum_route_fires();
    d["sum_route"] = sum_route;
    d["note"] = v.note;
    d["counterexample"] =
        v.counterexample ? py::object(quasi_dict(*v.counterexample))
                         : py::object(py::none());
    return d;
}

py::dict schedule_dict(const ScheduleVerdict& sv) {
    py::dict d;
    d["kind"] = "schedule";
    d["identifiable"] = sv.identifiable;
    py::list steps;
    for (const auto& step : sv.steps) {
        steps.append(verdict_dict(step));
    }
    d["steps"] = steps;
    return d;
}

NStarVariant variant_of(const std::string& name) {
    if (name == "single-strong") return NStarVariant::single_strong;
    if (name == "single-weak") return NStarVariant::single_weak;
    if (name == "homogeneous") return NStarVariant::homogeneous;
    if (name == "heterogeneous") return NStarVariant::heterogeneous;
    throw std::invalid_argument(
        "unknown variant \"" + name +
        "\"; expected single-strong, single-weak, homogeneous or heterogeneous");
}

py::dict witness_dict(const VandermondeWitness& w) {
    py::dict d;
    d["q"] = w.q;
    d["kappas"] = w.kappas;
    d["m"] = w.m;
    d["n"] = w.n;
    d["generators"] = w.generators;
    d["distinct_monomials"] = w.distinct_monomials;
    d["rank"] = w.rank;
    d["krank"] = w.krank_value;
    d["achieves_q"] = w.achieves_q;
    return d;
}

py::dict nstar_dict(const NStarBound& b) {
    py::dict d;
    d["variant"] = hmmident::n_star_variant_name(b.variant);
    d["q"] = b.q;
    d["kappas"] = b.kappas;
    d["m"] = b.m;
    d["n_star"] = b.n_star;
    py::list trace;
    for (const auto& [n, value] : b.binomial_trace) {
        trace.append(py::make_tuple(n, value));
    }
    d["trace"] = trace;
    return d;
}

py::dict hmm_dict(const HmmParams& h) {
    py::dict d;
    d["kind"] = "hmm";
    d["pi"] = h.pi;
    d["A"] = h.A.to_rows();
    d["B"] = h.B.to_rows();
    d["json"] = hmmident::serialize_model(h);
    return d;
}

py::dict multi_dict(const MultiHmmParams& h) {
    py::dict d;
    d["kind"] = "multi-hmm";
    d["pi"] = h.pi;
    d["A"] = h.A.to_rows();
    py::list bs;
    for (const auto& b : h.Bs) {
        bs.append(py::cast(b.to_rows()));
    }
    d["Bs"] = bs;
    d["homogeneous"] = h.homogeneous;
    d["json"] = hmmident::serialize_model(h);
    return d;
}

SequenceEvaluator evaluator_of(const ParsedModel& p) {
    if (p.hmm) return SequenceEvaluator(*p.hmm);
    if (p.multi) return SequenceEvaluator(*p.multi);
    if (p.quasi) return SequenceEvaluator(*p.quasi);
    throw std::invalid_argument(
        "equivalence is defined for stationary models; got kind \"schedule\"");
}

}  // namespace

PYBIND11_MODULE(_hmmident, mod) {
    mod.doc() =
        "identifiability analysis for finite-alphabet hidden Markov models";
    mod.attr("__version__") = "0.1.0";

    mod.def(
        "krank",
        [](const Rows& rows, double rel, double abs) {
            return krank_dict(hmmident::krank(mat(rows), tol_of(rel, abs)));
        },
        py::arg("rows"), py::arg("rel_eps") = 1e-9, py::arg("abs_eps") = 1e-12,
        "Kruskal rank over rows with a minimal dependent-subset certificate "
        "(0-based) when not full.");

    mod.def(
        "rank",
        [](const Rows& rows, double rel, double abs) {
            return hmmident::rank(mat(rows), tol_of(rel, abs));
        },
        py::arg("rows"), py::arg("rel_eps") = 1e-9, py::arg("abs_eps") = 1e-12,
        "Numerical rank by row elimination.");

    mod.def(
        "row_tensor",
        [](const Rows& a, const Rows& b) {
            return hmmident::row_tensor(mat(a), mat(b)).to_rows();
        },
        py::arg("a"), py::arg("b"),
        "Row-wise tensor product: row i is kron(a_i, b_i).");

    mod.def(
        "row_tensor_multi",
        [](const std::vector<Rows>& factors) {
            return hmmident::row_tensor_multi(mats(factors)).to_rows();
        },
        py::arg("factors"), "Row-wise tensor product of several factors.");

    mod.def(
        "kron",
        [](const Rows& a, const Rows& b) {
            return hmmident::kron(mat(a), mat(b)).to_rows();
        },
        py::arg("a"), py::arg("b"), "Kronecker product.");

    mod.def(
        "stationary_distribution",
        [](const Rows& a, double rel, double abs) {
            return hmmident::stationary_distribution(mat(a), tol_of(rel, abs));
        },
        py::arg("A"), py::arg("rel_eps") = 1e-9, py::arg("abs_eps") = 1e-12,
        "Stationary distribution of a row-stochastic matrix.");

    mod.def(
        "sequence_prob",
        [](const std::vector<double>& pi, const Rows& a, const Rows& b,
           const std::vector<std::size_t>& y) {
            return hmmident::sequence_prob(HmmParams{pi, mat(a), mat(b)}, y);
        },
        py::arg("pi"), py::arg("A"), py::arg("B"), py::arg("y"),
        "Probability of the 1-based letter sequence y.");

    mod.def(
        "sequence_prob_multi",
        [](const std::vector<double>& pi, const Rows& a,
           const std::vector<Rows>& bs, bool homogeneous,
           const std::vector<std::vector<std::size_t>>& tuples) {
            MultiHmmParams h{pi, mat(a), mats(bs), homogeneous};
            return hmmident::sequence_prob_multi(h, tuples);
        },
        py::arg("pi"), py::arg("A"), py::arg("Bs"), py::arg("homogeneous"),
        py::arg("tuples"),
        "Probability of a sequence of per-step observer tuples (1-based).");

    mod.def(
        "analyze_single",
        [](const std::vector<double>& pi, const Rows& a, const Rows& b,
           double rel, double abs) {
            return verdict_dict(hmmident::verdict_single(
                HmmParams{pi, mat(a), mat(b)}, tol_of(rel, abs)));
        },
        py::arg("pi"), py::arg("A"), py::arg("B"), py::arg("rel_eps") = 1e-9,
        py::arg("abs_eps") = 1e-12,
        "Identifiability verdict for a single-observer model.");

    mod.def(
        "analyze_multi",
        [](const std::vector<double>& pi, const Rows& a,
           const std::vector<Rows>& bs, bool homogeneous, double rel,
           double abs) {
            MultiHmmParams h{pi, mat(a), mats(bs), homogeneous};
            return verdict_dict(hmmident::verdict_multi(h, tol_of(rel, abs)));
        },
        py::arg("pi"), py::arg("A"), py::arg("Bs"), py::arg("homogeneous"),
        py::arg("rel_eps") = 1e-9, py::arg("abs_eps") = 1e-12,
        "Identifiability verdict for a multi-observer model.");

    mod.def(
        "analyze_schedule",
        [](const std::vector<std::pair<Rows, Rows>>& steps, double rel,
           double abs) {
            std::vector<ScheduleStep> sched;
            sched.reserve(steps.size());
            for (const auto& [a, b] : steps) {
                sched.push_back(ScheduleStep{mat(a), mat(b)});
            }
            return schedule_dict(
                hmmident::verdict_nonstationary(sched, tol_of(rel, abs)));
        },
        py::arg("steps"), py::arg("rel_eps") = 1e-9, py::arg("abs_eps") = 1e-12,
        "Per-step verdicts for a time-varying schedule of (A, B) pairs.");

    mod.def(
        "analyze_json",
        [](const std::string& text, double rel, double abs) -> py::dict {
            ParsedModel p = hmmident::parse_model(text);
            Tolerance tol = tol_of(rel, abs);
            if (p.kind == "quasi-hmm") {
                throw std::invalid_argument(
                    "analyze expects a stochastic model; got \"quasi-hmm\"");
            }
            if (p.schedule) {
                py::dict d =
                    schedule_dict(hmmident::verdict_nonstationary(*p.schedule, tol));
                d["pi_computed"] = p.pi_computed;
                return d;
            }
            Verdict v = p.hmm ? hmmident::verdict_single(*p.hmm, tol)
                              : hmmident::verdict_multi(*p.multi, tol);
            py::dict d = verdict_dict(v);
            d["kind"] = p.kind;
            d["pi_computed"] = p.pi_computed;
            return d;
        },
        py::arg("text"), py::arg("rel_eps") = 1e-9, py::arg("abs_eps") = 1e-12,
        "Parse a model JSON document and return its verdict dict.");

    mod.def(
        "equivalent_json",
        [](const std::string& text1, const std::string& text2,
           std::size_t max_len, double rel, double abs) {
            ParsedModel p1 = hmmident::parse_model(text1);
            ParsedModel p2 = hmmident::parse_model(text2);
            auto rep = hmmident::equivalent(evaluator_of(p1), evaluator_of(p2),
                                            max_len, tol_of(rel, abs));
            py::dict d;
            d["equivalent"] = rep.equivalent;
            d["max_len"] = rep.max_len;
            d["counterexample"] = rep.counterexample
                                      ? py::cast(*rep.counterexample)
                                      : py::object(py::none());
            d["p1"] = rep.p1;
            d["p2"] = rep.p2;
            return d;
        },
        py::arg("model1"), py::arg("model2"), py::arg("max_len") = 5,
        py::arg("rel_eps") = 1e-9, py::arg("abs_eps") = 1e-12,
        "Compare sequence probabilities of two model JSON documents.");

    mod.def(
        "recombination",
        [](const std::vector<double>& pi, const Rows& a, const Rows& b,
           double rel, double abs) -> py::object {
            auto quasi = hmmident::construct_rank1_recombination(
                HmmParams{pi, mat(a), mat(b)}, tol_of(rel, abs));
            return quasi ? py::object(quasi_dict(*quasi))
                         : py::object(py::none());
        },
        py::arg("pi"), py::arg("A"), py::arg("B"), py::arg("rel_eps") = 1e-9,
        py::arg("abs_eps") = 1e-12,
        "Rank-1 recombination counterexample, or None when no row pair of A "
        "or B is proportional.");

    mod.def(
        "inflate",
        [](const std::vector<double>& pi, const Rows& a, const Rows& b,
           std::size_t q_tilde, bool randomize, std::uint64_t seed, double rel,
           double abs) {
            InflationOptions opts;
            opts.randomize = randomize;
            if (seed != 0) {
                opts.seed = seed;
            }
            return quasi_dict(hmmident::construct_state_inflation(
                HmmParams{pi, mat(a), mat(b)}, q_tilde, opts, tol_of(rel, abs)));
        },
        py::arg("pi"), py::arg("A"), py::arg("B"), py::arg("q_tilde"),
        py::arg("randomize") = false, py::arg("seed") = 0,
        py::arg("rel_eps") = 1e-9, py::arg("abs_eps") = 1e-12,
        "State-inflation counterexample with q_tilde >= q states.");

    mod.def(
        "n_star",
        [](const std::string& variant, std::size_t q,
           const std::vector<std::size_t>& kappas, std::size_t m) {
            return nstar_dict(hmmident::n_star(variant_of(variant), q, kappas, m));
        },
        py::arg("variant"), py::arg("q"), py::arg("kappas"), py::arg("m") = 1,
        "Minimal window length for generic identifiability.");

    mod.def(
        "vandermonde_witness",
        [](std::size_t q, const std::vector<std::size_t>& kappas, std::size_t n,
           std::size_t m,
           const std::optional<std::vector<std::uint64_t>>& generators,
           double rel, double abs) {
            return witness_dict(hmmident::vandermonde_witness(
                q, kappas, n, m, generators, tol_of(rel, abs)));
        },
        py::arg("q"), py::arg("kappas"), py::arg("n"), py::arg("m") = 1,
        py::arg("generators") = std::nullopt, py::arg("rel_eps") = 1e-9,
        py::arg("abs_eps") = 1e-12,
        "Prime-generator witness stack; rank min(q, distinct monomials).");

    mod.def(
        "model_info",
        [](const std::string& text) {
            ParsedModel p = hmmident::parse_model(text);
            py::dict d;
            d["kind"] = p.kind;
            d["pi_computed"] = p.pi_computed;
            if (p.hmm) {
                d["q"] = p.hmm->q();
                d["kappas"] = std::vector<std::size_t>{p.hmm->kappa()};
            } else if (p.multi) {
                d["q"] = p.multi->q();
                d["kappas"] = p.multi->kappas();
                d["homogeneous"] = p.multi->homogeneous;
            } else if (p.quasi) {
                d["q"] = p.quasi->q();
                d["kappas"] = p.quasi->kappas();
            } else {
                d["steps"] = p.schedule->size();
            }
            return d;
        },
        py::arg("text"), "Parse and validate a model JSON document.");

    mod.def(
        "ssh_case",
        [](double eps, double rel, double abs) {
            return hmm_dict(hmmident::ssh_single(eps, tol_of(rel, abs)));
        },
        py::arg("eps") = 0.1, py::arg("rel_eps") = 1e-9,
        py::arg("abs_eps") = 1e-12,
        "Built-in 7-state SSH case study, single observer.");

    mod.def(
        "ssh_case_multi",
        [](const std::vector<double>& eps, bool homogeneous, double rel,
           double abs) {
            return multi_dict(
                hmmident::ssh_multi(eps, homogeneous, tol_of(rel, abs)));
        },
        py::arg("eps"), py::arg("homogeneous"), py::arg("rel_eps") = 1e-9,
        py::arg("abs_eps") = 1e-12,
        "Built-in SSH case study with one observer per error level.");
}
