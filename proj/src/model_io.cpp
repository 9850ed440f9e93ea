#include "hmmident/model_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hmmident {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& message) {
    throw std::invalid_argument("model file: " + field + ": " + message);
}

double finite_number(const json& v, const std::string& field) {
    if (!v.is_number()) fail(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(field, "non-finite value");
    return x;
}

std::vector<double> parse_vector(const json& v, const std::string& field) {
    if (!v.is_array() || v.empty()) fail(field, "expected a non-empty array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(finite_number(v[i], field + "[" + std::to_string(i) + "]"));
    }
    return out;
}

Matrix parse_matrix(const json& v, const std::string& field) {
    if (!v.is_array() || v.empty()) fail(field, "expected a non-empty array of rows");
    std::vector<std::vector<double>> rows;
    rows.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        rows.push_back(parse_vector(v[i], field + "[" + std::to_string(i) + "]"));
        if (rows.back().size() != rows.front().size()) {
            fail(field, "rows have different lengths");
        }
    }
    try {
        return Matrix::from_rows(rows);
    } catch (const std::exception& e) {
        fail(field, e.what());
    }
}

void check_count(const json& doc, const char* key, std::size_t actual,
                 const std::string& what) {
    if (!doc.contains(key)) return;
    const json& v = doc.at(key);
    if (!v.is_number_unsigned()) fail(key, "expected a nonnegative integer");
    if (v.get<std::size_t>() != actual) {
        fail(key, "does not match the " + what + " implied by the matrices (" +
                      std::to_string(actual) + ")");
    }
}

const json& require_key(const json& doc, const char* key) {
    if (!doc.contains(key)) fail(key, "missing");
    return doc.at(key);
}

Tolerance parse_tolerance(const json& doc) {
    if (!doc.contains("tolerance")) return Tolerance{};
    const json& t = doc.at("tolerance");
    if (!t.is_object()) fail("tolerance", "expected an object");
    double rel = Tolerance{}.rel_eps;
    double abs = Tolerance{}.abs_eps;
    if (t.contains("rel_eps")) rel = finite_number(t.at("rel_eps"), "tolerance.rel_eps");
    if (t.contains("abs_eps")) abs = finite_number(t.at("abs_eps"), "tolerance.abs_eps");
    try {
        return Tolerance{rel, abs};
    } catch (const std::exception& e) {
        fail("tolerance", e.what());
    }
}

std::vector<double> parse_or_compute_pi(const json& doc, const Matrix& a,
                                        const Tolerance& tol, bool& computed) {
    if (doc.contains("pi")) {
        computed = false;
        return parse_vector(doc.at("pi"), "pi");
    }
    computed = true;
    try {
        return stationary_distribution(a, tol);
    } catch (const std::exception& e) {
        fail("pi", std::string("omitted and the stationary distribution is unavailable: ") +
                       e.what());
    }
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
    return rows;
}

std::string dump(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace

ParsedModel parse_model(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("model file: not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) fail("document", "expected a JSON object");
    if (!doc.contains("kind") || !doc.at("kind").is_string()) {
        fail("kind", "missing or not a string");
    }

    ParsedModel out;
    out.kind = doc.at("kind").get<std::string>();
    out.tol = parse_tolerance(doc);

    if (out.kind == "hmm") {
        Matrix a = parse_matrix(require_key(doc, "A"), "A");
        Matrix b = parse_matrix(require_key(doc, "B"), "B");
        check_count(doc, "q", a.rows(), "state count");
        check_count(doc, "kappa", b.cols(), "alphabet size");
        std::vector<double> pi = parse_or_compute_pi(doc, a, out.tol, out.pi_computed);
        out.hmm = HmmParams{std::move(pi), std::move(a), std::move(b)};
    } else if (out.kind == "multi-hmm") {
        Matrix a = parse_matrix(require_key(doc, "A"), "A");
        if (!doc.contains("Bs") || !doc.at("Bs").is_array() || doc.at("Bs").empty()) {
            fail("Bs", "expected a non-empty array of observation matrices");
        }
        std::vector<Matrix> bs;
        std::vector<std::size_t> kappas;
        for (std::size_t j = 0; j < doc.at("Bs").size(); ++j) {
            bs.push_back(parse_matrix(doc.at("Bs")[j], "Bs[" + std::to_string(j) + "]"));
            kappas.push_back(bs.back().cols());
        }
        check_count(doc, "q", a.rows(), "state count");
        check_count(doc, "m", bs.size(), "observer count");
        if (doc.contains("kappas")) {
            const json& ks = doc.at("kappas");
            if (!ks.is_array() || ks.size() != kappas.size()) {
                fail("kappas", "expected one alphabet size per observer");
            }
            for (std::size_t j = 0; j < kappas.size(); ++j) {
                if (!ks[j].is_number_unsigned() || ks[j].get<std::size_t>() != kappas[j]) {
                    fail("kappas", "entry " + std::to_string(j) +
                                       " does not match the matrix shape");
                }
            }
        }
        bool homogeneous = false;
        if (doc.contains("homogeneous")) {
            if (!doc.at("homogeneous").is_boolean()) fail("homogeneous", "expected a boolean");
            homogeneous = doc.at("homogeneous").get<bool>();
        }
        std::vector<double> pi = parse_or_compute_pi(doc, a, out.tol, out.pi_computed);
        out.multi = MultiHmmParams{std::move(pi), std::move(a), std::move(bs), homogeneous};
    } else if (out.kind == "schedule") {
        if (!doc.contains("steps") || !doc.at("steps").is_array() || doc.at("steps").empty()) {
            fail("steps", "expected a non-empty array of {A, B} steps");
        }
        std::vector<ScheduleStep> steps;
        for (std::size_t t = 0; t < doc.at("steps").size(); ++t) {
            const json& s = doc.at("steps")[t];
            const std::string where = "steps[" + std::to_string(t) + "]";
            if (!s.is_object()) fail(where, "expected an object with A and B");
            steps.push_back(ScheduleStep{parse_matrix(require_key(s, "A"), where + ".A"),
                                         parse_matrix(require_key(s, "B"), where + ".B")});
        }
        out.schedule = std::move(steps);
    } else if (out.kind == "quasi-hmm") {
        Matrix a = parse_matrix(require_key(doc, "A"), "A");
        std::vector<Matrix> bs;
        if (doc.contains("Bs")) {
            for (std::size_t j = 0; j < doc.at("Bs").size(); ++j) {
                bs.push_back(parse_matrix(doc.at("Bs")[j], "Bs[" + std::to_string(j) + "]"));
            }
        } else if (doc.contains("B")) {
            bs.push_back(parse_matrix(doc.at("B"), "B"));
        }
        if (bs.empty()) fail("Bs", "quasi model needs B or Bs");
        if (!doc.contains("pi")) fail("pi", "quasi model needs an explicit pi");
        std::vector<double> pi = parse_vector(doc.at("pi"), "pi");
        if (!doc.contains("one_vector")) fail("one_vector", "quasi model needs one_vector");
        std::vector<double> one = parse_vector(doc.at("one_vector"), "one_vector");
        std::string provenance;
        if (doc.contains("provenance")) {
            if (!doc.at("provenance").is_string()) fail("provenance", "expected a string");
            provenance = doc.at("provenance").get<std::string>();
        }
        const std::size_t q = a.rows();
        if (a.cols() != q) fail("A", "must be square");
        if (pi.size() != q) fail("pi", "length must equal the state count");
        if (one.size() != q) fail("one_vector", "length must equal the state count");
        for (const Matrix& b : bs) {
            if (b.rows() != q) fail("Bs", "observation rows must equal the state count");
        }
        out.quasi = QuasiHmm{std::move(pi), std::move(a), std::move(bs), std::move(one),
                             std::move(provenance)};
    } else {
        fail("kind", "unknown kind '" + out.kind +
                         "' (expected hmm, multi-hmm, schedule, or quasi-hmm)");
    }
    return out;
}

ParsedModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("model file: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string serialize_model(const HmmParams& h) {
    json doc;
    doc["kind"] = "hmm";
    doc["q"] = h.q();
    doc["kappa"] = h.kappa();
    doc["pi"] = h.pi;
    doc["A"] = matrix_to_json(h.A);
    doc["B"] = matrix_to_json(h.B);
    return dump(doc);
}

std::string serialize_model(const MultiHmmParams& h) {
    json doc;
    doc["kind"] = "multi-hmm";
    doc["q"] = h.q();
    doc["m"] = h.m();
    doc["kappas"] = h.kappas();
    doc["homogeneous"] = h.homogeneous;
    doc["pi"] = h.pi;
    doc["A"] = matrix_to_json(h.A);
    json bs = json::array();
    for (const Matrix& b : h.Bs) bs.push_back(matrix_to_json(b));
    doc["Bs"] = bs;
    return dump(doc);
}

std::string serialize_model(const std::vector<ScheduleStep>& schedule) {
    json doc;
    doc["kind"] = "schedule";
    json steps = json::array();
    for (const ScheduleStep& s : schedule) {
        steps.push_back({{"A", matrix_to_json(s.A)}, {"B", matrix_to_json(s.B)}});
    }
    doc["steps"] = steps;
    return dump(doc);
}

std::string serialize_model(const QuasiHmm& h) {
    json doc;
    doc["kind"] = "quasi-hmm";
    doc["q"] = h.q();
    doc["kappas"] = h.kappas();
    doc["pi"] = h.pi;
    doc["A"] = matrix_to_json(h.A);
    json bs = json::array();
    for (const Matrix& b : h.Bs) bs.push_back(matrix_to_json(b));
    doc["Bs"] = bs;
    doc["one_vector"] = h.one_vec;
    doc["provenance"] = h.provenance;
    return dump(doc);
}

void save_model(const std::string& path, const std::string& serialized) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("model file: cannot open " + path + " for writing");
    out << serialized;
    if (!out) throw std::runtime_error("model file: write to " + path + " failed");
}

}  // namespace hmmident
