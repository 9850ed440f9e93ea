#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hmmident/hmm.hpp"
#include "hmmident/identifiability.hpp"
#include "hmmident/matrix.hpp"

namespace hmmident {

// JSON model files. kind selects the payload:
//   "hmm"        pi?, A, B                       -> HmmParams
//   "multi-hmm"  pi?, A, Bs, homogeneous         -> MultiHmmParams
//   "schedule"   steps: [{A, B}, ...]            -> vector<ScheduleStep>
//   "quasi-hmm"  pi, A, Bs, one_vector, provenance -> QuasiHmm
// Matrices are arrays of rows. q / kappa / kappas are written on save and
// checked against the matrix shapes when present. pi may be omitted for the
// stochastic kinds; it is then the stationary distribution of A and
// pi_computed is set on the parse result. An optional tolerance object
// {rel_eps, abs_eps} overrides the defaults. Non-finite numbers are rejected.
struct ParsedModel {
    std::string kind;
    std::optional<HmmParams> hmm;
    std::optional<MultiHmmParams> multi;
    std::optional<std::vector<ScheduleStep>> schedule;
    std::optional<QuasiHmm> quasi;
    Tolerance tol;
    bool pi_computed = false;
};

// Throws std::invalid_argument with a field-level message on malformed input.
ParsedModel parse_model(const std::string& json_text);
ParsedModel load_model(const std::string& path);

std::string serialize_model(const HmmParams& h);
std::string serialize_model(const MultiHmmParams& h);
std::string serialize_model(const std::vector<ScheduleStep>& schedule);
std::string serialize_model(const QuasiHmm& h);

void save_model(const std::string& path, const std::string& serialized);

}  // namespace hmmident
