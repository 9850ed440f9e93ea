#pragma once

#include <vector>

#include "hmmident/hmm.hpp"
#include "hmmident/matrix.hpp"

namespace hmmident {

// Built-in case study: a 7-state SSH attack-progression chain fitted from
// real traffic traces, observed through a 3-letter alert alphabet with a
// per-observer measurement-error level eps. The transition rows are
// normalized to sum to one; the observation matrix confuses state groups so
// thoroughly that two of its rows are always equal, whatever eps is.

Matrix ssh_transition();

// Rows are emission distributions over {1, 2, 3}; eps must lie in [0, 0.5].
Matrix ssh_observation(double eps);

// Single observer with the stationary initial distribution of the chain.
HmmParams ssh_single(double eps, const Tolerance& tol = {});

// One observer per entry of eps; homogeneous is stored as given so that
// validation can flag requests that contradict the error levels.
MultiHmmParams ssh_multi(const std::vector<double>& eps, bool homogeneous,
                         const Tolerance& tol = {});

}  // namespace hmmident
