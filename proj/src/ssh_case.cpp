#include "hmmident/ssh_case.hpp"

#include <stdexcept>

namespace hmmident {

Matrix ssh_transition() {
    // Fitted values; two rows of the published table sum to 0.999 and 0.959,
    // so each row is divided by its own sum to make the matrix stochastic.
    Matrix a = Matrix::from_rows({
        {0.6170, 0.3780, 0.0040, 0.0000, 0.0000, 0.0000, 0.0010},
        {0.1860, 0.8130, 0.0010, 0.0000, 0.0000, 0.0000, 0.0000},
        {0.0000, 0.0000, 0.7230, 0.2350, 0.0400, 0.0000, 0.0010},
        {0.0000, 0.0000, 0.2140, 0.7570, 0.0290, 0.0000, 0.0000},
        {0.0000, 0.0000, 0.0000, 0.0220, 0.6670, 0.2670, 0.0030},
        {0.0000, 0.0000, 0.0000, 0.0000, 0.1520, 0.8480, 0.0000},
        {0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 0.0000, 1.0000},
    });
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < a.cols(); ++j) sum += a(i, j);
        for (std::size_t j = 0; j < a.cols(); ++j) a.set(i, j, a(i, j) / sum);
    }
    return a;
}

Matrix ssh_observation(double eps) {
    if (!(eps >= 0.0 && eps <= 0.5)) {
        throw std::invalid_argument("ssh_observation: eps must lie in [0, 0.5]");
    }
    const double e = eps;
    const double c = 1.0 - 2.0 * eps;
    return Matrix::from_rows({
        {e, c, e},
        {c, e, e},
        {e, e, c},
        {c, e, e},
        {e, c, e},
        {c, e, e},
        {c, e, e},
    });
}

HmmParams ssh_single(double eps, const Tolerance& tol) {
    Matrix a = ssh_transition();
    std::vector<double> pi = stationary_distribution(a, tol);
    return HmmParams{std::move(pi), std::move(a), ssh_observation(eps)};
}

MultiHmmParams ssh_multi(const std::vector<double>& eps, bool homogeneous,
                         const Tolerance& tol) {
    if (eps.size() < 2) {
        throw std::invalid_argument("ssh_multi: need at least two observers");
    }
    Matrix a = ssh_transition();
    std::vector<double> pi = stationary_distribution(a, tol);
    std::vector<Matrix> bs;
    bs.reserve(eps.size());
    for (double e : eps) bs.push_back(ssh_observation(e));
    return MultiHmmParams{std::move(pi), std::move(a), std::move(bs), homogeneous};
}

}  // namespace hmmident
