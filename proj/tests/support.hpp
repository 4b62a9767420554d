#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <doctest.h>

#include "qtime/complexity.hpp"
#include "qtime/error.hpp"
#include "qtime/rng.hpp"
#include "qtime/state.hpp"

namespace qtime::testing {

// Full-rank state G G^dagger / Tr with Gaussian G.
inline DensityMatrix random_state(std::size_t n_qubits, CounterRng& rng) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    ComplexMatrix g(dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) g(r, c) = Complex{rng.normal(), rng.normal()};
    ComplexMatrix m = g * g.adjoint();
    return DensityMatrix(m * Complex{1.0 / m.trace().real(), 0.0});
}

inline std::vector<double> random_probabilities(std::size_t dim, CounterRng& rng) {
    std::vector<double> p(dim);
    double sum = 0.0;
    for (double& x : p) sum += (x = rng.uniform() + 1e-3);
    for (double& x : p) x /= sum;
    return p;
}

inline ComplexMatrix random_sl2c(CounterRng& rng) {
    ComplexMatrix m{{Complex{rng.normal(), rng.normal()}, Complex{rng.normal(), rng.normal()}},
                    {Complex{rng.normal(), rng.normal()}, Complex{rng.normal(), rng.normal()}}};
    const Complex det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    return m * (Complex{1.0, 0.0} / std::sqrt(det));
}

// Minimum over every distinct diagonal arrangement, with no pruning at all.
inline double brute_force_complexity(const DensityMatrix& rho) {
    double best = 2.0;
    for (const DensityMatrix& candidate : diagonal_candidates(rho.spectrum()))
        best = std::min(best, bures_distance(rho, candidate));
    return best;
}

template <class F>
std::string error_code_of(F&& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    return "";
}

} // namespace qtime::testing
