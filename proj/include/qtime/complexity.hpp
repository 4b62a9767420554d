#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qtime/linalg.hpp"
#include "qtime/state.hpp"

namespace qtime {

// Minimal Bures distance from a state to the diagonal states sharing its
// spectrum. Lies in [0, sqrt(2)].
struct ComplexityValue {
    double value = 0.0;
};

// Forward-difference rate of complexity change per unit latent time.
struct PaceValue {
    double value = 0.0;
    double dt_used = 0.0;
};

// Spectrum values closer than this count as degenerate when deduplicating
// candidate orderings.
inline constexpr double kDegeneracyTolerance = 1e-12;

// Every distinct placement of the spectrum on the diagonal:
// N! / prod(multiplicity!) states.
std::vector<DensityMatrix> diagonal_candidates(const Spectrum& spectrum);
std::size_t candidate_count(const Spectrum& spectrum);

// Tr sqrt(sqrt(D) rho sqrt(D)) for diagonal D, i.e. sqrt(F(rho, D)).
double root_fidelity_with_diagonal(const ComplexMatrix& rho, const std::vector<double>& diagonal);

struct ComplexityWitness {
    ComplexityValue complexity;
    std::vector<double> diagonal;  // the minimizing candidate
    std::size_t exact_evaluations = 0;
};

// Exact search over all candidate orderings. Orderings are ranked by a
// pinching upper bound on the fidelity and only those whose bound can beat
// the incumbent are evaluated exactly, so the result matches exhaustive search.
// A hint (typically the witness diagonal of a nearby state) only orders the
// search; it never changes the returned value.
ComplexityWitness complexity_search(const DensityMatrix& rho, std::span<const double> hint = {});

ComplexityValue state_complexity(const DensityMatrix& rho);

// True when u is a diagonal unitary. Conjugation by such a u maps every
// diagonal state to itself, so C(u rho u^dagger) = C(rho) for all rho.
bool preserves_complexity(const ComplexMatrix& u);

// (C(e^{-iH dt} rho0 e^{iH dt}) - C(rho0)) / dt
PaceValue pace(const DensityMatrix& rho0, const HermitianOperator& h, double dt);

struct TrajectoryPoint {
    double tau = 0.0;
    ComplexityValue complexity;
};

// C(U(tau) rho0 U(tau)^dagger) with U(tau) = exp(-i h tau) for each tau.
std::vector<TrajectoryPoint> complexity_trajectory(const DensityMatrix& rho0, const HermitianOperator& h,
                                                   const std::vector<double>& taus);

} // namespace qtime
