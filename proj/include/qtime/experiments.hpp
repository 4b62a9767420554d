#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qtime/complexity.hpp"
#include "qtime/relativity.hpp"
#include "qtime/rng.hpp"
#include "qtime/state.hpp"

namespace qtime {

// ---------------------------------------------------------------------------
// Two-qubit correlated thermal pair

enum class Family { Rotation, Boost };
std::string to_string(Family family);
Family parse_family(const std::string& text);

// Energies in units of h nu_0 = 1. Local Hamiltonians H_i = (1 - Z_i) / 2.
struct TwoQubitConfig {
    Complex alpha{0.1, 0.0};
    double beta_a = 0.5;
    double beta_b = 2.0;
    std::vector<double> tau_grid;    // default 0, 0.02, ..., 1
    std::vector<double> theta_grid;  // default 0, 0.5, ..., 2
    std::vector<Family> families{Family::Rotation, Family::Boost};
    Axis axis = Axis::X;

    TwoQubitConfig();
};

// (1 - Z) / 2
const ComplexMatrix& local_qubit_hamiltonian();

// Largest admissible |alpha|: sqrt(pA0 pB1 pA1 pB0) for thermal populations p.
double correlation_bound(const TwoQubitConfig& cfg);

// rho_A (x) rho_B + alpha |01><10| + conj(alpha) |10><01|
DensityMatrix build_initial_state(const TwoQubitConfig& cfg);

// (pi / 2)(X_A Y_B - Y_A X_B)
const HermitianOperator& exchange_hamiltonian();
DensityMatrix evolve_two_qubit(const DensityMatrix& rho, double tau);

struct HeatFlow {
    double q_a = 0.0;
    double q_b = 0.0;
};

// Change in local energy Tr(H_i rho_i) of each qubit relative to `reference`.
HeatFlow heat_flow(const DensityMatrix& rho_tau, const DensityMatrix& reference);

struct TwoQubitRow {
    Family family;
    double theta = 0.0;
    double tau = 0.0;
    double complexity = 0.0;
    double q_a = 0.0;
    double q_b = 0.0;
};

// Rotation family: exp(-i (A_1 + A_2) theta / 2). Boost family:
// exp((A_1 - A_2) theta / 2). A is the configured axis Pauli.
TransformSpec family_transform(Family family, Axis axis, double theta);

// Rows ordered by family, theta, tau. Heat is that of the untransformed state.
std::vector<TwoQubitRow> run_two_qubit_sweep(const TwoQubitConfig& cfg);

// ---------------------------------------------------------------------------
// Random ensembles

// V D V^dagger: D has a flat-Dirichlet spectrum, V is `depth` layers of
// independent Haar single-qubit unitaries.
DensityMatrix sample_low_complexity_state(std::size_t n_qubits, std::size_t depth, CounterRng& rng);

ComplexMatrix sample_haar_qubit_unitary(CounterRng& rng);

struct HamiltonianWeights {
    double single_site = 1.0;
    double nearest_neighbor = 1.0;
};

// Chain Hamiltonian with Gaussian single-site and nearest-neighbor Pauli
// terms, rescaled to unit operator norm.
HermitianOperator sample_local_hamiltonian(std::size_t n_qubits, CounterRng& rng,
                                           const HamiltonianWeights& weights = {});

enum class PaceStatistic { Magnitude, Signed };
std::string to_string(PaceStatistic statistic);
PaceStatistic parse_pace_statistic(const std::string& text);

struct EnsembleConfig {
    std::size_t n_qubits = 1;
    std::size_t k_samples = 2000;
    double dt = 0.01;
    std::vector<double> parameter_grid;
    std::vector<TransformKind> kinds;
    std::uint64_t seed = 0;
    std::size_t state_depth = 1;
    HamiltonianWeights hamiltonian;
    Axis axis = Axis::Z;
    PaceStatistic pace_statistic = PaceStatistic::Magnitude;
    std::size_t threads = 1;
};

// Defaults for the special-relativity run: theta 0..2 step 0.25, rotation and boost.
EnsembleConfig default_sr_config();
// Defaults for the gravity run: beta 0..1 step 0.1, K = 1000.
EnsembleConfig default_gr_config();

// Samples with |v| below this are left out of the mean of ratios.
inline constexpr double kDiscardThreshold = 1e-8;

struct PacePair {
    double v = 0.0;
    double v_bar = 0.0;
};

struct EstimatorResult {
    double mean_of_ratio = 0.0;
    double ratio_of_mean = 0.0;
    double stderr_ratio = 0.0;
    std::size_t k_effective = 0;
    std::size_t discarded = 0;
};

// mean_of_ratio = mean(v_bar / v) over |v| >= kDiscardThreshold;
// ratio_of_mean = sum(v_bar) / sum(v) over all samples.
EstimatorResult estimators(std::span<const PacePair> samples);

struct EnsemblePoint {
    TransformKind kind;
    double parameter = 0.0;
    EstimatorResult estimate;
};

struct EnsembleResult {
    std::size_t n_qubits = 0;
    std::size_t k_samples = 0;
    std::vector<EnsemblePoint> points;  // ordered by kind, then parameter
};

// Per-sample pace statistic for the untransformed and every transformed frame.
struct SampleRecord {
    std::size_t sample_index = 0;
    double v = 0.0;
    std::vector<double> v_bar;  // one per (kind, parameter), same order as EnsembleResult::points
    bool discarded = false;
};

SampleRecord run_ensemble_sample(const EnsembleConfig& cfg, std::size_t sample_index,
                                 const std::vector<TransformSpec>& transforms,
                                 const std::vector<ComplexMatrix>& lifted);

EnsembleResult run_ensemble(const EnsembleConfig& cfg);
// kinds must be a subset of {rotation, boost}.
EnsembleResult run_sr_ensemble(const EnsembleConfig& cfg);
// kinds must be {gravity}.
EnsembleResult run_gr_ensemble(const EnsembleConfig& cfg);

std::vector<double> uniform_grid(double start, double stop, double step);

} // namespace qtime
