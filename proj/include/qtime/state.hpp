#pragma once

#include <span>
#include <vector>

#include "qtime/linalg.hpp"
#include "qtime/matrix.hpp"

namespace qtime {

inline constexpr double kTraceTolerance = 1e-10;
// Eigenvalues in [-kNegativityTolerance, 0) are numerical noise and read as 0.
inline constexpr double kNegativityTolerance = 1e-9;

// Eigenvalues of a density matrix in descending order, each in [0, 1],
// summing to 1 within 1e-9.
class Spectrum {
public:
    explicit Spectrum(std::vector<double> values);

    // Clamps tolerated negative noise to zero and renormalizes; throws
    // "not-psd" for anything more negative.
    static Spectrum from_eigenvalues(std::vector<double> eigenvalues);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }

private:
    std::vector<double> values_;
};

// Hermitian, unit-trace, positive semidefinite matrix on n qubits. Qubit 0
// (qubit A) is the most significant bit of the basis index.
class DensityMatrix {
public:
    explicit DensityMatrix(const ComplexMatrix& m);

    // Diagonal state diag(probabilities).
    static DensityMatrix diagonal(std::span<const double> probabilities);
    static DensityMatrix maximally_mixed(std::size_t n_qubits);

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return matrix_.dim(); }
    std::size_t n_qubits() const noexcept { return n_qubits_; }
    const Spectrum& spectrum() const noexcept { return spectrum_; }

private:
    ComplexMatrix matrix_;
    std::size_t n_qubits_ = 0;
    Spectrum spectrum_;
};

// Reduced state on the qubits listed in `keep` (0-based, 0 = qubit A).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep);

// F = [Tr sqrt(sqrt(rho) sigma sqrt(rho))]^2, clamped to [0, 1].
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

// D_B = sqrt(2 (1 - sqrt(F))), in [0, sqrt(2)].
double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma);
double bures_from_root_fidelity(double root_fidelity);

// exp(-beta h) / Tr exp(-beta h)
DensityMatrix thermal_state(double beta, const HermitianOperator& h);

// normalize == false: U rho U^dagger with U unitary within 1e-8.
// normalize == true:  M rho M^dagger / Tr(M rho M^dagger).
DensityMatrix apply_operator(const DensityMatrix& rho, const ComplexMatrix& m, bool normalize);

} // namespace qtime
