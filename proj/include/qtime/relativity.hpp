#pragma once

#include <array>
#include <cstddef>
#include <string>

#include "qtime/matrix.hpp"
#include "qtime/state.hpp"

namespace qtime {

// Minkowski image of a qubit state: components Tr(rho sigma_mu) with
// sigma = (I, X, Y, Z).
struct FourVector {
    std::array<double, 4> components{};
};

// 4x4 real matrix, Lambda^T eta Lambda = eta with eta = diag(1, -1, -1, -1).
struct LorentzMatrix {
    std::array<std::array<double, 4>, 4> entries{};
};

enum class TransformKind { Identity, Rotation, Boost, Gravity };
enum class Axis { X, Y, Z };
enum class LiftMode { Uniform, OppositeSign };

struct TransformSpec {
    TransformKind kind = TransformKind::Identity;
    Axis axis = Axis::X;       // unused for gravity
    double parameter = 0.0;    // angle / rapidity, or gravity strength
    LiftMode lift = LiftMode::Uniform;
};

std::string to_string(TransformKind kind);
std::string to_string(Axis axis);
TransformKind parse_transform_kind(const std::string& text);
Axis parse_axis(const std::string& text);

FourVector bloch_four_vector(const DensityMatrix& rho);
// Normalizes by the time component first; Bloch norm above 1 + 1e-9 is "unphysical".
DensityMatrix reconstruct_state(const FourVector& v);
// Unnormalized 4-vector of any 2x2 Hermitian matrix.
FourVector four_vector_of(const ComplexMatrix& m);

// Lambda_{mu nu} = 1/2 Tr(sigma_mu m sigma_nu m^dagger) for det(m) = 1.
LorentzMatrix lorentz_of(const ComplexMatrix& m);
FourVector apply(const LorentzMatrix& lambda, const FourVector& v);
LorentzMatrix operator*(const LorentzMatrix& a, const LorentzMatrix& b);
// max |(Lambda^T eta Lambda - eta)_{mu nu}|
double metric_error(const LorentzMatrix& lambda);

Complex determinant_2x2(const ComplexMatrix& m);

// Single-qubit realization:
//   rotation -> exp(-i sigma_axis theta / 2)
//   boost    -> exp(sigma_axis theta / 2)
//   gravity  -> exp((I + X - Y + Z) beta)
ComplexMatrix single_qubit_operator(const TransformSpec& spec);

// n-qubit operator obtained by exponentiating the summed generator. Uniform
// places the same generator on every qubit (equal to op^{(x)n}); opposite-sign
// uses generator_A - generator_B and exists only for two qubits. Parameter 0
// or kind identity yields the exact identity matrix.
ComplexMatrix lift_operator(const TransformSpec& spec, std::size_t n_qubits);

// Rotations act as exact unitaries; boosts and gravity are applied and the
// state renormalized.
DensityMatrix transform_state(const DensityMatrix& rho, const TransformSpec& spec);
DensityMatrix transform_state(const DensityMatrix& rho, const TransformSpec& spec, const ComplexMatrix& lifted);

} // namespace qtime
