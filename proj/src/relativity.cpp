#include "qtime/relativity.hpp"

#include <algorithm>
#include <cmath>

#include "qtime/error.hpp"
#include "qtime/linalg.hpp"
#include "qtime/pauli.hpp"

namespace qtime {

namespace {

const ComplexMatrix& sigma(std::size_t mu) {
    static const Pauli order[4] = {Pauli::I, Pauli::X, Pauli::Y, Pauli::Z};
    return pauli_matrix(order[mu]);
}

Pauli axis_pauli(Axis axis) {
    switch (axis) {
    case Axis::X: return Pauli::X;
    case Axis::Y: return Pauli::Y;
    case Axis::Z: return Pauli::Z;
    }
    return Pauli::X;
}

// Hermitian part of the single-qubit generator; rotations carry an extra -i.
ComplexMatrix hermitian_generator(const TransformSpec& spec) {
    const double p = spec.parameter;
    switch (spec.kind) {
    case TransformKind::Identity: return ComplexMatrix(2);
    case TransformKind::Rotation:
    case TransformKind::Boost: return pauli_matrix(axis_pauli(spec.axis)) * Complex{p / 2.0, 0.0};
    case TransformKind::Gravity: {
        ComplexMatrix g = pauli_matrix(Pauli::I) + pauli_matrix(Pauli::X) - pauli_matrix(Pauli::Y) +
                          pauli_matrix(Pauli::Z);
        return g * Complex{p, 0.0};
    }
    }
    return ComplexMatrix(2);
}

ComplexMatrix exponentiate(const TransformSpec& spec, const ComplexMatrix& generator) {
    const HermitianOperator h(generator);
    if (spec.kind == TransformKind::Rotation) return unitary_evolution(h, 1.0);
    return matrix_exp(h);
}

bool is_trivial(const TransformSpec& spec) {
    return spec.kind == TransformKind::Identity || spec.parameter == 0.0;
}

void check_finite(const TransformSpec& spec) {
    if (!std::isfinite(spec.parameter)) throw Error("non-finite", "transform parameter must be finite");
}

} // namespace

std::string to_string(TransformKind kind) {
    switch (kind) {
    case TransformKind::Identity: return "identity";
    case TransformKind::Rotation: return "rotation";
    case TransformKind::Boost: return "boost";
    case TransformKind::Gravity: return "gravity";
    }
    return "identity";
}

std::string to_string(Axis axis) {
    switch (axis) {
    case Axis::X: return "x";
    case Axis::Y: return "y";
    case Axis::Z: return "z";
    }
    return "x";
}

TransformKind parse_transform_kind(const std::string& text) {
    if (text == "identity") return TransformKind::Identity;
    if (text == "rotation") return TransformKind::Rotation;
    if (text == "boost") return TransformKind::Boost;
    if (text == "gravity") return TransformKind::Gravity;
    throw Error("unknown-kind", "unknown transform kind '" + text + "'");
}

Axis parse_axis(const std::string& text) {
    if (text == "x") return Axis::X;
    if (text == "y") return Axis::Y;
    if (text == "z") return Axis::Z;
    throw Error("unknown-axis", "unknown axis '" + text + "'");
}

FourVector four_vector_of(const ComplexMatrix& m) {
    if (m.dim() != 2) throw Error("invalid-dimension", "four-vectors exist for single qubits only");
    FourVector v;
    for (std::size_t mu = 0; mu < 4; ++mu) v.components[mu] = (m * sigma(mu)).trace().real();
    return v;
}

FourVector bloch_four_vector(const DensityMatrix& rho) {
    FourVector v = four_vector_of(rho.matrix());
    v.components[0] = 1.0;
    return v;
}

DensityMatrix reconstruct_state(const FourVector& v) {
    const double t = v.components[0];
    if (!(t > 0.0) || !std::isfinite(t)) throw Error("unphysical", "time component must be positive");
    double norm2 = 0.0;
    for (std::size_t i = 1; i < 4; ++i) norm2 += (v.components[i] / t) * (v.components[i] / t);
    if (std::sqrt(norm2) > 1.0 + 1e-9) throw Error("unphysical", "Bloch vector longer than 1");
    ComplexMatrix m = ComplexMatrix::identity(2) * Complex{0.5, 0.0};
    for (std::size_t i = 1; i < 4; ++i) m += sigma(i) * Complex{0.5 * v.components[i] / t, 0.0};
    return DensityMatrix(m);
}

Complex determinant_2x2(const ComplexMatrix& m) {
    if (m.dim() != 2) throw Error("invalid-dimension", "determinant_2x2 needs a 2x2 matrix");
    return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

LorentzMatrix lorentz_of(const ComplexMatrix& m) {
    if (m.dim() != 2) throw Error("invalid-dimension", "lorentz_of needs a 2x2 matrix");
    const Complex det = determinant_2x2(m);
    if (std::abs(det - Complex{1.0, 0.0}) > 1e-8) throw Error("not-sl2c", "determinant differs from 1");
    const ComplexMatrix adj = m.adjoint();
    LorentzMatrix lambda;
    for (std::size_t mu = 0; mu < 4; ++mu)
        for (std::size_t nu = 0; nu < 4; ++nu)
            lambda.entries[mu][nu] = 0.5 * (sigma(mu) * m * sigma(nu) * adj).trace().real();
    return lambda;
}

FourVector apply(const LorentzMatrix& lambda, const FourVector& v) {
    FourVector out;
    for (std::size_t mu = 0; mu < 4; ++mu)
        for (std::size_t nu = 0; nu < 4; ++nu) out.components[mu] += lambda.entries[mu][nu] * v.components[nu];
    return out;
}

LorentzMatrix operator*(const LorentzMatrix& a, const LorentzMatrix& b) {
    LorentzMatrix out;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t k = 0; k < 4; ++k)
            for (std::size_t j = 0; j < 4; ++j) out.entries[i][j] += a.entries[i][k] * b.entries[k][j];
    return out;
}

double metric_error(const LorentzMatrix& lambda) {
    const double eta[4] = {1.0, -1.0, -1.0, -1.0};
    double err = 0.0;
    for (std::size_t mu = 0; mu < 4; ++mu)
        for (std::size_t nu = 0; nu < 4; ++nu) {
            double s = 0.0;
            for (std::size_t k = 0; k < 4; ++k) s += lambda.entries[k][mu] * eta[k] * lambda.entries[k][nu];
            err = std::max(err, std::abs(s - (mu == nu ? eta[mu] : 0.0)));
        }
    return err;
}

ComplexMatrix single_qubit_operator(const TransformSpec& spec) {
    check_finite(spec);
    if (is_trivial(spec)) return ComplexMatrix::identity(2);
    return exponentiate(spec, hermitian_generator(spec));
}

ComplexMatrix lift_operator(const TransformSpec& spec, std::size_t n_qubits) {
    check_finite(spec);
    if (n_qubits < 1) throw Error("invalid-dimension", "need at least one qubit");
    if (spec.lift == LiftMode::OppositeSign && n_qubits != 2) {
        throw Error("unsupported-lift", "opposite-sign lift is defined for two qubits only");
    }
    const std::size_t dim = std::size_t{1} << n_qubits;
    if (is_trivial(spec)) return ComplexMatrix::identity(dim);
    const ComplexMatrix g = hermitian_generator(spec);
    ComplexMatrix total(dim);
    for (std::size_t site = 0; site < n_qubits; ++site) {
        const double sign = (spec.lift == LiftMode::OppositeSign && site == 1) ? -1.0 : 1.0;
        total += embed(g, site, n_qubits) * Complex{sign, 0.0};
    }
    return exponentiate(spec, total);
}

DensityMatrix transform_state(const DensityMatrix& rho, const TransformSpec& spec, const ComplexMatrix& lifted) {
    return apply_operator(rho, lifted, spec.kind != TransformKind::Rotation);
}

DensityMatrix transform_state(const DensityMatrix& rho, const TransformSpec& spec) {
    return transform_state(rho, spec, lift_operator(spec, rho.n_qubits()));
}

} // namespace qtime
