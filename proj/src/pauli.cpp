#include "qtime/pauli.hpp"

#include <cctype>
#include <string>

#include "qtime/error.hpp"

namespace qtime {

const ComplexMatrix& pauli_matrix(Pauli p) {
    static const ComplexMatrix i{{1.0, 0.0}, {0.0, 1.0}};
    static const ComplexMatrix x{{0.0, 1.0}, {1.0, 0.0}};
    static const ComplexMatrix y{{0.0, Complex{0.0, -1.0}}, {Complex{0.0, 1.0}, 0.0}};
    static const ComplexMatrix z{{1.0, 0.0}, {0.0, -1.0}};
    switch (p) {
    case Pauli::I: return i;
    case Pauli::X: return x;
    case Pauli::Y: return y;
    case Pauli::Z: return z;
    }
    return i;
}

PauliString PauliString::parse(std::string_view text, Complex coefficient) {
    PauliString out;
    out.coefficient = coefficient;
    for (char ch : text) {
        switch (std::toupper(static_cast<unsigned char>(ch))) {
        case 'I': out.labels.push_back(Pauli::I); break;
        case 'X': out.labels.push_back(Pauli::X); break;
        case 'Y': out.labels.push_back(Pauli::Y); break;
        case 'Z': out.labels.push_back(Pauli::Z); break;
        default: throw Error("invalid-pauli", "unknown Pauli label '" + std::string(1, ch) + "'");
        }
    }
    if (out.labels.empty()) throw Error("invalid-pauli", "empty Pauli string");
    return out;
}

ComplexMatrix PauliString::matrix() const {
    if (labels.empty()) throw Error("invalid-pauli", "empty Pauli string");
    ComplexMatrix m = pauli_matrix(labels.front());
    for (std::size_t i = 1; i < labels.size(); ++i) m = tensor(m, pauli_matrix(labels[i]));
    return m * coefficient;
}

ComplexMatrix embed(const ComplexMatrix& op, std::size_t site, std::size_t n_qubits) {
    if (op.dim() != 2 || site >= n_qubits) {
        throw Error("invalid-subsystem", "cannot embed operator on site " + std::to_string(site));
    }
    const ComplexMatrix& id = pauli_matrix(Pauli::I);
    ComplexMatrix m = site == 0 ? op : id;
    for (std::size_t q = 1; q < n_qubits; ++q) m = tensor(m, q == site ? op : id);
    return m;
}

} // namespace qtime
