#pragma once

#include <string_view>
#include <vector>

#include "qtime/matrix.hpp"

namespace qtime {

enum class Pauli { I, X, Y, Z };

const ComplexMatrix& pauli_matrix(Pauli p);

// coefficient * (labels[0] (x) labels[1] (x) ...), labels[0] acting on qubit A.
struct PauliString {
    std::vector<Pauli> labels;
    Complex coefficient{1.0, 0.0};

    // Parses strings such as "XI" or "zyx".
    static PauliString parse(std::string_view labels, Complex coefficient = 1.0);

    std::size_t n_qubits() const noexcept { return labels.size(); }
    ComplexMatrix matrix() const;
};

// Places a single-qubit operator on `site` of an n-qubit register.
ComplexMatrix embed(const ComplexMatrix& op, std::size_t site, std::size_t n_qubits);

} // namespace qtime
