#include "qtime/state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "qtime/error.hpp"

namespace qtime {

namespace {

std::size_t qubit_count(std::size_t dim) {
    if (!std::has_single_bit(dim) || dim < 2) {
        throw Error("invalid-dimension", "density matrix dimension " + std::to_string(dim) +
                                             " is not a power of two");
    }
    return static_cast<std::size_t>(std::countr_zero(dim));
}

} // namespace

Spectrum::Spectrum(std::vector<double> values) : values_(std::move(values)) {
    if (values_.empty()) throw Error("invalid-spectrum", "empty spectrum");
    std::sort(values_.begin(), values_.end(), std::greater<>());
    double sum = 0.0;
    for (double v : values_) {
        if (!(v >= 0.0 && v <= 1.0)) throw Error("invalid-spectrum", "value " + std::to_string(v) + " outside [0, 1]");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw Error("invalid-spectrum", "spectrum sums to " + std::to_string(sum));
}

Spectrum Spectrum::from_eigenvalues(std::vector<double> eigenvalues) {
    double sum = 0.0;
    for (double& v : eigenvalues) {
        if (v < -kNegativityTolerance) {
            throw Error("not-psd", "eigenvalue " + std::to_string(v) + " below tolerance");
        }
        v = std::max(v, 0.0);
        sum += v;
    }
    if (!(sum > 0.0)) throw Error("not-psd", "spectrum has zero weight");
    for (double& v : eigenvalues) v = std::min(v / sum, 1.0);
    return Spectrum(std::move(eigenvalues));
}

DensityMatrix::DensityMatrix(const ComplexMatrix& m)
    : n_qubits_(qubit_count(m.dim())), spectrum_(std::vector<double>{1.0}) {
    const double herm = hermiticity_error(m);
    if (!(herm <= kHermitianTolerance)) {
        throw Error("not-hermitian", "density matrix hermiticity error " + std::to_string(herm));
    }
    matrix_ = hermitian_part(m);
    const double tr = matrix_.trace().real();
    if (!(std::abs(tr - 1.0) <= kTraceTolerance)) {
        throw Error("not-normalized", "density matrix trace " + std::to_string(tr));
    }
    spectrum_ = Spectrum::from_eigenvalues(hermitian_eigenvalues(matrix_));
}

DensityMatrix DensityMatrix::diagonal(std::span<const double> probabilities) {
    return DensityMatrix(ComplexMatrix::diagonal(probabilities));
}

DensityMatrix DensityMatrix::maximally_mixed(std::size_t n_qubits) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    return DensityMatrix(ComplexMatrix::identity(dim) * Complex{1.0 / static_cast<double>(dim), 0.0});
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const std::size_t> keep) {
    const std::size_t n = rho.n_qubits();
    std::vector<bool> kept(n, false);
    for (std::size_t q : keep) {
        if (q >= n || kept[q]) throw Error("invalid-subsystem", "bad or repeated qubit index " + std::to_string(q));
        kept[q] = true;
    }
    if (keep.empty() || keep.size() == n) {
        throw Error("invalid-subsystem", "kept subsystem must be a nonempty proper subset");
    }

    // Bit position of qubit q inside a basis index.
    auto bit_of = [n](std::size_t q) { return n - 1 - q; };
    std::vector<std::size_t> kept_qubits;
    std::vector<std::size_t> traced_qubits;
    for (std::size_t q = 0; q < n; ++q) (kept[q] ? kept_qubits : traced_qubits).push_back(q);

    auto compose = [&](std::size_t kept_index, std::size_t traced_index) {
        std::size_t full = 0;
        for (std::size_t i = 0; i < kept_qubits.size(); ++i) {
            const std::size_t bit = (kept_index >> (kept_qubits.size() - 1 - i)) & 1U;
            full |= bit << bit_of(kept_qubits[i]);
        }
        for (std::size_t i = 0; i < traced_qubits.size(); ++i) {
            const std::size_t bit = (traced_index >> (traced_qubits.size() - 1 - i)) & 1U;
            full |= bit << bit_of(traced_qubits[i]);
        }
        return full;
    };

    const std::size_t out_dim = std::size_t{1} << kept_qubits.size();
    const std::size_t traced_dim = std::size_t{1} << traced_qubits.size();
    ComplexMatrix out(out_dim);
    for (std::size_t r = 0; r < out_dim; ++r)
        for (std::size_t c = 0; c < out_dim; ++c)
            for (std::size_t t = 0; t < traced_dim; ++t) out(r, c) += rho.matrix()(compose(r, t), compose(c, t));
    return DensityMatrix(out);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.dim() != sigma.dim()) throw Error("dimension-mismatch", "fidelity of states with different dimensions");
    const ComplexMatrix root = matrix_sqrt(HermitianOperator(rho.matrix()));
    const ComplexMatrix inner = hermitian_part(root * sigma.matrix() * root);
    double root_fidelity = 0.0;
    for (double v : hermitian_eigenvalues(inner)) root_fidelity += std::sqrt(std::max(v, 0.0));
    return std::clamp(root_fidelity * root_fidelity, 0.0, 1.0);
}

double bures_from_root_fidelity(double root_fidelity) {
    const double r = std::clamp(root_fidelity, 0.0, 1.0);
    return std::sqrt(2.0 * (1.0 - r));
}

double bures_distance(const DensityMatrix& rho, const DensityMatrix& sigma) {
    return bures_from_root_fidelity(std::sqrt(fidelity(rho, sigma)));
}

DensityMatrix thermal_state(double beta, const HermitianOperator& h) {
    if (!std::isfinite(beta)) throw Error("domain", "inverse temperature must be finite");
    const auto values = hermitian_eigenvalues(h.matrix());
    // Shift by the ground energy so the largest Boltzmann weight is exactly 1.
    const double ground = beta >= 0.0 ? values.back() : values.front();
    ComplexMatrix weights = matrix_function(h, std::function<double(double)>([&](double e) {
        return std::exp(-beta * (e - ground));
    }));
    const double z = weights.trace().real();
    return DensityMatrix(weights * Complex{1.0 / z, 0.0});
}

DensityMatrix apply_operator(const DensityMatrix& rho, const ComplexMatrix& m, bool normalize) {
    if (m.dim() != rho.dim()) throw Error("dimension-mismatch", "operator and state dimensions differ");
    if (is_exact_identity(m)) return rho;
    const ComplexMatrix adj = m.adjoint();
    if (!normalize) {
        const double err = max_abs_diff(m * adj, ComplexMatrix::identity(m.dim()));
        if (err > 1e-8) throw Error("not-unitary", "unitarity error " + std::to_string(err));
    }
    ComplexMatrix out = hermitian_part(m * rho.matrix() * adj);
    if (normalize) {
        const double tr = out.trace().real();
        if (!(tr >= 1e-12)) throw Error("annihilated-state", "post-operation trace " + std::to_string(tr));
        out *= Complex{1.0 / tr, 0.0};
    }
    return DensityMatrix(out);
}

} // namespace qtime
