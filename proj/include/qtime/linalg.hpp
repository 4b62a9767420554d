#pragma once

#include <functional>
#include <vector>

#include "qtime/matrix.hpp"

namespace qtime {

inline constexpr double kHermitianTolerance = 1e-10;

// A matrix known to be Hermitian within kHermitianTolerance. The stored
// matrix is symmetrized on construction.
class HermitianOperator {
public:
    explicit HermitianOperator(const ComplexMatrix& m);

    const ComplexMatrix& matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return matrix_.dim(); }

private:
    ComplexMatrix matrix_;
};

struct EigenSystem {
    std::vector<double> values;  // descending
    ComplexMatrix vectors;       // columns are the matching orthonormal eigenvectors
};

// Closed form for 2x2, cyclic Jacobi otherwise.
EigenSystem hermitian_eig(const HermitianOperator& m);

// Householder reduction to a real tridiagonal matrix followed by implicit QL.
// Cheaper than Jacobi; used where many small eigenproblems are solved. The
// input is assumed Hermitian and is not validated. Without `vectors` the
// returned EigenSystem has an empty vector matrix.
EigenSystem hermitian_eig_tridiagonal(const ComplexMatrix& m, bool vectors = true);

// Eigenvalues only, descending. The input is assumed Hermitian; only its
// upper triangle and real diagonal are read.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m);

// V f(diag(lambda)) V^dagger. Throws "domain" when f yields a non-finite value.
ComplexMatrix matrix_function(const HermitianOperator& m, const std::function<double(double)>& f);
ComplexMatrix matrix_function(const HermitianOperator& m, const std::function<Complex(double)>& f);

ComplexMatrix matrix_exp(const HermitianOperator& m);
// Requires every eigenvalue above 1e-12.
ComplexMatrix matrix_log(const HermitianOperator& m);
// Eigenvalues in [-1e-9, 0) are treated as zero; anything lower is a domain error.
ComplexMatrix matrix_sqrt(const HermitianOperator& m);
// exp(-i h t)
ComplexMatrix unitary_evolution(const HermitianOperator& h, double t);

// Largest |eigenvalue|.
double operator_norm(const HermitianOperator& m);

} // namespace qtime
