#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace qtime {

using Complex = std::complex<double>;

// Dense square complex matrix, row-major. Sized for systems of a few qubits.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(std::size_t dim);
    ComplexMatrix(std::size_t dim, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t dim);
    static ComplexMatrix diagonal(std::span<const double> values);

    std::size_t dim() const noexcept { return dim_; }

    Complex& operator()(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

    std::span<const Complex> entries() const noexcept { return data_; }

    ComplexMatrix adjoint() const;
    Complex trace() const;

    ComplexMatrix& operator+=(const ComplexMatrix& o);
    ComplexMatrix& operator-=(const ComplexMatrix& o);
    ComplexMatrix& operator*=(Complex s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
    friend ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
    friend ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }
    friend ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);

    bool operator==(const ComplexMatrix&) const = default;

private:
    std::size_t dim_ = 0;
    std::vector<Complex> data_;
};

// Kronecker product. The left factor owns the most significant index bits,
// so qubit A of A (x) B is the leading qubit of every basis label.
ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b);

double frobenius_norm(const ComplexMatrix& m);
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
// Largest elementwise |M - M^dagger|.
double hermiticity_error(const ComplexMatrix& m);
bool is_exact_identity(const ComplexMatrix& m);
// (M + M^dagger) / 2
ComplexMatrix hermitian_part(const ComplexMatrix& m);

} // namespace qtime
