#include "qtime/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "qtime/error.hpp"

namespace qtime {

namespace {

void require_same_dim(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.dim() != b.dim()) {
        throw Error("dimension-mismatch", "matrices of dimension " + std::to_string(a.dim()) +
                                              " and " + std::to_string(b.dim()));
    }
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim), data_(dim * dim) {
    if (dim == 0) throw Error("invalid-dimension", "matrix dimension must be positive");
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::vector<Complex> entries)
    : dim_(dim), data_(std::move(entries)) {
    if (dim == 0 || data_.size() != dim * dim) {
        throw Error("invalid-dimension", "entry count does not match dimension");
    }
    for (const auto& z : data_) {
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
            throw Error("non-finite", "matrix entry is not finite");
        }
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows)
    : dim_(rows.size()) {
    data_.reserve(dim_ * dim_);
    for (const auto& row : rows) {
        if (row.size() != dim_) throw Error("invalid-dimension", "matrix literal is not square");
        data_.insert(data_.end(), row.begin(), row.end());
    }
    if (dim_ == 0) throw Error("invalid-dimension", "matrix dimension must be positive");
}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
    ComplexMatrix m(dim);
    for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const double> values) {
    ComplexMatrix m(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) m(i, i) = values[i];
    return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (std::size_t r = 0; r < dim_; ++r)
        for (std::size_t c = 0; c < dim_; ++c) out(c, r) = std::conj((*this)(r, c));
    return out;
}

Complex ComplexMatrix::trace() const {
    Complex t = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
    require_same_dim(*this, o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
    require_same_dim(*this, o);
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
    for (auto& z : data_) z *= s;
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b);
    const std::size_t n = a.dim();
    ComplexMatrix out(n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t k = 0; k < n; ++k) {
            const Complex ark = a(r, k);
            if (ark == Complex{}) continue;
            for (std::size_t c = 0; c < n; ++c) out(r, c) += ark * b(k, c);
        }
    }
    return out;
}

ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    const std::size_t na = a.dim();
    const std::size_t nb = b.dim();
    ComplexMatrix out(na * nb);
    for (std::size_t ra = 0; ra < na; ++ra)
        for (std::size_t ca = 0; ca < na; ++ca)
            for (std::size_t rb = 0; rb < nb; ++rb)
                for (std::size_t cb = 0; cb < nb; ++cb)
                    out(ra * nb + rb, ca * nb + cb) = a(ra, ca) * b(rb, cb);
    return out;
}

double frobenius_norm(const ComplexMatrix& m) {
    double s = 0.0;
    for (const auto& z : m.entries()) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require_same_dim(a, b);
    double worst = 0.0;
    auto ea = a.entries();
    auto eb = b.entries();
    for (std::size_t i = 0; i < ea.size(); ++i) worst = std::max(worst, std::abs(ea[i] - eb[i]));
    return worst;
}

double hermiticity_error(const ComplexMatrix& m) {
    double worst = 0.0;
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = r; c < m.dim(); ++c)
            worst = std::max(worst, std::abs(m(r, c) - std::conj(m(c, r))));
    return worst;
}

bool is_exact_identity(const ComplexMatrix& m) {
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c)
            if (m(r, c) != (r == c ? Complex{1.0, 0.0} : Complex{})) return false;
    return true;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    ComplexMatrix out(m.dim());
    for (std::size_t r = 0; r < m.dim(); ++r) {
        out(r, r) = m(r, r).real();
        for (std::size_t c = r + 1; c < m.dim(); ++c) {
            const Complex z = 0.5 * (m(r, c) + std::conj(m(c, r)));
            out(r, c) = z;
            out(c, r) = std::conj(z);
        }
    }
    return out;
}

} // namespace qtime
