#include "qtime/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "qtime/error.hpp"

namespace qtime {

namespace {

// Absolute floor on the off-diagonal Frobenius norm, tightened relative to the
// input scale so that square roots of tiny eigenvalues stay accurate.
constexpr double kJacobiThreshold = 1e-12;
constexpr double kJacobiRelative = 1e-14;
constexpr int kJacobiMaxSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.dim(); ++r)
        for (std::size_t c = r + 1; c < a.dim(); ++c) s += std::norm(a(r, c));
    return std::sqrt(2.0 * s);
}

// Cyclic Jacobi on a Hermitian matrix. On return `a` is diagonal and, when
// `v` is non-null, a_in = V diag(a) V^dagger.
void jacobi(ComplexMatrix& a, ComplexMatrix* v) {
    const std::size_t n = a.dim();
    const double threshold = std::min(kJacobiThreshold, kJacobiRelative * std::max(frobenius_norm(a), 1e-300));
    double previous = std::numeric_limits<double>::infinity();
    for (int sweep = 0; sweep < kJacobiMaxSweeps; ++sweep) {
        const double off = off_diagonal_norm(a);
        // Stop at the threshold, or once rounding noise stops the decrease.
        if (off <= threshold || (off >= previous && off <= kJacobiThreshold)) return;
        previous = off;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;
                const Complex phase = std::conj(apq) / mag;  // e^{-i phi}
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const double tau = (aqq - app) / (2.0 * mag);
                const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                // J = diag(1, e^{-i phi}) * [[c, s], [-s, c]] in the (p, q) plane.
                const Complex jpp = c;
                const Complex jpq = s;
                const Complex jqp = -s * phase;
                const Complex jqq = c * phase;
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = std::conj(jpp) * apk + std::conj(jqp) * aqk;
                    a(q, k) = std::conj(jpq) * apk + std::conj(jqq) * aqk;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = a(p, p).real();
                a(q, q) = a(q, q).real();
                if (v != nullptr) {
                    ComplexMatrix& vm = *v;
                    for (std::size_t k = 0; k < n; ++k) {
                        const Complex vkp = vm(k, p);
                        const Complex vkq = vm(k, q);
                        vm(k, p) = vkp * jpp + vkq * jqp;
                        vm(k, q) = vkp * jpq + vkq * jqq;
                    }
                }
            }
        }
    }
    if (off_diagonal_norm(a) > kJacobiThreshold) {
        throw Error("no-convergence", "Jacobi iteration did not converge");
    }
}

EigenSystem eig_2x2(const ComplexMatrix& m) {
    const double a = m(0, 0).real();
    const double d = m(1, 1).real();
    const Complex b = m(0, 1);
    const double mean = 0.5 * (a + d);
    const double half = 0.5 * (a - d);
    const double r = std::hypot(half, std::abs(b));
    EigenSystem out{{mean + r, mean - r}, ComplexMatrix(2)};
    if (std::abs(b) == 0.0) {
        const std::size_t top = a >= d ? 0 : 1;
        out.vectors(top, 0) = 1.0;
        out.vectors(1 - top, 1) = 1.0;
        return out;
    }
    Complex x;
    Complex y;
    if (a >= d) {
        x = out.values[0] - d;
        y = std::conj(b);
    } else {
        x = b;
        y = out.values[0] - a;
    }
    const double norm = std::sqrt(std::norm(x) + std::norm(y));
    x /= norm;
    y /= norm;
    out.vectors(0, 0) = x;
    out.vectors(1, 0) = y;
    out.vectors(0, 1) = -std::conj(y);
    out.vectors(1, 1) = std::conj(x);
    return out;
}

ComplexMatrix reconstruct(const EigenSystem& es, const std::vector<Complex>& fvals) {
    const std::size_t n = es.vectors.dim();
    ComplexMatrix out(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex fk = fvals[k];
        if (fk == Complex{}) continue;
        for (std::size_t r = 0; r < n; ++r) {
            const Complex vr = es.vectors(r, k) * fk;
            for (std::size_t c = 0; c < n; ++c) out(r, c) += vr * std::conj(es.vectors(c, k));
        }
    }
    return out;
}

} // namespace

HermitianOperator::HermitianOperator(const ComplexMatrix& m) {
    const double err = hermiticity_error(m);
    if (!(err <= kHermitianTolerance)) {
        throw Error("not-hermitian", "hermiticity error " + std::to_string(err));
    }
    matrix_ = hermitian_part(m);
}

EigenSystem hermitian_eig(const HermitianOperator& m) {
    const std::size_t n = m.dim();
    if (n == 1) return {{m.matrix()(0, 0).real()}, ComplexMatrix::identity(1)};
    if (n == 2) return eig_2x2(m.matrix());

    ComplexMatrix a = m.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);
    jacobi(a, &v);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i).real() > a(j, j).real(); });
    EigenSystem out{std::vector<double>(n), ComplexMatrix(n)};
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) out.vectors(r, k) = v(r, order[k]);
    }
    return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m) {
    const std::size_t n = m.dim();
    std::vector<double> values;
    if (n <= 2) {
        const EigenSystem es = n == 1 ? EigenSystem{{m(0, 0).real()}, ComplexMatrix::identity(1)}
                                      : eig_2x2(m);
        return es.values;
    }
    ComplexMatrix a = m;
    jacobi(a, nullptr);
    values.resize(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i).real();
    std::sort(values.begin(), values.end(), std::greater<>());
    return values;
}

ComplexMatrix matrix_function(const HermitianOperator& m, const std::function<Complex(double)>& f) {
    const EigenSystem es = hermitian_eig(m);
    std::vector<Complex> fvals(es.values.size());
    for (std::size_t k = 0; k < fvals.size(); ++k) {
        fvals[k] = f(es.values[k]);
        if (!std::isfinite(fvals[k].real()) || !std::isfinite(fvals[k].imag())) {
            throw Error("domain", "function undefined at eigenvalue " + std::to_string(es.values[k]));
        }
    }
    return reconstruct(es, fvals);
}

ComplexMatrix matrix_function(const HermitianOperator& m, const std::function<double(double)>& f) {
    return matrix_function(m, std::function<Complex(double)>([&](double x) { return Complex{f(x), 0.0}; }));
}

ComplexMatrix matrix_exp(const HermitianOperator& m) {
    return matrix_function(m, std::function<double(double)>([](double x) { return std::exp(x); }));
}

ComplexMatrix matrix_log(const HermitianOperator& m) {
    return matrix_function(m, std::function<double(double)>([](double x) {
        if (x <= 1e-12) throw Error("domain", "log of eigenvalue " + std::to_string(x));
        return std::log(x);
    }));
}

ComplexMatrix matrix_sqrt(const HermitianOperator& m) {
    return matrix_function(m, std::function<double(double)>([](double x) {
        if (x < -1e-9) throw Error("domain", "sqrt of eigenvalue " + std::to_string(x));
        return std::sqrt(std::max(x, 0.0));
    }));
}

ComplexMatrix unitary_evolution(const HermitianOperator& h, double t) {
    return matrix_function(h, std::function<Complex(double)>([t](double x) {
        return Complex{std::cos(x * t), -std::sin(x * t)};
    }));
}

double operator_norm(const HermitianOperator& m) {
    const auto values = hermitian_eigenvalues(m.matrix());
    return std::max(std::abs(values.front()), std::abs(values.back()));
}


// ---------------------------------------------------------------------------
// Householder + implicit QL

namespace {

// Implicit QL with Wilkinson shifts on the symmetric tridiagonal (d, e), with
// e[i] coupling i and i + 1. Rotations are accumulated into the columns of z
// when z is non-null.
void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e, std::vector<double>* z) {
    const std::size_t n = d.size();
    for (std::size_t l = 0; l < n; ++l) {
        int iterations = 0;
        while (true) {
            std::size_t m = l;
            for (; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m == l) break;
            if (++iterations > 60) throw Error("no-convergence", "tridiagonal QL did not converge");
            double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            double r = std::sqrt(g * g + 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1.0, c = 1.0, p = 0.0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                double f = s * e[i];
                const double b = c * e[i];
                r = std::sqrt(f * f + g * g);
                e[i + 1] = r;
                if (r == 0.0) {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if (z != nullptr) {
                    double* zz = z->data();
                    for (std::size_t k = 0; k < n; ++k) {
                        f = zz[k * n + i + 1];
                        zz[k * n + i + 1] = s * zz[k * n + i] + c * f;
                        zz[k * n + i] = c * zz[k * n + i] - s * f;
                    }
                }
            }
            if (underflow) continue;
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

} // namespace

EigenSystem hermitian_eig_tridiagonal(const ComplexMatrix& m, bool vectors) {
    const std::size_t n = m.dim();
    ComplexMatrix a = m;
    ComplexMatrix q = ComplexMatrix::identity(n);
    std::vector<Complex> v(n), p(n), w(n);

    // Two-sided reflections H = I - 2 v v^dagger clear column k below the
    // subdiagonal: a <- H a H, q <- q H.
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) norm2 += std::norm(a(i, k));
        const double tail = norm2 - std::norm(a(k + 1, k));
        if (tail <= 0.0) continue;
        const double norm = std::sqrt(norm2);
        const Complex x0 = a(k + 1, k);
        const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex{1.0, 0.0};
        const Complex alpha = -phase * norm;
        std::fill(v.begin(), v.end(), Complex{});
        for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
        v[k + 1] -= alpha;
        double vnorm2 = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) vnorm2 += std::norm(v[i]);
        const double inv = 1.0 / std::sqrt(vnorm2);
        for (std::size_t i = k + 1; i < n; ++i) v[i] *= inv;

        // a - v w^dagger - w v^dagger with p = a v, w = 2p - 2(v^dagger p) v.
        // Rows and columns before k are untouched since v vanishes there.
        for (std::size_t r = k; r < n; ++r) {
            Complex s{};
            for (std::size_t c = k + 1; c < n; ++c) s += a(r, c) * v[c];
            p[r] = s;
        }
        double beta = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) beta += (std::conj(v[i]) * p[i]).real();
        for (std::size_t r = k; r < n; ++r) w[r] = 2.0 * p[r] - 2.0 * beta * v[r];
        for (std::size_t r = k; r < n; ++r)
            for (std::size_t c = k; c < n; ++c) a(r, c) -= v[r] * std::conj(w[c]) + w[r] * std::conj(v[c]);

        if (vectors) {
            for (std::size_t r = 0; r < n; ++r) {
                Complex s{};
                for (std::size_t c = k + 1; c < n; ++c) s += q(r, c) * v[c];
                s *= 2.0;
                for (std::size_t c = k + 1; c < n; ++c) q(r, c) -= s * std::conj(v[c]);
            }
        }
    }

    // Diagonal phases make the subdiagonal real and non-negative.
    std::vector<double> d(n), e(n, 0.0);
    std::vector<Complex> phi(n, Complex{1.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i).real();
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const Complex sub = a(i + 1, i);
        const double mag = std::abs(sub);
        e[i] = mag;
        phi[i + 1] = mag > 0.0 ? phi[i] * sub / mag : phi[i];
    }

    std::vector<double> z;
    if (vectors) {
        z.assign(n * n, 0.0);
        for (std::size_t i = 0; i < n; ++i) z[i * n + i] = 1.0;
    }
    tridiagonal_ql(d, e, vectors ? &z : nullptr);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return d[x] > d[y]; });

    EigenSystem out;
    out.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) out.values[k] = d[order[k]];
    if (vectors) {
        // W = Q Phi Z
        out.vectors = ComplexMatrix(n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t j = 0; j < n; ++j) {
                const Complex qp = q(r, j) * phi[j];
                for (std::size_t k = 0; k < n; ++k) out.vectors(r, k) += qp * z[j * n + order[k]];
            }
    }
    return out;
}

} // namespace qtime
