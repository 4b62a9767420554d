#include <numbers>

#include "qtime/linalg.hpp"
#include "qtime/matrix.hpp"
#include "qtime/pauli.hpp"
#include "support.hpp"

using namespace qtime;
using qtime::testing::error_code_of;

TEST_SUITE("matrix") {
    TEST_CASE("tensor follows the first-factor-most-significant convention") {
        const ComplexMatrix zx = tensor(pauli_matrix(Pauli::Z), pauli_matrix(Pauli::X));
        CHECK(zx(0, 1) == Complex{1.0, 0.0});
        CHECK(zx(2, 3) == Complex{-1.0, 0.0});
        CHECK(zx(0, 2) == Complex{0.0, 0.0});
    }

    TEST_CASE("hermiticity error and hermitian part") {
        ComplexMatrix m{{1.0, Complex{0.0, 1.0}}, {Complex{0.0, 1.0}, 2.0}};
        CHECK(hermiticity_error(m) == doctest::Approx(2.0));
        CHECK(hermiticity_error(hermitian_part(m)) == 0.0);
    }

    TEST_CASE("exact identity check") {
        CHECK(is_exact_identity(ComplexMatrix::identity(4)));
        ComplexMatrix near = ComplexMatrix::identity(4);
        near(1, 2) = 1e-300;
        CHECK_FALSE(is_exact_identity(near));
    }
}

TEST_SUITE("pauli") {
    TEST_CASE("pauli algebra") {
        const ComplexMatrix& x = pauli_matrix(Pauli::X);
        const ComplexMatrix& y = pauli_matrix(Pauli::Y);
        const ComplexMatrix& z = pauli_matrix(Pauli::Z);
        CHECK(max_abs_diff(x * y, z * Complex{0.0, 1.0}) == 0.0);
        CHECK(max_abs_diff(x * x, ComplexMatrix::identity(2)) == 0.0);
    }

    TEST_CASE("strings parse into tensor products") {
        const ComplexMatrix m = PauliString::parse("XZ", 2.0).matrix();
        CHECK(max_abs_diff(m, tensor(pauli_matrix(Pauli::X), pauli_matrix(Pauli::Z)) * Complex{2.0, 0.0}) == 0.0);
        CHECK_THROWS(PauliString::parse("XQ"));
    }

    TEST_CASE("embed places an operator on one site") {
        const ComplexMatrix e = embed(pauli_matrix(Pauli::Z), 1, 3);
        const ComplexMatrix expected =
            tensor(tensor(ComplexMatrix::identity(2), pauli_matrix(Pauli::Z)), ComplexMatrix::identity(2));
        CHECK(max_abs_diff(e, expected) == 0.0);
    }
}

TEST_SUITE("linalg") {
    TEST_CASE("eigensystem of X") {
        const EigenSystem es = hermitian_eig(HermitianOperator(pauli_matrix(Pauli::X)));
        REQUIRE(es.values.size() == 2);
        CHECK(es.values[0] == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(es.values[1] == doctest::Approx(-1.0).epsilon(1e-14));
        const double s = std::numbers::sqrt2 / 2.0;
        CHECK(std::abs(std::abs(es.vectors(0, 0)) - s) < 1e-14);
        CHECK(std::abs(es.vectors(0, 0) - es.vectors(1, 0)) < 1e-14);
        CHECK(std::abs(es.vectors(0, 1) + es.vectors(1, 1)) < 1e-14);
    }

    TEST_CASE("product state spectrum") {
        const std::vector<double> pa{0.7, 0.3}, pb{0.9, 0.1};
        const ComplexMatrix m = tensor(ComplexMatrix::diagonal(pa), ComplexMatrix::diagonal(pb));
        const auto values = hermitian_eigenvalues(m);
        const std::vector<double> expected{0.63, 0.27, 0.07, 0.03};
        for (std::size_t i = 0; i < 4; ++i) CHECK(values[i] == doctest::Approx(expected[i]).epsilon(1e-14));
    }

    TEST_CASE("non-hermitian input is rejected") {
        ComplexMatrix m{{0.0, 1.0}, {0.0, 0.0}};
        CHECK(error_code_of([&] { HermitianOperator h(m); }) == "not-hermitian");
    }

    TEST_CASE("exponentials") {
        const HermitianOperator x(pauli_matrix(Pauli::X));
        CHECK(max_abs_diff(unitary_evolution(x, std::numbers::pi), ComplexMatrix::identity(2) * Complex{-1.0, 0.0}) <
              1e-14);
        for (double theta : {0.1, 1.0, 3.0}) {
            const ComplexMatrix expected = ComplexMatrix::identity(2) * Complex{std::cosh(theta / 2), 0.0} +
                                           pauli_matrix(Pauli::X) * Complex{std::sinh(theta / 2), 0.0};
            const ComplexMatrix got = matrix_exp(HermitianOperator(pauli_matrix(Pauli::X) * Complex{theta / 2, 0.0}));
            CHECK(max_abs_diff(got, expected) < 1e-13);
        }
    }

    TEST_CASE("sqrt and log invert their squares and exponentials") {
        CounterRng rng(11, 0);
        for (std::size_t n = 1; n <= 3; ++n) {
            const DensityMatrix rho = qtime::testing::random_state(n, rng);
            const ComplexMatrix root = matrix_sqrt(HermitianOperator(rho.matrix()));
            CHECK(max_abs_diff(root * root, rho.matrix()) < 1e-13);
            const ComplexMatrix log = matrix_log(HermitianOperator(rho.matrix()));
            CHECK(max_abs_diff(matrix_exp(HermitianOperator(hermitian_part(log))), rho.matrix()) < 1e-12);
        }
        CHECK(error_code_of([] { matrix_log(HermitianOperator(ComplexMatrix::diagonal(std::vector<double>{1.0, 0.0}))); }) ==
              "domain");
    }

    TEST_CASE("operator norm") {
        CHECK(operator_norm(HermitianOperator(pauli_matrix(Pauli::Z) * Complex{-3.0, 0.0})) == doctest::Approx(3.0));
    }

    TEST_CASE("tridiagonal solver agrees with Jacobi") {
        CounterRng rng(5, 1);
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t dim = std::size_t{2} << (trial % 3);
            ComplexMatrix g(dim);
            for (std::size_t r = 0; r < dim; ++r)
                for (std::size_t c = 0; c < dim; ++c) g(r, c) = Complex{rng.normal(), rng.normal()};
            const ComplexMatrix h = hermitian_part(g);
            const EigenSystem jacobi = hermitian_eig(HermitianOperator(h));
            const EigenSystem tri = hermitian_eig_tridiagonal(h);
            for (std::size_t i = 0; i < dim; ++i) CHECK(std::abs(jacobi.values[i] - tri.values[i]) < 1e-11);
            ComplexMatrix d(dim);
            for (std::size_t i = 0; i < dim; ++i) d(i, i) = tri.values[i];
            CHECK(max_abs_diff(tri.vectors * d * tri.vectors.adjoint(), h) < 1e-12);
            CHECK(max_abs_diff(tri.vectors.adjoint() * tri.vectors, ComplexMatrix::identity(dim)) < 1e-12);
        }
    }
}
