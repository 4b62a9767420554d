#include <numbers>

#include "qtime/experiments.hpp"
#include "qtime/linalg.hpp"
#include "qtime/pauli.hpp"
#include "qtime/tth.hpp"
#include "support.hpp"

using namespace qtime;
using qtime::testing::error_code_of;

namespace {

ComplexMatrix exp_of_negative(const ModularHamiltonian& mh) {
    return matrix_exp(HermitianOperator(mh.matrix.matrix() * Complex{-1.0, 0.0}));
}

} // namespace

TEST_SUITE("tth") {
    TEST_CASE("maximally mixed qubit") {
        const ModularHamiltonian mh = modular_hamiltonian(DensityMatrix::maximally_mixed(1));
        CHECK(max_abs_diff(mh.matrix.matrix(), ComplexMatrix::identity(2) * Complex{std::numbers::ln2, 0.0}) < 1e-15);
    }

    TEST_CASE("modular Hamiltonian exponentiates back to the state") {
        CounterRng rng(71, 0);
        for (int i = 0; i < 100; ++i) {
            const DensityMatrix rho = qtime::testing::random_state(1 + i % 3, rng);
            CHECK(max_abs_diff(exp_of_negative(modular_hamiltonian(rho)), rho.matrix()) < 1e-8);
        }
    }

    TEST_CASE("thermal states have modular Hamiltonian beta H plus ln Z") {
        CounterRng rng(72, 0);
        const HermitianOperator h = sample_local_hamiltonian(2, rng);
        for (double beta : {0.1, 1.0, 5.0}) {
            double z = 0.0;
            for (double e : hermitian_eigenvalues(h.matrix())) z += std::exp(-beta * e);
            const ComplexMatrix expected =
                h.matrix() * Complex{beta, 0.0} + ComplexMatrix::identity(4) * Complex{std::log(z), 0.0};
            CHECK(max_abs_diff(modular_hamiltonian(thermal_state(beta, h)).matrix.matrix(), expected) < 1e-10);
        }
    }

    TEST_CASE("singular states have no modular Hamiltonian") {
        CHECK(error_code_of([] { modular_hamiltonian(DensityMatrix::diagonal(std::vector<double>{1.0, 0.0})); }) ==
              "singular-state");
    }

    TEST_CASE("norm proxy") {
        const HermitianOperator x(pauli_matrix(Pauli::X));
        for (double t : {0.0, 0.3, 1.7}) CHECK(complexity_norm_proxy(x, t) == doctest::Approx(t));
        const HermitianOperator two_z(pauli_matrix(Pauli::Z) * Complex{2.0, 0.0});
        CHECK(complexity_norm_proxy(two_z, 0.5) == doctest::Approx(1.0));
        CHECK(error_code_of([&] { complexity_norm_proxy(x, -0.1); }) == "domain");
    }

    TEST_CASE("complexity departs from zero under a non-commuting Hamiltonian") {
        const DensityMatrix rho0 = DensityMatrix::diagonal(std::vector<double>{0.8, 0.2});
        const ProxyReport report = proxy_report(rho0, HermitianOperator(pauli_matrix(Pauli::X)), uniform_grid(0.0, 0.5, 0.05));
        REQUIRE(report.rows.size() == 11);
        CHECK(report.rows[0].complexity == 0.0);
        for (std::size_t i = 1; i < 6; ++i) CHECK(report.rows[i].complexity > report.rows[i - 1].complexity);
        REQUIRE(report.departure_time.has_value());
        CHECK(*report.departure_time == doctest::Approx(0.05));
        CHECK(report.rows[3].proxy == doctest::Approx(0.15));
    }

    TEST_CASE("commuting Hamiltonians never depart") {
        const DensityMatrix rho0 = DensityMatrix::diagonal(std::vector<double>{0.8, 0.2});
        const ProxyReport report = proxy_report(rho0, HermitianOperator(pauli_matrix(Pauli::Z)), {0.0, 1.0, 2.0});
        CHECK_FALSE(report.departure_time.has_value());
    }

    TEST_CASE("report errors") {
        const HermitianOperator x(pauli_matrix(Pauli::X));
        const DensityMatrix plus(ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}});
        CHECK(error_code_of([&] { proxy_report(plus, x, {0.0, 1.0}); }) == "not-diagonal");
        CHECK(error_code_of([&] { proxy_report(DensityMatrix::maximally_mixed(1), x, {1.0, 0.5}); }) == "invalid-grid");
        CHECK(error_code_of([&] { proxy_report(DensityMatrix::maximally_mixed(1), x, {-1.0, 0.5}); }) == "invalid-grid");
    }
}
