#include "qtime/tth.hpp"

#include <cmath>
#include <string>

#include "qtime/complexity.hpp"
#include "qtime/error.hpp"

namespace qtime {

ModularHamiltonian modular_hamiltonian(const DensityMatrix& rho) {
    const double smallest = rho.spectrum().values().back();
    if (!(smallest > 1e-12)) {
        throw Error("singular-state", "modular Hamiltonian needs a full-rank state (smallest eigenvalue " +
                                          std::to_string(smallest) + ")");
    }
    const HermitianOperator r(rho.matrix());
    return {HermitianOperator(matrix_function(r, std::function<double(double)>([](double x) { return -std::log(x); })))};
}

double complexity_norm_proxy(const HermitianOperator& h, double t) {
    if (!(t >= 0.0) || !std::isfinite(t)) throw Error("domain", "proxy time must be finite and non-negative");
    return operator_norm(h) * t;
}

ProxyReport proxy_report(const DensityMatrix& rho0, const HermitianOperator& h, const std::vector<double>& t_grid) {
    if (h.dim() != rho0.dim()) throw Error("dimension-mismatch", "Hamiltonian and state dimensions differ");
    const ComplexMatrix& m = rho0.matrix();
    for (std::size_t r = 0; r < m.dim(); ++r)
        for (std::size_t c = 0; c < m.dim(); ++c)
            if (r != c && std::abs(m(r, c)) > 1e-12) throw Error("not-diagonal", "initial state must be diagonal");
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!std::isfinite(t_grid[i]) || t_grid[i] < 0.0 || (i > 0 && t_grid[i] < t_grid[i - 1])) {
            throw Error("invalid-grid", "time grid must be finite, non-negative and ascending");
        }
    }
    ProxyReport report;
    const double norm = operator_norm(h);
    for (double t : t_grid) {
        const DensityMatrix rho = t == 0.0 ? rho0 : apply_operator(rho0, unitary_evolution(h, t), false);
        const double c = state_complexity(rho).value;
        report.rows.push_back({t, c, norm * t});
        if (!report.departure_time && c >= kDepartureThreshold) report.departure_time = t;
    }
    return report;
}

} // namespace qtime
