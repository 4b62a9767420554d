#pragma once

#include <optional>
#include <vector>

#include "qtime/linalg.hpp"
#include "qtime/state.hpp"

namespace qtime {

// H_rho = -ln(rho) for a full-rank state.
struct ModularHamiltonian {
    HermitianOperator matrix;
};

// Throws "singular-state" unless every eigenvalue exceeds 1e-12.
ModularHamiltonian modular_hamiltonian(const DensityMatrix& rho);

// ||h|| t with the operator norm; t must be non-negative.
double complexity_norm_proxy(const HermitianOperator& h, double t);

struct ProxyRow {
    double t = 0.0;
    double complexity = 0.0;
    double proxy = 0.0;
};

// C below this is treated as "still at the origin".
inline constexpr double kDepartureThreshold = 1e-3;

struct ProxyReport {
    std::vector<ProxyRow> rows;
    // First grid time with C >= kDepartureThreshold, if any.
    std::optional<double> departure_time;
};

// Paired series C(e^{-iht} rho0 e^{iht}) and ||h|| t over an ascending,
// non-negative grid. rho0 must be diagonal.
ProxyReport proxy_report(const DensityMatrix& rho0, const HermitianOperator& h, const std::vector<double>& t_grid);

} // namespace qtime
