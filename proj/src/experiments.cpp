#include "qtime/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include "qtime/error.hpp"
#include "qtime/linalg.hpp"
#include "qtime/pauli.hpp"

namespace qtime {

std::vector<double> uniform_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
        throw Error("invalid-grid", "grid needs finite bounds and a positive step");
    }
    std::vector<double> out;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    for (std::size_t i = 0; i <= count; ++i) {
        // Snap to 12 decimals so 0.1 * 3 prints as 0.3.
        out.push_back(std::round((start + static_cast<double>(i) * step) * 1e12) / 1e12);
    }
    return out;
}

// ---------------------------------------------------------------------------

std::string to_string(Family family) { return family == Family::Rotation ? "rotation" : "boost"; }

Family parse_family(const std::string& text) {
    if (text == "rotation") return Family::Rotation;
    if (text == "boost") return Family::Boost;
    throw Error("unknown-family", "unknown family '" + text + "'");
}

TwoQubitConfig::TwoQubitConfig()
    : tau_grid(uniform_grid(0.0, 1.0, 0.02)), theta_grid(uniform_grid(0.0, 2.0, 0.5)) {}

const ComplexMatrix& local_qubit_hamiltonian() {
    static const ComplexMatrix h{{0.0, 0.0}, {0.0, 1.0}};
    return h;
}

namespace {

DensityMatrix local_thermal(double beta) { return thermal_state(beta, HermitianOperator(local_qubit_hamiltonian())); }

} // namespace

double correlation_bound(const TwoQubitConfig& cfg) {
    const DensityMatrix a = local_thermal(cfg.beta_a);
    const DensityMatrix b = local_thermal(cfg.beta_b);
    const double a0 = a.matrix()(0, 0).real(), a1 = a.matrix()(1, 1).real();
    const double b0 = b.matrix()(0, 0).real(), b1 = b.matrix()(1, 1).real();
    return std::sqrt(a0 * b1 * a1 * b0);
}

DensityMatrix build_initial_state(const TwoQubitConfig& cfg) {
    if (!std::isfinite(cfg.beta_a) || !std::isfinite(cfg.beta_b) || cfg.beta_a < 0.0 || cfg.beta_b < 0.0) {
        throw Error("domain", "inverse temperatures must be finite and non-negative");
    }
    const double bound = correlation_bound(cfg);
    if (std::abs(cfg.alpha) > bound) {
        throw Error("correlation-too-large",
                    "|alpha| = " + std::to_string(std::abs(cfg.alpha)) + " exceeds the bound " + std::to_string(bound));
    }
    ComplexMatrix m = tensor(local_thermal(cfg.beta_a).matrix(), local_thermal(cfg.beta_b).matrix());
    m(1, 2) += cfg.alpha;
    m(2, 1) += std::conj(cfg.alpha);
    return DensityMatrix(m);
}

const HermitianOperator& exchange_hamiltonian() {
    static const HermitianOperator h(
        (PauliString::parse("XY").matrix() - PauliString::parse("YX").matrix()) * Complex{std::numbers::pi / 2.0, 0.0});
    return h;
}

DensityMatrix evolve_two_qubit(const DensityMatrix& rho, double tau) {
    if (rho.n_qubits() != 2) throw Error("invalid-dimension", "two-qubit evolution needs a two-qubit state");
    if (tau == 0.0) return rho;
    return apply_operator(rho, unitary_evolution(exchange_hamiltonian(), tau), false);
}

HeatFlow heat_flow(const DensityMatrix& rho_tau, const DensityMatrix& reference) {
    if (rho_tau.n_qubits() != 2 || reference.n_qubits() != 2) {
        throw Error("invalid-dimension", "heat flow needs two-qubit states");
    }
    auto energy = [](const DensityMatrix& rho, std::size_t qubit) {
        const std::size_t keep[1] = {qubit};
        return (local_qubit_hamiltonian() * partial_trace(rho, keep).matrix()).trace().real();
    };
    return {energy(rho_tau, 0) - energy(reference, 0), energy(rho_tau, 1) - energy(reference, 1)};
}

TransformSpec family_transform(Family family, Axis axis, double theta) {
    TransformSpec spec;
    spec.axis = axis;
    spec.parameter = theta;
    if (family == Family::Rotation) {
        spec.kind = TransformKind::Rotation;
        spec.lift = LiftMode::Uniform;
    } else {
        spec.kind = TransformKind::Boost;
        spec.lift = LiftMode::OppositeSign;
    }
    return spec;
}

std::vector<TwoQubitRow> run_two_qubit_sweep(const TwoQubitConfig& cfg) {
    for (std::size_t i = 1; i < cfg.tau_grid.size(); ++i)
        if (!(cfg.tau_grid[i] >= cfg.tau_grid[i - 1])) throw Error("invalid-grid", "tau grid must be ascending");
    for (std::size_t i = 1; i < cfg.theta_grid.size(); ++i)
        if (!(cfg.theta_grid[i] >= cfg.theta_grid[i - 1])) throw Error("invalid-grid", "theta grid must be ascending");

    const DensityMatrix rho0 = build_initial_state(cfg);
    std::vector<DensityMatrix> evolved;
    std::vector<HeatFlow> heat;
    for (double tau : cfg.tau_grid) {
        evolved.push_back(evolve_two_qubit(rho0, tau));
        heat.push_back(heat_flow(evolved.back(), rho0));
    }

    std::vector<TwoQubitRow> rows;
    for (Family family : cfg.families) {
        for (double theta : cfg.theta_grid) {
            const TransformSpec spec = family_transform(family, cfg.axis, theta);
            const ComplexMatrix lifted = lift_operator(spec, 2);
            for (std::size_t t = 0; t < cfg.tau_grid.size(); ++t) {
                const double c = state_complexity(transform_state(evolved[t], spec, lifted)).value;
                rows.push_back({family, theta, cfg.tau_grid[t], c, heat[t].q_a, heat[t].q_b});
            }
        }
    }
    return rows;
}

// ---------------------------------------------------------------------------

ComplexMatrix sample_haar_qubit_unitary(CounterRng& rng) {
    // A uniformly random unit quaternion is a Haar-random element of SU(2).
    double q[4];
    double norm = 0.0;
    do {
        norm = 0.0;
        for (double& x : q) {
            x = rng.normal();
            norm += x * x;
        }
    } while (norm < 1e-300);
    norm = std::sqrt(norm);
    const Complex a{q[0] / norm, q[1] / norm};
    const Complex b{q[2] / norm, q[3] / norm};
    return ComplexMatrix{{a, -std::conj(b)}, {b, std::conj(a)}};
}

DensityMatrix sample_low_complexity_state(std::size_t n_qubits, std::size_t depth, CounterRng& rng) {
    if (n_qubits < 1) throw Error("invalid-dimension", "need at least one qubit");
    const std::size_t dim = std::size_t{1} << n_qubits;

    // Spacings of sorted uniforms are uniform on the probability simplex.
    std::vector<double> cuts(dim - 1);
    for (double& c : cuts) c = rng.uniform();
    std::sort(cuts.begin(), cuts.end());
    std::vector<double> probabilities(dim);
    double previous = 0.0;
    for (std::size_t i = 0; i + 1 < dim; ++i) {
        probabilities[i] = cuts[i] - previous;
        previous = cuts[i];
    }
    probabilities[dim - 1] = 1.0 - previous;

    ComplexMatrix rho = ComplexMatrix::diagonal(probabilities);
    for (std::size_t layer = 0; layer < depth; ++layer) {
        ComplexMatrix v = sample_haar_qubit_unitary(rng);
        for (std::size_t q = 1; q < n_qubits; ++q) v = tensor(v, sample_haar_qubit_unitary(rng));
        rho = hermitian_part(v * rho * v.adjoint());
    }
    return DensityMatrix(rho);
}

HermitianOperator sample_local_hamiltonian(std::size_t n_qubits, CounterRng& rng, const HamiltonianWeights& weights) {
    if (n_qubits < 1) throw Error("invalid-dimension", "need at least one qubit");
    static const Pauli axes[3] = {Pauli::X, Pauli::Y, Pauli::Z};
    const std::size_t dim = std::size_t{1} << n_qubits;
    ComplexMatrix h(dim);
    for (std::size_t site = 0; site < n_qubits; ++site)
        for (Pauli a : axes) h += embed(pauli_matrix(a), site, n_qubits) * Complex{weights.single_site * rng.normal(), 0.0};
    for (std::size_t site = 0; site + 1 < n_qubits; ++site)
        for (Pauli a : axes)
            for (Pauli b : axes) {
                const ComplexMatrix pair = embed(pauli_matrix(a), site, n_qubits) * embed(pauli_matrix(b), site + 1, n_qubits);
                h += pair * Complex{weights.nearest_neighbor * rng.normal(), 0.0};
            }
    const double norm = operator_norm(HermitianOperator(h));
    if (!(norm > 0.0)) throw Error("domain", "sampled Hamiltonian vanished");
    return HermitianOperator(h * Complex{1.0 / norm, 0.0});
}

std::string to_string(PaceStatistic statistic) {
    return statistic == PaceStatistic::Magnitude ? "magnitude" : "signed";
}

PaceStatistic parse_pace_statistic(const std::string& text) {
    if (text == "magnitude") return PaceStatistic::Magnitude;
    if (text == "signed") return PaceStatistic::Signed;
    throw Error("unknown-statistic", "unknown pace statistic '" + text + "'");
}

EnsembleConfig default_sr_config() {
    EnsembleConfig cfg;
    cfg.k_samples = 2000;
    cfg.parameter_grid = uniform_grid(0.0, 2.0, 0.25);
    cfg.kinds = {TransformKind::Rotation, TransformKind::Boost};
    return cfg;
}

EnsembleConfig default_gr_config() {
    EnsembleConfig cfg;
    cfg.k_samples = 1000;
    cfg.parameter_grid = uniform_grid(0.0, 1.0, 0.1);
    cfg.kinds = {TransformKind::Gravity};
    return cfg;
}

EstimatorResult estimators(std::span<const PacePair> samples) {
    if (samples.empty()) throw Error("degenerate-ensemble", "no samples");
    EstimatorResult out;
    double sum_v = 0.0, sum_v_bar = 0.0;
    double mean = 0.0, m2 = 0.0;
    for (const PacePair& s : samples) {
        sum_v += s.v;
        sum_v_bar += s.v_bar;
        if (std::abs(s.v) < kDiscardThreshold) {
            ++out.discarded;
            continue;
        }
        // Welford update keeps the variance stable for large K.
        const double r = s.v_bar / s.v;
        ++out.k_effective;
        const double delta = r - mean;
        mean += delta / static_cast<double>(out.k_effective);
        m2 += delta * (r - mean);
    }
    if (out.k_effective == 0) throw Error("degenerate-ensemble", "every sample was discarded");
    if (std::abs(sum_v) < 1e-12) throw Error("zero-denominator", "sum of intrinsic paces vanishes");
    out.mean_of_ratio = mean;
    out.ratio_of_mean = sum_v_bar / sum_v;
    if (out.k_effective > 1) {
        const auto k = static_cast<double>(out.k_effective);
        out.stderr_ratio = std::sqrt(m2 / (k - 1.0) / k);
    }
    return out;
}

namespace {

void validate(const EnsembleConfig& cfg) {
    if (cfg.n_qubits < 1 || cfg.n_qubits > 3) throw Error("invalid-config", "n_qubits must be 1, 2 or 3");
    if (cfg.k_samples < 1) throw Error("invalid-config", "k_samples must be positive");
    if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw Error("invalid-config", "dt must be positive");
    if (cfg.parameter_grid.empty()) throw Error("invalid-grid", "parameter grid is empty");
    for (std::size_t i = 0; i < cfg.parameter_grid.size(); ++i) {
        if (!std::isfinite(cfg.parameter_grid[i]) || (i > 0 && cfg.parameter_grid[i] < cfg.parameter_grid[i - 1])) {
            throw Error("invalid-grid", "parameter grid must be finite and ascending");
        }
    }
    if (cfg.kinds.empty()) throw Error("invalid-config", "no transform kinds");
}

double pace_value(double c0, double c1, const EnsembleConfig& cfg) {
    const double v = (c1 - c0) / cfg.dt;
    return cfg.pace_statistic == PaceStatistic::Magnitude ? std::abs(v) : v;
}

} // namespace

SampleRecord run_ensemble_sample(const EnsembleConfig& cfg, std::size_t sample_index,
                                 const std::vector<TransformSpec>& transforms,
                                 const std::vector<ComplexMatrix>& lifted) {
    CounterRng rng(cfg.seed, sample_index);
    const DensityMatrix rho0 = sample_low_complexity_state(cfg.n_qubits, cfg.state_depth, rng);
    const HermitianOperator h = sample_local_hamiltonian(cfg.n_qubits, rng, cfg.hamiltonian);
    const DensityMatrix rho1 = apply_operator(rho0, unitary_evolution(h, cfg.dt), false);

    const ComplexityWitness w0 = complexity_search(rho0);
    const ComplexityWitness w1 = complexity_search(rho1, w0.diagonal);

    SampleRecord record;
    record.sample_index = sample_index;
    record.v = pace_value(w0.complexity.value, w1.complexity.value, cfg);
    record.discarded = std::abs(record.v) < kDiscardThreshold;
    record.v_bar.reserve(transforms.size());

    // Witnesses of neighbouring grid points seed the search for the next one.
    std::vector<double> hint = w0.diagonal;
    for (std::size_t t = 0; t < transforms.size(); ++t) {
        // The identity, and any diagonal unitary applied as a unitary, leave
        // both complexities unchanged, so the pace carries over exactly.
        const bool unitary = transforms[t].kind == TransformKind::Rotation;
        if (is_exact_identity(lifted[t]) || (unitary && preserves_complexity(lifted[t]))) {
            record.v_bar.push_back(record.v);
            continue;
        }
        if (t > 0 && transforms[t].kind != transforms[t - 1].kind) hint = w0.diagonal;
        const ComplexityWitness t0 = complexity_search(transform_state(rho0, transforms[t], lifted[t]), hint);
        const ComplexityWitness t1 = complexity_search(transform_state(rho1, transforms[t], lifted[t]), t0.diagonal);
        record.v_bar.push_back(pace_value(t0.complexity.value, t1.complexity.value, cfg));
        hint = t0.diagonal;
    }
    return record;
}

EnsembleResult run_ensemble(const EnsembleConfig& cfg) {
    validate(cfg);
    std::vector<TransformSpec> transforms;
    std::vector<ComplexMatrix> lifted;
    for (TransformKind kind : cfg.kinds) {
        for (double p : cfg.parameter_grid) {
            TransformSpec spec;
            spec.kind = kind;
            spec.axis = cfg.axis;
            spec.parameter = p;
            spec.lift = LiftMode::Uniform;
            transforms.push_back(spec);
            lifted.push_back(lift_operator(spec, cfg.n_qubits));
        }
    }

    // Each sample owns its random stream and its output slot, so the split
    // across threads cannot influence any value.
    std::vector<SampleRecord> records(cfg.k_samples);
    const std::size_t threads = std::clamp<std::size_t>(cfg.threads, 1, cfg.k_samples);
    auto work = [&](std::size_t first) {
        for (std::size_t k = first; k < cfg.k_samples; k += threads)
            records[k] = run_ensemble_sample(cfg, k, transforms, lifted);
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::exception_ptr> errors(threads);
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < threads; ++t) {
            pool.emplace_back([&, t] {
                try {
                    work(t);
                } catch (...) {
                    errors[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }

    EnsembleResult result;
    result.n_qubits = cfg.n_qubits;
    result.k_samples = cfg.k_samples;
    std::vector<PacePair> pairs(cfg.k_samples);
    for (std::size_t t = 0; t < transforms.size(); ++t) {
        for (std::size_t k = 0; k < cfg.k_samples; ++k) pairs[k] = {records[k].v, records[k].v_bar[t]};
        result.points.push_back({transforms[t].kind, transforms[t].parameter, estimators(pairs)});
    }
    return result;
}

EnsembleResult run_sr_ensemble(const EnsembleConfig& cfg) {
    for (TransformKind kind : cfg.kinds)
        if (kind != TransformKind::Rotation && kind != TransformKind::Boost)
            throw Error("kind-not-allowed", "special-relativity ensembles accept rotation and boost only");
    return run_ensemble(cfg);
}

EnsembleResult run_gr_ensemble(const EnsembleConfig& cfg) {
    for (TransformKind kind : cfg.kinds)
        if (kind != TransformKind::Gravity)
            throw Error("kind-not-allowed", "gravity ensembles accept the gravity kind only");
    return run_ensemble(cfg);
}

} // namespace qtime
