// End-to-end acceptance checks. Usage: acceptance [criterion...]; with no
// arguments every criterion runs. One PASS/FAIL line per criterion.
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qtime/cli.hpp"
#include "qtime/complexity.hpp"
#include "qtime/error.hpp"
#include "qtime/experiments.hpp"
#include "qtime/linalg.hpp"
#include "qtime/pauli.hpp"
#include "qtime/relativity.hpp"
#include "qtime/tth.hpp"

using namespace qtime;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, double x) {
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, f, x);
    return buffer;
}

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::vector<double> ranks(const std::vector<double>& x) {
    std::vector<std::size_t> order(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
    std::vector<double> r(x.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
        for (std::size_t k = i; k <= j; ++k) r[order[k]] = 0.5 * static_cast<double>(i + j) + 1.0;
        i = j + 1;
    }
    return r;
}

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = ranks(x), ry = ranks(y);
    const double n = static_cast<double>(x.size());
    const double mean = (n + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (rx[i] - mean) * (ry[i] - mean);
        sxx += (rx[i] - mean) * (rx[i] - mean);
        syy += (ry[i] - mean) * (ry[i] - mean);
    }
    return sxy / std::sqrt(sxx * syy);
}

DensityMatrix random_state(std::size_t n_qubits, CounterRng& rng) {
    const std::size_t dim = std::size_t{1} << n_qubits;
    ComplexMatrix g(dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) g(r, c) = Complex{rng.normal(), rng.normal()};
    const ComplexMatrix m = g * g.adjoint();
    return DensityMatrix(m * Complex{1.0 / m.trace().real(), 0.0});
}

ComplexMatrix random_sl2c(CounterRng& rng) {
    ComplexMatrix m{{Complex{rng.normal(), rng.normal()}, Complex{rng.normal(), rng.normal()}},
                    {Complex{rng.normal(), rng.normal()}, Complex{rng.normal(), rng.normal()}}};
    return m * (Complex{1.0, 0.0} / std::sqrt(m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)));
}

double lorentz_diff(const LorentzMatrix& a, const LorentzMatrix& b) {
    double err = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) err = std::max(err, std::abs(a.entries[i][j] - b.entries[i][j]));
    return err;
}

Outcome complexity_suite() {
    Outcome out;
    Stopwatch clock;
    CounterRng rng(1001, 0);
    double worst_diagonal = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t dim = std::size_t{2} << (i % 3);
        std::vector<double> p(dim);
        double sum = 0.0;
        for (double& x : p) sum += (x = rng.uniform());
        for (double& x : p) x /= sum;
        worst_diagonal = std::max(worst_diagonal, state_complexity(DensityMatrix::diagonal(p)).value);
    }
    out.require(worst_diagonal <= 1e-8, "diagonal complexity " + fmt("%.3g", worst_diagonal));

    const DensityMatrix plus(ComplexMatrix{{0.5, 0.5}, {0.5, 0.5}});
    const double plus_err = std::abs(state_complexity(plus).value - std::sqrt(2.0 - std::sqrt(2.0)));
    out.require(plus_err <= 1e-9, "plus-state error " + fmt("%.3g", plus_err));

    double worst_oracle = 0.0;
    for (int i = 0; i < 200; ++i) {
        const DensityMatrix rho = random_state(1 + i % 2, rng);
        double brute = 2.0;
        for (const DensityMatrix& c : diagonal_candidates(rho.spectrum())) brute = std::min(brute, bures_distance(rho, c));
        worst_oracle = std::max(worst_oracle, std::abs(state_complexity(rho).value - brute));
    }
    out.require(worst_oracle <= 1e-12, "oracle mismatch " + fmt("%.3g", worst_oracle));
    const double t = clock.seconds();
    out.require(t < 30.0, "runtime " + fmt("%.1f s", t));
    out.note("max diagonal C " + fmt("%.2g", worst_diagonal) + ", plus error " + fmt("%.2g", plus_err) +
             ", max oracle gap " + fmt("%.2g", worst_oracle) + ", " + fmt("%.2f s", t));
    return out;
}

Outcome lorentz_suite() {
    Outcome out;
    Stopwatch clock;
    CounterRng rng(1002, 0);
    double hom = 0.0, metric = 0.0, cov = 0.0;
    for (int i = 0; i < 100; ++i) {
        const ComplexMatrix a = random_sl2c(rng), b = random_sl2c(rng);
        const LorentzMatrix la = lorentz_of(a);
        hom = std::max(hom, lorentz_diff(lorentz_of(a * b), la * lorentz_of(b)));
        metric = std::max(metric, metric_error(la));
        const ComplexMatrix m = random_state(1, rng).matrix();
        const auto lhs = four_vector_of(a * m * a.adjoint()).components;
        const auto rhs = apply(la, four_vector_of(m)).components;
        for (std::size_t mu = 0; mu < 4; ++mu) cov = std::max(cov, std::abs(lhs[mu] - rhs[mu]));
    }
    out.require(hom <= 1e-8, "homomorphism " + fmt("%.3g", hom));
    out.require(metric <= 1e-8, "metric " + fmt("%.3g", metric));
    out.require(cov <= 1e-8, "covariance " + fmt("%.3g", cov));

    double boost = 0.0;
    for (double theta : {0.1, 0.5, 1.0, 2.0}) {
        LorentzMatrix expected;
        expected.entries[0][0] = expected.entries[1][1] = std::cosh(theta);
        expected.entries[0][1] = expected.entries[1][0] = std::sinh(theta);
        expected.entries[2][2] = expected.entries[3][3] = 1.0;
        const ComplexMatrix m = matrix_exp(HermitianOperator(pauli_matrix(Pauli::X) * Complex{theta / 2, 0.0}));
        boost = std::max(boost, lorentz_diff(lorentz_of(m), expected));
    }
    out.require(boost <= 1e-9, "x boost " + fmt("%.3g", boost));
    const double t = clock.seconds();
    out.require(t < 5.0, "runtime " + fmt("%.1f s", t));
    out.note("homomorphism " + fmt("%.2g", hom) + ", metric " + fmt("%.2g", metric) + ", covariance " +
             fmt("%.2g", cov) + ", boost " + fmt("%.2g", boost) + ", " + fmt("%.2f s", t));
    return out;
}

Outcome two_qubit_trend() {
    Outcome out;
    Stopwatch clock;
    TwoQubitConfig cfg;
    cfg.theta_grid = {0.0, 0.5, 1.0, 1.5, 2.0};
    const auto rows = run_two_qubit_sweep(cfg);

    std::vector<double> thetas, mean_rates;
    for (double theta : cfg.theta_grid) {
        std::vector<double> c;
        for (const TwoQubitRow& r : rows)
            if (r.family == Family::Boost && r.theta == theta) c.push_back(r.complexity);
        double sum = 0.0;
        for (std::size_t i = 0; i + 1 < c.size(); ++i)
            sum += std::abs(c[i + 1] - c[i]) / (cfg.tau_grid[i + 1] - cfg.tau_grid[i]);
        thetas.push_back(theta);
        mean_rates.push_back(sum / static_cast<double>(c.size() - 1));
    }
    bool strict = true;
    for (std::size_t i = 0; i + 1 < mean_rates.size(); ++i) strict = strict && mean_rates[i + 1] < mean_rates[i];
    const double rho = spearman(thetas, mean_rates);
    out.require(strict && rho == -1.0, "boost rates not strictly decreasing");

    const DensityMatrix rho0 = build_initial_state(cfg);
    double spectrum_err = 0.0;
    for (double theta : cfg.theta_grid)
        for (double tau : cfg.tau_grid) {
            const DensityMatrix state = evolve_two_qubit(rho0, tau);
            const DensityMatrix rotated = transform_state(state, family_transform(Family::Rotation, cfg.axis, theta));
            for (std::size_t i = 0; i < 4; ++i)
                spectrum_err = std::max(spectrum_err,
                                        std::abs(rotated.spectrum().values()[i] - state.spectrum().values()[i]));
        }
    out.require(spectrum_err <= 1e-9, "rotation spectrum drift " + fmt("%.3g", spectrum_err));
    const double t = clock.seconds();
    out.require(t < 60.0, "runtime " + fmt("%.1f s", t));
    std::string rates;
    for (double r : mean_rates) rates += (rates.empty() ? "" : " ") + fmt("%.4f", r);
    out.note("boost mean |dC/dtau| [" + rates + "], Spearman " + fmt("%.3f", rho) + ", spectrum drift " +
             fmt("%.2g", spectrum_err) + ", " + fmt("%.2f s", t));
    return out;
}

std::vector<double> column(const EnsembleResult& r, TransformKind kind) {
    std::vector<double> out;
    for (const EnsemblePoint& p : r.points)
        if (p.kind == kind) out.push_back(p.estimate.ratio_of_mean);
    return out;
}

Outcome sr_ensemble() {
    Outcome out;
    Stopwatch clock;
    for (std::size_t n = 1; n <= 3; ++n) {
        EnsembleConfig cfg = default_sr_config();
        cfg.n_qubits = n;
        const EnsembleResult r = run_sr_ensemble(cfg);
        const auto boost = column(r, TransformKind::Boost);
        const auto rotation = column(r, TransformKind::Rotation);
        const double rho = spearman(cfg.parameter_grid, boost);
        const std::string tag = "n=" + std::to_string(n) + " ";
        out.require(boost.front() <= 1.0 + 1e-12 && boost.front() == 1.0, tag + "boost at theta=0 " + fmt("%.17g", boost.front()));
        out.require(rho <= -0.9, tag + "boost Spearman " + fmt("%.3f", rho));
        for (std::size_t i = 0; i < cfg.parameter_grid.size(); ++i)
            if (cfg.parameter_grid[i] >= 0.5 - 1e-12)
                out.require(rotation[i] > boost[i], tag + "rotation not above boost at theta=" + fmt("%g", cfg.parameter_grid[i]));
        out.note(tag + "Spearman " + fmt("%.3f", rho) + ", boost ratio at theta=2 " + fmt("%.4f", boost.back()));
    }
    const double t = clock.seconds();
    out.require(t < 900.0, "runtime " + fmt("%.0f s", t));
    out.note(fmt("%.1f s", t));
    return out;
}

Outcome gr_ensemble() {
    Outcome out;
    Stopwatch clock;
    for (std::size_t n = 1; n <= 3; ++n) {
        EnsembleConfig cfg = default_gr_config();
        cfg.n_qubits = n;
        const EnsembleResult r = run_gr_ensemble(cfg);
        const auto gravity = column(r, TransformKind::Gravity);
        const double rho = spearman(cfg.parameter_grid, gravity);
        const std::string tag = "n=" + std::to_string(n) + " ";
        out.require(gravity.front() == 1.0, tag + "ratio at beta=0 " + fmt("%.17g", gravity.front()));
        out.require(rho <= -0.9, tag + "Spearman " + fmt("%.3f", rho));
        out.note(tag + "Spearman " + fmt("%.3f", rho) + ", ratio at beta=1 " + fmt("%.4f", gravity.back()));
    }
    const double t = clock.seconds();
    out.require(t < 600.0, "runtime " + fmt("%.0f s", t));
    out.note(fmt("%.1f s", t));
    return out;
}

Outcome thermodynamics() {
    Outcome out;
    TwoQubitConfig cfg;
    const DensityMatrix rho0 = build_initial_state(cfg);
    double worst = 0.0;
    for (double tau : cfg.tau_grid) {
        const HeatFlow q = heat_flow(evolve_two_qubit(rho0, tau), rho0);
        worst = std::max(worst, std::abs(q.q_a + q.q_b));
    }
    out.require(worst <= 1e-10, "heat imbalance " + fmt("%.3g", worst));

    int probes = 0;
    for (double beta_a : {0.0, 0.5, 1.0, 3.0})
        for (double beta_b : {0.2, 2.0})
            for (double phase : {0.0, 1.0, std::numbers::pi}) {
                TwoQubitConfig c;
                c.beta_a = beta_a;
                c.beta_b = beta_b;
                const double bound = correlation_bound(c);
                for (double offset : {-1e-6, 1e-6}) {
                    c.alpha = std::polar(bound + offset, phase);
                    bool rejected = false;
                    try {
                        build_initial_state(c);
                    } catch (const Error& e) {
                        rejected = e.code() == "correlation-too-large";
                    }
                    ++probes;
                    out.require(rejected == (offset > 0.0),
                                "boundary misclassified at beta_a=" + fmt("%g", beta_a) + " beta_b=" + fmt("%g", beta_b));
                }
            }
    out.note("max |Q_A+Q_B| " + fmt("%.2g", worst) + ", " + std::to_string(probes) + " boundary probes");
    return out;
}

Outcome tth_suite() {
    Outcome out;
    CounterRng rng(1007, 0);
    double worst_exp = 0.0;
    for (int i = 0; i < 100; ++i) {
        const DensityMatrix rho = random_state(1 + i % 3, rng);
        const ModularHamiltonian mh = modular_hamiltonian(rho);
        const ComplexMatrix back = matrix_exp(HermitianOperator(mh.matrix.matrix() * Complex{-1.0, 0.0}));
        worst_exp = std::max(worst_exp, max_abs_diff(back, rho.matrix()));
    }
    out.require(worst_exp <= 1e-8, "exp(-H) error " + fmt("%.3g", worst_exp));

    double worst_linear = 0.0;
    for (std::size_t n = 1; n <= 3; ++n) {
        const HermitianOperator h = sample_local_hamiltonian(n, rng);
        for (double beta : {0.1, 1.0, 5.0}) {
            const ComplexMatrix diff =
                modular_hamiltonian(thermal_state(beta, h)).matrix.matrix() - h.matrix() * Complex{beta, 0.0};
            const Complex shift = diff.trace() / static_cast<double>(diff.dim());
            worst_linear = std::max(worst_linear, max_abs_diff(diff, ComplexMatrix::identity(diff.dim()) * shift));
        }
    }
    out.require(worst_linear <= 1e-9, "thermal linearity " + fmt("%.3g", worst_linear));
    out.note("max exp error " + fmt("%.2g", worst_exp) + ", max off-identity residual " + fmt("%.2g", worst_linear));
    return out;
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome reproducibility() {
    Outcome out;
    const std::map<cli::Subcommand, std::string> configs{
        {cli::Subcommand::TwoQubit, R"({"seed": 11})"},
        {cli::Subcommand::SrEnsemble, R"({"seed": 12, "n_qubits": 2, "k_samples": 50, "threads": 2})"},
        {cli::Subcommand::GrEnsemble, R"({"seed": 13, "n_qubits": 3, "k_samples": 10})"},
        {cli::Subcommand::TthCheck, R"({"seed": 14, "n_qubits": 2})"}};
    const auto base = std::filesystem::temp_directory_path() / "qtime_acceptance_repro";
    std::filesystem::remove_all(base);
    int compared = 0;
    for (const auto& [sub, text] : configs) {
        std::vector<std::filesystem::path> dirs;
        for (int run = 0; run < 2; ++run) {
            cli::RunConfig cfg = cli::parse_config(sub, text);
            cfg.output_dir = base / (cli::to_string(sub) + "_" + std::to_string(run));
            cfg.emit_svg = true;
            std::ostringstream log;
            const int code = cli::run(cfg, log);
            out.require(code == cli::kExitSuccess, cli::to_string(sub) + " exit " + std::to_string(code) + " " + log.str());
            dirs.push_back(cfg.output_dir);
        }
        for (const auto& entry : std::filesystem::directory_iterator(dirs[0])) {
            const std::string name = entry.path().filename().string();
            std::string a = read_file(dirs[0] / name), b = read_file(dirs[1] / name);
            if (name == "manifest.json") {
                auto ja = nlohmann::json::parse(a), jb = nlohmann::json::parse(b);
                for (auto* j : {&ja, &jb}) {
                    j->erase("started_at");
                    j->erase("finished_at");
                }
                a = ja.dump();
                b = jb.dump();
            }
            ++compared;
            out.require(a == b, cli::to_string(sub) + "/" + name + " differs");
        }
    }
    out.require(compared == 12, "expected 12 files, compared " + std::to_string(compared));
    out.note(std::to_string(compared) + " files compared across 4 subcommands");
    return out;
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"complexity metric suite", complexity_suite},
        {"Lorentz correspondence suite", lorentz_suite},
        {"two-qubit boost smearing", two_qubit_trend},
        {"special-relativity ensemble", sr_ensemble},
        {"gravity ensemble", gr_ensemble},
        {"two-qubit thermodynamics", thermodynamics},
        {"thermal time suite", tth_suite},
        {"reproducibility", reproducibility}};

    std::vector<std::size_t> selected;
    for (int i = 1; i < argc; ++i) {
        const int k = std::atoi(argv[i]);
        if (k < 1 || k > static_cast<int>(criteria.size())) {
            std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
            return 2;
        }
        selected.push_back(static_cast<std::size_t>(k));
    }
    if (selected.empty())
        for (std::size_t k = 1; k <= criteria.size(); ++k) selected.push_back(k);

    bool all = true;
    for (std::size_t k : selected) {
        Outcome o;
        try {
            o = criteria[k - 1].second();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        all = all && o.pass;
        std::printf("criterion %zu (%s): %s - %s\n", k, criteria[k - 1].first.c_str(), o.pass ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
