#include <chrono>
#include <ctime>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>
#include <openssl/opensslv.h>

#include "qtime/cli.hpp"
#include "qtime/error.hpp"
#include "qtime/pauli.hpp"
#include "qtime/tth.hpp"

#ifndef QTIME_VERSION
#define QTIME_VERSION "0.0.0"
#endif

namespace qtime::cli {

using nlohmann::json;

namespace {

std::string utc_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buffer[32];
    std::strftime(buffer, sizeof buffer, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buffer;
}

struct OutputFile {
    std::string name;
    std::string digest;
};

class OutputWriter {
public:
    explicit OutputWriter(std::filesystem::path dir) : dir_(std::move(dir)) {}

    void write(const std::string& name, const std::string& content) {
        write_raw(name, content);
        files_.push_back({name, sha256_hex(content)});
    }

    void write_raw(const std::string& name, const std::string& content) const {
        std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
        out << content;
        out.close();
        if (!out) throw std::filesystem::filesystem_error("cannot write", dir_ / name, std::make_error_code(std::errc::io_error));
    }

    const std::vector<OutputFile>& files() const { return files_; }
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path dir_;
    std::vector<OutputFile> files_;
};

json run_two_qubit(const RunConfig& cfg, OutputWriter& out) {
    const std::vector<TwoQubitRow> rows = run_two_qubit_sweep(cfg.two_qubit);
    out.write("twoqubit.csv", to_csv(two_qubit_table(rows)));
    if (cfg.emit_svg) {
        std::vector<PlotSeries> series;
        for (const TwoQubitRow& r : rows) {
            const std::string name = to_string(r.family) + " theta=" + format_double(r.theta);
            if (series.empty() || series.back().name != name) series.push_back({name, {}});
            series.back().points.emplace_back(r.tau, r.complexity);
        }
        out.write("twoqubit.svg", emit_svg(series, {"Complexity of the evolving pair", "tau", "complexity"}));
    }
    return json::object();
}

json run_ensemble_command(const RunConfig& cfg, OutputWriter& out) {
    EnsembleConfig ec = cfg.ensemble;
    ec.seed = cfg.seed;
    const EnsembleResult result =
        cfg.subcommand == Subcommand::SrEnsemble ? run_sr_ensemble(ec) : run_gr_ensemble(ec);
    out.write("ensemble.csv", to_csv(ensemble_table(result)));
    if (cfg.emit_svg) {
        std::vector<PlotSeries> series;
        for (const EnsemblePoint& p : result.points) {
            if (series.empty() || series.back().name != to_string(p.kind)) series.push_back({to_string(p.kind), {}});
            series.back().points.emplace_back(p.parameter, p.estimate.ratio_of_mean);
        }
        const bool sr = cfg.subcommand == Subcommand::SrEnsemble;
        out.write("ensemble.svg", emit_svg(series, {sr ? "Pace of time under rotations and boosts"
                                                       : "Pace of time under gravitational scaling",
                                                    "parameter", "ratio_of_mean"}));
    }
    return json::object();
}

HermitianOperator tth_hamiltonian(const RunConfig& cfg) {
    const TthConfig& c = cfg.tth;
    if (c.hamiltonian.empty()) {
        CounterRng rng(cfg.seed, 0);
        return sample_local_hamiltonian(c.n_qubits, rng);
    }
    ComplexMatrix h(std::size_t{1} << c.n_qubits);
    for (const PauliTerm& t : c.hamiltonian) h += PauliString::parse(t.labels, t.coefficient).matrix();
    return HermitianOperator(h);
}

json run_tth(const RunConfig& cfg, OutputWriter& out) {
    const TthConfig& c = cfg.tth;
    const DensityMatrix rho0 = DensityMatrix::diagonal(c.populations);
    const HermitianOperator h = tth_hamiltonian(cfg);
    const ProxyReport report = proxy_report(rho0, h, c.t_grid);

    std::vector<double> t, complexity, proxy;
    for (const ProxyRow& r : report.rows) {
        t.push_back(r.t);
        complexity.push_back(r.complexity);
        proxy.push_back(r.proxy);
    }
    out.write("tth.csv", to_csv(tth_table(t, complexity, proxy)));
    if (cfg.emit_svg) {
        std::vector<PlotSeries> series(2);
        series[0].name = "complexity";
        series[1].name = "norm proxy";
        for (std::size_t i = 0; i < t.size(); ++i) {
            series[0].points.emplace_back(t[i], complexity[i]);
            series[1].points.emplace_back(t[i], proxy[i]);
        }
        out.write("tth.svg", emit_svg(series, {"Complexity against the norm proxy", "t", "complexity / proxy"}));
    }

    json summary;
    summary["departure_time"] = report.departure_time ? json(*report.departure_time) : json(nullptr);
    if (rho0.spectrum().values().back() > 1e-12) {
        const ModularHamiltonian mh = modular_hamiltonian(rho0);
        summary["modular_reconstruction_error"] = max_abs_diff(matrix_exp(HermitianOperator(mh.matrix.matrix() * Complex{-1.0, 0.0})), rho0.matrix());
    }
    json linearity = json::object();
    for (double beta : {0.1, 1.0, 5.0}) {
        // Off-identity part of H_rho - beta H for the thermal state of h.
        const ComplexMatrix diff =
            modular_hamiltonian(thermal_state(beta, h)).matrix.matrix() - h.matrix() * Complex{beta, 0.0};
        const Complex shift = diff.trace() / static_cast<double>(diff.dim());
        linearity[format_double(beta)] = max_abs_diff(diff, ComplexMatrix::identity(diff.dim()) * shift);
    }
    summary["thermal_linearity_residual"] = linearity;
    return summary;
}

} // namespace

int run(const RunConfig& cfg, std::ostream& log) {
    const std::string started = utc_timestamp();
    OutputWriter out(cfg.output_dir);
    try {
        std::filesystem::create_directories(cfg.output_dir);
        // A manifest left over from an earlier run would falsely mark this one complete.
        std::filesystem::remove(cfg.output_dir / "manifest.json");
    } catch (const std::filesystem::filesystem_error& e) {
        log << "error: " << e.what() << '\n';
        return kExitIoError;
    }

    json summary;
    try {
        switch (cfg.subcommand) {
        case Subcommand::TwoQubit: summary = run_two_qubit(cfg, out); break;
        case Subcommand::SrEnsemble:
        case Subcommand::GrEnsemble: summary = run_ensemble_command(cfg, out); break;
        case Subcommand::TthCheck: summary = run_tth(cfg, out); break;
        }
    } catch (const Error& e) {
        log << "numerical error: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const std::filesystem::filesystem_error& e) {
        log << "error: " << e.what() << '\n';
        return kExitIoError;
    }

    const std::string canonical = canonical_config(cfg);
    json manifest;
    manifest["config_digest"] = sha256_hex(canonical);
    manifest["config"] = json::parse(canonical);
    manifest["seed"] = cfg.seed;
    manifest["versions"] = {{"artifact", QTIME_VERSION},
                            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
                            {"cli11", CLI11_VERSION},
                            {"openssl", OPENSSL_VERSION_TEXT}};
    manifest["started_at"] = started;
    manifest["finished_at"] = utc_timestamp();
    json files = json::array();
    for (const OutputFile& f : out.files()) files.push_back({{"file", f.name}, {"sha256", f.digest}});
    manifest["outputs"] = files;
    if (cfg.subcommand == Subcommand::SrEnsemble || cfg.subcommand == Subcommand::GrEnsemble) {
        manifest["execution"] = {{"threads", cfg.ensemble.threads}};
    }
    if (!summary.empty()) manifest["summary"] = summary;

    try {
        out.write_raw("manifest.json.tmp", manifest.dump(2) + "\n");
        std::filesystem::rename(cfg.output_dir / "manifest.json.tmp", cfg.output_dir / "manifest.json");
    } catch (const std::filesystem::filesystem_error& e) {
        log << "error: " << e.what() << '\n';
        return kExitIoError;
    }
    return kExitSuccess;
}

} // namespace qtime::cli
