#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qtime/experiments.hpp"

namespace qtime::cli {

enum class Subcommand { TwoQubit, SrEnsemble, GrEnsemble, TthCheck };
std::string to_string(Subcommand sub);
std::optional<Subcommand> parse_subcommand(const std::string& text);

// Problems with the configuration document; maps to exit code 2. The path
// names the offending key ("alpha", "hamiltonian.single_site", ...).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string path, const std::string& message)
        : std::runtime_error(path.empty() ? message : path + ": " + message), path_(std::move(path)) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

struct PauliTerm {
    std::string labels;
    double coefficient = 1.0;
};

struct TthConfig {
    std::size_t n_qubits = 1;
    std::vector<double> populations;   // diagonal of rho0; default from a thermal state at beta = 1
    std::vector<PauliTerm> hamiltonian;  // empty: sample a local Hamiltonian from the seed
    std::vector<double> t_grid;          // default 0, 0.05, ..., 2
};

struct RunConfig {
    Subcommand subcommand = Subcommand::TwoQubit;
    TwoQubitConfig two_qubit;
    EnsembleConfig ensemble;
    TthConfig tth;
    // Drives every random draw; copied into the ensemble config at run time.
    std::uint64_t seed = 0;
    std::filesystem::path output_dir = ".";
    bool emit_svg = false;
};

// Parses and validates a JSON configuration for `sub`, filling defaults.
// Unknown or duplicate keys, wrong types and violated invariants raise
// ConfigError.
RunConfig parse_config(Subcommand sub, const std::string& text);

// Canonical JSON text of the fully resolved experiment parameters (keys
// sorted, no whitespace). Output location and SVG flag are not included.
std::string canonical_config(const RunConfig& cfg);

// Lowercase hex SHA-256.
std::string sha256_hex(const std::string& data);

// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};
std::string to_csv(const CsvTable& table);

struct PlotSeries {
    std::string name;
    std::vector<std::pair<double, double>> points;
};

struct PlotAxes {
    std::string title;
    std::string x_label;
    std::string y_label;
};

// Standalone SVG line chart, one polyline per series (a circle marker for
// single-point series). Throws std::invalid_argument when there is nothing to plot.
std::string emit_svg(const std::vector<PlotSeries>& series, const PlotAxes& axes);

CsvTable two_qubit_table(const std::vector<TwoQubitRow>& rows);
CsvTable ensemble_table(const EnsembleResult& result);
CsvTable tth_table(const std::vector<double>& t, const std::vector<double>& complexity,
                   const std::vector<double>& proxy);

enum ExitCode : int {
    kExitSuccess = 0,
    kExitIoError = 1,
    kExitConfigError = 2,
    kExitNumericalError = 3,
};

// Runs the experiment, writes CSV (and SVG), then manifest.json. Returns an
// exit code; diagnostics go to `log`.
int run(const RunConfig& cfg, std::ostream& log);

} // namespace qtime::cli
