#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qtime/cli.hpp"

namespace {

struct Options {
    std::string config_path;
    std::string out_dir;
    bool svg = false;
    std::optional<std::uint64_t> seed;
};

void add_run_options(CLI::App* sub, Options& opts) {
    sub->add_option("--config", opts.config_path, "JSON configuration file");
    sub->add_option("--out", opts.out_dir, "output directory (default: current directory or config output_dir)");
    sub->add_flag("--svg", opts.svg, "also write an SVG plot");
    sub->add_option("--seed", opts.seed, "random seed, overrides the configuration");
}

} // namespace

int main(int argc, char** argv) {
    using namespace qtime::cli;
    CLI::App app{"Quantum state complexity experiments"};
    app.require_subcommand(1);
    Options opts;
    for (Subcommand s : {Subcommand::TwoQubit, Subcommand::SrEnsemble, Subcommand::GrEnsemble, Subcommand::TthCheck}) {
        add_run_options(app.add_subcommand(to_string(s), "run the " + to_string(s) + " experiment"), opts);
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfigError;
    }
    const Subcommand sub = *parse_subcommand(app.get_subcommands().front()->get_name());

    std::string text = "{}";
    if (!opts.config_path.empty()) {
        std::ifstream in(opts.config_path, std::ios::binary);
        if (!in) {
            std::cerr << "config error: cannot read " << opts.config_path << '\n';
            return kExitConfigError;
        }
        std::ostringstream buffer;
        buffer << in.rdbuf();
        text = buffer.str();
    }

    RunConfig cfg;
    try {
        cfg = parse_config(sub, text);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }
    if (!opts.out_dir.empty()) cfg.output_dir = opts.out_dir;
    if (opts.svg) cfg.emit_svg = true;
    if (opts.seed) cfg.seed = *opts.seed;
    return run(cfg, std::cerr);
}
