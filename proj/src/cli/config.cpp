#include <cmath>
#include <limits>
#include <set>

#include <json.hpp>

#include "qtime/cli.hpp"
#include "qtime/error.hpp"
#include "qtime/pauli.hpp"

namespace qtime::cli {

using nlohmann::json;

std::string to_string(Subcommand sub) {
    switch (sub) {
    case Subcommand::TwoQubit: return "twoqubit";
    case Subcommand::SrEnsemble: return "sr-ensemble";
    case Subcommand::GrEnsemble: return "gr-ensemble";
    case Subcommand::TthCheck: return "tth-check";
    }
    return "twoqubit";
}

std::optional<Subcommand> parse_subcommand(const std::string& text) {
    for (Subcommand s : {Subcommand::TwoQubit, Subcommand::SrEnsemble, Subcommand::GrEnsemble, Subcommand::TthCheck})
        if (to_string(s) == text) return s;
    return std::nullopt;
}

namespace {

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

// Rejects repeated keys inside any object, which plain parsing would
// silently resolve to the last value.
json parse_strict(const std::string& text) {
    std::vector<std::set<std::string>> seen;
    std::string duplicate;
    auto callback = [&](int, json::parse_event_t event, json& parsed) {
        switch (event) {
        case json::parse_event_t::object_start: seen.emplace_back(); break;
        case json::parse_event_t::object_end: seen.pop_back(); break;
        case json::parse_event_t::key: {
            const auto& key = parsed.get_ref<const std::string&>();
            if (!seen.back().insert(key).second && duplicate.empty()) duplicate = key;
            break;
        }
        default: break;
        }
        return true;
    };
    json doc;
    try {
        doc = json::parse(text, callback);
    } catch (const json::parse_error& e) {
        throw ConfigError("", std::string("parse error: ") + e.what());
    }
    if (!duplicate.empty()) throw ConfigError(duplicate, "duplicate key");
    if (!doc.is_object()) throw ConfigError("", "configuration must be a JSON object");
    return doc;
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    for (const auto& [key, value] : obj.items())
        if (!allowed.contains(key)) throw ConfigError(join(prefix, key), "unknown key");
}

double get_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ConfigError(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
    return x;
}

std::uint64_t get_unsigned(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(path, "expected a non-negative integer");
}

std::string get_string(const json& v, const std::string& path) {
    if (!v.is_string()) throw ConfigError(path, "expected a string");
    return v.get<std::string>();
}

bool get_bool(const json& v, const std::string& path) {
    if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
    return v.get<bool>();
}

// Either an explicit ascending array or {"start", "stop", "step"}.
std::vector<double> get_grid(const json& v, const std::string& path) {
    std::vector<double> grid;
    if (v.is_array()) {
        for (std::size_t i = 0; i < v.size(); ++i) grid.push_back(get_number(v[i], path + "[" + std::to_string(i) + "]"));
    } else if (v.is_object()) {
        reject_unknown(v, {"start", "stop", "step"}, path);
        for (const char* key : {"start", "stop", "step"})
            if (!v.contains(key)) throw ConfigError(join(path, key), "missing");
        try {
            grid = uniform_grid(get_number(v["start"], join(path, "start")), get_number(v["stop"], join(path, "stop")),
                                get_number(v["step"], join(path, "step")));
        } catch (const Error& e) {
            throw ConfigError(path, e.what());
        }
    } else {
        throw ConfigError(path, "expected an array or a {start, stop, step} object");
    }
    if (grid.empty()) throw ConfigError(path, "grid is empty");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (grid[i] < grid[i - 1]) throw ConfigError(path, "grid must be ascending");
    return grid;
}

template <typename T, typename Parse>
std::vector<T> get_enum_list(const json& v, const std::string& path, Parse parse) {
    if (!v.is_array() || v.empty()) throw ConfigError(path, "expected a non-empty array of names");
    std::vector<T> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string item_path = path + "[" + std::to_string(i) + "]";
        T item;
        try {
            item = parse(get_string(v[i], item_path));
        } catch (const Error& e) {
            throw ConfigError(item_path, e.what());
        }
        for (const T& existing : out)
            if (existing == item) throw ConfigError(item_path, "listed twice");
        out.push_back(item);
    }
    return out;
}

Axis get_axis(const json& v, const std::string& path) {
    try {
        return parse_axis(get_string(v, path));
    } catch (const Error& e) {
        throw ConfigError(path, e.what());
    }
}

const std::set<std::string> kCommonKeys = {"subcommand", "output_dir", "svg", "seed"};

std::set<std::string> with_common(std::set<std::string> keys) {
    keys.insert(kCommonKeys.begin(), kCommonKeys.end());
    return keys;
}

void parse_two_qubit(const json& doc, RunConfig& cfg) {
    reject_unknown(doc, with_common({"alpha", "beta_a", "beta_b", "tau_grid", "theta_grid", "families", "axis"}), "");
    TwoQubitConfig& c = cfg.two_qubit;
    if (doc.contains("alpha")) {
        const json& a = doc["alpha"];
        if (a.is_object()) {
            reject_unknown(a, {"re", "im"}, "alpha");
            const double re = a.contains("re") ? get_number(a["re"], "alpha.re") : 0.0;
            const double im = a.contains("im") ? get_number(a["im"], "alpha.im") : 0.0;
            c.alpha = Complex{re, im};
        } else {
            c.alpha = Complex{get_number(a, "alpha"), 0.0};
        }
    }
    if (doc.contains("beta_a")) c.beta_a = get_number(doc["beta_a"], "beta_a");
    if (doc.contains("beta_b")) c.beta_b = get_number(doc["beta_b"], "beta_b");
    if (c.beta_a < 0.0) throw ConfigError("beta_a", "must be non-negative");
    if (c.beta_b < 0.0) throw ConfigError("beta_b", "must be non-negative");
    if (doc.contains("tau_grid")) c.tau_grid = get_grid(doc["tau_grid"], "tau_grid");
    if (doc.contains("theta_grid")) c.theta_grid = get_grid(doc["theta_grid"], "theta_grid");
    if (doc.contains("families"))
        c.families = get_enum_list<Family>(doc["families"], "families", [](const std::string& s) { return parse_family(s); });
    if (doc.contains("axis")) c.axis = get_axis(doc["axis"], "axis");
    try {
        (void)build_initial_state(c);
    } catch (const Error& e) {
        throw ConfigError("alpha", e.what());
    }
}

void parse_ensemble(const json& doc, RunConfig& cfg) {
    reject_unknown(doc,
                   with_common({"n_qubits", "k_samples", "dt", "parameter_grid", "kinds", "state_depth", "hamiltonian",
                                "axis", "pace_statistic", "threads"}),
                   "");
    const bool sr = cfg.subcommand == Subcommand::SrEnsemble;
    EnsembleConfig& c = cfg.ensemble;
    c = sr ? default_sr_config() : default_gr_config();
    if (doc.contains("n_qubits")) c.n_qubits = get_unsigned(doc["n_qubits"], "n_qubits");
    if (c.n_qubits < 1 || c.n_qubits > 3) throw ConfigError("n_qubits", "must be 1, 2 or 3");
    if (doc.contains("k_samples")) c.k_samples = get_unsigned(doc["k_samples"], "k_samples");
    if (c.k_samples < 1) throw ConfigError("k_samples", "must be at least 1");
    if (doc.contains("dt")) c.dt = get_number(doc["dt"], "dt");
    if (!(c.dt > 0.0)) throw ConfigError("dt", "must be positive");
    if (doc.contains("parameter_grid")) c.parameter_grid = get_grid(doc["parameter_grid"], "parameter_grid");
    if (doc.contains("kinds")) {
        c.kinds = get_enum_list<TransformKind>(doc["kinds"], "kinds",
                                               [](const std::string& s) { return parse_transform_kind(s); });
        for (std::size_t i = 0; i < c.kinds.size(); ++i) {
            const bool ok = sr ? (c.kinds[i] == TransformKind::Rotation || c.kinds[i] == TransformKind::Boost)
                               : c.kinds[i] == TransformKind::Gravity;
            if (!ok) {
                throw ConfigError("kinds[" + std::to_string(i) + "]",
                                  "kind-not-allowed: '" + to_string(c.kinds[i]) + "' is not valid for " +
                                      to_string(cfg.subcommand));
            }
        }
    }
    if (doc.contains("state_depth")) c.state_depth = get_unsigned(doc["state_depth"], "state_depth");
    if (doc.contains("hamiltonian")) {
        const json& h = doc["hamiltonian"];
        if (!h.is_object()) throw ConfigError("hamiltonian", "expected an object");
        reject_unknown(h, {"single_site", "nearest_neighbor"}, "hamiltonian");
        if (h.contains("single_site")) c.hamiltonian.single_site = get_number(h["single_site"], "hamiltonian.single_site");
        if (h.contains("nearest_neighbor"))
            c.hamiltonian.nearest_neighbor = get_number(h["nearest_neighbor"], "hamiltonian.nearest_neighbor");
        if (c.hamiltonian.single_site == 0.0 && (c.n_qubits == 1 || c.hamiltonian.nearest_neighbor == 0.0))
            throw ConfigError("hamiltonian", "weights leave no terms");
    }
    if (doc.contains("axis")) c.axis = get_axis(doc["axis"], "axis");
    if (doc.contains("pace_statistic")) {
        try {
            c.pace_statistic = parse_pace_statistic(get_string(doc["pace_statistic"], "pace_statistic"));
        } catch (const Error& e) {
            throw ConfigError("pace_statistic", e.what());
        }
    }
    if (doc.contains("threads")) c.threads = get_unsigned(doc["threads"], "threads");
    if (c.threads < 1) throw ConfigError("threads", "must be at least 1");
}

void parse_tth(const json& doc, RunConfig& cfg) {
    reject_unknown(doc, with_common({"n_qubits", "populations", "hamiltonian", "t_grid"}), "");
    TthConfig& c = cfg.tth;
    if (doc.contains("n_qubits")) c.n_qubits = get_unsigned(doc["n_qubits"], "n_qubits");
    if (c.n_qubits < 1 || c.n_qubits > 3) throw ConfigError("n_qubits", "must be 1, 2 or 3");
    const std::size_t dim = std::size_t{1} << c.n_qubits;
    if (doc.contains("populations")) {
        const json& p = doc["populations"];
        if (!p.is_array() || p.size() != dim) throw ConfigError("populations", "expected " + std::to_string(dim) + " numbers");
        c.populations.clear();
        double sum = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double x = get_number(p[i], "populations[" + std::to_string(i) + "]");
            if (x < 0.0) throw ConfigError("populations[" + std::to_string(i) + "]", "must be non-negative");
            c.populations.push_back(x);
            sum += x;
        }
        if (std::abs(sum - 1.0) > 1e-10) throw ConfigError("populations", "must sum to 1");
    } else {
        // Product of single-qubit thermal populations at beta = 1 for H = (1 - Z) / 2.
        const double excited = std::exp(-1.0) / (1.0 + std::exp(-1.0));
        c.populations.assign(dim, 1.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t q = 0; q < c.n_qubits; ++q) c.populations[i] *= ((i >> q) & 1U) ? excited : 1.0 - excited;
    }
    if (doc.contains("hamiltonian")) {
        const json& h = doc["hamiltonian"];
        if (!h.is_array() || h.empty()) throw ConfigError("hamiltonian", "expected a non-empty array of Pauli terms");
        for (std::size_t i = 0; i < h.size(); ++i) {
            const std::string path = "hamiltonian[" + std::to_string(i) + "]";
            if (!h[i].is_object()) throw ConfigError(path, "expected {labels, coefficient}");
            reject_unknown(h[i], {"labels", "coefficient"}, path);
            if (!h[i].contains("labels")) throw ConfigError(join(path, "labels"), "missing");
            PauliTerm term;
            term.labels = get_string(h[i]["labels"], join(path, "labels"));
            if (h[i].contains("coefficient")) term.coefficient = get_number(h[i]["coefficient"], join(path, "coefficient"));
            try {
                if (PauliString::parse(term.labels).n_qubits() != c.n_qubits)
                    throw ConfigError(join(path, "labels"), "length must equal n_qubits");
            } catch (const Error& e) {
                throw ConfigError(join(path, "labels"), e.what());
            }
            c.hamiltonian.push_back(term);
        }
    }
    c.t_grid = doc.contains("t_grid") ? get_grid(doc["t_grid"], "t_grid") : uniform_grid(0.0, 2.0, 0.05);
    if (c.t_grid.front() < 0.0) throw ConfigError("t_grid", "times must be non-negative");
}

} // namespace

RunConfig parse_config(Subcommand sub, const std::string& text) {
    const json doc = parse_strict(text);
    RunConfig cfg;
    cfg.subcommand = sub;
    if (doc.contains("subcommand") && get_string(doc["subcommand"], "subcommand") != to_string(sub)) {
        throw ConfigError("subcommand", "configuration is for '" + doc["subcommand"].get<std::string>() + "'");
    }
    if (doc.contains("output_dir")) cfg.output_dir = get_string(doc["output_dir"], "output_dir");
    if (doc.contains("svg")) cfg.emit_svg = get_bool(doc["svg"], "svg");
    switch (sub) {
    case Subcommand::TwoQubit: parse_two_qubit(doc, cfg); break;
    case Subcommand::SrEnsemble:
    case Subcommand::GrEnsemble: parse_ensemble(doc, cfg); break;
    case Subcommand::TthCheck: parse_tth(doc, cfg); break;
    }
    if (doc.contains("seed")) cfg.seed = get_unsigned(doc["seed"], "seed");
    return cfg;
}

std::string canonical_config(const RunConfig& cfg) {
    json j;
    j["subcommand"] = to_string(cfg.subcommand);
    j["seed"] = cfg.seed;
    switch (cfg.subcommand) {
    case Subcommand::TwoQubit: {
        const TwoQubitConfig& c = cfg.two_qubit;
        j["alpha"] = {{"re", c.alpha.real()}, {"im", c.alpha.imag()}};
        j["beta_a"] = c.beta_a;
        j["beta_b"] = c.beta_b;
        j["tau_grid"] = c.tau_grid;
        j["theta_grid"] = c.theta_grid;
        json families = json::array();
        for (Family f : c.families) families.push_back(to_string(f));
        j["families"] = families;
        j["axis"] = to_string(c.axis);
        break;
    }
    case Subcommand::SrEnsemble:
    case Subcommand::GrEnsemble: {
        const EnsembleConfig& c = cfg.ensemble;
        j["n_qubits"] = c.n_qubits;
        j["k_samples"] = c.k_samples;
        j["dt"] = c.dt;
        j["parameter_grid"] = c.parameter_grid;
        json kinds = json::array();
        for (TransformKind k : c.kinds) kinds.push_back(to_string(k));
        j["kinds"] = kinds;
        j["state_depth"] = c.state_depth;
        j["hamiltonian"] = {{"single_site", c.hamiltonian.single_site},
                            {"nearest_neighbor", c.hamiltonian.nearest_neighbor}};
        j["axis"] = to_string(c.axis);
        j["pace_statistic"] = to_string(c.pace_statistic);
        break;
    }
    case Subcommand::TthCheck: {
        const TthConfig& c = cfg.tth;
        j["n_qubits"] = c.n_qubits;
        j["populations"] = c.populations;
        json terms = json::array();
        for (const PauliTerm& t : c.hamiltonian) terms.push_back({{"labels", t.labels}, {"coefficient", t.coefficient}});
        j["hamiltonian"] = terms;
        j["t_grid"] = c.t_grid;
        break;
    }
    }
    return j.dump();
}

} // namespace qtime::cli
