#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qtorus/errors.hpp"
#include "qtorus/geometry.hpp"
#include "qtorus/harper.hpp"

namespace qtorus::harness {

inline constexpr int kConfigSchema = 1;
inline constexpr int kMaxDensityQubits = 10;  // N^2 complex entries per density operator

enum class Channel { none, diffusive, pdc, dpc };
enum class InitialKind { coherent, ghz, basis };

inline const char* to_string(Channel c) {
    switch (c) {
        case Channel::none: return "none";
        case Channel::diffusive: return "diffusive";
        case Channel::pdc: return "pdc";
        case Channel::dpc: return "dpc";
    }
    return "none";
}

inline const char* to_string(InitialKind k) {
    switch (k) {
        case InitialKind::coherent: return "coherent";
        case InitialKind::ghz: return "ghz";
        case InitialKind::basis: return "basis";
    }
    return "coherent";
}

/*
 * Scenario description. Config files are flat `key = value` text, one entry per
 * line, `#` starts a comment. `schema = 1` is mandatory; unknown or repeated
 * keys are rejected.
 *
 *   schema                 1
 *   k                      qubit count (2..14; 2..10 with a noise channel)
 *   chi                    sets chi1 and chi2
 *   chi1, chi2             Harper kick strengths
 *   channel                none | diffusive | pdc | dpc
 *   epsilon                noise strength (pdc/dpc: within [0,1])
 *   steps                  number of propagator applications
 *   initial                coherent | ghz | basis
 *   q0, p0                 coherent-state centre
 *   basis_index            position label for initial = basis
 *   trajectories           pure-state trajectories for mixed estimators (>= 2)
 *   seed                   master seed (unsigned 64-bit)
 *   out                    output directory
 *   threads                worker threads, 0 = hardware concurrency
 *   optimizer_iterations   proposals for the small-system convex-roof search
 *   portrait_grid          seeds per axis of the portrait seed lattice
 *   portrait_iterations    classical iterations per seed
 *   sweep_q0               comma-separated initial positions
 *   sweep_dp               momentum grid spacing on [0, 1]
 *   sweep_steps            iterations before the sweep measurement
 */
struct ScenarioConfig {
    int schema = kConfigSchema;
    int k = 5;
    double chi1 = kDefaultKick;
    double chi2 = kDefaultKick;
    Channel channel = Channel::none;
    double epsilon = 0.04;
    long long steps = 50;
    InitialKind initial = InitialKind::coherent;
    double q0 = 0.25;
    double p0 = 0.25;
    long long basis_index = 0;
    long long trajectories = 64;
    std::uint64_t seed = 1;
    std::string out = "out";
    long long threads = 0;
    long long optimizer_iterations = 2000;
    long long portrait_grid = 8;
    long long portrait_iterations = 500;
    std::vector<double> sweep_q0{0.25, 0.5};
    double sweep_dp = 0.05;
    long long sweep_steps = 16;

    HarperParams harper() const { return {chi1, chi2}; }

    void set(const std::string& key, const std::string& value);
    void validate() const;
    std::map<std::string, std::string> to_map() const;
};

namespace detail {

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    std::string out(s.substr(b, e - b + 1));
    if (out.size() >= 2 && out.front() == '"' && out.back() == '"') out = out.substr(1, out.size() - 2);
    return out;
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a finite number, got '" + v + "'");
    }
}

template <class Int>
Int parse_integer(const std::string& key, const std::string& v) {
    Int out{};
    const auto* end = v.data() + v.size();
    const auto [ptr, ec] = std::from_chars(v.data(), end, out);
    if (ec != std::errc() || ptr != end) throw ConfigError(key, "expected an integer, got '" + v + "'");
    return out;
}

inline std::string format_double(double d) {
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
}

}  // namespace detail

inline void ScenarioConfig::set(const std::string& key, const std::string& value) {
    using detail::parse_double;
    using detail::parse_integer;
    if (key == "schema") {
        schema = parse_integer<int>(key, value);
        if (schema != kConfigSchema) throw ConfigError(key, "unsupported schema " + value + " (expected 1)");
    } else if (key == "k") {
        k = parse_integer<int>(key, value);
    } else if (key == "chi") {
        chi1 = chi2 = parse_double(key, value);
    } else if (key == "chi1") {
        chi1 = parse_double(key, value);
    } else if (key == "chi2") {
        chi2 = parse_double(key, value);
    } else if (key == "channel") {
        if (value == "none") channel = Channel::none;
        else if (value == "diffusive") channel = Channel::diffusive;
        else if (value == "pdc") channel = Channel::pdc;
        else if (value == "dpc") channel = Channel::dpc;
        else throw ConfigError(key, "expected none|diffusive|pdc|dpc, got '" + value + "'");
    } else if (key == "epsilon") {
        epsilon = parse_double(key, value);
    } else if (key == "steps") {
        steps = parse_integer<long long>(key, value);
    } else if (key == "initial") {
        if (value == "coherent") initial = InitialKind::coherent;
        else if (value == "ghz") initial = InitialKind::ghz;
        else if (value == "basis") initial = InitialKind::basis;
        else throw ConfigError(key, "expected coherent|ghz|basis, got '" + value + "'");
    } else if (key == "q0") {
        q0 = parse_double(key, value);
    } else if (key == "p0") {
        p0 = parse_double(key, value);
    } else if (key == "basis_index") {
        basis_index = parse_integer<long long>(key, value);
    } else if (key == "trajectories") {
        trajectories = parse_integer<long long>(key, value);
    } else if (key == "seed") {
        seed = parse_integer<std::uint64_t>(key, value);
    } else if (key == "out") {
        if (value.empty()) throw ConfigError(key, "output directory must not be empty");
        out = value;
    } else if (key == "threads") {
        threads = parse_integer<long long>(key, value);
    } else if (key == "optimizer_iterations") {
        optimizer_iterations = parse_integer<long long>(key, value);
    } else if (key == "portrait_grid") {
        portrait_grid = parse_integer<long long>(key, value);
    } else if (key == "portrait_iterations") {
        portrait_iterations = parse_integer<long long>(key, value);
    } else if (key == "sweep_q0") {
        sweep_q0.clear();
        std::stringstream ss(value);
        std::string item;
        while (std::getline(ss, item, ',')) sweep_q0.push_back(parse_double(key, detail::trim(item)));
        if (sweep_q0.empty()) throw ConfigError(key, "expected at least one position");
    } else if (key == "sweep_dp") {
        sweep_dp = parse_double(key, value);
    } else if (key == "sweep_steps") {
        sweep_steps = parse_integer<long long>(key, value);
    } else {
        throw ConfigError(key, "unknown key");
    }
}

inline void ScenarioConfig::validate() const {
    if (k < kMinQubits || k > kMaxQubits) {
        throw ConfigError("k", "must lie in [" + std::to_string(kMinQubits) + ", " + std::to_string(kMaxQubits) +
                                   "], got " + std::to_string(k));
    }
    if (channel != Channel::none && k > kMaxDensityQubits) {
        throw ConfigError("k", "noise channels evolve an N x N density operator; k must be <= " +
                                   std::to_string(kMaxDensityQubits));
    }
    if (!std::isfinite(chi1) || !std::isfinite(chi2)) throw ConfigError("chi", "kick strengths must be finite");
    if (steps < 0) throw ConfigError("steps", "must be >= 0");
    if (channel != Channel::none) {
        if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw ConfigError("epsilon", "must be finite and >= 0");
        if ((channel == Channel::pdc || channel == Channel::dpc) && epsilon > 1.0) {
            throw ConfigError("epsilon", std::string("must lie in [0, 1] for channel ") + to_string(channel));
        }
        if (trajectories < 2) throw ConfigError("trajectories", "must be >= 2 with a noise channel");
    }
    if (initial == InitialKind::basis && (basis_index < 0 || basis_index >= (1LL << k))) {
        throw ConfigError("basis_index", "must lie in [0, 2^k)");
    }
    if (threads < 0) throw ConfigError("threads", "must be >= 0");
    if (optimizer_iterations < 1) throw ConfigError("optimizer_iterations", "must be >= 1");
    if (portrait_grid < 1) throw ConfigError("portrait_grid", "must be >= 1");
    if (portrait_iterations < 1) throw ConfigError("portrait_iterations", "must be >= 1");
    if (!(sweep_dp > 0.0 && sweep_dp <= 1.0)) throw ConfigError("sweep_dp", "must lie in (0, 1]");
    if (sweep_steps < 0) throw ConfigError("sweep_steps", "must be >= 0");
}

inline std::map<std::string, std::string> ScenarioConfig::to_map() const {
    using detail::format_double;
    std::string q0s;
    for (std::size_t i = 0; i < sweep_q0.size(); ++i) q0s += (i ? "," : "") + format_double(sweep_q0[i]);
    return {
        {"schema", std::to_string(schema)},
        {"k", std::to_string(k)},
        {"chi1", format_double(chi1)},
        {"chi2", format_double(chi2)},
        {"channel", to_string(channel)},
        {"epsilon", format_double(epsilon)},
        {"steps", std::to_string(steps)},
        {"initial", to_string(initial)},
        {"q0", format_double(q0)},
        {"p0", format_double(p0)},
        {"basis_index", std::to_string(basis_index)},
        {"trajectories", std::to_string(trajectories)},
        {"seed", std::to_string(seed)},
        {"out", out},
        {"threads", std::to_string(threads)},
        {"optimizer_iterations", std::to_string(optimizer_iterations)},
        {"portrait_grid", std::to_string(portrait_grid)},
        {"portrait_iterations", std::to_string(portrait_iterations)},
        {"sweep_q0", q0s},
        {"sweep_dp", format_double(sweep_dp)},
        {"sweep_steps", std::to_string(sweep_steps)},
    };
}

// Parses config text. The schema key is required.
inline ScenarioConfig parse_config(std::istream& in) {
    ScenarioConfig cfg;
    std::set<std::string> seen;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = detail::trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno), "expected 'key = value', got '" + body + "'");
        }
        const std::string key = detail::trim(std::string_view(body).substr(0, eq));
        const std::string value = detail::trim(std::string_view(body).substr(eq + 1));
        if (key.empty()) throw ConfigError("line " + std::to_string(lineno), "empty key");
        if (!seen.insert(key).second) throw ConfigError(key, "repeated key");
        cfg.set(key, value);
    }
    if (!seen.contains("schema")) throw ConfigError("schema", "required field missing (expected schema = 1)");
    return cfg;
}

inline ScenarioConfig parse_config_text(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

inline ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config", "cannot open '" + path + "'");
    return parse_config(in);
}

}  // namespace qtorus::harness
