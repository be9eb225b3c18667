// qtorus: command-line front end for the torus-quantized Harper map experiments.
//
//   qtorus evolve    --config run.cfg [--k 8 --channel diffusive ...]
//   qtorus sweep     momentum sweep after sweep_steps iterations
//   qtorus portrait  classical orbits on a seed lattice
//   qtorus ghz       GHZ reference concurrences for k = 2..k
//   qtorus selfcheck CPTP verification of the noise channels
//
// Exit codes: 0 success, 2 configuration error, 3 numerical-invariant violation.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "qtorus/harness/config.hpp"
#include "qtorus/harness/io.hpp"
#include "qtorus/harness/scenario.hpp"

namespace {

namespace fs = std::filesystem;
using namespace qtorus;
using namespace qtorus::harness;

constexpr int kExitConfig = 2;
constexpr int kExitInvariant = 3;

struct Overrides {
    std::string config_path;
    std::optional<std::string> k, chi, channel, epsilon, steps, q0, p0, trajectories, seed, out;

    void attach(CLI::App* app) {
        app->add_option("--config", config_path, "key = value config file (schema = 1)");
        app->add_option("--k", k, "qubit count");
        app->add_option("--chi", chi, "kick strength for both chi1 and chi2");
        app->add_option("--channel", channel, "none | diffusive | pdc | dpc");
        app->add_option("--epsilon", epsilon, "noise strength");
        app->add_option("--steps", steps, "propagator applications");
        app->add_option("--q0", q0, "initial position (coherent state)");
        app->add_option("--p0", p0, "initial momentum (coherent state)");
        app->add_option("--trajectories", trajectories, "pure-state trajectories for mixed estimators");
        app->add_option("--seed", seed, "master seed");
        app->add_option("--out", out, "output directory");
    }

    ScenarioConfig resolve() const {
        ScenarioConfig cfg = config_path.empty() ? ScenarioConfig{} : load_config(config_path);
        const std::vector<std::pair<const char*, const std::optional<std::string>*>> flags{
            {"k", &k},   {"chi", &chi}, {"channel", &channel},           {"epsilon", &epsilon},
            {"steps", &steps}, {"q0", &q0}, {"p0", &p0}, {"trajectories", &trajectories},
            {"seed", &seed}, {"out", &out}};
        for (const auto& [key, value] : flags)
            if (value->has_value()) cfg.set(key, **value);
        cfg.validate();
        return cfg;
    }
};

fs::path prepare_output(const ScenarioConfig& cfg) {
    fs::path dir(cfg.out);
    fs::create_directories(dir);
    return dir;
}

int cmd_evolve(const ScenarioConfig& cfg) {
    const auto dir = prepare_output(cfg);
    const ConcurrenceSeries series = run_evolution(cfg);
    write_series_csv(dir / "series.csv", series);
    write_timing_csv(dir / "timing.csv", series);
    write_manifest(dir, "evolve", cfg, {"series.csv", "timing.csv"});
    const auto& last = series.records.back();
    std::cout << "C_" << cfg.k << "(0) = " << format_value(series.records.front().value) << ", C_" << cfg.k << "("
              << last.step << ") = " << format_value(last.value) << " [" << to_string(last.kind) << "]\n";
    return 0;
}

int cmd_sweep(const ScenarioConfig& cfg) {
    const auto dir = prepare_output(cfg);
    const auto rows = run_momentum_sweep(cfg);
    write_sweep_csv(dir / "sweep.csv", rows);
    write_manifest(dir, "sweep", cfg, {"sweep.csv"});
    std::cout << rows.size() << " sweep points written to " << (dir / "sweep.csv").string() << '\n';
    return 0;
}

int cmd_portrait(const ScenarioConfig& cfg) {
    const auto dir = prepare_output(cfg);
    write_portrait_csv(dir / "portrait.csv", run_portrait(cfg));
    write_manifest(dir, "portrait", cfg, {"portrait.csv"});
    return 0;
}

int cmd_ghz(const ScenarioConfig& cfg) {
    const auto dir = prepare_output(cfg);
    {
        CsvWriter csv(dir / "ghz.csv", {"k", "closed_form", "from_state"});
        for (int k = 2; k <= cfg.k; ++k) {
            const double closed = ghz_concurrence(k);
            const double numeric = pure_concurrence(ghz_state(make_geometry(k))).value;
            csv.row({std::to_string(k), format_value(closed), format_value(numeric)});
            std::cout << "k=" << k << "  C_k(GHZ) = " << format_value(closed) << '\n';
        }
    }
    write_manifest(dir, "ghz", cfg, {"ghz.csv"});
    return 0;
}

int cmd_selfcheck(const ScenarioConfig& cfg) {
    const auto dir = prepare_output(cfg);
    const SelfCheckReport report = channel_selfcheck(cfg);
    write_selfcheck_csv(dir / "selfcheck.csv", report);
    write_manifest(dir, "selfcheck", cfg, {"selfcheck.csv"});
    for (const auto& e : report.entries) {
        std::cout << (e.passed ? "PASS " : "FAIL ") << e.name << "  residual=" << format_value(e.residual)
                  << "  tol=" << format_value(e.tolerance) << '\n';
    }
    return report.all_passed() ? 0 : kExitInvariant;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantized Harper map: multipartite concurrence under unitary and noisy dynamics"};
    app.require_subcommand(1);

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const ScenarioConfig&);
        Overrides overrides;
    };
    std::vector<Command> commands{
        {"evolve", "concurrence time series from one initial state", cmd_evolve, {}},
        {"sweep", "concurrence after sweep_steps iterations over a momentum grid", cmd_sweep, {}},
        {"portrait", "classical phase portrait orbits", cmd_portrait, {}},
        {"ghz", "GHZ reference concurrences", cmd_ghz, {}},
        {"selfcheck", "noise channel contract verification", cmd_selfcheck, {}},
    };
    for (auto& c : commands) c.overrides.attach(app.add_subcommand(c.name, c.help));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    for (auto& c : commands) {
        if (!app.got_subcommand(c.name)) continue;
        try {
            return c.run(c.overrides.resolve());
        } catch (const ConfigError& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return kExitConfig;
        } catch (const InvariantViolation& e) {
            std::cerr << "numerical invariant violated: " << e.what() << '\n';
            return kExitInvariant;
        } catch (const std::invalid_argument& e) {
            std::cerr << "config error: " << e.what() << '\n';
            return kExitConfig;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << '\n';
            return 1;
        }
    }
    return 0;
}
