#pragma once

#include <chrono>
#include <cmath>
#include <string>
#include <vector>

#include "qtorus/concurrence.hpp"
#include "qtorus/errors.hpp"
#include "qtorus/harness/config.hpp"
#include "qtorus/harper.hpp"
#include "qtorus/noise.hpp"
#include "qtorus/parallel.hpp"
#include "qtorus/phase_space.hpp"
#include "qtorus/trajectories.hpp"

namespace qtorus::harness {

inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kHermiticityTolerance = 1e-10;
inline constexpr double kPositivityTolerance = 1e-10;
inline constexpr std::size_t kPositivityCheckMaxDim = 256;

struct SeriesRecord {
    std::size_t step = 0;
    double value = 0.0;  // headline estimate (exact for pure evolution)
    double std_error = 0.0;
    EstimatorKind kind = EstimatorKind::pure_exact;
    double lower_bound = 0.0;  // purity bound on the exactly evolved rho
    double purity = 1.0;
    double trace = 1.0;
    double wall_time = 0.0;  // seconds since the run started
};

struct ConcurrenceSeries {
    std::vector<SeriesRecord> records;

    std::vector<double> values() const {
        std::vector<double> v;
        for (const auto& r : records) v.push_back(r.value);
        return v;
    }
    std::vector<double> lower_bounds() const {
        std::vector<double> v;
        for (const auto& r : records) v.push_back(r.lower_bound);
        return v;
    }
};

inline StateVector initial_state(const ScenarioConfig& cfg, TorusGeometry g) {
    switch (cfg.initial) {
        case InitialKind::coherent: return coherent_state(g, cfg.q0, cfg.p0);
        case InitialKind::ghz: return ghz_state(g);
        case InitialKind::basis: return StateVector::basis(g, static_cast<std::size_t>(cfg.basis_index));
    }
    return coherent_state(g, cfg.q0, cfg.p0);
}

inline TranslationMixture make_mixture(const ScenarioConfig& cfg, TorusGeometry g) {
    switch (cfg.channel) {
        case Channel::none: return TranslationMixture::identity(g);
        case Channel::diffusive: return TranslationMixture::diffusive(make_kernel(g, cfg.epsilon));
        case Channel::pdc: return TranslationMixture::phase_damping(g, cfg.epsilon);
        case Channel::dpc: return TranslationMixture::depolarizing(g, cfg.epsilon);
    }
    return TranslationMixture::identity(g);
}

// Throws InvariantViolation if rho has left the set of density operators.
inline void check_density(const DensityOperator& rho, const std::string& where) {
    const double trace_residual = std::abs(rho.trace() - 1.0);
    if (trace_residual > kTraceTolerance) {
        throw InvariantViolation(where + ": trace residual " + std::to_string(trace_residual));
    }
    const double herm = rho.hermiticity_residual();
    if (herm > kHermiticityTolerance) {
        throw InvariantViolation(where + ": Hermiticity residual " + std::to_string(herm));
    }
    if (rho.dim() <= kPositivityCheckMaxDim) {
        const double lowest = rho.min_eigenvalue();
        if (lowest < -kPositivityTolerance) {
            throw InvariantViolation(where + ": smallest eigenvalue " + std::to_string(lowest));
        }
    }
}

inline std::size_t numerical_rank(const DensityOperator& rho) {
    const Eigen::VectorXd ev = rho.eigenvalues();
    return static_cast<std::size_t>((ev.array() > kRankThreshold).count());
}

// Builds the initial state, records C_k at t = 0, then repeats
// [apply U; apply the channel; record C_k].
//
// Without noise the series is the exact pure-state concurrence. With a channel,
// rho(t) is evolved exactly and its purity lower bound is recorded next to the
// headline value: the trajectory average for the diffusive channel; for pdc/dpc
// the convex-roof search when k <= 4 and rank(rho) <= 8, otherwise the trajectory
// average over the uniform translation unraveling.
inline ConcurrenceSeries run_evolution(const ScenarioConfig& cfg) {
    cfg.validate();
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

    const TorusGeometry g = make_geometry(cfg.k);
    const QuantumPropagator u(g, cfg.harper());
    const StateVector psi0 = initial_state(cfg, g);
    const auto steps = static_cast<std::size_t>(cfg.steps);
    ConcurrenceSeries series;
    series.records.reserve(steps + 1);

    if (cfg.channel == Channel::none) {
        StateVector psi = psi0;
        for (std::size_t t = 0; t <= steps; ++t) {
            if (t > 0) psi = u.apply(psi);
            const double c = pure_concurrence(psi).value;
            series.records.push_back({t, c, 0.0, EstimatorKind::pure_exact, c, 1.0, 1.0, elapsed()});
        }
        return series;
    }

    const TranslationMixture noise = make_mixture(cfg, g);
    TrajectoryEnsemble ensemble(psi0, u, noise, static_cast<std::size_t>(cfg.trajectories), cfg.seed,
                                static_cast<std::size_t>(cfg.threads));
    DensityOperator rho = DensityOperator::pure(psi0);
    const bool optimizer_eligible = (cfg.channel == Channel::pdc || cfg.channel == Channel::dpc) &&
                                    cfg.k <= kOptimizerMaxQubits;
    for (std::size_t t = 0; t <= steps; ++t) {
        if (t > 0) {
            ensemble.advance();
            rho = noise.apply(u.apply(rho));
            check_density(rho, "step " + std::to_string(t));
        }
        SeriesRecord rec;
        rec.step = t;
        rec.lower_bound = mixed_lower_bound(rho).value;
        rec.purity = rho.purity();
        rec.trace = rho.trace().real();
        if (optimizer_eligible && numerical_rank(rho) <= kOptimizerMaxRank) {
            RngStream rng = RngStream::derive(cfg.seed, (std::uint64_t{1} << 32) + t);
            rec.value = mixed_concurrence_optimized(rho, static_cast<std::size_t>(cfg.optimizer_iterations), rng).value;
            rec.kind = EstimatorKind::mixed_optimized;
        } else {
            const auto stats = ensemble.statistics();
            rec.value = stats.mean;
            rec.std_error = stats.std_error;
            rec.kind = EstimatorKind::mixed_upper_bound;
        }
        rec.wall_time = elapsed();
        series.records.push_back(rec);
    }
    return series;
}

struct SweepRow {
    double q0 = 0.0;
    double p0 = 0.0;
    double c_unitary = 0.0;
    double c_noisy = 0.0;  // trajectory average
    double c_noisy_std_error = 0.0;
    double c_noisy_lower = 0.0;  // purity bound on the exactly evolved rho
    bool island = false;         // classical orbit of (q0, p0) is confined
};

inline std::vector<double> sweep_momenta(double dp) {
    const auto count = static_cast<std::size_t>(std::llround(1.0 / dp));
    std::vector<double> p;
    for (std::size_t j = 0; j <= count; ++j) p.push_back(std::min(1.0, static_cast<double>(j) * dp));
    return p;
}

// C_k after sweep_steps iterations from coherent states on a momentum grid, with
// and without the configured channel. Grid point i owns seed stream i.
inline std::vector<SweepRow> run_momentum_sweep(const ScenarioConfig& cfg) {
    cfg.validate();
    const TorusGeometry g = make_geometry(cfg.k);
    const QuantumPropagator u(g, cfg.harper());
    const TranslationMixture noise = make_mixture(cfg, g);
    const auto steps = static_cast<std::size_t>(cfg.sweep_steps);
    const std::vector<double> momenta = sweep_momenta(cfg.sweep_dp);

    std::vector<SweepRow> rows;
    for (double q0 : cfg.sweep_q0)
        for (double p0 : momenta) rows.push_back({q0, p0});

    parallel_for(rows.size(), static_cast<std::size_t>(cfg.threads), [&](std::size_t i) {
        SweepRow& row = rows[i];
        const StateVector psi0 = coherent_state(g, row.q0, row.p0);
        row.c_unitary = pure_concurrence(u.apply(psi0, steps)).value;
        row.island = is_confined_orbit(PhasePoint::wrapped(row.q0, row.p0), cfg.harper());
        if (cfg.channel == Channel::none) {
            row.c_noisy = row.c_noisy_lower = row.c_unitary;
            return;
        }
        const auto traj = mixed_concurrence_upper(psi0, u, noise, steps, static_cast<std::size_t>(cfg.trajectories),
                                                  mix64(cfg.seed) ^ mix64(i), 1);
        row.c_noisy = traj.steps.back().mean;
        row.c_noisy_std_error = traj.steps.back().std_error;
        DensityOperator rho = DensityOperator::pure(psi0);
        for (std::size_t t = 0; t < steps; ++t) rho = noise.apply(u.apply(rho));
        check_density(rho, "sweep point " + std::to_string(i));
        row.c_noisy_lower = mixed_lower_bound(rho).value;
    });
    return rows;
}

struct Portrait {
    std::vector<PhasePoint> seeds;
    std::vector<Orbit> orbits;
};

// Seeds on the lattice (i/g, j/g), i, j < g; includes the fixed point (0, 0).
inline Portrait run_portrait(const ScenarioConfig& cfg) {
    cfg.validate();
    Portrait out;
    const auto grid = static_cast<std::size_t>(cfg.portrait_grid);
    for (std::size_t i = 0; i < grid; ++i)
        for (std::size_t j = 0; j < grid; ++j)
            out.seeds.push_back({static_cast<double>(i) / static_cast<double>(grid),
                                 static_cast<double>(j) / static_cast<double>(grid)});
    out.orbits = phase_portrait(cfg.harper(), out.seeds, static_cast<std::size_t>(cfg.portrait_iterations));
    return out;
}

struct SelfCheckEntry {
    std::string name;
    double residual = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct SelfCheckReport {
    std::vector<SelfCheckEntry> entries;

    bool all_passed() const {
        for (const auto& e : entries)
            if (!e.passed) return false;
        return !entries.empty();
    }

    void add(std::string name, double residual, double tolerance) {
        entries.push_back({std::move(name), residual, tolerance, residual <= tolerance});
    }
};

inline constexpr double kChannelTraceTolerance = 1e-12;
inline constexpr double kChannelHermiticityTolerance = 1e-12;
inline constexpr double kKrausChordTolerance = 1e-10;
inline constexpr double kKernelSumTolerance = 1e-12;

// CPTP verification of all channels against the given kernel, on a seeded random
// density operator and on a coherent-state projector.
inline SelfCheckReport channel_selfcheck(const ScenarioConfig& cfg, const NoiseKernel& kernel) {
    const TorusGeometry g = kernel.geometry;
    SelfCheckReport report;
    report.add("kernel_weight_sum", std::abs(kernel.weight_sum() - 1.0), kKernelSumTolerance);
    report.add("kernel_min_weight", std::max(0.0, -kernel.min_weight()), kNegativeWeightSlack);
    report.add("kernel_chord_origin", std::abs(kernel.chord_weights(0, 0) - 1.0), kKernelSumTolerance);

    RngStream rng = RngStream::derive(cfg.seed, 0xc4ec);
    const std::vector<std::pair<std::string, DensityOperator>> inputs{
        {"random", random_density(g, rng)},
        {"coherent", DensityOperator::pure(coherent_state(g, cfg.q0, cfg.p0))},
    };
    const double dephasing = std::min(1.0, cfg.epsilon);
    for (const auto& [label, rho] : inputs) {
        const DensityOperator chord = apply_diffusive_chord(rho, kernel);
        const DensityOperator kraus = apply_diffusive_kraus(rho, kernel);
        const std::vector<std::pair<std::string, DensityOperator>> outputs{
            {"diffusive_chord", chord},
            {"diffusive_kraus", kraus},
            {"pdc", apply_pdc(rho, dephasing)},
            {"dpc", apply_dpc(rho, dephasing)},
        };
        for (const auto& [channel, out] : outputs) {
            const std::string prefix = channel + "/" + label + "/";
            report.add(prefix + "trace", std::abs(out.trace() - rho.trace()), kChannelTraceTolerance);
            report.add(prefix + "hermiticity", out.hermiticity_residual(), kChannelHermiticityTolerance);
            report.add(prefix + "positivity", std::max(0.0, -out.min_eigenvalue()), kPositivityTolerance);
        }
        report.add("kraus_vs_chord/" + label, kraus.max_abs_difference(chord), kKrausChordTolerance);

        OperatorMatrix mixture = (1.0 - dephasing) * rho.matrix();
        for (std::size_t b = 0; b < g.dim; ++b) {
            mixture += dephasing / static_cast<double>(g.dim) * apply_translation(rho, TranslationIndex{0, b}).matrix();
        }
        report.add("pdc_as_boost_mixture/" + label,
                   (mixture - apply_pdc(rho, dephasing).matrix()).cwiseAbs().maxCoeff(), kChannelTraceTolerance);
    }
    return report;
}

inline SelfCheckReport channel_selfcheck(const ScenarioConfig& cfg) {
    cfg.validate();
    if (cfg.k > kMaxDensityQubits) throw ConfigError("k", "selfcheck evolves density operators; k must be <= 10");
    return channel_selfcheck(cfg, make_kernel(make_geometry(cfg.k), cfg.epsilon));
}

}  // namespace qtorus::harness
