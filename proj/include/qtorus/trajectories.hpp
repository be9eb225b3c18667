#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "qtorus/concurrence.hpp"
#include "qtorus/harper.hpp"
#include "qtorus/noise.hpp"
#include "qtorus/parallel.hpp"

namespace qtorus {

struct EnsembleStatistics {
    double mean = 0.0;
    double std_error = 0.0;
};

// Welford accumulation in index order: identical inputs give their exact value,
// and the result does not depend on how the items were scheduled.
inline EnsembleStatistics ensemble_statistics(const std::vector<double>& values) {
    double mean = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double delta = values[i] - mean;
        mean += delta / static_cast<double>(i + 1);
        m2 += delta * (values[i] - mean);
    }
    EnsembleStatistics s;
    s.mean = mean;
    if (values.size() > 1) {
        const double n = static_cast<double>(values.size());
        s.std_error = std::sqrt(m2 / (n - 1.0) / n);
    }
    return s;
}

// Pure-state unraveling of "apply U, then one translation drawn from a mixture".
// Trajectory j owns RNG stream derive(seed, j). The ensemble average of C_k is the
// value of C_k averaged over one particular decomposition of rho(t), hence an
// upper bound on its convex roof.
class TrajectoryEnsemble {
public:
    TrajectoryEnsemble(const StateVector& initial, QuantumPropagator propagator, TranslationMixture noise,
                       std::size_t trajectories, std::uint64_t seed, std::size_t threads = 0)
        : propagator_(std::move(propagator)), noise_(std::move(noise)), threads_(threads) {
        if (trajectories < 2) throw std::invalid_argument("TrajectoryEnsemble: trajectories must be >= 2");
        require_same_geometry(initial.geometry(), propagator_.geometry(), "TrajectoryEnsemble");
        states_.assign(trajectories, initial);
        streams_.reserve(trajectories);
        for (std::size_t j = 0; j < trajectories; ++j) streams_.push_back(RngStream::derive(seed, j));
        const double c0 = pure_concurrence(initial).value;
        concurrence_.assign(trajectories, c0);
    }

    std::size_t size() const noexcept { return states_.size(); }
    const std::vector<StateVector>& states() const noexcept { return states_; }
    const std::vector<double>& concurrences() const noexcept { return concurrence_; }

    void advance() {
        parallel_for(states_.size(), threads_, [this](std::size_t j) {
            StateVector next = propagator_.apply(states_[j]);
            next = apply_translation(next, noise_.sample(streams_[j]));
            concurrence_[j] = pure_concurrence(next).value;
            states_[j] = std::move(next);
        });
    }

    EnsembleStatistics statistics() const { return ensemble_statistics(concurrence_); }

private:
    QuantumPropagator propagator_;
    TranslationMixture noise_;
    std::size_t threads_;
    std::vector<StateVector> states_;
    std::vector<RngStream> streams_;
    std::vector<double> concurrence_;
};

struct TrajectorySeries {
    std::size_t trajectories = 0;
    std::vector<EnsembleStatistics> steps;  // index 0 is the initial state
};

inline TrajectorySeries mixed_concurrence_upper(const StateVector& initial, const QuantumPropagator& propagator,
                                               const TranslationMixture& noise, std::size_t steps,
                                               std::size_t trajectories, std::uint64_t seed,
                                               std::size_t threads = 0) {
    TrajectoryEnsemble ensemble(initial, propagator, noise, trajectories, seed, threads);
    TrajectorySeries out;
    out.trajectories = trajectories;
    out.steps.reserve(steps + 1);
    out.steps.push_back(ensemble.statistics());
    for (std::size_t t = 0; t < steps; ++t) {
        ensemble.advance();
        out.steps.push_back(ensemble.statistics());
    }
    return out;
}

}  // namespace qtorus
