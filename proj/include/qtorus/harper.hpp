#pragma once

#include <cmath>
#include <numbers>
#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "qtorus/fourier.hpp"

namespace qtorus {

inline constexpr double kDefaultKick = 0.4964;

struct PhasePoint {
    double q = 0.0;
    double p = 0.0;

    static PhasePoint wrapped(double q, double p) { return {wrap_unit(q), wrap_unit(p)}; }
};

struct HarperParams {
    double chi1 = kDefaultKick;  // momentum kick, multiplies sin(2 pi q)
    double chi2 = kDefaultKick;  // position kick, multiplies sin(2 pi p')

    void validate() const {
        if (!std::isfinite(chi1) || !std::isfinite(chi2)) throw std::invalid_argument("HarperParams: non-finite kick");
    }
};

// One iteration of the classical Harper map; the updated momentum drives the
// position update.
inline PhasePoint classical_step(PhasePoint x, const HarperParams& h) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const double p = wrap_unit(x.p - h.chi1 * std::sin(two_pi * x.q));
    const double q = wrap_unit(x.q + h.chi2 * std::sin(two_pi * p));
    return {q, p};
}

using Orbit = std::vector<PhasePoint>;

// Each orbit starts with its seed and holds iterations + 1 points.
inline std::vector<Orbit> phase_portrait(const HarperParams& h, const std::vector<PhasePoint>& seeds,
                                         std::size_t iterations) {
    if (iterations < 1) throw std::invalid_argument("phase_portrait: iterations must be >= 1");
    std::vector<Orbit> out;
    out.reserve(seeds.size());
    for (const auto& s : seeds) {
        Orbit o;
        o.reserve(iterations + 1);
        PhasePoint x = PhasePoint::wrapped(s.q, s.p);
        o.push_back(x);
        for (std::size_t t = 0; t < iterations; ++t) {
            x = classical_step(x, h);
            o.push_back(x);
        }
        out.push_back(std::move(o));
    }
    return out;
}

// Fraction of cells of a cells x cells partition of the torus visited by the orbit.
inline double orbit_coverage(const Orbit& orbit, std::size_t cells = 10) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    const double c = static_cast<double>(cells);
    for (const auto& x : orbit) {
        seen.emplace(std::min(cells - 1, static_cast<std::size_t>(x.q * c)),
                     std::min(cells - 1, static_cast<std::size_t>(x.p * c)));
    }
    return static_cast<double>(seen.size()) / (c * c);
}

inline constexpr std::size_t kIslandProbeIterations = 500;
inline constexpr double kIslandCoverageThreshold = 0.5;

// Regular (island) membership: a 500-step orbit that stays below half of a 10x10
// coarse grid. Chaotic-sea orbits cover more than half within that horizon.
inline bool is_confined_orbit(PhasePoint seed, const HarperParams& h) {
    const auto orbits = phase_portrait(h, {seed}, kIslandProbeIterations);
    return orbit_coverage(orbits.front()) < kIslandCoverageThreshold;
}

// Quantized Harper propagator U = exp(i N chi2 cos 2 pi q) exp(i N chi1 cos 2 pi p).
// The momentum factor acts first.
class QuantumPropagator {
public:
    QuantumPropagator(TorusGeometry g, HarperParams h) : geometry_(g), params_(h) {
        h.validate();
        const double n = static_cast<double>(g.dim);
        position_phase_.resize(static_cast<Eigen::Index>(g.dim));
        momentum_phase_.resize(static_cast<Eigen::Index>(g.dim));
        for (std::size_t i = 0; i < g.dim; ++i) {
            const double c = std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
            position_phase_[static_cast<Eigen::Index>(i)] = std::polar(1.0, n * h.chi2 * c);
            momentum_phase_[static_cast<Eigen::Index>(i)] = std::polar(1.0, n * h.chi1 * c);
        }
    }

    const TorusGeometry& geometry() const noexcept { return geometry_; }
    const HarperParams& params() const noexcept { return params_; }
    const Amplitudes& position_phase() const noexcept { return position_phase_; }
    const Amplitudes& momentum_phase() const noexcept { return momentum_phase_; }

    StateVector apply(const StateVector& psi) const {
        require_same_geometry(geometry_, psi.geometry(), "QuantumPropagator::apply");
        Amplitudes v = psi.amplitudes();
        apply_in_place(v.data());
        return StateVector(geometry_, std::move(v));
    }

    // U rho U^dagger via two passes of the split-step over columns.
    DensityOperator apply(const DensityOperator& rho) const {
        require_same_geometry(geometry_, rho.geometry(), "QuantumPropagator::apply");
        OperatorMatrix m = rho.matrix();
        apply_columns(m);
        OperatorMatrix t = m.adjoint();
        apply_columns(t);
        DensityOperator out(geometry_, t.adjoint());
        out.symmetrize();
        return out;
    }

    StateVector apply(const StateVector& psi, std::size_t steps) const {
        StateVector out = psi;
        for (std::size_t s = 0; s < steps; ++s) out = apply(out);
        return out;
    }

private:
    void apply_in_place(cplx* v) const {
        const std::size_t n = geometry_.dim;
        const double scale = 1.0 / static_cast<double>(n);
        std::vector<cplx> freq(n);
        dft_forward(v, freq.data(), n);
        for (std::size_t m = 0; m < n; ++m) freq[m] *= momentum_phase_[static_cast<Eigen::Index>(m)];
        dft_backward(freq.data(), v, n);
        for (std::size_t i = 0; i < n; ++i) v[i] *= scale * position_phase_[static_cast<Eigen::Index>(i)];
    }

    void apply_columns(OperatorMatrix& m) const {
        for (Eigen::Index c = 0; c < m.cols(); ++c) apply_in_place(m.col(c).data());
    }

    TorusGeometry geometry_;
    HarperParams params_;
    Amplitudes position_phase_;
    Amplitudes momentum_phase_;
};

}  // namespace qtorus
