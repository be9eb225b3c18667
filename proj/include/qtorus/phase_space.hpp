#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qtorus/fourier.hpp"

namespace qtorus {

// Periodized Gaussian wave packet of width 1/sqrt(N) in q and p, centred at
// (q0, p0). Coordinates are wrapped onto the torus first. The plane-wave factor
// is anchored at q = 0; images m in {-1, 0, 1} are summed.
inline StateVector coherent_state(TorusGeometry g, double q0, double p0) {
    if (!std::isfinite(q0) || !std::isfinite(p0)) throw std::invalid_argument("coherent_state: non-finite centre");
    q0 = wrap_unit(q0);
    p0 = wrap_unit(p0);
    const double n = static_cast<double>(g.dim);
    constexpr double pi = std::numbers::pi;
    Amplitudes a(static_cast<Eigen::Index>(g.dim));
    for (std::size_t i = 0; i < g.dim; ++i) {
        const double q = static_cast<double>(i) / n;
        cplx sum = 0.0;
        for (int m = -1; m <= 1; ++m) {
            const double x = q - q0 + m;
            const double env = std::exp(-pi * n * x * x);
            sum += env * std::polar(1.0, 2.0 * pi * n * p0 * (q + m));
        }
        a[static_cast<Eigen::Index>(i)] = sum;
    }
    return StateVector::normalized(g, std::move(a));
}

// Circular mean of a distribution over the N grid points, as a torus coordinate.
inline double circular_mean(const Eigen::VectorXd& weights) {
    const double n = static_cast<double>(weights.size());
    cplx phasor = 0.0;
    for (Eigen::Index i = 0; i < weights.size(); ++i) {
        phasor += weights[i] * std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(i) / n);
    }
    return wrap_unit(std::arg(phasor) / (2.0 * std::numbers::pi));
}

inline double position_mean(const StateVector& psi) { return circular_mean(psi.amplitudes().cwiseAbs2()); }

inline double momentum_mean(const StateVector& psi) {
    return circular_mean(position_to_momentum(psi).amplitudes().cwiseAbs2());
}

struct PhaseCentroid {
    double q = 0.0;
    double p = 0.0;
};

// Husimi-weighted centroid: weights |<alpha|psi>|^2 over a grid x grid lattice of
// coherent states, reduced with circular means along each axis.
inline PhaseCentroid husimi_centroid(const StateVector& psi, std::size_t grid = 32) {
    const TorusGeometry g = psi.geometry();
    cplx zq = 0.0, zp = 0.0;
    for (std::size_t iq = 0; iq < grid; ++iq) {
        for (std::size_t ip = 0; ip < grid; ++ip) {
            const double q = static_cast<double>(iq) / static_cast<double>(grid);
            const double p = static_cast<double>(ip) / static_cast<double>(grid);
            const double w = std::norm(coherent_state(g, q, p).inner(psi));
            zq += w * std::polar(1.0, 2.0 * std::numbers::pi * q);
            zp += w * std::polar(1.0, 2.0 * std::numbers::pi * p);
        }
    }
    return {wrap_unit(std::arg(zq) / (2.0 * std::numbers::pi)), wrap_unit(std::arg(zp) / (2.0 * std::numbers::pi))};
}

}  // namespace qtorus
