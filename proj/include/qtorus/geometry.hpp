#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qtorus {

inline constexpr int kMinQubits = 2;
inline constexpr int kMaxQubits = 14;

// Finite Hilbert space of k qubits identified with an N = 2^k point grid on
// the unit torus. Position label i <-> q_i = i/N, qubit j <-> bit j of i.
struct TorusGeometry {
    int qubits = 0;
    std::size_t dim = 0;
    double hbar_eff = 0.0;

    friend bool operator==(const TorusGeometry& a, const TorusGeometry& b) {
        return a.qubits == b.qubits && a.dim == b.dim;
    }
};

inline TorusGeometry make_geometry(int k) {
    if (k < kMinQubits || k > kMaxQubits) {
        throw std::invalid_argument("qubit count k=" + std::to_string(k) + " out of range [" +
                                    std::to_string(kMinQubits) + ", " + std::to_string(kMaxQubits) + "]");
    }
    TorusGeometry g;
    g.qubits = k;
    g.dim = std::size_t{1} << k;
    g.hbar_eff = 1.0 / (2.0 * std::numbers::pi * static_cast<double>(g.dim));
    return g;
}

inline void require_same_geometry(const TorusGeometry& a, const TorusGeometry& b, const char* what) {
    if (!(a == b)) {
        throw std::invalid_argument(std::string(what) + ": geometry mismatch (k=" + std::to_string(a.qubits) +
                                    " vs k=" + std::to_string(b.qubits) + ")");
    }
}

// Reduce a real coordinate into [0, 1).
inline double wrap_unit(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

// Signed distance on the unit circle, in [-1/2, 1/2).
inline double circular_delta(double a, double b) {
    double d = wrap_unit(a - b);
    return d >= 0.5 ? d - 1.0 : d;
}

}  // namespace qtorus
