#pragma once

#include <unsupported/Eigen/FFT>
#include <cmath>
#include <vector>

#include "qtorus/state.hpp"

namespace qtorus {

namespace detail {

inline Eigen::FFT<double>& fft_engine() {
    // Plans are cached per thread; the engine itself is not safe to share.
    thread_local Eigen::FFT<double> engine = [] {
        Eigen::FFT<double> e;
        e.SetFlag(Eigen::FFT<double>::Unscaled);
        return e;
    }();
    return engine;
}

}  // namespace detail

// out[m] = sum_n in[n] exp(-2 pi i m n / N), no normalization. in and out must not alias.
inline void dft_forward(const cplx* in, cplx* out, std::size_t n) {
    detail::fft_engine().fwd(out, in, static_cast<Eigen::Index>(n));
}

// out[n] = sum_m in[m] exp(+2 pi i m n / N), no normalization. in and out must not alias.
inline void dft_backward(const cplx* in, cplx* out, std::size_t n) {
    detail::fft_engine().inv(out, in, static_cast<Eigen::Index>(n));
}

// Unitary DFT with kernel exp(-2 pi i m n / N)/sqrt(N).
inline StateVector position_to_momentum(const StateVector& psi) {
    const std::size_t n = psi.dim();
    Amplitudes out(static_cast<Eigen::Index>(n));
    dft_forward(psi.amplitudes().data(), out.data(), n);
    out /= std::sqrt(static_cast<double>(n));
    return StateVector(psi.geometry(), std::move(out));
}

inline StateVector momentum_to_position(const StateVector& phi) {
    const std::size_t n = phi.dim();
    Amplitudes out(static_cast<Eigen::Index>(n));
    dft_backward(phi.amplitudes().data(), out.data(), n);
    out /= std::sqrt(static_cast<double>(n));
    return StateVector(phi.geometry(), std::move(out));
}

}  // namespace qtorus
