#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "qtorus/state.hpp"

namespace qtorus {

// Discrete phase-space displacement by (a/N, b/N), both labels reduced mod N.
struct TranslationIndex {
    std::size_t a = 0;
    std::size_t b = 0;

    static TranslationIndex reduced(long long a, long long b, std::size_t n) {
        const auto m = static_cast<long long>(n);
        return {static_cast<std::size_t>(((a % m) + m) % m), static_cast<std::size_t>(((b % m) + m) % m)};
    }

    bool is_identity() const noexcept { return a == 0 && b == 0; }

    friend bool operator==(const TranslationIndex&, const TranslationIndex&) = default;
};

namespace detail {

// exp(i pi * num / N) with num reduced mod 2N in integer arithmetic.
inline cplx half_root_of_unity(std::uint64_t num, std::size_t n) {
    const std::uint64_t two_n = 2 * static_cast<std::uint64_t>(n);
    const double angle = std::numbers::pi * static_cast<double>(num % two_n) / static_cast<double>(n);
    return {std::cos(angle), std::sin(angle)};
}

}  // namespace detail

// Weyl translation T_{a,b} = exp(i pi a b / N) X^a Z^b, where
// (X^a psi)_{i+a} = psi_i and (Z^b psi)_i = exp(2 pi i b i / N) psi_i.
inline StateVector apply_translation(const StateVector& psi, TranslationIndex t) {
    if (t.is_identity()) return psi;
    const std::size_t n = psi.dim();
    Amplitudes out(static_cast<Eigen::Index>(n));
    const std::uint64_t ab = static_cast<std::uint64_t>(t.a) * t.b;
    for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t num = 2 * static_cast<std::uint64_t>(t.b) * j + ab;
        out[static_cast<Eigen::Index>((j + t.a) % n)] = detail::half_root_of_unity(num, n) * psi[j];
    }
    return StateVector(psi.geometry(), std::move(out));
}

// T rho T^dagger; the Weyl phase cancels, leaving a cyclic shift plus a boost phase
// exp(2 pi i b (i - j) / N) on entry (i, j).
inline DensityOperator apply_translation(const DensityOperator& rho, TranslationIndex t) {
    if (t.is_identity()) return rho;
    const std::size_t n = rho.dim();
    std::vector<cplx> boost(n);
    for (std::size_t d = 0; d < n; ++d) boost[d] = detail::half_root_of_unity(2 * t.b * d, n);
    OperatorMatrix out(rho.matrix().rows(), rho.matrix().cols());
    const auto& m = rho.matrix();
    for (std::size_t j = 0; j < n; ++j) {
        const auto col = static_cast<Eigen::Index>((j + t.a) % n);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t d = (i + n - j) % n;
            out(static_cast<Eigen::Index>((i + t.a) % n), col) =
                boost[d] * m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        }
    }
    return DensityOperator(rho.geometry(), std::move(out));
}

}  // namespace qtorus
