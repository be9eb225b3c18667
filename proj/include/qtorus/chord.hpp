#pragma once

#include <vector>

#include "qtorus/fourier.hpp"
#include "qtorus/translation.hpp"

namespace qtorus {

// Expansion coefficients of an operator in the Weyl translation basis:
// chi(mu, nu) = Tr(T^dagger_{mu,nu} rho), and rho = (1/N) sum chi(mu, nu) T_{mu,nu}.
struct ChordCoefficients {
    TorusGeometry geometry;
    OperatorMatrix chi;  // row mu (position shift), column nu (momentum boost)
};

// Each mu-row is the DFT of the mu-th cyclic subdiagonal rho_{i+mu, i}, times a
// Weyl phase exp(-i pi mu nu / N). Cost O(N^2 log N).
inline ChordCoefficients chord_transform(const DensityOperator& rho) {
    const std::size_t n = rho.dim();
    const auto& m = rho.matrix();
    ChordCoefficients out{rho.geometry(), OperatorMatrix(m.rows(), m.cols())};
    std::vector<cplx> diag(n), freq(n);
    for (std::size_t mu = 0; mu < n; ++mu) {
        for (std::size_t i = 0; i < n; ++i) {
            diag[i] = m(static_cast<Eigen::Index>((i + mu) % n), static_cast<Eigen::Index>(i));
        }
        dft_forward(diag.data(), freq.data(), n);
        for (std::size_t nu = 0; nu < n; ++nu) {
            const cplx weyl = std::conj(detail::half_root_of_unity(static_cast<std::uint64_t>(mu) * nu, n));
            out.chi(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) = weyl * freq[nu];
        }
    }
    return out;
}

inline DensityOperator inverse_chord_transform(const ChordCoefficients& c) {
    const std::size_t n = c.geometry.dim;
    OperatorMatrix m(c.chi.rows(), c.chi.cols());
    std::vector<cplx> freq(n), diag(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t mu = 0; mu < n; ++mu) {
        for (std::size_t nu = 0; nu < n; ++nu) {
            freq[nu] = detail::half_root_of_unity(static_cast<std::uint64_t>(mu) * nu, n) *
                       c.chi(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu));
        }
        dft_backward(freq.data(), diag.data(), n);
        for (std::size_t i = 0; i < n; ++i) {
            m(static_cast<Eigen::Index>((i + mu) % n), static_cast<Eigen::Index>(i)) = inv_n * diag[i];
        }
    }
    return DensityOperator(c.geometry, std::move(m));
}

}  // namespace qtorus
