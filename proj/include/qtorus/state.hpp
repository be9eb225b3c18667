#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include "qtorus/geometry.hpp"
#include "qtorus/random.hpp"

namespace qtorus {

using cplx = std::complex<double>;
using Amplitudes = Eigen::VectorXcd;
using OperatorMatrix = Eigen::MatrixXcd;

inline constexpr double kNormTolerance = 1e-12;

// Pure state in the position basis: amplitude i is <q_i|psi>.
class StateVector {
public:
    StateVector(TorusGeometry geometry, Amplitudes amplitudes) : geometry_(geometry), amp_(std::move(amplitudes)) {
        if (static_cast<std::size_t>(amp_.size()) != geometry_.dim) {
            throw std::invalid_argument("StateVector: amplitude count does not match N=2^k");
        }
    }

    // Builds a state from arbitrary nonzero amplitudes, rescaled to unit norm.
    static StateVector normalized(TorusGeometry geometry, Amplitudes amplitudes) {
        const double n = amplitudes.norm();
        if (!(n > 0.0) || !std::isfinite(n)) throw std::invalid_argument("StateVector: zero or non-finite vector");
        amplitudes /= n;
        return StateVector(geometry, std::move(amplitudes));
    }

    static StateVector basis(TorusGeometry geometry, std::size_t index) {
        if (index >= geometry.dim) throw std::invalid_argument("StateVector::basis: index out of range");
        Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(geometry.dim));
        a[static_cast<Eigen::Index>(index)] = 1.0;
        return StateVector(geometry, std::move(a));
    }

    const TorusGeometry& geometry() const noexcept { return geometry_; }
    const Amplitudes& amplitudes() const noexcept { return amp_; }
    Amplitudes& amplitudes() noexcept { return amp_; }
    std::size_t dim() const noexcept { return geometry_.dim; }

    cplx operator[](std::size_t i) const { return amp_[static_cast<Eigen::Index>(i)]; }

    double norm() const { return amp_.norm(); }
    bool is_normalized(double tol = kNormTolerance) const { return std::abs(amp_.squaredNorm() - 1.0) <= tol; }

    cplx inner(const StateVector& other) const { return amp_.dot(other.amp_); }

private:
    TorusGeometry geometry_;
    Amplitudes amp_;
};

// N x N operator in the position basis; carries mixed states.
class DensityOperator {
public:
    DensityOperator(TorusGeometry geometry, OperatorMatrix matrix) : geometry_(geometry), m_(std::move(matrix)) {
        const auto n = static_cast<Eigen::Index>(geometry_.dim);
        if (m_.rows() != n || m_.cols() != n) {
            throw std::invalid_argument("DensityOperator: matrix shape does not match N=2^k");
        }
    }

    static DensityOperator pure(const StateVector& psi) {
        return DensityOperator(psi.geometry(), psi.amplitudes() * psi.amplitudes().adjoint());
    }

    static DensityOperator maximally_mixed(TorusGeometry geometry) {
        const auto n = static_cast<Eigen::Index>(geometry.dim);
        return DensityOperator(geometry, OperatorMatrix::Identity(n, n) / static_cast<double>(n));
    }

    const TorusGeometry& geometry() const noexcept { return geometry_; }
    const OperatorMatrix& matrix() const noexcept { return m_; }
    OperatorMatrix& matrix() noexcept { return m_; }
    std::size_t dim() const noexcept { return geometry_.dim; }

    cplx operator()(std::size_t i, std::size_t j) const {
        return m_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

    cplx trace() const { return m_.trace(); }
    double purity() const { return m_.cwiseAbs2().sum(); }  // Tr rho^2 for Hermitian rho

    double hermiticity_residual() const { return (m_ - m_.adjoint()).cwiseAbs().maxCoeff(); }

    // Restores exact Hermiticity after accumulation round-off.
    void symmetrize() {
        OperatorMatrix h = 0.5 * (m_ + m_.adjoint());
        m_ = std::move(h);
    }

    Eigen::VectorXd eigenvalues() const {
        Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(m_, Eigen::EigenvaluesOnly);
        return es.eigenvalues();
    }

    double min_eigenvalue() const { return eigenvalues().minCoeff(); }

    double max_abs_difference(const DensityOperator& other) const { return (m_ - other.m_).cwiseAbs().maxCoeff(); }

private:
    TorusGeometry geometry_;
    OperatorMatrix m_;
};

// Haar-random pure state: normalized vector of i.i.d. standard complex Gaussians.
inline StateVector haar_random_state(TorusGeometry geometry, RngStream& rng) {
    Amplitudes a(static_cast<Eigen::Index>(geometry.dim));
    for (auto& z : a) z = cplx(rng.normal(), rng.normal());
    return StateVector::normalized(geometry, std::move(a));
}

// Random full-rank density operator G G^dagger / Tr, G Ginibre of the given rank.
inline DensityOperator random_density(TorusGeometry geometry, RngStream& rng, std::size_t rank = 0) {
    const auto n = static_cast<Eigen::Index>(geometry.dim);
    const auto r = static_cast<Eigen::Index>(rank == 0 ? geometry.dim : rank);
    OperatorMatrix g(n, r);
    for (Eigen::Index j = 0; j < r; ++j)
        for (Eigen::Index i = 0; i < n; ++i) g(i, j) = cplx(rng.normal(), rng.normal());
    OperatorMatrix rho = g * g.adjoint();
    rho /= rho.trace().real();
    DensityOperator out(geometry, std::move(rho));
    out.symmetrize();
    return out;
}

// (|0...0> + |1...1>)/sqrt(2): amplitude 1/sqrt(2) at indices 0 and N-1.
inline StateVector ghz_state(TorusGeometry geometry) {
    Amplitudes a = Amplitudes::Zero(static_cast<Eigen::Index>(geometry.dim));
    a[0] = std::sqrt(0.5);
    a[static_cast<Eigen::Index>(geometry.dim - 1)] = std::sqrt(0.5);
    return StateVector(geometry, std::move(a));
}

}  // namespace qtorus
