#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtorus/state.hpp"

namespace qtorus {

using QubitMask = std::uint32_t;  // bit j set <=> qubit j in the subset

enum class EstimatorKind { pure_exact, mixed_upper_bound, mixed_optimized, mixed_lower_bound };

inline const char* to_string(EstimatorKind k) {
    switch (k) {
        case EstimatorKind::pure_exact: return "pure-exact";
        case EstimatorKind::mixed_upper_bound: return "mixed-upper-bound";
        case EstimatorKind::mixed_optimized: return "mixed-optimized";
        case EstimatorKind::mixed_lower_bound: return "mixed-lower-bound";
    }
    return "unknown";
}

struct ConcurrenceResult {
    double value = 0.0;
    EstimatorKind kind = EstimatorKind::pure_exact;
    std::vector<double> purities;  // indexed by mask - 1 (pure and lower-bound cases)
    std::size_t trajectories = 0;
    double std_error = 0.0;
};

// Prefactor 2^{1 - k/2} of the k-partite concurrence.
inline double concurrence_prefactor(int k) { return std::pow(2.0, 1.0 - 0.5 * k); }

// Closed form for GHZ states: every proper subset has purity 1/2.
inline double ghz_concurrence(int k) {
    if (k < 2) throw std::invalid_argument("ghz_concurrence: k must be >= 2");
    return concurrence_prefactor(k) * std::sqrt(std::ldexp(1.0, k - 1) - 1.0);
}

// Value of the formula with every subset purity set to zero.
inline double concurrence_formula_max(int k) { return concurrence_prefactor(k) * std::sqrt(std::ldexp(1.0, k) - 2.0); }

namespace detail {

inline void require_proper_subset(QubitMask mask, int k) {
    const QubitMask full = (QubitMask{1} << k) - 1;
    if (mask == 0 || mask >= full) {
        throw std::invalid_argument("subset mask " + std::to_string(mask) + " is not a nonempty proper subset of " +
                                    std::to_string(k) + " qubits");
    }
}

// Splits position index i into (row over qubits in mask, column over the rest),
// each packed in increasing qubit order.
struct SubsetSplit {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::size_t> row_of;
    std::vector<std::size_t> col_of;

    SubsetSplit(QubitMask mask, int k) {
        const std::size_t n = std::size_t{1} << k;
        rows = std::size_t{1} << std::popcount(mask);
        cols = n / rows;
        row_of.resize(n);
        col_of.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t r = 0, c = 0, rb = 0, cb = 0;
            for (int j = 0; j < k; ++j) {
                const std::size_t bit = (i >> j) & 1U;
                if ((mask >> j) & 1U) r |= bit << rb++;
                else c |= bit << cb++;
            }
            row_of[i] = r;
            col_of[i] = c;
        }
    }
};

inline OperatorMatrix split_matrix(const Amplitudes& amp, const SubsetSplit& s) {
    OperatorMatrix m(static_cast<Eigen::Index>(s.rows), static_cast<Eigen::Index>(s.cols));
    for (std::size_t i = 0; i < s.row_of.size(); ++i) {
        m(static_cast<Eigen::Index>(s.row_of[i]), static_cast<Eigen::Index>(s.col_of[i])) =
            amp[static_cast<Eigen::Index>(i)];
    }
    return m;
}

inline double gram_purity(const OperatorMatrix& m) {
    // Reduced states on either side share their nonzero spectrum; use the smaller Gram matrix.
    const OperatorMatrix gram = m.rows() <= m.cols() ? OperatorMatrix(m * m.adjoint()) : OperatorMatrix(m.adjoint() * m);
    return gram.cwiseAbs2().sum();
}

inline double split_purity(const Amplitudes& amp, const SubsetSplit& s) { return gram_purity(split_matrix(amp, s)); }

// Below this, 1 - Tr rho_A^2 is recomputed from 2x2 minors to avoid cancellation.
inline constexpr double kMinorDeficitThreshold = 1e-6;

// (Tr rho_A)^2 - Tr rho_A^2 = 2 sum_{i<j, k<l} |M_ik M_jl - M_il M_jk|^2, a sum of
// nonnegative terms that vanishes exactly on product states.
inline double minor_deficit(const OperatorMatrix& m) {
    const OperatorMatrix a = m.rows() <= m.cols() ? m : OperatorMatrix(m.transpose());
    double sum = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i + 1; j < a.rows(); ++j)
            for (Eigen::Index k = 0; k < a.cols(); ++k)
                for (Eigen::Index l = k + 1; l < a.cols(); ++l) sum += std::norm(a(i, k) * a(j, l) - a(i, l) * a(j, k));
    return 2.0 * sum;
}

// 1 - Tr rho_A^2 for the cut described by s.
inline double split_deficit(const Amplitudes& amp, const SubsetSplit& s) {
    const OperatorMatrix m = split_matrix(amp, s);
    const double deficit = 1.0 - gram_purity(m);
    return deficit < kMinorDeficitThreshold ? minor_deficit(m) : deficit;
}

}  // namespace detail

// Tr rho_A^2 for the reduced state of |psi> on the qubits in mask.
inline double subset_purity(const StateVector& psi, QubitMask mask) {
    const int k = psi.geometry().qubits;
    detail::require_proper_subset(mask, k);
    return detail::split_purity(psi.amplitudes(), detail::SubsetSplit(mask, k));
}

inline constexpr double kConcurrenceNormTolerance = 1e-9;

// C_k = 2^{1-k/2} sqrt( sum_A (1 - Tr rho_A^2) ) over all 2^k - 2 nonempty proper subsets.
inline ConcurrenceResult pure_concurrence(const StateVector& psi) {
    if (!psi.is_normalized(kConcurrenceNormTolerance)) {
        throw std::invalid_argument("pure_concurrence: state not normalized (|psi|^2 = " +
                                    std::to_string(psi.amplitudes().squaredNorm()) + ")");
    }
    const int k = psi.geometry().qubits;
    const QubitMask full = (QubitMask{1} << k) - 1;
    ConcurrenceResult r;
    r.kind = EstimatorKind::pure_exact;
    r.purities.reserve(full - 1);
    double deficit = 0.0;
    for (QubitMask mask = 1; mask < full; ++mask) {
        const double d = detail::split_deficit(psi.amplitudes(), detail::SubsetSplit(mask, k));
        r.purities.push_back(1.0 - d);
        deficit += d;
    }
    r.value = concurrence_prefactor(k) * std::sqrt(std::max(0.0, deficit));
    return r;
}

// Tr rho_A^2 for the reduced state of a density operator.
inline double reduced_purity(const DensityOperator& rho, QubitMask mask) {
    const int k = rho.geometry().qubits;
    detail::require_proper_subset(mask, k);
    const detail::SubsetSplit s(mask, k);
    std::vector<std::size_t> index(rho.dim());  // index[row + rows * col] = position label
    for (std::size_t i = 0; i < rho.dim(); ++i) index[s.row_of[i] + s.rows * s.col_of[i]] = i;
    OperatorMatrix reduced = OperatorMatrix::Zero(static_cast<Eigen::Index>(s.rows), static_cast<Eigen::Index>(s.rows));
    const auto& m = rho.matrix();
    for (std::size_t c = 0; c < s.cols; ++c) {
        const std::size_t* block = index.data() + s.rows * c;
        for (std::size_t a2 = 0; a2 < s.rows; ++a2) {
            const auto col = static_cast<Eigen::Index>(block[a2]);
            for (std::size_t a1 = 0; a1 < s.rows; ++a1) {
                reduced(static_cast<Eigen::Index>(a1), static_cast<Eigen::Index>(a2)) +=
                    m(static_cast<Eigen::Index>(block[a1]), col);
            }
        }
    }
    return reduced.cwiseAbs2().sum();
}

// Lower bound on the convex-roof C_k from purities of rho and its marginals:
//   C_k(rho)^2 >= 2^{2-k} sum_A max(0, Tr rho^2 - min(Tr rho_A^2, Tr rho_Abar^2)).
// Each term bounds the squared bipartite concurrence of the cut A|Abar from below;
// the bound is exact on pure states.
inline ConcurrenceResult mixed_lower_bound(const DensityOperator& rho) {
    const int k = rho.geometry().qubits;
    const QubitMask full = (QubitMask{1} << k) - 1;
    const double total = rho.purity();
    ConcurrenceResult r;
    r.kind = EstimatorKind::mixed_lower_bound;
    r.purities.resize(full - 1);
    for (QubitMask mask = 1; mask < full; ++mask) r.purities[mask - 1] = reduced_purity(rho, mask);
    double sum = 0.0;
    for (QubitMask mask = 1; mask < full; ++mask) {
        const double pa = r.purities[mask - 1];
        const double pc = r.purities[(full ^ mask) - 1];
        sum += std::max(0.0, total - std::min(pa, pc));
    }
    r.value = concurrence_prefactor(k) * std::sqrt(sum);
    return r;
}

struct ConcurrenceProfile {
    std::size_t samples = 0;
    double mean = 0.0;
    double median = 0.0;
    double mode = 0.0;  // maximum of a Gaussian kernel density estimate
    double stddev = 0.0;
    double min = 0.0;
    double max = 0.0;
};

inline ConcurrenceProfile summarize_profile(std::vector<double> values) {
    if (values.empty()) throw std::invalid_argument("summarize_profile: no samples");
    std::sort(values.begin(), values.end());
    ConcurrenceProfile s;
    s.samples = values.size();
    const double n = static_cast<double>(values.size());
    for (double v : values) s.mean += v;
    s.mean /= n;
    for (double v : values) s.stddev += (v - s.mean) * (v - s.mean);
    s.stddev = values.size() > 1 ? std::sqrt(s.stddev / (n - 1.0)) : 0.0;
    const std::size_t mid = values.size() / 2;
    s.median = values.size() % 2 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
    s.min = values.front();
    s.max = values.back();
    if (s.stddev == 0.0) {
        s.mode = s.median;
        return s;
    }
    // Silverman bandwidth, 512-point evaluation grid.
    const double h = 1.06 * s.stddev * std::pow(n, -0.2);
    double best = -1.0;
    constexpr int grid = 512;
    for (int g = 0; g <= grid; ++g) {
        const double x = s.min + (s.max - s.min) * g / grid;
        double density = 0.0;
        for (double v : values) density += std::exp(-0.5 * ((x - v) / h) * ((x - v) / h));
        if (density > best) {
            best = density;
            s.mode = x;
        }
    }
    return s;
}

// Distribution of C_k over Haar-random pure states.
inline ConcurrenceProfile random_state_concurrence_profile(TorusGeometry g, std::size_t samples, RngStream& rng) {
    if (samples < 1) throw std::invalid_argument("random_state_concurrence_profile: samples must be >= 1");
    std::vector<double> values;
    values.reserve(samples);
    for (std::size_t s = 0; s < samples; ++s) values.push_back(pure_concurrence(haar_random_state(g, rng)).value);
    return summarize_profile(std::move(values));
}

inline constexpr int kOptimizerMaxQubits = 4;
inline constexpr std::size_t kOptimizerMaxRank = 8;
inline constexpr double kRankThreshold = 1e-12;

namespace detail {

inline OperatorMatrix haar_unitary(Eigen::Index m, RngStream& rng) {
    OperatorMatrix g(m, m);
    for (Eigen::Index j = 0; j < m; ++j)
        for (Eigen::Index i = 0; i < m; ++i) g(i, j) = cplx(rng.normal(), rng.normal()) / std::sqrt(2.0);
    Eigen::HouseholderQR<OperatorMatrix> qr(g);
    OperatorMatrix q = qr.householderQ();
    const OperatorMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Eigen::Index j = 0; j < m; ++j) {
        const cplx d = r(j, j);
        if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
    }
    return q;
}

// exp(i step H) for a random Hermitian H with unit Frobenius norm.
inline OperatorMatrix random_rotation(Eigen::Index m, double step, RngStream& rng) {
    OperatorMatrix h(m, m);
    for (Eigen::Index j = 0; j < m; ++j) {
        h(j, j) = rng.normal();
        for (Eigen::Index i = 0; i < j; ++i) {
            h(i, j) = cplx(rng.normal(), rng.normal()) / std::sqrt(2.0);
            h(j, i) = std::conj(h(i, j));
        }
    }
    h /= h.norm();
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(h);
    const Eigen::VectorXcd phases = (cplx(0.0, step) * es.eigenvalues().cast<cplx>()).array().exp();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

// Upper bound on the convex roof of C_k by searching over decompositions
//   sqrt(p_j) |phi_j> = sum_i V_{ji} sqrt(lambda_i) |e_i>,   V unitary,
// with a (1+1) evolution strategy on V and several random restarts.
inline ConcurrenceResult mixed_concurrence_optimized(const DensityOperator& rho, std::size_t iterations,
                                                     RngStream& rng, std::size_t restarts = 4) {
    const TorusGeometry g = rho.geometry();
    if (g.qubits > kOptimizerMaxQubits) {
        throw std::invalid_argument("mixed_concurrence_optimized: k=" + std::to_string(g.qubits) +
                                    " exceeds the cost guard k <= 4");
    }
    Eigen::SelfAdjointEigenSolver<OperatorMatrix> es(rho.matrix());
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i)
        if (es.eigenvalues()[i] > kRankThreshold) support.push_back(i);
    if (support.empty()) throw std::invalid_argument("mixed_concurrence_optimized: zero operator");
    if (support.size() > kOptimizerMaxRank) {
        throw std::invalid_argument("mixed_concurrence_optimized: rank " + std::to_string(support.size()) +
                                    " exceeds the cost guard rank <= 8");
    }
    const auto r = static_cast<Eigen::Index>(support.size());
    OperatorMatrix w(static_cast<Eigen::Index>(g.dim), r);
    for (Eigen::Index c = 0; c < r; ++c) {
        w.col(c) = es.eigenvectors().col(support[static_cast<std::size_t>(c)]) *
                   std::sqrt(es.eigenvalues()[support[static_cast<std::size_t>(c)]]);
    }

    ConcurrenceResult result;
    result.kind = EstimatorKind::mixed_optimized;
    if (r == 1) {
        result.value = pure_concurrence(StateVector::normalized(g, w.col(0))).value;
        return result;
    }

    auto average = [&](const OperatorMatrix& v) {
        const OperatorMatrix phi = w * v.transpose();
        double total = 0.0;
        for (Eigen::Index j = 0; j < phi.cols(); ++j) {
            const double p = phi.col(j).squaredNorm();
            if (p < 1e-300) continue;
            total += p * pure_concurrence(StateVector(g, phi.col(j) / std::sqrt(p))).value;
        }
        return total;
    };

    double best = std::numeric_limits<double>::infinity();
    const std::size_t per_restart = std::max<std::size_t>(1, iterations / std::max<std::size_t>(1, restarts));
    for (std::size_t start = 0; start < std::max<std::size_t>(1, restarts); ++start) {
        OperatorMatrix v = start == 0 ? OperatorMatrix(OperatorMatrix::Identity(r, r)) : detail::haar_unitary(r, rng);
        double current = average(v);
        double step = 0.5;
        for (std::size_t it = 0; it < per_restart; ++it) {
            OperatorMatrix trial = detail::random_rotation(r, step, rng) * v;
            const double f = average(trial);
            if (f < current) {
                v = std::move(trial);
                current = f;
                step = std::min(step * 1.5, 2.0);
            } else {
                step = std::max(step * 0.92, 1e-6);
            }
        }
        best = std::min(best, current);
    }
    result.value = best;
    return result;
}

}  // namespace qtorus
