#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "qtorus/chord.hpp"
#include "qtorus/errors.hpp"
#include "qtorus/random.hpp"

namespace qtorus {

inline constexpr double kKrausTruncation = 1e-14;   // relative to max weight
inline constexpr double kNegativeWeightSlack = 1e-12;

// Weights of the diffusive translation channel
//   sigma(rho) = sum_{a,b} c(a,b) T_{a,b} rho T_{a,b}^dagger,
// with c the 2D DFT of the chord-space weights
//   c~(mu,nu) = exp[-(1/2)(eps N/pi)^2 (sin^2(pi mu/N) + sin^2(pi nu/N))].
struct NoiseKernel {
    struct Term {
        TranslationIndex index;
        double weight = 0.0;  // renormalized over kept terms
    };

    TorusGeometry geometry;
    double epsilon = 0.0;
    Eigen::MatrixXd chord_weights;  // c~(mu, nu)
    Eigen::MatrixXd weights;        // c(a, b): row a = position shift, column b = boost
    double truncated_mass = 0.0;    // total weight dropped from the Kraus sum
    std::vector<Term> kraus_terms;  // weights >= 1e-14 max(c)

    // Inverse-CDF table over all weights, sorted by decreasing weight.
    std::vector<double> sample_cdf;
    std::vector<TranslationIndex> sample_index;

    double weight_sum() const { return weights.sum(); }
    double min_weight() const { return weights.minCoeff(); }
};

inline NoiseKernel make_kernel(TorusGeometry g, double epsilon) {
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw std::invalid_argument("make_kernel: epsilon must be finite and >= 0, got " + std::to_string(epsilon));
    }
    const std::size_t n = g.dim;
    const auto ni = static_cast<Eigen::Index>(n);
    const double nd = static_cast<double>(n);
    NoiseKernel k;
    k.geometry = g;
    k.epsilon = epsilon;

    const double width = epsilon * nd / std::numbers::pi;
    std::vector<double> s2(n);
    for (std::size_t mu = 0; mu < n; ++mu) {
        const double s = std::sin(std::numbers::pi * static_cast<double>(mu) / nd);
        s2[mu] = s * s;
    }
    k.chord_weights.resize(ni, ni);
    for (std::size_t mu = 0; mu < n; ++mu)
        for (std::size_t nu = 0; nu < n; ++nu)
            k.chord_weights(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) =
                std::exp(-0.5 * width * width * (s2[mu] + s2[nu]));

    // c(a,b) = N^-2 sum c~(mu,nu) exp(2 pi i (a mu + b nu)/N): rows then columns.
    OperatorMatrix work = k.chord_weights.cast<cplx>();
    std::vector<cplx> in(n), out(n);
    for (Eigen::Index r = 0; r < ni; ++r) {
        for (Eigen::Index c = 0; c < ni; ++c) in[static_cast<std::size_t>(c)] = work(r, c);
        dft_backward(in.data(), out.data(), n);
        for (Eigen::Index c = 0; c < ni; ++c) work(r, c) = out[static_cast<std::size_t>(c)];
    }
    for (Eigen::Index c = 0; c < ni; ++c) {
        for (Eigen::Index r = 0; r < ni; ++r) in[static_cast<std::size_t>(r)] = work(r, c);
        dft_backward(in.data(), out.data(), n);
        for (Eigen::Index r = 0; r < ni; ++r) work(r, c) = out[static_cast<std::size_t>(r)];
    }
    k.weights = work.real() / (nd * nd);

    const double most_negative = k.weights.minCoeff();
    if (most_negative < -kNegativeWeightSlack) {
        throw InvariantViolation("make_kernel: translation weight " + std::to_string(most_negative) +
                                 " below -1e-12 (invalid epsilon/N combination)");
    }
    k.weights = k.weights.cwiseMax(0.0);
    k.weights /= k.weights.sum();

    const double cutoff = kKrausTruncation * k.weights.maxCoeff();
    double kept = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        for (std::size_t b = 0; b < n; ++b) {
            const double w = k.weights(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            if (w >= cutoff) {
                k.kraus_terms.push_back({{a, b}, w});
                kept += w;
            }
        }
    }
    k.truncated_mass = 1.0 - kept;
    for (auto& t : k.kraus_terms) t.weight /= kept;

    std::vector<std::size_t> order(n * n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    const double* flat = k.weights.data();  // column-major: flat index = a + N b
    std::stable_sort(order.begin(), order.end(), [flat](std::size_t x, std::size_t y) { return flat[x] > flat[y]; });
    k.sample_cdf.reserve(order.size());
    k.sample_index.reserve(order.size());
    double acc = 0.0;
    for (std::size_t f : order) {
        acc += flat[f];
        k.sample_cdf.push_back(acc);
        k.sample_index.push_back({f % n, f / n});
    }
    return k;
}

// Literal Kraus sum over the kept translations.
inline DensityOperator apply_diffusive_kraus(const DensityOperator& rho, const NoiseKernel& kernel) {
    require_same_geometry(rho.geometry(), kernel.geometry, "apply_diffusive_kraus");
    const std::size_t n = rho.dim();
    const auto& m = rho.matrix();
    OperatorMatrix out = OperatorMatrix::Zero(m.rows(), m.cols());
    std::vector<cplx> boost(n);
    for (const auto& term : kernel.kraus_terms) {
        const auto [a, b] = term.index;
        for (std::size_t d = 0; d < n; ++d) boost[d] = term.weight * detail::half_root_of_unity(2 * b * d, n);
        for (std::size_t j = 0; j < n; ++j) {
            const auto col = static_cast<Eigen::Index>((j + a) % n);
            for (std::size_t i = 0; i < n; ++i) {
                out(static_cast<Eigen::Index>((i + a) % n), col) +=
                    boost[(i + n - j) % n] * m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
            }
        }
    }
    DensityOperator result(rho.geometry(), std::move(out));
    result.symmetrize();
    return result;
}

// Conjugation by a translation is diagonal on the translation basis, so the
// channel multiplies every chord coefficient by c~(mu, nu).
inline DensityOperator apply_diffusive_chord(const DensityOperator& rho, const NoiseKernel& kernel) {
    require_same_geometry(rho.geometry(), kernel.geometry, "apply_diffusive_chord");
    if (kernel.epsilon == 0.0) return rho;  // c~ == 1: identity channel
    ChordCoefficients c = chord_transform(rho);
    c.chi.array() *= kernel.chord_weights.array().cast<cplx>();
    DensityOperator result = inverse_chord_transform(c);
    result.symmetrize();
    return result;
}

inline constexpr std::size_t kChordPathMinDim = 64;

inline DensityOperator apply_diffusive(const DensityOperator& rho, const NoiseKernel& kernel) {
    return rho.dim() >= kChordPathMinDim ? apply_diffusive_chord(rho, kernel) : apply_diffusive_kraus(rho, kernel);
}

namespace detail {
inline void require_unit_interval(double epsilon, const char* what) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument(std::string(what) + ": epsilon must lie in [0, 1], got " + std::to_string(epsilon));
    }
}
}  // namespace detail

// Phase damping: (1 - eps) rho + eps diag(rho) in the computational basis.
inline DensityOperator apply_pdc(const DensityOperator& rho, double epsilon) {
    detail::require_unit_interval(epsilon, "apply_pdc");
    OperatorMatrix out = (1.0 - epsilon) * rho.matrix();
    out.diagonal() = rho.matrix().diagonal();
    return DensityOperator(rho.geometry(), std::move(out));
}

// Depolarizing: (1 - eps) rho + eps I/N.
inline DensityOperator apply_dpc(const DensityOperator& rho, double epsilon) {
    detail::require_unit_interval(epsilon, "apply_dpc");
    OperatorMatrix out = (1.0 - epsilon) * rho.matrix();
    out.diagonal().array() += epsilon / static_cast<double>(rho.dim());
    return DensityOperator(rho.geometry(), std::move(out));
}

// Draws (a, b) with probability c(a, b).
inline TranslationIndex sample_translation(const NoiseKernel& kernel, RngStream& rng) {
    const double u = rng.uniform() * kernel.sample_cdf.back();
    auto it = std::upper_bound(kernel.sample_cdf.begin(), kernel.sample_cdf.end(), u);
    if (it == kernel.sample_cdf.end()) --it;
    return kernel.sample_index[static_cast<std::size_t>(it - kernel.sample_cdf.begin())];
}

// Stochastic unraveling of a translation-mixture channel: each call draws the
// translation applied to one pure-state trajectory.
class TranslationMixture {
public:
    enum class Kind { identity, diffusive, phase_damping, depolarizing };

    static TranslationMixture identity(TorusGeometry g) { return TranslationMixture(Kind::identity, g, 0.0, nullptr); }

    static TranslationMixture diffusive(NoiseKernel kernel) {
        const TorusGeometry g = kernel.geometry;
        const double eps = kernel.epsilon;
        return TranslationMixture(Kind::diffusive, g, eps, std::make_shared<const NoiseKernel>(std::move(kernel)));
    }

    // (1 - eps) rho + eps N^-1 sum_b T_{0,b} rho T_{0,b}^dagger
    static TranslationMixture phase_damping(TorusGeometry g, double epsilon) {
        detail::require_unit_interval(epsilon, "phase_damping");
        return TranslationMixture(Kind::phase_damping, g, epsilon, nullptr);
    }

    // (1 - eps) rho + eps N^-2 sum_{a,b} T_{a,b} rho T_{a,b}^dagger
    static TranslationMixture depolarizing(TorusGeometry g, double epsilon) {
        detail::require_unit_interval(epsilon, "depolarizing");
        return TranslationMixture(Kind::depolarizing, g, epsilon, nullptr);
    }

    Kind kind() const noexcept { return kind_; }
    const TorusGeometry& geometry() const noexcept { return geometry_; }
    double epsilon() const noexcept { return epsilon_; }
    const NoiseKernel* kernel() const noexcept { return kernel_.get(); }

    TranslationIndex sample(RngStream& rng) const {
        switch (kind_) {
            case Kind::identity:
                return {};
            case Kind::diffusive:
                return sample_translation(*kernel_, rng);
            case Kind::phase_damping:
                if (rng.uniform() < epsilon_) return {0, static_cast<std::size_t>(rng.below(geometry_.dim))};
                return {};
            case Kind::depolarizing:
                if (rng.uniform() < epsilon_) {
                    const auto a = static_cast<std::size_t>(rng.below(geometry_.dim));
                    return {a, static_cast<std::size_t>(rng.below(geometry_.dim))};
                }
                return {};
        }
        return {};
    }

    DensityOperator apply(const DensityOperator& rho) const {
        switch (kind_) {
            case Kind::identity:
                return rho;
            case Kind::diffusive:
                return apply_diffusive(rho, *kernel_);
            case Kind::phase_damping:
                return apply_pdc(rho, epsilon_);
            case Kind::depolarizing:
                return apply_dpc(rho, epsilon_);
        }
        return rho;
    }

private:
    TranslationMixture(Kind k, TorusGeometry g, double eps, std::shared_ptr<const NoiseKernel> kernel)
        : kind_(k), geometry_(g), epsilon_(eps), kernel_(std::move(kernel)) {}

    Kind kind_;
    TorusGeometry geometry_;
    double epsilon_;
    std::shared_ptr<const NoiseKernel> kernel_;
};

}  // namespace qtorus
