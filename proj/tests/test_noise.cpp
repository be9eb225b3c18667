#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <numbers>

#include "oracles.hpp"
#include "qtorus/qtorus.hpp"

using namespace qtorus;

namespace {

double max_entry(const OperatorMatrix& m) { return m.cwiseAbs().maxCoeff(); }

DensityOperator coherent_rho(int k, double q0 = 0.25, double p0 = 0.25) {
    return DensityOperator::pure(coherent_state(make_geometry(k), q0, p0));
}

}  // namespace

TEST_CASE("zero noise kernel is a delta") {
    const auto kernel = make_kernel(make_geometry(5), 0.0);
    CHECK((kernel.chord_weights.array() == 1.0).all());
    CHECK(std::abs(kernel.weights(0, 0) - 1.0) < 1e-15);
    CHECK(std::abs(kernel.weight_sum() - 1.0) < 1e-15);
    CHECK(kernel.kraus_terms.size() == 1);
}

TEST_CASE("kernel weights match a direct double sum") {
    for (double eps : {0.04, 0.2}) {
        const auto g = make_geometry(4);
        const auto kernel = make_kernel(g, eps);
        const Eigen::MatrixXd expected = oracle::diffusive_weights(g.dim, eps);
        CHECK(std::abs(kernel.chord_weights(0, 0) - 1.0) == 0.0);
        CHECK((kernel.weights - expected / expected.sum()).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("kernel normalization at the large-N parameters") {
    const auto kernel = make_kernel(make_geometry(8), 0.005);
    CHECK(std::abs(kernel.weight_sum() - 1.0) < 1e-12);
    CHECK(kernel.min_weight() > -1e-14);
    CHECK(kernel.truncated_mass < 1e-10);
    double kept = 0.0;
    for (const auto& t : kernel.kraus_terms) kept += t.weight;
    CHECK(std::abs(kept - 1.0) < 1e-12);
}

TEST_CASE("noise strength per Planck cell agrees between the two sizes") {
    const double small = 0.04 / make_geometry(5).hbar_eff;
    const double large = 0.005 / make_geometry(8).hbar_eff;
    CHECK(std::abs(small - 8.04) < 0.01);
    CHECK(std::abs(small / large - 1.0) < 0.005);
}

TEST_CASE("negative noise strength is rejected") {
    CHECK_THROWS_AS(make_kernel(make_geometry(5), -0.1), std::invalid_argument);
}

TEST_CASE("Kraus path matches the dense Kraus sum") {
    const auto g = make_geometry(4);
    RngStream rng(1);
    const auto rho = random_density(g, rng);
    const auto kernel = make_kernel(g, 0.04);
    const oracle::Mat expected = oracle::diffusive_channel(rho.matrix(), 0.04);
    CHECK(max_entry(apply_diffusive_kraus(rho, kernel).matrix() - expected) < 1e-13);
    CHECK(max_entry(apply_diffusive_chord(rho, kernel).matrix() - expected) < 1e-13);
}

TEST_CASE("Kraus and chord paths agree") {
    const auto g = make_geometry(5);
    RngStream rng(2);
    for (double eps : {0.0, 0.01, 0.04, 0.3}) {
        const auto kernel = make_kernel(g, eps);
        const auto rho = random_density(g, rng);
        CHECK(apply_diffusive_kraus(rho, kernel).max_abs_difference(apply_diffusive_chord(rho, kernel)) < 1e-10);
        const auto coh = coherent_rho(5);
        CHECK(apply_diffusive_kraus(coh, kernel).max_abs_difference(apply_diffusive_chord(coh, kernel)) < 1e-10);
    }
}

TEST_CASE("diffusive channel fixes the maximally mixed state") {
    const auto g = make_geometry(5);
    const auto kernel = make_kernel(g, 0.04);
    const auto mixed = DensityOperator::maximally_mixed(g);
    CHECK(apply_diffusive_kraus(mixed, kernel).max_abs_difference(mixed) < 1e-15);
    CHECK(apply_diffusive_chord(mixed, kernel).max_abs_difference(mixed) < 1e-15);
}

TEST_CASE("zero noise leaves the state unchanged") {
    const auto g = make_geometry(5);
    const auto kernel = make_kernel(g, 0.0);
    const auto rho = coherent_rho(5);
    CHECK(apply_diffusive_kraus(rho, kernel).max_abs_difference(rho) == 0.0);
    CHECK(apply_diffusive_chord(rho, kernel).max_abs_difference(rho) == 0.0);
}

TEST_CASE("diffusive noise lowers the purity of a coherent state") {
    const auto kernel = make_kernel(make_geometry(5), 0.04);
    const auto rho = coherent_rho(5);
    const auto once = apply_diffusive_kraus(rho, kernel);
    const auto twice = apply_diffusive_kraus(once, kernel);
    CHECK(once.purity() < rho.purity() - 1e-3);
    CHECK(twice.purity() < once.purity() - 1e-3);
}

// Every chord coefficient other than the origin is scaled by c~, and |T_{mu,nu}|
// has unit entries, so |sigma(rho) - I/N| is bounded entrywise by
// N^-1 sum_{(mu,nu) != 0} c~ |chi|.
TEST_CASE("strong diffusion pushes towards the maximally mixed state") {
    const auto g = make_geometry(5);
    const auto rho = coherent_rho(5);
    const auto chord = chord_transform(rho);
    const auto mixed = DensityOperator::maximally_mixed(g);
    double previous = rho.max_abs_difference(mixed);
    for (double eps : {0.04, 0.2, 1.0}) {
        const auto kernel = make_kernel(g, eps);
        const double distance = apply_diffusive_chord(rho, kernel).max_abs_difference(mixed);
        const double bound =
            ((kernel.chord_weights.array() * chord.chi.cwiseAbs().array()).sum() - 1.0) / static_cast<double>(g.dim);
        CHECK(distance <= bound + 1e-14);
        CHECK(distance < previous);
        previous = distance;
    }
}

TEST_CASE("diffusive outputs are valid density operators") {
    for (int k : {3, 5}) {
        const auto g = make_geometry(k);
        RngStream rng(k);
        const auto kernel = make_kernel(g, 0.04);
        for (int r = 0; r < 5; ++r) {
            const auto rho = random_density(g, rng, 1 + r);
            for (const auto& out : {apply_diffusive_kraus(rho, kernel), apply_diffusive_chord(rho, kernel)}) {
                CHECK(std::abs(out.trace() - 1.0) < 1e-12);
                CHECK(out.hermiticity_residual() == 0.0);
                CHECK(out.min_eigenvalue() > -1e-10);
            }
        }
    }
}

TEST_CASE("geometry mismatch between state and kernel is rejected") {
    const auto kernel = make_kernel(make_geometry(4), 0.04);
    const auto rho = coherent_rho(5);
    CHECK_THROWS_AS(apply_diffusive_kraus(rho, kernel), std::invalid_argument);
    CHECK_THROWS_AS(apply_diffusive_chord(rho, kernel), std::invalid_argument);
}

TEST_CASE("phase damping examples") {
    const auto g = make_geometry(2);
    OperatorMatrix m = OperatorMatrix::Zero(4, 4);
    m(0, 0) = m(1, 1) = 0.5;
    m(0, 1) = m(1, 0) = 0.3;
    const DensityOperator rho(g, m);
    for (double eps : {0.0, 0.25, 1.0}) {
        const auto out = apply_pdc(rho, eps);
        CHECK(std::abs(out(0, 1) - 0.3 * (1.0 - eps)) < 1e-15);
        CHECK(out.matrix().diagonal() == rho.matrix().diagonal());
    }
    const auto full = apply_pdc(coherent_rho(4), 1.0);
    CHECK(max_entry(full.matrix() - OperatorMatrix(coherent_rho(4).matrix().diagonal().asDiagonal())) == 0.0);

    OperatorMatrix d = OperatorMatrix::Zero(4, 4);
    d.diagonal() << 0.1, 0.2, 0.3, 0.4;
    CHECK(apply_pdc(DensityOperator(g, d), 0.7).max_abs_difference(DensityOperator(g, d)) == 0.0);

    CHECK_THROWS_AS(apply_pdc(rho, -0.01), std::invalid_argument);
    CHECK_THROWS_AS(apply_pdc(rho, 1.01), std::invalid_argument);
}

TEST_CASE("depolarizing examples") {
    const auto g = make_geometry(4);
    RngStream rng(3);
    const auto rho = random_density(g, rng);
    const auto mixed = DensityOperator::maximally_mixed(g);
    CHECK(apply_dpc(rho, 1.0).max_abs_difference(mixed) < 1e-16);
    for (double eps : {0.0, 0.04, 0.5, 1.0}) {
        const auto out = apply_dpc(rho, eps);
        CHECK(std::abs(out.trace() - 1.0) < 1e-13);
        if (eps == 0.0) {
            CHECK(out.purity() == rho.purity());
        } else {
            CHECK(out.purity() < rho.purity());
        }
    }
    CHECK(std::abs(apply_dpc(mixed, 0.3).purity() - mixed.purity()) < 1e-15);
    CHECK_THROWS_AS(apply_dpc(rho, 2.0), std::invalid_argument);
}

TEST_CASE("phase damping is a uniform mixture of momentum boosts") {
    for (int k = 2; k <= 5; ++k) {
        const auto g = make_geometry(k);
        const auto n = static_cast<long long>(g.dim);
        RngStream rng(10 + k);
        const auto rho = random_density(g, rng);
        const double eps = 0.3;
        oracle::Mat expected = (1.0 - eps) * rho.matrix();
        for (long long b = 0; b < n; ++b) {
            const auto t = oracle::translation(g.dim, 0, b);
            expected += eps / double(n) * t * rho.matrix() * t.adjoint();
        }
        CHECK(max_entry(apply_pdc(rho, eps).matrix() - expected) < 1e-14);
    }
}

TEST_CASE("depolarizing is a uniform mixture of all translations") {
    for (int k = 2; k <= 4; ++k) {
        const auto g = make_geometry(k);
        const auto n = static_cast<long long>(g.dim);
        RngStream rng(20 + k);
        const auto rho = random_density(g, rng);
        const double eps = 0.3;
        oracle::Mat expected = (1.0 - eps) * rho.matrix();
        for (long long a = 0; a < n; ++a)
            for (long long b = 0; b < n; ++b) {
                const auto t = oracle::translation(g.dim, a, b);
                expected += eps / double(n * n) * t * rho.matrix() * t.adjoint();
            }
        CHECK(max_entry(apply_dpc(rho, eps).matrix() - expected) < 1e-14);
    }
}

TEST_CASE("phase damping and depolarizing outputs are valid") {
    const auto g = make_geometry(5);
    RngStream rng(4);
    for (int r = 0; r < 5; ++r) {
        const auto rho = random_density(g, rng, 2 + r);
        for (const auto& out : {apply_pdc(rho, 0.04), apply_dpc(rho, 0.04)}) {
            CHECK(std::abs(out.trace() - 1.0) < 1e-12);
            CHECK(out.hermiticity_residual() < 1e-15);
            CHECK(out.min_eigenvalue() > -1e-10);
        }
    }
}

TEST_CASE("zero noise sampling always returns the identity") {
    const auto kernel = make_kernel(make_geometry(5), 0.0);
    RngStream rng(5);
    for (int r = 0; r < 1000; ++r) CHECK(sample_translation(kernel, rng).is_identity());
}

// Pearson statistic over cells with at least 5 expected counts, the remainder
// pooled into one bin; accept below dof + 3 sqrt(2 dof).
TEST_CASE("translation sampling follows the kernel") {
    const auto g = make_geometry(5);
    const auto kernel = make_kernel(g, 0.04);
    constexpr std::size_t draws = 100000;
    Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(32, 32);
    RngStream rng(6);
    for (std::size_t r = 0; r < draws; ++r) {
        const auto t = sample_translation(kernel, rng);
        counts(static_cast<Eigen::Index>(t.a), static_cast<Eigen::Index>(t.b)) += 1.0;
    }
    double chi2 = 0.0, pooled_expected = 0.0, pooled_observed = 0.0;
    int bins = 0;
    for (int a = 0; a < 32; ++a)
        for (int b = 0; b < 32; ++b) {
            const double e = draws * kernel.weights(a, b);
            if (e >= 5.0) {
                chi2 += (counts(a, b) - e) * (counts(a, b) - e) / e;
                ++bins;
            } else {
                pooled_expected += e;
                pooled_observed += counts(a, b);
            }
        }
    if (pooled_expected > 0.0) {
        chi2 += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
        ++bins;
    }
    const double dof = bins - 1;
    REQUIRE(bins > 5);
    CHECK(chi2 < dof + 3.0 * std::sqrt(2.0 * dof));
}

TEST_CASE("translation sampling is reproducible") {
    const auto kernel = make_kernel(make_geometry(5), 0.04);
    RngStream a = RngStream::derive(99, 3), b = RngStream::derive(99, 3), c = RngStream::derive(99, 4);
    bool differs = false;
    for (int r = 0; r < 500; ++r) {
        const auto x = sample_translation(kernel, a);
        CHECK(x == sample_translation(kernel, b));
        differs = differs || !(x == sample_translation(kernel, c));
    }
    CHECK(differs);
}

TEST_CASE("mixture unravelings average to their channels") {
    const auto g = make_geometry(3);
    const auto psi = coherent_state(g, 0.25, 0.25);
    const auto rho = DensityOperator::pure(psi);
    const std::vector<TranslationMixture> channels{
        TranslationMixture::diffusive(make_kernel(g, 0.1)),
        TranslationMixture::phase_damping(g, 0.5),
        TranslationMixture::depolarizing(g, 0.5),
    };
    for (const auto& ch : channels) {
        RngStream rng(7);
        constexpr int samples = 20000;
        OperatorMatrix avg = OperatorMatrix::Zero(8, 8);
        for (int r = 0; r < samples; ++r) {
            const auto v = apply_translation(psi, ch.sample(rng)).amplitudes();
            avg += v * v.adjoint();
        }
        avg /= double(samples);
        CHECK(max_entry(avg - ch.apply(rho).matrix()) < 0.02);
    }
}
