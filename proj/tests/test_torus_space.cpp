#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qtorus/qtorus.hpp"

using namespace qtorus;
using Catch::Approx;

namespace {

double max_abs(const Eigen::VectorXcd& v) { return v.cwiseAbs().maxCoeff(); }

StateVector random_state(TorusGeometry g, std::uint64_t seed) {
    RngStream rng(seed);
    return haar_random_state(g, rng);
}

}  // namespace

TEST_CASE("geometry dimension and effective Planck constant") {
    const auto g5 = make_geometry(5);
    CHECK(g5.dim == 32);
    CHECK(g5.hbar_eff == Approx(0.0049736).epsilon(1e-4));
    const auto g8 = make_geometry(8);
    CHECK(g8.dim == 256);
    CHECK(g8.hbar_eff == Approx(0.00062170).epsilon(1e-4));
    for (int k = 2; k <= 14; ++k) {
        const auto g = make_geometry(k);
        CHECK(g.dim == (std::size_t{1} << k));
        CHECK(std::abs(g.hbar_eff * 2.0 * std::numbers::pi * static_cast<double>(g.dim) - 1.0) < 1e-15);
    }
    CHECK_THROWS_AS(make_geometry(1), std::invalid_argument);
    CHECK_THROWS_AS(make_geometry(15), std::invalid_argument);
}

TEST_CASE("position to momentum matches the dense DFT matrix") {
    for (int k : {2, 3, 5, 6}) {
        const auto g = make_geometry(k);
        const auto psi = random_state(g, 10 + k);
        const Eigen::VectorXcd expected = oracle::dft(g.dim) * psi.amplitudes();
        CHECK(max_abs(position_to_momentum(psi).amplitudes() - expected) < 1e-13);
        CHECK(max_abs(momentum_to_position(position_to_momentum(psi)).amplitudes() - psi.amplitudes()) < 1e-13);
    }
}

TEST_CASE("DFT of a position eigenstate is flat") {
    const auto g = make_geometry(6);
    const auto phi = position_to_momentum(StateVector::basis(g, 0));
    for (std::size_t m = 0; m < g.dim; ++m) CHECK(std::abs(phi[m]) == Approx(1.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("DFT is unitary and has order four") {
    for (int k : {3, 8, 10}) {
        const auto g = make_geometry(k);
        const auto psi = random_state(g, 100 + k);
        const auto chi = random_state(g, 200 + k);
        const auto fpsi = position_to_momentum(psi);
        CHECK(std::abs(fpsi.norm() - psi.norm()) < 1e-13);
        CHECK(std::abs(fpsi.inner(position_to_momentum(chi)) - psi.inner(chi)) < 1e-12);
        auto four = psi;
        for (int r = 0; r < 4; ++r) four = position_to_momentum(four);
        CHECK(max_abs(four.amplitudes() - psi.amplitudes()) < 1e-12);
    }
}

TEST_CASE("coherent states are normalized and direct-sum consistent") {
    const auto g = make_geometry(5);
    RngStream rng(3);
    for (int r = 0; r < 20; ++r) {
        const double q0 = rng.uniform(), p0 = rng.uniform();
        const auto psi = coherent_state(g, q0, p0);
        CHECK(std::abs(psi.norm() - 1.0) < 1e-12);

        // Unnormalized amplitudes straight from the Gaussian image sum.
        Eigen::VectorXcd direct(g.dim);
        const double n = 32.0;
        for (std::size_t i = 0; i < g.dim; ++i) {
            std::complex<double> s = 0.0;
            for (int m = -1; m <= 1; ++m) {
                const double x = i / n - q0 + m;
                s += std::exp(-std::numbers::pi * n * x * x) * oracle::phase(n * p0 * (i / n + m));
            }
            direct[i] = s;
        }
        direct.normalize();
        CHECK(max_abs(psi.amplitudes() - direct) < 1e-12);
    }
}

TEST_CASE("distant coherent states are nearly orthogonal") {
    const auto g = make_geometry(8);
    CHECK(std::abs(coherent_state(g, 0.0, 0.0).inner(coherent_state(g, 0.5, 0.5))) < 1e-6);
}

TEST_CASE("coherent state centroid sits at its label") {
    const auto g = make_geometry(8);
    const auto psi = coherent_state(g, 0.3, 0.7);
    CHECK(std::abs(circular_delta(position_mean(psi), 0.3)) < 1e-3);
    CHECK(std::abs(circular_delta(momentum_mean(psi), 0.7)) < 1e-3);
    const auto c = husimi_centroid(psi);
    CHECK(std::abs(circular_delta(c.q, 0.3)) < 0.02);
    CHECK(std::abs(circular_delta(c.p, 0.7)) < 0.02);
}

TEST_CASE("translations agree with the dense Weyl operators") {
    for (int k : {2, 3}) {
        const auto g = make_geometry(k);
        const auto n = static_cast<long long>(g.dim);
        const auto psi = random_state(g, 5);
        for (long long a = 0; a < n; ++a)
            for (long long b = 0; b < n; ++b) {
                const Eigen::VectorXcd expected = oracle::translation(g.dim, a, b) * psi.amplitudes();
                const auto got = apply_translation(psi, TranslationIndex::reduced(a, b, g.dim));
                CHECK(max_abs(got.amplitudes() - expected) < 1e-13);
            }
    }
}

TEST_CASE("identity translation and unitarity") {
    const auto g = make_geometry(6);
    const auto psi = random_state(g, 9);
    CHECK(max_abs(apply_translation(psi, {0, 0}).amplitudes() - psi.amplitudes()) == 0.0);
    for (long long a : {1, 7, 33})
        for (long long b : {0, 5, 63}) {
            const auto t = apply_translation(psi, TranslationIndex::reduced(a, b, g.dim));
            CHECK(std::abs(t.norm() - 1.0) < 1e-13);
            const auto back = apply_translation(t, TranslationIndex::reduced(-a, -b, g.dim));
            CHECK(max_abs(back.amplitudes() - psi.amplitudes()) < 1e-13);
        }
}

// T_ab T_cd = exp(i pi (bc - ad) / N) T_{a+c, b+d}, with the right-hand side
// taken from the unreduced dense operator.
TEST_CASE("translation group law is exhaustive at N <= 8") {
    for (int k : {2, 3}) {
        const auto g = make_geometry(k);
        const auto n = static_cast<long long>(g.dim);
        const auto psi = random_state(g, 21);
        double worst = 0.0;
        for (long long a = 0; a < n; ++a)
            for (long long b = 0; b < n; ++b)
                for (long long c = 0; c < n; ++c)
                    for (long long d = 0; d < n; ++d) {
                        const auto lhs = apply_translation(
                            apply_translation(psi, TranslationIndex::reduced(c, d, g.dim)),
                            TranslationIndex::reduced(a, b, g.dim));
                        const auto cocycle = std::polar(1.0, std::numbers::pi * double(b * c - a * d) / double(n));
                        const Eigen::VectorXcd rhs =
                            cocycle * (oracle::translation(g.dim, a + c, b + d) * psi.amplitudes());
                        worst = std::max(worst, max_abs(lhs.amplitudes() - rhs));
                    }
        CHECK(worst < 1e-13);
    }
}

TEST_CASE("translation group law on random pairs at N = 256") {
    const auto g = make_geometry(8);
    const auto psi = random_state(g, 22);
    RngStream rng(23);
    for (int r = 0; r < 100; ++r) {
        const auto a = static_cast<long long>(rng.below(256)), b = static_cast<long long>(rng.below(256));
        const auto c = static_cast<long long>(rng.below(256)), d = static_cast<long long>(rng.below(256));
        const auto lhs = apply_translation(apply_translation(psi, TranslationIndex::reduced(c, d, g.dim)),
                                           TranslationIndex::reduced(a, b, g.dim));
        const auto cocycle = std::polar(1.0, std::numbers::pi * double(b * c - a * d) / 256.0);
        const Eigen::VectorXcd rhs = cocycle * (oracle::translation(g.dim, a + c, b + d) * psi.amplitudes());
        CHECK(max_abs(lhs.amplitudes() - rhs) < 1e-11);
    }
}

TEST_CASE("full-period translations are a global phase") {
    const auto g = make_geometry(4);
    const auto n = static_cast<long long>(g.dim);
    const auto psi = random_state(g, 31);
    for (const auto& t : {oracle::translation(g.dim, n, 0), oracle::translation(g.dim, 0, n)}) {
        const Eigen::VectorXcd out = t * psi.amplitudes();
        const auto ratio = out[0] / psi.amplitudes()[0];
        CHECK(std::abs(std::abs(ratio) - 1.0) < 1e-13);
        CHECK(max_abs(out - ratio * psi.amplitudes()) < 1e-13);
    }
}

TEST_CASE("translation conjugation of density operators") {
    const auto g = make_geometry(4);
    RngStream rng(41);
    const auto rho = random_density(g, rng);
    for (long long a : {0, 3, 15})
        for (long long b : {1, 8}) {
            const auto t = oracle::translation(g.dim, a, b);
            const oracle::Mat expected = t * rho.matrix() * t.adjoint();
            const auto got = apply_translation(rho, TranslationIndex::reduced(a, b, g.dim));
            CHECK((got.matrix() - expected).cwiseAbs().maxCoeff() < 1e-14);
        }
}

TEST_CASE("chord coefficients equal traces against translations") {
    const auto g = make_geometry(4);
    RngStream rng(51);
    const auto rho = random_density(g, rng);
    const auto chord = chord_transform(rho);
    double worst = 0.0;
    for (long long mu = 0; mu < 16; ++mu)
        for (long long nu = 0; nu < 16; ++nu) {
            const auto expected = (oracle::translation(g.dim, mu, nu).adjoint() * rho.matrix()).trace();
            worst = std::max(worst, std::abs(chord.chi(mu, nu) - expected));
        }
    CHECK(worst < 1e-13);
    CHECK(std::abs(chord.chi(0, 0) - 1.0) < 1e-13);
}

TEST_CASE("chord transform of the maximally mixed state is a delta") {
    const auto g = make_geometry(5);
    auto chord = chord_transform(DensityOperator::maximally_mixed(g));
    CHECK(std::abs(chord.chi(0, 0) - 1.0) < 1e-14);
    chord.chi(0, 0) = 0.0;
    CHECK(chord.chi.cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("chord round trip on random density operators") {
    for (int k : {2, 5, 8}) {
        const auto g = make_geometry(k);
        RngStream rng(60 + k);
        const auto rho = random_density(g, rng);
        CHECK(inverse_chord_transform(chord_transform(rho)).max_abs_difference(rho) < 1e-12);
    }
}

TEST_CASE("GHZ state amplitudes") {
    for (int k : {2, 5, 9}) {
        const auto g = make_geometry(k);
        const auto psi = ghz_state(g);
        CHECK(std::abs(psi.norm() - 1.0) < 1e-15);
        CHECK(std::abs(psi[0] - std::sqrt(0.5)) < 1e-15);
        CHECK(std::abs(psi[g.dim - 1] - std::sqrt(0.5)) < 1e-15);
        CHECK(psi.amplitudes().cwiseAbs2().sum() == Approx(1.0).epsilon(1e-15));
    }
}

TEST_CASE("Haar states and random densities are valid") {
    const auto g = make_geometry(5);
    RngStream rng(71);
    CHECK(haar_random_state(g, rng).is_normalized());
    const auto rho = random_density(g, rng, 3);
    CHECK(std::abs(rho.trace() - 1.0) < 1e-12);
    CHECK(rho.hermiticity_residual() < 1e-15);
    CHECK(rho.min_eigenvalue() > -1e-12);
}
