#include "sphereproj/core_geometry.hpp"
#include "sphereproj/orthopoly.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace sphereproj;

TEST(Legendre, Examples) {
    EXPECT_EQ(legendre_eval(0, -0.7), 1.0);
    EXPECT_DOUBLE_EQ(legendre_eval(1, 0.3), 0.3);
    EXPECT_DOUBLE_EQ(legendre_eval(2, 0.5), -0.125);
    EXPECT_THROW(legendre_eval(3, 1.0 + 1e-9), DomainError);
    EXPECT_THROW(legendre_eval(-1, 0.0), DomainError);
    EXPECT_NO_THROW(legendre_eval(3, 1.0 + 1e-13));
}

TEST(Legendre, MatchesExplicitSum) {
    for (int k = 0; k <= 12; ++k)
        for (double t = -1.0; t <= 1.0; t += 0.0625)
            EXPECT_NEAR(legendre_eval(k, t), oracle::legendre_explicit(k, t), 1e-12) << k << " " << t;
}

TEST(GaussLegendre, SmallRules) {
    const auto r1 = gauss_legendre_rule(1);
    ASSERT_EQ(r1.size(), 1u);
    EXPECT_EQ(r1.nodes[0], 0.0);
    EXPECT_DOUBLE_EQ(r1.weights[0], 2.0);

    const auto r2 = gauss_legendre_rule(2);
    EXPECT_NEAR(r2.nodes[0], -1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(r2.nodes[1], 1.0 / std::sqrt(3.0), 1e-15);
    EXPECT_NEAR(r2.weights[0], 1.0, 1e-15);
    EXPECT_NEAR(r2.weights[1], 1.0, 1e-15);
    EXPECT_THROW(gauss_legendre_rule(0), DomainError);
}

TEST(GaussLegendre, FivePointMiddleWeightFromExactnessSystem) {
    // Closed-form zeros of P_5, weights from the Vandermonde exactness system.
    const double a = std::sqrt(5.0 - 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double b = std::sqrt(5.0 + 2.0 * std::sqrt(10.0 / 7.0)) / 3.0;
    const double z[5] = {-b, -a, 0.0, a, b};
    Eigen::Matrix<double, 5, 5> v;
    Eigen::Matrix<double, 5, 1> moments;
    for (int k = 0; k < 5; ++k) {
        for (int j = 0; j < 5; ++j) v(k, j) = std::pow(z[j], k);
        moments(k) = (k % 2) ? 0.0 : 2.0 / (k + 1);
    }
    const Eigen::Matrix<double, 5, 1> w = v.fullPivLu().solve(moments);
    EXPECT_NEAR(w(2), 128.0 / 225.0, 1e-14);

    const auto rule = gauss_legendre_rule(5);
    EXPECT_EQ(rule.nodes[2], 0.0);
    EXPECT_NEAR(rule.weights[2], 128.0 / 225.0, 1e-15);
    for (int j = 0; j < 5; ++j) {
        EXPECT_NEAR(rule.nodes[j], z[j], 1e-15);
        EXPECT_NEAR(rule.weights[j], w(j), 1e-14);
    }
}

TEST(GaussLegendre, InvariantsAndMonomialExactness) {
    for (int m = 1; m <= 60; ++m) {
        const auto rule = gauss_legendre_rule(m);
        double sum = 0.0;
        for (double w : rule.weights) {
            EXPECT_GT(w, 0.0);
            sum += w;
        }
        EXPECT_NEAR(sum, 2.0, 1e-12) << m;
        for (int j = 0; j < m; ++j) {
            if (j + 1 < m) EXPECT_LT(rule.nodes[j], rule.nodes[j + 1]);
            EXPECT_NEAR(rule.nodes[j], -rule.nodes[m - 1 - j], 1e-12);
        }
        for (int k = 0; k <= 2 * m - 1; ++k) {
            const double exact = (k % 2) ? 0.0 : 2.0 / (k + 1);
            const double got = rule.apply([k](double t) { return std::pow(t, k); });
            EXPECT_NEAR(got, exact, 1e-12) << "m=" << m << " k=" << k;
        }
    }
}

TEST(GaussLegendre, WeightsComparableToNodeSpacing) {
    // nu_i / (z_{i+1} - z_i) over consecutive node pairs stays in a fixed band.
    double lo = 1e300, hi = 0.0;
    for (int m = 6; m <= 60; ++m) {
        const auto rule = gauss_legendre_rule(m);
        for (int i = 0; i + 1 < m; ++i) {
            const double r = rule.weights[i] / (rule.nodes[i + 1] - rule.nodes[i]);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
    }
    EXPECT_LE(hi / lo, 4.0) << "band [" << lo << ", " << hi << "]";
    EXPECT_GT(lo, 0.5);
    EXPECT_LT(hi, 1.5);
}

TEST(DarbouxKernel, Examples) {
    const auto k0 = darboux_kernel_build(2, 0);
    for (double t : {-1.0, -0.3, 0.0, 0.8, 1.0}) EXPECT_NEAR(darboux_kernel_eval(k0, t), 0.5, 1e-15);

    EXPECT_NEAR(darboux_kernel_eval(darboux_kernel_build(2, 3), 1.0), 8.0, 1e-13);
    EXPECT_NEAR(darboux_kernel_eval(darboux_kernel_build(2, 1), 0.0), 0.5, 1e-15);

    const auto k10 = darboux_kernel_build(2, 10);
    EXPECT_NEAR(k10(1.0), 60.5, 1e-12);
    EXPECT_NEAR(k10(-1.0), 5.5, 1e-12);
    EXPECT_THROW(k10(1.001), DomainError);
    EXPECT_THROW(DarbouxKernel(1, 3), DomainError);
}

TEST(DarbouxKernel, MatchesBruteForceOrthonormalization) {
    for (int q : {2, 3, 4, 5}) {
        for (int n : {0, 1, 4, 9, 12}) {
            const auto kern = darboux_kernel_build(q, n);
            const oracle::BruteDarboux brute(q, n);
            for (double t = -1.0; t <= 1.0; t += 0.125) {
                const double want = brute(t);
                EXPECT_NEAR(kern(t), want, 1e-9 * std::max(1.0, std::abs(want)))
                    << "q=" << q << " n=" << n << " t=" << t;
            }
        }
    }
}

TEST(DarbouxKernel, ClosedFormAtOneForQ2) {
    for (int n = 0; n <= 100; ++n) {
        const auto kern = darboux_kernel_build(2, n);
        const double want = 0.5 * (n + 1) * (n + 1);
        EXPECT_NEAR(kern(1.0), want, 1e-10 * want) << n;
        EXPECT_NEAR(std::abs(kern(-1.0)), 0.5 * (n + 1), 1e-10 * 0.5 * (n + 1)) << n;
    }
}

TEST(DarbouxKernel, SupremumAtOne) {
    for (int q : {2, 3, 4}) {
        const auto kern = darboux_kernel_build(q, 25);
        for (int i = 0; i <= 4000; ++i) {
            const double t = -1.0 + i / 2000.0;
            EXPECT_LE(std::abs(kern(t)), kern.at_one() * (1 + 1e-12));
        }
    }
}

TEST(DarbouxKernel, OrthonormalityOfRecurrence) {
    // Orthonormality of p_0..p_n in theta variables, integrand smooth.
    for (int q : {2, 3, 6}) {
        const auto kern = darboux_kernel_build(q, 15);
        const auto gl = gauss_legendre_rule(120);
        Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(16, 16);
        std::vector<double> p;
        for (std::size_t i = 0; i < gl.size(); ++i) {
            const double th = 0.5 * std::numbers::pi * (gl.nodes[i] + 1.0);
            kern.values(std::cos(th), p);
            const double w = 0.5 * std::numbers::pi * gl.weights[i] * std::pow(std::sin(th), q - 1);
            for (int j = 0; j < 16; ++j)
                for (int k = 0; k < 16; ++k) gram(j, k) += w * p[j] * p[k];
        }
        EXPECT_LE((gram - Eigen::MatrixXd::Identity(16, 16)).cwiseAbs().maxCoeff(), 1e-10) << q;
    }
}

TEST(DarbouxKernel, ReproducesOrthonormalPolynomials) {
    // int K_n(t) p_j(t) w(t) dt = p_j(1) for j <= n.
    for (int q : {2, 3, 4}) {
        const int n = 12;
        const auto kern = darboux_kernel_build(q, n);
        const auto gl = gauss_legendre_rule(100);
        std::vector<double> acc(n + 1, 0.0), p;
        for (std::size_t i = 0; i < gl.size(); ++i) {
            const double th = 0.5 * std::numbers::pi * (gl.nodes[i] + 1.0);
            const double t = std::cos(th);
            kern.values(t, p);
            const double w = 0.5 * std::numbers::pi * gl.weights[i] * std::pow(std::sin(th), q - 1);
            for (int j = 0; j <= n; ++j) acc[j] += w * kern(t) * p[j];
        }
        for (int j = 0; j <= n; ++j) EXPECT_NEAR(acc[j], kern.boundary_values()[j], 1e-9) << q << " " << j;
    }
}

TEST(DarbouxKernel, AtOneEqualsDimensionRatio) {
    // K_n(1) = dim P_n * |S^{q-1}| / |S^q|, diagonal of the reproducing kernel.
    for (int q : {2, 3, 4, 5}) {
        for (int n : {0, 3, 10, 40}) {
            double dim = 0.0; // C(n+q, q) + C(n+q-1, q)
            auto binom = [](int a, int b) {
                if (b < 0 || a < b) return 0.0;
                double r = 1.0;
                for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
                return r;
            };
            dim = binom(n + q, q) + binom(n + q - 1, q);
            const double want = dim * surface_area(q - 1) / surface_area(q);
            EXPECT_NEAR(darboux_kernel_build(q, n).at_one(), want, 1e-10 * want) << q << " " << n;
        }
    }
}

TEST(DarbouxKernel, GrowthLikeNToTheQ) {
    for (int q : {2, 3, 4}) {
        double lo = 1e300, hi = 0.0;
        for (int n = 10; n <= 60; n += 5) {
            const double r = darboux_kernel_build(q, n).at_one() / std::pow(n, q);
            lo = std::min(lo, r);
            hi = std::max(hi, r);
        }
        EXPECT_LE(hi / lo, 2.0) << q;
    }
}

TEST(FourierLebesgue, FrozenValues) {
    EXPECT_NEAR(fourier_lebesgue_constant(2, 0), 1.0, 1e-12);
    // Reference values from arbitrary-precision quadrature split at the kernel roots.
    EXPECT_NEAR(fourier_lebesgue_constant(2, 10), 4.707173847571461244, 1e-8 * 4.7);
    EXPECT_NEAR(fourier_lebesgue_constant(2, 20), 6.7278518349771714911, 1e-8 * 6.7);
    EXPECT_NEAR(fourier_lebesgue_constant(3, 10), 9.2039694155747856944, 1e-8 * 9.2);
}

TEST(FourierLebesgue, MatchesDenseMidpointSum) {
    // Independent of root finding: brute midpoint sum on a fine theta grid.
    for (int q : {2, 3}) {
        const int n = 15;
        const auto kern = darboux_kernel_build(q, n);
        const int cells = 400000;
        const double h = std::numbers::pi / cells;
        long double s = 0.0L;
        for (int i = 0; i < cells; ++i) {
            const double th = (i + 0.5) * h;
            s += std::abs(kern(std::cos(th))) * std::pow(std::sin(th), q - 1);
        }
        const double brute = static_cast<double>(s * h);
        EXPECT_NEAR(fourier_lebesgue_constant(q, n), brute, 1e-7 * brute) << q;
    }
}

TEST(FourierLebesgue, MinimalProjectionGrowth) {
    double lo = 1e300, hi = 0.0;
    for (int n = 10; n <= 80; n += 10) {
        const double r = fourier_lebesgue_constant(2, n) / std::sqrt(n);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_LE(hi / lo, 1.5);

    lo = 1e300, hi = 0.0;
    for (int n = 10; n <= 60; n += 10) {
        const double r = fourier_lebesgue_constant(3, n) / n;
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    EXPECT_LE(hi / lo, 1.5);
}
