#pragma once

// Test-only reference computations, independent of the library code paths
// they are used to check.

#include "sphereproj/core_geometry.hpp"
#include "sphereproj/sph_harmonics.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

namespace oracle {

/// P_k(t) from the explicit sum 2^-k sum_j C(k,j)^2 (t-1)^(k-j) (t+1)^j.
inline double legendre_explicit(int k, double t) {
    long double s = 0.0L, c = 1.0L;
    const long double tm = static_cast<long double>(t) - 1.0L;
    const long double tp = static_cast<long double>(t) + 1.0L;
    for (int j = 0; j <= k; ++j) {
        if (j > 0) c = c * (k - j + 1) / j;
        s += c * c * std::pow(tm, k - j) * std::pow(tp, j);
    }
    return static_cast<double>(s / std::pow(2.0L, k));
}

/// int_0^pi g(theta) dtheta by composite Simpson with `panels` (even) panels.
inline double simpson(const std::function<double(double)>& g, double a, double b, int panels) {
    const double h = (b - a) / panels;
    long double s = g(a) + g(b);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0L : 2.0L) * g(a + i * h);
    return static_cast<double>(s * h / 3.0L);
}

/// K_n(t) = P(t)^T G^{-1} P(1), G the Gram matrix of Legendre polynomials
/// under w(t) = (1-t^2)^(q/2-1), integrated numerically in theta.
class BruteDarboux {
public:
    BruteDarboux(int q, int n) : n_(n) {
        // Composite Simpson in theta, all Gram entries accumulated in one pass.
        const int panels = 20000;
        const double h = std::numbers::pi / panels;
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n + 1, n + 1);
        for (int i = 0; i <= panels; ++i) {
            const double th = i * h;
            const double c = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            const Eigen::VectorXd p = legendre_vector(std::cos(th));
            g += (c * h / 3.0 * std::pow(std::sin(th), q - 1)) * p * p.transpose();
        }
        ginv_ = g.inverse();
        one_ = legendre_vector(1.0);
    }

    double operator()(double t) const { return legendre_vector(t).dot(ginv_ * one_); }

private:
    Eigen::VectorXd legendre_vector(double t) const {
        Eigen::VectorXd v(n_ + 1);
        for (int k = 0; k <= n_; ++k) v(k) = legendre_explicit(k, t);
        return v;
    }
    int n_;
    Eigen::MatrixXd ginv_;
    Eigen::VectorXd one_;
};

/// Surface integral on S^2: Simpson in theta, trapezoid (spectral for
/// periodic integrands) in phi.
inline double sphere_integral(const std::function<double(double, double, double)>& f,
                              int theta_panels = 2000, int phi_points = 400) {
    const double pi = std::numbers::pi;
    auto ring = [&](double th) {
        const double s = std::sin(th), c = std::cos(th);
        long double acc = 0.0L;
        for (int k = 0; k < phi_points; ++k) {
            const double ph = 2.0 * pi * k / phi_points;
            acc += f(s * std::cos(ph), s * std::sin(ph), c);
        }
        return static_cast<double>(acc * (2.0L * pi / phi_points)) * s;
    };
    return simpson(ring, 0.0, pi, theta_panels);
}

/// Random polynomial in P_n: harmonic coefficients uniform in [-1, 1].
struct RandomPolynomial {
    int n;
    Eigen::VectorXd coef;

    RandomPolynomial(int degree, sphereproj::Rng& rng) : n(degree) {
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        coef.resize((degree + 1) * (degree + 1));
        for (Eigen::Index i = 0; i < coef.size(); ++i) coef(i) = u(rng);
    }

    double operator()(const sphereproj::SpherePoint& x) const {
        const auto y = sphereproj::eval_harmonic_basis(n, x);
        return coef.dot(Eigen::Map<const Eigen::VectorXd>(y.data(), coef.size()));
    }
};

} // namespace oracle
