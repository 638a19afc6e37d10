#pragma once

// Real, fully normalized spherical harmonics on S^2 (no Condon-Shortley phase).
//
//   Y_{l,0}  = Q_l^0(z)
//   Y_{l,m}  = sqrt(2) Q_l^m(z) Re (x + i y)^m      m > 0
//   Y_{l,-m} = sqrt(2) Q_l^m(z) Im (x + i y)^m
//
// where Q_l^m = Pbar_l^m / sin^m(theta) is a polynomial in z. Carrying the
// sin^m factor inside (x + i y)^m keeps every entry continuous at the poles.

#include "sphereproj/core_geometry.hpp"
#include "sphereproj/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <utility>
#include <vector>

namespace sphereproj {

/// dim P_n on S^q = (2n+q) Gamma(n+q) / (Gamma(q+1) Gamma(n+1)), computed as
/// C(n+q, q) + C(n+q-1, q) in checked integer arithmetic.
inline std::int64_t basis_dimension(int q, int n) {
    if (q < 2) throw DomainError("basis_dimension: q must be >= 2");
    if (n < 0) throw DomainError("basis_dimension: degree must be >= 0");
    auto binom = [](std::int64_t top, std::int64_t k) -> std::int64_t {
        if (k < 0 || top < k) return 0;
        std::int64_t r = 1;
        for (std::int64_t i = 1; i <= k; ++i) {
            // r * (top - k + i) is divisible by i after the multiplication.
            std::int64_t next;
            if (__builtin_mul_overflow(r, top - k + i, &next))
                throw DomainError("basis_dimension: integer overflow");
            r = next / i;
        }
        return r;
    };
    std::int64_t sum;
    if (__builtin_add_overflow(binom(n + q, q), binom(n + q - 1, q), &sum))
        throw DomainError("basis_dimension: integer overflow");
    return sum;
}

/// Index map r <-> (l, m) for the harmonics of degree <= n, r = l^2 + l + m.
struct HarmonicBasis {
    int n = 0;

    explicit HarmonicBasis(int degree) : n(degree) {
        if (degree < 0) throw DomainError("HarmonicBasis: degree must be >= 0");
    }

    std::size_t dimension() const noexcept {
        return static_cast<std::size_t>(n + 1) * static_cast<std::size_t>(n + 1);
    }
    static constexpr std::size_t index(int l, int m) noexcept {
        return static_cast<std::size_t>(l * l + l + m);
    }
    static std::pair<int, int> degree_order(std::size_t r) noexcept {
        int l = static_cast<int>(std::sqrt(static_cast<double>(r)));
        while (static_cast<std::size_t>(l * l) > r) --l;
        while (static_cast<std::size_t>((l + 1) * (l + 1)) <= r) ++l;
        return {l, static_cast<int>(r) - l * l - l};
    }
};

namespace detail {

/// Writes all Y_{l,m}(x,y,z), l <= n, into out[0 .. (n+1)^2).
inline void harmonics_into(int n, double x, double y, double z, double* out) {
    const double inv_sqrt_4pi = 0.5 / std::sqrt(std::numbers::pi);
    const double sqrt2 = std::numbers::sqrt2;

    double qmm = inv_sqrt_4pi; // Q_m^m
    double cm = 1.0, sm = 0.0; // (x + i y)^m
    for (int m = 0; m <= n; ++m) {
        if (m > 0) {
            qmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m));
            const double c = cm * x - sm * y;
            sm = cm * y + sm * x;
            cm = c;
        }
        auto store = [&](int l, double qlm) {
            if (m == 0) {
                out[HarmonicBasis::index(l, 0)] = qlm;
            } else {
                out[HarmonicBasis::index(l, m)] = sqrt2 * qlm * cm;
                out[HarmonicBasis::index(l, -m)] = sqrt2 * qlm * sm;
            }
        };
        store(m, qmm);
        if (m == n) break;
        double q2 = qmm;
        double q1 = std::sqrt(2.0 * m + 3.0) * z * qmm;
        store(m + 1, q1);
        for (int l = m + 2; l <= n; ++l) {
            const double ll = static_cast<double>(l) * l;
            const double mm = static_cast<double>(m) * m;
            const double a = std::sqrt((4.0 * ll - 1.0) / (ll - mm));
            const double b = std::sqrt(((l - 1.0) * (l - 1.0) - mm) /
                                       (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
            const double q0 = a * (z * q1 - b * q2);
            store(l, q0);
            q2 = q1;
            q1 = q0;
        }
    }
}

inline void require_s2(const SpherePoint& x) {
    if (x.q() != 2)
        throw DomainError("spherical harmonic basis is only available on S^2 (q = 2)");
}

} // namespace detail

/// All Y_{l,m}(x) for l <= n, ordered by r = l^2 + l + m.
inline std::vector<double> eval_harmonic_basis(int n, const SpherePoint& x) {
    detail::require_s2(x);
    if (n < 0) throw DomainError("eval_harmonic_basis: degree must be >= 0");
    std::vector<double> out(HarmonicBasis(n).dimension());
    detail::harmonics_into(n, x[0], x[1], x[2], out.data());
    return out;
}

/// Row i holds the harmonic vector of pts[i].
inline Eigen::MatrixXd harmonic_matrix(int n, std::span<const SpherePoint> pts) {
    if (n < 0) throw DomainError("harmonic_matrix: degree must be >= 0");
    const auto d = static_cast<Eigen::Index>(HarmonicBasis(n).dimension());
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows(
        static_cast<Eigen::Index>(pts.size()), d);
    for (std::size_t i = 0; i < pts.size(); ++i) {
        detail::require_s2(pts[i]);
        detail::harmonics_into(n, pts[i][0], pts[i][1], pts[i][2],
                               rows.row(static_cast<Eigen::Index>(i)).data());
    }
    return rows;
}

} // namespace sphereproj
