#pragma once

// Orthogonal polynomials on [-1, 1]: Legendre values, Gauss-Legendre rules,
// the Darboux (Christoffel-Darboux at 1) kernel for the ultraspherical weight
// (1 - t^2)^(q/2 - 1), and the Lebesgue constant of the Fourier projection.

#include "sphereproj/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

namespace sphereproj {

inline constexpr double kArgumentTolerance = 1e-12;

namespace detail {

inline double clamp_argument(double t, const char* who) {
    if (!(std::abs(t) <= 1.0 + kArgumentTolerance))
        throw DomainError(std::string(who) + ": argument outside [-1, 1]");
    return std::clamp(t, -1.0, 1.0);
}

} // namespace detail

/// P_k(t), normalized so that P_k(1) = 1.
inline double legendre_eval(int k, double t) {
    if (k < 0) throw DomainError("legendre_eval: negative degree");
    t = detail::clamp_argument(t, "legendre_eval");
    if (k == 0) return 1.0;
    double p0 = 1.0, p1 = t;
    for (int j = 2; j <= k; ++j) {
        const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

/// Value and derivative of P_m at t (|t| < 1 expected).
inline std::pair<double, double> legendre_with_derivative(int m, double t) {
    double p0 = 1.0, p1 = t;
    if (m == 0) return {1.0, 0.0};
    for (int j = 2; j <= m; ++j) {
        const double p2 = ((2.0 * j - 1.0) * t * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
    }
    return {p1, m * (t * p1 - p0) / (t * t - 1.0)};
}

struct GaussLegendreRule {
    std::vector<double> nodes;   // ascending, zeros of P_m
    std::vector<double> weights; // positive

    std::size_t size() const noexcept { return nodes.size(); }

    /// sum_j w_j g(z_j)
    template <class Fn>
    double apply(Fn&& g) const {
        double s = 0.0;
        for (std::size_t j = 0; j < nodes.size(); ++j) s += weights[j] * g(nodes[j]);
        return s;
    }
};

/// m-point Gauss-Legendre rule by Newton iteration on P_m.
inline GaussLegendreRule gauss_legendre_rule(int m) {
    if (m < 1) throw DomainError("gauss_legendre_rule: need at least one point");
    constexpr int kMaxIterations = 100;
    constexpr double kUpdateTolerance = 1e-15;

    GaussLegendreRule rule;
    rule.nodes.assign(static_cast<std::size_t>(m), 0.0);
    rule.weights.assign(static_cast<std::size_t>(m), 0.0);

    const int half = (m + 1) / 2;
    for (int j = 1; j <= half; ++j) {
        double z = std::cos(std::numbers::pi * (4.0 * j - 1.0) / (4.0 * m + 2.0));
        bool converged = false;
        for (int it = 0; it < kMaxIterations; ++it) {
            auto [p, dp] = legendre_with_derivative(m, z);
            const double dz = p / dp;
            z -= dz;
            if (std::abs(dz) <= kUpdateTolerance) {
                converged = true;
                break;
            }
        }
        if (!converged) {
            std::ostringstream msg;
            msg << "gauss_legendre_rule: Newton iteration did not converge for m=" << m
                << ", root " << j;
            throw NumericalError(msg.str());
        }
        if (2 * j - 1 == m) z = 0.0; // middle node of an odd rule
        const double dp = legendre_with_derivative(m, z).second;
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        // Root j counted from the right end.
        const auto hi = static_cast<std::size_t>(m - j);
        const auto lo = static_cast<std::size_t>(j - 1);
        rule.nodes[hi] = z;
        rule.nodes[lo] = -z;
        rule.weights[hi] = w;
        rule.weights[lo] = w;
    }
    return rule;
}

/// Christoffel-Darboux kernel K_n(t) = sum_{k<=n} p_k(t) p_k(1) for the
/// orthonormal polynomials of w(t) = (1 - t^2)^(q/2 - 1) on [-1, 1].
///
/// With this normalization (1/|S^{q-1}|) K_n(x . y) is the reproducing
/// kernel of spherical polynomials of degree <= n on S^q.
class DarbouxKernel {
public:
    DarbouxKernel(int q, int n) : q_(q), n_(n) {
        if (q < 2) throw DomainError("DarbouxKernel: q must be >= 2");
        if (n < 0) throw DomainError("DarbouxKernel: degree must be >= 0");
        // Ultraspherical parameter; Jacobi exponents alpha = beta = lambda - 1/2.
        const double lambda = 0.5 * (q - 1);
        mass_ = std::sqrt(std::numbers::pi) * std::tgamma(lambda + 0.5) / std::tgamma(lambda + 1.0);

        // Orthonormal recurrence t p_k = a_{k+1} p_{k+1} + a_k p_{k-1}; a_k^2 is the
        // closed-form monic Jacobi coefficient at alpha = beta.
        offdiag_.assign(static_cast<std::size_t>(n) + 1, 0.0);
        for (int k = 1; k <= n; ++k) {
            const double beta = k * (k + 2.0 * lambda - 1.0) /
                                (4.0 * (k + lambda) * (k + lambda - 1.0));
            offdiag_[static_cast<std::size_t>(k)] = std::sqrt(beta);
        }
        inv_offdiag_.assign(offdiag_.size(), 0.0);
        for (std::size_t k = 1; k < offdiag_.size(); ++k) inv_offdiag_[k] = 1.0 / offdiag_[k];
        at_one_.resize(static_cast<std::size_t>(n) + 1);
        values(1.0, at_one_);
        double s = 0.0;
        for (double v : at_one_) s += v * v;
        k_at_one_ = s;
    }

    int q() const noexcept { return q_; }
    int degree() const noexcept { return n_; }
    /// Integral of the weight over [-1, 1].
    double weight_mass() const noexcept { return mass_; }

    double weight(double t) const { return std::pow(1.0 - t * t, 0.5 * q_ - 1.0); }

    /// p_k(1), k = 0..n.
    const std::vector<double>& boundary_values() const noexcept { return at_one_; }

    /// p_0(t) .. p_n(t) written into `out` (resized to n+1).
    void values(double t, std::vector<double>& out) const {
        out.resize(static_cast<std::size_t>(n_) + 1);
        double prev = 0.0;
        double cur = 1.0 / std::sqrt(mass_);
        out[0] = cur;
        for (int k = 0; k < n_; ++k) {
            const double a_k = offdiag_[static_cast<std::size_t>(k)];
            const double a_next = offdiag_[static_cast<std::size_t>(k) + 1];
            const double next = (t * cur - a_k * prev) / a_next;
            prev = cur;
            cur = next;
            out[static_cast<std::size_t>(k) + 1] = cur;
        }
    }

    /// K_n(t) by one pass of the recurrence, O(n).
    double operator()(double t) const {
        t = detail::clamp_argument(t, "DarbouxKernel");
        return eval_unchecked(t);
    }

    /// K_n(1), the supremum of |K_n| on [-1, 1].
    double at_one() const noexcept { return k_at_one_; }

    /// Caller guarantees |t| <= 1.
    double eval_unchecked(double t) const noexcept {
        double prev = 0.0;
        double cur = 1.0 / std::sqrt(mass_);
        double sum = cur * at_one_[0];
        for (int k = 0; k < n_; ++k) {
            const auto ks = static_cast<std::size_t>(k);
            const double next = (t * cur - offdiag_[ks] * prev) * inv_offdiag_[ks + 1];
            prev = cur;
            cur = next;
            sum += cur * at_one_[ks + 1];
        }
        return sum;
    }

private:
    int q_;
    int n_;
    double mass_ = 0.0;
    std::vector<double> offdiag_; // a_k, index 0 unused
    std::vector<double> inv_offdiag_;
    std::vector<double> at_one_;
    double k_at_one_ = 0.0;
};

inline DarbouxKernel darboux_kernel_build(int q, int n) { return DarbouxKernel(q, n); }

inline double darboux_kernel_eval(const DarbouxKernel& kern, double t) { return kern(t); }

/// Lebesgue constant of the Fourier projection S_n on S^q:
///   ||S_n|| = int_{-1}^{1} |K_n(t)| w(t) dt
///           = int_0^pi |K_n(cos th)| sin^{q-1}(th) dth.
///
/// The sign changes of K_n(cos th) are located first so each Gauss panel sees
/// a smooth integrand; panels are halved until two successive totals agree to
/// `rel_tol`.
inline double fourier_lebesgue_constant(int q, int n, double rel_tol = 1e-8) {
    const DarbouxKernel kern(q, n);
    const double pi = std::numbers::pi;
    auto f = [&](double th) { return kern.eval_unchecked(std::cos(th)); };

    std::vector<double> breaks{0.0};
    const int samples = 64 * (n + 1);
    double th_prev = 0.0, f_prev = f(0.0);
    for (int i = 1; i <= samples; ++i) {
        const double th = pi * i / samples;
        const double fv = f(th);
        if ((f_prev < 0.0) != (fv < 0.0) && f_prev != 0.0 && fv != 0.0) {
            double lo = th_prev, hi = th, flo = f_prev;
            for (int it = 0; it < 200 && hi - lo > 4e-16; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(mid);
                if ((fm < 0.0) == (flo < 0.0)) {
                    lo = mid;
                    flo = fm;
                } else {
                    hi = mid;
                }
            }
            breaks.push_back(0.5 * (lo + hi));
        }
        th_prev = th;
        f_prev = fv;
    }
    breaks.push_back(pi);

    static const GaussLegendreRule panel = gauss_legendre_rule(20);
    auto integrate = [&](int level) {
        const int pieces = 1 << level;
        double total = 0.0;
        for (std::size_t b = 0; b + 1 < breaks.size(); ++b) {
            const double h = (breaks[b + 1] - breaks[b]) / pieces;
            for (int p = 0; p < pieces; ++p) {
                const double a = breaks[b] + p * h;
                double s = 0.0;
                for (std::size_t j = 0; j < panel.size(); ++j) {
                    const double th = a + 0.5 * h * (panel.nodes[j] + 1.0);
                    s += panel.weights[j] * std::abs(f(th)) * std::pow(std::sin(th), q - 1);
                }
                total += 0.5 * h * s;
            }
        }
        return total;
    };

    constexpr int kMaxLevel = 12;
    double prev = integrate(0);
    for (int level = 1; level <= kMaxLevel; ++level) {
        const double cur = integrate(level);
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
        if (level == kMaxLevel)
            throw RefinementError("fourier_lebesgue_constant: refinement cap reached", prev, cur);
        prev = cur;
    }
    return prev; // unreachable
}

} // namespace sphereproj
