#pragma once

#include "sphereproj/core_geometry.hpp"
#include "sphereproj/errors.hpp"
#include "sphereproj/orthopoly.hpp"
#include "sphereproj/sph_harmonics.hpp"
#include "sphereproj/summation.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <span>
#include <string>
#include <vector>

namespace sphereproj {

/// Positive-weight rule on S^q with a declared (never inferred) degree of
/// exactness.
class QuadratureRule {
public:
    QuadratureRule() = default;

    QuadratureRule(std::vector<SpherePoint> nodes, std::vector<double> weights, int exactness)
        : nodes_(std::move(nodes)), weights_(std::move(weights)), exactness_(exactness) {
        if (nodes_.empty()) throw DomainError("QuadratureRule: no nodes");
        if (nodes_.size() != weights_.size())
            throw DimensionMismatch("QuadratureRule: node and weight counts differ");
        if (exactness_ < 0) throw DomainError("QuadratureRule: negative exactness");
        q_ = nodes_.front().q();
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].q() != q_)
                throw DimensionMismatch("QuadratureRule: nodes of mixed dimension");
            if (!(weights_[i] > 0.0) || !std::isfinite(weights_[i]))
                throw InvariantViolation("QuadratureRule: weight " + std::to_string(i) +
                                         " is not positive");
        }
        if (q_ >= 2) {
            const auto need = basis_dimension(q_, exactness_ / 2);
            if (static_cast<std::int64_t>(nodes_.size()) < need)
                throw InvariantViolation("QuadratureRule: " + std::to_string(nodes_.size()) +
                                         " nodes cannot be exact to degree " +
                                         std::to_string(exactness_));
        }
    }

    int q() const noexcept { return q_; }
    std::size_t size() const noexcept { return nodes_.size(); }
    int exactness() const noexcept { return exactness_; }
    const std::vector<SpherePoint>& nodes() const noexcept { return nodes_; }
    const std::vector<double>& weights() const noexcept { return weights_; }

    double weight_sum() const { return compensated_sum(weights_); }

private:
    int q_ = 0;
    std::vector<SpherePoint> nodes_;
    std::vector<double> weights_;
    int exactness_ = 0;
};

/// Tensor product of the (2n+2)-point trapezoidal rule in azimuth and the
/// (n+1)-point Gauss-Legendre rule in z = cos(theta). N = 2(n+1)^2 nodes,
/// exact on P_{2n+1}. Ordering: latitude j outer (north first), azimuth k inner.
inline QuadratureRule tensor_gl_rule(int n) {
    if (n < 0) throw DomainError("tensor_gl_rule: degree must be >= 0");
    const auto gl = gauss_legendre_rule(n + 1);
    const int rings = n + 1;
    const int per_ring = 2 * n + 2;
    std::vector<SpherePoint> nodes;
    std::vector<double> weights;
    nodes.reserve(static_cast<std::size_t>(rings * per_ring));
    weights.reserve(nodes.capacity());
    for (int j = rings - 1; j >= 0; --j) {
        const double z = gl.nodes[static_cast<std::size_t>(j)];
        const double s = std::sqrt((1.0 - z) * (1.0 + z));
        const double w = std::numbers::pi * gl.weights[static_cast<std::size_t>(j)] / (n + 1);
        for (int k = 0; k < per_ring; ++k) {
            const double phi = k * std::numbers::pi / (n + 1);
            nodes.push_back(normalize({s * std::cos(phi), s * std::sin(phi), z}));
            weights.push_back(w);
        }
    }
    return QuadratureRule(std::move(nodes), std::move(weights), 2 * n + 1);
}

/// sum_i w_i f(xi_i), compensated, ascending node order.
template <class Fn>
double integrate(const QuadratureRule& rule, Fn&& f) {
    CompensatedSum s;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const double v = f(rule.nodes()[i]);
        if (!std::isfinite(v))
            throw EvaluationError("integrate: non-finite value at node " + std::to_string(i), i);
        s.add(rule.weights()[i] * v);
    }
    return s.value();
}

inline double integrate_values(const QuadratureRule& rule, std::span<const double> values) {
    if (values.size() != rule.size())
        throw DimensionMismatch("integrate_values: one value per node required");
    CompensatedSum s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw EvaluationError("integrate: non-finite value at node " + std::to_string(i), i);
        s.add(rule.weights()[i] * values[i]);
    }
    return s.value();
}

/// int_{S^2} x^a y^b z^c dsigma; zero unless every exponent is even.
inline double monomial_sphere_integral(int a, int b, int c) {
    if (a < 0 || b < 0 || c < 0) throw DomainError("monomial_sphere_integral: negative exponent");
    if (a % 2 || b % 2 || c % 2) return 0.0;
    const double ga = 0.5 * (a + 1), gb = 0.5 * (b + 1), gc = 0.5 * (c + 1);
    const double gt = 0.5 * (a + b + c + 3);
    if (gt < 150.0)
        return 2.0 * std::tgamma(ga) * std::tgamma(gb) * std::tgamma(gc) / std::tgamma(gt);
    return 2.0 * std::exp(std::lgamma(ga) + std::lgamma(gb) + std::lgamma(gc) - std::lgamma(gt));
}

/// Max |rule(x^a y^b z^c) - exact| over a + b + c <= rule.exactness().
inline double verify_exactness(const QuadratureRule& rule) {
    if (rule.q() != 2) throw DomainError("verify_exactness: monomial oracle exists only for q = 2");
    const int e = rule.exactness();
    const std::size_t nn = rule.size();
    const auto stride = static_cast<std::size_t>(e) + 1;
    std::vector<double> px(nn * stride), py(nn * stride), pz(nn * stride);
    for (std::size_t i = 0; i < nn; ++i) {
        const auto& x = rule.nodes()[i];
        px[i * stride] = py[i * stride] = pz[i * stride] = 1.0;
        for (std::size_t k = 1; k < stride; ++k) {
            px[i * stride + k] = px[i * stride + k - 1] * x[0];
            py[i * stride + k] = py[i * stride + k - 1] * x[1];
            pz[i * stride + k] = pz[i * stride + k - 1] * x[2];
        }
    }
    double worst = 0.0;
    for (int a = 0; a <= e; ++a)
        for (int b = 0; a + b <= e; ++b)
            for (int c = 0; a + b + c <= e; ++c) {
                CompensatedSum s;
                for (std::size_t i = 0; i < nn; ++i)
                    s.add(rule.weights()[i] * px[i * stride + a] * py[i * stride + b] *
                          pz[i * stride + c]);
                worst = std::max(worst, std::abs(s.value() - monomial_sphere_integral(a, b, c)));
            }
    return worst;
}

/// Header "# q=<d> N=<count> exactness=<e>", then one "coords... w" line per node.
inline void save_rule(const QuadratureRule& rule, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path + " for writing");
    out << "# q=" << rule.q() << " N=" << rule.size() << " exactness=" << rule.exactness() << '\n';
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const auto& p = rule.nodes()[i];
        for (std::size_t k = 0; k < p.dim(); ++k) out << io::format_double(p[k]) << ' ';
        out << io::format_double(rule.weights()[i]) << '\n';
    }
    if (!out.flush()) throw Error("write failed: " + path);
}

inline QuadratureRule load_rule(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LoadError("cannot open " + path, 0);
    std::string line;
    if (!std::getline(in, line) || line.rfind('#', 0) != 0)
        throw LoadError("line 1: missing '# q=<d> N=<count> exactness=<e>' header", 1);
    long long q = 0, count = 0, exactness = 0;
    if (!io::header_field(line, "q", q) || !io::header_field(line, "N", count) ||
        !io::header_field(line, "exactness", exactness) || q < 1 || count < 1 || exactness < 0)
        throw LoadError("line 1: malformed header: " + line, 1);

    std::vector<SpherePoint> nodes;
    std::vector<double> weights;
    std::size_t lineno = 1;
    auto fail = [&](const std::string& why) {
        throw LoadError("line " + std::to_string(lineno) + ": " + why, lineno);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto toks = io::split_ws(line);
        if (toks.empty()) continue;
        if (toks.size() != static_cast<std::size_t>(q) + 2)
            fail("expected " + std::to_string(q + 2) + " fields");
        std::vector<double> v(toks.size());
        for (std::size_t i = 0; i < toks.size(); ++i)
            if (!io::parse_double(toks[i], v[i])) fail("bad number '" + std::string(toks[i]) + "'");
        const double w = v.back();
        v.pop_back();
        if (!(w > 0.0) || !std::isfinite(w)) fail("non-positive weight");
        try {
            nodes.emplace_back(std::move(v));
        } catch (const Error&) {
            fail("node is not on the unit sphere");
        }
        weights.push_back(w);
    }
    if (nodes.size() != static_cast<std::size_t>(count))
        throw LoadError("line 1: header declares N=" + std::to_string(count) + " but file has " +
                            std::to_string(nodes.size()) + " nodes",
                        1);
    try {
        return QuadratureRule(std::move(nodes), std::move(weights), static_cast<int>(exactness));
    } catch (const Error& e) {
        throw LoadError(std::string("line 1: ") + e.what(), 1);
    }
}

} // namespace sphereproj
