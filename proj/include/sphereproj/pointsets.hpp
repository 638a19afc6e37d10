#pragma once

// Spiral point sets, uniformity statistics (mesh norm, separation distance,
// mesh ratio) and the two numeric certificates: the number of nodes in a
// geodesic cap of radius 1/n, and the ratio of consecutive sorted weights.

#include "sphereproj/core_geometry.hpp"
#include "sphereproj/errors.hpp"
#include "sphereproj/parallel.hpp"
#include "sphereproj/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace sphereproj {

/// Generalized spiral on S^2 with M points:
///   h_k = -1 + 2(k-1)/(M-1),  theta_k = arccos h_k,
///   phi_1 = phi_M = 0,  phi_k = phi_{k-1} + 3.6/sqrt(M) / sqrt(1 - h_k^2).
inline EvaluationSet spiral_points(std::size_t M) {
    if (M < 2) throw DomainError("spiral_points: need M >= 2");
    const double step = 3.6 / std::sqrt(static_cast<double>(M));
    std::vector<SpherePoint> pts;
    pts.reserve(M);
    double phi = 0.0; // accumulated without wrapping
    for (std::size_t k = 1; k <= M; ++k) {
        const double h = -1.0 + 2.0 * static_cast<double>(k - 1) / static_cast<double>(M - 1);
        const double s = std::sqrt((1.0 - h) * (1.0 + h));
        if (k == 1 || k == M) {
            pts.push_back(SpherePoint({0.0, 0.0, h}));
            continue;
        }
        phi += step / s;
        const double p = std::fmod(phi, 2.0 * std::numbers::pi);
        pts.push_back(normalize({s * std::cos(p), s * std::sin(p), h}));
    }
    return EvaluationSet(std::move(pts), "spiral-" + std::to_string(M));
}

namespace detail {

struct FlatPoints {
    std::vector<double> xyz;
    std::size_t dim = 0;
    std::size_t size() const noexcept { return dim ? xyz.size() / dim : 0; }
    const double* at(std::size_t i) const noexcept { return xyz.data() + i * dim; }
};

inline FlatPoints flat(std::span<const SpherePoint> pts) {
    return {flatten(pts), pts.empty() ? 0 : pts.front().dim()};
}

inline double raw_dot(const double* a, const double* b, std::size_t dim) noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < dim; ++k) s += a[k] * b[k];
    return s;
}

/// Dot product, exactly 1 for coincident points (rounding can leave
/// sum x_k^2 a few ulps below 1).
inline double point_dot(const double* a, const double* b, std::size_t dim) noexcept {
    const double d = raw_dot(a, b, dim);
    if (d > 1.0 - 1e-12 && std::equal(a, a + dim, b)) return 1.0;
    return d;
}

inline double arc(double dot) noexcept { return std::acos(std::clamp(dot, -1.0, 1.0)); }

} // namespace detail

/// max over eval of min over X of the geodesic distance; a lower bound of the
/// true mesh norm of X.
inline double mesh_norm(std::span<const SpherePoint> X, const EvaluationSet& eval) {
    if (X.empty() || eval.points.empty()) throw DomainError("mesh_norm: empty point set");
    const auto nodes = detail::flat(X);
    const auto probes = detail::flat(eval.points);
    if (nodes.dim != probes.dim) throw DimensionMismatch("mesh_norm: dimension mismatch");

    constexpr std::size_t kBlock = 1024;
    std::vector<double> block_worst((probes.size() + kBlock - 1) / kBlock, 1.0);
    parallel_for_blocks(probes.size(), kBlock, [&](std::size_t lo, std::size_t hi) {
        double worst = 1.0; // smallest "nearest" dot product seen
        for (std::size_t e = lo; e < hi; ++e) {
            double nearest = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < nodes.size(); ++i)
                nearest = std::max(nearest, detail::point_dot(probes.at(e), nodes.at(i), nodes.dim));
            worst = std::min(worst, nearest);
        }
        block_worst[lo / kBlock] = worst;
    });
    return detail::arc(*std::min_element(block_worst.begin(), block_worst.end()));
}

/// Threshold above which separation() switches from all pairs to the sweep.
inline constexpr std::size_t kSeparationAllPairsLimit = 20000;

namespace detail {

inline double separation_all_pairs(const FlatPoints& p) {
    const std::size_t n = p.size();
    std::vector<double> row_best(n, -std::numeric_limits<double>::infinity());
    parallel_for_blocks(n, 64, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                row_best[i] = std::max(row_best[i], point_dot(p.at(i), p.at(j), p.dim));
    });
    return arc(*std::max_element(row_best.begin(), row_best.end()));
}

/// Sort along the last coordinate and sweep: |z_i - z_j| never exceeds the
/// chord, so pairs further apart in z than the best chord so far are skipped.
/// Every pair that could be the minimum is evaluated with the same dot
/// product as the all-pairs path, so the result is identical.
inline double separation_sweep(const FlatPoints& p) {
    const std::size_t n = p.size();
    const std::size_t zc = p.dim - 1;
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p.at(a)[zc] < p.at(b)[zc]; });
    double best_dot = -std::numeric_limits<double>::infinity();
    double best_chord = 2.0;
    for (std::size_t a = 0; a < n; ++a) {
        const double* pa = p.at(order[a]);
        for (std::size_t b = a + 1; b < n; ++b) {
            const double* pb = p.at(order[b]);
            if (pb[zc] - pa[zc] > best_chord * (1.0 + 1e-12) + 1e-15) break;
            const double d = point_dot(pa, pb, p.dim);
            if (d > best_dot) {
                best_dot = d;
                best_chord = std::sqrt(std::max(0.0, 2.0 - 2.0 * d));
            }
        }
    }
    return arc(best_dot);
}

} // namespace detail

/// min_{i != j} d(xi_i, xi_j). Exact; duplicate points give 0.
inline double separation(std::span<const SpherePoint> X,
                         std::size_t all_pairs_limit = kSeparationAllPairsLimit) {
    if (X.size() < 2) throw DomainError("separation: need at least two points");
    const auto p = detail::flat(X);
    return X.size() <= all_pairs_limit ? detail::separation_all_pairs(p)
                                       : detail::separation_sweep(p);
}

/// max over centers c of card{xi in X : d(xi, c) <= radius}.
/// A node coinciding with the center always counts.
inline std::size_t cap_count(std::span<const SpherePoint> X, double radius,
                             std::span<const SpherePoint> centers) {
    if (X.empty() || centers.empty()) return 0;
    const auto nodes = detail::flat(X);
    const auto cs = detail::flat(centers);
    if (nodes.dim != cs.dim) throw DimensionMismatch("cap_count: dimension mismatch");
    const double cos_r = std::cos(radius);

    constexpr std::size_t kBlock = 512;
    std::vector<std::size_t> block_best((cs.size() + kBlock - 1) / kBlock, 0);
    parallel_for_blocks(cs.size(), kBlock, [&](std::size_t lo, std::size_t hi) {
        std::size_t best = 0;
        for (std::size_t c = lo; c < hi; ++c) {
            std::size_t count = 0;
            for (std::size_t i = 0; i < nodes.size(); ++i) {
                if (detail::point_dot(nodes.at(i), cs.at(c), nodes.dim) >= cos_r) ++count;
            }
            best = std::max(best, count);
        }
        block_best[lo / kBlock] = best;
    });
    return *std::max_element(block_best.begin(), block_best.end());
}

/// Cap count at radius 1/n, centers = eval points plus the nodes themselves.
inline std::size_t cap_count_certificate(std::span<const SpherePoint> X, int n,
                                         const EvaluationSet& eval) {
    if (n < 1) throw DomainError("cap_count_certificate: n must be >= 1");
    std::vector<SpherePoint> centers(eval.points.begin(), eval.points.end());
    centers.insert(centers.end(), X.begin(), X.end());
    return cap_count(X, 1.0 / n, centers);
}

/// Weights sorted descending; max_i w_i / w_{i+1}.
inline double weight_ratio_certificate(std::span<const double> weights) {
    if (weights.size() < 2) throw DomainError("weight_ratio_certificate: need at least two weights");
    std::vector<double> w(weights.begin(), weights.end());
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!(w[i] > 0.0))
            throw InvariantViolation("weight_ratio_certificate: weight " + std::to_string(i) +
                                     " is not positive");
    std::sort(w.begin(), w.end(), std::greater<>());
    double worst = 1.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) worst = std::max(worst, w[i] / w[i + 1]);
    return worst;
}

inline double weight_ratio_certificate(const QuadratureRule& rule) {
    return weight_ratio_certificate(rule.weights());
}

struct MeshStats {
    std::size_t N = 0;
    double mesh_norm = 0.0;  // delta, radians
    double separation = 0.0; // gamma, radians
    double mesh_ratio = 0.0; // delta / gamma
    std::size_t eval_size = 0;

    static constexpr const char* csv_header = "N,delta,gamma,ratio,eval_size";
    std::string csv_row() const {
        return std::to_string(N) + ',' + io::format_double(mesh_norm) + ',' +
               io::format_double(separation) + ',' + io::format_double(mesh_ratio) + ',' +
               std::to_string(eval_size);
    }
};

inline MeshStats mesh_stats(std::span<const SpherePoint> X, const EvaluationSet& eval) {
    MeshStats s;
    s.N = X.size();
    s.mesh_norm = mesh_norm(X, eval);
    s.separation = separation(X);
    s.mesh_ratio = s.separation > 0.0 ? s.mesh_norm / s.separation
                                      : std::numeric_limits<double>::infinity();
    s.eval_size = eval.size();
    return s;
}

struct CertificateReport {
    int n = 0;
    std::size_t N = 0;
    std::size_t cap_count_sup = 0;
    double weight_ratio_max = 1.0;

    static constexpr const char* csv_header = "n,N,cap_count,weight_ratio";
    std::string csv_row() const {
        return std::to_string(n) + ',' + std::to_string(N) + ',' + std::to_string(cap_count_sup) +
               ',' + io::format_double(weight_ratio_max);
    }
};

inline CertificateReport certify(const QuadratureRule& rule, int n, const EvaluationSet& eval) {
    return {n, rule.size(), cap_count_certificate(rule.nodes(), n, eval),
            weight_ratio_certificate(rule)};
}

} // namespace sphereproj
