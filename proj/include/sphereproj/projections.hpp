#pragma once

// Discrete polynomial projections onto P_n built from a node set:
//   hyperinterpolation  L_n f(x) = 1/|S^{q-1}| sum_i w_i f(xi_i) K_n(xi_i . x)
//   least squares       S_n f(x) = sum_i f(xi_i) H_n(x, xi_i)
// with H_n the reproducing kernel of P_n for the unweighted discrete inner
// product over the nodes. Both expose their Lebesgue function so the operator
// norm can be estimated as a max over an evaluation set.

#include "sphereproj/core_geometry.hpp"
#include "sphereproj/errors.hpp"
#include "sphereproj/orthopoly.hpp"
#include "sphereproj/parallel.hpp"
#include "sphereproj/quadrature.hpp"
#include "sphereproj/sph_harmonics.hpp"
#include "sphereproj/summation.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <span>
#include <string>
#include <vector>

namespace sphereproj {

namespace detail {

inline constexpr std::size_t kEvalBlock = 256;

template <class Fn>
std::vector<double> node_values(std::span<const SpherePoint> nodes, Fn&& f) {
    std::vector<double> v(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        v[i] = f(nodes[i]);
        if (!std::isfinite(v[i]))
            throw EvaluationError("non-finite function value at node " + std::to_string(i), i);
    }
    return v;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Hyperinterpolation

class HyperinterpolationOperator {
public:
    HyperinterpolationOperator(QuadratureRule rule, int n)
        : rule_(std::move(rule)), kernel_(rule_.q(), n), scale_(1.0 / surface_area(rule_.q() - 1)) {
        if (rule_.exactness() < 2 * n)
            throw ConfigurationError("hyperinterpolation of degree " + std::to_string(n) +
                                     " needs a rule exact to degree " + std::to_string(2 * n) +
                                     ", got " + std::to_string(rule_.exactness()));
    }

    static constexpr const char* tag() noexcept { return "hyper"; }
    int degree() const noexcept { return kernel_.degree(); }
    std::size_t node_count() const noexcept { return rule_.size(); }
    const QuadratureRule& rule() const noexcept { return rule_; }
    const DarbouxKernel& kernel() const noexcept { return kernel_; }
    const std::vector<SpherePoint>& nodes() const noexcept { return rule_.nodes(); }

    /// L_n f(x) from node values f(xi_i).
    double apply(std::span<const double> f, const SpherePoint& x) const {
        check_values(f);
        CompensatedSum s;
        for (std::size_t i = 0; i < rule_.size(); ++i)
            s.add(rule_.weights()[i] * f[i] * kernel_(clamped_dot(rule_.nodes()[i], x)));
        return scale_ * s.value();
    }

    /// 1/|S^{q-1}| sum_i w_i |K_n(xi_i . x)|
    double lebesgue_function(const SpherePoint& x) const {
        if (x.dim() != rule_.nodes().front().dim())
            throw DimensionMismatch("hyperinterpolation: point dimension differs from nodes");
        CompensatedSum s;
        for (std::size_t i = 0; i < rule_.size(); ++i)
            s.add(rule_.weights()[i] *
                  std::abs(kernel_.eval_unchecked(clamped_dot(rule_.nodes()[i], x))));
        return scale_ * s.value();
    }

    std::vector<double> lebesgue_values(std::span<const SpherePoint> pts) const {
        std::vector<double> out(pts.size());
        parallel_for_blocks(pts.size(), detail::kEvalBlock, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) out[i] = lebesgue_function(pts[i]);
        });
        return out;
    }

    std::vector<double> approximate(std::span<const double> f, std::span<const SpherePoint> pts) const {
        check_values(f);
        std::vector<double> out(pts.size());
        parallel_for_blocks(pts.size(), detail::kEvalBlock, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) out[i] = apply(f, pts[i]);
        });
        return out;
    }

private:
    void check_values(std::span<const double> f) const {
        if (f.size() != rule_.size())
            throw DimensionMismatch("hyperinterpolation: expected one value per node");
        for (std::size_t i = 0; i < f.size(); ++i)
            if (!std::isfinite(f[i]))
                throw EvaluationError("non-finite function value at node " + std::to_string(i), i);
    }

    QuadratureRule rule_;
    DarbouxKernel kernel_;
    double scale_;
};

inline double hyperinterpolate(const HyperinterpolationOperator& op, std::span<const double> f,
                               const SpherePoint& x) {
    return op.apply(f, x);
}

template <class Fn>
    requires std::invocable<Fn, const SpherePoint&>
double hyperinterpolate(const HyperinterpolationOperator& op, Fn&& f, const SpherePoint& x) {
    return op.apply(detail::node_values(op.nodes(), f), x);
}

inline double hyper_lebesgue_function(const HyperinterpolationOperator& op, const SpherePoint& x) {
    return op.lebesgue_function(x);
}

// ---------------------------------------------------------------------------
// Least squares

/// Basis I_1..I_{d_n} of P_n (q = 2) orthonormal for <f,g>_N = sum_i f(xi_i) g(xi_i).
///
/// From the thin QR factorization A = Q R of the N x d_n matrix of harmonic
/// values at the nodes: I_r = sum_s (R^{-1})_{sr} Y_s, I_r(xi_i) = Q_{ir}, and
/// H_n(x, xi_k) = Y(x)^T (R^{-1} Q^T)_{:,k}.
class DiscreteOrthonormalBasis {
public:
    static constexpr double kRankTolerance = 1e-10;

    DiscreteOrthonormalBasis(std::vector<SpherePoint> nodes, int n) : nodes_(std::move(nodes)), n_(n) {
        if (n < 0) throw DomainError("build_ls_basis: degree must be >= 0");
        if (nodes_.empty()) throw DomainError("build_ls_basis: empty node set");
        if (nodes_.front().q() != 2)
            throw DomainError("build_ls_basis: least-squares basis is only available on S^2");
        const auto d = static_cast<Eigen::Index>(HarmonicBasis(n).dimension());
        const auto N = static_cast<Eigen::Index>(nodes_.size());
        if (N < d)
            throw DimensionMismatch("build_ls_basis: " + std::to_string(N) +
                                    " nodes cannot determine " + std::to_string(d) +
                                    " coefficients");

        Eigen::MatrixXd a = harmonic_matrix(n, nodes_);
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
        const Eigen::MatrixXd r = qr.matrixQR().topLeftCorner(d, d).triangularView<Eigen::Upper>();

        const double largest = r.diagonal().cwiseAbs().maxCoeff();
        for (Eigen::Index i = 0; i < d; ++i)
            if (!(std::abs(r(i, i)) >= kRankTolerance * largest))
                throw DegenerateNodeSet("build_ls_basis: harmonic matrix is rank deficient at column " +
                                        std::to_string(i) + " (nodes do not determine P_" +
                                        std::to_string(n) + ")");

        node_values_ = qr.householderQ() * Eigen::MatrixXd::Identity(N, d);
        coefficients_ = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(d, d));
        kernel_rows_ = r.triangularView<Eigen::Upper>().solve(node_values_.transpose());
    }

    static constexpr const char* tag() noexcept { return "ls"; }
    int degree() const noexcept { return n_; }
    std::size_t dimension() const noexcept { return static_cast<std::size_t>(coefficients_.rows()); }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    const std::vector<SpherePoint>& nodes() const noexcept { return nodes_; }

    /// Column r holds the harmonic coefficients of I_r.
    const Eigen::MatrixXd& coefficients() const noexcept { return coefficients_; }
    /// Entry (i, r) = I_r(xi_i).
    const Eigen::MatrixXd& node_values() const noexcept { return node_values_; }

    /// I_1(x) .. I_{d_n}(x).
    Eigen::VectorXd basis_values(const SpherePoint& x) const {
        const auto y = eval_harmonic_basis(n_, x);
        return coefficients_.transpose() * Eigen::Map<const Eigen::VectorXd>(y.data(), std::ssize(y));
    }

    /// H_n(x, y) = sum_r I_r(x) I_r(y).
    double kernel(const SpherePoint& x, const SpherePoint& y) const {
        return basis_values(x).dot(basis_values(y));
    }

    /// H_n(x, xi_k) for k = 1..N.
    Eigen::VectorXd kernel_row(const SpherePoint& x) const {
        const auto y = eval_harmonic_basis(n_, x);
        return kernel_rows_.transpose() * Eigen::Map<const Eigen::VectorXd>(y.data(), std::ssize(y));
    }

    /// H_n(xi_l, xi_j) from the node-value table.
    double node_kernel(std::size_t l, std::size_t j) const {
        return node_values_.row(static_cast<Eigen::Index>(l))
            .dot(node_values_.row(static_cast<Eigen::Index>(j)));
    }

    /// max_{l,j} |H_n(xi_l, xi_j)|, blockwise over l.
    double max_abs_node_kernel() const {
        const auto N = static_cast<std::size_t>(node_values_.rows());
        std::vector<double> block_max((N + detail::kEvalBlock - 1) / detail::kEvalBlock, 0.0);
        parallel_for_blocks(N, detail::kEvalBlock, [&](std::size_t lo, std::size_t hi) {
            const Eigen::MatrixXd h =
                node_values_.middleRows(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(hi - lo)) *
                node_values_.transpose();
            block_max[lo / detail::kEvalBlock] = h.cwiseAbs().maxCoeff();
        });
        return *std::max_element(block_max.begin(), block_max.end());
    }

    /// sum_j H_n(xi_j, xi_j); equals d_n for an orthonormal node table.
    double kernel_trace() const {
        CompensatedSum s;
        for (Eigen::Index i = 0; i < node_values_.rows(); ++i) s.add(node_values_.row(i).squaredNorm());
        return s.value();
    }

    /// Harmonic coefficients of the least-squares polynomial for node values f.
    Eigen::VectorXd fit(std::span<const double> f) const {
        check_values(f);
        return kernel_rows_ * Eigen::Map<const Eigen::VectorXd>(f.data(), std::ssize(f));
    }

    double apply(std::span<const double> f, const SpherePoint& x) const {
        const auto y = eval_harmonic_basis(n_, x);
        return fit(f).dot(Eigen::Map<const Eigen::VectorXd>(y.data(), std::ssize(y)));
    }

    double lebesgue_function(const SpherePoint& x) const {
        const Eigen::VectorXd h = kernel_row(x);
        return compensated_abs_sum(std::span<const double>(h.data(), static_cast<std::size_t>(h.size())));
    }

    /// Lebesgue function on many points through blocked matrix products.
    std::vector<double> lebesgue_values(std::span<const SpherePoint> pts) const {
        std::vector<double> out(pts.size());
        parallel_for_blocks(pts.size(), detail::kEvalBlock, [&](std::size_t lo, std::size_t hi) {
            const Eigen::MatrixXd y = harmonic_matrix(n_, pts.subspan(lo, hi - lo));
            const Eigen::MatrixXd h = y * kernel_rows_;
            for (Eigen::Index r = 0; r < h.rows(); ++r) {
                CompensatedSum s;
                for (Eigen::Index k = 0; k < h.cols(); ++k) s.add(std::abs(h(r, k)));
                out[lo + static_cast<std::size_t>(r)] = s.value();
            }
        });
        return out;
    }

    std::vector<double> approximate(std::span<const double> f, std::span<const SpherePoint> pts) const {
        const Eigen::VectorXd c = fit(f);
        std::vector<double> out(pts.size());
        parallel_for_blocks(pts.size(), detail::kEvalBlock, [&](std::size_t lo, std::size_t hi) {
            const Eigen::VectorXd v = harmonic_matrix(n_, pts.subspan(lo, hi - lo)) * c;
            for (Eigen::Index r = 0; r < v.size(); ++r) out[lo + static_cast<std::size_t>(r)] = v(r);
        });
        return out;
    }

private:
    void check_values(std::span<const double> f) const {
        if (f.size() != nodes_.size())
            throw DimensionMismatch("least squares: expected " + std::to_string(nodes_.size()) +
                                    " node values, got " + std::to_string(f.size()));
    }

    std::vector<SpherePoint> nodes_;
    int n_;
    Eigen::MatrixXd node_values_;  // N x d
    Eigen::MatrixXd coefficients_; // d x d, R^{-1}
    Eigen::MatrixXd kernel_rows_;  // d x N, R^{-1} Q^T
};

inline DiscreteOrthonormalBasis build_ls_basis(std::vector<SpherePoint> nodes, int n) {
    return DiscreteOrthonormalBasis(std::move(nodes), n);
}

inline double ls_project(const DiscreteOrthonormalBasis& basis, std::span<const double> f,
                         const SpherePoint& x) {
    return basis.apply(f, x);
}

inline double ls_lebesgue_function(const DiscreteOrthonormalBasis& basis, const SpherePoint& x) {
    return basis.lebesgue_function(x);
}

// ---------------------------------------------------------------------------
// Fourier projection, as a reference operator with a constant Lebesgue function.

class FourierOperator {
public:
    FourierOperator(int q, int n) : q_(q), n_(n), constant_(fourier_lebesgue_constant(q, n)) {}

    static constexpr const char* tag() noexcept { return "fourier"; }
    int degree() const noexcept { return n_; }
    int q() const noexcept { return q_; }
    std::size_t node_count() const noexcept { return 0; }
    double lebesgue_function(const SpherePoint&) const noexcept { return constant_; }
    std::vector<double> lebesgue_values(std::span<const SpherePoint> pts) const {
        return std::vector<double>(pts.size(), constant_);
    }

private:
    int q_;
    int n_;
    double constant_;
};

// ---------------------------------------------------------------------------
// Lebesgue-constant estimation

template <class Op>
concept LebesgueOperator = requires(const Op& op, std::span<const SpherePoint> pts) {
    { Op::tag() } -> std::convertible_to<std::string>;
    { op.degree() } -> std::convertible_to<int>;
    { op.node_count() } -> std::convertible_to<std::size_t>;
    { op.lebesgue_values(pts) } -> std::same_as<std::vector<double>>;
};

template <class Op>
concept DiscreteProjection = LebesgueOperator<Op> &&
    requires(const Op& op, std::span<const double> f, std::span<const SpherePoint> pts) {
        { op.nodes() } -> std::convertible_to<const std::vector<SpherePoint>&>;
        { op.approximate(f, pts) } -> std::same_as<std::vector<double>>;
    };

struct LebesgueReport {
    std::string tag;
    int n = 0;
    std::size_t node_count = 0;
    std::string eval_label;
    std::size_t eval_size = 0;
    double estimate = 0.0;
    SpherePoint argmax;
    std::size_t argmax_index = 0;

    static constexpr const char* csv_header =
        "tag,n,N,eval_label,eval_size,estimate,argmax_x,argmax_y,argmax_z";

    std::string csv_row() const {
        std::string row = tag + ',' + std::to_string(n) + ',' + std::to_string(node_count) + ',' +
                          eval_label + ',' + std::to_string(eval_size) + ',' +
                          io::format_double(estimate);
        for (std::size_t k = 0; k < 3; ++k)
            row += ',' + (k < argmax.dim() ? io::format_double(argmax[k]) : std::string());
        return row;
    }
};

/// Max of the operator's Lebesgue function over `eval`; a lower bound on the
/// operator norm. Ties resolve to the lowest index.
template <LebesgueOperator Op>
LebesgueReport lebesgue_constant_estimate(const Op& op, const EvaluationSet& eval) {
    if (eval.points.empty()) throw DomainError("lebesgue_constant_estimate: empty evaluation set");
    const auto values = op.lebesgue_values(eval.points);
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i)
        if (values[i] > values[best]) best = i;
    return LebesgueReport{Op::tag(),   op.degree(),     op.node_count(),  eval.label,
                          eval.size(), values[best],    eval.points[best], best};
}

/// max over eval of |f - Op f|.
template <DiscreteProjection Op, class Fn>
double uniform_error_estimate(const Op& op, Fn&& f, const EvaluationSet& eval) {
    const auto fv = detail::node_values(op.nodes(), f);
    const auto approx = op.approximate(fv, eval.points);
    double worst = 0.0;
    for (std::size_t i = 0; i < approx.size(); ++i)
        worst = std::max(worst, std::abs(f(eval.points[i]) - approx[i]));
    return worst;
}

} // namespace sphereproj
