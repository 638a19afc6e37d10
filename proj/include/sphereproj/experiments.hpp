#pragma once

// Experiment pipelines behind the sphereproj command-line tool. Each command
// writes a commented CSV (optionally mirrored as JSON) plus a gnuplot script
// into the output directory and returns the rows it wrote.

#include "sphereproj/core_geometry.hpp"
#include "sphereproj/errors.hpp"
#include "sphereproj/orthopoly.hpp"
#include "sphereproj/pointsets.hpp"
#include "sphereproj/projections.hpp"
#include "sphereproj/quadrature.hpp"
#include "sphereproj/sph_harmonics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#ifndef SPHEREPROJ_VERSION_STRING
#define SPHEREPROJ_VERSION_STRING "0.0.0"
#endif

namespace sphereproj::experiments {

inline std::string version() { return std::string("v") + SPHEREPROJ_VERSION_STRING; }

/// Bad command-line configuration (exit status 2).
class UsageError : public Error {
public:
    using Error::Error;
};

enum class OutputFormat { csv, json };

struct DegreeRange {
    int start = 0;
    int stop = 0;
    int step = 1;

    std::vector<int> values() const {
        if (step < 1) throw UsageError("n-step must be >= 1");
        if (start < 0 || stop < start) throw UsageError("n-range is empty or negative");
        std::vector<int> out;
        for (int n = start; n <= stop; n += step) out.push_back(n);
        return out;
    }
    std::string str() const {
        return std::to_string(start) + ":" + std::to_string(stop) + ":" + std::to_string(step);
    }
};

struct ExperimentConfig {
    std::string subcommand;
    DegreeRange range;
    int q = 2;
    int eval_mult = 0; // 0 -> command default (4 Lebesgue, 16 mesh norm)
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 20240601;
    OutputFormat format = OutputFormat::csv;
    int max_ls_degree = 40;
    std::vector<std::string> operators{"ls", "hyper"};
    std::optional<std::filesystem::path> rule_file;

    int multiplier(int fallback) const {
        const int m = eval_mult == 0 ? fallback : eval_mult;
        if (m < 1) throw UsageError("eval multiplier must be >= 1");
        return m;
    }

    std::string comment() const {
        std::ostringstream s;
        s << "# sphereproj " << version() << " cmd=" << subcommand << " n=" << range.str()
          << " q=" << q << " eval_mult=" << eval_mult << " seed=" << seed
          << " max_ls_degree=" << max_ls_degree << " operators=";
        for (std::size_t i = 0; i < operators.size(); ++i) s << (i ? "," : "") << operators[i];
        if (rule_file) s << " rule=" << rule_file->filename().string();
        return s.str();
    }
};

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << text;
    if (!out.flush()) throw Error("write failed: " + path.string());
}

inline void write_table(const ExperimentConfig& cfg, const std::string& stem, const Table& t) {
    ensure_dir(cfg.out_dir);
    std::ostringstream csv;
    csv << cfg.comment() << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) csv << (i ? "," : "") << t.columns[i];
    csv << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) csv << (i ? "," : "") << r[i];
        csv << '\n';
    }
    write_text(cfg.out_dir / (stem + ".csv"), csv.str());

    if (cfg.format == OutputFormat::json) {
        nlohmann::ordered_json j;
        j["comment"] = cfg.comment();
        j["columns"] = t.columns;
        j["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : t.rows) {
            nlohmann::ordered_json row;
            for (std::size_t i = 0; i < r.size(); ++i) row[t.columns[i]] = r[i];
            j["rows"].push_back(row);
        }
        write_text(cfg.out_dir / (stem + ".json"), j.dump(2) + "\n");
    }
}

inline std::string fmt(double x) { return io::format_double(x); }

inline void require_s2(const ExperimentConfig& cfg, const char* what) {
    if (cfg.q != 2)
        throw UsageError(std::string(what) + " is only available for q = 2 (got q=" +
                         std::to_string(cfg.q) + ")");
}

} // namespace detail

// ---------------------------------------------------------------------------

/// Tensor Gauss-Legendre nodes of degree n: rule file, lat/lon CSV, gnuplot script.
inline Table cmd_nodes(const ExperimentConfig& cfg, int n) {
    detail::require_s2(cfg, "nodes");
    if (n < 0) throw UsageError("--n must be >= 0");
    const auto rule = tensor_gl_rule(n);
    detail::ensure_dir(cfg.out_dir);
    const std::string stem = "nodes_n" + std::to_string(n);
    save_rule(rule, (cfg.out_dir / (stem + ".rule")).string());

    Table t{{"index", "lat_deg", "lon_deg", "x", "y", "z", "weight"}, {}};
    const double deg = 180.0 / std::numbers::pi;
    for (std::size_t i = 0; i < rule.size(); ++i) {
        const auto& p = rule.nodes()[i];
        const double lat = std::asin(std::clamp(p[2], -1.0, 1.0)) * deg;
        double lon = std::atan2(p[1], p[0]) * deg;
        if (lon < 0.0) lon += 360.0;
        t.rows.push_back({std::to_string(i), detail::fmt(lat), detail::fmt(lon), detail::fmt(p[0]),
                          detail::fmt(p[1]), detail::fmt(p[2]), detail::fmt(rule.weights()[i])});
    }
    detail::write_table(cfg, stem, t);
    detail::write_text(cfg.out_dir / (stem + ".gp"),
                       "set datafile separator ','\n"
                       "set view equal xyz\n"
                       "splot '" + stem + ".csv' using 4:5:6 every ::1 with points pt 7 ps 0.4 notitle\n");
    return t;
}

/// Mesh norm, separation and mesh ratio of tensor nodes per degree.
inline Table cmd_meshstats(const ExperimentConfig& cfg) {
    detail::require_s2(cfg, "meshstats");
    const int mult = cfg.multiplier(16);
    Table t{{"n", "N", "delta", "gamma", "ratio", "eval_size"}, {}};
    for (int n : cfg.range.values()) {
        const auto rule = tensor_gl_rule(n);
        const auto eval = spiral_points(static_cast<std::size_t>(mult) * rule.size());
        const auto s = mesh_stats(rule.nodes(), eval);
        t.rows.push_back({std::to_string(n), std::to_string(s.N), detail::fmt(s.mesh_norm),
                          detail::fmt(s.separation), detail::fmt(s.mesh_ratio),
                          std::to_string(s.eval_size)});
    }
    detail::write_table(cfg, "meshstats", t);
    detail::write_text(cfg.out_dir / "meshstats.gp",
                       "set datafile separator ','\n"
                       "set logscale xy\n"
                       "plot 'meshstats.csv' every ::1 using 1:3 with linespoints title 'delta', \\\n"
                       "     '' every ::1 using 1:4 with linespoints title 'gamma', \\\n"
                       "     '' every ::1 using 1:5 with linespoints title 'delta/gamma'\n");
    return t;
}

/// Lebesgue-constant estimates on tensor nodes with a spiral evaluation set.
inline Table cmd_lebesgue(const ExperimentConfig& cfg) {
    const int mult = cfg.multiplier(4);
    const auto degrees = cfg.range.values();
    if (cfg.operators.empty()) throw UsageError("no operators selected");
    for (const auto& op : cfg.operators) {
        if (op != "ls" && op != "hyper" && op != "fourier")
            throw UsageError("unknown operator '" + op + "' (expected ls, hyper or fourier)");
        if (op != "fourier") detail::require_s2(cfg, "operator ls/hyper");
        if (op == "ls")
            for (int n : degrees)
                if (n > cfg.max_ls_degree)
                    throw UsageError("least-squares degree " + std::to_string(n) +
                                     " exceeds --max-ls-degree=" + std::to_string(cfg.max_ls_degree) +
                                     "; raise the limit to run it");
    }

    std::vector<std::string> cols;
    {
        std::string header = LebesgueReport::csv_header;
        std::stringstream ss(header);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(c);
    }
    cols.push_back("sqrt_n");
    cols.push_back("estimate_over_sqrt_n");
    Table t{cols, {}};

    auto push = [&](const LebesgueReport& r) {
        std::vector<std::string> row;
        std::stringstream ss(r.csv_row());
        for (std::string c; std::getline(ss, c, ',');) row.push_back(c);
        while (row.size() < 9) row.emplace_back();
        const double root = std::sqrt(static_cast<double>(r.n));
        row.push_back(detail::fmt(root));
        row.push_back(r.n > 0 ? detail::fmt(r.estimate / root) : std::string("nan"));
        t.rows.push_back(std::move(row));
    };

    for (const auto& op : cfg.operators) {
        for (int n : degrees) {
            if (op == "fourier") {
                // One evaluation point suffices; the Lebesgue function is constant.
                const FourierOperator f(cfg.q, n);
                std::vector<double> north(static_cast<std::size_t>(cfg.q) + 1, 0.0);
                north.back() = 1.0;
                push(lebesgue_constant_estimate(f, EvaluationSet({SpherePoint(north)}, "exact")));
                continue;
            }
            auto rule = tensor_gl_rule(n);
            const auto eval = spiral_points(static_cast<std::size_t>(mult) * rule.size());
            if (op == "hyper") {
                push(lebesgue_constant_estimate(HyperinterpolationOperator(std::move(rule), n), eval));
            } else {
                push(lebesgue_constant_estimate(build_ls_basis(rule.nodes(), n), eval));
            }
        }
    }
    detail::write_table(cfg, "lebesgue", t);
    detail::write_text(cfg.out_dir / "lebesgue.gp",
                       "set datafile separator ','\n"
                       "set logscale xy\n"
                       "plot 'lebesgue.csv' every ::1 using 2:(strcol(1) eq 'ls' ? $6 : 1/0) "
                       "with points pt 6 title 'least squares', \\\n"
                       "     '' every ::1 using 2:(strcol(1) eq 'hyper' ? $6 : 1/0) "
                       "with points pt 4 title 'hyperinterpolation', \\\n"
                       "     sqrt(x) with lines dt 2 title 'sqrt(n)'\n");
    return t;
}

struct VerifyCheck {
    std::string name;
    double value = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct VerifyResult {
    std::vector<VerifyCheck> checks;
    std::vector<std::pair<std::string, double>> info;
    Table table;
    bool ok() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.pass; });
    }
};

/// Runs the invariant suite on a rule (tensor rule of degree n by default, or
/// --rule FILE) and degree-n projections built on its nodes.
inline VerifyResult cmd_verify(const ExperimentConfig& cfg, int n) {
    detail::require_s2(cfg, "verify");
    if (n < 0) throw UsageError("--n must be >= 0");
    VerifyResult res;
    auto check = [&](std::string name, double value, double threshold, bool pass) {
        res.checks.push_back({std::move(name), value, threshold, pass});
    };
    auto at_most = [&](std::string name, double value, double threshold) {
        check(std::move(name), value, threshold, value <= threshold);
    };

    const QuadratureRule rule =
        cfg.rule_file ? load_rule(cfg.rule_file->string()) : tensor_gl_rule(n);
    if (rule.q() != 2) throw UsageError("verify: rule file must be on S^2");

    const double area = surface_area(2);
    at_most("weight_sum_rel_error", std::abs(rule.weight_sum() - area) / area, 1e-10);
    at_most("quadrature_exactness_max_error", verify_exactness(rule), 1e-10 * area);
    check("rule_exactness_at_least_2n", rule.exactness(), 2.0 * n, rule.exactness() >= 2 * n);

    const auto basis = build_ls_basis(rule.nodes(), n);
    const Eigen::MatrixXd& q = basis.node_values();
    const double gram_dev =
        (q.transpose() * q - Eigen::MatrixXd::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
    at_most("ls_gram_max_deviation", gram_dev, 1e-9);
    at_most("ls_kernel_node_pair_max", basis.max_abs_node_kernel(), 1.0 + 1e-9);
    at_most("ls_kernel_trace_abs_error",
            std::abs(basis.kernel_trace() - static_cast<double>(basis.dimension())), 1e-7);

    // Reproduction of a random polynomial by both projections.
    Rng rng(cfg.seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    Eigen::VectorXd c(static_cast<Eigen::Index>(basis.dimension()));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = coef(rng);
    auto poly = [&](const SpherePoint& x) {
        const auto y = eval_harmonic_basis(n, x);
        return c.dot(Eigen::Map<const Eigen::VectorXd>(y.data(), c.size()));
    };
    const auto probe = spiral_points(500);
    double pmax = 0.0;
    for (const auto& x : probe.points) pmax = std::max(pmax, std::abs(poly(x)));
    at_most("ls_reproduction_rel_error", uniform_error_estimate(basis, poly, probe) / pmax, 1e-8);
    if (rule.exactness() >= 2 * n) {
        const HyperinterpolationOperator hyper(rule, n);
        at_most("hyper_reproduction_rel_error", uniform_error_estimate(hyper, poly, probe) / pmax,
                1e-8);
    }

    res.info.emplace_back("weight_ratio_certificate", weight_ratio_certificate(rule));
    if (n >= 1) {
        const auto eval = spiral_points(4 * rule.size());
        res.info.emplace_back("cap_count_certificate",
                              static_cast<double>(cap_count_certificate(rule.nodes(), n, eval)));
    }

    res.table.columns = {"check", "value", "threshold", "status"};
    for (const auto& c : res.checks)
        res.table.rows.push_back(
            {c.name, detail::fmt(c.value), detail::fmt(c.threshold), c.pass ? "pass" : "FAIL"});
    for (const auto& [name, value] : res.info)
        res.table.rows.push_back({name, detail::fmt(value), "", "info"});
    detail::write_table(cfg, "verify", res.table);
    return res;
}

} // namespace sphereproj::experiments
