// Command-line experiment runner: tensor-rule nodes, mesh statistics,
// Lebesgue-constant estimates and the invariant verification suite.

#include "sphereproj/experiments.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>

namespace {

namespace ex = sphereproj::experiments;

enum Exit : int { kOk = 0, kCheckFailure = 1, kUsage = 2, kNumerical = 3 };

struct Flags {
    std::optional<int> n;
    std::optional<int> n_start, n_stop, n_step;
    int q = 2;
    int eval_mult = 0;
    std::string out = ".";
    std::uint64_t seed = 20240601;
    std::string format = "csv";
    int max_ls_degree = 40;
    std::vector<std::string> operators{"ls", "hyper"};
    std::string rule;
};

void add_common(CLI::App* cmd, Flags& f, bool ranged) {
    cmd->add_option("--n", f.n, "Polynomial degree");
    if (ranged) {
        cmd->add_option("--n-start", f.n_start, "First degree of the range");
        cmd->add_option("--n-stop", f.n_stop, "Last degree of the range (inclusive)");
        cmd->add_option("--n-step", f.n_step, "Degree increment");
        cmd->add_option("--eval-mult", f.eval_mult,
                        "Spiral evaluation points per node (default 4 for lebesgue, 16 for meshstats)");
    }
    cmd->add_option("--q", f.q, "Sphere dimension")->capture_default_str();
    cmd->add_option("--out", f.out, "Output directory")->capture_default_str();
    cmd->add_option("--seed", f.seed, "Seed for random test polynomials")->capture_default_str();
    cmd->add_option("--format", f.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

ex::ExperimentConfig to_config(const std::string& sub, const Flags& f, ex::DegreeRange fallback) {
    ex::ExperimentConfig cfg;
    cfg.subcommand = sub;
    if (f.n) {
        cfg.range = {*f.n, *f.n, 1};
    } else {
        cfg.range = {f.n_start.value_or(fallback.start), f.n_stop.value_or(fallback.stop),
                     f.n_step.value_or(fallback.step)};
    }
    cfg.q = f.q;
    cfg.eval_mult = f.eval_mult;
    cfg.out_dir = f.out;
    cfg.seed = f.seed;
    cfg.format = f.format == "json" ? ex::OutputFormat::json : ex::OutputFormat::csv;
    cfg.max_ls_degree = f.max_ls_degree;
    cfg.operators = f.operators;
    if (!f.rule.empty()) cfg.rule_file = f.rule;
    if (cfg.eval_mult < 0) throw ex::UsageError("--eval-mult must be >= 1");
    return cfg;
}

void print_table(const ex::Table& t) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) std::cout << (i ? "," : "") << t.columns[i];
    std::cout << '\n';
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) std::cout << (i ? "," : "") << r[i];
        std::cout << '\n';
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Hyperinterpolation and least-squares projections on the sphere"};
    app.set_version_flag("--version", ex::version());
    app.require_subcommand(1);

    Flags f;
    auto* nodes = app.add_subcommand("nodes", "Tensor Gauss-Legendre nodes (rule file + lat/lon CSV)");
    add_common(nodes, f, false);

    auto* mesh = app.add_subcommand("meshstats", "Mesh norm, separation and mesh ratio per degree");
    add_common(mesh, f, true);

    auto* leb = app.add_subcommand("lebesgue", "Lebesgue-constant estimates per operator and degree");
    add_common(leb, f, true);
    leb->add_option("--operators", f.operators, "Operators: ls, hyper, fourier")
        ->delimiter(',')
        ->capture_default_str();
    leb->add_option("--max-ls-degree", f.max_ls_degree, "Largest degree allowed for least squares")
        ->capture_default_str();

    auto* verify = app.add_subcommand("verify", "Run the invariant suite on a rule");
    add_common(verify, f, false);
    verify->add_option("--rule", f.rule, "Rule file to verify instead of the tensor rule");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (nodes->parsed()) {
            if (!f.n) throw ex::UsageError("nodes requires --n");
            auto cfg = to_config("nodes", f, {});
            const auto t = ex::cmd_nodes(cfg, *f.n);
            std::cout << "wrote " << t.rows.size() << " nodes to " << cfg.out_dir.string() << '\n';
        } else if (mesh->parsed()) {
            print_table(ex::cmd_meshstats(to_config("meshstats", f, {5, 50, 5})));
        } else if (leb->parsed()) {
            print_table(ex::cmd_lebesgue(to_config("lebesgue", f, {10, 40, 10})));
        } else if (verify->parsed()) {
            if (!f.n) throw ex::UsageError("verify requires --n");
            const auto res = ex::cmd_verify(to_config("verify", f, {}), *f.n);
            print_table(res.table);
            for (const auto& c : res.checks)
                if (!c.pass) std::cerr << "check failed: " << c.name << '\n';
            return res.ok() ? kOk : kCheckFailure;
        }
    } catch (const ex::UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    } catch (const sphereproj::LoadError& e) {
        std::cerr << "check failed: invalid input file: " << e.what() << '\n';
        return kCheckFailure;
    } catch (const sphereproj::InvariantViolation& e) {
        std::cerr << "check failed: " << e.what() << '\n';
        return kCheckFailure;
    } catch (const sphereproj::DegenerateNodeSet& e) {
        std::cerr << "check failed: " << e.what() << '\n';
        return kCheckFailure;
    } catch (const sphereproj::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kCheckFailure;
    }
    std::cout.flush();
    return kOk;
}
