#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "bvp/approx.hpp"
#include "bvp/config.hpp"
#include "bvp/errors.hpp"
#include "bvp/paramlab.hpp"
#include "bvp/report.hpp"

namespace fs = std::filesystem;
using namespace bvp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSingular = 2;
constexpr int kExitParse = 3;
constexpr int kExitNumeric = 4;

struct CliOptions {
    std::string command;
    std::string input;
    std::string out = ".";
    double tol = -1.0;        // < 0: take from config
    double rank_tol = -1.0;   // rank-threshold scale
    long long seed = -1;
    int jobs = 1;
    int grid = -1;
};

void write_file(const fs::path& path, const std::string& contents) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write " + path.string());
    os << contents;
}

Json func_json(const Func& f) {
    Json out;
    out["rows"] = f.rows();
    out["cols"] = f.cols();
    Json pieces = Json::array();
    for (int i = 0; i < f.piece_count(); ++i) {
        Interval iv = f.piece_interval(i);
        Json pj;
        pj["lo"] = iv.a;
        pj["hi"] = iv.b;
        Json coeffs = Json::array();
        for (const auto& c : f.piece_coeffs(i)) coeffs.push_back(matrix_json(c));
        pj["coefficients"] = std::move(coeffs);
        pieces.push_back(std::move(pj));
    }
    out["pieces"] = std::move(pieces);
    return out;
}

int run_solve(const LoadedConfig& cfg, const Options& opt, const fs::path& outdir,
              int grid) {
    if (!cfg.problem) throw ParseError("solve requires a 'problem' section");
    const BvProblem& prob = *cfg.problem;
    BvpSolution sol = solve_bvp(prob, opt.tol, opt.rank_scale);
    const SobolevIndex& idx = prob.index;

    Json rep;
    rep["command"] = "solve";
    rep["index"] = Json{{"n", idx.n}, {"r", idx.r}, {"m", idx.m},
                        {"p", idx.p == kInfinity ? Json("inf") : Json(idx.p)}};
    rep["interval"] = Json::array({prob.system.domain.a, prob.system.domain.b});
    rep["constants"] = [&] {
        Json arr = Json::array();
        for (Eigen::Index i = 0; i < sol.constants.size(); ++i)
            arr.push_back(complex_json(sol.constants(i)));
        return arr;
    }();
    rep["residual_ode"] = sol.residual_ode;
    rep["residual_boundary"] = sol.residual_boundary;
    rep["sobolev_norm"] = sol.y.sobolev_norm(idx.smoothness(), idx.p, opt.quad_tol);
    rep["solution"] = func_json(sol.y);

    std::ostringstream json_os;
    dump_json(rep, json_os, 2);
    write_file(outdir / "solution.json", json_os.str());

    std::ostringstream csv;
    std::vector<std::string> header{"t"};
    for (int s = 0; s <= idx.smoothness(); ++s)
        for (int i = 0; i < idx.m; ++i) {
            header.push_back("y" + std::to_string(i) + "_d" + std::to_string(s) + "_re");
            header.push_back("y" + std::to_string(i) + "_d" + std::to_string(s) + "_im");
        }
    write_csv_row(csv, header);
    const Interval dom = prob.system.domain;
    for (int g = 0; g < grid; ++g) {
        double t = grid == 1 ? dom.a : dom.a + (dom.b - dom.a) * g / (grid - 1);
        std::vector<std::string> row{format_float(t)};
        for (int s = 0; s <= idx.smoothness(); ++s) {
            Matrix v = sol.derivs[s](t);
            for (int i = 0; i < idx.m; ++i) {
                row.push_back(format_float(v(i, 0).real()));
                row.push_back(format_float(v(i, 0).imag()));
            }
        }
        write_csv_row(csv, row);
    }
    write_file(outdir / "solution.csv", csv.str());
    return kExitOk;
}

int run_analyze(const LoadedConfig& cfg, const Options& opt, const fs::path& outdir) {
    if (!cfg.problem) throw ParseError("analyze requires a 'problem' section");
    const BvProblem& prob = *cfg.problem;
    CharMatrix cm =
        characteristic_matrix(prob.system, prob.boundary, opt.tol, opt.rank_scale);

    Json rep;
    rep["command"] = "analyze";
    rep["matrix"] = matrix_json(cm.matrix);
    rep["singular_values"] = cm.singular_values;
    rep["rank"] = cm.rank;
    rep["dim_ker"] = cm.dim_ker;
    rep["dim_coker"] = cm.dim_coker;
    rep["rank_tol"] = cm.rank_tol;
    rep["margin_flag"] = cm.margin_flag;
    rep["condition"] = cm.condition();
    rep["well_posed"] = cm.dim_ker == 0;

    std::ostringstream os;
    dump_json(rep, os, 2);
    write_file(outdir / "analysis.json", os.str());
    return kExitOk;
}

int run_sweep(const LoadedConfig& cfg, const Options& opt, const fs::path& outdir) {
    if (!cfg.family) throw ParseError("sweep requires a 'family' section");
    const ParameterFamily& fam = *cfg.family;

    DiscrepancyReport rep = two_sided_estimate(fam, opt.tol, opt.rank_scale);
    LimitIReport li = check_limit_condition_I(fam, opt.convergence_tol);
    LimitIIReport lii =
        check_limit_condition_II(fam, opt.probe_degree, opt.convergence_tol);

    std::ostringstream csv;
    write_csv_row(csv, {"label", "distance", "d_tilde", "solution_error", "ratio",
                        "solvable"});
    for (const auto& row : rep.rows)
        write_csv_row(csv, {row.label, format_float(row.distance),
                            format_float(row.d_tilde), format_float(row.solution_error),
                            format_float(row.ratio), row.solvable ? "1" : "0"});
    write_file(outdir / "sweep.csv", csv.str());

    Json verdict;
    verdict["command"] = "sweep";
    verdict["seed"] = opt.seed;
    verdict["condition0"] = rep.condition0_holds;
    verdict["limitI"] = li.converges;
    verdict["limitII"] = lii.converges;
    try {
        AsymptoticsReport as = check_B_asymptotics(fam, opt.grid, opt.convergence_tol);
        verdict["a"] = as.a;
        verdict["b"] = as.b;
        verdict["c"] = as.c;
        verdict["d"] = as.d;
        verdict["strong"] = as.strong;
        verdict["uniform"] = as.uniform;
    } catch (const UnsupportedExponent&) {
        verdict["a"] = nullptr;
        verdict["b"] = nullptr;
        verdict["c"] = nullptr;
        verdict["d"] = nullptr;
        verdict["strong"] = nullptr;
        verdict["uniform"] = nullptr;
        verdict["asymptotics_note"] = "criteria (a)-(d) require p < infinity";
    } catch (const DimensionMismatch&) {
        verdict["a"] = nullptr;
        verdict["b"] = nullptr;
        verdict["c"] = nullptr;
        verdict["d"] = nullptr;
        verdict["strong"] = nullptr;
        verdict["uniform"] = nullptr;
        verdict["asymptotics_note"] =
            "criteria (a)-(d) require canonical boundary operators";
    }
    verdict["gamma_lo"] = rep.gamma_lo;
    verdict["gamma_hi"] = rep.gamma_hi;
    verdict["trust_radius"] = rep.trust_radius;

    std::ostringstream os;
    dump_json(verdict, os, 2);
    write_file(outdir / "sweep.json", os.str());
    return kExitOk;
}

int run_approximate(const LoadedConfig& cfg, const Options& opt, const fs::path& outdir) {
    if (!cfg.plan) throw ParseError("approximate requires a 'plan' section");
    const ApproximationPlan& plan = *cfg.plan;

    std::vector<ConvergenceRow> rows =
        convergence_study(plan, opt.probes, opt.seed, opt.tol, opt.rank_scale);

    std::ostringstream csv;
    write_csv_row(csv, {"k", "coeff_error", "rhs_error", "boundary_gap",
                        "solution_error", "inverse_gap", "well_posed"});
    for (const auto& row : rows)
        write_csv_row(csv,
                      {std::to_string(row.k), format_float(row.coeff_error),
                       format_float(row.rhs_error), format_float(row.boundary_gap),
                       format_float(row.solution_error), format_float(row.inverse_gap),
                       row.well_posed ? "1" : "0"});
    write_file(outdir / "approximate.csv", csv.str());

    std::vector<double> ks, meshes, sol_err, bgap;
    for (size_t i = 0; i < rows.size(); ++i) {
        if (!rows[i].well_posed) continue;
        ks.push_back(rows[i].k);
        const auto& part = plan.partitions[i];
        double mesh = 0.0;
        for (size_t c = 0; c + 1 < part.size(); ++c)
            mesh = std::max(mesh, part[c + 1] - part[c]);
        meshes.push_back(mesh);
        sol_err.push_back(rows[i].solution_error);
        bgap.push_back(rows[i].boundary_gap);
    }
    Json summary;
    summary["command"] = "approximate";
    summary["seed"] = opt.seed;
    summary["probes"] = opt.probes;
    summary["boundary_regulated"] =
        regulated_check(std::get<CanonicalOp>(plan.target.boundary).phi);
    summary["solution_error_order_vs_degree"] = -loglog_slope(ks, sol_err);
    summary["boundary_gap_order_vs_mesh"] = loglog_slope(meshes, bgap);
    summary["rows_well_posed"] = static_cast<int>(ks.size());
    summary["rows_total"] = static_cast<int>(rows.size());

    std::ostringstream os;
    dump_json(summary, os, 2);
    write_file(outdir / "approximate.json", os.str());
    return kExitOk;
}

int emit_error(const fs::path& outdir, const std::string& kind, const std::string& what,
               int code, const Json& extra = Json::object()) {
    Json diag;
    diag["error"] = kind;
    diag["message"] = what;
    diag["exit_code"] = code;
    for (auto it = extra.begin(); it != extra.end(); ++it) diag[it.key()] = it.value();
    std::ostringstream os;
    dump_json(diag, os, 2);
    std::cerr << os.str();
    std::error_code ec;
    if (fs::exists(outdir, ec)) {
        std::ofstream f(outdir / "error.json", std::ios::binary);
        if (f) f << os.str();
    }
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Boundary-value problem toolkit for linear ODE systems"};
    app.require_subcommand(1);

    CliOptions cli;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--input", cli.input, "input config (JSON)")->required();
        sub->add_option("--out", cli.out, "output directory");
        sub->add_option("--tol", cli.tol, "solver tolerance");
        sub->add_option("--rank-tol", cli.rank_tol, "rank-threshold scale");
        sub->add_option("--seed", cli.seed, "seed for probe sampling");
        sub->add_option("--jobs", cli.jobs, "worker count (reserved; results identical)");
        sub->add_option("--grid", cli.grid, "sample-grid size for CSV output");
    };
    for (const char* name : {"solve", "analyze", "sweep", "approximate"})
        add_common(app.add_subcommand(name));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitParse;
    }
    cli.command = app.get_subcommands().front()->get_name();

    fs::path outdir(cli.out);
    std::error_code ec;
    fs::create_directories(outdir, ec);
    if (ec)
        return emit_error(".", "io", "cannot create output directory " + cli.out,
                          kExitNumeric);

    try {
        LoadedConfig cfg = load_config(cli.input);
        Options opt = cfg.options;
        if (cli.tol > 0) opt.tol = cli.tol;
        if (cli.rank_tol > 0) opt.rank_scale = cli.rank_tol;
        if (cli.seed >= 0) opt.seed = static_cast<unsigned long long>(cli.seed);
        if (cli.grid > 1) opt.grid = cli.grid;
        if (cli.jobs >= 1) opt.jobs = cli.jobs;

        if (cli.command == "solve") return run_solve(cfg, opt, outdir, opt.grid);
        if (cli.command == "analyze") return run_analyze(cfg, opt, outdir);
        if (cli.command == "sweep") return run_sweep(cfg, opt, outdir);
        if (cli.command == "approximate") return run_approximate(cfg, opt, outdir);
        return emit_error(outdir, "cli", "unknown command " + cli.command, kExitParse);
    } catch (const SingularProblem& e) {
        Json extra;
        extra["dim_ker"] = e.dim_ker;
        extra["dim_coker"] = e.dim_coker;
        return emit_error(outdir, "singular_problem", e.what(), kExitSingular, extra);
    } catch (const ParseError& e) {
        return emit_error(outdir, "parse", e.what(), kExitParse);
    } catch (const IntegrationFailure& e) {
        return emit_error(outdir, "integration", e.what(), kExitNumeric);
    } catch (const NeverWellPosed& e) {
        Json extra;
        return emit_error(outdir, "never_well_posed", e.what(), kExitSingular);
    } catch (const std::exception& e) {
        return emit_error(outdir, "numeric", e.what(), kExitNumeric);
    }
}
