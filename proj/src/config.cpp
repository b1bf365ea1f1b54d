#include "bvp/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "bvp/errors.hpp"
#include "bvp/expression.hpp"

namespace bvp {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ParseError("config field '" + path + "': " + what);
}

const json& require(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) fail(path + "." + key, "missing");
    return j.at(key);
}

double as_number(const json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        try {
            return evaluate_constant(j.get<std::string>());
        } catch (const ParseError& e) {
            fail(path, e.what());
        }
    }
    fail(path, "expected a number or constant expression");
}

Complex as_complex(const json& j, const std::string& path) {
    if (j.is_array()) {
        if (j.size() != 2) fail(path, "complex literal must be [re, im]");
        return Complex(as_number(j[0], path + "[0]"), as_number(j[1], path + "[1]"));
    }
    return Complex(as_number(j, path), 0.0);
}

Matrix as_matrix(const json& j, int rows, int cols, const std::string& path) {
    Matrix M(rows, cols);
    if (rows == 1 && cols == 1 &&
        (!j.is_array() || (j.size() == 2 && j[0].is_number() && j[1].is_number()))) {
        M(0, 0) = as_complex(j, path);
        return M;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != rows)
        fail(path, "expected a matrix literal with " + std::to_string(rows) + " rows");
    for (int i = 0; i < rows; ++i) {
        const json& row = j[i];
        if (!row.is_array() || static_cast<int>(row.size()) != cols)
            fail(path + "[" + std::to_string(i) + "]",
                 "expected " + std::to_string(cols) + " columns");
        for (int c = 0; c < cols; ++c)
            M(i, c) = as_complex(row[c], path + "[" + std::to_string(i) + "][" +
                                             std::to_string(c) + "]");
    }
    return M;
}

Vector as_vector(const json& j, int len, const std::string& path) {
    if (!j.is_array() || static_cast<int>(j.size()) != len)
        fail(path, "expected a vector of length " + std::to_string(len));
    Vector v(len);
    for (int i = 0; i < len; ++i)
        v(i) = as_complex(j[i], path + "[" + std::to_string(i) + "]");
    return v;
}

std::vector<double> as_real_list(const json& j, const std::string& path) {
    if (!j.is_array()) fail(path, "expected an array of numbers");
    std::vector<double> out;
    for (size_t i = 0; i < j.size(); ++i)
        out.push_back(as_number(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

Func scalar_identity(const Interval& dom, int rows, int cols,
                     const std::function<double(double)>& fn, int degree,
                     const std::vector<double>& breaks, const std::string& path) {
    if (rows == 1 && cols == 1)
        return Func::from_callable(
            dom, 1, 1,
            [&fn](double t) {
                Matrix v(1, 1);
                v(0, 0) = fn(t);
                return v;
            },
            degree, breaks);
    if (rows != cols)
        fail(path, "scalar entry for a non-square shape; use an explicit entries table");
    return Func::from_callable(
        dom, rows, cols,
        [&fn, rows](double t) {
            return Matrix(fn(t) * Matrix::Identity(rows, rows));
        },
        degree, breaks);
}

Func parse_func(const json& j, const Interval& dom, int rows, int cols,
                const std::string& path) {
    if (j.is_number()) {
        double v = j.get<double>();
        if (rows == 1 && cols == 1) return Func::constant(dom, Complex(v, 0.0));
        if (rows != cols) fail(path, "scalar constant for a non-square shape");
        return Func::constant(dom, Matrix(v * Matrix::Identity(rows, rows)));
    }
    if (j.is_string()) {
        std::function<double(double)> fn;
        try {
            fn = compile_expression(j.get<std::string>());
        } catch (const ParseError& e) {
            fail(path, e.what());
        }
        return scalar_identity(dom, rows, cols, fn, 32, {}, path);
    }
    if (!j.is_object()) fail(path, "expected a function entry");

    int degree = j.contains("degree")
                     ? static_cast<int>(as_number(j.at("degree"), path + ".degree"))
                     : 32;
    std::vector<double> breaks;
    if (j.contains("breaks")) breaks = as_real_list(j.at("breaks"), path + ".breaks");
    bool rough = j.contains("rough") && j.at("rough").is_boolean() &&
                 j.at("rough").get<bool>();

    Func out;
    if (j.contains("expr")) {
        std::function<double(double)> fn;
        try {
            fn = compile_expression(j.at("expr").get<std::string>());
        } catch (const ParseError& e) {
            fail(path + ".expr", e.what());
        }
        out = scalar_identity(dom, rows, cols, fn, degree, breaks, path);
    } else if (j.contains("entries")) {
        const json& tbl = j.at("entries");
        if (!tbl.is_array() || static_cast<int>(tbl.size()) != rows)
            fail(path + ".entries", "expected " + std::to_string(rows) + " rows");
        std::vector<std::vector<std::function<double(double)>>> fns(rows);
        for (int i = 0; i < rows; ++i) {
            const json& row = tbl[i];
            if (!row.is_array() || static_cast<int>(row.size()) != cols)
                fail(path + ".entries[" + std::to_string(i) + "]",
                     "expected " + std::to_string(cols) + " columns");
            for (int c = 0; c < cols; ++c) {
                const json& cell = row[c];
                std::string cpath = path + ".entries[" + std::to_string(i) + "][" +
                                    std::to_string(c) + "]";
                if (cell.is_number()) {
                    double v = cell.get<double>();
                    fns[i].push_back([v](double) { return v; });
                } else if (cell.is_string()) {
                    try {
                        fns[i].push_back(compile_expression(cell.get<std::string>()));
                    } catch (const ParseError& e) {
                        fail(cpath, e.what());
                    }
                } else {
                    fail(cpath, "expected a number or expression string");
                }
            }
        }
        out = Func::from_callable(
            dom, rows, cols,
            [&fns, rows, cols](double t) {
                Matrix v(rows, cols);
                for (int i = 0; i < rows; ++i)
                    for (int c = 0; c < cols; ++c) v(i, c) = fns[i][c](t);
                return v;
            },
            degree, breaks);
    } else if (j.contains("cheb")) {
        const json& cj = j.at("cheb");
        if (!cj.is_array() || cj.empty()) fail(path + ".cheb", "expected coefficients");
        std::vector<Matrix> coeffs;
        for (size_t k = 0; k < cj.size(); ++k) {
            std::string kpath = path + ".cheb[" + std::to_string(k) + "]";
            if (rows == 1 && cols == 1 && !cj[k].is_array()) {
                Matrix c(1, 1);
                c(0, 0) = as_complex(cj[k], kpath);
                coeffs.push_back(std::move(c));
            } else {
                coeffs.push_back(as_matrix(cj[k], rows, cols, kpath));
            }
        }
        out = Func::chebyshev(dom, std::move(coeffs));
    } else if (j.contains("step")) {
        const json& sj = j.at("step");
        std::vector<double> sb = as_real_list(require(sj, "breaks", path + ".step"),
                                              path + ".step.breaks");
        const json& vj = require(sj, "values", path + ".step");
        if (!vj.is_array()) fail(path + ".step.values", "expected an array");
        std::vector<Matrix> vals;
        for (size_t k = 0; k < vj.size(); ++k)
            vals.push_back(as_matrix(vj[k], rows, cols,
                                     path + ".step.values[" + std::to_string(k) + "]"));
        out = Func::step(dom, sb, vals);
    } else if (j.contains("samples")) {
        const json& sj = j.at("samples");
        std::vector<double> pts = as_real_list(require(sj, "points", path + ".samples"),
                                               path + ".samples.points");
        const json& vj = require(sj, "values", path + ".samples");
        if (!vj.is_array() || vj.size() != pts.size())
            fail(path + ".samples.values", "points/values length mismatch");
        if (pts.size() < 2) fail(path + ".samples.points", "need at least two samples");
        std::vector<Matrix> vals;
        for (size_t k = 0; k < vj.size(); ++k)
            vals.push_back(as_matrix(vj[k], rows, cols,
                                     path + ".samples.values[" + std::to_string(k) + "]"));
        for (size_t k = 1; k < pts.size(); ++k)
            if (pts[k] <= pts[k - 1])
                fail(path + ".samples.points", "points must be strictly increasing");
        // piecewise-linear interpolant of the table, expressed per cell
        auto lookup = [pts, vals](double t) {
            size_t k = 0;
            while (k + 2 < pts.size() && t > pts[k + 1]) ++k;
            double w = (t - pts[k]) / (pts[k + 1] - pts[k]);
            w = std::min(1.0, std::max(0.0, w));
            return Matrix((1.0 - w) * vals[k] + w * vals[k + 1]);
        };
        std::vector<double> inner(pts.begin() + 1, pts.end() - 1);
        out = Func::from_callable(dom, rows, cols, lookup, 1, inner);
    } else {
        fail(path, "unknown function entry (expected expr/entries/cheb/step/samples)");
    }
    if (rough) out = out.with_rough_flag(true);
    return out;
}

SobolevIndex parse_index(const json& j, const std::string& path) {
    SobolevIndex idx;
    idx.n = static_cast<int>(as_number(require(j, "n", path), path + ".n"));
    idx.r = static_cast<int>(as_number(require(j, "r", path), path + ".r"));
    idx.m = static_cast<int>(as_number(require(j, "m", path), path + ".m"));
    const json& pj = require(j, "p", path);
    if (pj.is_string() && (pj.get<std::string>() == "inf" || pj.get<std::string>() == "infinity"))
        idx.p = kInfinity;
    else
        idx.p = as_number(pj, path + ".p");
    if (idx.n < 0 || idx.r < 1 || idx.m < 1) fail(path, "need n >= 0, r >= 1, m >= 1");
    if (idx.p < 1.0) fail(path + ".p", "exponent must be >= 1");
    return idx;
}

BoundaryOp parse_boundary(const json& j, const SobolevIndex& idx, const Interval& dom,
                          const std::string& path) {
    std::string kind = require(j, "kind", path).get<std::string>();
    const int rm = idx.rm(), m = idx.m, top = idx.smoothness();

    auto parse_alphas = [&](const json& owner) {
        std::vector<Matrix> alphas(top, Matrix::Zero(rm, m));
        if (owner.contains("alphas")) {
            const json& aj = owner.at("alphas");
            if (!aj.is_array() || static_cast<int>(aj.size()) != top)
                fail(path + ".alphas",
                     "expected " + std::to_string(top) + " matrices (orders 0.." +
                         std::to_string(top - 1) + ")");
            for (int s = 0; s < top; ++s)
                alphas[s] =
                    as_matrix(aj[s], rm, m, path + ".alphas[" + std::to_string(s) + "]");
        }
        return alphas;
    };

    if (kind == "canonical") {
        CanonicalOp op;
        op.index = idx;
        op.t0 = j.contains("t0") ? as_number(j.at("t0"), path + ".t0") : dom.a;
        op.alphas = parse_alphas(j);
        op.phi = j.contains("phi")
                     ? parse_func(j.at("phi"), dom, rm, m, path + ".phi")
                     : Func::constant(dom, Matrix::Zero(rm, m));
        if (j.contains("point_terms")) {
            const json& pj = j.at("point_terms");
            if (!pj.is_array()) fail(path + ".point_terms", "expected a list");
            for (size_t k = 0; k < pj.size(); ++k) {
                std::string tpath = path + ".point_terms[" + std::to_string(k) + "]";
                int row = static_cast<int>(
                    as_number(require(pj[k], "row", tpath), tpath + ".row"));
                int order = pj[k].contains("order")
                                ? static_cast<int>(
                                      as_number(pj[k].at("order"), tpath + ".order"))
                                : 0;
                double at = as_number(require(pj[k], "at", tpath), tpath + ".at");
                Eigen::RowVectorXcd w(m);
                if (m == 1 && !require(pj[k], "weight", tpath).is_array()) {
                    w(0) = as_complex(pj[k].at("weight"), tpath + ".weight");
                } else {
                    Vector wv = as_vector(pj[k].at("weight"), m, tpath + ".weight");
                    w = wv.transpose();
                }
                if (row < 0 || row >= rm) fail(tpath + ".row", "row out of range");
                if (at < dom.a || at > dom.b) fail(tpath + ".at", "point outside [a,b]");
                add_point_term(op, dom, row, w, order, at);
            }
        }
        return op;
    }
    if (kind == "multipoint") {
        MultipointOp op;
        op.index = idx;
        op.t0 = j.contains("t0") ? as_number(j.at("t0"), path + ".t0") : dom.a;
        op.alphas = parse_alphas(j);
        if (j.contains("points") != j.contains("betas"))
            fail(path, "points and betas must come together");
        if (j.contains("points")) {
            op.points = as_real_list(j.at("points"), path + ".points");
            const json& bj = j.at("betas");
            if (!bj.is_array() || bj.size() != op.points.size())
                fail(path + ".betas", "points/betas length mismatch");
            for (size_t k = 0; k < bj.size(); ++k)
                op.betas.push_back(
                    as_matrix(bj[k], rm, m, path + ".betas[" + std::to_string(k) + "]"));
        }
        return op;
    }
    if (kind == "fractional") {
        FractionalOp op;
        op.index = idx;
        const json& tj = require(j, "terms", path);
        if (!tj.is_array() || tj.empty()) fail(path + ".terms", "expected a term list");
        for (size_t k = 0; k < tj.size(); ++k) {
            std::string tpath = path + ".terms[" + std::to_string(k) + "]";
            FractionalTerm term;
            term.order = as_number(require(tj[k], "order", tpath), tpath + ".order");
            term.weight =
                parse_func(require(tj[k], "weight", tpath), dom, rm, m, tpath + ".weight");
            op.terms.push_back(std::move(term));
        }
        return op;
    }
    fail(path + ".kind", "expected canonical, multipoint, or fractional");
}

BvProblem parse_problem(const json& j, const std::string& path) {
    const json& ij = require(j, "interval", path);
    if (!ij.is_array() || ij.size() != 2) fail(path + ".interval", "expected [a, b]");
    Interval dom{as_number(ij[0], path + ".interval[0]"),
                 as_number(ij[1], path + ".interval[1]")};
    if (!(dom.a < dom.b)) fail(path + ".interval", "need a < b");
    SobolevIndex idx = parse_index(require(j, "index", path), path + ".index");

    const json& cj = require(j, "coefficients", path);
    if (!cj.is_array() || static_cast<int>(cj.size()) != idx.r)
        fail(path + ".coefficients", "expected exactly r entries");
    std::vector<Func> coeffs;
    for (int l = 0; l < idx.r; ++l)
        coeffs.push_back(parse_func(cj[l], dom, idx.m, idx.m,
                                    path + ".coefficients[" + std::to_string(l) + "]"));
    OdeSystem system(idx, dom, std::move(coeffs));

    Func rhs = j.contains("rhs")
                   ? parse_func(j.at("rhs"), dom, idx.m, 1, path + ".rhs")
                   : Func::constant(dom, Matrix::Zero(idx.m, 1));
    BoundaryOp boundary =
        parse_boundary(require(j, "boundary", path), idx, dom, path + ".boundary");
    Vector target = j.contains("target")
                        ? as_vector(j.at("target"), idx.rm(), path + ".target")
                        : Vector::Zero(idx.rm()).eval();

    BvProblem prob{std::move(system), std::move(rhs), std::move(boundary),
                   std::move(target), idx};
    prob.validate();
    return prob;
}

ParameterFamily parse_family(const json& j, const std::string& path) {
    ParameterFamily fam;
    fam.mu0 = require(j, "mu0", path).get<std::string>();
    const json& pj = require(j, "points", path);
    if (!pj.is_array() || pj.empty()) fail(path + ".points", "expected a point list");
    for (size_t k = 0; k < pj.size(); ++k) {
        std::string ppath = path + ".points[" + std::to_string(k) + "]";
        ParameterFamily::Point pt;
        pt.label = require(pj[k], "label", ppath).get<std::string>();
        pt.distance = as_number(require(pj[k], "distance", ppath), ppath + ".distance");
        fam.points.push_back(pt);
        fam.problems.emplace(
            pt.label, parse_problem(require(pj[k], "problem", ppath), ppath + ".problem"));
    }
    try {
        fam.validate();
    } catch (const DimensionMismatch& e) {
        fail(path, e.what());
    }
    return fam;
}

ApproximationPlan parse_plan(const json& j, const std::string& path) {
    ApproximationPlan plan{parse_problem(require(j, "problem", path), path + ".problem"),
                           {},
                           {}};
    std::vector<double> degs = as_real_list(require(j, "degrees", path), path + ".degrees");
    for (double d : degs) plan.degrees.push_back(static_cast<int>(d));
    const Interval dom = plan.target.system.domain;
    if (j.contains("cells")) {
        std::vector<double> cells = as_real_list(j.at("cells"), path + ".cells");
        if (cells.size() != plan.degrees.size())
            fail(path + ".cells", "must match degrees in length");
        for (double c : cells)
            plan.partitions.push_back(uniform_partition(dom, static_cast<int>(c)));
    } else if (j.contains("partitions")) {
        const json& pj = j.at("partitions");
        if (!pj.is_array() || pj.size() != plan.degrees.size())
            fail(path + ".partitions", "must match degrees in length");
        for (size_t k = 0; k < pj.size(); ++k)
            plan.partitions.push_back(
                as_real_list(pj[k], path + ".partitions[" + std::to_string(k) + "]"));
    } else {
        fail(path, "expected cells or partitions");
    }
    try {
        plan.validate();
    } catch (const std::exception& e) {
        fail(path, e.what());
    }
    return plan;
}

Options parse_options(const json& j, const std::string& path) {
    Options opt;
    if (j.contains("tol")) opt.tol = as_number(j.at("tol"), path + ".tol");
    if (j.contains("rank_tol_scale"))
        opt.rank_scale = as_number(j.at("rank_tol_scale"), path + ".rank_tol_scale");
    if (j.contains("quad_tol")) opt.quad_tol = as_number(j.at("quad_tol"), path + ".quad_tol");
    if (j.contains("convergence_tol"))
        opt.convergence_tol = as_number(j.at("convergence_tol"), path + ".convergence_tol");
    if (j.contains("probes"))
        opt.probes = static_cast<int>(as_number(j.at("probes"), path + ".probes"));
    if (j.contains("probe_degree"))
        opt.probe_degree =
            static_cast<int>(as_number(j.at("probe_degree"), path + ".probe_degree"));
    if (j.contains("grid"))
        opt.grid = static_cast<int>(as_number(j.at("grid"), path + ".grid"));
    if (j.contains("seed"))
        opt.seed = static_cast<unsigned long long>(
            as_number(j.at("seed"), path + ".seed"));
    if (opt.tol <= 0 || opt.rank_scale <= 0 || opt.quad_tol <= 0)
        fail(path, "tolerances must be positive");
    return opt;
}

}  // namespace

LoadedConfig parse_config_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config is not valid JSON: ") + e.what());
    }
    LoadedConfig out;
    if (j.contains("options")) out.options = parse_options(j.at("options"), "options");
    if (j.contains("problem")) out.problem = parse_problem(j.at("problem"), "problem");
    if (j.contains("family")) out.family = parse_family(j.at("family"), "family");
    if (j.contains("plan")) out.plan = parse_plan(j.at("plan"), "plan");
    if (!out.problem && !out.family && !out.plan)
        throw ParseError("config has none of the sections problem/family/plan");
    return out;
}

LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace bvp
