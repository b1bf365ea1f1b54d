#include "bvp/approx.hpp"

#include <algorithm>
#include <cmath>

#include "bvp/errors.hpp"

namespace bvp {

void ApproximationPlan::validate() const {
    target.validate();
    if (!std::get_if<CanonicalOp>(&target.boundary))
        throw DimensionMismatch(
            "ApproximationPlan: target boundary operator must be canonical");
    if (degrees.empty()) throw InvalidPartition("ApproximationPlan: no degrees");
    if (degrees.size() != partitions.size())
        throw InvalidPartition("ApproximationPlan: degrees/partitions length mismatch");
    for (size_t i = 1; i < degrees.size(); ++i)
        if (degrees[i] <= degrees[i - 1])
            throw InvalidPartition("ApproximationPlan: degrees must be strictly increasing");
}

std::vector<double> uniform_partition(const Interval& dom, int cells) {
    if (cells < 1) throw InvalidPartition("uniform_partition: need at least one cell");
    std::vector<double> pts(cells + 1);
    for (int i = 0; i <= cells; ++i)
        pts[i] = dom.a + (dom.b - dom.a) * double(i) / cells;
    pts.front() = dom.a;
    pts.back() = dom.b;
    return pts;
}

BvProblem build_approximant(const BvProblem& target, int k,
                            const std::vector<double>& partition) {
    const auto* op = std::get_if<CanonicalOp>(&target.boundary);
    if (!op)
        throw DimensionMismatch("build_approximant: target boundary must be canonical");

    std::vector<Func> coeffs;
    coeffs.reserve(target.system.coefficients.size());
    for (const auto& A : target.system.coefficients) coeffs.push_back(A.project_chebyshev(k));
    OdeSystem system(target.index, target.system.domain, std::move(coeffs));

    StieltjesFragment frag = stieltjes_multipoint(op->phi, partition);
    MultipointOp mp;
    mp.index = op->index;
    mp.t0 = op->t0;
    mp.alphas = op->alphas;
    mp.points = std::move(frag.points);
    mp.betas = std::move(frag.betas);

    BvProblem out{std::move(system), target.rhs.project_chebyshev(k), std::move(mp),
                  target.target, target.index};
    return out;
}

bool regulated_check(const Func& phi) { return !phi.declared_rough(); }

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] <= 0.0 || y[i] <= 0.0) continue;
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++n;
    }
    if (n < 2) return 0.0;
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

namespace {

// Fixed smooth probe set for the boundary-operator gap: per component, two
// scalar profiles with non-vanishing derivatives of every order on [a,b].
std::vector<std::vector<Func>> boundary_probes(const SobolevIndex& idx,
                                               const Interval& dom) {
    std::vector<std::function<double(double)>> profiles = {
        [&](double t) { return std::exp((t - dom.a) / (dom.b - dom.a)); },
        [&](double t) { return 2.0 + std::sin(3.0 * (t - dom.a) / (dom.b - dom.a)); },
    };
    std::vector<std::vector<Func>> out;
    for (int i = 0; i < idx.m; ++i) {
        for (const auto& prof : profiles) {
            Func probe = Func::from_callable(
                dom, idx.m, 1,
                [&](double t) {
                    Matrix v = Matrix::Zero(idx.m, 1);
                    v(i, 0) = prof(t);
                    return v;
                },
                24);
            std::vector<Func> derivs;
            for (int s = 0; s <= idx.smoothness(); ++s)
                derivs.push_back(probe.derivative(s));
            out.push_back(std::move(derivs));
        }
    }
    return out;
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const ApproximationPlan& plan, int probes,
                                              unsigned long long seed, double tol,
                                              double rank_scale) {
    plan.validate();
    const BvProblem& target = plan.target;
    const SobolevIndex& idx = target.index;

    PreparedProblem prep0(target.system, target.boundary, tol, rank_scale);
    if (!prep0.well_posed())
        throw SingularProblem(prep0.char_matrix().dim_ker, prep0.char_matrix().dim_coker);
    BvpSolution y0 = prep0.solve(target.rhs, target.target);
    auto probe_set = boundary_probes(idx, target.system.domain);

    std::vector<ConvergenceRow> rows;
    bool any_solved = false;
    for (size_t i = 0; i < plan.degrees.size(); ++i) {
        const int k = plan.degrees[i];
        ConvergenceRow row;
        row.k = k;
        BvProblem approx = build_approximant(target, k, plan.partitions[i]);

        for (int l = 1; l <= idx.r; ++l)
            row.coeff_error = std::max(
                row.coeff_error,
                (approx.system.coefficients[l - 1] - target.system.coefficients[l - 1])
                    .sobolev_norm(idx.n, idx.p));
        row.rhs_error = (approx.rhs - target.rhs).sobolev_norm(idx.n, idx.p);
        for (const auto& derivs : probe_set) {
            Matrix dev = apply_boundary(approx.boundary, derivs) -
                         apply_boundary(target.boundary, derivs);
            row.boundary_gap = std::max(row.boundary_gap, dev.cwiseAbs().maxCoeff());
        }

        PreparedProblem prepk(approx.system, approx.boundary, tol, rank_scale);
        if (!prepk.well_posed()) {
            row.well_posed = false;
            rows.push_back(row);
            continue;
        }
        BvpSolution yk = prepk.solve(approx.rhs, approx.target);
        for (int s = 0; s <= idx.smoothness(); ++s)
            row.solution_error += (y0.derivs[s] - yk.derivs[s]).lp_norm(idx.p);
        row.inverse_gap = operator_gap(prep0, prepk, probes, seed);
        any_solved = true;
        rows.push_back(row);
    }
    if (!any_solved)
        throw NeverWellPosed("every degree in the approximation plan is singular");
    return rows;
}

}  // namespace bvp
