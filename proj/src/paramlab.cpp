#include "bvp/paramlab.hpp"

#include <algorithm>
#include <cmath>

#include "bvp/errors.hpp"

namespace bvp {

namespace {
// threshold checks tolerate quadrature-level rounding on the boundary
bool within(double v, double threshold) { return v <= threshold * (1.0 + 1e-9); }
}  // namespace

void ParameterFamily::validate() const {
    if (points.empty()) throw DimensionMismatch("ParameterFamily: no parameter points");
    bool saw_mu0 = false;
    for (const auto& pt : points) {
        if (problems.find(pt.label) == problems.end())
            throw DimensionMismatch("ParameterFamily: missing problem for label " + pt.label);
        if (pt.distance < 0.0)
            throw DimensionMismatch("ParameterFamily: negative distance at " + pt.label);
        if (pt.label == mu0) {
            saw_mu0 = true;
            if (pt.distance != 0.0)
                throw DimensionMismatch("ParameterFamily: mu0 must have distance 0");
        }
    }
    if (!saw_mu0) throw DimensionMismatch("ParameterFamily: mu0 label not among the points");
    const BvProblem& base = at(mu0);
    for (const auto& [label, prob] : problems) {
        if (prob.index.n != base.index.n || prob.index.r != base.index.r ||
            prob.index.m != base.index.m || prob.index.p != base.index.p)
            throw DimensionMismatch("ParameterFamily: indices differ at " + label);
        if (!(prob.system.domain == base.system.domain))
            throw DimensionMismatch("ParameterFamily: intervals differ at " + label);
        prob.validate();
    }
}

const BvProblem& ParameterFamily::at(const std::string& label) const {
    auto it = problems.find(label);
    if (it == problems.end())
        throw DimensionMismatch("ParameterFamily: unknown label " + label);
    return it->second;
}

std::vector<ParameterFamily::Point> ParameterFamily::approach() const {
    std::vector<Point> out;
    for (const auto& pt : points)
        if (pt.label != mu0) out.push_back(pt);
    std::sort(out.begin(), out.end(), [](const Point& x, const Point& y) {
        return x.distance > y.distance || (x.distance == y.distance && x.label < y.label);
    });
    return out;
}

Condition0Result check_condition0(const ParameterFamily& family, double tol,
                                  double rank_scale) {
    family.validate();
    const BvProblem& base = family.at(family.mu0);
    Condition0Result res;
    res.char_matrix = characteristic_matrix(base.system, base.boundary, tol, rank_scale);
    res.holds = (res.char_matrix.dim_ker == 0);
    return res;
}

LimitIReport check_limit_condition_I(const ParameterFamily& family, double threshold) {
    family.validate();
    const BvProblem& base = family.at(family.mu0);
    const SobolevIndex& idx = base.index;
    LimitIReport rep;
    for (const auto& pt : family.approach()) {
        const BvProblem& prob = family.at(pt.label);
        LimitIRow row{pt.label, pt.distance, {}, 0.0};
        for (int l = 1; l <= idx.r; ++l)
            row.coeff_norms.push_back(
                (prob.system.coefficients[l - 1] - base.system.coefficients[l - 1])
                    .sobolev_norm(idx.n, idx.p));
        row.rhs_norm = (prob.rhs - base.rhs).sobolev_norm(idx.n, idx.p);
        rep.rows.push_back(std::move(row));
    }
    rep.converges = true;
    if (!rep.rows.empty()) {
        const LimitIRow& finest = rep.rows.back();
        for (double v : finest.coeff_norms)
            if (!within(v, threshold)) rep.converges = false;
        if (!within(finest.rhs_norm, threshold)) rep.converges = false;
    }
    return rep;
}

LimitIIReport check_limit_condition_II(const ParameterFamily& family, int probe_degree,
                                       double threshold) {
    family.validate();
    const BvProblem& base = family.at(family.mu0);
    const SobolevIndex& idx = base.index;
    const Interval dom = base.system.domain;
    const int top = idx.smoothness();

    // probe basis: per component i and Chebyshev degree k, y = e_i T_k
    std::vector<std::vector<Func>> probe_derivs;
    for (int i = 0; i < idx.m; ++i) {
        for (int k = 0; k <= probe_degree; ++k) {
            std::vector<Matrix> coeffs(k + 1, Matrix::Zero(idx.m, 1));
            coeffs[k](i, 0) = 1.0;
            Func probe = Func::chebyshev(dom, std::move(coeffs));
            std::vector<Func> derivs;
            for (int s = 0; s <= top; ++s) derivs.push_back(probe.derivative(s));
            probe_derivs.push_back(std::move(derivs));
        }
    }

    LimitIIReport rep;
    for (const auto& pt : family.approach()) {
        const BvProblem& prob = family.at(pt.label);
        LimitIIRow row{pt.label, pt.distance, 0.0, 0.0};
        for (const auto& derivs : probe_derivs) {
            Matrix dev = apply_boundary(prob.boundary, derivs) -
                         apply_boundary(base.boundary, derivs);
            row.max_probe_dev = std::max(row.max_probe_dev, dev.cwiseAbs().maxCoeff());
        }
        row.target_dev = (prob.target - base.target).cwiseAbs().maxCoeff();
        rep.rows.push_back(row);
    }
    rep.converges = !rep.rows.empty() &&
                    within(rep.rows.back().max_probe_dev, threshold) &&
                    within(rep.rows.back().target_dev, threshold);
    if (rep.rows.empty()) rep.converges = true;
    return rep;
}

AsymptoticsReport check_B_asymptotics(const ParameterFamily& family, int grid,
                                      double threshold) {
    family.validate();
    const BvProblem& base = family.at(family.mu0);
    if (base.index.p == kInfinity)
        throw UnsupportedExponent("boundary asymptotics criteria require p < infinity");
    const double pc = base.index.p_conj();
    const auto* base_op = std::get_if<CanonicalOp>(&base.boundary);
    if (!base_op)
        throw DimensionMismatch(
            "check_B_asymptotics: boundary operators must be in canonical form");
    const Interval dom = base.system.domain;

    AsymptoticsReport rep;
    double phi_norm0 = base_op->phi.lp_norm(pc);
    bool all_finite = std::isfinite(phi_norm0);
    for (const auto& pt : family.approach()) {
        const BvProblem& prob = family.at(pt.label);
        const auto* op = std::get_if<CanonicalOp>(&prob.boundary);
        if (!op)
            throw DimensionMismatch(
                "check_B_asymptotics: boundary operators must be in canonical form");
        AsymptoticsRow row{pt.label, pt.distance, 0.0, 0.0, 0.0, 0.0};
        for (size_t s = 0; s < op->alphas.size(); ++s)
            row.alpha_dev = std::max(
                row.alpha_dev,
                (op->alphas[s] - base_op->alphas[s]).cwiseAbs().maxCoeff());
        row.phi_norm = op->phi.lp_norm(pc);
        all_finite = all_finite && std::isfinite(row.phi_norm);
        for (int g = 0; g <= grid; ++g) {
            double t = dom.a + (dom.b - dom.a) * g / grid;
            Matrix dev = op->phi.integrate_to(t) - base_op->phi.integrate_to(t);
            row.primitive_dev = std::max(row.primitive_dev, dev.cwiseAbs().maxCoeff());
        }
        row.phi_dev = (op->phi - base_op->phi).lp_norm(pc);
        rep.rows.push_back(row);
    }
    if (rep.rows.empty()) {
        rep.a = rep.b = rep.c = rep.d = true;
    } else {
        const AsymptoticsRow& finest = rep.rows.back();
        rep.a = within(finest.alpha_dev, threshold);
        rep.b = all_finite;
        rep.c = within(finest.primitive_dev, threshold);
        rep.d = within(finest.phi_dev, threshold);
    }
    rep.strong = rep.a && rep.b && rep.c;
    rep.uniform = rep.a && rep.d;
    return rep;
}

double discrepancy(const BvProblem& problem_at_mu, const BvpSolution& y0) {
    const SobolevIndex& idx = problem_at_mu.index;
    const int r = idx.r;
    Func res = y0.derivs[r] - problem_at_mu.rhs;
    for (int l = 1; l <= r; ++l)
        res = res + problem_at_mu.system.coefficients[l - 1].matmul(y0.derivs[r - l]);
    double ode_part = res.sobolev_norm(idx.n, idx.p);
    Vector by = apply_boundary(problem_at_mu.boundary, y0.derivs).col(0);
    double bd_part = (by - problem_at_mu.target).norm();
    return ode_part + bd_part;
}

DiscrepancyReport two_sided_estimate(const ParameterFamily& family, double tol,
                                     double rank_scale) {
    family.validate();
    DiscrepancyReport rep;
    Condition0Result c0 = check_condition0(family, tol, rank_scale);
    rep.condition0_holds = c0.holds;
    const BvProblem& base = family.at(family.mu0);
    if (!c0.holds) throw SingularProblem(c0.char_matrix.dim_ker, c0.char_matrix.dim_coker);
    BvpSolution y0 = solve_bvp(base, tol, rank_scale);
    const int top = base.index.smoothness();

    bool band_started = false;
    for (const auto& pt : family.approach()) {
        const BvProblem& prob = family.at(pt.label);
        DiscrepancyRow row{pt.label, pt.distance, 0.0, 0.0, 0.0, true};
        try {
            BvpSolution ymu = solve_bvp(prob, tol, rank_scale);
            row.d_tilde = discrepancy(prob, y0);
            for (int s = 0; s <= top; ++s)
                row.solution_error +=
                    (y0.derivs[s] - ymu.derivs[s]).lp_norm(base.index.p);
            row.ratio = row.d_tilde > 0.0 ? row.solution_error / row.d_tilde : 0.0;
        } catch (const SingularProblem&) {
            row.solvable = false;
        }
        rep.rows.push_back(row);
    }

    // trust radius: largest distance D such that every mu with distance <= D
    // is solvable (rows are sorted by decreasing distance)
    rep.trust_radius = 0.0;
    for (auto it = rep.rows.rbegin(); it != rep.rows.rend(); ++it) {
        if (!it->solvable) break;
        rep.trust_radius = it->distance;
    }
    for (const auto& row : rep.rows) {
        if (!row.solvable || row.distance > rep.trust_radius || row.d_tilde <= 0.0)
            continue;
        if (!band_started) {
            rep.gamma_lo = rep.gamma_hi = row.ratio;
            band_started = true;
        } else {
            rep.gamma_lo = std::min(rep.gamma_lo, row.ratio);
            rep.gamma_hi = std::max(rep.gamma_hi, row.ratio);
        }
    }
    return rep;
}

}  // namespace bvp
