#include "bvp/bvp.hpp"

#include <algorithm>
#include <cmath>

#include "bvp/errors.hpp"

namespace bvp {

void BvProblem::validate() const {
    const int m = index.m, rm = index.rm();
    if (rhs.rows() != m || rhs.cols() != 1)
        throw DimensionMismatch("BvProblem: rhs must be m x 1");
    if (!(rhs.domain() == system.domain))
        throw DimensionMismatch("BvProblem: rhs interval differs from the system's");
    if (target.size() != rm) throw DimensionMismatch("BvProblem: target must have length rm");
    if (output_dim(boundary) != rm)
        throw DimensionMismatch("BvProblem: boundary output dimension must be rm");
    std::visit([&](const auto& op) { op.validate(system.domain); }, boundary);
}

double CharMatrix::condition() const {
    if (singular_values.empty() || singular_values.back() == 0.0)
        return std::numeric_limits<double>::infinity();
    return singular_values.front() / singular_values.back();
}

namespace {

CharMatrix rank_analysis(Matrix M, double rank_scale) {
    CharMatrix cm;
    cm.matrix = std::move(M);
    Eigen::JacobiSVD<Matrix> svd(cm.matrix);
    const auto& sv = svd.singularValues();
    cm.singular_values.assign(sv.data(), sv.data() + sv.size());
    double smax = cm.singular_values.empty() ? 0.0 : cm.singular_values.front();
    cm.rank_tol = cm.matrix.rows() * smax * rank_scale;
    cm.rank = 0;
    cm.margin_flag = false;
    for (double s : cm.singular_values) {
        if (s > cm.rank_tol) ++cm.rank;
        if (cm.rank_tol > 0.0 && s > cm.rank_tol / 10.0 && s < cm.rank_tol * 10.0)
            cm.margin_flag = true;
    }
    cm.dim_ker = static_cast<int>(cm.matrix.rows()) - cm.rank;
    cm.dim_coker = cm.dim_ker;
    return cm;
}

Matrix assemble_char_matrix(const OdeSystem& system, const BoundaryOp& op,
                            const FundamentalSystem& fund) {
    const int m = system.index.m, rm = system.index.rm();
    Matrix M(rm, rm);
    for (int i = 0; i < system.index.r; ++i)
        M.middleCols(i * m, m) = apply_boundary(op, fund.derivs[i]);
    return M;
}

}  // namespace

CharMatrix characteristic_matrix(const OdeSystem& system, const BoundaryOp& op,
                                 double tol, double rank_scale) {
    FundamentalSystem fund = solve_fundamental(system, tol);
    return rank_analysis(assemble_char_matrix(system, op, fund), rank_scale);
}

std::pair<int, int> d_characteristics(const CharMatrix& M) {
    return {M.dim_ker, M.dim_coker};
}

PreparedProblem::PreparedProblem(OdeSystem system, BoundaryOp boundary, double tol,
                                 double rank_scale)
    : system_(std::move(system)),
      boundary_(std::move(boundary)),
      tol_(tol),
      fund_(solve_fundamental(system_, tol)),
      cm_(rank_analysis(assemble_char_matrix(system_, boundary_, fund_), rank_scale)),
      svd_(cm_.matrix, Eigen::ComputeFullU | Eigen::ComputeFullV) {}

BvpSolution PreparedProblem::solve(const Func& f, const Vector& c) const {
    const int m = system_.index.m, r = system_.index.r;
    const int top = system_.index.smoothness();
    if (cm_.dim_ker > 0 || cm_.condition() > 1e12)
        throw SingularProblem(cm_.dim_ker, cm_.dim_coker);

    Func yp = solve_particular(system_, f, tol_);
    std::vector<Func> yp_derivs = higher_derivatives(system_, yp, f, top);
    Vector byp = apply_boundary(boundary_, yp_derivs).col(0);
    Vector d = svd_.solve((c - byp).eval());

    BvpSolution sol;
    sol.constants = d;
    sol.derivs.reserve(top + 1);
    for (int s = 0; s <= top; ++s) {
        Func acc = yp_derivs[s];
        for (int i = 0; i < r; ++i) {
            Matrix di = d.segment(i * m, m);
            acc = acc + fund_.derivs[i][s].matmul(Func::constant(system_.domain, di));
        }
        sol.derivs.push_back(std::move(acc));
    }
    sol.y = sol.derivs[0];

    // residuals: L y - f in sup norm, |B y - c| in max norm
    Func res = sol.derivs[r] - f;
    for (int l = 1; l <= r; ++l)
        res = res + system_.coefficients[l - 1].matmul(sol.derivs[r - l]);
    sol.residual_ode = res.sup_norm();
    Vector by = apply_boundary(boundary_, sol.derivs).col(0);
    sol.residual_boundary = (by - c).cwiseAbs().maxCoeff();
    return sol;
}

BvpSolution solve_bvp(const BvProblem& problem, double tol, double rank_scale) {
    problem.validate();
    PreparedProblem prep(problem.system, problem.boundary, tol, rank_scale);
    return prep.solve(problem.rhs, problem.target);
}

Func random_smooth(std::mt19937_64& rng, const Interval& dom, int rows, int degree) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<Matrix> coeffs(degree + 1);
    for (int k = 0; k <= degree; ++k) {
        Matrix c(rows, 1);
        double scale = 1.0 / (1.0 + double(k) * k);
        for (int i = 0; i < rows; ++i) c(i, 0) = Complex(gauss(rng) * scale, 0.0);
        coeffs[k] = c;
    }
    return Func::chebyshev(dom, std::move(coeffs));
}

double operator_gap(const PreparedProblem& a, const PreparedProblem& b, int probes,
                    unsigned long long seed) {
    const SobolevIndex& idx = a.system().index;
    const Interval dom = a.system().domain;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst = 0.0;
    for (int q = 0; q < probes; ++q) {
        Func f = random_smooth(rng, dom, idx.m, 8);
        Vector c(idx.rm());
        for (int i = 0; i < idx.rm(); ++i) c(i) = Complex(gauss(rng), 0.0);
        double total = f.sobolev_norm(idx.n, idx.p) + c.norm();
        f = f * (1.0 / total);
        c /= total;
        BvpSolution ya = a.solve(f, c);
        BvpSolution yb = b.solve(f, c);
        double err = 0.0;
        for (int s = 0; s <= idx.smoothness(); ++s)
            err += (ya.derivs[s] - yb.derivs[s]).lp_norm(idx.p);
        worst = std::max(worst, err);
    }
    return worst;
}

double operator_gap(const BvProblem& a, const BvProblem& b, int probes,
                    unsigned long long seed, double tol) {
    PreparedProblem pa(a.system, a.boundary, tol);
    PreparedProblem pb(b.system, b.boundary, tol);
    return operator_gap(pa, pb, probes, seed);
}

}  // namespace bvp
