#include <cmath>

#include <doctest.h>

#include "bvp/approx.hpp"
#include "bvp/paramlab.hpp"

using namespace bvp;

namespace {

const double kPi = 3.14159265358979323846;

Matrix scalar1(double v) { return Matrix::Constant(1, 1, Complex(v, 0.0)); }

// scalar first-order problem y' + a0 y = f, B y = alpha0 y(0) + int phi y' dt = c
BvProblem first_order(const Interval& dom, const Func& a0, const Func& f,
                      double alpha0, const Func& phi, double c, double p = 2.0) {
    SobolevIndex idx(0, 1, 1, p);
    OdeSystem sys(idx, dom, {a0});
    CanonicalOp op = zero_canonical(idx, dom, dom.a);
    op.alphas[0] = scalar1(alpha0);
    op.phi = phi;
    Vector target(1);
    target << Complex(c, 0.0);
    return BvProblem{sys, f, op, target, idx};
}

// the decaying scalar family y' + mu y = 1, y(0) = 0
ParameterFamily decay_family(const std::vector<double>& mus) {
    Interval dom(0.0, 1.0);
    Func zero = Func::constant(dom, Complex(0.0, 0.0));
    Func one = Func::constant(dom, Complex(1.0, 0.0));
    ParameterFamily fam;
    fam.mu0 = "limit";
    fam.points.push_back({"limit", 0.0});
    fam.problems.emplace("limit", first_order(dom, zero, one, 1.0, zero, 0.0));
    for (double mu : mus) {
        std::string label = "mu=" + std::to_string(mu);
        fam.points.push_back({label, mu});
        fam.problems.emplace(
            label, first_order(dom, Func::constant(dom, Complex(mu, 0.0)), one, 1.0,
                               zero, 0.0));
    }
    return fam;
}

}  // namespace

TEST_CASE("condition (0) verdicts for classical second-order problems") {
    Interval dom01(0.0, 1.0);
    Interval dompi(0.0, kPi);
    auto make_dirichlet = [](const Interval& dom, double coeff) {
        SobolevIndex idx(0, 2, 1, 2.0);
        OdeSystem sys(idx, dom,
                      {Func::constant(dom, Complex(0.0, 0.0)),
                       Func::constant(dom, Complex(coeff, 0.0))});
        CanonicalOp op = zero_canonical(idx, dom, dom.a);
        Eigen::RowVectorXcd w(1);
        w(0) = 1.0;
        add_point_term(op, dom, 0, w, 0, dom.a);
        add_point_term(op, dom, 1, w, 0, dom.b);
        return BvProblem{sys, Func::constant(dom, Complex(0.0, 0.0)), op,
                         Vector::Zero(2), idx};
    };

    ParameterFamily well;
    well.mu0 = "base";
    well.points = {{"base", 0.0}, {"near", 0.5}};
    well.problems.emplace("base", make_dirichlet(dom01, 0.0));
    well.problems.emplace("near", make_dirichlet(dom01, 0.5));
    CHECK(check_condition0(well).holds);

    ParameterFamily sing;
    sing.mu0 = "base";
    sing.points = {{"base", 0.0}, {"near", 0.5}};
    sing.problems.emplace("base", make_dirichlet(dompi, 1.0));
    sing.problems.emplace("near", make_dirichlet(dompi, 0.5));
    Condition0Result res = check_condition0(sing);
    CHECK_FALSE(res.holds);
    CHECK(res.char_matrix.dim_ker == 1);
}

TEST_CASE("condition (0) always holds for the Cauchy condition") {
    Interval dom(0.0, 1.0);
    Func zero = Func::constant(dom, Complex(0.0, 0.0));
    ParameterFamily fam;
    fam.mu0 = "base";
    fam.points = {{"base", 0.0}, {"other", 1.0}};
    fam.problems.emplace("base", first_order(dom, zero, zero, 1.0, zero, 0.0));
    fam.problems.emplace("other",
                         first_order(dom, Func::constant(dom, Complex(2.0, 0.0)), zero,
                                     1.0, zero, 0.0));
    CHECK(check_condition0(fam).holds);
}

TEST_CASE("limit condition I: constant family has zero norms") {
    auto fam = decay_family({0.1, 0.01});
    for (auto& [label, prob] : fam.problems)
        prob.system.coefficients[0] =
            Func::constant(Interval(0.0, 1.0), Complex(1.0, 0.0));
    LimitIReport rep = check_limit_condition_I(fam);
    for (const auto& row : rep.rows) {
        CHECK(row.coeff_norms[0] <= 1e-13);
        CHECK(row.rhs_norm <= 1e-13);
    }
    CHECK(rep.converges);
}

TEST_CASE("limit condition I: additive perturbation is exactly homogeneous") {
    Interval dom(0.0, 1.0);
    Func zero = Func::constant(dom, Complex(0.0, 0.0));
    Func one = Func::constant(dom, Complex(1.0, 0.0));
    Func w = Func::from_scalar(dom, [](double t) { return std::cos(2 * t); }, 16);
    double wn = w.sobolev_norm(0, 2.0);
    ParameterFamily fam;
    fam.mu0 = "limit";
    fam.points.push_back({"limit", 0.0});
    Func q = Func::from_scalar(dom, [](double t) { return 2.0 + std::sin(t); }, 16);
    fam.problems.emplace("limit", first_order(dom, q, one, 1.0, zero, 0.0));
    for (double mu : {1e-2, 1e-3}) {
        std::string label = "mu=" + std::to_string(mu);
        fam.points.push_back({label, mu});
        fam.problems.emplace(label, first_order(dom, q + w * mu, one, 1.0, zero, 0.0));
    }
    LimitIReport rep = check_limit_condition_I(fam);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].coeff_norms[0] == doctest::Approx(1e-2 * wn).epsilon(1e-8));
    CHECK(rep.rows[1].coeff_norms[0] == doctest::Approx(1e-3 * wn).epsilon(1e-8));
}

TEST_CASE("limit condition I: shift family converges at first order") {
    Interval dom(0.0, 1.0);
    Func zero = Func::constant(dom, Complex(0.0, 0.0));
    Func one = Func::constant(dom, Complex(1.0, 0.0));
    auto q_shift = [&](double mu) {
        return Func::from_scalar(dom, [mu](double t) { return std::sin(t + mu); }, 20);
    };
    ParameterFamily fam;
    fam.mu0 = "limit";
    fam.points.push_back({"limit", 0.0});
    fam.problems.emplace("limit", first_order(dom, q_shift(0.0), one, 1.0, zero, 0.0));
    std::vector<double> mus = {1e-2, 1e-3, 1e-4};
    for (double mu : mus) {
        std::string label = "mu=" + std::to_string(mu);
        fam.points.push_back({label, mu});
        fam.problems.emplace(label, first_order(dom, q_shift(mu), one, 1.0, zero, 0.0));
    }
    LimitIReport rep = check_limit_condition_I(fam);
    std::vector<double> norms;
    for (const auto& row : rep.rows) norms.push_back(row.coeff_norms[0]);
    CHECK(norms[0] > norms[1]);
    CHECK(norms[1] > norms[2]);
    CHECK(std::abs(loglog_slope(mus, norms) - 1.0) <= 0.05);
    CHECK(rep.converges);
}

TEST_CASE("limit condition II: identical operators give zero deviations") {
    auto fam = decay_family({0.1, 0.01});
    LimitIIReport rep = check_limit_condition_II(fam);
    for (const auto& row : rep.rows) {
        CHECK(row.max_probe_dev <= 1e-12);
        CHECK(row.target_dev <= 1e-12);
    }
    CHECK(rep.converges);
}

TEST_CASE("limit condition II: alpha perturbation scales linearly on probes") {
    Interval dom(0.0, 1.0);
    Func zero = Func::constant(dom, Complex(0.0, 0.0));
    Func one = Func::constant(dom, Complex(1.0, 0.0));
    ParameterFamily fam;
    fam.mu0 = "limit";
    fam.points.push_back({"limit", 0.0});
    fam.problems.emplace("limit", first_order(dom, zero, one, 1.0, zero, 0.0));
    for (double mu : {1e-2, 1e-3, 1e-5}) {
        std::string label = "mu=" + std::to_string(mu);
        fam.points.push_back({label, mu});
        fam.problems.emplace(label,
                             first_order(dom, zero, one, 1.0 + mu, zero, 0.0));
    }
    LimitIIReport rep = check_limit_condition_II(fam);
    REQUIRE(rep.rows.size() == 3);
    // deviation = mu * max_probe |y(0)|, and T_k(mapped 0) has magnitude <= 1
    CHECK(rep.rows[0].max_probe_dev == doctest::Approx(1e-2).epsilon(1e-9));
    CHECK(rep.rows[1].max_probe_dev == doctest::Approx(1e-3).epsilon(1e-9));
    CHECK(rep.converges);
}

TEST_CASE("asymptotics: constant kernel family satisfies (a)-(d)") {
    auto fam = decay_family({0.1, 0.01});
    AsymptoticsReport rep = check_B_asymptotics(fam);
    CHECK(rep.a);
    CHECK(rep.b);
    CHECK(rep.c);
    CHECK(rep.d);
    CHECK(rep.strong);
    CHECK(rep.uniform);
}

TEST_CASE("asymptotics: linear kernel perturbation satisfies (d) at linear rate") {
    Interval dom(0.0, 1.0);
    Func zero = Func::constant(dom, Complex(0.0, 0.0));
    Func one = Func::constant(dom, Complex(1.0, 0.0));
    Func phi0 = Func::from_scalar(dom, [](double t) { return t; }, 1);
    Func psi = Func::from_scalar(dom, [](double t) { return std::cos(t); }, 12);
    ParameterFamily fam;
    fam.mu0 = "limit";
    fam.points.push_back({"limit", 0.0});
    fam.problems.emplace("limit", first_order(dom, zero, one, 1.0, phi0, 0.0));
    std::vector<double> mus = {1e-2, 1e-4};
    for (double mu : mus) {
        std::string label = "mu=" + std::to_string(mu);
        fam.points.push_back({label, mu});
        fam.problems.emplace(label,
                             first_order(dom, zero, one, 1.0, phi0 + psi * mu, 0.0));
    }
    AsymptoticsReport rep = check_B_asymptotics(fam);
    CHECK(rep.a);
    CHECK(rep.d);
    CHECK(rep.uniform);
    REQUIRE(rep.rows.size() == 2);
    CHECK(rep.rows[0].phi_dev == doctest::Approx(1e-2 * psi.lp_norm(2.0)).epsilon(1e-6));
    CHECK(rep.rows[1].phi_dev == doctest::Approx(1e-4 * psi.lp_norm(2.0)).epsilon(1e-6));
}

TEST_CASE("asymptotics dichotomy at p=1: step kernels pass (a,b,c) and fail (d)") {
    Interval dom(0.0, 1.0);
    Func zero = Func::constant(dom, Complex(0.0, 0.0));
    Func one = Func::constant(dom, Complex(1.0, 0.0));
    Func phi0 = Func::from_scalar(dom, [](double t) { return t; }, 1);
    ParameterFamily fam;
    fam.mu0 = "limit";
    fam.points.push_back({"limit", 0.0});
    fam.problems.emplace("limit", first_order(dom, zero, one, 1.0, phi0, 0.0, 1.0));
    for (int N : {8, 16, 32, 64}) {
        auto part = uniform_partition(dom, N);
        std::vector<Matrix> vals;
        for (int j = 0; j < N; ++j)
            vals.push_back(phi0(0.5 * (part[j] + part[j + 1])));
        Func phiN = Func::step(dom, part, vals);
        std::string label = "N=" + std::to_string(N);
        fam.points.push_back({label, 1.0 / N});
        fam.problems.emplace(label, first_order(dom, zero, one, 1.0, phiN, 0.0, 1.0));
    }
    AsymptoticsReport rep = check_B_asymptotics(fam);
    CHECK(rep.a);
    CHECK(rep.b);
    CHECK(rep.c);
    CHECK_FALSE(rep.d);  // sup-norm gap of step vs continuous stays ~ h/2
    CHECK(rep.strong);
    CHECK_FALSE(rep.uniform);
}

TEST_CASE("asymptotics reject p = infinity") {
    Interval dom(0.0, 1.0);
    Func zero = Func::constant(dom, Complex(0.0, 0.0));
    Func one = Func::constant(dom, Complex(1.0, 0.0));
    ParameterFamily fam;
    fam.mu0 = "limit";
    fam.points.push_back({"limit", 0.0});
    fam.problems.emplace("limit",
                         first_order(dom, zero, one, 1.0, zero, 0.0, kInfinity));
    CHECK_THROWS_AS((void)check_B_asymptotics(fam), UnsupportedExponent);
}

TEST_CASE("discrepancy of the limit solution in its own problem is tiny") {
    auto fam = decay_family({0.1});
    const BvProblem& base = fam.at("limit");
    BvpSolution y0 = solve_bvp(base);
    CHECK(discrepancy(base, y0) <= 1e-8);
}

TEST_CASE("discrepancy from a pure target shift equals the shift size") {
    auto fam = decay_family({});
    const BvProblem& base = fam.at("limit");
    BvpSolution y0 = solve_bvp(base);
    BvProblem shifted = base;
    shifted.target(0) += Complex(0.25, 0.0);
    CHECK(discrepancy(shifted, y0) == doctest::Approx(0.25).epsilon(1e-8));
}

TEST_CASE("two-sided estimate on the decaying scalar family") {
    auto fam = decay_family({1e-1, 1e-2, 1e-3, 1e-4});
    DiscrepancyReport rep = two_sided_estimate(fam);
    CHECK(rep.condition0_holds);
    CHECK(rep.trust_radius == doctest::Approx(0.1));
    REQUIRE(rep.rows.size() == 4);
    std::vector<double> dists, dts, errs;
    for (const auto& row : rep.rows) {
        CHECK(row.solvable);
        CHECK(row.d_tilde > 0.0);
        dists.push_back(row.distance);
        dts.push_back(row.d_tilde);
        errs.push_back(row.solution_error);
    }
    CHECK(rep.gamma_lo > 0.0);
    CHECK(rep.gamma_hi / rep.gamma_lo <= 10.0);
    // both quantities decay linearly in mu
    CHECK(std::abs(loglog_slope(dists, dts) - 1.0) <= 0.1);
    CHECK(std::abs(loglog_slope(dists, errs) - 1.0) <= 0.1);
}

TEST_CASE("boundary-only perturbation gives an exactly constant ratio") {
    Interval dom(0.0, 1.0);
    Func zero = Func::constant(dom, Complex(0.0, 0.0));
    Func one = Func::constant(dom, Complex(1.0, 0.0));
    ParameterFamily fam;
    fam.mu0 = "limit";
    fam.points.push_back({"limit", 0.0});
    fam.problems.emplace("limit", first_order(dom, zero, one, 1.0, zero, 0.0));
    for (double mu : {1e-1, 1e-2, 1e-3}) {
        std::string label = "mu=" + std::to_string(mu);
        fam.points.push_back({label, mu});
        fam.problems.emplace(label, first_order(dom, zero, one, 1.0, zero, mu));
    }
    DiscrepancyReport rep = two_sided_estimate(fam);
    REQUIRE(rep.rows.size() == 3);
    double r0 = rep.rows[0].ratio;
    for (const auto& row : rep.rows)
        CHECK(row.ratio == doctest::Approx(r0).epsilon(1e-6));
}
