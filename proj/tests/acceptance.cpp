// Acceptance checks for the whole pipeline: one PASS/FAIL line per criterion,
// nonzero exit status when anything fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "bvp/approx.hpp"
#include "bvp/paramlab.hpp"

using namespace bvp;

namespace {

const double kPi = 3.14159265358979323846;

int g_failures = 0;

void report(int number, const std::string& name, bool pass, const std::string& detail) {
    std::printf("%s: criterion %d (%s) %s\n", pass ? "PASS" : "FAIL", number,
                name.c_str(), detail.c_str());
    if (!pass) ++g_failures;
}

double now_seconds() {
    using clock = std::chrono::steady_clock;
    static const clock::time_point start = clock::now();
    return std::chrono::duration<double>(clock::now() - start).count();
}

Matrix scalar1(double v) { return Matrix::Constant(1, 1, Complex(v, 0.0)); }

CanonicalOp dirichlet_rows(const SobolevIndex& idx, const Interval& dom) {
    CanonicalOp op = zero_canonical(idx, dom, dom.a);
    Eigen::RowVectorXcd w(1);
    w(0) = 1.0;
    add_point_term(op, dom, 0, w, 0, dom.a);
    add_point_term(op, dom, 1, w, 0, dom.b);
    return op;
}

OdeSystem second_order(const Interval& dom, double coeff, double p = 2.0) {
    return OdeSystem(SobolevIndex(0, 2, 1, p), dom,
                     {Func::constant(dom, Complex(0.0, 0.0)),
                      Func::constant(dom, Complex(coeff, 0.0))});
}

double sup_error(const Func& f, double (*exact)(double), int grid = 200) {
    const Interval dom = f.domain();
    double err = 0.0;
    for (int i = 0; i <= grid; ++i) {
        double t = dom.a + (dom.b - dom.a) * i / grid;
        err = std::max(err, std::abs(f.eval_scalar(t) - exact(t)));
    }
    return err;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ---------------------------------------------------------------------------

void criterion1_fundamental_oracle() {
    double t0 = now_seconds();
    Interval dom(0.0, kPi);
    auto sys = second_order(dom, 1.0);
    FundamentalSystem fs = solve_fundamental(sys);
    double e1 = sup_error(fs.block(0), std::cos);
    double e2 = sup_error(fs.block(1), std::sin);
    double elapsed = now_seconds() - t0;
    bool pass = e1 <= 1e-8 && e2 <= 1e-8 && elapsed < 1.0;
    report(1, "fundamental-system oracle", pass,
           "errors " + fmt(e1) + "/" + fmt(e2) + ", " + fmt(elapsed) + " s");
}

void criterion2_char_matrix_oracles() {
    Interval dom01(0.0, 1.0), dompi(0.0, kPi);
    auto sys1 = second_order(dom01, 0.0);
    CharMatrix cm1 = characteristic_matrix(sys1, dirichlet_rows(sys1.index, dom01));
    Matrix e1(2, 2);
    e1 << 1.0, 0.0, 1.0, 1.0;
    double d1 = (cm1.matrix - e1).cwiseAbs().maxCoeff();

    auto sys2 = second_order(dompi, 1.0);
    CharMatrix cm2 = characteristic_matrix(sys2, dirichlet_rows(sys2.index, dompi));
    Matrix e2(2, 2);
    e2 << 1.0, 0.0, -1.0, 0.0;
    double d2 = (cm2.matrix - e2).cwiseAbs().maxCoeff();

    bool pass = d1 <= 1e-8 && d2 <= 1e-8 && cm1.dim_ker == 0 &&
                d_characteristics(cm2) == std::pair<int, int>(1, 1);
    report(2, "characteristic-matrix oracles", pass,
           "entry errors " + fmt(d1) + "/" + fmt(d2));
}

void criterion3_zero_index_invariant() {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> pick_r(1, 3), pick_m(1, 3), pick_n(0, 2);
    std::uniform_int_distribution<int> coin(0, 3);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Interval dom(0.0, 1.0);
    int checked = 0, singular_seen = 0;
    bool pass = true;
    for (int trial = 0; trial < 100; ++trial) {
        int r = pick_r(rng), m = pick_m(rng), n = pick_n(rng);
        SobolevIndex idx(n, r, m, 2.0);
        std::vector<Func> coeffs;
        for (int l = 0; l < r; ++l) {
            std::vector<Matrix> c;
            for (int k = 0; k <= 3; ++k) {
                Matrix mk(m, m);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        mk(i, j) = Complex(gauss(rng), gauss(rng)) / (1.0 + k * k);
                c.push_back(mk);
            }
            coeffs.push_back(Func::chebyshev(dom, std::move(c)));
        }
        OdeSystem sys(idx, dom, coeffs);
        CanonicalOp op = zero_canonical(idx, dom, 0.0);
        // mix of generically well-posed and deliberately rank-deficient operators
        bool degrade = coin(rng) == 0;
        for (auto& a : op.alphas)
            for (int i = 0; i < a.rows(); ++i)
                for (int j = 0; j < a.cols(); ++j)
                    a(i, j) = Complex(gauss(rng), gauss(rng));
        if (degrade && idx.rm() > 1)
            for (auto& a : op.alphas) a.row(idx.rm() - 1) = a.row(0);  // repeated row
        CharMatrix cm = characteristic_matrix(sys, op);
        auto [ker, coker] = d_characteristics(cm);
        if (ker != coker || cm.rank + ker != idx.rm()) pass = false;
        if (ker > 0) ++singular_seen;
        ++checked;
    }
    report(3, "zero-index invariant", pass && checked >= 100,
           std::to_string(checked) + " problems, " + std::to_string(singular_seen) +
               " singular");
}

void criterion4_manufactured_solutions() {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> pick_r(1, 2), pick_m(1, 2), pick_n(0, 1);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Interval dom(0.0, 1.0);
    const double ps[3] = {1.0, 2.0, kInfinity};
    int solved = 0;
    double worst = 0.0;
    bool pass = true;
    for (int case_id = 0; case_id < 51; ++case_id) {
        const double p = ps[case_id % 3];
        int r = pick_r(rng), m = pick_m(rng), n = pick_n(rng);
        SobolevIndex idx(n, r, m, p);
        const int top = idx.smoothness();

        std::vector<Func> coeffs;
        for (int l = 0; l < r; ++l) {
            std::vector<Matrix> c;
            for (int k = 0; k <= 2; ++k) {
                Matrix mk(m, m);
                for (int i = 0; i < m; ++i)
                    for (int j = 0; j < m; ++j)
                        mk(i, j) = Complex(gauss(rng), gauss(rng)) / (1.0 + k * k);
                c.push_back(mk);
            }
            coeffs.push_back(Func::chebyshev(dom, std::move(c)));
        }
        OdeSystem sys(idx, dom, coeffs);

        // random polynomial exact solution of degree <= n+r
        std::vector<Matrix> yc;
        for (int k = 0; k <= top; ++k) {
            Matrix v(m, 1);
            for (int i = 0; i < m; ++i) v(i, 0) = Complex(gauss(rng), gauss(rng));
            yc.push_back(v);
        }
        Func y_exact = Func::chebyshev(dom, std::move(yc));
        std::vector<Func> exact_derivs;
        for (int s = 0; s <= top; ++s) exact_derivs.push_back(y_exact.derivative(s));

        // f = L y_exact
        Func f = exact_derivs[r];
        for (int l = 1; l <= r; ++l)
            f = f + sys.coefficients[l - 1].matmul(exact_derivs[r - l]);

        // random canonical B with alpha terms at every order and a nonzero kernel
        CanonicalOp op = zero_canonical(idx, dom, 0.0);
        for (auto& a : op.alphas)
            for (int i = 0; i < a.rows(); ++i)
                for (int j = 0; j < a.cols(); ++j)
                    a(i, j) = Complex(gauss(rng), gauss(rng));
        std::vector<Matrix> pc;
        for (int k = 0; k <= 2; ++k) {
            Matrix v(idx.rm(), m);
            for (int i = 0; i < v.rows(); ++i)
                for (int j = 0; j < v.cols(); ++j)
                    v(i, j) = Complex(gauss(rng), gauss(rng)) / (1.0 + k);
            pc.push_back(v);
        }
        op.phi = Func::chebyshev(dom, std::move(pc));

        Vector c = apply_canonical(op, exact_derivs).col(0);
        BvProblem prob{sys, f, op, c, idx};
        try {
            BvpSolution sol = solve_bvp(prob);
            double err = 0.0;
            for (int s = 0; s <= top; ++s)
                err += (sol.derivs[s] - exact_derivs[s]).lp_norm(p);
            worst = std::max(worst, err);
            if (err > 1e-6) pass = false;
            ++solved;
        } catch (const SingularProblem&) {
            // a random operator may be singular; it does not count as a case
        }
    }
    report(4, "manufactured-solution suite", pass && solved >= 50,
           std::to_string(solved) + " cases, worst error " + fmt(worst));
}

void criterion5_caputo_oracle() {
    Interval dom(0.0, 1.0);
    Func t = Func::chebyshev(dom, {scalar1(0.5), scalar1(0.5)});
    Func t2 = Func::from_scalar(dom, [](double x) { return x * x; }, 2);
    auto derivs_of = [](const Func& y, int upto) {
        std::vector<Func> d;
        for (int s = 0; s <= upto; ++s) d.push_back(y.derivative(s));
        return d;
    };
    double e_half = 0.0, e_three_half = 0.0, e_const = 0.0;
    for (double x : {0.2, 0.5, 0.9, 1.0}) {
        Matrix v = caputo_at(derivs_of(t, 1), 0.5, x, 0.0);
        e_half = std::max(e_half,
                          std::abs(v(0, 0) - Complex(2.0 * std::sqrt(x / kPi), 0.0)));
        Matrix w = caputo_at(derivs_of(t2, 2), 1.5, x, 0.0);
        double exact = std::tgamma(3.0) / std::tgamma(1.5) * std::sqrt(x);
        e_three_half = std::max(e_three_half, std::abs(w(0, 0) - Complex(exact, 0.0)));
        Matrix z = caputo_at(derivs_of(Func::constant(dom, Complex(3.0, 0.0)), 1), 0.5,
                             x, 0.0);
        e_const = std::max(e_const, std::abs(z(0, 0)));
    }
    bool pass = e_half <= 1e-7 && e_three_half <= 1e-7 && e_const <= 1e-12;
    report(5, "Caputo derivative oracle", pass,
           "errors " + fmt(e_half) + "/" + fmt(e_three_half) + "/" + fmt(e_const));
}

ParameterFamily decay_family() {
    Interval dom(0.0, 1.0);
    Func zero = Func::constant(dom, Complex(0.0, 0.0));
    Func one = Func::constant(dom, Complex(1.0, 0.0));
    SobolevIndex idx(0, 1, 1, 2.0);
    auto make = [&](double mu) {
        OdeSystem sys(idx, dom, {Func::constant(dom, Complex(mu, 0.0))});
        CanonicalOp op = zero_canonical(idx, dom, 0.0);
        op.alphas[0] = scalar1(1.0);
        return BvProblem{sys, one, op, Vector::Zero(1), idx};
    };
    ParameterFamily fam;
    fam.mu0 = "limit";
    fam.points.push_back({"limit", 0.0});
    fam.problems.emplace("limit", make(0.0));
    for (double mu : {1e-1, 1e-2, 1e-3, 1e-4}) {
        std::string label = "mu=" + std::to_string(mu);
        fam.points.push_back({label, mu});
        fam.problems.emplace(label, make(mu));
    }
    return fam;
}

void criterion6_two_sided_estimate() {
    DiscrepancyReport rep = two_sided_estimate(decay_family());
    std::vector<double> dists, dts, errs;
    for (const auto& row : rep.rows) {
        dists.push_back(row.distance);
        dts.push_back(row.d_tilde);
        errs.push_back(row.solution_error);
    }
    double band = rep.gamma_lo > 0.0 ? rep.gamma_hi / rep.gamma_lo : kInfinity;
    double slope_d = loglog_slope(dists, dts);
    double slope_e = loglog_slope(dists, errs);
    bool pass = rep.condition0_holds && band <= 100.0 &&
                std::abs(slope_d - 1.0) <= 0.1 && std::abs(slope_e - 1.0) <= 0.1;
    report(6, "two-sided estimate band", pass,
           "band " + fmt(band) + ", slopes " + fmt(slope_d) + "/" + fmt(slope_e));
}

// target y' = f on [0,1] at p=1 with B y = y(0) + int phi y' dt
BvProblem kernel_target(const Func& phi, const Func& f) {
    Interval dom = phi.domain();
    SobolevIndex idx(0, 1, 1, 1.0);
    OdeSystem sys(idx, dom, {Func::constant(dom, Complex(0.0, 0.0))});
    CanonicalOp op = zero_canonical(idx, dom, 0.0);
    op.alphas[0] = scalar1(1.0);
    op.phi = phi;
    Vector c(1);
    c << Complex(1.0, 0.0);
    return BvProblem{sys, f, op, c, idx};
}

void criterion7_p1_dichotomy() {
    Interval dom(0.0, 1.0);
    Func phi0 = Func::chebyshev(dom, {scalar1(0.5), scalar1(0.5)});  // phi(t) = t

    // (a,b,c) hold while (d) fails for step approximations at p = 1
    ParameterFamily fam;
    fam.mu0 = "limit";
    fam.points.push_back({"limit", 0.0});
    Func one = Func::constant(dom, Complex(1.0, 0.0));
    fam.problems.emplace("limit", kernel_target(phi0, one));
    for (int N : {8, 16, 32, 64}) {
        auto part = uniform_partition(dom, N);
        std::vector<Matrix> vals;
        for (int j = 0; j < N; ++j) vals.push_back(phi0(0.5 * (part[j] + part[j + 1])));
        std::string label = "N=" + std::to_string(N);
        fam.points.push_back({label, 1.0 / N});
        fam.problems.emplace(label, kernel_target(Func::step(dom, part, vals), one));
    }
    AsymptoticsReport asym = check_B_asymptotics(fam);
    bool dichotomy = asym.a && asym.b && asym.c && !asym.d && asym.strong &&
                     !asym.uniform;

    // regulated kernel: the multipoint study converges
    Func f = Func::from_scalar(dom, [](double t) { return std::exp(t); }, 16);
    ApproximationPlan plan{kernel_target(phi0, f), {2, 4, 6, 8}, {}};
    for (int N : {8, 16, 32, 64}) plan.partitions.push_back(uniform_partition(dom, N));
    auto rows = convergence_study(plan, 2, 1);
    double finest = rows.back().solution_error;
    bool regulated_ok = regulated_check(phi0) && finest <= 1e-4;

    // declared-rough kernel: the probe inverse gap plateaus instead
    std::vector<double> breaks = uniform_partition(dom, 1024);
    std::vector<Matrix> rough_vals;
    std::mt19937_64 rough_rng(99);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int j = 0; j < 1024; ++j) rough_vals.push_back(scalar1(unif(rough_rng)));
    Func phi_rough = Func::step(dom, breaks, rough_vals).with_rough_flag(true);
    ApproximationPlan rough_plan{kernel_target(phi_rough, f), {2, 4, 6, 8}, {}};
    for (int N : {8, 16, 32, 64})
        rough_plan.partitions.push_back(uniform_partition(dom, N));
    auto rough_rows = convergence_study(rough_plan, 2, 1);
    double g_first = rough_rows.front().inverse_gap;
    double g_last = rough_rows.back().inverse_gap;
    bool plateau = !regulated_check(phi_rough) && g_last >= 0.1 * g_first;

    bool pass = dichotomy && regulated_ok && plateau;
    report(7, "p=1 strong-vs-uniform dichotomy", pass,
           "finest error " + fmt(finest) + ", rough gap " + fmt(g_first) + " -> " +
               fmt(g_last));
}

void criterion8_approximation_pipeline() {
    double t0 = now_seconds();
    Interval dom(0.0, 1.0);
    SobolevIndex idx(0, 2, 1, 2.0);
    Func q = Func::from_scalar(dom, [](double t) { return std::exp(t); }, 40);
    OdeSystem sys(idx, dom, {Func::constant(dom, Complex(0.0, 0.0)), q});
    Func f = Func::from_scalar(dom, [](double t) { return 1.0 + t; }, 1);
    Vector c(2);
    c << 0.0, 1.0;
    BvProblem target{sys, f, dirichlet_rows(idx, dom), c, idx};

    ApproximationPlan plan{target, {4, 8, 16, 32}, {}};
    for (int k : plan.degrees)
        plan.partitions.push_back(uniform_partition(dom, k * k));
    auto rows = convergence_study(plan, 3, 1);

    bool decay_ok = true;
    for (size_t i = 0; i + 1 < rows.size(); ++i)
        if (rows[i].solution_error < 10.0 * rows[i + 1].solution_error)
            decay_ok = false;
    double gap_ratio = rows.back().inverse_gap / rows.front().inverse_gap;
    double elapsed = now_seconds() - t0;
    bool pass = decay_ok && gap_ratio <= 1e-3 && elapsed < 60.0;
    report(8, "approximation pipeline", pass,
           "gap ratio " + fmt(gap_ratio) + ", " + fmt(elapsed) + " s");
}

// kinked-but-Lipschitz kernel: lacunary dyadic saw with even levels only;
// on dyadic meshes the midpoint Stieltjes error decays at first order only
Func kink_kernel(const Interval& dom) {
    const int kTopLevel = 12;
    auto saw = [](double x) {
        double frac = x - std::floor(x);
        return std::min(frac, 1.0 - frac);
    };
    auto value = [&](double t) {
        double acc = 0.0;
        for (int k = 0; k <= kTopLevel; k += 2)
            acc += std::ldexp(saw(std::ldexp(t, k) - 0.5), -k);
        return Matrix::Constant(1, 1, Complex(acc, 0.0));
    };
    std::vector<double> breaks;
    const int cells = 1 << (kTopLevel + 1);
    for (int j = 1; j < cells; ++j) breaks.push_back(double(j) / cells);
    return Func::from_callable(dom, 1, 1, value, 1, breaks);
}

void criterion9_stieltjes_orders() {
    Interval dom(0.0, 1.0);
    Func g = Func::from_scalar(dom, [](double t) { return std::exp(t); }, 24);

    auto gap_errors = [&](const Func& phi) {
        Matrix exact = phi.matmul(g.derivative(1)).integrate();
        std::vector<double> errors;
        for (int N : {8, 16, 32, 64}) {
            auto part = uniform_partition(dom, N);
            auto frag = stieltjes_multipoint(phi, part);
            Complex sum = 0.0;
            for (size_t j = 0; j < frag.points.size(); ++j)
                sum += frag.betas[j](0, 0) * g.eval_scalar(frag.points[j]);
            errors.push_back(std::abs(sum - exact(0, 0)));
        }
        return errors;
    };
    std::vector<double> meshes = {1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64};

    Func smooth = Func::from_scalar(dom, [](double t) { return std::sin(2 * t); }, 16);
    double slope_smooth = loglog_slope(meshes, gap_errors(smooth));
    double slope_kink = loglog_slope(meshes, gap_errors(kink_kernel(dom)));

    bool pass = std::abs(slope_smooth - 2.0) <= 0.2 && std::abs(slope_kink - 1.0) <= 0.2;
    report(9, "Stieltjes conversion orders", pass,
           "slopes " + fmt(slope_smooth) + "/" + fmt(slope_kink));
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in.good()) return "<unreadable:" + path + ">";
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void criterion10_determinism() {
    const std::string tool = BVPTOOL_PATH;
    const std::string data = TEST_DATA_DIR;
    auto run = [&](const std::string& cmd, const std::string& in,
                   const std::string& out) {
        std::string full = tool + " " + cmd + " --input " + data + "/" + in +
                           " --out " + out + " --seed 5 > /dev/null 2>&1";
        std::system(("rm -rf " + out).c_str());
        return WEXITSTATUS(std::system(full.c_str())) == 0;
    };
    bool ok = true;
    ok &= run("sweep", "sweep_family.json", "/tmp/acc_sweep_a");
    ok &= run("sweep", "sweep_family.json", "/tmp/acc_sweep_b");
    ok &= run("approximate", "approx_plan.json", "/tmp/acc_apx_a");
    ok &= run("approximate", "approx_plan.json", "/tmp/acc_apx_b");
    bool identical =
        slurp("/tmp/acc_sweep_a/sweep.csv") == slurp("/tmp/acc_sweep_b/sweep.csv") &&
        slurp("/tmp/acc_sweep_a/sweep.json") == slurp("/tmp/acc_sweep_b/sweep.json") &&
        slurp("/tmp/acc_apx_a/approximate.csv") ==
            slurp("/tmp/acc_apx_b/approximate.csv") &&
        slurp("/tmp/acc_apx_a/approximate.json") ==
            slurp("/tmp/acc_apx_b/approximate.json");
    report(10, "deterministic outputs", ok && identical,
           identical ? "byte-identical" : "outputs differ");
}

}  // namespace

int main() {
    criterion1_fundamental_oracle();
    criterion2_char_matrix_oracles();
    criterion3_zero_index_invariant();
    criterion4_manufactured_solutions();
    criterion5_caputo_oracle();
    criterion6_two_sided_estimate();
    criterion7_p1_dichotomy();
    criterion8_approximation_pipeline();
    criterion9_stieltjes_orders();
    criterion10_determinism();
    return g_failures == 0 ? 0 : 1;
}
