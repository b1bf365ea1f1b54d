#include "bvp/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "bvp/errors.hpp"
#include "bvp/quadrature.hpp"

namespace bvp {

namespace {
double tgamma_safe(double x) { return std::tgamma(x); }
}

void CanonicalOp::validate(const Interval& dom) const {
    if (static_cast<int>(alphas.size()) != index.smoothness())
        throw DimensionMismatch("canonical operator: need n+r alpha matrices");
    for (const auto& a : alphas)
        if (a.rows() != index.rm() || a.cols() != index.m)
            throw DimensionMismatch("canonical operator: alpha must be rm x m");
    if (phi.rows() != index.rm() || phi.cols() != index.m)
        throw DimensionMismatch("canonical operator: Phi must be rm x m");
    if (!dom.contains(t0)) throw PointOutOfInterval("canonical operator: t0 outside [a,b]");
}

void MultipointOp::validate(const Interval& dom) const {
    if (static_cast<int>(alphas.size()) != index.smoothness())
        throw DimensionMismatch("multipoint operator: need n+r alpha matrices");
    if (points.size() != betas.size())
        throw DimensionMismatch("multipoint operator: points/betas length mismatch");
    for (const auto& a : alphas)
        if (a.rows() != index.rm() || a.cols() != index.m)
            throw DimensionMismatch("multipoint operator: alpha must be rm x m");
    for (const auto& b : betas)
        if (b.rows() != index.rm() || b.cols() != index.m)
            throw DimensionMismatch("multipoint operator: beta must be rm x m");
    for (double t : points)
        if (!dom.contains(t)) throw PointOutOfInterval("multipoint operator: point outside [a,b]");
    if (!dom.contains(t0)) throw PointOutOfInterval("multipoint operator: t0 outside [a,b]");
}

void FractionalOp::validate(const Interval& dom) const {
    double prev = -1.0;
    double bound = index.smoothness() - 1.0 / index.p;  // p = inf gives n+r
    for (const auto& term : terms) {
        if (term.order < 0.0 || term.order <= prev)
            throw OrderOutOfRange("fractional operator: orders must be increasing and >= 0");
        if (term.order >= bound)
            throw OrderOutOfRange("fractional operator: order must be below (n+r) - 1/p");
        if (term.weight.rows() != index.rm() || term.weight.cols() != index.m)
            throw DimensionMismatch("fractional operator: weight must be rm x m");
        if (!(term.weight.domain() == dom))
            throw DimensionMismatch("fractional operator: weight on a different interval");
        prev = term.order;
    }
}

int required_order(const BoundaryOp& op) {
    return std::visit(
        [](const auto& b) -> int {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, CanonicalOp>) {
                return b.index.smoothness();
            } else if constexpr (std::is_same_v<T, MultipointOp>) {
                return b.index.smoothness() - 1;
            } else {
                int q = 0;
                for (const auto& t : b.terms)
                    q = std::max(q, static_cast<int>(std::ceil(t.order)));
                return q;
            }
        },
        op);
}

int output_dim(const BoundaryOp& op) { return boundary_index(op).rm(); }

const SobolevIndex& boundary_index(const BoundaryOp& op) {
    return std::visit([](const auto& b) -> const SobolevIndex& { return b.index; }, op);
}

Matrix apply_canonical(const CanonicalOp& op, const std::vector<Func>& derivs) {
    const int top = op.index.smoothness();
    if (static_cast<int>(derivs.size()) <= top)
        throw DimensionMismatch("apply_canonical: derivatives up to n+r required");
    if (derivs[0].rows() != op.index.m)
        throw DimensionMismatch("apply_canonical: argument has wrong row count");
    const auto K = derivs[0].cols();
    Matrix out = Matrix::Zero(op.index.rm(), K);
    for (int s = 0; s < top; ++s) out += op.alphas[s] * derivs[s](op.t0);
    out += op.phi.matmul(derivs[top]).integrate();
    return out;
}

Matrix apply_multipoint(const MultipointOp& op, const std::vector<Func>& derivs) {
    const int top = op.index.smoothness() - 1;
    if (static_cast<int>(derivs.size()) <= top)
        throw DimensionMismatch("apply_multipoint: derivatives up to n+r-1 required");
    if (derivs[0].rows() != op.index.m)
        throw DimensionMismatch("apply_multipoint: argument has wrong row count");
    const auto K = derivs[0].cols();
    Matrix out = Matrix::Zero(op.index.rm(), K);
    for (size_t s = 0; s < op.alphas.size(); ++s) out += op.alphas[s] * derivs[s](op.t0);
    for (size_t j = 0; j < op.points.size(); ++j)
        out += op.betas[j] * derivs[top](op.points[j]);
    return out;
}

Matrix caputo_at(const std::vector<Func>& derivs, double order, double t, double a) {
    const int q = static_cast<int>(std::ceil(order));
    if (order == std::floor(order)) return derivs[static_cast<int>(order)](t);
    if (static_cast<int>(derivs.size()) <= q)
        throw DimensionMismatch("caputo_at: derivative of order ceil(l) required");
    const double alpha = q - order;  // in (0,1)
    if (t <= a) return Matrix::Zero(derivs[0].rows(), derivs[0].cols());
    // D^l y(t) = (t-a)^alpha / Gamma(alpha) * int_0^1 (1-u)^(alpha-1) y^(q)(a+(t-a)u) du
    int nin = derivs[q].max_degree() / 2 + 8;
    auto rule = quad::gauss_jacobi(nin, alpha - 1.0, 0.0, 0.0, 1.0);
    Matrix acc = Matrix::Zero(derivs[0].rows(), derivs[0].cols());
    for (int i = 0; i < nin; ++i)
        acc += rule.weights[i] * derivs[q](a + (t - a) * rule.nodes[i]);
    return std::pow(t - a, alpha) / tgamma_safe(alpha) * acc;
}

namespace {

// int_lo^hi beta(t) * g(t) dt with g supplied pointwise; per-piece Gauss rules.
Matrix integrate_weighted(const Func& beta, double lo, double hi,
                          const std::function<Matrix(double)>& g, int extra_nodes) {
    Matrix acc = Matrix::Zero(beta.rows(), g(lo).cols());
    auto breaks = beta.breakpoints();
    std::vector<double> cuts{lo};
    for (double b : breaks)
        if (b > lo && b < hi) cuts.push_back(b);
    cuts.push_back(hi);
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        int n = std::max(32, beta.max_degree() / 2 + extra_nodes);
        auto rule = quad::gauss_legendre(n, cuts[i], cuts[i + 1]);
        for (int j = 0; j < n; ++j)
            acc += rule.weights[j] * (beta(rule.nodes[j]) * g(rule.nodes[j]));
    }
    return acc;
}

}  // namespace

Matrix apply_fractional(const FractionalOp& op, const std::vector<Func>& derivs) {
    if (derivs[0].rows() != op.index.m)
        throw DimensionMismatch("apply_fractional: argument has wrong row count");
    const double a = derivs[0].domain().a;
    const double b = derivs[0].domain().b;
    const auto K = derivs[0].cols();
    Matrix out = Matrix::Zero(op.index.rm(), K);
    for (const auto& term : op.terms) {
        const double l = term.order;
        if (l == std::floor(l)) {
            out += term.weight.matmul(derivs[static_cast<int>(l)]).integrate();
            continue;
        }
        const int q = static_cast<int>(std::ceil(l));
        const double alpha = q - l;
        if (static_cast<int>(derivs.size()) <= q)
            throw DimensionMismatch("apply_fractional: derivative of order ceil(l) required");
        // inner rule reused across outer nodes
        int nin = derivs[q].max_degree() / 2 + 8;
        auto inner = quad::gauss_jacobi(nin, alpha - 1.0, 0.0, 0.0, 1.0);
        auto smooth_part = [&](double t) {  // D^l y(t) / (t-a)^alpha
            Matrix acc = Matrix::Zero(op.index.m, K);
            for (int i = 0; i < nin; ++i)
                acc += inner.weights[i] * derivs[q](a + (t - a) * inner.nodes[i]);
            return Matrix(acc / tgamma_safe(alpha));
        };
        // outer integral: the first weight piece carries the (t-a)^alpha factor
        // through a Jacobi rule, the remaining pieces are smooth
        auto breaks = term.weight.breakpoints();
        std::vector<double> cuts{a};
        for (double c : breaks)
            if (c > a && c < b) cuts.push_back(c);
        cuts.push_back(b);
        for (size_t i = 0; i + 1 < cuts.size(); ++i) {
            int n = std::max(32, (term.weight.max_degree() + derivs[q].max_degree()) / 2 + 8);
            if (i == 0) {
                auto rule = quad::gauss_jacobi(n, 0.0, alpha, cuts[0], cuts[1]);
                for (int j = 0; j < n; ++j)
                    out += rule.weights[j] *
                           (term.weight(rule.nodes[j]) * smooth_part(rule.nodes[j]));
            } else {
                auto rule = quad::gauss_legendre(n, cuts[i], cuts[i + 1]);
                for (int j = 0; j < n; ++j)
                    out += rule.weights[j] * std::pow(rule.nodes[j] - a, alpha) *
                           (term.weight(rule.nodes[j]) * smooth_part(rule.nodes[j]));
            }
        }
    }
    return out;
}

Matrix apply_boundary(const BoundaryOp& op, const std::vector<Func>& derivs) {
    return std::visit(
        [&](const auto& b) -> Matrix {
            using T = std::decay_t<decltype(b)>;
            if constexpr (std::is_same_v<T, CanonicalOp>) return apply_canonical(b, derivs);
            else if constexpr (std::is_same_v<T, MultipointOp>) return apply_multipoint(b, derivs);
            else return apply_fractional(b, derivs);
        },
        op);
}

StieltjesFragment stieltjes_multipoint(const Func& phi, const std::vector<double>& partition) {
    const Interval dom = phi.domain();
    if (partition.size() < 2 || partition.front() != dom.a || partition.back() != dom.b)
        throw InvalidPartition("stieltjes_multipoint: partition must span [a,b]");
    for (size_t i = 1; i < partition.size(); ++i)
        if (!(partition[i] > partition[i - 1]))
            throw InvalidPartition("stieltjes_multipoint: partition not increasing");

    const size_t N = partition.size() - 1;
    std::vector<Matrix> mid(N);
    for (size_t j = 0; j < N; ++j) mid[j] = phi(0.5 * (partition[j] + partition[j + 1]));

    StieltjesFragment frag;
    frag.points = partition;
    frag.betas.resize(N + 1);
    for (size_t i = 0; i <= N; ++i) {
        Matrix beta = Matrix::Zero(phi.rows(), phi.cols());
        if (i >= 1) beta += mid[i - 1];
        if (i <= N - 1) beta -= mid[i];
        frag.betas[i] = beta;
    }
    return frag;
}

void add_point_term(CanonicalOp& op, const Interval& dom, int out_row,
                    const Eigen::RowVectorXcd& weight, int s, double tau) {
    const int top = op.index.smoothness();
    if (s < 0 || s >= top)
        throw OrderOutOfRange("add_point_term: need 0 <= s <= n+r-1");
    if (!dom.contains(tau)) throw PointOutOfInterval("add_point_term: tau outside [a,b]");
    if (weight.cols() != op.index.m)
        throw DimensionMismatch("add_point_term: weight must have m entries");
    // y^(s)(tau) = sum_{j=s}^{n+r-1} y^(j)(t0) (tau-t0)^(j-s)/(j-s)!
    //              + int_{t0}^{tau} (tau-u)^(n+r-1-s)/(n+r-1-s)! y^(n+r)(u) du
    double fact = 1.0;
    for (int j = s; j < top; ++j) {
        op.alphas[j].row(out_row) += weight * (std::pow(tau - op.t0, j - s) / fact);
        fact *= (j - s + 1);
    }
    const int k = top - 1 - s;
    const double kfact = tgamma_safe(k + 1.0);
    const double lo = std::min(op.t0, tau), hi = std::max(op.t0, tau);
    const double sign = (tau >= op.t0) ? 1.0 : -1.0;
    auto kernel = [&](double u) {
        Matrix v = Matrix::Zero(op.index.rm(), op.index.m);
        if (u >= lo && u < hi)
            v.row(out_row) = weight * (sign * std::pow(tau - u, k) / kfact);
        return v;
    };
    if (hi > lo) {
        Func add = Func::from_callable(dom, op.index.rm(), op.index.m, kernel,
                                       std::max(k + 2, 4), {lo, hi});
        op.phi = op.phi + add;
    }
}

CanonicalOp canonicalize(const FractionalOp& op, const Interval& dom) {
    op.validate(dom);
    const SobolevIndex& idx = op.index;
    const int top = idx.smoothness();
    const double a = dom.a, b = dom.b;
    CanonicalOp out = zero_canonical(idx, dom, a);

    std::vector<double> graded;  // refinement toward b for the fitted kernel
    for (int j = 1; j <= 12; ++j) graded.push_back(b - dom.length() * std::pow(2.0, -j));

    for (const auto& term : op.terms) {
        const double l = term.order;
        const int q = static_cast<int>(std::ceil(l));
        // alpha_s coefficients: int_a^b beta(t) (t-a)^(s-l) dt / Gamma(s-l+1)
        for (int s = q; s < top; ++s) {
            const double e = s - l;
            Matrix mom = Matrix::Zero(idx.rm(), idx.m);
            auto wb = term.weight.breakpoints();
            std::vector<double> cuts{a};
            for (double c : wb)
                if (c > a && c < b) cuts.push_back(c);
            cuts.push_back(b);
            int n = std::max(24, term.weight.max_degree() / 2 + 10);
            for (size_t i = 0; i + 1 < cuts.size(); ++i) {
                if (i == 0) {
                    // (t-a)^e through the Jacobi weight, exact for polynomial pieces
                    auto rule = quad::gauss_jacobi(n, 0.0, e, cuts[0], cuts[1]);
                    for (int j = 0; j < n; ++j)
                        mom += rule.weights[j] * term.weight(rule.nodes[j]);
                } else {
                    auto rule = quad::gauss_legendre(n, cuts[i], cuts[i + 1]);
                    for (int j = 0; j < n; ++j)
                        mom += rule.weights[j] * std::pow(rule.nodes[j] - a, e) *
                               term.weight(rule.nodes[j]);
                }
            }
            out.alphas[s] += mom / tgamma_safe(e + 1.0);
        }
        // Phi(u) += int_u^b beta(t) (t-u)^gamma dt / Gamma(gamma+1), gamma = n+r-1-l
        const double gamma = top - 1 - l;
        auto phi_at = [&](double u) -> Matrix {
            if (u >= b) return Matrix::Zero(idx.rm(), idx.m);
            auto breaks = term.weight.breakpoints();
            std::vector<double> cuts{u};
            for (double c : breaks)
                if (c > u && c < b) cuts.push_back(c);
            cuts.push_back(b);
            Matrix acc = Matrix::Zero(idx.rm(), idx.m);
            int n = std::max(24, term.weight.max_degree() / 2 + 10);
            for (size_t i = 0; i + 1 < cuts.size(); ++i) {
                if (i == 0) {
                    // singular factor (t-u)^gamma handled by the Jacobi weight
                    auto rule = quad::gauss_jacobi(n, 0.0, gamma, cuts[0], cuts[1]);
                    for (int j = 0; j < n; ++j)
                        acc += rule.weights[j] * term.weight(rule.nodes[j]);
                } else {
                    auto rule = quad::gauss_legendre(n, cuts[i], cuts[i + 1]);
                    for (int j = 0; j < n; ++j)
                        acc += rule.weights[j] * std::pow(rule.nodes[j] - u, gamma) *
                               term.weight(rule.nodes[j]);
                }
            }
            return acc / tgamma_safe(gamma + 1.0);
        };
        std::vector<double> interior = graded;
        for (double c : term.weight.breakpoints())
            if (c > a && c < b) interior.push_back(c);
        Func phi_term =
            Func::from_callable(dom, idx.rm(), idx.m, phi_at, 24, interior);
        out.phi = out.phi + phi_term;
    }
    return out;
}

double bound_constant(const CanonicalOp& op) {
    double c = 0.0;
    for (const auto& a : op.alphas) c += a.norm();
    c += op.phi.lp_norm(op.index.p_conj());
    return c;
}

CanonicalOp zero_canonical(const SobolevIndex& idx, const Interval& dom, double t0) {
    CanonicalOp op;
    op.index = idx;
    op.t0 = t0;
    op.alphas.assign(idx.smoothness(), Matrix::Zero(idx.rm(), idx.m));
    op.phi = Func::constant(dom, Matrix::Zero(idx.rm(), idx.m));
    return op;
}

}  // namespace bvp
