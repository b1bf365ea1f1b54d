#include "bvp/ode.hpp"

#include <algorithm>
#include <cmath>

#include "bvp/chebyshev.hpp"
#include "bvp/errors.hpp"

namespace bvp {

OdeSystem::OdeSystem(SobolevIndex idx, Interval dom, std::vector<Func> coeffs)
    : index(idx), domain(dom), coefficients(std::move(coeffs)) {
    if (static_cast<int>(coefficients.size()) != index.r)
        throw DimensionMismatch("OdeSystem: need exactly r coefficient matrices");
    for (const auto& A : coefficients) {
        if (A.rows() != index.m || A.cols() != index.m)
            throw DimensionMismatch("OdeSystem: coefficients must be m x m");
        if (!(A.domain() == domain))
            throw DimensionMismatch("OdeSystem: coefficient on a different interval");
    }
}

const Func& OdeSystem::coeff_for_order(int s) const {
    // coefficients[l-1] = A_{r-l} multiplies y^(r-l); s = r-l  =>  l = r-s
    return coefficients[index.r - 1 - s];
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr double kB5[7] = {35.0 / 384,      0.0,  500.0 / 1113, 125.0 / 192,
                           -2187.0 / 6784,  11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,  0.0,  7571.0 / 16695, 393.0 / 640,
                           -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

struct LinearRhs {
    const OdeSystem& sys;
    const Func* forcing;  // m x K_f forcing added to the bottom block, or null

    Matrix operator()(double t, const Matrix& U) const {
        const int m = sys.index.m;
        const int r = sys.index.r;
        const auto K = U.cols();
        Matrix dU(U.rows(), K);
        if (r > 1) dU.topRows(m * (r - 1)) = U.bottomRows(m * (r - 1));
        Matrix bottom = Matrix::Zero(m, K);
        for (int l = 1; l <= r; ++l)
            bottom.noalias() -= sys.coefficients[l - 1](t) * U.middleRows(m * (r - l), m);
        if (forcing) bottom += (*forcing)(t);
        dU.bottomRows(m) = bottom;
        return dU;
    }
};

// Adaptive DP5 integration of U' = rhs(t,U) from nodes.front() to
// nodes.back(), recording the state at every node (nodes ascending).
std::vector<Matrix> integrate_at_nodes(const LinearRhs& rhs, Matrix U,
                                       const std::vector<double>& nodes, double tol) {
    std::vector<Matrix> out;
    out.reserve(nodes.size());
    out.push_back(U);
    const double span = nodes.back() - nodes.front();
    const double hmin = span * 1e-12;
    double t = nodes.front();
    double h = span / 64.0;
    Matrix k[7];
    Matrix k0 = rhs(t, U);  // FSAL
    for (size_t ni = 1; ni < nodes.size(); ++ni) {
        const double target = nodes[ni];
        while (t < target - 1e-14 * span) {
            double h_use = h;
            bool clipped = false;
            if (t + h_use >= target) {
                h_use = target - t;
                clipped = true;
            }
            k[0] = k0;
            for (int s = 1; s < 7; ++s) {
                Matrix Us = U;
                for (int j = 0; j < s; ++j)
                    if (kA[s][j] != 0.0) Us += (h_use * kA[s][j]) * k[j];
                k[s] = rhs(t + kC[s] * h_use, Us);
            }
            Matrix U5 = U;
            Matrix err = Matrix::Zero(U.rows(), U.cols());
            for (int s = 0; s < 7; ++s) {
                if (kB5[s] != 0.0) U5 += (h_use * kB5[s]) * k[s];
                double d = kB5[s] - kB4[s];
                if (d != 0.0) err += (h_use * d) * k[s];
            }
            double scale = tol * (1.0 + U.cwiseAbs().maxCoeff());
            double e = err.cwiseAbs().maxCoeff() / scale;
            double factor = std::clamp(0.9 * std::pow(std::max(e, 1e-10), -0.2), 0.2, 5.0);
            if (e <= 1.0) {
                t = clipped ? target : t + h_use;
                U = std::move(U5);
                k0 = k[6];  // FSAL: last stage is the derivative at the new point
                if (!clipped) h = std::max(h_use * factor, hmin);
            } else {
                h = std::max(h_use * factor, hmin);
                if (h <= hmin)
                    throw IntegrationFailure("step size underflow in linear ODE integration");
            }
        }
        t = target;
        out.push_back(U);
    }
    return out;
}

struct SampledSolve {
    std::vector<double> breaks;
    std::vector<std::vector<double>> piece_nodes;      // physical Lobatto nodes per piece
    std::vector<std::vector<Matrix>> piece_states;     // state at those nodes
};

SampledSolve integrate_system(const OdeSystem& sys, const Func* forcing, Matrix U0,
                              double tol) {
    // split at coefficient (and forcing) breakpoints; Chebyshev-sample per piece
    std::vector<double> all;
    for (const auto& A : sys.coefficients) {
        auto b = A.breakpoints();
        all.insert(all.end(), b.begin(), b.end());
    }
    if (forcing) {
        auto b = forcing->breakpoints();
        all.insert(all.end(), b.begin(), b.end());
    }
    all.push_back(sys.domain.a);
    all.push_back(sys.domain.b);
    std::sort(all.begin(), all.end());
    std::vector<double> breaks;
    double btol = 1e-13 * sys.domain.length();
    for (double t : all)
        if (breaks.empty() || t - breaks.back() > btol) breaks.push_back(t);

    int maxdeg = 0;
    for (const auto& A : sys.coefficients) maxdeg = std::max(maxdeg, A.max_degree());
    if (forcing) maxdeg = std::max(maxdeg, forcing->max_degree());
    const int M = std::max(64, 4 * maxdeg);

    SampledSolve res;
    res.breaks = breaks;
    LinearRhs rhs{sys, forcing};
    auto xs = cheb::lobatto_points(M);
    Matrix U = std::move(U0);
    for (size_t p = 0; p + 1 < breaks.size(); ++p) {
        double lo = breaks[p], hi = breaks[p + 1];
        std::vector<double> nodes(xs.size());
        for (size_t j = 0; j < xs.size(); ++j) nodes[j] = 0.5 * ((hi - lo) * xs[j] + lo + hi);
        nodes.front() = lo;
        nodes.back() = hi;
        auto states = integrate_at_nodes(rhs, U, nodes, tol);
        U = states.back();
        res.piece_nodes.push_back(std::move(nodes));
        res.piece_states.push_back(std::move(states));
    }
    return res;
}

// Extract rows [s*m, (s+1)m) x cols [c0, c0+K) of each sampled state into a Func.
Func extract_block(const SampledSolve& s, const Interval& dom, int m, int srow, int c0,
                   int K) {
    std::vector<std::vector<Matrix>> samples;
    samples.reserve(s.piece_states.size());
    for (const auto& piece : s.piece_states) {
        std::vector<Matrix> v;
        v.reserve(piece.size());
        for (const auto& U : piece) v.push_back(U.block(srow * m, c0, m, K));
        samples.push_back(std::move(v));
    }
    return Func::from_samples(dom, s.breaks, samples);
}

}  // namespace

std::vector<Func> extend_derivatives(const OdeSystem& system, std::vector<Func> derivs,
                                     const std::optional<Func>& f, int upto) {
    const int r = system.index.r;
    if (upto > system.index.smoothness())
        throw UnsupportedDerivative("derivative order beyond n+r is not representable");
    while (static_cast<int>(derivs.size()) < std::min(upto + 1, r))
        derivs.push_back(derivs[0].derivative(static_cast<int>(derivs.size())));
    auto binom = [](int n, int k) {
        double v = 1.0;
        for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
        return v;
    };
    for (int s = r; s <= upto; ++s) {
        const int j = s - r;  // number of extra differentiations of the ODE
        Func acc = f ? f->derivative(j)
                     : Func::constant(system.domain,
                                      Matrix::Zero(system.index.m, derivs[0].cols()));
        for (int l = 1; l <= system.index.r; ++l) {
            const Func& A = system.coefficients[l - 1];
            for (int i = 0; i <= j; ++i) {
                Func term = A.derivative(i).matmul(derivs[j - i + r - l]);
                acc = acc - term * binom(j, i);
            }
        }
        derivs.push_back(std::move(acc));
    }
    derivs.resize(upto + 1, derivs[0]);
    return derivs;
}

std::vector<Func> higher_derivatives(const OdeSystem& system, const Func& y,
                                     const std::optional<Func>& f, int upto) {
    std::vector<Func> derivs{y};
    return extend_derivatives(system, std::move(derivs), f, upto);
}

FundamentalSystem solve_fundamental(const OdeSystem& system, double tol) {
    const int r = system.index.r, m = system.index.m;
    Matrix U0 = Matrix::Identity(r * m, r * m);
    auto sampled = integrate_system(system, nullptr, U0, tol);
    FundamentalSystem fs;
    fs.derivs.resize(r);
    for (int i = 0; i < r; ++i) {
        std::vector<Func> derivs;
        for (int s = 0; s < r; ++s)
            derivs.push_back(extract_block(sampled, system.domain, m, s, i * m, m));
        fs.derivs[i] =
            extend_derivatives(system, std::move(derivs), std::nullopt,
                               system.index.smoothness());
        // initial-condition invariant
        for (int s = 0; s < r; ++s) {
            Matrix v = fs.derivs[i][s](system.domain.a);
            Matrix expect =
                (s == i) ? Matrix(Matrix::Identity(m, m)) : Matrix(Matrix::Zero(m, m));
            if ((v - expect).cwiseAbs().maxCoeff() > 1e-10)
                throw IntegrationFailure("fundamental system initial block off tolerance");
        }
    }
    return fs;
}

Func solve_particular(const OdeSystem& system, const Func& f, double tol) {
    const int r = system.index.r, m = system.index.m;
    if (f.rows() != m || f.cols() != 1)
        throw DimensionMismatch("solve_particular: f must be m x 1");
    Matrix U0 = Matrix::Zero(r * m, 1);
    auto sampled = integrate_system(system, &f, U0, tol);
    return extract_block(sampled, system.domain, m, 0, 0, 1);
}

}  // namespace bvp
