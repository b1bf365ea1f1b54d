#include "bvp/quadrature.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "bvp/errors.hpp"

namespace bvp::quad {

namespace {

// Golub-Welsch: nodes are eigenvalues of the symmetric tridiagonal Jacobi
// matrix built from the three-term recurrence, weights come from the first
// eigenvector components scaled by the zeroth moment.
Rule golub_welsch(int n, const std::vector<double>& a, const std::vector<double>& b,
                  double mu0) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        J(i, i) = a[i];
        if (i + 1 < n) {
            double off = std::sqrt(b[i + 1]);
            J(i, i + 1) = off;
            J(i + 1, i) = off;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    for (int i = 0; i < n; ++i) {
        rule.nodes[i] = es.eigenvalues()(i);
        double v0 = es.eigenvectors()(0, i);
        rule.weights[i] = mu0 * v0 * v0;
    }
    return rule;
}

}  // namespace

Rule gauss_legendre(int n, double lo, double hi) {
    if (n < 1) throw InvalidPartition("gauss_legendre: n >= 1 required");
    std::vector<double> a(n, 0.0), b(n, 0.0);
    for (int k = 1; k < n; ++k) {
        double kk = static_cast<double>(k);
        b[k] = kk * kk / ((2 * kk - 1) * (2 * kk + 1));
    }
    Rule r = golub_welsch(n, a, b, 2.0);
    double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = half * r.nodes[i] + mid;
        r.weights[i] *= half;
    }
    return r;
}

Rule gauss_jacobi(int n, double alpha, double beta) {
    if (n < 1) throw InvalidPartition("gauss_jacobi: n >= 1 required");
    if (alpha <= -1.0 || beta <= -1.0)
        throw OrderOutOfRange("gauss_jacobi: exponents must exceed -1");
    std::vector<double> a(n, 0.0), b(n, 0.0);
    double ab = alpha + beta;
    for (int k = 0; k < n; ++k) {
        double kk = static_cast<double>(k);
        double den = (2 * kk + ab) * (2 * kk + ab + 2);
        a[k] = (den == 0.0) ? (beta - alpha) / (ab + 2)
                            : (beta * beta - alpha * alpha) / den;
        if (k >= 1) {
            double num = 4.0 * kk * (kk + alpha) * (kk + beta) * (kk + ab);
            double d = (2 * kk + ab) * (2 * kk + ab);
            double d2 = (2 * kk + ab + 1) * (2 * kk + ab - 1);
            b[k] = num / (d * d2);
        }
    }
    // zeroth moment: int (1-x)^a (1+x)^b dx = 2^{a+b+1} B(a+1, b+1)
    double mu0 = std::pow(2.0, ab + 1.0) *
                 std::exp(std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0) -
                          std::lgamma(ab + 2.0));
    return golub_welsch(n, a, b, mu0);
}

Rule gauss_jacobi(int n, double alpha, double beta, double lo, double hi) {
    Rule r = gauss_jacobi(n, alpha, beta);
    double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    double scale = std::pow(half, alpha + beta + 1.0);
    for (int i = 0; i < n; ++i) {
        r.nodes[i] = half * r.nodes[i] + mid;
        r.weights[i] *= scale;
    }
    return r;
}

}  // namespace bvp::quad
