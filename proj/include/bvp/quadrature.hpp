#pragma once

#include <vector>

namespace bvp::quad {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Legendre rule on [lo,hi].
Rule gauss_legendre(int n, double lo = -1.0, double hi = 1.0);

/// n-point Gauss-Jacobi rule for int_{-1}^{1} f(x) (1-x)^alpha (1+x)^beta dx,
/// alpha, beta > -1. The weight function is absorbed into the weights.
Rule gauss_jacobi(int n, double alpha, double beta);

/// Rule for int_lo^hi f(t) (hi-t)^alpha (t-lo)^beta dt.
Rule gauss_jacobi(int n, double alpha, double beta, double lo, double hi);

}  // namespace bvp::quad
