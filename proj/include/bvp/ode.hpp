#pragma once

#include <optional>
#include <vector>

#include "bvp/func.hpp"
#include "bvp/interval.hpp"

namespace bvp {

/// Default integrator tolerance.
inline constexpr double kOdeTol = 1e-10;

/// Linear system y^(r) + sum_{l=1}^{r} A_{r-l}(t) y^(r-l) = f.
/// coefficients[l-1] holds A_{r-l}, i.e. the matrix applied to y^(r-l).
struct OdeSystem {
    SobolevIndex index;
    Interval domain;
    std::vector<Func> coefficients;

    OdeSystem(SobolevIndex idx, Interval dom, std::vector<Func> coeffs);

    const Func& coeff_for_order(int s) const;  // matrix applied to y^(s), s < r
};

/// The r matrix solutions Y_1..Y_r of the homogeneous matrix Cauchy problems
/// with Kronecker-delta initial blocks, plus cached derivatives to order n+r.
struct FundamentalSystem {
    std::vector<std::vector<Func>> derivs;  // derivs[i][s] = Y_{i+1}^{(s)}, s = 0..n+r

    const Func& block(int i) const { return derivs[i][0]; }
    int order() const { return static_cast<int>(derivs.size()); }
};

/// Integrates the family of matrix Cauchy problems; the whole rm x rm
/// first-order fundamental matrix is advanced in one pass and re-expanded in
/// (piecewise) Chebyshev form at the coefficient breakpoints.
FundamentalSystem solve_fundamental(const OdeSystem& system, double tol = kOdeTol);

/// Particular solution with zero initial data: y_p^(j-1)(a) = 0, L y_p = f.
Func solve_particular(const OdeSystem& system, const Func& f, double tol = kOdeTol);

/// [y^(0), ..., y^(upto)] where orders > r come from the recurrence
/// y^(r) = f - sum A_{r-l} y^(r-l) differentiated repeatedly; orders below r
/// are spectral derivatives of y. Pass f with rows == m (or an empty optional
/// for the homogeneous equation).
std::vector<Func> higher_derivatives(const OdeSystem& system, const Func& y,
                                     const std::optional<Func>& f, int upto);

/// Same recurrence but seeded with precomputed derivatives 0..r-1.
std::vector<Func> extend_derivatives(const OdeSystem& system, std::vector<Func> derivs,
                                     const std::optional<Func>& f, int upto);

}  // namespace bvp
