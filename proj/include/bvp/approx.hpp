#pragma once

#include <vector>

#include "bvp/bvp.hpp"

namespace bvp {

/// Plan for an approximating sequence: per entry a polynomial degree k for
/// coefficients/right-hand side and a partition realizing the multipoint
/// boundary conditions.
struct ApproximationPlan {
    BvProblem target;  // boundary operator must be canonical
    std::vector<int> degrees;
    std::vector<std::vector<double>> partitions;  // one per degree

    void validate() const;
};

/// Uniform partition of dom into `cells` cells (dyadic when cells is a power
/// of two and the endpoints are dyadic).
std::vector<double> uniform_partition(const Interval& dom, int cells);

struct ConvergenceRow {
    int k = 0;
    double coeff_error = 0.0;     // max_l ||A_{r-l,k} - A_{r-l,0}||_{n,p}
    double rhs_error = 0.0;       // ||f_k - f_0||_{n,p}
    double boundary_gap = 0.0;    // max over probes |B_k y - B_0 y|
    double solution_error = 0.0;  // ||y_k - y_0||_{n+r,p}
    double inverse_gap = 0.0;     // probe-based inverse-operator gap
    bool well_posed = true;
};

/// Multipoint problem with degree-k polynomial coefficients/right-hand side
/// and the Riemann-Stieltjes discretization of the boundary kernel on the
/// given partition. Alphas and target vector are kept unchanged.
BvProblem build_approximant(const BvProblem& target, int k,
                            const std::vector<double>& partition);

/// Runs the whole plan against the target. Singular intermediate k values are
/// flagged (well_posed = false) with error columns left at zero; throws
/// NeverWellPosed if no k is solvable, SingularProblem if the target itself
/// is ill-posed.
std::vector<ConvergenceRow> convergence_study(const ApproximationPlan& plan, int probes,
                                              unsigned long long seed = 1,
                                              double tol = kOdeTol,
                                              double rank_scale = kRankScale);

/// True for every representation this library can build (Chebyshev,
/// piecewise polynomial, step are all regulated); false only for kernels
/// declared rough in the input.
bool regulated_check(const Func& phi);

/// Least-squares log-log slope of values vs meshes (or any positive
/// abscissae); used for reporting observed convergence orders.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace bvp
