#pragma once

#include <random>

#include "bvp/boundary.hpp"
#include "bvp/func.hpp"
#include "bvp/ode.hpp"

namespace bvp {

using Vector = Eigen::VectorXcd;

/// Default scale for the numerical-rank threshold:
/// rank_tol = rm * sigma_max * kRankScale.
inline constexpr double kRankScale = 1e-10;

/// Full problem data: L y = f on (a,b), B y = c.
struct BvProblem {
    OdeSystem system;
    Func rhs;             // f, m x 1
    BoundaryOp boundary;  // output dimension rm
    Vector target;        // c, length rm
    SobolevIndex index;

    void validate() const;
};

/// Characteristic matrix M = ([B Y_1], ..., [B Y_r]) with its numerical rank
/// data. dim_ker = dim_coker = rm - rank (the matrix is square; the problem
/// operator has index zero).
struct CharMatrix {
    Matrix matrix;
    int rank = 0;
    int dim_ker = 0;
    int dim_coker = 0;
    std::vector<double> singular_values;
    double rank_tol = 0.0;
    /// Set when some singular value lies within a factor 10 of rank_tol; the
    /// rank decision is then sensitive to the threshold and should be read
    /// with care.
    bool margin_flag = false;

    double condition() const;
};

struct BvpSolution {
    Func y;
    std::vector<Func> derivs;  // y^(0) .. y^(n+r)
    Vector constants;          // d with y = sum_i Y_i d_i + y_p
    double residual_ode = 0.0;
    double residual_boundary = 0.0;
};

CharMatrix characteristic_matrix(const OdeSystem& system, const BoundaryOp& op,
                                 double tol = kOdeTol, double rank_scale = kRankScale);

/// (dim_ker, dim_coker).
std::pair<int, int> d_characteristics(const CharMatrix& M);

/// Fundamental system + characteristic matrix computed once, reusable across
/// right-hand sides (f, c).
class PreparedProblem {
public:
    PreparedProblem(OdeSystem system, BoundaryOp boundary, double tol = kOdeTol,
                    double rank_scale = kRankScale);

    const CharMatrix& char_matrix() const { return cm_; }
    const FundamentalSystem& fundamental() const { return fund_; }
    const OdeSystem& system() const { return system_; }
    bool well_posed() const { return cm_.dim_ker == 0; }

    /// Solve L y = f, B y = c. Throws SingularProblem if M is rank deficient
    /// (or its condition number exceeds 1e12).
    BvpSolution solve(const Func& f, const Vector& c) const;

private:
    OdeSystem system_;
    BoundaryOp boundary_;
    double tol_;
    FundamentalSystem fund_;
    CharMatrix cm_;
    Eigen::JacobiSVD<Matrix> svd_;
};

BvpSolution solve_bvp(const BvProblem& problem, double tol = kOdeTol,
                      double rank_scale = kRankScale);

/// Random (m x 1) function with smoothly decaying Chebyshev coefficients,
/// used as probe data.
Func random_smooth(std::mt19937_64& rng, const Interval& dom, int rows, int degree);

/// Max over seeded random right-hand sides (f, c) of unit
/// (W_p^n)^m (+) C^rm norm of ||y_A - y_B||_{n+r,p}: a probe-based lower
/// bound on the gap between the inverse operators.
double operator_gap(const PreparedProblem& a, const PreparedProblem& b, int probes,
                    unsigned long long seed);
double operator_gap(const BvProblem& a, const BvProblem& b, int probes,
                    unsigned long long seed, double tol = kOdeTol);

}  // namespace bvp
