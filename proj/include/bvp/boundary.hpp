#pragma once

#include <variant>
#include <vector>

#include "bvp/func.hpp"
#include "bvp/interval.hpp"

namespace bvp {

/// Canonical boundary operator
///   B y = sum_{s=0}^{n+r-1} alpha_s y^(s)(t0) + int_a^b Phi(t) y^(n+r)(t) dt,
/// the unique representation of any continuous B : (W_p^{n+r})^m -> C^{rm}
/// for p < infinity.
struct CanonicalOp {
    SobolevIndex index;
    double t0 = 0.0;
    std::vector<Matrix> alphas;  // n+r matrices, each rm x m
    Func phi;                    // rm x m kernel in L_{p'}

    void validate(const Interval& dom) const;
};

/// Multipoint operator: alpha terms at t0 plus top-derivative evaluations
///   sum_s alpha_s y^(s)(t0) + sum_j beta_j y^(n+r-1)(t_j).
struct MultipointOp {
    SobolevIndex index;
    double t0 = 0.0;
    std::vector<Matrix> alphas;   // n+r matrices, each rm x m
    std::vector<double> points;   // t_j in [a,b]
    std::vector<Matrix> betas;    // rm x m, same length as points

    void validate(const Interval& dom) const;
};

/// Integral conditions with Caputo derivatives:
///   B y = sum_j int_a^b beta_j(t) (D_{a+}^{l_j} y)(t) dt.
struct FractionalTerm {
    double order = 0.0;  // l_j >= 0
    Func weight;         // rm x m, bounded
};

struct FractionalOp {
    SobolevIndex index;
    std::vector<FractionalTerm> terms;

    void validate(const Interval& dom) const;
};

using BoundaryOp = std::variant<CanonicalOp, MultipointOp, FractionalOp>;

/// Highest derivative order of y the operator consumes.
int required_order(const BoundaryOp& op);
int output_dim(const BoundaryOp& op);
const SobolevIndex& boundary_index(const BoundaryOp& op);

/// Apply to the columns of a (possibly matrix-valued) function given its
/// derivative list derivs[s] = y^(s); returns an rm x K matrix.
Matrix apply_canonical(const CanonicalOp& op, const std::vector<Func>& derivs);
Matrix apply_multipoint(const MultipointOp& op, const std::vector<Func>& derivs);
Matrix apply_fractional(const FractionalOp& op, const std::vector<Func>& derivs);
Matrix apply_boundary(const BoundaryOp& op, const std::vector<Func>& derivs);

/// Caputo derivative of a columns-of-y function at a single point, for
/// non-integer order evaluated by Gauss-Jacobi quadrature on the singular
/// kernel; plain derivative for integer order.
Matrix caputo_at(const std::vector<Func>& derivs, double order, double t, double a);

/// Riemann-Stieltjes discretization of the kernel integral: points/betas with
///   sum_j beta_j y^(n+r-1)(t_j)
///     = sum_cells Phi(midpoint) (y^(n+r-1)(t_{j+1}) - y^(n+r-1)(t_j)).
struct StieltjesFragment {
    std::vector<double> points;
    std::vector<Matrix> betas;
};
StieltjesFragment stieltjes_multipoint(const Func& phi, const std::vector<double>& partition);

/// Exact encoding of a point-evaluation condition
///   (row out_row of B) y += weight * y^(s)(tau)
/// into alpha terms at t0 plus a polynomial kernel, via Taylor's formula with
/// integral remainder. Keeps arbitrary multipoint conditions inside the
/// canonical form.
void add_point_term(CanonicalOp& op, const Interval& dom, int out_row,
                    const Eigen::RowVectorXcd& weight, int s, double tau);

/// Canonical representation of a fractional-integral operator with base
/// point t0 = a. Exact for integer orders and polynomial weights; fractional
/// kernels are fitted on a grid graded toward b.
CanonicalOp canonicalize(const FractionalOp& op, const Interval& dom);

/// sum_s ||alpha_s||_F + ||Phi||_{p'}; a boundedness constant for the
/// canonical operator (up to embedding/dimensional factors).
double bound_constant(const CanonicalOp& op);

/// Zero canonical operator of the right shape.
CanonicalOp zero_canonical(const SobolevIndex& idx, const Interval& dom, double t0);

}  // namespace bvp
