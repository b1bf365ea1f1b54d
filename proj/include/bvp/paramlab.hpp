#pragma once

#include <map>
#include <string>
#include <vector>

#include "bvp/bvp.hpp"

namespace bvp {

/// Absolute threshold under which a monitored quantity at the smallest
/// parameter distance counts as "converged to zero". Convergence of a finite
/// family sample can only be judged against a threshold; it is exposed in the
/// config.
inline constexpr double kConvergenceTol = 1e-4;

/// A finite sample of a parameter-dependent family of problems. The metric
/// structure is extensional: each label carries its distance to mu0.
struct ParameterFamily {
    struct Point {
        std::string label;
        double distance = 0.0;
    };

    std::vector<Point> points;  // includes mu0 (distance 0)
    std::map<std::string, BvProblem> problems;
    std::string mu0;

    void validate() const;
    const BvProblem& at(const std::string& label) const;
    /// Points other than mu0, sorted by decreasing distance (limit last).
    std::vector<Point> approach() const;
};

struct Condition0Result {
    bool holds = false;
    CharMatrix char_matrix;
};

/// Trivial-kernel condition at the limit problem: d-characteristics (0,0).
Condition0Result check_condition0(const ParameterFamily& family, double tol = kOdeTol,
                                  double rank_scale = kRankScale);

/// Coefficient convergence A_{r-l}(mu) -> A_{r-l}(mu0) in (W_p^n)^{m x m}.
struct LimitIRow {
    std::string label;
    double distance = 0.0;
    std::vector<double> coeff_norms;  // per l = 1..r
    double rhs_norm = 0.0;            // ||f(mu) - f(mu0)||_{n,p}
};
struct LimitIReport {
    std::vector<LimitIRow> rows;  // ordered by decreasing distance
    bool converges = false;       // norms at the smallest distance <= threshold
};
LimitIReport check_limit_condition_I(const ParameterFamily& family,
                                     double threshold = kConvergenceTol);

/// Boundary-value convergence B(mu)y -> B(mu0)y on a finite probe basis
/// (Chebyshev polynomials per component up to probe_degree). A finite
/// certificate for the "for all y" quantifier, not a proof.
struct LimitIIRow {
    std::string label;
    double distance = 0.0;
    double max_probe_dev = 0.0;
    double target_dev = 0.0;  // |c(mu) - c(mu0)|
};
struct LimitIIReport {
    std::vector<LimitIIRow> rows;
    bool converges = false;
};
LimitIIReport check_limit_condition_II(const ParameterFamily& family, int probe_degree = 12,
                                       double threshold = kConvergenceTol);

/// Asymptotic conditions on canonical boundary data as mu -> mu0:
///  (a) alpha_s(mu) -> alpha_s(mu0) entrywise;
///  (b) ||Phi(mu)||_{p'} bounded over the family;
///  (c) primitives int_a^t Phi(mu) -> int_a^t Phi(mu0) on a t-grid;
///  (d) ||Phi(mu) - Phi(mu0)||_{p'} -> 0.
/// strong = a & b & c, uniform = a & d (valid for 1 <= p < infinity only).
struct AsymptoticsRow {
    std::string label;
    double distance = 0.0;
    double alpha_dev = 0.0;
    double phi_norm = 0.0;
    double primitive_dev = 0.0;
    double phi_dev = 0.0;
};
struct AsymptoticsReport {
    std::vector<AsymptoticsRow> rows;
    bool a = false, b = false, c = false, d = false;
    bool strong = false, uniform = false;
};
AsymptoticsReport check_B_asymptotics(const ParameterFamily& family, int grid = 33,
                                      double threshold = kConvergenceTol);

/// Residual of the limit solution inserted into the mu-problem:
/// ||L(mu) y0 - f(mu)||_{n,p} + |B(mu) y0 - c(mu)|.
double discrepancy(const BvProblem& problem_at_mu, const BvpSolution& y0);

struct DiscrepancyRow {
    std::string label;
    double distance = 0.0;
    double d_tilde = 0.0;
    double solution_error = 0.0;
    double ratio = 0.0;  // solution_error / d_tilde when d_tilde > 0
    bool solvable = true;
};
struct DiscrepancyReport {
    std::vector<DiscrepancyRow> rows;  // ordered by decreasing distance
    double gamma_lo = 0.0, gamma_hi = 0.0;  // empirical ratio band
    double trust_radius = 0.0;              // largest distance with all closer mu solvable
    bool condition0_holds = false;
};

/// Solves every family member, compares against the mu0 solution, and fits
/// the empirical two-sided band solution_error ~ gamma * d_tilde.
DiscrepancyReport two_sided_estimate(const ParameterFamily& family, double tol = kOdeTol,
                                     double rank_scale = kRankScale);

}  // namespace bvp
