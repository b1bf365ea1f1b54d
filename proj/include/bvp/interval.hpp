#pragma once

#include <cmath>
#include <limits>

#include "bvp/errors.hpp"

namespace bvp {

/// Finite interval [a,b], a < b.
struct Interval {
    double a = 0.0;
    double b = 1.0;

    Interval() = default;
    Interval(double a_, double b_) : a(a_), b(b_) {
        if (!(std::isfinite(a) && std::isfinite(b) && a < b))
            throw InvalidPartition("Interval requires finite a < b");
    }

    double length() const { return b - a; }
    bool contains(double t, double slack = 1e-12) const {
        return t >= a - slack * length() && t <= b + slack * length();
    }
    /// Map t in [a,b] to x in [-1,1].
    double to_unit(double t) const { return (2.0 * t - a - b) / (b - a); }
    /// Map x in [-1,1] to t in [a,b].
    double from_unit(double x) const { return 0.5 * ((b - a) * x + a + b); }

    bool operator==(const Interval&) const = default;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Smoothness/integrability indices of the ambient Sobolev setting:
/// solutions live in (W_p^{n+r})^m, coefficients in (W_p^n)^{m x m}.
struct SobolevIndex {
    int n = 0;      ///< extra smoothness beyond the equation order
    int r = 1;      ///< equation order
    int m = 1;      ///< system size
    double p = 2.0; ///< integrability exponent in [1, inf]

    SobolevIndex() = default;
    SobolevIndex(int n_, int r_, int m_, double p_) : n(n_), r(r_), m(m_), p(p_) {
        if (n < 0 || r < 1 || m < 1) throw DimensionMismatch("SobolevIndex: need n>=0, r>=1, m>=1");
        if (p < 1.0) throw InvalidExponent("SobolevIndex: p must be >= 1");
    }

    /// Conjugate exponent, 1/p + 1/p' = 1.
    double p_conj() const {
        if (p == 1.0) return kInfinity;
        if (std::isinf(p)) return 1.0;
        return p / (p - 1.0);
    }

    int rm() const { return r * m; }
    /// Order of the solution space, n + r.
    int smoothness() const { return n + r; }
};

}  // namespace bvp
