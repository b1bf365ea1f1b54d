#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "bvp/interval.hpp"

namespace bvp {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

enum class FuncKind { Chebyshev, Piecewise, Step };

/// Default absolute quadrature tolerance for norm evaluation.
inline constexpr double kQuadTol = 1e-12;

/// Matrix-valued function on a finite interval, stored as piecewise Chebyshev
/// series (Chebyshev kind = a single piece, Step kind = degree-0 pieces).
/// Values are immutable after construction; all operations are pure.
class Func {
public:
    Func() = default;

    static Func constant(Interval dom, const Matrix& value);
    static Func constant(Interval dom, Complex value);  // 1x1
    /// Single global Chebyshev series; coeffs[k] is the k-th coefficient matrix
    /// with respect to T_k on dom mapped from [-1,1].
    static Func chebyshev(Interval dom, std::vector<Matrix> coeffs);
    /// Right-continuous step function: values[j] on [breaks[j], breaks[j+1]).
    static Func step(Interval dom, const std::vector<double>& breaks,
                     const std::vector<Matrix>& values);
    /// Sample a callable at degree+1 Lobatto points per piece and interpolate.
    static Func from_callable(Interval dom, int rows, int cols,
                              const std::function<Matrix(double)>& fn, int degree,
                              const std::vector<double>& interior_breaks = {});
    /// Scalar convenience overload.
    static Func from_scalar(Interval dom, const std::function<double(double)>& fn, int degree);
    /// Interpolate per-piece samples taken at ascending Lobatto points.
    static Func from_samples(Interval dom, const std::vector<double>& breaks,
                             const std::vector<std::vector<Matrix>>& piece_samples);

    Interval domain() const { return dom_; }
    int rows() const { return rows_; }
    int cols() const { return cols_; }
    FuncKind kind() const { return kind_; }
    int piece_count() const { return static_cast<int>(pieces_.size()); }
    int max_degree() const;
    std::vector<double> breakpoints() const;
    /// Read-only access to the stored representation (for serialization).
    Interval piece_interval(int i) const;
    const std::vector<Matrix>& piece_coeffs(int i) const;

    /// Declared-rough flag: kernels read from sampled tables whose underlying
    /// function is not claimed regulated. Carried through copies, never set by
    /// library construction.
    bool declared_rough() const { return rough_; }
    Func with_rough_flag(bool rough) const;

    /// Evaluate (right-continuous at interior breakpoints).
    Matrix operator()(double t) const;
    Complex eval_scalar(double t) const;  // requires 1x1

    /// order-th derivative in the same family. Step functions of order >= 1
    /// are rejected (they only ever serve as integral kernels).
    Func derivative(int order = 1) const;

    /// Exact integral over [a,b] from the coefficients.
    Matrix integrate() const;
    /// Exact integral over [a,t].
    Matrix integrate_to(double t) const;

    /// L_p norm, entries aggregated inside the integral:
    /// (int_a^b sum_ij |f_ij|^p dt)^{1/p}; p = inf is a grid sup over
    /// max(2048, 16*degree) Chebyshev points.
    double lp_norm(double p, double quad_tol = kQuadTol) const;

    /// sum_{s=0}^{k} lp_norm(f^{(s)}, p).
    double sobolev_norm(int k, double p, double quad_tol = kQuadTol) const;

    /// Degree-truncated Chebyshev projection onto polynomials on [a,b].
    Func project_chebyshev(int degree) const;

    Func operator+(const Func& g) const;
    Func operator-(const Func& g) const;
    Func operator*(Complex s) const;
    Func operator*(double s) const { return (*this) * Complex(s, 0); }
    Func operator-() const { return (*this) * Complex(-1, 0); }
    /// Matrix product f(t) * g(t); result degree is the per-piece degree sum.
    Func matmul(const Func& g) const;
    /// Column extraction.
    Func col(int j) const;
    /// Horizontal concatenation (same domain and row count).
    static Func hcat(const std::vector<Func>& parts);

    /// Sup over a grid of the largest entry magnitude (diagnostic norm).
    double sup_norm(int grid = 0) const;

private:
    struct Piece {
        double lo = -1.0, hi = 1.0;
        std::vector<Matrix> c;  // c[k] = coefficient of T_k on [lo,hi]
    };

    Interval dom_{0.0, 1.0};
    int rows_ = 1, cols_ = 1;
    FuncKind kind_ = FuncKind::Chebyshev;
    bool rough_ = false;
    std::vector<Piece> pieces_;

    const Piece& piece_at(double t) const;
    Func refined(const std::vector<double>& breaks) const;
    static Piece restrict_piece(const Piece& p, double lo, double hi, int rows, int cols);
    friend Func binary_add(const Func& f, const Func& g, double sign);
};

}  // namespace bvp
