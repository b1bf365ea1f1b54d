#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace bvp::cheb {

using Complex = std::complex<double>;

/// Chebyshev-Lobatto points x_j = -cos(j*pi/N), j = 0..N, ascending in [-1,1].
std::vector<double> lobatto_points(int N);

/// First-kind Chebyshev points cos((2i+1)pi/(2M)), i = 0..M-1 (descending order
/// is irrelevant to callers; returned ascending).
std::vector<double> gauss_points(int M);

/// Interpolation coefficients from values at the ascending Lobatto grid.
/// vals.size() == N+1 yields coefficients c_0..c_N with f = sum c_k T_k.
std::vector<Complex> vals_to_coeffs(const std::vector<Complex>& vals);

/// Values at the ascending Lobatto grid from coefficients.
std::vector<Complex> coeffs_to_vals(const std::vector<Complex>& coeffs);

/// Clenshaw evaluation of sum c_k T_k(x).
Complex clenshaw(const std::vector<Complex>& coeffs, double x);

/// Coefficients of the derivative on [-1,1] (one order).
std::vector<Complex> derivative(const std::vector<Complex>& coeffs);

/// Exact integral over [-1,1] from coefficients.
Complex integrate(const std::vector<Complex>& coeffs);

/// Coefficients of the primitive F with F(-1) = 0.
std::vector<Complex> antiderivative(const std::vector<Complex>& coeffs);

}  // namespace bvp::cheb
