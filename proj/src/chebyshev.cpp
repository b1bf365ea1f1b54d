#include "bvp/chebyshev.hpp"

#include <cmath>

namespace bvp::cheb {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::vector<double> lobatto_points(int N) {
    std::vector<double> x(N + 1);
    for (int j = 0; j <= N; ++j) x[j] = -std::cos(kPi * j / N);
    return x;
}

std::vector<double> gauss_points(int M) {
    std::vector<double> x(M);
    for (int i = 0; i < M; ++i) x[i] = -std::cos(kPi * (2 * i + 1) / (2.0 * M));
    return x;
}

std::vector<Complex> vals_to_coeffs(const std::vector<Complex>& vals) {
    const int N = static_cast<int>(vals.size()) - 1;
    std::vector<Complex> c(N + 1, Complex(0, 0));
    if (N == 0) {
        c[0] = vals[0];
        return c;
    }
    // DCT-I against values at x_j = -cos(j pi / N): T_k(x_j) = (-1)^k cos(k j pi / N).
    for (int k = 0; k <= N; ++k) {
        Complex s(0, 0);
        for (int j = 0; j <= N; ++j) {
            double w = (j == 0 || j == N) ? 0.5 : 1.0;
            s += w * vals[j] * std::cos(kPi * k * j / N);
        }
        double sign = (k % 2 == 0) ? 1.0 : -1.0;
        double scale = (k == 0 || k == N) ? 1.0 / N : 2.0 / N;
        c[k] = sign * scale * s;
    }
    return c;
}

std::vector<Complex> coeffs_to_vals(const std::vector<Complex>& coeffs) {
    const int N = static_cast<int>(coeffs.size()) - 1;
    auto x = lobatto_points(std::max(N, 1));
    std::vector<Complex> v(x.size());
    for (size_t j = 0; j < x.size(); ++j) v[j] = clenshaw(coeffs, x[j]);
    return v;
}

Complex clenshaw(const std::vector<Complex>& coeffs, double x) {
    Complex b1(0, 0), b2(0, 0);
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 1; --k) {
        Complex t = coeffs[k] + 2.0 * x * b1 - b2;
        b2 = b1;
        b1 = t;
    }
    return coeffs.empty() ? Complex(0, 0) : coeffs[0] + x * b1 - b2;
}

std::vector<Complex> derivative(const std::vector<Complex>& coeffs) {
    const int N = static_cast<int>(coeffs.size()) - 1;
    if (N <= 0) return {Complex(0, 0)};
    std::vector<Complex> d(N, Complex(0, 0));
    // backward recurrence d_{k-1} = d_{k+1} + 2k c_k
    Complex dkp1(0, 0), dkp2(0, 0);
    for (int k = N; k >= 1; --k) {
        Complex dk = dkp2 + 2.0 * k * coeffs[k];
        d[k - 1] = dk;
        dkp2 = dkp1;
        dkp1 = dk;
    }
    d[0] *= 0.5;
    return d;
}

Complex integrate(const std::vector<Complex>& coeffs) {
    Complex s(0, 0);
    for (size_t k = 0; k < coeffs.size(); k += 2)
        s += coeffs[k] * (2.0 / (1.0 - static_cast<double>(k) * k));
    return s;
}

std::vector<Complex> antiderivative(const std::vector<Complex>& coeffs) {
    const int N = static_cast<int>(coeffs.size()) - 1;
    std::vector<Complex> b(N + 2, Complex(0, 0));
    auto c = [&](int k) -> Complex {
        return (k >= 0 && k <= N) ? coeffs[k] : Complex(0, 0);
    };
    for (int k = 1; k <= N + 1; ++k) b[k] = (c(k - 1) - c(k + 1)) / (2.0 * k);
    b[1] += 0.5 * c(0);  // the T_0 primitive is T_1, so c_0 enters b_1 with weight 1
    // fix constant so F(-1) = 0
    Complex at_minus1(0, 0);
    double sign = 1.0;
    for (int k = 1; k <= N + 1; ++k) {
        sign = -sign;
        at_minus1 += sign * b[k];
    }
    b[0] = -at_minus1;
    return b;
}

}  // namespace bvp::cheb
