#ifndef HEATETA_ORACLE_HPP
#define HEATETA_ORACLE_HPP

#include <vector>

namespace heateta::oracle {

// Floating-point cross-checks, deliberately kept at arm's length from the
// exact engine: nothing computed here ever feeds back into exact arithmetic;
// tests only compare the two sides within explicit tolerances.

// (2 pi)^{-n} int xi^beta exp(-|xi|^2) d xi divided by (4 pi)^{-n/2}, by
// adaptive Gauss-Kronrod quadrature one axis at a time.
double gaussian_moment_numeric(const std::vector<int>& beta, double tol = 1e-12);

// Heat trace sum_k exp(-t lambda_k) of P = -d^2/dx^2 + V on the circle
// R / 2 pi Z, where V(x) = sum_m vcos[m] cos(m x). The operator is assembled
// in the Fourier basis |k| <= kmax and diagonalized; the truncation tail is
// required to be below 1e-12 of the result.
double circle_heat_trace(const std::vector<double>& vcos, double t, int kmax = 96);

// Least squares fit y_i ~ sum_j c_j t_i^{e_j}, solved by SVD after scaling
// each column to unit norm. Returns the coefficients in exponent order.
std::vector<double> fit_power_law(const std::vector<double>& t, const std::vector<double>& y,
                                  const std::vector<double>& exponents);

}  // namespace heateta::oracle

#endif
