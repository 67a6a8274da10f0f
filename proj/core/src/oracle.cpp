#include "heateta/oracle.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "heateta/error.hpp"

namespace heateta::oracle {

double gaussian_moment_numeric(const std::vector<int>& beta, double tol) {
  using boost::math::quadrature::gauss_kronrod;
  const double root4pi = std::sqrt(4.0 * M_PI);
  double prod = 1.0;
  for (int b : beta) {
    if (b < 0) throw CheckError("negative moment exponent");
    auto f = [b](double x) { return std::pow(x, b) * std::exp(-x * x); };
    // The integrand is negligible beyond |x| = 12 at double precision.
    double integral = gauss_kronrod<double, 61>::integrate(f, -12.0, 12.0, 12, tol);
    prod *= integral / (2.0 * M_PI) * root4pi;
  }
  return prod;
}

double circle_heat_trace(const std::vector<double>& vcos, double t, int kmax) {
  if (t <= 0) throw CheckError("heat trace requires t > 0");
  if (kmax < 8) throw CheckError("fourier basis too small");
  const int dim = 2 * kmax + 1;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  // Basis e^{ikx}, k = -kmax..kmax; cos(mx) couples k and k -/+ m with
  // weight v_m / 2 (m = 0 shifts the diagonal by v_0).
  for (int r = 0; r < dim; ++r) {
    int k = r - kmax;
    h(r, r) = double(k) * double(k);
    if (!vcos.empty()) h(r, r) += vcos[0];
    for (size_t m = 1; m < vcos.size(); ++m) {
      if (vcos[m] == 0.0) continue;
      if (r + (int)m < dim) h(r, r + m) += vcos[m] / 2.0;
      if (r - (int)m >= 0) h(r, r - m) += vcos[m] / 2.0;
    }
  }
  if ((h - h.transpose()).norm() > 1e-12) throw CheckError("fourier matrix not symmetric");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h);
  if (solver.info() != Eigen::Success) throw CheckError("eigensolve failed");
  const auto& ev = solver.eigenvalues();
  double trace = 0.0;
  for (int j = 0; j < dim; ++j) trace += std::exp(-t * ev(j));
  // Truncation control: the discarded modes contribute less than the
  // integral tail of exp(-t k^2) past kmax (potential shifts are bounded by
  // sum |v_m|, absorbed into a safety factor of e).
  double vbound = 0.0;
  for (double v : vcos) vbound += std::abs(v);
  double tail = std::exp(vbound * t) * std::exp(-t * kmax * kmax) *
                (1.0 + 1.0 / (2.0 * t * kmax));
  if (tail > 1e-12 * trace)
    throw CheckError("fourier truncation too small for the requested time");
  return trace;
}

std::vector<double> fit_power_law(const std::vector<double>& t, const std::vector<double>& y,
                                  const std::vector<double>& exponents) {
  if (t.size() != y.size() || t.size() < exponents.size())
    throw CheckError("fit needs at least as many samples as exponents");
  const int rows = (int)t.size(), cols = (int)exponents.size();
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (int r = 0; r < rows; ++r) {
    b(r) = y[r];
    for (int c = 0; c < cols; ++c) a(r, c) = std::pow(t[r], exponents[c]);
  }
  Eigen::VectorXd scale(cols);
  for (int c = 0; c < cols; ++c) {
    scale(c) = a.col(c).norm();
    if (scale(c) == 0.0) scale(c) = 1.0;
    a.col(c) /= scale(c);
  }
  Eigen::VectorXd x = a.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(b);
  std::vector<double> out(cols);
  for (int c = 0; c < cols; ++c) out[c] = x(c) / scale(c);
  return out;
}

}  // namespace heateta::oracle
