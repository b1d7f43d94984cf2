#include "bergman/gauss.hpp"

#include "bergman/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace bergman {

Rule1D gauss_jacobi01(int m, double left, double right) {
  if (m < 1) throw ParameterError("gauss_jacobi01: need at least one node");
  if (!(left > -1.0) || !(right > -1.0)) throw ParameterError("gauss_jacobi01: exponents must exceed -1");
  // Jacobi recurrence on [-1,1] for (1-x)^a (1+x)^b, x' = (1+x)/2 maps to [0,1]
  const double a = right, b = left, ab = a + b;
  Eigen::VectorXd diag(m), sub(std::max(m - 1, 1));
  for (int k = 0; k < m; ++k) {
    double d = 2.0 * k + ab;
    if (k == 0)
      diag(k) = (b - a) / (ab + 2.0);
    else
      diag(k) = (b * b - a * a) / (d * (d + 2.0));
  }
  for (int k = 1; k < m; ++k) {
    double d = 2.0 * k + ab;
    double v;
    if (k == 1)
      v = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    else
      v = 4.0 * k * (k + a) * (k + b) * (k + ab) / (d * d * (d + 1.0) * (d - 1.0));
    sub(k - 1) = std::sqrt(v);
  }
  Rule1D r;
  r.x.resize(m);
  r.w.resize(m);
  r.xc.resize(m);
  const double mu0 = std::exp(std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(ab + 2.0));
  if (m == 1) {
    r.x[0] = 0.5 * (1.0 + diag(0));
    r.xc[0] = 0.5 * (1.0 - diag(0));
    r.w[0] = mu0;
    return r;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub.head(m - 1), Eigen::ComputeEigenvectors);
  const auto& ev = es.eigenvalues();
  const auto& V = es.eigenvectors();
  for (int i = 0; i < m; ++i) {
    double y = std::clamp(ev(i), -1.0, 1.0);
    r.x[i] = 0.5 * (1.0 + y);
    r.xc[i] = 0.5 * (1.0 - y);
    r.w[i] = mu0 * V(0, i) * V(0, i);
  }
  // Newton polish is unnecessary at the sizes used here (m <= 64).
  return r;
}

Rule1D trapezoid_periodic(int m) {
  if (m < 1) throw ParameterError("trapezoid_periodic: need at least one node");
  Rule1D r;
  r.x.resize(m);
  r.w.assign(m, 2.0 * std::numbers::pi / m);
  r.xc.resize(m);
  for (int j = 0; j < m; ++j) {
    r.x[j] = 2.0 * std::numbers::pi * (j + 0.5) / m;
    r.xc[j] = 2.0 * std::numbers::pi - r.x[j];
  }
  return r;
}

}  // namespace bergman
