#pragma once

#include <vector>

namespace bergman {

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
  // 1 - x, kept separately where the rule clusters near the right end
  std::vector<double> xc;
  std::size_t size() const { return x.size(); }
};

// Gauss-Jacobi rule on [0,1] for the weight x^left (1-x)^right, via
// Golub-Welsch. left, right > -1.
Rule1D gauss_jacobi01(int m, double left, double right);

inline Rule1D gauss_legendre01(int m) { return gauss_jacobi01(m, 0.0, 0.0); }

// m-point periodic trapezoid on [0, 2 pi) with midpoint offset, weights 2 pi / m.
Rule1D trapezoid_periodic(int m);

}  // namespace bergman
