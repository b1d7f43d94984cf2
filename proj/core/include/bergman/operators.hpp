#pragma once

#include "bergman/dyadic.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

#include <nlohmann/json.hpp>

#include <array>
#include <functional>
#include <string>
#include <vector>

namespace bergman {

enum class KernelFlavor { analytic, modulus };
enum class OuterForm { S, Q };  // with or without the (1-|z|^2)^a factor

struct OperatorSpec {
  int n = 1;
  double a = 0.0;
  double b = 0.0;
  KernelFlavor flavor = KernelFlavor::analytic;
  OuterForm form = OuterForm::S;

  double exponent() const { return n + 1 + a + b; }
  void validate() const;  // n+1+a+b > 0 and -a < b+1
  std::string describe() const;
};

// d^{-m} for d = 1 - <z, w>, with repeated multiplication for integer m.
class KernelPower {
 public:
  explicit KernelPower(double m);
  cplx analytic(cplx d) const;
  double modulus(cplx d) const;

 private:
  double m_;
  int mi_ = 0;  // m when m is a positive integer <= 64
};

struct TestFunction {
  std::function<cplx(const BallPoint&)> eval;
  std::string descriptor;
  bool nonnegative = false;

  cplx operator()(const BallPoint& z) const { return eval(z); }

  static TestFunction constant(double c);
  // z^k = z_1^{k_1} z_2^{k_2}
  static TestFunction monomial(std::array<int, 2> k);
  static TestFunction conj_coordinate(int i);
  static TestFunction kube_indicator(const BergmanTree& tree, int node);
  static TestFunction dyadic_tent_indicator(const BergmanTree& tree, int node);
  static TestFunction tent_indicator(const BallPoint& apex);
  // u^{-1} 1_{T_apex}
  static TestFunction weight_reciprocal_on_tent(const Weight& u, const BallPoint& apex);
  static TestFunction custom(std::function<cplx(const BallPoint&)> f, std::string descriptor, bool nonnegative = false);
};

// Kernel integral at z by quadrature on a dv_b grid.
cplx apply_kernel_op(const OperatorSpec& spec, const TestFunction& f, const BallPoint& z, const QuadratureGrid& grid);
cplx bergman_project(double b, const TestFunction& f, const BallPoint& z, const QuadratureGrid& grid);
double berezin(double b, const TestFunction& f, const BallPoint& z, const QuadratureGrid& grid);

// Same operator for many z and node-value vectors f on a fixed grid.
class KernelOperator {
 public:
  KernelOperator(const OperatorSpec& spec, const QuadratureGrid& grid);
  const OperatorSpec& spec() const { return spec_; }
  const QuadratureGrid& grid() const { return grid_; }
  std::vector<cplx> sample(const TestFunction& f) const;  // f at the grid nodes
  cplx apply(const std::vector<cplx>& fvals, const BallPoint& z) const;
  // with the outer factor left out
  cplx apply_inner(const std::vector<cplx>& fvals, const BallPoint& z) const;

 private:
  OperatorSpec spec_;
  const QuadratureGrid& grid_;
  KernelPower kp_;
  std::vector<CVec> nodes_;
  std::vector<double> coeff_;
};

// T f = sum_alpha v_b(K^_alpha)^{-a/(n+1+b)} <f>_{K^_alpha}^{dv_b} 1_{K^_alpha}
class SparseOperator {
 public:
  SparseOperator(const BergmanTree& tree, double a, double b, const QuadratureGrid& grid);
  const BergmanTree& tree() const { return tree_; }
  const QuadratureGrid& grid() const { return grid_; }
  const std::vector<int>& assignment() const { return assign_; }
  const DyadicSums& volumes() const { return vol_; }
  // per-node coefficient v^{-a/(n+1+b)} <f>
  std::vector<double> coefficients(const std::vector<double>& fvals) const;
  // sum over the ancestor chain of node `id`
  double at_node(const std::vector<double>& coeffs, int id) const;
  double apply(const std::vector<double>& coeffs, const BallPoint& z) const;  // DepthError beyond depth
  // T f at every grid node (0 beyond the tree depth)
  std::vector<double> apply_grid(const std::vector<double>& fvals) const;

 private:
  const BergmanTree& tree_;
  const QuadratureGrid& grid_;
  double power_;
  std::vector<int> assign_;
  DyadicSums vol_;
};

double sparse_apply(const BergmanTree& tree, double a, double b, const TestFunction& f, const BallPoint& z,
                    const QuadratureGrid& grid);

// M_{T,u} f(z) = max over the ancestors alpha of z of u-weighted averages of |f| over K^_alpha (dv_t grid)
class MaximalOperator {
 public:
  MaximalOperator(const BergmanTree& tree, const Weight& u, const QuadratureGrid& grid);
  std::vector<double> node_averages(const std::vector<double>& absf) const;
  double apply(const std::vector<double>& averages, const BallPoint& z) const;
  std::vector<double> apply_grid(const std::vector<double>& absf) const;
  const std::vector<double>& weight_values() const { return uval_; }

 private:
  const BergmanTree& tree_;
  const QuadratureGrid& grid_;
  std::vector<int> assign_;
  std::vector<double> uval_;
  DyadicSums umass_;
};

double maximal(const BergmanTree& tree, const Weight& u, const TestFunction& f, const BallPoint& z,
               const QuadratureGrid& grid);

struct DominationResult {
  double lower_ratio = 0.0;  // min_z sum_l T_l f / Q+ f
  double upper_ratio = 0.0;  // max_z
  double single_tree_max = 0.0;  // max_z T_0 f / Q+ f
  std::vector<double> ratios;
  nlohmann::json to_json() const;
};

// f >= 0 required; z samples must lie within the depth of every tree.
DominationResult domination_check(const CoveringForest& forest, double a, double b, const TestFunction& f,
                                  const std::vector<BallPoint>& zs, const QuadratureGrid& grid);

}  // namespace bergman
