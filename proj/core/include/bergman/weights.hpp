#pragma once

#include "bergman/geometry.hpp"
#include "bergman/quadrature.hpp"

#include <nlohmann/json.hpp>

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace bergman {

// Positive weight on the ball, kept in product form
//   u(z) = e^{log_scale} (1-|z|^2)^{edge} prod_j |1 - <z, zeta_j>|^{kappa_j} g(z)^{gamma}
// so that powers, duals and the tilde / psi / nu transforms stay closed-form
// and are evaluated in log space.
class Weight {
 public:
  struct Singular {
    CVec zeta;     // unit vector
    double kappa;  // exponent of |1 - <z, zeta>|
  };

  static Weight constant(int n, double c);
  // (1-|z|^2)^{exponent}
  static Weight power(int n, double exponent);
  // |1-z_1|^{(n+1+b)(1-delta)} |1+z_1|^{(n+1+b)(delta-1)}
  static Weight sharp(double delta, int n, double b);
  static Weight singular(int n, std::vector<Singular> points, double edge = 0.0);
  // g must be positive and finite on the ball
  static Weight custom(int n, std::function<double(const BallPoint&)> g, std::string provenance);

  int dimension() const { return n_; }
  double operator()(const BallPoint& z) const;
  double log_value(const BallPoint& z) const;

  Weight pow(double e) const;
  Weight scaled(double c) const;
  Weight times_defect(double e) const;  // u (1-|z|^2)^e

  double edge_exponent() const { return edge_; }
  const std::vector<Singular>& singular_points() const { return sing_; }
  bool is_radial() const { return sing_.empty() && !custom_; }
  // behaviour of u near the anchor, for tent-adapted grids
  SingularityHint hint(const CVec& anchor) const;

  const std::string& kind() const { return kind_; }
  const std::string& provenance() const { return provenance_; }
  const nlohmann::json& descriptor() const { return desc_; }

  static Weight from_json(const nlohmann::json& j, int n);
  // same function, new descriptor
  Weight labelled(std::string kind, std::string provenance, nlohmann::json descriptor) const;

 private:
  Weight() = default;
  Weight with_meta(std::string kind, std::string prov, nlohmann::json desc) const;

  int n_ = 1;
  double log_scale_ = 0.0;
  double edge_ = 0.0;
  std::vector<Singular> sing_;
  std::function<double(const BallPoint&)> custom_;
  double custom_power_ = 0.0;
  std::string kind_ = "constant";
  std::string provenance_ = "1";
  nlohmann::json desc_;
};

// sigma = u^{-p'/p}
Weight dual_weight(const Weight& u, double p);
// u (1-|z|^2)^{pa}
Weight tilde_weight(const Weight& u, double p, double a);
// psi = u^{-p'/p} (1-|z|^2)^{-(p'b + pa)/p},  nu = psi^{-p/p'}
std::pair<Weight, Weight> psi_nu_transform(const Weight& u, double p, double a, double b);
Weight sharp_weight(double delta, int n, double b);

double conjugate_exponent(double p);

}  // namespace bergman
