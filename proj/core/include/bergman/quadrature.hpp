#pragma once

#include "bergman/error.hpp"
#include "bergman/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <numbers>
#include <string>
#include <type_traits>
#include <vector>

namespace bergman {

inline constexpr double kDefaultTheta = 0.5 * std::numbers::ln2;
inline constexpr std::size_t kMinRegionNodes = 16;

// Global product grid resolution. Radial panels are the Bergman shells
// [r_{N theta}, r_{(N+1) theta}) in s = -log(1-r), followed by a
// Gauss-Jacobi tail panel that absorbs (1-r)^t exactly.
struct Resolution {
  int radial = 8;     // Gauss-Legendre nodes per shell panel (and in the tail)
  int angular = 1536; // trapezoid nodes per angle
  int latitude = 8;   // Gauss-Legendre nodes in |zeta_2|^2 (n = 2)
  int shells = 30;
  bool tail = true;   // false: the grid covers only |z| < r_shells
  double theta = kDefaultTheta;

  Resolution doubled() const;
  Resolution scaled(int factor) const;
  std::string describe() const;
};

class QuadratureGrid {
 public:
  int dimension() const { return n_; }
  double exponent() const { return t_; }
  std::size_t size() const { return is_product() ? radial_r_.size() * dirs_.size() : nodes_.size(); }

  BallPoint node(std::size_t k) const {
    if (!is_product()) return nodes_[k];
    std::size_t ir = k / dirs_.size(), id = k % dirs_.size();
    return BallPoint::with_defect(dirs_[id] * radial_r_[ir], radial_def_[ir]);
  }
  double coeff(std::size_t k) const {
    if (!is_product()) return coeff_[k];
    return radial_w_[k / dirs_.size()] * dir_w_[k % dirs_.size()];
  }
  const std::string& descriptor() const { return desc_; }

  // product layout accessors (global grids only)
  bool is_product() const { return product_; }
  std::size_t radial_count() const { return radial_r_.size(); }
  std::size_t direction_count() const { return dirs_.size(); }
  double radius(std::size_t ir) const { return radial_r_[ir]; }
  double gap(std::size_t ir) const { return radial_gap_[ir]; }
  double radial_weight(std::size_t ir) const { return radial_w_[ir]; }
  const CVec& direction(std::size_t id) const { return dirs_[id]; }
  double direction_weight(std::size_t id) const { return dir_w_[id]; }
  // n = 1 product grids: angle of direction id in [0, 2 pi)
  double direction_angle(std::size_t id) const { return dir_angle_[id]; }
  int angular_count() const { return angular_; }
  const Resolution& resolution() const { return res_; }

  static QuadratureGrid from_nodes(int n, double t, std::vector<BallPoint> nodes, std::vector<double> coeffs,
                                   std::string descriptor);

 private:
  friend QuadratureGrid build_grid(int, double, const Resolution&);
  int n_ = 1;
  double t_ = 0.0;
  bool product_ = false;
  std::string desc_;
  std::vector<BallPoint> nodes_;
  std::vector<double> coeff_;
  std::vector<double> radial_r_, radial_gap_, radial_def_, radial_w_;
  std::vector<CVec> dirs_;
  std::vector<double> dir_w_, dir_angle_;
  int angular_ = 0;
  Resolution res_;
};

QuadratureGrid build_grid(int n, double t, const Resolution& res = {});

// Default resolution used by experiments for dimension n.
Resolution default_resolution(int n);

struct RegionIntegral {
  double value = 0.0;
  std::string region;
  std::size_t nodes = 0;
  bool under_resolved = false;
  std::string warning;
};

// Cheap necessary conditions used to skip nodes on product grids.
struct Prefilter {
  double max_gap = std::numeric_limits<double>::infinity();  // keep nodes with 1-r < max_gap
  bool angular = false;                                      // n = 1: angle window
  double angle_center = 0.0;
  double angle_halfwidth = std::numbers::pi;
};

Prefilter tent_prefilter(const TentSpec& tent);

namespace detail {
[[noreturn]] void throw_bad_value(const QuadratureGrid& g, std::size_t k, double v);

template <class F>
void for_each_filtered(const QuadratureGrid& g, const Prefilter& pf, F&& fn) {
  if (!g.is_product()) {
    for (std::size_t k = 0; k < g.size(); ++k) fn(k);
    return;
  }
  const std::size_t nd = g.direction_count();
  std::size_t ir0 = 0;
  while (ir0 < g.radial_count() && !(g.gap(ir0) < pf.max_gap)) ++ir0;
  if (pf.angular && g.dimension() == 1 && pf.angle_halfwidth < std::numbers::pi) {
    const int M = g.angular_count();
    const double step = 2.0 * std::numbers::pi / M;
    const long lo = static_cast<long>(std::floor((pf.angle_center - pf.angle_halfwidth) / step - 0.5)) - 1;
    const long hi = static_cast<long>(std::ceil((pf.angle_center + pf.angle_halfwidth) / step - 0.5)) + 1;
    std::vector<std::size_t> ids;
    for (long j = lo; j <= hi; ++j) ids.push_back(static_cast<std::size_t>(((j % M) + M) % M));
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    for (std::size_t ir = ir0; ir < g.radial_count(); ++ir)
      for (std::size_t id : ids) fn(ir * nd + id);
    return;
  }
  for (std::size_t k = ir0 * nd; k < g.size(); ++k) fn(k);
}
}  // namespace detail

// Sum_i coeff_i f(node_i), fixed order. f may return double or cplx.
template <class F>
auto integrate(const QuadratureGrid& g, F&& f) {
  using R = std::decay_t<decltype(f(g.node(0)))>;
  R sum{};
  for (std::size_t k = 0; k < g.size(); ++k) {
    R v = f(g.node(k));
    if constexpr (std::is_same_v<R, double>) {
      if (!std::isfinite(v)) detail::throw_bad_value(g, k, v);
    } else {
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) detail::throw_bad_value(g, k, std::abs(v));
    }
    sum += g.coeff(k) * v;
  }
  return sum;
}

RegionIntegral integrate_region(const QuadratureGrid& g, const std::function<double(const BallPoint&)>& f,
                                const std::function<bool(const BallPoint&)>& membership,
                                const std::string& region = "custom", const Prefilter& pf = {});

RegionIntegral tent_volume(const QuadratureGrid& g, const BallPoint& apex);

// ---- tent-adapted grids -------------------------------------------------

// Expected behaviour of the integrand: f ~ |1 - <w, zeta>|^point * (1-|w|^2)^edge,
// zeta being the anchor of the grid. Coefficients absorb these factors, so a
// grid built with a hint integrates g = f exactly as usual, but accurately.
struct SingularityHint {
  double point = 0.0;
  double edge = 0.0;
};

struct TentGridOptions {
  int radial = 24;   // Gauss-Jacobi nodes in rho per column
  int angular = 16;  // nodes in psi per piece (three pieces)
  int inner_radial = 6;
  int inner_angular = 8;
  TentGridOptions doubled() const;
};

// Grid for T_apex (apex != 0) against dv_t.
QuadratureGrid build_tent_grid(int n, double t, const BallPoint& apex, const TentGridOptions& opt = {},
                               SingularityHint hint = {});

// Grid for the half ball {Re <w, zeta> > 0}.
QuadratureGrid build_half_ball_grid(int n, double t, const BoundaryPoint& zeta, const TentGridOptions& opt = {},
                                    SingularityHint hint = {});

// Whole ball as the two half balls anchored at zeta and -zeta.
QuadratureGrid build_split_ball_grid(int n, double t, const BoundaryPoint& zeta, const TentGridOptions& opt,
                                     SingularityHint hint_plus, SingularityHint hint_minus);

// Unitary U with U e_1 = zeta, applied to v.
CVec rotate_to(const BoundaryPoint& zeta, const CVec& v);

}  // namespace bergman
