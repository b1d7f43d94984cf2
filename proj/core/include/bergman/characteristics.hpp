#pragma once

#include "bergman/dyadic.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace bergman {

struct TentAverage {
  double integral = 0.0;  // int_T w dv_t
  double volume = 0.0;    // v_t(T)
  std::size_t nodes = 0;
  bool under_resolved = false;
  double average() const { return integral / volume; }
};

// Integrates weights over Carleson tents against dv_t.
class TentAverager {
 public:
  virtual ~TentAverager() = default;
  virtual TentAverage integrate(const Weight& w, double t, const BallPoint& apex) const = 0;
  virtual std::string describe() const = 0;
};

// Tent-adapted Gauss-Jacobi grids, with the weight's singularity hints.
class AdaptedTentAverager final : public TentAverager {
 public:
  explicit AdaptedTentAverager(TentGridOptions opt = {}) : opt_(opt) {}
  TentAverage integrate(const Weight& w, double t, const BallPoint& apex) const override;
  std::string describe() const override;
  const TentGridOptions& options() const { return opt_; }

 private:
  TentGridOptions opt_;
};

// Node filtering on global product grids (one per (n, t), built on demand).
// Nodes with 1-|w| < truncate_gap are dropped, which turns the tail into a
// truncation study for possibly divergent integrals.
class GlobalGridAverager final : public TentAverager {
 public:
  explicit GlobalGridAverager(Resolution res, double truncate_gap = 0.0, int n = 1);
  TentAverage integrate(const Weight& w, double t, const BallPoint& apex) const override;
  std::string describe() const override;
  const QuadratureGrid& grid(double t) const;

 private:
  Resolution res_;
  double cut_;
  int n_;
  mutable std::map<double, std::shared_ptr<QuadratureGrid>> grids_;
  mutable std::mutex mu_;
};

struct CharacteristicRow {
  BallPoint apex;
  double sigma_avg = 0.0;    // <sigma>^{dv_b}
  double u_avg = 0.0;        // <u>^{dv_{pa+b}}
  double value = 0.0;        // sigma_avg^{p-1} u_avg
  double u_tilde_avg = 0.0;  // <u~>^{dv_b}
  double volume_b = 0.0;     // v_b(T)
  double value_alt = 0.0;    // sigma_avg^{p-1} u_tilde_avg v_b^{-pa/(n+1+b)}
  std::size_t nodes = 0;
  bool under_resolved = false;
};

struct CharacteristicReport {
  double value = 0.0;      // sup of the dv_{pa+b}-average form
  double value_alt = 0.0;  // sup of the u~-volume-power form
  BallPoint attaining_apex;
  std::size_t attaining_index = 0;
  std::vector<CharacteristicRow> rows;
  std::size_t excluded = 0;  // under-resolved rows left out of the suprema
  double form_ratio_min = 0.0, form_ratio_max = 0.0;  // value_alt / value per row
  std::string apex_set, grid;
  nlohmann::json to_json(bool with_rows = false) const;
};

// [u, sigma]_{D_{p,a,b}} over the supplied apexes
CharacteristicReport characteristic_D(const Weight& u, const Weight& sigma, double p, double a, double b,
                                      const std::vector<BallPoint>& apexes, const TentAverager& avg,
                                      const std::string& apex_set = "custom");
// [u, u^{-p'/p}]_{D_{p,0,b}}
CharacteristicReport characteristic_B(const Weight& u, double p, double b, const std::vector<BallPoint>& apexes,
                                      const TentAverager& avg, const std::string& apex_set = "custom");
// [u, u^{-p'/p}]_{D_{p,n+1+b,b}}
CharacteristicReport characteristic_C(const Weight& u, double p, double b, const std::vector<BallPoint>& apexes,
                                      const TentAverager& avg, const std::string& apex_set = "custom");

struct ApexSetOptions {
  int min_depth = 0;
  int max_depth = 12;
  int directions = 16;  // quasi-uniform boundary directions
  bool singular_rays = true;
  double theta = kDefaultTheta;
  std::uint64_t seed = 3;
};

// Rays toward the singular points of u plus quasi-uniform directions, at radii r_{N theta}.
std::vector<BallPoint> default_apex_set(int n, const Weight& u, const ApexSetOptions& opt);
std::string describe(const ApexSetOptions& opt);

// ---- dyadic form -------------------------------------------------------

struct DyadicRow {
  int node = 0;
  int generation = 0;
  double value = 0.0;    // <sigma>^{p-1} <u>^{dv_{pa+b}} over K^
  double tent_lower = 0.0;  // <u~>^{dv_b} <sigma>^{p-1} v_b(K^)^{-pa/(n+1+b)}
  double holder = 0.0;   // v_b(K^)^{1+a/(n+1+b)} / (sigma_b(K)^{1/p'} u~_b(K)^{1/p})
  std::size_t nodes = 0;
  bool under_resolved = false;
};

struct DyadicReport {
  double value = 0.0;
  int attaining_node = 0;
  double tent_lower_min = 0.0;
  double holder_max = 0.0;
  std::size_t excluded = 0;
  std::vector<DyadicRow> rows;
  nlohmann::json to_json(bool with_rows = false) const;
};

// Suprema over dyadic tents of the tree, nodes of generation <= max_generation.
DyadicReport characteristic_dyadic(const Weight& u, const Weight& sigma, double p, double a, double b,
                                   const BergmanTree& tree, const QuadratureGrid& grid_b,
                                   const QuadratureGrid& grid_pab, int max_generation);

}  // namespace bergman
