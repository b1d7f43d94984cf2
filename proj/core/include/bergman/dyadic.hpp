#pragma once

#include "bergman/geometry.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/rng.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace bergman {

// ---- boundary cube systems on the sphere -------------------------------

class BoundaryCubeSystem {
 public:
  virtual ~BoundaryCubeSystem() = default;

  virtual int dimension() const = 0;
  virtual std::string kind() const = 0;
  double calibre() const { return delta_; }
  int levels() const { return levels_; }  // finest level index L; levels 0..L exist

  virtual std::size_t cell_count(int level) const = 0;
  // xi is a unit vector
  virtual std::size_t cell_of(const CVec& xi, int level) const = 0;
  virtual CVec center(int level, std::size_t cell) const = 0;
  // smallest rho from xi to a center of a cell other than `own` at `level`
  virtual double foreign_min_rho(const CVec& xi, int level, std::size_t own) const;
  virtual nlohmann::json to_json() const = 0;

  std::size_t parent_cell(int level, std::size_t cell) const;  // level >= 1

 protected:
  BoundaryCubeSystem(double delta, int levels) : delta_(delta), levels_(levels) {}
  double delta_;
  int levels_;
};

using SystemPtr = std::shared_ptr<const BoundaryCubeSystem>;

// n = 1: arcs of an m-adic system shifted by (-1)^k shift/(m+1) at level k.
class ArcSystem final : public BoundaryCubeSystem {
 public:
  ArcSystem(int m, int shift, int levels);
  int dimension() const override { return 1; }
  std::string kind() const override { return "arcs"; }
  std::size_t cell_count(int level) const override;
  std::size_t cell_of(const CVec& xi, int level) const override;
  CVec center(int level, std::size_t cell) const override;
  double foreign_min_rho(const CVec& xi, int level, std::size_t own) const override;
  nlohmann::json to_json() const override;

  int base() const { return m_; }
  int shift() const { return shift_; }
  // start angle of the arc, in units of full turns in [0,1)
  double arc_start(int level, std::size_t cell) const;
  double arc_length(int level) const;  // in turns
  std::size_t cell_of_turn(double x, int level) const;

 private:
  int m_, shift_;
  std::vector<std::uint64_t> pow_;  // m^k
  std::uint64_t fine_;              // (m+1) m^L
};

// n = 2: hierarchical nearest-center cells on S^3 built by k-medoids
// splitting of a deterministic sample, optionally rotated.
class NetSystem final : public BoundaryCubeSystem {
 public:
  struct Level {
    std::vector<CVec> centers;          // unrotated frame
    std::vector<std::size_t> parent;    // index at previous level
    std::vector<std::vector<std::size_t>> children;  // indices at next level
  };

  static std::shared_ptr<NetSystem> build(int levels, int branching, std::uint64_t seed, int samples_per_cell = 64);
  static std::shared_ptr<NetSystem> from_levels(std::vector<Level> levels, double delta, std::array<cplx, 4> rotation);
  std::shared_ptr<NetSystem> rotated(const std::array<cplx, 4>& u) const;

  int dimension() const override { return 2; }
  std::string kind() const override { return "net"; }
  std::size_t cell_count(int level) const override { return levels_data_[level].centers.size(); }
  std::size_t cell_of(const CVec& xi, int level) const override;
  CVec center(int level, std::size_t cell) const override;
  nlohmann::json to_json() const override;
  const std::array<cplx, 4>& rotation() const { return rot_; }

  // descend one level from `cell` at `level` (unrotated coordinates)
  std::size_t child_of(const CVec& xi_local, int level, std::size_t cell) const;
  CVec to_local(const CVec& xi) const;

 private:
  NetSystem(double delta, int levels) : BoundaryCubeSystem(delta, levels) {}
  std::vector<Level> levels_data_;
  std::array<cplx, 4> rot_{1.0, 0.0, 0.0, 1.0};  // row-major U; centers reported as U c
};

std::vector<SystemPtr> build_boundary_systems(int n, double delta, int levels, std::uint64_t seed = 1,
                                              int count = 0);

// Random unitary 2x2 (Haar) from a seed, row-major.
std::array<cplx, 4> random_unitary2(std::uint64_t seed);

struct SandwichConstants {
  double c1 = 0.0;  // D(z, c1 delta^k) inside the cell
  double C2 = 0.0;  // cell inside D(z, C2 delta^k)
  std::size_t samples = 0;
  std::size_t partition_violations = 0;
  std::size_t nesting_violations = 0;
};

SandwichConstants measure_sandwich(const BoundaryCubeSystem& sys, std::size_t samples, std::uint64_t seed);

// Uniform random point on the unit sphere of C^n.
CVec random_sphere_point(int n, Rng& rng);

struct CubeHit {
  int system = -1;
  int level = -1;
  std::size_t cell = 0;
  double scale_ratio = 0.0;  // delta^level / r
};

// Deepest cube (over all systems) containing the boundary disc D(zeta, r).
CubeHit find_containing_cube(const std::vector<SystemPtr>& systems, const CVec& zeta, double r);

// ---- Bergman trees ------------------------------------------------------

struct TreeNode {
  int id = 0;
  int generation = 0;
  std::size_t cell = 0;
  int parent = -1;
  std::vector<int> children;
  BallPoint center;
};

class BergmanTree {
 public:
  static BergmanTree build(SystemPtr system, double theta, double lambda, int max_depth);

  int dimension() const { return system_->dimension(); }
  double theta() const { return theta_; }
  double lambda() const { return lambda_; }
  int max_depth() const { return max_depth_; }
  const BoundaryCubeSystem& system() const { return *system_; }
  const SystemPtr& system_ptr() const { return system_; }

  std::size_t size() const { return nodes_.size(); }
  const TreeNode& root() const { return nodes_.front(); }
  const TreeNode& node(int id) const { return nodes_[id]; }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  int node_id(int generation, std::size_t cell) const { return static_cast<int>(offset_[generation] + cell); }
  std::size_t level_size(int generation) const { return offset_[generation + 1] - offset_[generation]; }

  // shell index N with r_N <= |z| < r_{N+1}
  int shell_of(const BallPoint& z) const;
  double outer_radius() const;  // r_{(max_depth+1) theta}

  const TreeNode& locate(const BallPoint& z) const;
  int locate_id(const BallPoint& z) const;  // -1 beyond the constructed depth
  bool kube_contains(int alpha, const BallPoint& z) const;
  bool is_descendant(int beta, int alpha) const;  // beta >= alpha
  bool dyadic_tent_contains(int alpha, const BallPoint& z) const;
  int ancestor_at(int id, int generation) const;

  nlohmann::json to_json() const;
  static BergmanTree from_json(const nlohmann::json& j);

 private:
  SystemPtr system_;
  double theta_ = kDefaultTheta, lambda_ = 0.0;
  int max_depth_ = 0;
  std::vector<TreeNode> nodes_;
  std::vector<std::size_t> offset_;
};

// grid node -> tree node id (or -1 beyond depth), fast for product grids
std::vector<int> assign_nodes(const BergmanTree& tree, const QuadratureGrid& grid);

// Per-node sums: kube[id] = sum over grid nodes in K_id of coeff * value;
// tent[id] = sum over the dyadic tent. count arrays hold node counts.
struct DyadicSums {
  std::vector<double> kube, tent;
  std::vector<std::size_t> kube_count, tent_count;
};

DyadicSums dyadic_sums(const BergmanTree& tree, const QuadratureGrid& grid, const std::vector<int>& assignment,
                       const std::vector<double>& values);
// values == 1
DyadicSums dyadic_volumes(const BergmanTree& tree, const QuadratureGrid& grid, const std::vector<int>& assignment);

struct DepthBand {
  int depth = 0;
  double min = 0.0, max = 0.0;
  std::size_t nodes = 0;
};

struct TreeReport {
  std::size_t sampled_points = 0;
  std::size_t partition_violations = 0;
  int max_children = 0;
  int min_children_interior = 0;
  int child_bound = 0;  // ceil(e^{2 n theta})
  double hat_ratio_min = 0.0, hat_ratio_max = 0.0;
  std::vector<DepthBand> hat_ratio_by_depth;
  double volume_band_min = 0.0, volume_band_max = 0.0;
  std::vector<DepthBand> volume_band_by_depth;
  std::size_t under_resolved_kubes = 0;
  SandwichConstants sandwich;
  double projection_constant = 0.0;
  nlohmann::json to_json() const;
};

TreeReport verify_tree(const BergmanTree& tree, const QuadratureGrid& grid, std::size_t samples = 10000,
                       std::uint64_t seed = 7);

int child_count_bound(int n, double theta);

// ---- covering forest ----------------------------------------------------

struct ForestOptions {
  std::uint64_t seed = 11;
  int max_systems = 24;
  std::size_t test_apexes = 10000;
  double target_ratio = 100.0;  // acceptable v_t(K^)/v_t(T_z)
  double volume_exponent = 0.0; // t used for volume comparisons
  int samples_per_cell = 64;
};

struct CoverHit {
  int tree = -1;
  int node = -1;
  int generation = -1;
};

class CoveringForest {
 public:
  const std::vector<BergmanTree>& trees() const { return trees_; }
  std::size_t size() const { return trees_.size(); }
  int dimension() const { return trees_.front().dimension(); }
  int max_depth() const { return trees_.front().max_depth(); }
  double theta() const { return trees_.front().theta(); }
  double measured_ratio() const { return ratio_; }
  std::size_t build_failures() const { return failures_; }

  // deepest dyadic tent, over all trees, containing T_apex
  CoverHit lookup(const BallPoint& apex) const;
  // v_t(K^_alpha) for the configured volume exponent
  double tent_volume(int tree, int node) const { return volumes_[tree][node]; }

  static CoveringForest build(int n, double theta, int max_depth, const ForestOptions& opt = {});
  static CoveringForest from_trees(std::vector<BergmanTree> trees, double volume_exponent);
  nlohmann::json metadata() const;

 private:
  bool base_in_cell(const BergmanTree& tree, const BallPoint& apex, int level, std::size_t& cell) const;
  int deepest_for_tree(const BergmanTree& tree, const BallPoint& apex) const;
  void compute_volumes(double t);
  static std::vector<double> tree_volumes(const BergmanTree& tree, double t);
  std::vector<BergmanTree> trees_;
  std::vector<std::vector<double>> volumes_;
  double ratio_ = 0.0;
  double volume_t_ = 0.0;
  std::size_t failures_ = 0;
  std::size_t test_count_ = 0;
  double target_ = 0.0;
  std::uint64_t seed_ = 0;
};

CoverHit covering_lookup(const CoveringForest& forest, const BallPoint& apex);

// v_t(T_apex) from a tent-adapted grid.
double tent_volume_exact(const BallPoint& apex, double t);

// Random apex with 1-|z| log-uniform in [min_gap, 1) and uniform direction.
BallPoint random_apex(int n, double min_gap, Rng& rng);

// Uniform sample of T_apex cut at radius r_cut, by rejection from a local box.
std::vector<BallPoint> sample_tent(const BallPoint& apex, std::size_t count, double r_cut, Rng& rng);

}  // namespace bergman
