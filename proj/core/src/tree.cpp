#include "bergman/dyadic.hpp"
#include "bergman/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bergman {

int child_count_bound(int n, double theta) {
  // e^{2 n theta} is an integer for the default theta; guard against it rounding up
  return static_cast<int>(std::ceil(std::exp(2.0 * n * theta) - 1e-9));
}

BergmanTree BergmanTree::build(SystemPtr system, double theta, double lambda, int max_depth) {
  if (!system) throw ParameterError("build_tree: null boundary system");
  if (!(theta > 0.0)) throw ParameterError("build_tree: theta must be positive");
  const double want = std::exp(-2.0 * theta);
  if (std::abs(system->calibre() - want) > 1e-9)
    throw ParameterError("build_tree: calibre " + std::to_string(system->calibre()) + " differs from e^{-2 theta} = " +
                         std::to_string(want));
  if (max_depth < 0 || max_depth > system->levels())
    throw ParameterError("build_tree: max_depth exceeds the levels of the boundary system");

  BergmanTree t;
  t.system_ = std::move(system);
  t.theta_ = theta;
  t.lambda_ = lambda;
  t.max_depth_ = max_depth;
  t.offset_.assign(max_depth + 2, 0);
  for (int N = 0; N <= max_depth; ++N) t.offset_[N + 1] = t.offset_[N] + t.system_->cell_count(N);
  t.nodes_.resize(t.offset_.back());
  for (int N = 0; N <= max_depth; ++N) {
    const double rc = std::tanh((N + 0.5) * theta);
    for (std::size_t i = 0; i < t.system_->cell_count(N); ++i) {
      TreeNode& nd = t.nodes_[t.offset_[N] + i];
      nd.id = static_cast<int>(t.offset_[N] + i);
      nd.generation = N;
      nd.cell = i;
      const CVec dir = t.system_->center(N, i);
      nd.center = radial_point(dir, rc);
      if (N > 0) {
        // child rule: the projection of the center lands in the parent's cell
        nd.parent = t.node_id(N - 1, t.system_->cell_of(dir, N - 1));
        t.nodes_[nd.parent].children.push_back(nd.id);
      }
    }
  }
  return t;
}

double BergmanTree::outer_radius() const { return generation_radius(max_depth_ + 1, theta_); }

int BergmanTree::shell_of(const BallPoint& z) const {
  const double r = z.norm();
  if (r == 0.0) return 0;
  const double gap = z.defect() / (1.0 + r);
  int N = static_cast<int>(std::floor(std::atanh(std::min(r, 1.0 - 1e-17)) / theta_));
  N = std::max(N, 0);
  while (N > 0 && gap > generation_gap(N, theta_)) --N;
  while (gap <= generation_gap(N + 1, theta_)) ++N;
  return N;
}

int BergmanTree::locate_id(const BallPoint& z) const {
  if (z.dim() != dimension()) throw ParameterError("locate: dimension mismatch");
  const int N = shell_of(z);
  if (N > max_depth_) return -1;
  if (N == 0) return 0;
  const CVec dir = z.vec() * (1.0 / z.norm());
  return node_id(N, system_->cell_of(dir, N));
}

const TreeNode& BergmanTree::locate(const BallPoint& z) const {
  int id = locate_id(z);
  if (id < 0)
    throw DepthError("locate: point " + to_string(z.vec()) + " lies beyond the constructed depth " +
                     std::to_string(max_depth_));
  return nodes_[id];
}

bool BergmanTree::kube_contains(int alpha, const BallPoint& z) const {
  const TreeNode& a = nodes_[alpha];
  if (shell_of(z) != a.generation) return false;
  if (a.generation == 0) return true;
  return system_->cell_of(z.vec() * (1.0 / z.norm()), a.generation) == a.cell;
}

int BergmanTree::ancestor_at(int id, int generation) const {
  while (nodes_[id].generation > generation) id = nodes_[id].parent;
  return id;
}

bool BergmanTree::is_descendant(int beta, int alpha) const {
  if (nodes_[beta].generation < nodes_[alpha].generation) return false;
  return ancestor_at(beta, nodes_[alpha].generation) == alpha;
}

bool BergmanTree::dyadic_tent_contains(int alpha, const BallPoint& z) const {
  int id = locate_id(z);
  if (id < 0) return false;
  return is_descendant(id, alpha);
}

std::vector<int> assign_nodes(const BergmanTree& tree, const QuadratureGrid& grid) {
  if (grid.dimension() != tree.dimension()) throw ParameterError("assign_nodes: dimension mismatch");
  std::vector<int> out(grid.size(), -1);
  if (!grid.is_product()) {
    for (std::size_t k = 0; k < grid.size(); ++k) out[k] = tree.locate_id(grid.node(k));
    return out;
  }
  const int D = tree.max_depth();
  const std::size_t nd = grid.direction_count();
  std::vector<std::vector<std::size_t>> cells(D + 1, std::vector<std::size_t>(nd, 0));
  for (int N = 1; N <= D; ++N)
    for (std::size_t id = 0; id < nd; ++id) cells[N][id] = tree.system().cell_of(grid.direction(id), N);
  for (std::size_t ir = 0; ir < grid.radial_count(); ++ir) {
    BallPoint probe = radial_point(grid.direction(0), grid.radius(ir));
    probe = BallPoint::with_defect(probe.vec(), grid.gap(ir) * (2.0 - grid.gap(ir)));
    const int N = tree.shell_of(probe);
    if (N > D) continue;
    for (std::size_t id = 0; id < nd; ++id) out[ir * nd + id] = tree.node_id(N, cells[N][id]);
  }
  return out;
}

DyadicSums dyadic_sums(const BergmanTree& tree, const QuadratureGrid& grid, const std::vector<int>& assignment,
                       const std::vector<double>& values) {
  if (assignment.size() != grid.size() || values.size() != grid.size())
    throw ParameterError("dyadic_sums: size mismatch");
  DyadicSums s;
  s.kube.assign(tree.size(), 0.0);
  s.kube_count.assign(tree.size(), 0);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    int id = assignment[k];
    if (id < 0) continue;
    s.kube[id] += grid.coeff(k) * values[k];
    ++s.kube_count[id];
  }
  s.tent = s.kube;
  s.tent_count = s.kube_count;
  for (std::size_t id = tree.size(); id-- > 1;) {
    int p = tree.node(static_cast<int>(id)).parent;
    s.tent[p] += s.tent[id];
    s.tent_count[p] += s.tent_count[id];
  }
  return s;
}

DyadicSums dyadic_volumes(const BergmanTree& tree, const QuadratureGrid& grid, const std::vector<int>& assignment) {
  return dyadic_sums(tree, grid, assignment, std::vector<double>(grid.size(), 1.0));
}

namespace {

// Membership by explicit geometry, independent of locate(): shell bounds from
// generation radii and, for arcs, the arc interval in turns.
bool kube_contains_explicit(const BergmanTree& tree, const TreeNode& nd, const BallPoint& z) {
  const double r = z.norm();
  const double lo = generation_radius(nd.generation, tree.theta());
  const double hi = generation_radius(nd.generation + 1, tree.theta());
  if (!(r >= lo && r < hi)) return false;
  if (nd.generation == 0) return true;
  const CVec dir = z.vec() * (1.0 / r);
  if (tree.system().kind() == "arcs") {
    const auto& arc = static_cast<const ArcSystem&>(tree.system());
    double x = std::arg(dir[0]) / (2.0 * std::numbers::pi);
    x -= std::floor(x);
    double d = x - arc.arc_start(nd.generation, nd.cell);
    d -= std::floor(d);
    return d < arc.arc_length(nd.generation);
  }
  return tree.system().cell_of(dir, nd.generation) == nd.cell;
}

void band_update(std::vector<DepthBand>& bands, int depth, double v) {
  DepthBand& b = bands[depth];
  if (b.nodes == 0) {
    b.min = b.max = v;
  } else {
    b.min = std::min(b.min, v);
    b.max = std::max(b.max, v);
  }
  b.depth = depth;
  ++b.nodes;
}

}  // namespace

TreeReport verify_tree(const BergmanTree& tree, const QuadratureGrid& grid, std::size_t samples, std::uint64_t seed) {
  TreeReport rep;
  const int n = tree.dimension();
  const int D = tree.max_depth();
  const double theta = tree.theta();
  rep.child_bound = child_count_bound(n, theta);
  rep.sampled_points = samples;

  Rng rng(seed);
  const double min_gap = generation_gap(D + 1, theta);
  for (std::size_t s = 0; s < samples; ++s) {
    CVec dir = random_sphere_point(n, rng);
    double gap = std::exp(std::log(min_gap) * uniform01(rng));
    gap = std::max(gap, min_gap * (1.0 + 1e-9));
    double r = 1.0 - gap;
    BallPoint z = BallPoint::with_defect(dir * r, gap * (2.0 - gap));
    int hits = 0, hit_id = -1;
    for (const TreeNode& nd : tree.nodes())
      if (kube_contains_explicit(tree, nd, z)) {
        ++hits;
        hit_id = nd.id;
      }
    if (hits != 1 || tree.locate_id(z) != hit_id) ++rep.partition_violations;
  }

  rep.min_children_interior = std::numeric_limits<int>::max();
  for (const TreeNode& nd : tree.nodes()) {
    rep.max_children = std::max(rep.max_children, static_cast<int>(nd.children.size()));
    if (nd.generation < D) rep.min_children_interior = std::min(rep.min_children_interior, static_cast<int>(nd.children.size()));
  }
  if (D == 0) rep.min_children_interior = 0;

  const auto assignment = assign_nodes(tree, grid);
  const DyadicSums vol = dyadic_volumes(tree, grid, assignment);
  const double t = grid.exponent();
  rep.hat_ratio_by_depth.assign(D + 1, {});
  rep.volume_band_by_depth.assign(D + 1, {});
  bool first = true;
  for (const TreeNode& nd : tree.nodes()) {
    if (vol.kube_count[nd.id] == 0) {
      ++rep.under_resolved_kubes;
      continue;
    }
    const double ratio = vol.tent[nd.id] / vol.kube[nd.id];
    const double band = vol.kube[nd.id] * std::exp(2.0 * nd.generation * theta * (n + 1 + t));
    band_update(rep.hat_ratio_by_depth, nd.generation, ratio);
    band_update(rep.volume_band_by_depth, nd.generation, band);
    if (first) {
      rep.hat_ratio_min = rep.hat_ratio_max = ratio;
      rep.volume_band_min = rep.volume_band_max = band;
      first = false;
    }
    rep.hat_ratio_min = std::min(rep.hat_ratio_min, ratio);
    rep.hat_ratio_max = std::max(rep.hat_ratio_max, ratio);
    rep.volume_band_min = std::min(rep.volume_band_min, band);
    rep.volume_band_max = std::max(rep.volume_band_max, band);
  }

  rep.sandwich = measure_sandwich(tree.system(), std::min<std::size_t>(samples, 2000), seed + 1);

  Rng rng2(seed + 2);
  for (std::size_t s = 0; s < std::min<std::size_t>(samples, 2000); ++s) {
    CVec xi = random_sphere_point(n, rng2);
    for (int k = 1; k <= D; ++k) {
      const double rk = generation_radius(k, theta);
      const CVec zc = tree.system().center(k, tree.system().cell_of(xi, k));
      const double v = std::abs(1.0 - rk * rk * pairing(xi, zc)) / std::exp(-2.0 * k * theta);
      rep.projection_constant = std::max(rep.projection_constant, v);
    }
  }
  return rep;
}

nlohmann::json TreeReport::to_json() const {
  auto bands = [](const std::vector<DepthBand>& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& b : v) a.push_back({{"depth", b.depth}, {"min", b.min}, {"max", b.max}, {"nodes", b.nodes}});
    return a;
  };
  return {{"sampled_points", sampled_points},
          {"partition_violations", partition_violations},
          {"max_children", max_children},
          {"min_children_interior", min_children_interior},
          {"child_bound", child_bound},
          {"hat_ratio_min", hat_ratio_min},
          {"hat_ratio_max", hat_ratio_max},
          {"hat_ratio_by_depth", bands(hat_ratio_by_depth)},
          {"volume_band_min", volume_band_min},
          {"volume_band_max", volume_band_max},
          {"volume_band_by_depth", bands(volume_band_by_depth)},
          {"under_resolved_kubes", under_resolved_kubes},
          {"sandwich_c1", sandwich.c1},
          {"sandwich_C2", sandwich.C2},
          {"sandwich_nesting_violations", sandwich.nesting_violations},
          {"projection_constant", projection_constant}};
}

}  // namespace bergman
