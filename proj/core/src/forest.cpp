#include "bergman/dyadic.hpp"
#include "bergman/error.hpp"

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bergman {

namespace {

// v_t({|w| > r}) for the normalized measure: regularized incomplete beta.
double outer_mass(int n, double t, double r) {
  if (r <= 0.0) return 1.0;
  return boost::math::ibeta(t + 1.0, static_cast<double>(n), 1.0 - r * r);
}

// Directions w/|w| of points of T_apex, sampled on the boundary of the
// shadow region (n = 2) with the tent height inflated by `inflate`.
std::vector<CVec> shadow_samples(const BallPoint& apex, double inflate) {
  const double h = std::min(1.0, (1.0 - apex.norm()) * inflate);
  const BoundaryPoint zeta(apex.vec());
  const double phimax = std::asin(h);
  std::vector<CVec> out;
  const int nphi = 13, ns = 6, nchi = 16;
  for (int i = 0; i < nphi; ++i) {
    const double phi = -phimax + 2.0 * phimax * i / (nphi - 1);
    const double sp = std::sin(phi);
    const double smin = std::max(0.0, std::cos(phi) - std::sqrt(std::max(0.0, h * h - sp * sp)));
    for (int j = 0; j < ns; ++j) {
      const double s = smin + (1.0 - smin) * j / (ns - 1);
      const cplx a = std::polar(s, phi);
      const double q = std::sqrt(std::max(0.0, 1.0 - s * s));
      const int nc = q > 0.0 ? nchi : 1;
      for (int l = 0; l < nc; ++l)
        out.push_back(rotate_to(zeta, CVec{a, std::polar(q, 2.0 * std::numbers::pi * l / nchi)}));
    }
  }
  return out;
}

}  // namespace

BallPoint random_apex(int n, double min_gap, Rng& rng) {
  const CVec dir = random_sphere_point(n, rng);
  const double gap = std::exp(std::log(min_gap) * uniform01(rng));
  if (gap >= 1.0) return BallPoint::origin(n);
  return BallPoint::with_defect(dir * (1.0 - gap), gap * (2.0 - gap));
}

std::vector<BallPoint> sample_tent(const BallPoint& apex, std::size_t count, double r_cut, Rng& rng) {
  const int n = apex.dim();
  const double r0 = apex.norm();
  std::vector<BallPoint> out;
  out.reserve(count);
  if (r0 == 0.0) {
    while (out.size() < count) {
      CVec v = random_sphere_point(n, rng) * (r_cut * std::pow(uniform01(rng), 1.0 / (2 * n)));
      out.push_back(BallPoint(v));
    }
    return out;
  }
  const double h = 1.0 - r0;
  const BoundaryPoint zeta(apex.vec());
  const TentSpec tent{apex};
  const double bside = std::sqrt(std::min(1.0, 2.0 * h));
  std::size_t tries = 0;
  while (out.size() < count) {
    if (++tries > 1000 * count + 100000) throw EvaluationError("sample_tent: rejection sampling stalled");
    // a in the disc |1 - a| < h, b in a disc of radius sqrt(2h)
    const double ra = h * std::sqrt(uniform01(rng)), pa = 2.0 * std::numbers::pi * uniform01(rng);
    const cplx a = 1.0 - std::polar(ra, pa);
    CVec loc{a};
    if (n == 2) {
      const double rb = bside * std::sqrt(uniform01(rng)), pb = 2.0 * std::numbers::pi * uniform01(rng);
      loc = CVec{a, std::polar(rb, pb)};
    }
    const double nn = loc.norm2();
    if (!(nn < r_cut * r_cut) || !(nn < 1.0 - kBoundaryMargin)) continue;
    BallPoint w(rotate_to(zeta, loc));
    if (tent_contains(tent, w)) out.push_back(w);
  }
  return out;
}

bool CoveringForest::base_in_cell(const BergmanTree& tree, const BallPoint& apex, int level, std::size_t& cell) const {
  // n = 1 only: the shadow of T_z is the open arc of half-width asin(1-|z|)
  const auto& arc = static_cast<const ArcSystem&>(tree.system());
  const double h = 1.0 - apex.norm();
  const double w = std::asin(std::min(1.0, h)) / (2.0 * std::numbers::pi);
  double c = std::arg(apex[0]) / (2.0 * std::numbers::pi);
  double lo = c - w;
  lo -= std::floor(lo);
  cell = arc.cell_of_turn(lo, level);
  double d = lo - arc.arc_start(level, cell);
  d -= std::floor(d);
  return d + 2.0 * w <= arc.arc_length(level);
}

int CoveringForest::deepest_for_tree(const BergmanTree& tree, const BallPoint& apex) const {
  if (apex.norm() == 0.0) return 0;
  const int top = std::min(tree.shell_of(apex), tree.max_depth());
  if (tree.dimension() == 1) {
    for (int N = top; N > 0; --N) {
      std::size_t cell = 0;
      if (base_in_cell(tree, apex, N, cell)) return tree.node_id(N, cell);
    }
    return 0;
  }
  const auto pts = shadow_samples(apex, 1.1);
  std::vector<std::size_t> cells(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) cells[i] = tree.system().cell_of(pts[i], top);
  for (int N = top; N > 0; --N) {
    if (std::all_of(cells.begin(), cells.end(), [&](std::size_t c) { return c == cells.front(); }))
      return tree.node_id(N, cells.front());
    for (auto& c : cells) c = tree.system().parent_cell(N, c);
  }
  return 0;
}

CoverHit CoveringForest::lookup(const BallPoint& apex) const {
  if (apex.dim() != dimension()) throw ParameterError("covering_lookup: dimension mismatch");
  CoverHit best;
  double best_vol = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < trees_.size(); ++s) {
    const int id = deepest_for_tree(trees_[s], apex);
    const double v = volumes_[s][id];
    if (v < best_vol) {
      best_vol = v;
      best = {static_cast<int>(s), id, trees_[s].node(id).generation};
    }
  }
  if (best.tree < 0) throw NoCoverError("covering_lookup: no tree covers the tent at " + to_string(apex.vec()));
  return best;
}

CoverHit covering_lookup(const CoveringForest& forest, const BallPoint& apex) { return forest.lookup(apex); }

std::vector<double> CoveringForest::tree_volumes(const BergmanTree& tree, double t) {
  const int n = tree.dimension();
  std::vector<double> frac(tree.size(), 0.0);
  if (n == 1) {
    for (const auto& nd : tree.nodes())
      frac[nd.id] = std::pow(1.0 / static_cast<const ArcSystem&>(tree.system()).base(), nd.generation);
  } else {
    // cell measures of the nets, by Monte Carlo on a fixed sample
    constexpr std::size_t kSamples = 100000;
    Rng rng(0x5eed);
    const int D = tree.max_depth();
    for (std::size_t s = 0; s < kSamples; ++s) {
      std::size_t c = tree.system().cell_of(random_sphere_point(2, rng), D);
      for (int N = D; N >= 0; --N) {
        frac[tree.node_id(N, c)] += 1.0 / kSamples;
        if (N > 0) c = tree.system().parent_cell(N, c);
      }
    }
  }
  std::vector<double> vol(tree.size());
  for (const auto& nd : tree.nodes())
    vol[nd.id] = frac[nd.id] * outer_mass(n, t, generation_radius(nd.generation, tree.theta()));
  return vol;
}

void CoveringForest::compute_volumes(double t) {
  volume_t_ = t;
  volumes_.clear();
  for (const auto& tree : trees_) volumes_.push_back(tree_volumes(tree, t));
}

CoveringForest CoveringForest::from_trees(std::vector<BergmanTree> trees, double volume_exponent) {
  if (trees.empty()) throw ParameterError("CoveringForest: no trees");
  CoveringForest f;
  f.trees_ = std::move(trees);
  f.compute_volumes(volume_exponent);
  return f;
}

CoveringForest CoveringForest::build(int n, double theta, int max_depth, const ForestOptions& opt) {
  const double delta = std::exp(-2.0 * theta);
  auto systems = build_boundary_systems(n, delta, max_depth, opt.seed, n == 1 ? 0 : 1);
  std::vector<BergmanTree> trees;
  auto make_tree = [&](const SystemPtr& s) {
    const double lambda = measure_sandwich(*s, 500, opt.seed + 17).c1;
    return BergmanTree::build(s, theta, lambda, max_depth);
  };
  for (const auto& s : systems) trees.push_back(make_tree(s));
  CoveringForest f = from_trees(std::move(trees), opt.volume_exponent);

  // test apexes within the depth the trees can resolve
  Rng rng(opt.seed);
  const double min_gap = generation_gap(max_depth, theta);
  std::vector<BallPoint> apexes;
  std::vector<double> tvol;
  for (std::size_t i = 0; i < opt.test_apexes; ++i) {
    apexes.push_back(random_apex(n, min_gap, rng));
    tvol.push_back(tent_volume_exact(apexes.back(), opt.volume_exponent));
  }
  // best volume ratio per apex over the trees so far
  std::vector<double> best(apexes.size(), std::numeric_limits<double>::infinity());
  auto absorb = [&](std::size_t s) {
    for (std::size_t i = 0; i < apexes.size(); ++i)
      best[i] = std::min(best[i], f.volumes_[s][f.deepest_for_tree(f.trees_[s], apexes[i])] / tvol[i]);
  };
  auto failures = [&] {
    return static_cast<std::size_t>(std::count_if(best.begin(), best.end(), [&](double r) { return r > opt.target_ratio; }));
  };
  for (std::size_t s = 0; s < f.trees_.size(); ++s) absorb(s);
  std::size_t bad = failures();
  if (n == 2) {
    auto base = std::static_pointer_cast<const NetSystem>(f.trees_.front().system_ptr());
    int s = 1;
    while (bad > 0 && static_cast<int>(f.trees_.size()) < opt.max_systems) {
      auto rot = base->rotated(random_unitary2(opt.seed * 1000003ULL + s++));
      f.trees_.push_back(make_tree(rot));
      f.volumes_.push_back(tree_volumes(f.trees_.back(), opt.volume_exponent));
      absorb(f.trees_.size() - 1);
      bad = failures();
    }
  }
  const double worst = *std::max_element(best.begin(), best.end());
  f.ratio_ = worst;
  f.failures_ = bad;
  f.test_count_ = apexes.size();
  f.target_ = opt.target_ratio;
  f.seed_ = opt.seed;
  return f;
}

double tent_volume_exact(const BallPoint& apex, double t) {
  if (apex.norm() == 0.0) return 1.0;
  const int n = apex.dim();
  // rotation invariant: place the apex on the first axis
  BallPoint a = BallPoint::with_defect(CVec::unit(n, 0) * apex.norm(), apex.defect());
  TentGridOptions o;
  if (n == 2) o = {12, 8, 4, 6};
  const auto g = build_tent_grid(n, t, a, o);
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) s += g.coeff(k);
  return s;
}

nlohmann::json CoveringForest::metadata() const {
  nlohmann::json trees = nlohmann::json::array();
  for (const auto& t : trees_) trees.push_back({{"system", t.system().kind()}, {"lambda", t.lambda()}, {"nodes", t.size()}});
  return {{"dimension", dimension()},      {"theta", theta()},           {"max_depth", max_depth()},
          {"M", trees_.size()},            {"measured_ratio", ratio_},   {"target_ratio", target_},
          {"test_apexes", test_count_},    {"failures", failures_},      {"volume_exponent", volume_t_},
          {"seed", seed_},                 {"trees", trees}};
}

}  // namespace bergman
