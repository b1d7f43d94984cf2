#include "bergman/dyadic.hpp"
#include "bergman/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bergman {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double turn_of(const CVec& xi) {
  double a = std::arg(xi[0]) / kTwoPi;
  if (a < 0.0) a += 1.0;
  if (a >= 1.0) a -= 1.0;
  return a;
}
}  // namespace

double BoundaryCubeSystem::foreign_min_rho(const CVec& xi, int level, std::size_t own) const {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < cell_count(level); ++i)
    if (i != own) best = std::min(best, rho(xi, center(level, i)));
  return best;
}

std::size_t BoundaryCubeSystem::parent_cell(int level, std::size_t cell) const {
  if (level < 1) throw ParameterError("parent_cell: level 0 has no parent");
  return cell_of(center(level, cell), level - 1);
}

// ---- arcs ---------------------------------------------------------------

ArcSystem::ArcSystem(int m, int shift, int levels) : BoundaryCubeSystem(1.0 / m, levels), m_(m), shift_(shift) {
  if (m < 2) throw ParameterError("ArcSystem: base must be >= 2");
  if (shift < 0 || shift > m) throw ParameterError("ArcSystem: shift out of range");
  if (levels < 0 || levels > 14) throw ParameterError("ArcSystem: levels must be in [0, 14]");
  pow_.resize(levels + 1);
  pow_[0] = 1;
  for (int k = 1; k <= levels; ++k) pow_[k] = pow_[k - 1] * m;
  fine_ = static_cast<std::uint64_t>(m + 1) * pow_[levels];
}

std::size_t ArcSystem::cell_count(int level) const { return pow_.at(level); }

std::size_t ArcSystem::cell_of_turn(double x, int level) const {
  if (level < 0 || level > levels_) throw ParameterError("ArcSystem: level out of range");
  x -= std::floor(x);
  auto q = static_cast<std::int64_t>(std::floor(x * static_cast<double>(fine_)));
  q = std::clamp<std::int64_t>(q, 0, static_cast<std::int64_t>(fine_) - 1);
  const std::int64_t qk = q / static_cast<std::int64_t>(pow_[levels_ - level]);
  const std::int64_t s = (level % 2 == 0) ? shift_ : -shift_;
  const std::int64_t v = qk - s;
  const std::int64_t mp1 = m_ + 1;
  std::int64_t j = (v >= 0) ? v / mp1 : -((-v + mp1 - 1) / mp1);
  const auto cnt = static_cast<std::int64_t>(pow_[level]);
  j %= cnt;
  if (j < 0) j += cnt;
  return static_cast<std::size_t>(j);
}

std::size_t ArcSystem::cell_of(const CVec& xi, int level) const { return cell_of_turn(turn_of(xi), level); }

double ArcSystem::arc_length(int level) const { return 1.0 / static_cast<double>(pow_.at(level)); }

double ArcSystem::arc_start(int level, std::size_t cell) const {
  const double s = (level % 2 == 0) ? shift_ : -shift_;
  double x = (static_cast<double>(cell) * (m_ + 1) + s) / ((m_ + 1) * static_cast<double>(pow_.at(level)));
  return x - std::floor(x);
}

CVec ArcSystem::center(int level, std::size_t cell) const {
  double x = arc_start(level, cell) + 0.5 * arc_length(level);
  return CVec{std::polar(1.0, kTwoPi * x)};
}

double ArcSystem::foreign_min_rho(const CVec& xi, int level, std::size_t own) const {
  const std::size_t cnt = cell_count(level);
  if (cnt == 1) return std::numeric_limits<double>::infinity();
  double a = rho(xi, center(level, (own + 1) % cnt));
  double b = rho(xi, center(level, (own + cnt - 1) % cnt));
  return std::min(a, b);
}

nlohmann::json ArcSystem::to_json() const {
  return {{"kind", "arcs"}, {"base", m_}, {"shift", shift_}, {"levels", levels_}};
}

// ---- nets on S^3 --------------------------------------------------------

CVec random_sphere_point(int n, Rng& rng) {
  for (;;) {
    CVec v(n);
    for (int i = 0; i < n; ++i) v[i] = cplx(standard_normal(rng), standard_normal(rng));
    double r = v.norm();
    if (r > 1e-12) return v * (1.0 / r);
  }
}

std::array<cplx, 4> random_unitary2(std::uint64_t seed) {
  Rng rng(seed);
  cplx a(standard_normal(rng), standard_normal(rng)), c(standard_normal(rng), standard_normal(rng));
  cplx b(standard_normal(rng), standard_normal(rng)), d(standard_normal(rng), standard_normal(rng));
  double na = std::sqrt(std::norm(a) + std::norm(c));
  a /= na;
  c /= na;
  cplx proj = std::conj(a) * b + std::conj(c) * d;
  b -= proj * a;
  d -= proj * c;
  double nb = std::sqrt(std::norm(b) + std::norm(d));
  b /= nb;
  d /= nb;
  return {a, b, c, d};  // columns (a,c) and (b,d)
}

namespace {

std::size_t nearest(const CVec& x, const std::vector<CVec>& centers, const std::vector<std::size_t>& ids) {
  std::size_t best = ids.front();
  double bd = std::numeric_limits<double>::infinity();
  for (std::size_t i : ids) {
    double d = rho(x, centers[i]);
    if (d < bd) {
      bd = d;
      best = i;
    }
  }
  return best;
}

CVec normalized_or(const CVec& v, const CVec& fallback) {
  double r = v.norm();
  return r > 1e-14 ? v * (1.0 / r) : fallback;
}

}  // namespace

std::shared_ptr<NetSystem> NetSystem::build(int levels, int branching, std::uint64_t seed, int samples_per_cell) {
  if (levels < 0 || levels > 14) throw ParameterError("NetSystem: levels must be in [0, 14]");
  if (branching < 2) throw ParameterError("NetSystem: branching must be >= 2");
  const double delta = 1.0 / std::sqrt(static_cast<double>(branching));
  auto sys = std::shared_ptr<NetSystem>(new NetSystem(delta, levels));

  double total_d = samples_per_cell * std::pow(static_cast<double>(branching), levels);
  if (total_d > 5e6) throw ParameterError("NetSystem: sample budget too large, reduce levels");
  const auto total = static_cast<std::size_t>(total_d);
  Rng rng(seed);
  std::vector<CVec> pts(total);
  for (auto& p : pts) p = random_sphere_point(2, rng);

  sys->levels_data_.resize(levels + 1);
  Level& l0 = sys->levels_data_[0];
  l0.centers = {CVec::unit(2)};
  l0.parent = {0};
  std::vector<std::vector<std::size_t>> members(1);
  members[0].resize(total);
  for (std::size_t i = 0; i < total; ++i) members[0][i] = i;

  for (int k = 1; k <= levels; ++k) {
    Level& prev = sys->levels_data_[k - 1];
    Level& cur = sys->levels_data_[k];
    prev.children.assign(prev.centers.size(), {});
    std::vector<std::vector<std::size_t>> next;
    for (std::size_t pc = 0; pc < prev.centers.size(); ++pc) {
      const auto& mem = members[pc];
      if (mem.size() < static_cast<std::size_t>(4 * branching))
        throw ConstructionError("NetSystem: too few samples in a level-" + std::to_string(k - 1) + " cell");
      // farthest-point initialisation, seeded at the member nearest the parent center
      std::vector<CVec> cs;
      {
        std::size_t first = mem.front();
        double bd = std::numeric_limits<double>::infinity();
        for (std::size_t i : mem) {
          double d = rho(pts[i], prev.centers[pc]);
          if (d < bd) {
            bd = d;
            first = i;
          }
        }
        cs.push_back(pts[first]);
        std::vector<double> mind(mem.size(), std::numeric_limits<double>::infinity());
        while (static_cast<int>(cs.size()) < branching) {
          std::size_t arg = 0;
          double far = -1.0;
          for (std::size_t a = 0; a < mem.size(); ++a) {
            mind[a] = std::min(mind[a], rho(pts[mem[a]], cs.back()));
            if (mind[a] > far) {
              far = mind[a];
              arg = a;
            }
          }
          cs.push_back(pts[mem[arg]]);
        }
      }
      std::vector<std::size_t> ids(branching);
      for (int c = 0; c < branching; ++c) ids[c] = c;
      std::vector<std::size_t> label(mem.size());
      for (int it = 0; it < 8; ++it) {
        std::vector<CVec> sum(branching, CVec(2));
        for (std::size_t a = 0; a < mem.size(); ++a) {
          label[a] = nearest(pts[mem[a]], cs, ids);
          sum[label[a]] = sum[label[a]] + pts[mem[a]];
        }
        for (int c = 0; c < branching; ++c) cs[c] = normalized_or(sum[c], cs[c]);
      }
      // medoids: the member nearest each centroid, so every center lies in its own cell
      // (distinct members; in sparse cells two centroids can share a nearest member)
      std::vector<CVec> med(branching);
      std::vector<char> taken(mem.size(), 0);
      for (int c = 0; c < branching; ++c) {
        double bd = std::numeric_limits<double>::infinity();
        std::size_t pick = 0;
        for (std::size_t a = 0; a < mem.size(); ++a) {
          double d = rho(pts[mem[a]], cs[c]);
          if (!taken[a] && d < bd) {
            bd = d;
            pick = a;
          }
        }
        taken[pick] = 1;
        med[c] = pts[mem[pick]];
      }
      std::vector<std::vector<std::size_t>> split(branching);
      for (std::size_t a = 0; a < mem.size(); ++a) split[nearest(pts[mem[a]], med, ids)].push_back(mem[a]);
      for (int c = 0; c < branching; ++c) {
        prev.children[pc].push_back(cur.centers.size());
        cur.centers.push_back(med[c]);
        cur.parent.push_back(pc);
        next.push_back(std::move(split[c]));
      }
    }
    members = std::move(next);
  }
  sys->levels_data_[levels].children.assign(sys->levels_data_[levels].centers.size(), {});
  return sys;
}

std::shared_ptr<NetSystem> NetSystem::from_levels(std::vector<Level> levels, double delta,
                                                  std::array<cplx, 4> rotation) {
  if (levels.empty()) throw ParameterError("NetSystem: no levels");
  auto sys = std::shared_ptr<NetSystem>(new NetSystem(delta, static_cast<int>(levels.size()) - 1));
  for (std::size_t k = 0; k < levels.size(); ++k) {
    levels[k].children.assign(levels[k].centers.size(), {});
    if (k > 0)
      for (std::size_t i = 0; i < levels[k].centers.size(); ++i) levels[k - 1].children[levels[k].parent[i]].push_back(i);
  }
  sys->levels_data_ = std::move(levels);
  sys->rot_ = rotation;
  return sys;
}

std::shared_ptr<NetSystem> NetSystem::rotated(const std::array<cplx, 4>& u) const {
  auto sys = std::shared_ptr<NetSystem>(new NetSystem(delta_, levels_));
  sys->levels_data_ = levels_data_;
  sys->rot_ = u;
  return sys;
}

CVec NetSystem::to_local(const CVec& xi) const {
  return CVec{std::conj(rot_[0]) * xi[0] + std::conj(rot_[2]) * xi[1],
              std::conj(rot_[1]) * xi[0] + std::conj(rot_[3]) * xi[1]};
}

std::size_t NetSystem::child_of(const CVec& xi_local, int level, std::size_t cell) const {
  const auto& kids = levels_data_[level].children[cell];
  return nearest(xi_local, levels_data_[level + 1].centers, kids);
}

std::size_t NetSystem::cell_of(const CVec& xi, int level) const {
  if (level < 0 || level > levels_) throw ParameterError("NetSystem: level out of range");
  CVec loc = to_local(xi);
  std::size_t cell = 0;
  for (int k = 0; k < level; ++k) cell = child_of(loc, k, cell);
  return cell;
}

CVec NetSystem::center(int level, std::size_t cell) const {
  const CVec& c = levels_data_[level].centers[cell];
  return CVec{rot_[0] * c[0] + rot_[1] * c[1], rot_[2] * c[0] + rot_[3] * c[1]};
}

nlohmann::json NetSystem::to_json() const {
  nlohmann::json j;
  j["kind"] = "net";
  j["levels"] = levels_;
  j["calibre"] = delta_;
  nlohmann::json rot = nlohmann::json::array();
  for (cplx u : rot_) rot.push_back({u.real(), u.imag()});
  j["rotation"] = rot;
  nlohmann::json lv = nlohmann::json::array();
  for (const auto& L : levels_data_) {
    nlohmann::json cs = nlohmann::json::array(), ps = nlohmann::json::array();
    for (std::size_t i = 0; i < L.centers.size(); ++i) {
      cs.push_back({L.centers[i][0].real(), L.centers[i][0].imag(), L.centers[i][1].real(), L.centers[i][1].imag()});
      ps.push_back(L.parent[i]);
    }
    lv.push_back({{"centers", cs}, {"parents", ps}});
  }
  j["cells"] = lv;
  return j;
}

std::vector<SystemPtr> build_boundary_systems(int n, double delta, int levels, std::uint64_t seed, int count) {
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("build_boundary_systems: calibre must be in (0,1)");
  if (levels < 0 || levels > 14) throw ParameterError("build_boundary_systems: levels must be in [0, 14]");
  std::vector<SystemPtr> out;
  if (n == 1) {
    const double inv = 1.0 / delta;
    const int m = static_cast<int>(std::lround(inv));
    if (std::abs(inv - m) > 1e-9 * inv)
      throw ParameterError("build_boundary_systems: n = 1 arc systems need calibre 1/m for an integer m");
    const int total = (count > 0) ? std::min(count, m + 1) : m + 1;
    for (int s = 0; s < total; ++s) out.push_back(std::make_shared<ArcSystem>(m, s, levels));
    return out;
  }
  if (n == 2) {
    const double b = 1.0 / (delta * delta);
    const int br = static_cast<int>(std::lround(b));
    if (std::abs(b - br) > 1e-9 * b)
      throw ParameterError("build_boundary_systems: n = 2 nets need calibre^-2 to be an integer");
    auto base = NetSystem::build(levels, br, seed);
    out.push_back(base);
    const int total = std::max(count, 1);
    for (int s = 1; s < total; ++s) out.push_back(base->rotated(random_unitary2(seed * 1000003ULL + s)));
    return out;
  }
  throw UnsupportedDimension("build_boundary_systems: only n in {1,2} is supported");
}

SandwichConstants measure_sandwich(const BoundaryCubeSystem& sys, std::size_t samples, std::uint64_t seed) {
  SandwichConstants sc;
  sc.c1 = std::numeric_limits<double>::infinity();
  sc.samples = samples;
  for (int k = 0; k <= sys.levels(); ++k)
    for (std::size_t i = 0; i < sys.cell_count(k); ++i)
      if (sys.cell_of(sys.center(k, i), k) != i)
        throw ConstructionError("cube system: a center does not lie in its own cell (level " + std::to_string(k) + ")");
  Rng rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    CVec xi = random_sphere_point(sys.dimension(), rng);
    std::size_t prev = 0;
    for (int k = 0; k <= sys.levels(); ++k) {
      std::size_t c = sys.cell_of(xi, k);
      if (c >= sys.cell_count(k)) ++sc.partition_violations;
      if (k > 0 && sys.parent_cell(k, c) != prev) ++sc.nesting_violations;
      const double dk = std::pow(sys.calibre(), k);
      sc.C2 = std::max(sc.C2, rho(xi, sys.center(k, c)) / dk);
      if (sys.cell_count(k) > 1) sc.c1 = std::min(sc.c1, sys.foreign_min_rho(xi, k, c) / dk);
      prev = c;
    }
  }
  return sc;
}

namespace {

// Sample points of the boundary disc D(zeta, r); exact endpoints for n = 1.
std::vector<CVec> disc_samples(const CVec& zeta, double r) {
  std::vector<CVec> out;
  BoundaryPoint z(zeta);
  if (zeta.dim() == 1) {
    double w = 2.0 * std::asin(std::min(1.0, r / 2.0)) * (1.0 - 1e-12);
    double a = std::arg(zeta[0]);
    for (int j = -8; j <= 8; ++j) out.push_back(CVec{std::polar(1.0, a + w * j / 8.0)});
    return out;
  }
  // <xi, zeta> = c with |1 - c| < r, |c| <= 1; the remaining freedom is a circle
  for (int i = 0; i <= 8; ++i) {
    double rr = r * (1.0 - 1e-9) * i / 8.0;
    for (int j = 0; j < 24; ++j) {
      cplx c = 1.0 - std::polar(rr, 2.0 * std::numbers::pi * j / 24.0);
      if (std::abs(c) > 1.0) c /= std::abs(c);
      double s = std::sqrt(std::max(0.0, 1.0 - std::norm(c)));
      for (int l = 0; l < (s > 0 ? 12 : 1); ++l) out.push_back(rotate_to(z, CVec{c, std::polar(s, 2.0 * std::numbers::pi * l / 12.0)}));
    }
  }
  return out;
}

}  // namespace

CubeHit find_containing_cube(const std::vector<SystemPtr>& systems, const CVec& zeta, double r) {
  CubeHit hit;
  const auto pts = disc_samples(zeta, r);
  for (std::size_t s = 0; s < systems.size(); ++s) {
    const auto& sys = *systems[s];
    for (int k = sys.levels(); k >= 0; --k) {
      if (k <= hit.level) break;
      std::size_t c = sys.cell_of(pts.front(), k);
      bool ok = std::all_of(pts.begin(), pts.end(), [&](const CVec& p) { return sys.cell_of(p, k) == c; });
      if (ok && sys.dimension() == 1) {
        auto& arc = static_cast<const ArcSystem&>(sys);
        ok = 2.0 * std::asin(std::min(1.0, r / 2.0)) * 2.0 < 2.0 * std::numbers::pi * arc.arc_length(k);
      }
      if (ok) {
        hit = {static_cast<int>(s), k, c, std::pow(sys.calibre(), k) / r};
        break;
      }
    }
  }
  return hit;
}

}  // namespace bergman
