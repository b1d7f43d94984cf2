#include "bergman/characteristics.hpp"

#include "bergman/error.hpp"
#include "bergman/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace bergman {

namespace {

CVec anchor_of(const Weight& w) {
  if (!w.singular_points().empty()) return w.singular_points().front().zeta;
  return CVec::unit(w.dimension(), 0);
}

double mass(const QuadratureGrid& g) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) s += g.coeff(k);
  return s;
}

double weighted(const QuadratureGrid& g, const Weight& w) {
  double s = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) s += g.coeff(k) * w(g.node(k));
  if (!std::isfinite(s)) throw EvaluationError("tent integral of '" + w.provenance() + "' is not finite");
  return s;
}

}  // namespace

TentAverage AdaptedTentAverager::integrate(const Weight& w, double t, const BallPoint& apex) const {
  const int n = w.dimension();
  TentAverage out;
  if (apex.norm() == 0.0) {
    const CVec z = anchor_of(w);
    const BoundaryPoint zeta(z);
    const auto g = build_split_ball_grid(n, t, zeta, opt_, w.hint(z), w.hint(z * -1.0));
    out.integral = weighted(g, w);
    out.volume = mass(build_split_ball_grid(n, t, zeta, opt_, {}, {}));
    out.nodes = g.size();
    return out;
  }
  const CVec dir = apex.vec() * (1.0 / apex.norm());
  const SingularityHint h = w.hint(dir);
  const auto g = build_tent_grid(n, t, apex, opt_, h);
  out.integral = weighted(g, w);
  out.volume = (h.point == 0.0 && h.edge == 0.0) ? mass(g) : mass(build_tent_grid(n, t, apex, opt_));
  out.nodes = g.size();
  return out;
}

std::string AdaptedTentAverager::describe() const {
  return "adapted(radial=" + std::to_string(opt_.radial) + ",angular=" + std::to_string(opt_.angular) +
         ",inner=" + std::to_string(opt_.inner_radial) + "x" + std::to_string(opt_.inner_angular) + ")";
}

GlobalGridAverager::GlobalGridAverager(Resolution res, double truncate_gap, int n)
    : res_(res), cut_(truncate_gap), n_(n) {}

const QuadratureGrid& GlobalGridAverager::grid(double t) const {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = grids_.find(t);
  if (it == grids_.end()) it = grids_.emplace(t, std::make_shared<QuadratureGrid>(build_grid(n_, t, res_))).first;
  return *it->second;
}

TentAverage GlobalGridAverager::integrate(const Weight& w, double t, const BallPoint& apex) const {
  if (w.dimension() != n_) throw ParameterError("GlobalGridAverager: dimension mismatch");
  const QuadratureGrid& g = grid(t);
  const TentSpec tent{apex};
  const Prefilter pf = tent_prefilter(tent);
  TentAverage out;
  detail::for_each_filtered(g, pf, [&](std::size_t k) {
    const BallPoint z = g.node(k);
    if (cut_ > 0.0 && z.defect() / (1.0 + z.norm()) < cut_) return;
    if (!tent_contains(tent, z)) return;
    out.integral += g.coeff(k) * w(z);
    out.volume += g.coeff(k);
    ++out.nodes;
  });
  out.under_resolved = out.nodes < static_cast<std::size_t>(kMinRegionNodes);
  if (!std::isfinite(out.integral)) throw EvaluationError("tent integral of '" + w.provenance() + "' is not finite");
  return out;
}

std::string GlobalGridAverager::describe() const {
  std::string s = "global(" + res_.describe();
  if (cut_ > 0.0) s += ",cut=" + std::to_string(cut_);
  return s + ")";
}

CharacteristicReport characteristic_D(const Weight& u, const Weight& sigma, double p, double a, double b,
                                      const std::vector<BallPoint>& apexes, const TentAverager& avg,
                                      const std::string& apex_set) {
  if (!(p > 1.0)) throw ParameterError("characteristic: p must exceed 1");
  if (!(b > -1.0) || !(p * a + b > -1.0))
    throw ParameterError("characteristic: needs b > -1 and pa + b > -1; route b <= -1 through psi_nu_transform");
  if (apexes.empty()) throw ParameterError("characteristic: empty apex set");
  const int n = u.dimension();
  const double A = n + 1 + b;
  const Weight ut = tilde_weight(u, p, a);
  CharacteristicReport rep;
  rep.apex_set = apex_set;
  rep.grid = avg.describe();
  rep.form_ratio_min = std::numeric_limits<double>::infinity();
  bool first = true;
  for (std::size_t i = 0; i < apexes.size(); ++i) {
    const BallPoint& z = apexes[i];
    CharacteristicRow row;
    row.apex = z;
    const TentAverage s = avg.integrate(sigma, b, z);
    const TentAverage uu = avg.integrate(u, p * a + b, z);
    const TentAverage tt = (a == 0.0) ? uu : avg.integrate(ut, b, z);
    row.sigma_avg = s.average();
    row.u_avg = uu.average();
    row.value = std::pow(row.sigma_avg, p - 1.0) * row.u_avg;
    row.volume_b = s.volume;
    row.u_tilde_avg = tt.average();
    row.value_alt = std::pow(row.sigma_avg, p - 1.0) * row.u_tilde_avg * std::pow(row.volume_b, -p * a / A);
    row.nodes = std::min(s.nodes, uu.nodes);
    row.under_resolved = s.under_resolved || uu.under_resolved || tt.under_resolved;
    if (row.under_resolved) {
      ++rep.excluded;
    } else {
      if (first || row.value > rep.value) {
        rep.value = row.value;
        rep.attaining_apex = z;
        rep.attaining_index = i;
      }
      rep.value_alt = first ? row.value_alt : std::max(rep.value_alt, row.value_alt);
      const double r = row.value_alt / row.value;
      rep.form_ratio_min = std::min(rep.form_ratio_min, r);
      rep.form_ratio_max = std::max(rep.form_ratio_max, r);
      first = false;
    }
    rep.rows.push_back(row);
  }
  if (first) throw EvaluationError("characteristic: every tent of the apex set is under-resolved");
  return rep;
}

CharacteristicReport characteristic_B(const Weight& u, double p, double b, const std::vector<BallPoint>& apexes,
                                      const TentAverager& avg, const std::string& apex_set) {
  return characteristic_D(u, dual_weight(u, p), p, 0.0, b, apexes, avg, apex_set);
}

CharacteristicReport characteristic_C(const Weight& u, double p, double b, const std::vector<BallPoint>& apexes,
                                      const TentAverager& avg, const std::string& apex_set) {
  return characteristic_D(u, dual_weight(u, p), p, u.dimension() + 1 + b, b, apexes, avg, apex_set);
}

nlohmann::json CharacteristicReport::to_json(bool with_rows) const {
  nlohmann::json j = {{"value", value},
                      {"value_alt", value_alt},
                      {"attaining_apex", to_string(attaining_apex.vec())},
                      {"attaining_index", attaining_index},
                      {"excluded", excluded},
                      {"form_ratio_min", form_ratio_min},
                      {"form_ratio_max", form_ratio_max},
                      {"apex_set", apex_set},
                      {"grid", grid},
                      {"apexes", rows.size()}};
  if (with_rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& x : rows)
      r.push_back({{"apex", to_string(x.apex.vec())},
                   {"sigma_avg", x.sigma_avg},
                   {"u_avg", x.u_avg},
                   {"value", x.value},
                   {"value_alt", x.value_alt},
                   {"nodes", x.nodes},
                   {"under_resolved", x.under_resolved}});
    j["rows"] = r;
  }
  return j;
}

std::vector<BallPoint> default_apex_set(int n, const Weight& u, const ApexSetOptions& opt) {
  if (opt.min_depth < 0 || opt.max_depth < opt.min_depth) throw ParameterError("apex set: bad depth range");
  std::vector<CVec> dirs;
  auto add = [&](const CVec& d) {
    for (const auto& e : dirs)
      if ((e - d).norm() < 1e-9) return;
    dirs.push_back(d);
  };
  if (opt.singular_rays)
    for (const auto& s : u.singular_points()) add(s.zeta);
  if (n == 1) {
    for (int j = 0; j < opt.directions; ++j) add(CVec{std::polar(1.0, 2.0 * std::numbers::pi * j / opt.directions)});
  } else {
    Rng rng(opt.seed);
    for (int j = 0; j < opt.directions; ++j) add(random_sphere_point(n, rng));
  }
  std::vector<BallPoint> out;
  for (int N = opt.min_depth; N <= opt.max_depth; ++N) {
    if (N == 0) {
      out.push_back(BallPoint::origin(n));
      continue;
    }
    const double gap = generation_gap(N, opt.theta);
    for (const auto& d : dirs) out.push_back(BallPoint::with_defect(d * (1.0 - gap), gap * (2.0 - gap)));
  }
  return out;
}

std::string describe(const ApexSetOptions& opt) {
  return "rays(depth " + std::to_string(opt.min_depth) + ".." + std::to_string(opt.max_depth) + ", " +
         std::to_string(opt.directions) + " directions" + (opt.singular_rays ? " + singular rays" : "") + ")";
}

DyadicReport characteristic_dyadic(const Weight& u, const Weight& sigma, double p, double a, double b,
                                   const BergmanTree& tree, const QuadratureGrid& grid_b,
                                   const QuadratureGrid& grid_pab, int max_generation) {
  if (!(b > -1.0) || !(p * a + b > -1.0)) throw ParameterError("characteristic_dyadic: needs b > -1 and pa + b > -1");
  if (std::abs(grid_b.exponent() - b) > 1e-12 || std::abs(grid_pab.exponent() - (p * a + b)) > 1e-12)
    throw ParameterError("characteristic_dyadic: grid exponents must be b and pa + b");
  const int n = u.dimension();
  const double A = n + 1 + b, q = conjugate_exponent(p);
  const Weight ut = tilde_weight(u, p, a);
  auto eval = [](const QuadratureGrid& g, const Weight& w) {
    std::vector<double> v(g.size());
    for (std::size_t k = 0; k < g.size(); ++k) v[k] = w(g.node(k));
    return v;
  };
  const auto asg_b = assign_nodes(tree, grid_b);
  const auto vol_b = dyadic_volumes(tree, grid_b, asg_b);
  const auto sig_b = dyadic_sums(tree, grid_b, asg_b, eval(grid_b, sigma));
  const auto til_b = dyadic_sums(tree, grid_b, asg_b, eval(grid_b, ut));
  const bool same = &grid_b == &grid_pab || (p * a + b == b);
  const auto asg_p = same ? asg_b : assign_nodes(tree, grid_pab);
  const auto vol_p = same ? vol_b : dyadic_volumes(tree, grid_pab, asg_p);
  const auto u_p = dyadic_sums(tree, grid_pab, asg_p, eval(grid_pab, u));

  DyadicReport rep;
  rep.tent_lower_min = std::numeric_limits<double>::infinity();
  bool first = true;
  for (const auto& nd : tree.nodes()) {
    if (nd.generation > max_generation) continue;
    const int id = nd.id;
    DyadicRow row;
    row.node = id;
    row.generation = nd.generation;
    row.nodes = std::min(vol_b.tent_count[id], vol_p.tent_count[id]);
    row.under_resolved = row.nodes < static_cast<std::size_t>(kMinRegionNodes) ||
                         vol_b.kube_count[id] < static_cast<std::size_t>(kMinRegionNodes);
    const double sa = sig_b.tent[id] / vol_b.tent[id];
    row.value = std::pow(sa, p - 1.0) * (u_p.tent[id] / vol_p.tent[id]);
    row.tent_lower = (til_b.tent[id] / vol_b.tent[id]) * std::pow(sa, p - 1.0) * std::pow(vol_b.tent[id], -p * a / A);
    row.holder = std::pow(vol_b.tent[id], 1.0 + a / A) /
                 (std::pow(sig_b.kube[id], 1.0 / q) * std::pow(til_b.kube[id], 1.0 / p));
    if (row.under_resolved) {
      ++rep.excluded;
    } else {
      if (first || row.value > rep.value) {
        rep.value = row.value;
        rep.attaining_node = id;
      }
      rep.tent_lower_min = std::min(rep.tent_lower_min, row.tent_lower);
      rep.holder_max = std::max(rep.holder_max, row.holder);
      first = false;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

nlohmann::json DyadicReport::to_json(bool with_rows) const {
  nlohmann::json j = {{"value", value},
                      {"attaining_node", attaining_node},
                      {"tent_lower_min", tent_lower_min},
                      {"holder_max", holder_max},
                      {"excluded", excluded},
                      {"nodes", rows.size()}};
  if (with_rows) {
    nlohmann::json r = nlohmann::json::array();
    for (const auto& x : rows)
      r.push_back({{"node", x.node}, {"generation", x.generation}, {"value", x.value}, {"tent_lower", x.tent_lower},
                   {"holder", x.holder}, {"under_resolved", x.under_resolved}});
    j["rows"] = r;
  }
  return j;
}

}  // namespace bergman
