#include "bergman/quadrature.hpp"

#include "bergman/gauss.hpp"

#include <cmath>
#include <sstream>

namespace bergman {

Resolution Resolution::doubled() const { return scaled(2); }

Resolution Resolution::scaled(int factor) const {
  Resolution r = *this;
  r.radial *= factor;
  r.angular *= factor;
  r.latitude *= factor;
  return r;
}

std::string Resolution::describe() const {
  std::ostringstream os;
  os << "radial=" << radial << " angular=" << angular << " latitude=" << latitude << " shells=" << shells;
  if (!tail) os << " tail=off";
  return os.str();
}

Resolution default_resolution(int n) {
  Resolution r;
  if (n == 2) {
    r.radial = 6;
    r.angular = 40;
    r.latitude = 8;
    r.shells = 8;
  }
  return r;
}

QuadratureGrid QuadratureGrid::from_nodes(int n, double t, std::vector<BallPoint> nodes, std::vector<double> coeffs,
                                          std::string descriptor) {
  if (nodes.size() != coeffs.size()) throw ParameterError("from_nodes: size mismatch");
  QuadratureGrid g;
  g.n_ = n;
  g.t_ = t;
  g.product_ = false;
  g.nodes_ = std::move(nodes);
  g.coeff_ = std::move(coeffs);
  g.desc_ = std::move(descriptor);
  return g;
}

QuadratureGrid build_grid(int n, double t, const Resolution& res) {
  if (n != 1 && n != 2) throw UnsupportedDimension("build_grid: only n in {1,2} is supported, got " + std::to_string(n));
  if (!(t > -1.0)) throw ParameterError("build_grid: exponent t must exceed -1");
  if (res.radial < 4 || res.angular < 4 || (n == 2 && res.latitude < 4) || res.shells < 1)
    throw ParameterError("build_grid: resolution components must be >= 4");
  if (!(res.theta > 0.0)) throw ParameterError("build_grid: theta must be positive");

  QuadratureGrid g;
  g.n_ = n;
  g.t_ = t;
  g.product_ = true;
  g.res_ = res;
  g.angular_ = res.angular;
  const double ct = norm_const(n, t);
  const int pw = 2 * n - 1;

  const Rule1D gl = gauss_legendre01(res.radial);
  double s_lo = 0.0;
  for (int N = 0; N < res.shells; ++N) {
    const double s_hi = -std::log(generation_gap(N + 1, res.theta));
    const double len = s_hi - s_lo;
    for (std::size_t j = 0; j < gl.size(); ++j) {
      double s = s_lo + len * gl.x[j];
      double x = std::exp(-s);
      double r = -std::expm1(-s);
      double def = x * (2.0 - x);
      g.radial_r_.push_back(r);
      g.radial_gap_.push_back(x);
      g.radial_def_.push_back(def);
      g.radial_w_.push_back(ct * len * gl.w[j] * std::pow(def, t) * std::pow(r, pw) * x);
    }
    s_lo = s_hi;
  }
  // tail: x = 1 - r in (0, eta], weight x^t handled by Gauss-Jacobi
  const double eta = generation_gap(res.shells, res.theta);
  const Rule1D gj = res.tail ? gauss_jacobi01(res.radial, t, 0.0) : Rule1D{};
  for (std::size_t j = gj.size(); j-- > 0;) {
    double x = eta * gj.x[j];
    double r = 1.0 - x;
    g.radial_r_.push_back(r);
    g.radial_gap_.push_back(x);
    g.radial_def_.push_back(x * (2.0 - x));
    g.radial_w_.push_back(ct * std::pow(eta, t + 1.0) * gj.w[j] * std::pow(2.0 - x, t) * std::pow(r, pw));
  }

  const Rule1D ang = trapezoid_periodic(res.angular);
  if (n == 1) {
    for (std::size_t j = 0; j < ang.size(); ++j) {
      g.dirs_.push_back(CVec{std::polar(1.0, ang.x[j])});
      g.dir_w_.push_back(ang.w[j]);
      g.dir_angle_.push_back(ang.x[j]);
    }
  } else {
    // Hopf-type coordinates zeta = (sqrt(1-s) e^{i a}, sqrt(s) e^{i b}), d sigma = ds da db / 2
    const Rule1D lat = gauss_legendre01(res.latitude);
    for (std::size_t i = 0; i < lat.size(); ++i) {
      double c1 = std::sqrt(lat.xc[i]), c2 = std::sqrt(lat.x[i]);
      for (std::size_t a = 0; a < ang.size(); ++a)
        for (std::size_t b = 0; b < ang.size(); ++b) {
          g.dirs_.push_back(CVec{std::polar(c1, ang.x[a]), std::polar(c2, ang.x[b])});
          g.dir_w_.push_back(0.5 * lat.w[i] * ang.w[a] * ang.w[b]);
        }
    }
  }
  std::ostringstream os;
  os << "product grid n=" << n << " t=" << t << " " << res.describe() << " nodes=" << g.size();
  g.desc_ = os.str();
  return g;
}

namespace detail {
void throw_bad_value(const QuadratureGrid& g, std::size_t k, double v) {
  std::ostringstream os;
  os.precision(17);
  os << "integrand is not finite (" << v << ") at node " << k << " = " << to_string(g.node(k).vec());
  throw EvaluationError(os.str());
}
}  // namespace detail

Prefilter tent_prefilter(const TentSpec& tent) {
  Prefilter pf;
  if (tent.whole_ball()) return pf;
  const double h = tent.height();
  pf.max_gap = h;  // 1 - |w| <= |1 - <w, zeta>| < h
  if (tent.apex.dim() == 1 && h < 0.5) {
    pf.angular = true;
    pf.angle_center = std::arg(tent.apex[0]);
    if (pf.angle_center < 0) pf.angle_center += 2.0 * std::numbers::pi;
    // |Im(w conj zeta)| < h and |w| > 1 - h give |sin(dphi)| < h / (1-h)
    pf.angle_halfwidth = std::asin(std::min(1.0, h / (1.0 - h)));
  }
  return pf;
}

RegionIntegral integrate_region(const QuadratureGrid& g, const std::function<double(const BallPoint&)>& f,
                                const std::function<bool(const BallPoint&)>& membership, const std::string& region,
                                const Prefilter& pf) {
  RegionIntegral out;
  out.region = region;
  detail::for_each_filtered(g, pf, [&](std::size_t k) {
    BallPoint z = g.node(k);
    if (!membership(z)) return;
    double v = f(z);
    if (!std::isfinite(v)) detail::throw_bad_value(g, k, v);
    out.value += g.coeff(k) * v;
    ++out.nodes;
  });
  if (out.nodes < kMinRegionNodes) {
    out.under_resolved = true;
    out.warning = "region '" + region + "' holds only " + std::to_string(out.nodes) + " grid nodes";
  }
  return out;
}

RegionIntegral tent_volume(const QuadratureGrid& g, const BallPoint& apex) {
  TentSpec tent{apex};
  return integrate_region(
      g, [](const BallPoint&) { return 1.0; }, [&](const BallPoint& w) { return tent_contains(tent, w); }, "tent",
      tent_prefilter(tent));
}

}  // namespace bergman
