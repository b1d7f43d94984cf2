#include "bergman/gauss.hpp"
#include "bergman/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace bergman {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

enum class Bound { Flat, Cut, Edge };

struct Piece {
  double lo, hi;
  Bound bound;
  int side;  // Edge pieces: +1 touches +pi/2, -1 touches -pi/2
};

struct Accum {
  std::vector<BallPoint> nodes;
  std::vector<double> coeffs;
};

void require_exponent(double e, const char* what) {
  if (!(e > -1.0)) {
    std::ostringstream os;
    os << "tent grid: " << what << " exponent " << e << " is not integrable (needs > -1)";
    throw ParameterError(os.str());
  }
}

// Local coordinates about zeta: <w, zeta> = 1 - rho e^{i psi}; for n = 2 the
// orthogonal part is sqrt(m tau) e^{i chi}, m = 1 - |<w,zeta>|^2.
void build_local(int n, double t, const BoundaryPoint& zeta, double h, const TentGridOptions& opt,
                 SingularityHint hint, Accum& acc) {
  const double tp = (n == 1) ? t : t + 1.0;
  const double kappa = hint.point, eps = hint.edge;
  const double beta = 1.0 + tp + kappa + eps;
  const double alpha_edge = tp + eps;
  require_exponent(beta, "point");
  require_exponent(alpha_edge, "edge");
  if (n == 2) require_exponent(t + eps, "inner edge");
  const double ct = norm_const(n, t);

  std::vector<Piece> pieces;
  if (std::isfinite(h)) {
    const double ph = std::acos(h / 2.0);
    pieces = {{-kHalfPi, -ph, Bound::Edge, -1}, {-ph, ph, Bound::Flat, 0}, {ph, kHalfPi, Bound::Edge, +1}};
  } else {
    const double q = 0.25 * std::numbers::pi;
    pieces = {{-kHalfPi, -q, Bound::Edge, -1}, {-q, q, Bound::Cut, 0}, {q, kHalfPi, Bound::Edge, +1}};
  }

  const Rule1D rho_edge = gauss_jacobi01(opt.radial, beta, alpha_edge);
  const Rule1D rho_open = gauss_jacobi01(opt.radial, beta, 0.0);
  const double e_col = 1.0 + alpha_edge + beta;
  const Rule1D psi_gl = gauss_legendre01(opt.angular);
  const Rule1D psi_hi = gauss_jacobi01(opt.angular, 0.0, e_col);
  const Rule1D psi_lo = gauss_jacobi01(opt.angular, e_col, 0.0);
  Rule1D tau, chi;
  if (n == 2) {
    tau = gauss_jacobi01(opt.inner_radial, 0.0, t + eps);
    chi = trapezoid_periodic(opt.inner_angular);
  }

  CVec perp(n);
  if (n == 2) perp = CVec{-std::conj(zeta[1]), std::conj(zeta[0])};

  for (const Piece& pc : pieces) {
    const double len = pc.hi - pc.lo;
    const Rule1D& pr = (pc.bound != Bound::Edge) ? psi_gl : (pc.side > 0 ? psi_hi : psi_lo);
    for (std::size_t j = 0; j < pr.size(); ++j) {
      const double psi = pc.lo + len * pr.x[j];
      double wpsi = len * pr.w[j];
      double cpsi;
      if (pc.bound == Bound::Edge) {
        // distance to +-pi/2 straight from the rule, no cancellation
        double d = (pc.side > 0) ? len * pr.xc[j] : len * pr.x[j];
        cpsi = std::sin(d);
        double rel = (pc.side > 0) ? pr.xc[j] : pr.x[j];
        wpsi /= std::pow(rel, e_col);
      } else {
        cpsi = std::cos(psi);
      }
      const double two_c = 2.0 * cpsi;
      double rmax;
      switch (pc.bound) {
        case Bound::Flat: rmax = h; break;
        case Bound::Cut: rmax = 1.0 / cpsi; break;
        default: rmax = two_c; break;
      }
      const bool edge = pc.bound == Bound::Edge;
      const Rule1D& rr = edge ? rho_edge : rho_open;
      const double alpha = edge ? alpha_edge : 0.0;
      const double col = wpsi * std::pow(rmax, 1.0 + alpha + beta);
      const cplx eip = std::polar(1.0, psi);
      for (std::size_t i = 0; i < rr.size(); ++i) {
        const double r = rmax * rr.x[i];
        const double slack = edge ? rmax * rr.xc[i] : (two_c - rmax) + rmax * rr.xc[i];  // 2cos psi - rho
        const double m = r * slack;
        double E = edge ? 1.0 : std::pow(slack, tp + eps);
        double base = ct * col * rr.w[i] * E / (std::pow(r, kappa) * std::pow(m, eps));
        const cplx v1 = 1.0 - r * eip;
        if (n == 1) {
          acc.nodes.push_back(BallPoint::with_defect(CVec{v1 * zeta[0]}, m));
          acc.coeffs.push_back(base);
          continue;
        }
        for (std::size_t k = 0; k < tau.size(); ++k) {
          const double one_tau = tau.xc[k];
          const double rad = std::sqrt(m * tau.x[k]);
          const double ck = base * 0.5 * tau.w[k] / std::pow(one_tau, eps);
          for (std::size_t l = 0; l < chi.size(); ++l) {
            const cplx v2 = std::polar(rad, chi.x[l]);
            CVec w = zeta.vec() * v1 + perp * v2;
            acc.nodes.push_back(BallPoint::with_defect(w, m * one_tau));
            acc.coeffs.push_back(ck * chi.w[l]);
          }
        }
      }
    }
  }
}

std::string describe(const char* kind, int n, double t, const TentGridOptions& o, SingularityHint h) {
  std::ostringstream os;
  os << kind << " n=" << n << " t=" << t << " rho=" << o.radial << " psi=" << o.angular;
  if (n == 2) os << " tau=" << o.inner_radial << " chi=" << o.inner_angular;
  os << " hint(point=" << h.point << ", edge=" << h.edge << ")";
  return os.str();
}

}  // namespace

TentGridOptions TentGridOptions::doubled() const {
  TentGridOptions o = *this;
  o.radial *= 2;
  o.angular *= 2;
  o.inner_radial *= 2;
  o.inner_angular *= 2;
  return o;
}

CVec rotate_to(const BoundaryPoint& zeta, const CVec& v) {
  if (zeta.dim() == 1) return CVec{zeta[0] * v[0]};
  CVec perp{-std::conj(zeta[1]), std::conj(zeta[0])};
  return zeta.vec() * v[0] + perp * v[1];
}

QuadratureGrid build_tent_grid(int n, double t, const BallPoint& apex, const TentGridOptions& opt,
                               SingularityHint hint) {
  if (n != 1 && n != 2) throw UnsupportedDimension("build_tent_grid: only n in {1,2} is supported");
  if (apex.dim() != n) throw ParameterError("build_tent_grid: apex dimension mismatch");
  if (!(t > -1.0)) throw ParameterError("build_tent_grid: exponent t must exceed -1");
  const double r = apex.norm();
  if (r == 0.0) throw ParameterError("build_tent_grid: apex 0 is the whole ball, use build_split_ball_grid");
  Accum acc;
  build_local(n, t, BoundaryPoint(apex.vec()), 1.0 - r, opt, hint, acc);
  return QuadratureGrid::from_nodes(n, t, std::move(acc.nodes), std::move(acc.coeffs),
                                    describe("tent grid", n, t, opt, hint));
}

QuadratureGrid build_half_ball_grid(int n, double t, const BoundaryPoint& zeta, const TentGridOptions& opt,
                                    SingularityHint hint) {
  if (n != 1 && n != 2) throw UnsupportedDimension("build_half_ball_grid: only n in {1,2} is supported");
  if (!(t > -1.0)) throw ParameterError("build_half_ball_grid: exponent t must exceed -1");
  Accum acc;
  build_local(n, t, zeta, std::numeric_limits<double>::infinity(), opt, hint, acc);
  return QuadratureGrid::from_nodes(n, t, std::move(acc.nodes), std::move(acc.coeffs),
                                    describe("half-ball grid", n, t, opt, hint));
}

QuadratureGrid build_split_ball_grid(int n, double t, const BoundaryPoint& zeta, const TentGridOptions& opt,
                                     SingularityHint hint_plus, SingularityHint hint_minus) {
  if (n != 1 && n != 2) throw UnsupportedDimension("build_split_ball_grid: only n in {1,2} is supported");
  if (!(t > -1.0)) throw ParameterError("build_split_ball_grid: exponent t must exceed -1");
  Accum acc;
  build_local(n, t, zeta, std::numeric_limits<double>::infinity(), opt, hint_plus, acc);
  build_local(n, t, BoundaryPoint(zeta.vec() * -1.0), std::numeric_limits<double>::infinity(), opt, hint_minus, acc);
  std::ostringstream os;
  os << describe("split-ball grid", n, t, opt, hint_plus) << " minus-side hint(point=" << hint_minus.point
     << ", edge=" << hint_minus.edge << ")";
  return QuadratureGrid::from_nodes(n, t, std::move(acc.nodes), std::move(acc.coeffs), os.str());
}

}  // namespace bergman
