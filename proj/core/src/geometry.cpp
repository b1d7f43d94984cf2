#include "bergman/geometry.hpp"

#include "bergman/error.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

namespace bergman {

CVec::CVec(int n) : n_(n) {
  if (n < 1 || n > kMaxDim) throw UnsupportedDimension("dimension " + std::to_string(n) + " not supported");
}

CVec::CVec(std::initializer_list<cplx> c) : n_(static_cast<int>(c.size())) {
  if (n_ < 1 || n_ > kMaxDim) throw UnsupportedDimension("dimension " + std::to_string(n_) + " not supported");
  int i = 0;
  for (cplx x : c) c_[i++] = x;
}

double CVec::norm2() const {
  double s = 0.0;
  for (int i = 0; i < n_; ++i) s += std::norm(c_[i]);
  return s;
}

double CVec::norm() const { return std::sqrt(norm2()); }

CVec CVec::operator+(const CVec& o) const {
  CVec r(n_);
  for (int i = 0; i < n_; ++i) r.c_[i] = c_[i] + o.c_[i];
  return r;
}

CVec CVec::operator-(const CVec& o) const {
  CVec r(n_);
  for (int i = 0; i < n_; ++i) r.c_[i] = c_[i] - o.c_[i];
  return r;
}

CVec CVec::operator*(cplx s) const {
  CVec r(n_);
  for (int i = 0; i < n_; ++i) r.c_[i] = c_[i] * s;
  return r;
}

CVec CVec::unit(int n, int axis) {
  CVec r(n);
  r.c_[axis] = 1.0;
  return r;
}

cplx pairing(const CVec& z, const CVec& w) {
  cplx s = 0.0;
  for (int i = 0; i < z.dim(); ++i) s += z[i] * std::conj(w[i]);
  return s;
}

BallPoint::BallPoint(const CVec& v) : v_(v), defect_(1.0 - v.norm2()) {
  if (!(defect_ > 0.0)) throw DomainError("point " + to_string(v) + " is not inside the unit ball");
}

BallPoint BallPoint::with_defect(const CVec& v, double defect) {
  BallPoint p;
  p.v_ = v;
  p.defect_ = defect;
  if (!(defect > 0.0)) throw DomainError("point " + to_string(v) + " is not inside the unit ball");
  return p;
}

BallPoint BallPoint::origin(int n) { return BallPoint(CVec(n)); }

BoundaryPoint::BoundaryPoint(const CVec& v) {
  double r = v.norm();
  if (!(r > 0.0)) throw DomainError("zero vector has no boundary direction");
  v_ = v * (1.0 / r);
}

void require_interior(const BallPoint& z, const char* what) {
  if (!(z.norm() < 1.0 - kBoundaryMargin))
    throw DomainError(std::string(what) + ": point " + to_string(z.vec()) + " is outside the ball or within 1e-12 of the sphere");
}

BallPoint mobius(const BallPoint& z, const BallPoint& w) {
  require_interior(z, "mobius");
  require_interior(w, "mobius");
  if (z.dim() != w.dim()) throw ParameterError("mobius: dimension mismatch");
  const int n = z.dim();
  const double z2 = z.norm2();
  const cplx wz = pairing(w.vec(), z.vec());
  CVec out(n);
  if (z2 == 0.0) {
    out = w.vec() * -1.0;
    return BallPoint(out);
  }
  const double s = std::sqrt(z.defect());
  // P_z w = (<w,z>/|z|^2) z
  CVec pw = z.vec() * (wz / z2);
  CVec qw = w.vec() - pw;
  CVec num = z.vec() - pw - qw * s;
  out = num * (1.0 / (1.0 - wz));
  // 1 - |phi|^2 from the closed identity keeps the defect accurate
  double def = z.defect() * w.defect() / std::norm(1.0 - pairing(z.vec(), w.vec()));
  return BallPoint::with_defect(out, def);
}

double pseudo_hyperbolic(const BallPoint& z, const BallPoint& w) {
  return mobius(z, w).norm();
}

double bergman_dist(const BallPoint& z, const BallPoint& w) {
  double r = pseudo_hyperbolic(z, w);
  return 0.5 * std::log((1.0 + r) / (1.0 - r));
}

double bergman_radius(const BallPoint& z) { return std::atanh(z.norm()); }

double rho(const CVec& xi, const CVec& eta) { return std::abs(1.0 - pairing(xi, eta)); }

double TentSpec::height() const {
  if (whole_ball()) return std::numeric_limits<double>::infinity();
  return 1.0 - apex.norm();
}

BoundaryPoint TentSpec::direction() const {
  if (whole_ball()) return BoundaryPoint(CVec::unit(apex.dim()));
  return BoundaryPoint(apex.vec());
}

bool tent_contains(const TentSpec& tent, const BallPoint& w) {
  if (tent.whole_ball()) return true;
  const double r = tent.apex.norm();
  CVec zeta = tent.apex.vec() * (1.0 / r);
  return std::abs(1.0 - pairing(w.vec(), zeta)) < 1.0 - r;
}

double sphere_area(int n) {
  double f = 1.0;
  for (int k = 2; k < n; ++k) f *= k;
  return 2.0 * std::pow(std::numbers::pi, n) / f;
}

double norm_const(int n, double t) {
  if (n < 1) throw UnsupportedDimension("norm_const: n must be >= 1");
  if (t <= -1.0) return 1.0;
  static std::mutex mu;
  static std::map<std::pair<int, double>, double> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, t);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  boost::math::quadrature::tanh_sinh<double> integrator;
  // substitute x = 1 - r so the (1-r)^t endpoint behaviour sits at x = 0
  auto f = [n, t](double x) {
    return std::pow(x * (2.0 - x), t) * std::pow(1.0 - x, 2 * n - 1);
  };
  double radial = integrator.integrate(f, 0.0, 1.0);
  double c = 1.0 / (sphere_area(n) * radial);
  cache.emplace(key, c);
  return c;
}

double generation_gap(int N, double theta) {
  // 1 - (e^{2x}-1)/(e^{2x}+1) = 2/(e^{2x}+1)
  return 2.0 / (std::exp(2.0 * N * theta) + 1.0);
}

double generation_radius(int N, double theta) {
  if (N < 0 || !(theta > 0.0)) throw ParameterError("generation_radius: need N >= 0, theta > 0");
  return std::tanh(N * theta);
}

BallPoint radial_point(const CVec& direction, double radius) {
  double r = direction.norm();
  if (!(r > 0.0)) throw DomainError("radial_point: zero direction");
  CVec v = direction * (radius / r);
  return BallPoint::with_defect(v, (1.0 - radius) * (1.0 + radius));
}

std::string to_string(const CVec& v) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (int i = 0; i < v.dim(); ++i) {
    if (i) os << ", ";
    os << v[i].real() << (v[i].imag() < 0 ? "-" : "+") << std::abs(v[i].imag()) << "i";
  }
  os << ")";
  return os.str();
}

}  // namespace bergman
