#pragma once

#include <array>
#include <complex>
#include <initializer_list>
#include <span>
#include <string>

namespace bergman {

using cplx = std::complex<double>;

inline constexpr int kMaxDim = 2;
inline constexpr double kBoundaryMargin = 1e-12;

// Raw complex n-vector, n <= kMaxDim. No norm constraint.
class CVec {
 public:
  CVec() = default;
  explicit CVec(int n);
  CVec(std::initializer_list<cplx> c);

  int dim() const { return n_; }
  cplx operator[](int i) const { return c_[i]; }
  cplx& operator[](int i) { return c_[i]; }
  std::span<const cplx> coords() const { return {c_.data(), static_cast<std::size_t>(n_)}; }

  double norm2() const;
  double norm() const;

  CVec operator+(const CVec& o) const;
  CVec operator-(const CVec& o) const;
  CVec operator*(cplx s) const;
  bool operator==(const CVec& o) const = default;

  static CVec unit(int n, int axis = 0);

 private:
  std::array<cplx, kMaxDim> c_{};
  int n_ = 1;
};

// Sum_i z_i conj(w_i).
cplx pairing(const CVec& z, const CVec& w);

// Point of the open unit ball. Carries 1-|z|^2 separately so that nodes
// built from polar data keep full relative accuracy near the sphere.
class BallPoint {
 public:
  BallPoint() : BallPoint(CVec(1)) {}
  explicit BallPoint(const CVec& v);
  BallPoint(std::initializer_list<cplx> c) : BallPoint(CVec(c)) {}
  // Caller guarantees defect == 1 - |v|^2 (up to rounding) and defect > 0.
  static BallPoint with_defect(const CVec& v, double defect);
  static BallPoint origin(int n);

  int dim() const { return v_.dim(); }
  cplx operator[](int i) const { return v_[i]; }
  const CVec& vec() const { return v_; }
  double norm2() const { return v_.norm2(); }
  double norm() const { return v_.norm(); }
  double defect() const { return defect_; }

 private:
  CVec v_;
  double defect_ = 1.0;
};

// Unit vector on the sphere.
class BoundaryPoint {
 public:
  BoundaryPoint() : BoundaryPoint(CVec::unit(1)) {}
  explicit BoundaryPoint(const CVec& v);  // normalizes; throws on zero
  int dim() const { return v_.dim(); }
  cplx operator[](int i) const { return v_[i]; }
  const CVec& vec() const { return v_; }

 private:
  CVec v_;
};

// Rejects |z| >= 1 - kBoundaryMargin.
void require_interior(const BallPoint& z, const char* what);

BallPoint mobius(const BallPoint& z, const BallPoint& w);
double pseudo_hyperbolic(const BallPoint& z, const BallPoint& w);
double bergman_dist(const BallPoint& z, const BallPoint& w);
// beta(0, z) = atanh |z|
double bergman_radius(const BallPoint& z);

// rho(xi, eta) = |1 - <xi, eta>| on the sphere
double rho(const CVec& xi, const CVec& eta);

struct TentSpec {
  BallPoint apex;
  // 1 - |apex|; infinite for the whole-ball tent over 0
  double height() const;
  bool whole_ball() const { return apex.norm2() == 0.0; }
  BoundaryPoint direction() const;
};

bool tent_contains(const TentSpec& tent, const BallPoint& w);

double norm_const(int n, double t);
double sphere_area(int n);
double generation_radius(int N, double theta);
// 1 - r_{N theta}, computed without cancellation
double generation_gap(int N, double theta);

// P_s: radial projection of a nonzero vector onto the sphere of radius s.
BallPoint radial_point(const CVec& direction, double radius);

std::string to_string(const CVec& v);

}  // namespace bergman
