#include "bergman/operators.hpp"

#include "bergman/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace bergman {

void OperatorSpec::validate() const {
  if (n != 1 && n != 2) throw UnsupportedDimension("operator: only n in {1,2} is supported");
  if (!(exponent() > 0.0)) throw ParameterError("operator: needs n + 1 + a + b > 0");
  if (!(-a < b + 1.0)) throw ParameterError("operator: needs -a < b + 1");
}

std::string OperatorSpec::describe() const {
  std::ostringstream os;
  os << (form == OuterForm::S ? "S" : "Q") << (flavor == KernelFlavor::modulus ? "+" : "") << "(a=" << a
     << ",b=" << b << ",n=" << n << ")";
  return os.str();
}

KernelPower::KernelPower(double m) : m_(m) {
  if (m > 0.0 && m <= 64.0 && m == std::floor(m)) mi_ = static_cast<int>(m);
}

namespace {

template <class T>
T ipow(T x, int k) {
  T r = 1.0;
  while (k > 0) {
    if (k & 1) r *= x;
    x *= x;
    k >>= 1;
  }
  return r;
}

}  // namespace

cplx KernelPower::analytic(cplx d) const {
  if (mi_ > 0) return ipow(1.0 / d, mi_);
  // Re d > 0 on the ball, so the principal branch is continuous
  return std::exp(-m_ * std::log(d));
}

double KernelPower::modulus(cplx d) const {
  if (mi_ > 0) {
    if (mi_ % 2 == 0) return ipow(1.0 / std::norm(d), mi_ / 2);
    return ipow(1.0 / std::abs(d), mi_);
  }
  return std::exp(-0.5 * m_ * std::log(std::norm(d)));
}

// ---- test functions -------------------------------------------------------

TestFunction TestFunction::constant(double c) {
  return {[c](const BallPoint&) { return cplx(c); }, "constant(" + std::to_string(c) + ")", c >= 0.0};
}

TestFunction TestFunction::monomial(std::array<int, 2> k) {
  return {[k](const BallPoint& z) {
            cplx r = 1.0;
            for (int i = 0; i < z.dim(); ++i) r *= ipow(z[i], k[i]);
            return r;
          },
          "z^(" + std::to_string(k[0]) + "," + std::to_string(k[1]) + ")", k[0] == 0 && k[1] == 0};
}

TestFunction TestFunction::conj_coordinate(int i) {
  return {[i](const BallPoint& z) { return std::conj(z[i]); }, "conj(z_" + std::to_string(i + 1) + ")", false};
}

TestFunction TestFunction::kube_indicator(const BergmanTree& tree, int node) {
  return {[&tree, node](const BallPoint& z) { return cplx(tree.kube_contains(node, z) ? 1.0 : 0.0); },
          "kube(" + std::to_string(node) + ")", true};
}

TestFunction TestFunction::dyadic_tent_indicator(const BergmanTree& tree, int node) {
  return {[&tree, node](const BallPoint& z) { return cplx(tree.dyadic_tent_contains(node, z) ? 1.0 : 0.0); },
          "dyadic_tent(" + std::to_string(node) + ")", true};
}

TestFunction TestFunction::tent_indicator(const BallPoint& apex) {
  const TentSpec t{apex};
  return {[t](const BallPoint& z) { return cplx(tent_contains(t, z) ? 1.0 : 0.0); },
          "tent(" + to_string(apex.vec()) + ")", true};
}

TestFunction TestFunction::weight_reciprocal_on_tent(const Weight& u, const BallPoint& apex) {
  const TentSpec t{apex};
  return {[u, t](const BallPoint& z) { return cplx(tent_contains(t, z) ? 1.0 / u(z) : 0.0); },
          "1/u on tent(" + to_string(apex.vec()) + ")", true};
}

TestFunction TestFunction::custom(std::function<cplx(const BallPoint&)> f, std::string descriptor, bool nonnegative) {
  return {std::move(f), std::move(descriptor), nonnegative};
}

// ---- kernel operators -------------------------------------------------------

KernelOperator::KernelOperator(const OperatorSpec& spec, const QuadratureGrid& grid)
    : spec_(spec), grid_(grid), kp_(spec.exponent()) {
  spec_.validate();
  if (grid.dimension() != spec.n) throw ParameterError("kernel operator: grid dimension differs from the spec");
  if (std::abs(grid.exponent() - spec.b) > 1e-12)
    throw ParameterError("kernel operator: grid exponent t = " + std::to_string(grid.exponent()) +
                         " differs from b = " + std::to_string(spec.b));
  nodes_.resize(grid.size());
  coeff_.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    nodes_[k] = grid.node(k).vec();
    coeff_[k] = grid.coeff(k);
  }
}

std::vector<cplx> KernelOperator::sample(const TestFunction& f) const {
  std::vector<cplx> v(grid_.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    v[k] = f(grid_.node(k));
    if (!std::isfinite(v[k].real()) || !std::isfinite(v[k].imag()))
      throw EvaluationError("test function '" + f.descriptor + "' is not finite at node " + std::to_string(k) + " " +
                            to_string(nodes_[k]));
  }
  return v;
}

cplx KernelOperator::apply_inner(const std::vector<cplx>& f, const BallPoint& z) const {
  if (f.size() != nodes_.size()) throw ParameterError("kernel operator: value vector size mismatch");
  const CVec& zv = z.vec();
  cplx s = 0.0;
  if (spec_.flavor == KernelFlavor::analytic) {
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (f[k] == 0.0) continue;
      s += coeff_[k] * f[k] * kp_.analytic(1.0 - pairing(zv, nodes_[k]));
    }
  } else {
    for (std::size_t k = 0; k < nodes_.size(); ++k) {
      if (f[k] == 0.0) continue;
      s += coeff_[k] * f[k] * kp_.modulus(1.0 - pairing(zv, nodes_[k]));
    }
  }
  return s;
}

cplx KernelOperator::apply(const std::vector<cplx>& f, const BallPoint& z) const {
  cplx s = apply_inner(f, z);
  if (spec_.form == OuterForm::S && spec_.a != 0.0) s *= std::pow(z.defect(), spec_.a);
  return s;
}

cplx apply_kernel_op(const OperatorSpec& spec, const TestFunction& f, const BallPoint& z, const QuadratureGrid& grid) {
  KernelOperator op(spec, grid);
  return op.apply(op.sample(f), z);
}

cplx bergman_project(double b, const TestFunction& f, const BallPoint& z, const QuadratureGrid& grid) {
  OperatorSpec s{z.dim(), 0.0, b, KernelFlavor::analytic, OuterForm::S};
  return apply_kernel_op(s, f, z, grid);
}

double berezin(double b, const TestFunction& f, const BallPoint& z, const QuadratureGrid& grid) {
  const int n = z.dim();
  OperatorSpec s{n, n + 1 + b, b, KernelFlavor::modulus, OuterForm::S};
  return apply_kernel_op(s, f, z, grid).real();
}

// ---- sparse operator ----------------------------------------------------------

SparseOperator::SparseOperator(const BergmanTree& tree, double a, double b, const QuadratureGrid& grid)
    : tree_(tree), grid_(grid) {
  if (!(b > -1.0)) throw ParameterError("sparse operator: needs b > -1");
  if (std::abs(grid.exponent() - b) > 1e-12) throw ParameterError("sparse operator: grid exponent must equal b");
  power_ = -a / (tree.dimension() + 1 + b);
  assign_ = assign_nodes(tree, grid);
  vol_ = dyadic_volumes(tree, grid, assign_);
}

std::vector<double> SparseOperator::coefficients(const std::vector<double>& f) const {
  const DyadicSums s = dyadic_sums(tree_, grid_, assign_, f);
  std::vector<double> c(tree_.size(), 0.0);
  for (std::size_t id = 0; id < c.size(); ++id) {
    const double v = vol_.tent[id];
    if (v > 0.0) c[id] = std::pow(v, power_) * s.tent[id] / v;
  }
  return c;
}

double SparseOperator::at_node(const std::vector<double>& c, int id) const {
  double s = 0.0;
  for (; id >= 0; id = tree_.node(id).parent) s += c[id];
  return s;
}

double SparseOperator::apply(const std::vector<double>& c, const BallPoint& z) const {
  return at_node(c, tree_.locate(z).id);
}

std::vector<double> SparseOperator::apply_grid(const std::vector<double>& f) const {
  const auto c = coefficients(f);
  std::vector<double> chain(tree_.size());
  for (std::size_t id = 0; id < chain.size(); ++id) {
    const int p = tree_.node(static_cast<int>(id)).parent;
    chain[id] = c[id] + (p >= 0 ? chain[p] : 0.0);  // parents precede children
  }
  std::vector<double> out(grid_.size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k)
    if (assign_[k] >= 0) out[k] = chain[assign_[k]];
  return out;
}

double sparse_apply(const BergmanTree& tree, double a, double b, const TestFunction& f, const BallPoint& z,
                    const QuadratureGrid& grid) {
  SparseOperator op(tree, a, b, grid);
  std::vector<double> fv(grid.size());
  for (std::size_t k = 0; k < fv.size(); ++k) fv[k] = f(grid.node(k)).real();
  return op.apply(op.coefficients(fv), z);
}

// ---- maximal function -----------------------------------------------------------

MaximalOperator::MaximalOperator(const BergmanTree& tree, const Weight& u, const QuadratureGrid& grid)
    : tree_(tree), grid_(grid) {
  assign_ = assign_nodes(tree, grid);
  uval_.resize(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) uval_[k] = u(grid.node(k));
  umass_ = dyadic_sums(tree, grid, assign_, uval_);
}

std::vector<double> MaximalOperator::node_averages(const std::vector<double>& absf) const {
  std::vector<double> fu(absf.size());
  for (std::size_t k = 0; k < fu.size(); ++k) fu[k] = std::abs(absf[k]) * uval_[k];
  const DyadicSums s = dyadic_sums(tree_, grid_, assign_, fu);
  std::vector<double> avg(tree_.size(), 0.0);
  for (std::size_t id = 0; id < avg.size(); ++id)
    if (umass_.tent[id] > 0.0) avg[id] = s.tent[id] / umass_.tent[id];
  return avg;
}

double MaximalOperator::apply(const std::vector<double>& avg, const BallPoint& z) const {
  double m = 0.0;
  for (int id = tree_.locate(z).id; id >= 0; id = tree_.node(id).parent) m = std::max(m, avg[id]);
  return m;
}

std::vector<double> MaximalOperator::apply_grid(const std::vector<double>& absf) const {
  const auto avg = node_averages(absf);
  std::vector<double> chain(tree_.size());
  for (std::size_t id = 0; id < chain.size(); ++id) {
    const int p = tree_.node(static_cast<int>(id)).parent;
    chain[id] = std::max(avg[id], p >= 0 ? chain[p] : 0.0);
  }
  std::vector<double> out(grid_.size(), 0.0);
  for (std::size_t k = 0; k < out.size(); ++k)
    if (assign_[k] >= 0) out[k] = chain[assign_[k]];
  return out;
}

double maximal(const BergmanTree& tree, const Weight& u, const TestFunction& f, const BallPoint& z,
               const QuadratureGrid& grid) {
  MaximalOperator m(tree, u, grid);
  std::vector<double> fv(grid.size());
  for (std::size_t k = 0; k < fv.size(); ++k) fv[k] = std::abs(f(grid.node(k)));
  return m.apply(m.node_averages(fv), z);
}

// ---- domination ---------------------------------------------------------------

DominationResult domination_check(const CoveringForest& forest, double a, double b, const TestFunction& f,
                                  const std::vector<BallPoint>& zs, const QuadratureGrid& grid) {
  if (!(b > -1.0)) throw ParameterError("domination_check: needs b > -1");
  if (zs.empty()) throw ParameterError("domination_check: no sample points");
  const int n = grid.dimension();
  OperatorSpec spec{n, a, b, KernelFlavor::modulus, OuterForm::Q};
  KernelOperator q(spec, grid);
  const auto fc = q.sample(f);
  std::vector<double> fv(fc.size());
  for (std::size_t k = 0; k < fv.size(); ++k) {
    if (fc[k].real() < 0.0 || fc[k].imag() != 0.0)
      throw ParameterError("domination_check: f must be real and nonnegative");
    fv[k] = fc[k].real();
  }
  std::vector<SparseOperator> ops;
  std::vector<std::vector<double>> coeffs;
  ops.reserve(forest.size());
  for (const auto& tree : forest.trees()) {
    ops.emplace_back(tree, a, b, grid);
    coeffs.push_back(ops.back().coefficients(fv));
  }
  DominationResult r;
  r.lower_ratio = std::numeric_limits<double>::infinity();
  for (const auto& z : zs) {
    const double qf = q.apply(fc, z).real();
    double sum = 0.0;
    for (std::size_t l = 0; l < ops.size(); ++l) {
      const double tl = ops[l].apply(coeffs[l], z);
      sum += tl;
      if (l == 0) r.single_tree_max = std::max(r.single_tree_max, tl / qf);
    }
    const double ratio = sum / qf;
    r.ratios.push_back(ratio);
    r.lower_ratio = std::min(r.lower_ratio, ratio);
    r.upper_ratio = std::max(r.upper_ratio, ratio);
  }
  return r;
}

nlohmann::json DominationResult::to_json() const {
  return {{"lower_ratio", lower_ratio}, {"upper_ratio", upper_ratio}, {"single_tree_max", single_tree_max},
          {"samples", ratios.size()}};
}

}  // namespace bergman
