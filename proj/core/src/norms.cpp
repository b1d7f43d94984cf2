#include "bergman/norms.hpp"

#include "bergman/error.hpp"
#include "bergman/rng.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>

namespace bergman {

namespace {

constexpr std::size_t kMatrixLimit = 6'000'000;  // cached kernel entries

std::vector<double> eval_weight(const QuadratureGrid& g, const Weight& u) {
  std::vector<double> v(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) v[k] = u(g.node(k));
  return v;
}

}  // namespace

GridOperator identity_operator(std::size_t size) {
  auto id = [](const std::vector<cplx>& x, std::vector<cplx>& y) { y = x; };
  return {size, id, id, "identity"};
}

GridOperator kernel_grid_operator(const OperatorSpec& spec, const QuadratureGrid& grid) {
  auto op = std::make_shared<KernelOperator>(spec, grid);
  const std::size_t N = grid.size();
  auto outer = std::make_shared<std::vector<double>>(N, 1.0);
  auto coeff = std::make_shared<std::vector<double>>(N);
  auto nodes = std::make_shared<std::vector<BallPoint>>(N);
  for (std::size_t k = 0; k < N; ++k) {
    (*nodes)[k] = grid.node(k);
    (*coeff)[k] = grid.coeff(k);
    if (spec.form == OuterForm::S && spec.a != 0.0) (*outer)[k] = std::pow((*nodes)[k].defect(), spec.a);
  }
  GridOperator g;
  g.size = N;
  g.name = spec.describe();
  if (N * N <= kMatrixLimit) {
    // K_ij = outer_i k(z_i, w_j) c_j
    auto K = std::make_shared<Eigen::MatrixXcd>(N, N);
    const KernelPower kp(spec.exponent());
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t i = 0; i < N; ++i) {
        const cplx d = 1.0 - pairing((*nodes)[i].vec(), (*nodes)[j].vec());
        const cplx k = spec.flavor == KernelFlavor::analytic ? kp.analytic(d) : cplx(kp.modulus(d));
        (*K)(i, j) = (*outer)[i] * k * (*coeff)[j];
      }
    g.apply = [K](const std::vector<cplx>& x, std::vector<cplx>& y) {
      Eigen::Map<const Eigen::VectorXcd> xv(x.data(), x.size());
      y.resize(x.size());
      Eigen::Map<Eigen::VectorXcd>(y.data(), y.size()) = (*K) * xv;
    };
    g.adjoint = [K](const std::vector<cplx>& x, std::vector<cplx>& y) {
      Eigen::Map<const Eigen::VectorXcd> xv(x.data(), x.size());
      y.resize(x.size());
      Eigen::Map<Eigen::VectorXcd>(y.data(), y.size()) = K->adjoint() * xv;
    };
    return g;
  }
  g.apply = [op, nodes](const std::vector<cplx>& x, std::vector<cplx>& y) {
    y.resize(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = op->apply(x, (*nodes)[i]);
  };
  // kernels are Hermitian: conj k(z_i, w_j) = k(w_j, z_i)
  g.adjoint = [op, nodes, outer, coeff](const std::vector<cplx>& x, std::vector<cplx>& y) {
    std::vector<cplx> xo(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) xo[i] = x[i] * (*outer)[i] / (*coeff)[i];
    y.resize(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) y[j] = (*coeff)[j] * op->apply_inner(xo, (*nodes)[j]);
  };
  return g;
}

GridOperator spectral_kernel_operator(const OperatorSpec& spec, const QuadratureGrid& grid) {
  spec.validate();
  if (spec.n != 1 || grid.dimension() != 1 || !grid.is_product())
    throw ParameterError("spectral_kernel_operator: needs an n = 1 product grid");
  if (spec.flavor != KernelFlavor::analytic) throw ParameterError("spectral_kernel_operator: analytic flavor only");
  if (std::abs(grid.exponent() - spec.b) > 1e-12) throw ParameterError("spectral_kernel_operator: grid exponent must equal b");
  const std::size_t R = grid.radial_count(), M = grid.direction_count(), L = M / 2;
  const double m = spec.exponent(), phi0 = grid.direction_angle(0);
  // (A f)(r_i, th) = sum_l C_l r_i^l e^{i l th} sum_j w_j rho_j^l fhat_l(rho_j),
  // C_l = Gamma(m+l) / (Gamma(m) l!), fhat_l = sum_phi w_phi e^{-i l phi} f
  auto logpow = std::make_shared<std::vector<double>>(R * L);  // l log r_i + log C_l / 2
  auto outer = std::make_shared<std::vector<double>>(R, 1.0);
  auto rw = std::make_shared<std::vector<double>>(R);
  for (std::size_t i = 0; i < R; ++i) {
    const double lr = std::log1p(-grid.gap(i));
    for (std::size_t l = 0; l < L; ++l) {
      // exponential filter exp(-36 (l/L)^8): sidelobes of a sharp cutoff would
      // couple the two ends of a singular weight
      const double x = static_cast<double>(l) / L;
      const double lc = std::lgamma(m + l) - std::lgamma(m) - std::lgamma(l + 1.0) - 36.0 * std::pow(x, 8);
      (*logpow)[i * L + l] = l * lr + 0.5 * lc;
    }
    (*rw)[i] = grid.radial_weight(i);
    if (spec.form == OuterForm::S && spec.a != 0.0) (*outer)[i] = std::pow(grid.node(i * M).defect(), spec.a);
  }
  auto dw = std::make_shared<std::vector<double>>(M);
  for (std::size_t j = 0; j < M; ++j) (*dw)[j] = grid.direction_weight(j);

  GridOperator g;
  g.size = grid.size();
  g.name = "spectral " + spec.describe();
  g.apply = [=](const std::vector<cplx>& x, std::vector<cplx>& y) {
    Eigen::FFT<double> fft;
    std::vector<cplx> ring(M), spec_l(M), acc(L, 0.0), out(M);
    for (std::size_t j = 0; j < R; ++j) {
      for (std::size_t k = 0; k < M; ++k) ring[k] = x[j * M + k] * (*dw)[k];
      fft.fwd(spec_l, ring);
      for (std::size_t l = 0; l < L; ++l)
        acc[l] += (*rw)[j] * std::exp((*logpow)[j * L + l]) * spec_l[l] * std::polar(1.0, -phi0 * l);
    }
    y.assign(x.size(), 0.0);
    for (std::size_t i = 0; i < R; ++i) {
      std::fill(spec_l.begin(), spec_l.end(), cplx(0.0));
      for (std::size_t l = 0; l < L; ++l) spec_l[l] = std::exp((*logpow)[i * L + l]) * acc[l] * std::polar(1.0, phi0 * l);
      fft.inv(out, spec_l);  // scaled by 1/M
      for (std::size_t k = 0; k < M; ++k) y[i * M + k] = (*outer)[i] * static_cast<double>(M) * out[k];
    }
  };
  // A* = C A' C^{-1}, A' being A with the outer factor moved to the input side
  g.adjoint = [=, apply = g.apply](const std::vector<cplx>& x, std::vector<cplx>& y) {
    std::vector<cplx> xs(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) xs[k] = x[k] * (*outer)[k / M] / ((*rw)[k / M] * (*dw)[k % M]);
    apply(xs, y);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] *= (*rw)[k / M] * (*dw)[k % M] / (*outer)[k / M];
  };
  return g;
}

GridOperator sparse_grid_operator(const SparseOperator& op) {
  const QuadratureGrid& grid = op.grid();
  GridOperator g;
  g.size = grid.size();
  g.name = "sparse";
  g.apply = [&op](const std::vector<cplx>& x, std::vector<cplx>& y) {
    std::vector<double> re(x.size()), im(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
      re[k] = x[k].real();
      im[k] = x[k].imag();
    }
    const auto a = op.apply_grid(re), b = op.apply_grid(im);
    y.resize(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) y[k] = cplx(a[k], b[k]);
  };
  // self-adjoint in L^2(c): the l^2 adjoint is C A C^{-1}
  g.adjoint = [&op, &grid, apply = g.apply](const std::vector<cplx>& x, std::vector<cplx>& y) {
    std::vector<cplx> xs(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) xs[k] = x[k] / grid.coeff(k);
    apply(xs, y);
    for (std::size_t k = 0; k < y.size(); ++k) y[k] *= grid.coeff(k);
  };
  return g;
}

double grid_norm(const QuadratureGrid& grid, const std::vector<double>& u, const std::vector<cplx>& f, double p) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.size(); ++k) s += grid.coeff(k) * u[k] * std::pow(std::abs(f[k]), p);
  return std::pow(s, 1.0 / p);
}

NormEstimate weighted_norm(const GridOperator& op, const QuadratureGrid& grid, const Weight& u_in,
                           const Weight& u_out, double p, NormMethod method, const std::vector<Witness>& dictionary,
                           const std::vector<int>& pieces, const NormOptions& opt) {
  if (!(p > 1.0) || !std::isfinite(p)) throw ParameterError("weighted_norm: p must lie in (1, inf)");
  if (op.size != grid.size()) throw ParameterError("weighted_norm: operator and grid sizes differ");
  const std::size_t N = grid.size();
  const auto ui = eval_weight(grid, u_in), uo = eval_weight(grid, u_out);
  NormEstimate est;
  est.grid = grid.descriptor();
  std::vector<cplx> y;

  if (method == NormMethod::power_iteration) {
    if (p != 2.0) throw ParameterError("weighted_norm: power iteration requires p = 2");
    if (!op.adjoint) throw ParameterError("weighted_norm: power iteration needs the adjoint");
    est.method = "power-iteration";
    std::vector<double> di(N), dout2(N);
    for (std::size_t k = 0; k < N; ++k) {
      di[k] = std::sqrt(grid.coeff(k) * ui[k]);
      dout2[k] = grid.coeff(k) * uo[k];
    }
    // g <- D_in^{-1} A* D_out^2 A D_in^{-1} g
    Rng rng(opt.seed);
    std::vector<cplx> g(N), f(N), z(N);
    for (auto& v : g) v = cplx(standard_normal(rng), standard_normal(rng));
    double lambda = 0.0;
    est.converged = false;
    for (int it = 1; it <= opt.max_iterations; ++it) {
      double nrm = 0.0;
      for (const auto& v : g) nrm += std::norm(v);
      nrm = std::sqrt(nrm);
      for (std::size_t k = 0; k < N; ++k) {
        g[k] /= nrm;
        f[k] = g[k] / di[k];
      }
      op.apply(f, y);
      double num = 0.0;
      for (std::size_t k = 0; k < N; ++k) {
        num += dout2[k] * std::norm(y[k]);
        y[k] *= dout2[k];
      }
      const double prev = lambda;
      lambda = num;  // ||B g||^2 with ||g|| = 1
      op.adjoint(y, z);
      for (std::size_t k = 0; k < N; ++k) g[k] = z[k] / di[k];
      est.iterations = it;
      est.last_change = prev > 0.0 ? std::abs(lambda - prev) / lambda : 1.0;
      if (it >= 8 && est.last_change < opt.tolerance) {
        est.converged = true;
        break;
      }
    }
    est.value = std::sqrt(lambda);
    est.witness = "power-iteration vector";
    est.witness_values = f;
    return est;
  }

  est.method = "witness-search";
  auto consider = [&](const std::string& name, const std::vector<cplx>& f) {
    const double d = grid_norm(grid, ui, f, p);
    if (!(d > 0.0)) return;
    op.apply(f, y);
    const double r = grid_norm(grid, uo, y, p) / d;
    if (r > est.value) {
      est.value = r;
      est.witness = name;
      est.witness_values = f;
    }
  };
  for (const auto& w : dictionary) {
    if (w.values.size() != N) throw ParameterError("weighted_norm: witness '" + w.descriptor + "' has the wrong size");
    consider(w.descriptor, w.values);
  }
  if (!pieces.empty()) {
    if (pieces.size() != N) throw ParameterError("weighted_norm: piece map has the wrong size");
    const int np = *std::max_element(pieces.begin(), pieces.end()) + 1;
    Rng rng(opt.seed);
    std::vector<double> level(np);
    std::vector<cplx> f(N);
    for (std::size_t r = 0; r < opt.random_witnesses; ++r) {
      for (auto& l : level) l = uniform01(rng);
      for (std::size_t k = 0; k < N; ++k) f[k] = pieces[k] >= 0 ? level[pieces[k]] : 0.0;
      consider("random piecewise #" + std::to_string(r), f);
    }
  }
  if (est.witness.empty()) throw EvaluationError("weighted_norm: no admissible witness");
  return est;
}

nlohmann::json NormEstimate::to_json() const {
  return {{"value", value},         {"method", method},       {"witness", witness},    {"grid", grid},
          {"converged", converged}, {"iterations", iterations}, {"last_change", last_change}};
}

}  // namespace bergman
