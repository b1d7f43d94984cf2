#pragma once

#include "bergman/operators.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/weights.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace bergman {

// Linear map on node-value vectors of one grid. `adjoint` is the plain
// l^2 adjoint (conjugate transpose); it may be empty.
struct GridOperator {
  using Map = std::function<void(const std::vector<cplx>&, std::vector<cplx>&)>;
  std::size_t size = 0;
  Map apply;
  Map adjoint;
  std::string name;
};

GridOperator identity_operator(std::size_t size);
// (A f)_i = spec applied to f at node i; the kernel matrix is cached when small.
GridOperator kernel_grid_operator(const OperatorSpec& spec, const QuadratureGrid& grid);
// n = 1 product grids, analytic flavor: the kernel restricted to the angular
// modes 0 <= l < M/2 that the M-point trapezoid resolves, smoothly filtered
// and applied by FFT per ring. Converges to the operator as M grows; the plain
// matrix does not, since near the sphere the kernel is far narrower than the
// angular spacing.
GridOperator spectral_kernel_operator(const OperatorSpec& spec, const QuadratureGrid& grid);
// T_tree as a map on node values (self-adjoint in L^2_b)
GridOperator sparse_grid_operator(const SparseOperator& op);

enum class NormMethod { power_iteration, witness_search };

struct NormOptions {
  int max_iterations = 300;
  double tolerance = 1e-4;  // relative change of the Rayleigh quotient
  std::uint64_t seed = 5;
  std::size_t random_witnesses = 200;
};

struct Witness {
  std::string descriptor;
  std::vector<cplx> values;
};

struct NormEstimate {
  double value = 0.0;  // ||A f||_out / ||f||_in for the stored witness
  std::string method;
  std::string witness;
  std::string grid;
  bool converged = true;
  int iterations = 0;
  double last_change = 0.0;
  std::vector<cplx> witness_values;
  nlohmann::json to_json() const;
};

// L^p(u_in dv) -> L^p(u_out dv) norm of A on the grid (coefficients give dv).
// Power iteration needs p = 2 and an adjoint. Witness search maximizes over
// the dictionary plus random nonnegative functions, piecewise constant on
// `pieces` (node -> piece id; empty disables the random part).
NormEstimate weighted_norm(const GridOperator& op, const QuadratureGrid& grid, const Weight& u_in,
                           const Weight& u_out, double p, NormMethod method, const std::vector<Witness>& dictionary = {},
                           const std::vector<int>& pieces = {}, const NormOptions& opt = {});

// ||f||_{L^p(u dv)} on the grid
double grid_norm(const QuadratureGrid& grid, const std::vector<double>& uvals, const std::vector<cplx>& f, double p);

}  // namespace bergman
