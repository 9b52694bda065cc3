#pragma once

#include <cstddef>
#include <vector>

#include "ooc/costs.hpp"
#include "ooc/matlib.hpp"

namespace ooc {

/// Gains of the proportional-integral primal-dual generator.
struct GeneratorParams {
  double alpha = 1.0;  // gradient weight
  double beta = 1.0;   // proportional consensus weight
  double gamma = 0.1;  // step size
  // Whether (alpha, beta, gamma) meet the sufficient exponential-convergence
  // condition for the graph and cost bounds they were checked against.
  bool meets_sufficient_condition = false;

  friend bool operator==(const GeneratorParams&, const GeneratorParams&) = default;
};

/// True iff
///   alpha >= max{1, 1/l, 2 L^2 / (l lambda2)},
///   beta  >= max{1, 4 alpha^2 lambdaN^2 / lambda2^2},
///   0 < gamma < 1 / (beta^4 (lambdaN^2 + L^2)),
/// where l, L are the cost curvature bounds.
bool meets_sufficient_condition(double alpha, double beta, double gamma, double l_lower, double l_upper,
                                double lambda2, double lambdaN);

/// Smallest alpha and beta admitted by the sufficient condition, with gamma at
/// half its strict upper bound.
GeneratorParams default_params(double l_lower, double l_upper, double lambda2, double lambdaN);

struct GeneratorState {
  std::vector<double> z;       // primal estimates of the optimum, one per agent
  std::vector<double> lambda;  // dual variables
  // Rounding error of the lambda accumulation, carried into the next step so
  // that 1'lambda stays put over millions of steps. Empty means zero; not
  // part of the value.
  std::vector<double> lambda_carry;

  static GeneratorState zeros(std::size_t n) { return {std::vector<double>(n), std::vector<double>(n), {}}; }
  friend bool operator==(const GeneratorState& a, const GeneratorState& b) {
    return a.z == b.z && a.lambda == b.lambda;
  }
};

/// One synchronous update:
///   z'      = z - gamma (alpha grad f(z) + beta L z + L lambda)
///   lambda' = lambda + gamma alpha beta L z
/// Both read the pre-step state.
GeneratorState generator_step(const GeneratorState& state, const GeneratorParams& params, const Matrix& laplacian,
                              const CostSuite& suite);

struct GeneratorRun {
  GeneratorState state;
  std::size_t iterations = 0;
  bool converged = false;
  double max_mass_drift = 0.0;  // max_t |1'lambda(t) - 1'lambda(0)|
};

/// Iterates until max_i |z_i(t+1) - z_i(t)| <= tol * gamma or `max_iters`.
/// Throws Diverged once any state entry exceeds 1e12 in magnitude.
GeneratorRun run_generator(const GeneratorState& initial, const GeneratorParams& params, const Matrix& laplacian,
                           const CostSuite& suite, double tol, std::size_t max_iters);

struct EquilibriumInfo {
  double z_star = 0.0;
  std::vector<double> lambda_star;
};

/// Equilibrium (y* 1, lambda*) of the generator, with lambda* pinned by
/// 1'lambda* = lambda_mass. Throws InfeasibleDual if L lambda* =
/// -alpha grad f(y* 1) cannot be met to 1e-8, which happens when y_star is not
/// the aggregate minimizer.
EquilibriumInfo equilibrium(const CostSuite& suite, const Matrix& laplacian, double alpha, double y_star,
                            double lambda_mass);

/// N x (N-1) orthonormal basis of the complement of 1/sqrt(N), from a
/// Householder reflector.
Matrix orthonormal_complement(std::size_t n);

/// V = |Z - Z*|^2 + |xi|^2 / alpha^3 with xi = R'(Lambda - Lambda*) + alpha R'(Z - Z*).
double lyapunov_value(const GeneratorState& state, const GeneratorParams& params, const EquilibriumInfo& eq);
/// Same, with a caller-supplied orthonormal completion `basis`.
double lyapunov_value(const GeneratorState& state, const GeneratorParams& params, const EquilibriumInfo& eq,
                      const Matrix& basis);

}  // namespace ooc
