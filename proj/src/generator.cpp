#include "ooc/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ooc/error.hpp"

namespace ooc {
namespace {

void check_dimensions(const GeneratorState& s, const Matrix& l, const CostSuite& suite) {
  const std::size_t n = s.z.size();
  if (s.lambda.size() != n || l.rows() != n || l.cols() != n || suite.size() != n) {
    std::ostringstream msg;
    msg << "generator sizes: z " << n << ", lambda " << s.lambda.size() << ", L " << l.rows() << "x" << l.cols()
        << ", costs " << suite.size();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

double mass(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

bool meets_sufficient_condition(double alpha, double beta, double gamma, double l_lower, double l_upper,
                                double lambda2, double lambdaN) {
  if (!(l_lower > 0.0 && lambda2 > 0.0)) return false;
  const double alpha_min = std::max({1.0, 1.0 / l_lower, 2.0 * l_upper * l_upper / (l_lower * lambda2)});
  const double beta_min = std::max(1.0, 4.0 * alpha * alpha * lambdaN * lambdaN / (lambda2 * lambda2));
  const double gamma_max = 1.0 / (std::pow(beta, 4) * (lambdaN * lambdaN + l_upper * l_upper));
  return alpha >= alpha_min && beta >= beta_min && gamma > 0.0 && gamma < gamma_max;
}

GeneratorParams default_params(double l_lower, double l_upper, double lambda2, double lambdaN) {
  GeneratorParams p;
  p.alpha = std::max({1.0, 1.0 / l_lower, 2.0 * l_upper * l_upper / (l_lower * lambda2)});
  p.beta = std::max(1.0, 4.0 * p.alpha * p.alpha * lambdaN * lambdaN / (lambda2 * lambda2));
  p.gamma = 0.5 / (std::pow(p.beta, 4) * (lambdaN * lambdaN + l_upper * l_upper));
  p.meets_sufficient_condition = true;
  return p;
}

GeneratorState generator_step(const GeneratorState& state, const GeneratorParams& params, const Matrix& laplacian,
                              const CostSuite& suite) {
  check_dimensions(state, laplacian, suite);
  const std::size_t n = state.z.size();
  GeneratorState next = state;
  const bool carried = state.lambda_carry.size() == n;
  next.lambda_carry.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double lz = 0.0, llam = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      lz += laplacian(i, j) * state.z[j];
      llam += laplacian(i, j) * state.lambda[j];
    }
    const double drift = params.alpha * suite[i].gradient(state.z[i]) + params.beta * lz + llam;
    next.z[i] = state.z[i] - params.gamma * drift;
    // TwoSum: lambda + delta = sum + err exactly
    const double delta = params.gamma * params.alpha * params.beta * lz + (carried ? state.lambda_carry[i] : 0.0);
    const double sum = state.lambda[i] + delta;
    const double back = sum - state.lambda[i];
    next.lambda[i] = sum;
    next.lambda_carry[i] = (state.lambda[i] - (sum - back)) + (delta - back);
  }
  return next;
}

GeneratorRun run_generator(const GeneratorState& initial, const GeneratorParams& params, const Matrix& laplacian,
                           const CostSuite& suite, double tol, std::size_t max_iters) {
  check_dimensions(initial, laplacian, suite);
  GeneratorRun run;
  run.state = initial;
  const double mass0 = mass(initial.lambda);
  const double threshold = tol * params.gamma;
  while (run.iterations < max_iters) {
    GeneratorState next = generator_step(run.state, params, laplacian, suite);
    ++run.iterations;
    double change = 0.0;
    for (std::size_t i = 0; i < next.z.size(); ++i) {
      change = std::max(change, std::abs(next.z[i] - run.state.z[i]));
      if (!(std::abs(next.z[i]) <= 1e12 && std::abs(next.lambda[i]) <= 1e12)) {
        std::ostringstream msg;
        msg << "generator state left |.| <= 1e12 at iteration " << run.iterations;
        throw Error(ErrorKind::Diverged, msg.str());
      }
    }
    run.max_mass_drift = std::max(run.max_mass_drift, std::abs(mass(next.lambda) - mass0));
    run.state = std::move(next);
    if (change <= threshold) {
      run.converged = true;
      break;
    }
  }
  return run;
}

EquilibriumInfo equilibrium(const CostSuite& suite, const Matrix& laplacian, double alpha, double y_star,
                            double lambda_mass) {
  const std::size_t n = suite.size();
  if (laplacian.rows() != n || laplacian.cols() != n)
    throw Error(ErrorKind::DimensionMismatch, "equilibrium: Laplacian size differs from the cost suite");

  // Least squares on [L; 1'] lambda = [-alpha grad f(y* 1); mass].
  Matrix aug(n + 1, n);
  Matrix rhs(n + 1, 1);
  aug.set_block(0, 0, laplacian);
  for (std::size_t j = 0; j < n; ++j) aug(n, j) = 1.0;
  for (std::size_t i = 0; i < n; ++i) rhs(i, 0) = -alpha * suite[i].gradient(y_star);
  rhs(n, 0) = lambda_mass;

  const Matrix at = aug.transpose();
  const Matrix lambda = solve_linear(at * aug, at * rhs);
  const double residual = frobenius_norm(aug * lambda - rhs);
  if (residual > 1e-8) {
    std::ostringstream msg;
    msg << "dual equilibrium residual " << residual << " exceeds 1e-8; y* = " << y_star << " is not the minimizer";
    throw Error(ErrorKind::InfeasibleDual, msg.str());
  }
  return {y_star, to_vector(lambda)};
}

Matrix orthonormal_complement(std::size_t n) {
  // H = I - 2 v v' / v'v with v = r + e1 maps e1 to -r; its other columns
  // span the complement of r.
  const double r = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<double> v(n, r);
  v[0] += 1.0;
  double vv = 0.0;
  for (double x : v) vv += x * x;
  Matrix basis(n, n - 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 1; j < n; ++j) basis(i, j - 1) = (i == j ? 1.0 : 0.0) - 2.0 * v[i] * v[j] / vv;
  return basis;
}

double lyapunov_value(const GeneratorState& state, const GeneratorParams& params, const EquilibriumInfo& eq) {
  return lyapunov_value(state, params, eq, orthonormal_complement(state.z.size()));
}

double lyapunov_value(const GeneratorState& state, const GeneratorParams& params, const EquilibriumInfo& eq,
                      const Matrix& basis) {
  const std::size_t n = state.z.size();
  if (eq.lambda_star.size() != n || basis.rows() != n || basis.cols() + 1 != n)
    throw Error(ErrorKind::DimensionMismatch, "lyapunov_value sizes");
  double dz2 = 0.0;
  std::vector<double> dz(n), dlam(n);
  for (std::size_t i = 0; i < n; ++i) {
    dz[i] = state.z[i] - eq.z_star;
    dlam[i] = state.lambda[i] - eq.lambda_star[i];
    dz2 += dz[i] * dz[i];
  }
  double xi2 = 0.0;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    double xi = 0.0;
    for (std::size_t i = 0; i < n; ++i) xi += basis(i, k) * (dlam[i] + params.alpha * dz[i]);
    xi2 += xi * xi;
  }
  return dz2 + xi2 / std::pow(params.alpha, 3);
}

}  // namespace ooc
