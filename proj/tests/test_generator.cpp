#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "ooc/costs.hpp"
#include "ooc/error.hpp"
#include "ooc/generator.hpp"
#include "ooc/graph.hpp"
#include "support.hpp"

using namespace ooc;

namespace {

const Matrix kPair = laplacian(Digraph(Matrix{{0, 1}, {1, 0}}));

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

}  // namespace

TEST_CASE("default_params examples") {
  const GeneratorParams p = default_params(1, 3, 1, 2);
  CHECK(p.alpha == 18.0);
  CHECK(p.beta == 5184.0);
  CHECK(p.gamma == doctest::Approx(0.5 / (std::pow(5184.0, 4) * 13.0)));
  CHECK(p.meets_sufficient_condition);

  const GeneratorParams q = default_params(1, 1, 1, 1);
  CHECK(q.alpha == 2.0);
  CHECK(q.beta == 16.0);
  CHECK(q.gamma == doctest::Approx(0.5 / (std::pow(16.0, 4) * 2.0)));

  for (double l2 : {0.3, 1.0, 4.0})
    for (double ln : {4.0, 6.5}) {
      const GeneratorParams r = default_params(0.7, 2.5, l2, ln);
      CHECK(r.gamma < 1.0 / (std::pow(r.beta, 4) * (ln * ln + 2.5 * 2.5)));
      CHECK(meets_sufficient_condition(r.alpha, r.beta, r.gamma, 0.7, 2.5, l2, ln));
    }
}

TEST_CASE("paper generator parameters do not meet the sufficient condition") {
  CHECK_FALSE(meets_sufficient_condition(1, 15, 0.004, 1, 3, 1, 2));
}

TEST_CASE("single agent step is a gradient step") {
  const CostSuite s = quadratic_suite(std::vector<double>{8});
  const GeneratorState next = generator_step(GeneratorState::zeros(1), {1, 1, 0.1, false}, Matrix{{0}}, s);
  CHECK(next.z[0] == doctest::Approx(1.6));
  CHECK(next.lambda[0] == 0.0);
}

TEST_CASE("hand-solved equilibrium is a fixed point") {
  const CostSuite s = quadratic_suite(std::vector<double>{0, 2});
  const GeneratorState eq{{1, 1}, {0, 2}};
  for (double beta : {0.5, 3.0})
    for (double gamma : {0.01, 0.2}) CHECK(generator_step(eq, {1, beta, gamma, false}, kPair, s) == eq);
}

TEST_CASE("step rejects mismatched sizes") {
  const CostSuite s = quadratic_suite(std::vector<double>{0, 2});
  try {
    (void)generator_step(GeneratorState::zeros(3), {}, kPair, s);
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::DimensionMismatch);
  }
}

TEST_CASE("dual mass is conserved by a step") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const Digraph g = testing::random_balanced_digraph(rng, n, 2);
    std::vector<double> centers(n);
    for (double& c : centers) c = u(rng);
    GeneratorState st = GeneratorState::zeros(n);
    for (std::size_t i = 0; i < n; ++i) {
      st.z[i] = u(rng);
      st.lambda[i] = u(rng);
    }
    const GeneratorState next = generator_step(st, {1.3, 2.0, 0.05, false}, laplacian(g), quadratic_suite(centers));
    CHECK(std::abs(sum(next.lambda) - sum(st.lambda)) < 1e-12);
  }
}

TEST_CASE("run examples") {
  const CostSuite paper = builtin_suite("paper");
  const GeneratorRun pr =
      run_generator(GeneratorState::zeros(4), {1, 15, 0.004, false}, laplacian(Digraph::directed_ring(4)), paper,
                    1e-10, 200000);
  CHECK(pr.converged);
  for (double z : pr.state.z) CHECK(std::abs(z - 3.24) < 1e-2);

  const GeneratorRun one = run_generator(GeneratorState::zeros(1), {1, 1, 0.1, false}, Matrix{{0}},
                                         quadratic_suite(std::vector<double>{8}), 1e-12, 10000);
  CHECK(one.converged);
  CHECK(std::abs(one.state.z[0] - 8) < 1e-10);

  // 2-ring, centers (0, 2): sym(L) = L, lambda2 = lambdaN = 2
  const GeneratorParams p = default_params(2, 2, 2, 2);
  const GeneratorRun two =
      run_generator(GeneratorState::zeros(2), p, kPair, quadratic_suite(std::vector<double>{0, 2}), 1e-8, 20000000);
  CHECK(two.converged);
  for (double z : two.state.z) CHECK(std::abs(z - 1.0) < 1e-6);
  CHECK(two.max_mass_drift <= 1e-12);
}

TEST_CASE("run reports divergence") {
  // a huge step makes the iteration blow up
  try {
    (void)run_generator(GeneratorState{{1, -1}, {0, 0}}, {1, 1, 5.0, false}, kPair,
                        quadratic_suite(std::vector<double>{0, 2}), 1e-12, 100000);
    FAIL("expected Diverged");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Diverged);
  }
}

TEST_CASE("equilibrium examples") {
  const CostSuite s = quadratic_suite(std::vector<double>{0, 2});
  const EquilibriumInfo eq = equilibrium(s, kPair, 1.0, 1.0, 2.0);
  CHECK(eq.z_star == 1.0);
  CHECK(std::abs(eq.lambda_star[0]) < 1e-12);
  CHECK(std::abs(eq.lambda_star[1] - 2) < 1e-12);

  const EquilibriumInfo single = equilibrium(quadratic_suite(std::vector<double>{5}), Matrix{{0}}, 1.0, 5.0, 3.5);
  CHECK(single.lambda_star[0] == doctest::Approx(3.5));

  const CostSuite paper = builtin_suite("paper");
  const auto [lo, hi] = find_bracket(paper);
  const double y = oracle_minimize(paper, lo, hi);
  const Matrix l = laplacian(Digraph::directed_ring(4));
  const EquilibriumInfo pe = equilibrium(paper, l, 1.0, y, 0.0);
  for (std::size_t i = 0; i < 4; ++i) {
    double li = 0;
    for (std::size_t j = 0; j < 4; ++j) li += l(i, j) * pe.lambda_star[j];
    CHECK(std::abs(paper[i].gradient(y) + li) < 1e-8);
  }
  // fixed point of the step to 1e-12
  const GeneratorState at{std::vector<double>(4, y), pe.lambda_star};
  const GeneratorState next = generator_step(at, {1, 15, 0.004, false}, l, paper);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::abs(next.z[i] - y) < 1e-12);
    CHECK(std::abs(next.lambda[i] - pe.lambda_star[i]) < 1e-12);
  }
}

TEST_CASE("equilibrium rejects a wrong optimum") {
  try {
    (void)equilibrium(quadratic_suite(std::vector<double>{0, 2}), kPair, 1.0, 0.5, 0.0);
    FAIL("expected InfeasibleDual");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::InfeasibleDual);
  }
}

TEST_CASE("orthonormal complement") {
  for (std::size_t n : {2u, 3u, 5u, 8u}) {
    const Matrix r = orthonormal_complement(n);
    CHECK(testing::max_diff(r.transpose() * r, Matrix::identity(n - 1)) < 1e-14);
    CHECK(max_abs(Matrix(1, n, 1.0) * r) < 1e-14);
  }
}

TEST_CASE("lyapunov value") {
  const CostSuite s = quadratic_suite(std::vector<double>{0, 2, 7});
  const Matrix l = laplacian(Digraph::directed_ring(3));
  const EquilibriumInfo eq = equilibrium(s, l, 2.0, 3.0, 1.0);
  const GeneratorParams p{2.0, 3.0, 0.01, false};
  CHECK(lyapunov_value({{3, 3, 3}, eq.lambda_star}, p, eq) == doctest::Approx(0.0));

  // basis independence: rotate the Householder complement by a Givens rotation
  const Matrix r = orthonormal_complement(3);
  const double th = 0.7;
  const Matrix rot{{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}};
  const GeneratorState st{{1, -4, 2.5}, {0.3, 9, -2}};
  const double v1 = lyapunov_value(st, p, eq, r);
  const double v2 = lyapunov_value(st, p, eq, r * rot);
  CHECK(v1 > 0);
  CHECK(std::abs(v1 - v2) < 1e-10);

  // explicit form |dz|^2 + |Pi (dl + a dz)|^2 / a^3 with the projector Pi = I - 11'/n
  double dz2 = 0, proj2 = 0, mean = 0;
  std::vector<double> q(3);
  for (std::size_t i = 0; i < 3; ++i) {
    const double dz = st.z[i] - 3.0;
    dz2 += dz * dz;
    q[i] = st.lambda[i] - eq.lambda_star[i] + 2.0 * dz;
    mean += q[i] / 3;
  }
  for (double v : q) proj2 += (v - mean) * (v - mean);
  CHECK(std::abs(v1 - (dz2 + proj2 / 8.0)) < 1e-10);
}
