#include <random>

#include "doctest.h"
#include "ooc/error.hpp"
#include "ooc/graph.hpp"
#include "support.hpp"

using namespace ooc;

TEST_CASE("laplacian examples") {
  CHECK(laplacian(Digraph(Matrix{{0, 1}, {1, 0}})) == Matrix{{1, -1}, {-1, 1}});
  CHECK(laplacian(Digraph(Matrix{{0}})) == Matrix{{0}});

  // each node hears only its predecessor: L = I - P
  const Matrix l = laplacian(Digraph::directed_ring(4));
  const Matrix expect{{1, 0, 0, -1}, {-1, 1, 0, 0}, {0, -1, 1, 0}, {0, 0, -1, 1}};
  CHECK(l == expect);
}

TEST_CASE("digraph validation") {
  CHECK_THROWS_AS(Digraph(Matrix{{1, 0}, {0, 0}}), Error);
  CHECK_THROWS_AS(Digraph(Matrix{{0, -1}, {1, 0}}), Error);
  CHECK_THROWS_AS(Digraph(Matrix(2, 3)), Error);
  CHECK_THROWS_AS(Digraph{Matrix{}}, Error);
}

TEST_CASE("laplacian annihilates ones exactly for dyadic weights") {
  const Digraph g(Matrix{{0, 0.5, 2}, {0.25, 0, 1}, {3, 0, 0}});
  CHECK(max_abs(laplacian(g) * Matrix(3, 1, 1.0)) == 0.0);
}

TEST_CASE("weight balance") {
  CHECK(is_weight_balanced(Digraph::directed_ring(4)));
  CHECK_FALSE(is_weight_balanced(Digraph(Matrix{{0, 1}, {0, 0}})));
  CHECK(is_weight_balanced(Digraph(Matrix{{0, 2, 3}, {2, 0, 0.5}, {3, 0.5, 0}})));
}

TEST_CASE("strong connectivity") {
  CHECK(is_strongly_connected(Digraph::directed_ring(4)));
  CHECK_FALSE(is_strongly_connected(Digraph(Matrix(2, 2))));
  // chain 1 -> 2 -> 3
  CHECK_FALSE(is_strongly_connected(Digraph(Matrix{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}})));
  CHECK(is_strongly_connected(Digraph(Matrix{{0}})));
}

TEST_CASE("spectrum examples") {
  const GraphSpectrum ring = spectrum(Digraph::directed_ring(4));
  CHECK(std::abs(ring.lambda2 - 1.0) < 1e-9);
  CHECK(std::abs(ring.lambdaN - 2.0) < 1e-9);
  CHECK(std::abs(ring.laplacian_norm - 2.0) < 1e-9);

  const GraphSpectrum two = spectrum(Digraph(Matrix{{0, 1}, {1, 0}}));
  CHECK(std::abs(two.lambda2 - 2.0) < 1e-12);
  CHECK(std::abs(two.lambdaN - 2.0) < 1e-12);
}

TEST_CASE("spectrum rejects graphs violating the assumption") {
  try {
    (void)spectrum(Digraph(Matrix{{0, 1}, {0, 0}}));
    FAIL("expected AssumptionViolated");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::AssumptionViolated);
    CHECK(std::string(e.what()).find("strongly connected and weight-balanced") != std::string::npos);
  }
}

TEST_CASE("laplacian properties on random digraphs") {
  std::mt19937_64 rng(29);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 6;
    // arbitrary digraph: L 1 = 0 always, 1' L = 0 iff balanced
    Matrix w(n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) w(i, j) = (i != j && u(rng) < 0.5) ? u(rng) : 0.0;
    const Digraph g(w);
    const Matrix l = laplacian(g);
    const Matrix ones(n, 1, 1.0);
    CHECK(max_abs(l * ones) <= 1e-15 * (1.0 + inf_norm(l)));
    CHECK((max_abs(ones.transpose() * l) <= 1e-12) == is_weight_balanced(g));

    const Digraph b = testing::random_balanced_digraph(rng, n, trial % 3);
    REQUIRE(is_weight_balanced(b));
    REQUIRE(is_strongly_connected(b));
    const Matrix lb = laplacian(b);
    const auto ev = symmetric_eigenvalues(0.5 * (lb + lb.transpose()));
    CHECK(ev.front() >= -1e-10);
    CHECK(ev[1] > 1e-10);
    const GraphSpectrum sp = spectrum(b);
    CHECK(sp.lambda2 <= sp.lambdaN);
    CHECK(sp.laplacian_norm >= sp.lambdaN - 1e-12);
  }
}
