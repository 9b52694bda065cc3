#include <cmath>
#include <random>

#include "doctest.h"
#include "ooc/observer.hpp"
#include "ooc/plant.hpp"
#include "ooc/synthesis.hpp"
#include "support.hpp"

using namespace ooc;

namespace {

const double kC = std::cos(1.0), kS = std::sin(1.0);
const PlantModel kPlant{Matrix{{1, 1}, {0, 1}}, Matrix{{0.5}, {1}}, Matrix{{1, 0}}};
const Exosystem kExo{Matrix{{kC, kS}, {-kS, kC}}, Matrix{{0.5, 0.5}, {kS - kC, -kC - kS}}};

ControllerGains paper_gains() {
  return compose_gains(Matrix{{-0.4345, -1.0285}}, Matrix{{-1.8184}, {-0.3543}}, Matrix{{-0.1527}, {-0.3141}},
                       solve_regulator(kPlant, kExo));
}

}  // namespace

TEST_CASE("exact estimates stay exact") {
  const ControllerGains g = paper_gains();
  Matrix x{{0.3}, {-1.2}}, w{{1}, {0.5}};
  ObserverState s{x, w};
  for (int t = 0; t < 50; ++t) {
    const Matrix u{{std::sin(0.1 * t)}};
    const double y = output(kPlant, x);
    s = observer_step(s, g, kPlant, kExo, u, y);
    const ExoStep e = exo_step(kExo, w);
    x = plant_step(kPlant, x, u, e.disturbance);
    w = e.w_next;
    CHECK(estimation_error(s, x, w) < 1e-12);
  }
}

TEST_CASE("zero gains and zero state give a zero copy") {
  ControllerGains g = paper_gains();
  g.L1 = Matrix(2, 1);
  g.L2 = Matrix(2, 1);
  const ObserverState s = observer_step(ObserverState::zeros(2, 2), g, kPlant, kExo, Matrix{{0}}, 17.0);
  CHECK(max_abs(s.x_hat) == 0.0);
  CHECK(max_abs(s.w_hat) == 0.0);
}

TEST_CASE("estimation_error") {
  const Matrix x{{1}, {2}}, w{{3}, {4}};
  CHECK(estimation_error({x, w}, x, w) == 0.0);
  CHECK(estimation_error({x, w + Matrix{{1}, {0}}}, x, w) == doctest::Approx(1.0));
}

TEST_CASE("error decays like the bare recursion") {
  const ControllerGains g = paper_gains();
  const Matrix ac = observer_error_matrix(kPlant, kExo, g.L1, g.L2);
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix e0 = testing::random_matrix(rng, 4, 1);
    e0 *= 1.0 / frobenius_norm(e0);
    const Matrix x = testing::random_matrix(rng, 2, 1);
    const Matrix w = testing::random_matrix(rng, 2, 1);
    ObserverState s{x - e0.block(0, 0, 2, 1), w - e0.block(2, 0, 2, 1)};
    Matrix xt = x, wt = w, err = e0;
    for (int t = 0; t < 500; ++t) {
      const Matrix u = testing::random_matrix(rng, 1, 1);
      s = observer_step(s, g, kPlant, kExo, u, output(kPlant, xt));
      const ExoStep ex = exo_step(kExo, wt);
      xt = plant_step(kPlant, xt, u, ex.disturbance);
      wt = ex.w_next;
      err = ac * err;
    }
    CHECK(frobenius_norm(err) <= 1e-6);
    CHECK(estimation_error(s, xt, wt) <= 1e-6);
  }
}
