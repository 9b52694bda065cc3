#pragma once

#include "ooc/matlib.hpp"
#include "ooc/plant.hpp"
#include "ooc/synthesis.hpp"

namespace ooc {

/// Joint estimate of the agent state and its disturbance state.
struct ObserverState {
  Matrix x_hat;  // n_x x 1
  Matrix w_hat;  // n_w x 1

  static ObserverState zeros(std::size_t nx, std::size_t nw) { return {Matrix(nx, 1), Matrix(nw, 1)}; }
};

/// x^' = (A + L1 C) x^ + B u + E w^ - L1 y
/// w^' = S w^ + L2 (C x^ - y)
ObserverState observer_step(const ObserverState& s, const ControllerGains& gains, const PlantModel& plant,
                            const Exosystem& exo, const Matrix& u, double y);

/// |col(x - x^, w - w^)|
double estimation_error(const ObserverState& s, const Matrix& x_true, const Matrix& w_true);

}  // namespace ooc
