#include "ooc/observer.hpp"

#include <cmath>

#include "ooc/error.hpp"

namespace ooc {

ObserverState observer_step(const ObserverState& s, const ControllerGains& gains, const PlantModel& plant,
                            const Exosystem& exo, const Matrix& u, double y) {
  if (s.x_hat.rows() != plant.state_dim() || s.w_hat.rows() != exo.dim())
    throw Error(ErrorKind::DimensionMismatch, "observer state size");
  const double y_hat = output(plant, s.x_hat);
  ObserverState next;
  next.x_hat = (plant.A + gains.L1 * plant.C) * s.x_hat + plant.B * u + exo.E * s.w_hat - gains.L1 * y;
  next.w_hat = exo.S * s.w_hat + gains.L2 * (y_hat - y);
  return next;
}

double estimation_error(const ObserverState& s, const Matrix& x_true, const Matrix& w_true) {
  if (x_true.rows() != s.x_hat.rows() || w_true.rows() != s.w_hat.rows())
    throw Error(ErrorKind::DimensionMismatch, "estimation_error sizes");
  const double ex = frobenius_norm(x_true - s.x_hat);
  const double ew = frobenius_norm(w_true - s.w_hat);
  return std::sqrt(ex * ex + ew * ew);
}

}  // namespace ooc
