#pragma once

#include "ooc/matlib.hpp"
#include "ooc/plant.hpp"

namespace ooc {

/// Steady-state maps: x_ss = X1 y* + X2 w, u_ss = U1 y* + U2 w.
struct RegulatorSolution {
  Matrix X1;  // n_x x 1
  Matrix U1;  // n_u x 1
  Matrix X2;  // n_x x n_w
  Matrix U2;  // n_u x n_w
};

/// Max-abs residuals of
///   X1 = A X1 + B U1,  1 = C X1,  X2 S = A X2 + B U2 + E,  0 = C X2.
struct RegulatorResiduals {
  double setpoint_state = 0.0;
  double setpoint_output = 0.0;
  double disturbance_state = 0.0;
  double disturbance_output = 0.0;

  double max() const;
};

RegulatorResiduals regulator_residuals(const PlantModel& plant, const Exosystem& exo, const RegulatorSolution& sol);

/// Solves the set-point and disturbance regulator equations. Throws
/// Unsolvable naming the failing block.
RegulatorSolution solve_regulator(const PlantModel& plant, const Exosystem& exo);

/// C~ = [C 0] and A~ = [[A, E], [0, S]].
Matrix composite_output(const PlantModel& plant, const Exosystem& exo);
Matrix composite_dynamics(const PlantModel& plant, const Exosystem& exo);

bool check_composite_observability(const PlantModel& plant, const Exosystem& exo);

/// Estimation error dynamics [[A + L1 C, E], [L2 C, S]].
Matrix observer_error_matrix(const PlantModel& plant, const Exosystem& exo, const Matrix& l1, const Matrix& l2);

/// LQR state feedback K (u = K x) with A + B K Schur.
Matrix design_feedback(const PlantModel& plant, const Matrix& q, const Matrix& r);

struct ObserverGains {
  Matrix L1;  // n_x x 1
  Matrix L2;  // n_w x 1
};

/// Observer gains by LQR duality on (A~', C~'). Throws AssumptionViolated when
/// the composite pair is unobservable.
ObserverGains design_observer(const PlantModel& plant, const Exosystem& exo, const Matrix& qo, const Matrix& ro);

struct ControllerGains {
  Matrix K;
  Matrix L1;
  Matrix L2;
  Matrix K1;  // U1 - K X1
  Matrix K2;  // U2 - K X2
};

ControllerGains compose_gains(const Matrix& k, const Matrix& l1, const Matrix& l2, const RegulatorSolution& reg);

}  // namespace ooc
