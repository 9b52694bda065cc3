#include "ooc/synthesis.hpp"

#include <algorithm>
#include <sstream>

#include "ooc/error.hpp"

namespace ooc {
namespace {

// Square systems go through LU; under-determined ones (several inputs) take
// the minimum-norm solution, over-determined ones least squares. Either way
// the caller verifies the residual.
Matrix solve_block(const Matrix& m, const Matrix& rhs, const char* block) {
  try {
    if (m.is_square()) return solve_linear(m, rhs);
    const Matrix mt = m.transpose();
    if (m.rows() < m.cols()) return mt * solve_linear(m * mt, rhs);
    return solve_linear(mt * m, mt * rhs);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    throw Error(ErrorKind::Unsolvable, std::string("regulator equations: ") + block + " block is singular (" +
                                           e.what() + ")");
  }
}

}  // namespace

double RegulatorResiduals::max() const {
  return std::max({setpoint_state, setpoint_output, disturbance_state, disturbance_output});
}

RegulatorResiduals regulator_residuals(const PlantModel& plant, const Exosystem& exo, const RegulatorSolution& sol) {
  const Matrix& A = plant.A;
  const Matrix& B = plant.B;
  const Matrix& C = plant.C;
  RegulatorResiduals r;
  r.setpoint_state = max_abs(sol.X1 - (A * sol.X1 + B * sol.U1));
  r.setpoint_output = std::abs((C * sol.X1)(0, 0) - 1.0);
  r.disturbance_state = max_abs(sol.X2 * exo.S - (A * sol.X2 + B * sol.U2 + exo.E));
  r.disturbance_output = max_abs(C * sol.X2);
  return r;
}

RegulatorSolution solve_regulator(const PlantModel& plant, const Exosystem& exo) {
  plant.validate();
  exo.validate(plant);
  const std::size_t nx = plant.state_dim();
  const std::size_t nu = plant.input_dim();
  const std::size_t nw = exo.dim();
  RegulatorSolution sol;

  {
    Matrix m(nx + 1, nx + nu);
    m.set_block(0, 0, plant.A - Matrix::identity(nx));
    m.set_block(0, nx, plant.B);
    m.set_block(nx, 0, plant.C);
    Matrix rhs(nx + 1, 1);
    rhs(nx, 0) = 1.0;
    const Matrix x = solve_block(m, rhs, "set-point");
    sol.X1 = x.block(0, 0, nx, 1);
    sol.U1 = x.block(nx, 0, nu, 1);
  }

  if (nw == 0) {
    sol.X2 = Matrix(nx, 0);
    sol.U2 = Matrix(nu, 0);
  } else {
    // vec(X2 S - A X2 - B U2) = (S' kron I - I kron A) vec X2 - (I kron B) vec U2
    const Matrix inw = Matrix::identity(nw);
    Matrix m((nx + 1) * nw, (nx + nu) * nw);
    m.set_block(0, 0, kron(exo.S.transpose(), Matrix::identity(nx)) - kron(inw, plant.A));
    m.set_block(0, nx * nw, -kron(inw, plant.B));
    m.set_block(nx * nw, 0, kron(inw, plant.C));
    Matrix rhs((nx + 1) * nw, 1);
    rhs.set_block(0, 0, vec(exo.E));
    const Matrix x = solve_block(m, rhs, "disturbance");
    sol.X2 = unvec(x.block(0, 0, nx * nw, 1), nx, nw);
    sol.U2 = unvec(x.block(nx * nw, 0, nu * nw, 1), nu, nw);
  }

  const RegulatorResiduals res = regulator_residuals(plant, exo, sol);
  const double sp = std::max(res.setpoint_state, res.setpoint_output);
  const double dist = std::max(res.disturbance_state, res.disturbance_output);
  if (sp > 1e-10 || dist > 1e-10) {
    std::ostringstream msg;
    msg << "regulator equations: " << (sp > 1e-10 ? "set-point" : "disturbance")
        << " block has no exact solution (residual " << std::max(sp, dist) << ")";
    throw Error(ErrorKind::Unsolvable, msg.str());
  }
  return sol;
}

Matrix composite_output(const PlantModel& plant, const Exosystem& exo) {
  Matrix c(1, plant.state_dim() + exo.dim());
  c.set_block(0, 0, plant.C);
  return c;
}

Matrix composite_dynamics(const PlantModel& plant, const Exosystem& exo) {
  const std::size_t nx = plant.state_dim();
  Matrix a(nx + exo.dim(), nx + exo.dim());
  a.set_block(0, 0, plant.A);
  a.set_block(0, nx, exo.E);
  a.set_block(nx, nx, exo.S);
  return a;
}

bool check_composite_observability(const PlantModel& plant, const Exosystem& exo) {
  const Matrix a = composite_dynamics(plant, exo);
  return matrix_rank(observability_matrix(composite_output(plant, exo), a), 1e-9) == a.rows();
}

Matrix observer_error_matrix(const PlantModel& plant, const Exosystem& exo, const Matrix& l1, const Matrix& l2) {
  const std::size_t nx = plant.state_dim();
  if (l1.rows() != nx || l1.cols() != 1 || l2.rows() != exo.dim() || l2.cols() != 1)
    throw Error(ErrorKind::DimensionMismatch, "observer gains must be n_x x 1 and n_w x 1");
  Matrix m(nx + exo.dim(), nx + exo.dim());
  m.set_block(0, 0, plant.A + l1 * plant.C);
  m.set_block(0, nx, exo.E);
  m.set_block(nx, 0, l2 * plant.C);
  m.set_block(nx, nx, exo.S);
  return m;
}

Matrix design_feedback(const PlantModel& plant, const Matrix& q, const Matrix& r) {
  return dlqr_gain(plant.A, plant.B, q, r);
}

ObserverGains design_observer(const PlantModel& plant, const Exosystem& exo, const Matrix& qo, const Matrix& ro) {
  if (!check_composite_observability(plant, exo))
    throw Error(ErrorKind::AssumptionViolated,
                "observability assumption: ([C 0], [[A, E], [0, S]]) is not observable, observer cannot be designed");
  const Matrix g = dlqr_gain(composite_dynamics(plant, exo).transpose(), composite_output(plant, exo).transpose(), qo,
                             ro);
  const Matrix l = g.transpose();
  const std::size_t nx = plant.state_dim();
  ObserverGains gains{l.block(0, 0, nx, 1), l.block(nx, 0, exo.dim(), 1)};
  if (!is_schur(observer_error_matrix(plant, exo, gains.L1, gains.L2)))
    throw Error(ErrorKind::StabilizationFailed, "observer error dynamics are not Schur");
  return gains;
}

ControllerGains compose_gains(const Matrix& k, const Matrix& l1, const Matrix& l2, const RegulatorSolution& reg) {
  return {k, l1, l2, reg.U1 - k * reg.X1, reg.U2 - k * reg.X2};
}

}  // namespace ooc
