#include "ooc/plant.hpp"

#include <complex>
#include <sstream>

#include "ooc/error.hpp"

namespace ooc {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw Error(ErrorKind::DimensionMismatch, what);
}

}  // namespace

void PlantModel::validate() const {
  require(A.is_square() && A.rows() > 0, "plant: A must be square and non-empty");
  require(B.rows() == A.rows(), "plant: B must have as many rows as A");
  require(C.rows() == 1 && C.cols() == A.cols(), "plant: C must be 1 x n_x");
}

void Exosystem::validate(const PlantModel& plant) const {
  require(S.is_square(), "exosystem: S must be square");
  require(E.rows() == plant.state_dim() && E.cols() == S.rows(), "exosystem: E must be n_x x n_w");
}

Matrix plant_step(const PlantModel& m, const Matrix& x, const Matrix& u, const Matrix& d) {
  require(x.rows() == m.state_dim() && x.cols() == 1, "plant_step: state size");
  require(u.rows() == m.input_dim() && u.cols() == 1, "plant_step: input size");
  require(d.rows() == m.state_dim() && d.cols() == 1, "plant_step: disturbance size");
  return m.A * x + m.B * u + d;
}

ExoStep exo_step(const Exosystem& e, const Matrix& w) {
  require(w.rows() == e.dim() && w.cols() == 1, "exo_step: state size");
  return {e.S * w, e.E * w};
}

double output(const PlantModel& m, const Matrix& x) {
  require(x.rows() == m.state_dim() && x.cols() == 1, "output: state size");
  return (m.C * x)(0, 0);
}

Matrix observability_matrix(const Matrix& c, const Matrix& a) {
  const std::size_t n = a.rows();
  Matrix out(c.rows() * n, n);
  Matrix block = c;
  for (std::size_t k = 0; k < n; ++k) {
    out.set_block(k * c.rows(), 0, block);
    block = block * a;
  }
  return out;
}

Matrix controllability_matrix(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.rows();
  Matrix out(n, b.cols() * n);
  Matrix block = b;
  for (std::size_t k = 0; k < n; ++k) {
    out.set_block(0, k * b.cols(), block);
    block = a * block;
  }
  return out;
}

MinimalityReport check_minimality(const PlantModel& m) {
  const std::size_t n = m.state_dim();
  return {matrix_rank(controllability_matrix(m.A, m.B), 1e-9) == n,
          matrix_rank(observability_matrix(m.C, m.A), 1e-9) == n};
}

bool has_no_stable_modes(const Exosystem& e) {
  const Spectrum s = eigenvalues_general(e.S);
  for (const auto& ev : s.eigenvalues)
    if (std::abs(ev) < 1.0 - 1e-9) return false;
  return s.converged;
}

}  // namespace ooc
