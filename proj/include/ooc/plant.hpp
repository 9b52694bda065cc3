#pragma once

#include <cstddef>

#include "ooc/matlib.hpp"

namespace ooc {

/// x(t+1) = A x(t) + B u(t) + d(t),  y(t) = C x(t), with scalar output.
struct PlantModel {
  Matrix A;
  Matrix B;
  Matrix C;

  std::size_t state_dim() const noexcept { return A.rows(); }
  std::size_t input_dim() const noexcept { return B.cols(); }

  /// Throws DimensionMismatch unless A is square, B has A's rows and C is a
  /// single row with A's columns.
  void validate() const;

  friend bool operator==(const PlantModel&, const PlantModel&) = default;
};

/// Disturbance generator w(t+1) = S w(t), d(t) = E w(t). An absent
/// exosystem is represented by zero-dimensional S and E with no columns.
struct Exosystem {
  Matrix S;
  Matrix E;

  static Exosystem none(std::size_t state_dim) { return {Matrix(0, 0), Matrix(state_dim, 0)}; }

  std::size_t dim() const noexcept { return S.rows(); }
  void validate(const PlantModel& plant) const;

  friend bool operator==(const Exosystem&, const Exosystem&) = default;
};

Matrix plant_step(const PlantModel& m, const Matrix& x, const Matrix& u, const Matrix& d);

struct ExoStep {
  Matrix w_next;      // S w
  Matrix disturbance;  // E w, read from the current w
};
ExoStep exo_step(const Exosystem& e, const Matrix& w);

double output(const PlantModel& m, const Matrix& x);

/// [C; C A; ...; C A^{n-1}]
Matrix observability_matrix(const Matrix& c, const Matrix& a);
/// [B, A B, ..., A^{n-1} B]
Matrix controllability_matrix(const Matrix& a, const Matrix& b);

struct MinimalityReport {
  bool controllable = false;
  bool observable = false;
  bool minimal() const noexcept { return controllable && observable; }
};
MinimalityReport check_minimality(const PlantModel& m);

/// True when every eigenvalue of S has modulus >= 1 - 1e-9.
bool has_no_stable_modes(const Exosystem& e);

}  // namespace ooc
