#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ooc {

/// Dense row-major matrix of doubles. Column vectors are n x 1 matrices.
///
/// Sized for the small systems handled here (a few dozen rows at most), so
/// every routine is a plain O(n^3) dense kernel. Zero-sized dimensions are
/// allowed and behave as empty blocks.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix column(std::span<const double> values);
  static Matrix row(std::span<const double> values);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> data() noexcept { return data_; }
  std::span<const double> data() const noexcept { return data_; }

  Matrix transpose() const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(double s);

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, double s) { return a *= s; }
  friend Matrix operator*(double s, Matrix a) { return a *= s; }
  friend Matrix operator-(Matrix a) { return a *= -1.0; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);

  friend bool operator==(const Matrix& a, const Matrix& b) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double frobenius_norm(const Matrix& m);
double max_abs(const Matrix& m);
/// Maximum absolute row sum.
double inf_norm(const Matrix& m);
bool all_finite(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
/// Column-major stacking, so that vec(A X B) = (B^T kron A) vec(X).
Matrix vec(const Matrix& m);
Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols);
std::vector<double> to_vector(const Matrix& column);

/// Solves A X = B by LU with partial pivoting.
/// Throws SingularMatrix when a pivot drops below 1e-12 * |A|_inf.
Matrix solve_linear(const Matrix& a, const Matrix& b);

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
/// Throws NotSymmetric if |M - M^T| > 1e-10 |M|.
std::vector<double> symmetric_eigenvalues(const Matrix& m);

struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;  // ascending modulus
  bool converged = true;

  double spectral_radius() const;
};

/// All eigenvalues via Householder reduction to Hessenberg form followed by
/// Francis double-shift QR. A failed iteration leaves `converged` false and
/// the remaining eigenvalues unset (zero).
Spectrum eigenvalues_general(const Matrix& m);

/// sqrt(max eig(M^T M)).
double spectral_norm(const Matrix& m);

struct SchurCertificate {
  bool schur = false;
  // Smallest Cholesky pivot of P; NaN when the Lyapunov system was singular.
  double min_pivot = 0.0;
  Matrix lyapunov;  // P solving M^T P M - P = -I
};

/// Decides Schur stability from the discrete Lyapunov equation
/// M^T P M - P = -I: stable iff the solution exists and is positive definite.
SchurCertificate schur_certificate(const Matrix& m);
bool is_schur(const Matrix& m);

/// Smallest pivot of the Cholesky factorization of a symmetric matrix; a
/// non-positive value means the matrix is not positive definite.
double cholesky_min_pivot(const Matrix& m);

/// Infinite-horizon discrete LQR by Riccati value iteration. Returns K such
/// that u = K x, i.e. A + B K is the closed loop.
Matrix dlqr_gain(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r);

/// Numerical rank by row echelon reduction; a pivot counts when it exceeds
/// tol * max|M|.
std::size_t matrix_rank(const Matrix& m, double tol);

}  // namespace ooc
