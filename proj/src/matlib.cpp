#include "ooc/matlib.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ooc/error.hpp"

namespace ooc {
namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << op << ": " << a.rows() << "x" << a.cols() << " vs " << b.rows() << "x" << b.cols();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw Error(ErrorKind::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::column(std::span<const double> values) {
  Matrix m(values.size(), 1);
  std::copy(values.begin(), values.end(), m.data_.begin());
  return m;
}

Matrix Matrix::row(std::span<const double> values) {
  Matrix m(1, values.size());
  std::copy(values.begin(), values.end(), m.data_.begin());
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw Error(ErrorKind::DimensionMismatch, "block out of range");
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  if (r0 + b.rows() > rows_ || c0 + b.cols() > cols_)
    throw Error(ErrorKind::DimensionMismatch, "set_block out of range");
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require_same_shape(*this, o, "operator+");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require_same_shape(*this, o, "operator-");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream msg;
    msg << "product " << a.rows() << "x" << a.cols() << " * " << b.rows() << "x" << b.cols();
    throw Error(ErrorKind::DimensionMismatch, msg.str());
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s += v * v;
  return std::sqrt(s);
}

double max_abs(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data()) s = std::max(s, std::abs(v));
  return s;
}

double inf_norm(const Matrix& m) {
  double best = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < m.cols(); ++j) s += std::abs(m(i, j));
    best = std::max(best, s);
  }
  return best;
}

bool all_finite(const Matrix& m) {
  return std::all_of(m.data().begin(), m.data().end(), [](double v) { return std::isfinite(v); });
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix k(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      for (std::size_t p = 0; p < b.rows(); ++p)
        for (std::size_t q = 0; q < b.cols(); ++q) k(i * b.rows() + p, j * b.cols() + q) = a(i, j) * b(p, q);
  return k;
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) throw Error(ErrorKind::DimensionMismatch, "hstack row mismatch");
  Matrix m(a.rows(), a.cols() + b.cols());
  m.set_block(0, 0, a);
  m.set_block(0, a.cols(), b);
  return m;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) throw Error(ErrorKind::DimensionMismatch, "vstack column mismatch");
  Matrix m(a.rows() + b.rows(), a.cols());
  m.set_block(0, 0, a);
  m.set_block(a.rows(), 0, b);
  return m;
}

Matrix vec(const Matrix& m) {
  Matrix v(m.size(), 1);
  for (std::size_t j = 0; j < m.cols(); ++j)
    for (std::size_t i = 0; i < m.rows(); ++i) v(j * m.rows() + i, 0) = m(i, j);
  return v;
}

Matrix unvec(const Matrix& v, std::size_t rows, std::size_t cols) {
  if (v.size() != rows * cols) throw Error(ErrorKind::DimensionMismatch, "unvec size");
  Matrix m(rows, cols);
  for (std::size_t j = 0; j < cols; ++j)
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = v.data()[j * rows + i];
  return m;
}

std::vector<double> to_vector(const Matrix& column) {
  return {column.data().begin(), column.data().end()};
}

Matrix solve_linear(const Matrix& a, const Matrix& b) {
  if (!a.is_square()) throw Error(ErrorKind::DimensionMismatch, "solve_linear needs a square matrix");
  if (b.rows() != a.rows()) throw Error(ErrorKind::DimensionMismatch, "solve_linear right-hand side rows");
  const std::size_t n = a.rows();
  const double tol = 1e-12 * inf_norm(a);
  Matrix lu = a;
  Matrix x = b;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(lu(i, k)) > std::abs(lu(piv, k))) piv = i;
    if (!(std::abs(lu(piv, k)) > tol)) {
      std::ostringstream msg;
      msg << "pivot " << lu(piv, k) << " at column " << k << " below " << tol;
      throw Error(ErrorKind::SingularMatrix, msg.str());
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(lu(k, j), lu(piv, j));
      for (std::size_t j = 0; j < x.cols(); ++j) std::swap(x(k, j), x(piv, j));
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double f = lu(i, k) / lu(k, k);
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) lu(i, j) -= f * lu(k, j);
      for (std::size_t j = 0; j < x.cols(); ++j) x(i, j) -= f * x(k, j);
    }
  }
  for (std::size_t c = 0; c < x.cols(); ++c) {
    for (std::size_t ii = n; ii-- > 0;) {
      double s = x(ii, c);
      for (std::size_t j = ii + 1; j < n; ++j) s -= lu(ii, j) * x(j, c);
      x(ii, c) = s / lu(ii, ii);
    }
  }
  return x;
}

std::vector<double> symmetric_eigenvalues(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::DimensionMismatch, "symmetric_eigenvalues needs a square matrix");
  const double scale = frobenius_norm(m);
  if (frobenius_norm(m - m.transpose()) > 1e-10 * scale) throw Error(ErrorKind::NotSymmetric, "matrix is not symmetric");

  const std::size_t n = m.rows();
  Matrix a = m;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (std::sqrt(off) <= 1e-15 * scale) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

double Spectrum::spectral_radius() const {
  double r = 0.0;
  for (const auto& e : eigenvalues) r = std::max(r, std::abs(e));
  return r;
}

namespace {

// Householder reduction to upper Hessenberg form (in place).
void reduce_to_hessenberg(Matrix& h) {
  const std::size_t n = h.rows();
  if (n < 3) return;
  std::vector<double> ort(n, 0.0);
  for (std::size_t m = 1; m + 1 < n; ++m) {
    double scale = 0.0;
    for (std::size_t i = m; i < n; ++i) scale += std::abs(h(i, m - 1));
    if (scale == 0.0) continue;

    double hh = 0.0;
    for (std::size_t i = n; i-- > m;) {
      ort[i] = h(i, m - 1) / scale;
      hh += ort[i] * ort[i];
    }
    double g = std::sqrt(hh);
    if (ort[m] > 0) g = -g;
    hh -= ort[m] * g;
    ort[m] -= g;

    for (std::size_t j = m; j < n; ++j) {
      double f = 0.0;
      for (std::size_t i = n; i-- > m;) f += ort[i] * h(i, j);
      f /= hh;
      for (std::size_t i = m; i < n; ++i) h(i, j) -= f * ort[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double f = 0.0;
      for (std::size_t j = n; j-- > m;) f += ort[j] * h(i, j);
      f /= hh;
      for (std::size_t j = m; j < n; ++j) h(i, j) -= f * ort[j];
    }
    h(m, m - 1) = scale * g;
  }
  for (std::size_t i = 2; i < n; ++i)
    for (std::size_t j = 0; j + 1 < i; ++j) h(i, j) = 0.0;
}

}  // namespace

Spectrum eigenvalues_general(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::DimensionMismatch, "eigenvalues_general needs a square matrix");
  const int nn = static_cast<int>(m.rows());
  Spectrum out;
  out.eigenvalues.assign(nn, {0.0, 0.0});
  if (nn == 0) return out;

  Matrix h = m;
  reduce_to_hessenberg(h);
  auto H = [&h](int i, int j) -> double& { return h(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };

  std::vector<double> re(nn, 0.0), im(nn, 0.0);
  const double eps = std::numeric_limits<double>::epsilon();
  double norm = 0.0;
  for (int i = 0; i < nn; ++i)
    for (int j = std::max(i - 1, 0); j < nn; ++j) norm += std::abs(H(i, j));

  constexpr int kMaxIterPerRoot = 200;
  int n = nn - 1;
  const int low = 0;
  double exshift = 0.0;
  double p = 0, q = 0, r = 0, s = 0, z = 0, t, w, x, y;
  int iter = 0;

  while (n >= low) {
    int l = n;
    while (l > low) {
      s = std::abs(H(l - 1, l - 1)) + std::abs(H(l, l));
      if (s == 0.0) s = norm;
      if (std::abs(H(l, l - 1)) < eps * s) break;
      --l;
    }

    if (l == n) {
      re[n] = H(n, n) + exshift;
      im[n] = 0.0;
      --n;
      iter = 0;
    } else if (l == n - 1) {
      w = H(n, n - 1) * H(n - 1, n);
      p = (H(n - 1, n - 1) - H(n, n)) / 2.0;
      q = p * p + w;
      z = std::sqrt(std::abs(q));
      x = H(n, n) + exshift;
      if (q >= 0) {
        z = p >= 0 ? p + z : p - z;
        re[n - 1] = x + z;
        re[n] = z != 0.0 ? x - w / z : x + z;
        im[n - 1] = im[n] = 0.0;
      } else {
        re[n - 1] = re[n] = x + p;
        im[n - 1] = z;
        im[n] = -z;
      }
      n -= 2;
      iter = 0;
    } else {
      x = H(n, n);
      y = 0.0;
      w = 0.0;
      if (l < n) {
        y = H(n - 1, n - 1);
        w = H(n, n - 1) * H(n - 1, n);
      }
      // Exceptional shifts break cycles in the standard Francis iteration.
      if (iter == 10) {
        exshift += x;
        for (int i = low; i <= n; ++i) H(i, i) -= x;
        s = std::abs(H(n, n - 1)) + std::abs(H(n - 1, n - 2));
        x = y = 0.75 * s;
        w = -0.4375 * s * s;
      }
      if (iter == 30) {
        s = (y - x) / 2.0;
        s = s * s + w;
        if (s > 0) {
          s = std::sqrt(s);
          if (y < x) s = -s;
          s = x - w / ((y - x) / 2.0 + s);
          for (int i = low; i <= n; ++i) H(i, i) -= s;
          exshift += s;
          x = y = w = 0.964;
        }
      }
      if (++iter > kMaxIterPerRoot) {
        out.converged = false;
        break;
      }

      int mm = n - 2;
      while (mm >= l) {
        z = H(mm, mm);
        r = x - z;
        s = y - z;
        p = (r * s - w) / H(mm + 1, mm) + H(mm, mm + 1);
        q = H(mm + 1, mm + 1) - z - r - s;
        r = H(mm + 2, mm + 1);
        s = std::abs(p) + std::abs(q) + std::abs(r);
        p /= s;
        q /= s;
        r /= s;
        if (mm == l) break;
        if (std::abs(H(mm, mm - 1)) * (std::abs(q) + std::abs(r)) <
            eps * (std::abs(p) * (std::abs(H(mm - 1, mm - 1)) + std::abs(z) + std::abs(H(mm + 1, mm + 1)))))
          break;
        --mm;
      }
      for (int i = mm + 2; i <= n; ++i) {
        H(i, i - 2) = 0.0;
        if (i > mm + 2) H(i, i - 3) = 0.0;
      }

      for (int k = mm; k <= n - 1; ++k) {
        const bool notlast = k != n - 1;
        if (k != mm) {
          p = H(k, k - 1);
          q = H(k + 1, k - 1);
          r = notlast ? H(k + 2, k - 1) : 0.0;
          x = std::abs(p) + std::abs(q) + std::abs(r);
          if (x == 0.0) continue;
          p /= x;
          q /= x;
          r /= x;
        }
        s = std::sqrt(p * p + q * q + r * r);
        if (p < 0) s = -s;
        if (s == 0.0) continue;
        if (k != mm)
          H(k, k - 1) = -s * x;
        else if (l != mm)
          H(k, k - 1) = -H(k, k - 1);
        p += s;
        x = p / s;
        y = q / s;
        z = r / s;
        q /= p;
        r /= p;
        for (int j = k; j < nn; ++j) {
          t = H(k, j) + q * H(k + 1, j);
          if (notlast) {
            t += r * H(k + 2, j);
            H(k + 2, j) -= t * z;
          }
          H(k, j) -= t * x;
          H(k + 1, j) -= t * y;
        }
        for (int i = 0; i <= std::min(n, k + 3); ++i) {
          t = x * H(i, k) + y * H(i, k + 1);
          if (notlast) {
            t += z * H(i, k + 2);
            H(i, k + 2) -= t * r;
          }
          H(i, k) -= t;
          H(i, k + 1) -= t * q;
        }
      }
    }
  }

  for (int i = 0; i < nn; ++i) out.eigenvalues[i] = {re[i], im[i]};
  std::stable_sort(out.eigenvalues.begin(), out.eigenvalues.end(), [](const auto& a, const auto& b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (ma != mb) return ma < mb;
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

double spectral_norm(const Matrix& m) {
  if (m.empty()) return 0.0;
  const Matrix g = m.transpose() * m;
  const Matrix sym = 0.5 * (g + g.transpose());
  const auto ev = symmetric_eigenvalues(sym);
  return std::sqrt(std::max(0.0, ev.back()));
}

double cholesky_min_pivot(const Matrix& m) {
  const std::size_t n = m.rows();
  Matrix l(n, n);
  double min_pivot = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    min_pivot = std::min(min_pivot, d);
    if (!(d > 0.0)) return d;
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return min_pivot;
}

SchurCertificate schur_certificate(const Matrix& m) {
  if (!m.is_square()) throw Error(ErrorKind::DimensionMismatch, "is_schur needs a square matrix");
  SchurCertificate cert;
  const std::size_t n = m.rows();
  if (n == 0) {
    cert.schur = true;
    cert.min_pivot = std::numeric_limits<double>::infinity();
    return cert;
  }
  const Matrix mt = m.transpose();
  const Matrix system = kron(mt, mt) - Matrix::identity(n * n);
  const Matrix rhs = -vec(Matrix::identity(n));
  Matrix p;
  try {
    p = unvec(solve_linear(system, rhs), n, n);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SingularMatrix) throw;
    cert.min_pivot = std::numeric_limits<double>::quiet_NaN();
    return cert;
  }
  p = 0.5 * (p + p.transpose());
  cert.min_pivot = cholesky_min_pivot(p);
  cert.schur = all_finite(p) && cert.min_pivot > 1e-10;
  cert.lyapunov = std::move(p);
  return cert;
}

bool is_schur(const Matrix& m) { return schur_certificate(m).schur; }

Matrix dlqr_gain(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& r) {
  const std::size_t n = a.rows();
  if (!a.is_square() || b.rows() != n || q.rows() != n || !q.is_square() || !r.is_square() || r.rows() != b.cols())
    throw Error(ErrorKind::DimensionMismatch, "dlqr_gain dimensions");

  const Matrix at = a.transpose();
  const Matrix bt = b.transpose();
  Matrix p = q;
  constexpr int kMaxIter = 100000;
  for (int it = 0; it < kMaxIter; ++it) {
    const Matrix pb = p * b;
    const Matrix gain_term = solve_linear(r + bt * pb, pb.transpose());  // (R + B'PB)^-1 B'P
    Matrix next = q + at * (p - pb * gain_term) * a;
    next = 0.5 * (next + next.transpose());
    if (!all_finite(next) || frobenius_norm(next) > 1e15)
      throw Error(ErrorKind::StabilizationFailed, "Riccati recursion diverged");
    const double change = frobenius_norm(next - p);
    p = std::move(next);
    if (change <= 1e-12 * frobenius_norm(p)) break;
  }
  const Matrix pb = p * b;
  Matrix k = -solve_linear(r + bt * pb, bt * p * a);
  if (!is_schur(a + b * k)) throw Error(ErrorKind::StabilizationFailed, "closed loop A + B K is not Schur");
  return k;
}

std::size_t matrix_rank(const Matrix& m, double tol) {
  Matrix a = m;
  const double threshold = tol * max_abs(m);
  std::size_t rank = 0;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t piv = row;
    for (std::size_t i = row + 1; i < a.rows(); ++i)
      if (std::abs(a(i, col)) > std::abs(a(piv, col))) piv = i;
    if (!(std::abs(a(piv, col)) > threshold)) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(row, j), a(piv, j));
    for (std::size_t i = row + 1; i < a.rows(); ++i) {
      const double f = a(i, col) / a(row, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    ++row;
    ++rank;
  }
  return rank;
}

}  // namespace ooc
