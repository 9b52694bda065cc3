#pragma once

#include <cstddef>
#include <vector>

#include "ooc/matlib.hpp"

namespace ooc {

/// Weighted digraph. weights(i, j) > 0 means node i receives from node j,
/// i.e. the edge (j, i) exists.
class Digraph {
 public:
  explicit Digraph(Matrix weights);

  /// Unit-weight directed ring 0 -> 1 -> ... -> n-1 -> 0.
  static Digraph directed_ring(std::size_t n);

  std::size_t size() const noexcept { return weights_.rows(); }
  const Matrix& weights() const noexcept { return weights_; }
  double weight(std::size_t i, std::size_t j) const { return weights_(i, j); }

  friend bool operator==(const Digraph&, const Digraph&) = default;

 private:
  Matrix weights_;
};

struct GraphSpectrum {
  double lambda2 = 0.0;         // second-smallest eigenvalue of Sym(L)
  double lambdaN = 0.0;         // largest eigenvalue of Sym(L)
  double laplacian_norm = 0.0;  // spectral norm of L
};

/// L = diag(in-degrees) - weights.
Matrix laplacian(const Digraph& g);
bool is_weight_balanced(const Digraph& g);
bool is_strongly_connected(const Digraph& g);

/// Requires a weight-balanced, strongly connected digraph; throws
/// AssumptionViolated otherwise.
GraphSpectrum spectrum(const Digraph& g);

}  // namespace ooc
