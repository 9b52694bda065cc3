#include "ooc/graph.hpp"

#include <cmath>
#include <deque>

#include "ooc/error.hpp"

namespace ooc {

Digraph::Digraph(Matrix weights) : weights_(std::move(weights)) {
  if (!weights_.is_square() || weights_.rows() == 0)
    throw Error(ErrorKind::DimensionMismatch, "digraph weights must be a non-empty square matrix");
  for (std::size_t i = 0; i < size(); ++i) {
    if (weights_(i, i) != 0.0) throw Error(ErrorKind::AssumptionViolated, "digraph weights must have a zero diagonal");
    for (std::size_t j = 0; j < size(); ++j)
      if (!(weights_(i, j) >= 0.0) || !std::isfinite(weights_(i, j)))
        throw Error(ErrorKind::AssumptionViolated, "digraph weights must be finite and nonnegative");
  }
}

Digraph Digraph::directed_ring(std::size_t n) {
  Matrix w(n, n);
  if (n > 1)
    for (std::size_t i = 0; i < n; ++i) w(i, (i + n - 1) % n) = 1.0;
  return Digraph(std::move(w));
}

Matrix laplacian(const Digraph& g) {
  const std::size_t n = g.size();
  Matrix l(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    double in_degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      in_degree += g.weight(i, j);
      l(i, j) = -g.weight(i, j);
    }
    l(i, i) = in_degree;
  }
  return l;
}

bool is_weight_balanced(const Digraph& g) {
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    double in_degree = 0.0, out_degree = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      in_degree += g.weight(i, j);
      out_degree += g.weight(j, i);
    }
    if (std::abs(in_degree - out_degree) > 1e-12) return false;
  }
  return true;
}

namespace {

// Nodes reachable from node 0 following edges forward (reverse = false) or
// backward.
std::vector<bool> reachable_from_first(const Digraph& g, bool reverse) {
  const std::size_t n = g.size();
  std::vector<bool> seen(n, false);
  std::deque<std::size_t> frontier{0};
  seen[0] = true;
  while (!frontier.empty()) {
    const std::size_t v = frontier.front();
    frontier.pop_front();
    for (std::size_t u = 0; u < n; ++u) {
      // Forward edge v -> u exists when u receives from v.
      const double w = reverse ? g.weight(v, u) : g.weight(u, v);
      if (w > 0.0 && !seen[u]) {
        seen[u] = true;
        frontier.push_back(u);
      }
    }
  }
  return seen;
}

}  // namespace

bool is_strongly_connected(const Digraph& g) {
  for (bool reverse : {false, true}) {
    const auto seen = reachable_from_first(g, reverse);
    for (bool s : seen)
      if (!s) return false;
  }
  return true;
}

GraphSpectrum spectrum(const Digraph& g) {
  if (!is_weight_balanced(g) || !is_strongly_connected(g))
    throw Error(ErrorKind::AssumptionViolated,
                "graph assumption: the digraph must be strongly connected and weight-balanced");
  const Matrix l = laplacian(g);
  const auto ev = symmetric_eigenvalues(0.5 * (l + l.transpose()));
  GraphSpectrum s;
  s.lambda2 = ev.size() > 1 ? ev[1] : 0.0;
  s.lambdaN = ev.back();
  s.laplacian_norm = spectral_norm(l);
  return s;
}

}  // namespace ooc
