#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "ooc/graph.hpp"
#include "ooc/matlib.hpp"

namespace testing {

inline ooc::Matrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, double lo = -1.0,
                                 double hi = 1.0) {
  std::uniform_real_distribution<double> d(lo, hi);
  ooc::Matrix m(r, c);
  for (double& v : m.data()) v = d(rng);
  return m;
}

inline double max_diff(const ooc::Matrix& a, const ooc::Matrix& b) { return ooc::max_abs(a - b); }

// Sum of directed cycles is weight-balanced; a Hamiltonian cycle makes it
// strongly connected.
inline ooc::Digraph random_balanced_digraph(std::mt19937_64& rng, std::size_t n, std::size_t extra_cycles) {
  std::uniform_real_distribution<double> wd(0.2, 1.5);
  ooc::Matrix w(n, n);
  auto add_cycle = [&](std::vector<std::size_t> nodes) {
    if (nodes.size() < 2) return;
    const double weight = wd(rng);
    for (std::size_t k = 0; k < nodes.size(); ++k) w(nodes[(k + 1) % nodes.size()], nodes[k]) += weight;
  };
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  add_cycle(perm);
  for (std::size_t c = 0; c < extra_cycles; ++c) {
    std::shuffle(perm.begin(), perm.end(), rng);
    std::uniform_int_distribution<std::size_t> len(2, n);
    add_cycle({perm.begin(), perm.begin() + static_cast<long>(len(rng))});
  }
  return ooc::Digraph(w);
}

// Plain matrix power, used as an independent recursion oracle.
inline ooc::Matrix power(const ooc::Matrix& m, std::size_t k) {
  ooc::Matrix r = ooc::Matrix::identity(m.rows());
  for (std::size_t i = 0; i < k; ++i) r = r * m;
  return r;
}

}  // namespace testing
