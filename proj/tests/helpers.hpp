#pragma once

#include <cstdint>
#include <vector>

#include "pindelay/graph.hpp"

namespace testutil {

/// splitmix64, enough randomness for property generators and trivially
/// reproducible from a single word.
struct Rng {
  std::uint64_t state;

  explicit Rng(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  double uniform() {  // [0, 1)
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

/// Random digraph with link probability p and weights in [wlo, whi].
inline pindelay::DirectedGraph random_digraph(Rng& rng, int n, double p,
                                              double wlo = 0.5,
                                              double whi = 1.5) {
  pindelay::Matrix w = pindelay::Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j && rng.uniform() < p) w(i, j) = rng.uniform(wlo, whi);
  return pindelay::DirectedGraph(w);
}

/// Random undirected graph (symmetric weights).
inline pindelay::DirectedGraph random_undirected(Rng& rng, int n, double p,
                                                 double wlo = 0.5,
                                                 double whi = 1.5) {
  pindelay::Matrix w = pindelay::Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.uniform() < p) w(i, j) = w(j, i) = rng.uniform(wlo, whi);
  return pindelay::DirectedGraph(w);
}

/// Keeps sampling until the graph is strongly connected.
inline pindelay::DirectedGraph random_strongly_connected(Rng& rng, int n,
                                                         double p,
                                                         bool undirected) {
  for (;;) {
    pindelay::DirectedGraph g = undirected ? random_undirected(rng, n, p)
                                           : random_digraph(rng, n, p);
    if (pindelay::is_strongly_connected(g)) return g;
  }
}

/// The two-node graph with unit links both ways.
inline pindelay::DirectedGraph pair_graph() {
  pindelay::Matrix w = pindelay::Matrix::Zero(2, 2);
  w(0, 1) = w(1, 0) = 1.0;
  return pindelay::DirectedGraph(w);
}

/// Complete graph with unit weights.
inline pindelay::DirectedGraph complete_graph(int n) {
  pindelay::Matrix w = pindelay::Matrix::Constant(n, n, 1.0);
  w.diagonal().setZero();
  return pindelay::DirectedGraph(w);
}

/// Undirected cycle with half-weights; every in-degree is exactly 1.
inline pindelay::DirectedGraph normalized_ring(int n) {
  pindelay::Matrix w = pindelay::Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    w(i, (i + 1) % n) += 0.5;
    w(i, (i + n - 1) % n) += 0.5;
  }
  return pindelay::DirectedGraph(w);
}

/// Single unpinned node (n=1, no edges).
inline pindelay::DirectedGraph singleton() {
  return pindelay::DirectedGraph(pindelay::Matrix::Zero(1, 1));
}

}  // namespace testutil
