#pragma once

#include <algorithm>
#include <cstdint>
#include <tuple>
#include <vector>

#include "pindelay/types.hpp"

namespace pindelay {

/// Weighted digraph on nodes 0..n-1. weights()(i, j) > 0 encodes a link
/// j -> i: node i receives (listens to) node j's state. Diagonal is zero;
/// absent links are exactly 0.
class DirectedGraph {
 public:
  explicit DirectedGraph(Matrix weights);

  static DirectedGraph empty(int n);
  static DirectedGraph complete(int n, double weight = 1.0);
  /// edges are (to, from, weight) triples; duplicates are rejected.
  static DirectedGraph from_edges(
      int n, const std::vector<std::tuple<int, int, double>>& edges);

  int size() const { return static_cast<int>(w_.rows()); }
  const Matrix& weights() const { return w_; }
  double weight(int to, int from) const { return w_(to, from); }
  bool has_edge(int to, int from) const { return w_(to, from) > 0.0; }
  int edge_count() const;
  bool is_undirected() const;
  /// In-degree (row sum of weights) per node.
  Vector in_degrees() const;

 private:
  Matrix w_;
};

/// Undirected unweighted G(n, p) with a fixed, documented sampling scheme:
/// std::mt19937_64 seeded with `seed`, uniform u = (x >> 11) * 2^-53, one
/// draw per unordered pair (i, j), i < j, inner loop over j. Identical
/// output on every platform.
DirectedGraph erdos_renyi(int n, double p, std::uint64_t seed);

/// L = diag(row sums of W) - W, K = diag(L), A = K - L (so A is the weight
/// matrix itself and L has zero row sums).
struct LaplacianSystem {
  Matrix L;
  Vector K;
  Matrix A;

  int size() const { return static_cast<int>(K.size()); }
};

LaplacianSystem laplacian(const DirectedGraph& g);

/// Subset of nodes receiving the pinning feedback. Members are kept sorted
/// and distinct.
class PinSet {
 public:
  PinSet() = default;
  PinSet(std::vector<int> members, int n);
  static PinSet single(int node, int n);
  static PinSet first(int count, int n);
  static PinSet all(int n);

  const std::vector<int>& members() const { return members_; }
  int count() const { return static_cast<int>(members_.size()); }
  int dimension() const { return n_; }
  bool contains(int node) const;
  /// 0/1 indicator vector d with d[i] = 1 iff i is pinned.
  Vector indicator() const;
  Matrix diagonal() const;  // D = diag(indicator)

 private:
  std::vector<int> members_;
  int n_ = 0;
};

/// The full control setup: network, pinned nodes, gain c, transmission
/// delay tau_r, pinning delay tau_p, and target value s. The dynamics are
///   y'(t) = -K y(t) + A y(t - tau_r) - c D (y(t - tau_p) - s 1).
struct PinningProblem {
  LaplacianSystem system;
  PinSet pins;
  double c = 1.0;
  double tau_r = 0.0;
  double tau_p = 0.0;
  double s = 0.0;

  PinningProblem(LaplacianSystem system, PinSet pins, double c, double tau_r,
                 double tau_p, double s = 0.0);

  int size() const { return system.size(); }
  double min_positive_delay() const;  // 0 when both delays are 0
  double max_delay() const { return std::max(tau_r, tau_p); }
};

struct SccResult {
  /// Strongly connected components; each sorted ascending, the list ordered
  /// by smallest member.
  std::vector<std::vector<int>> components;
  /// is_source[k]: component k has no incoming links from other components,
  /// i.e. nothing outside influences it.
  std::vector<bool> is_source;
  /// component_of[v] = index into `components`.
  std::vector<int> component_of;
};

SccResult condensation(const DirectedGraph& g);

bool is_strongly_connected(const DirectedGraph& g);

/// True iff some node can reach every other node along links (equivalently:
/// the condensation has exactly one source component).
bool has_spanning_tree(const DirectedGraph& g);

/// Hypothesis (H): every source component of the condensation contains at
/// least one pinned node. Necessary for pinning to steer the whole network.
bool check_hypothesis_H(const DirectedGraph& g, const PinSet& pins);

}  // namespace pindelay
