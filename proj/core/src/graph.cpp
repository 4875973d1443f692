#include "pindelay/graph.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <tuple>

namespace pindelay {

namespace {

void require(bool ok, ErrorCode code, const std::string& msg) {
  if (!ok) throw Error(code, msg);
}

}  // namespace

DirectedGraph::DirectedGraph(Matrix weights) : w_(std::move(weights)) {
  require(w_.rows() == w_.cols(), ErrorCode::InvalidArgument,
          "weight matrix must be square");
  require(w_.rows() >= 1, ErrorCode::InvalidArgument,
          "graph needs at least one node");
  for (int i = 0; i < w_.rows(); ++i) {
    require(w_(i, i) == 0.0, ErrorCode::InvalidArgument,
            "self-loop at node " + std::to_string(i));
    for (int j = 0; j < w_.cols(); ++j)
      require(w_(i, j) >= 0.0 && std::isfinite(w_(i, j)),
              ErrorCode::InvalidArgument,
              "weight (" + std::to_string(i) + ", " + std::to_string(j) +
                  ") must be finite and nonnegative");
  }
}

DirectedGraph DirectedGraph::empty(int n) {
  require(n >= 1, ErrorCode::InvalidArgument, "graph needs at least one node");
  return DirectedGraph(Matrix::Zero(n, n));
}

DirectedGraph DirectedGraph::complete(int n, double weight) {
  require(n >= 1, ErrorCode::InvalidArgument, "graph needs at least one node");
  require(weight > 0.0, ErrorCode::InvalidArgument, "weight must be positive");
  Matrix w = Matrix::Constant(n, n, weight);
  w.diagonal().setZero();
  return DirectedGraph(std::move(w));
}

DirectedGraph DirectedGraph::from_edges(
    int n, const std::vector<std::tuple<int, int, double>>& edges) {
  require(n >= 1, ErrorCode::InvalidArgument, "graph needs at least one node");
  Matrix w = Matrix::Zero(n, n);
  for (size_t k = 0; k < edges.size(); ++k) {
    auto [to, from, weight] = edges[k];
    require(to >= 0 && to < n && from >= 0 && from < n,
            ErrorCode::InvalidArgument,
            "edge " + std::to_string(k) + ": node index out of range [0, " +
                std::to_string(n) + ")");
    require(to != from, ErrorCode::InvalidArgument,
            "edge " + std::to_string(k) + ": self-loop at node " +
                std::to_string(to));
    require(weight > 0.0 && std::isfinite(weight), ErrorCode::InvalidArgument,
            "edge " + std::to_string(k) + ": weight must be positive");
    require(w(to, from) == 0.0, ErrorCode::InvalidArgument,
            "edge " + std::to_string(k) + ": duplicate of (" +
                std::to_string(to) + ", " + std::to_string(from) + ")");
    w(to, from) = weight;
  }
  return DirectedGraph(std::move(w));
}

int DirectedGraph::edge_count() const {
  int count = 0;
  for (int i = 0; i < w_.rows(); ++i)
    for (int j = 0; j < w_.cols(); ++j)
      if (w_(i, j) > 0.0) ++count;
  return count;
}

bool DirectedGraph::is_undirected() const { return w_ == w_.transpose(); }

Vector DirectedGraph::in_degrees() const { return w_.rowwise().sum(); }

DirectedGraph erdos_renyi(int n, double p, std::uint64_t seed) {
  require(n >= 1, ErrorCode::InvalidArgument, "graph needs at least one node");
  require(p >= 0.0 && p <= 1.0, ErrorCode::InvalidArgument,
          "connection probability must lie in [0, 1]");
  std::mt19937_64 rng(seed);
  Matrix w = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      // Fixed uniform derivation (not std::uniform_real_distribution, whose
      // output is implementation-defined): top 53 bits of the raw draw.
      const double u =
          static_cast<double>(rng() >> 11) * 0x1.0p-53;
      if (u < p) {
        w(i, j) = 1.0;
        w(j, i) = 1.0;
      }
    }
  }
  return DirectedGraph(std::move(w));
}

LaplacianSystem laplacian(const DirectedGraph& g) {
  LaplacianSystem sys;
  sys.A = g.weights();
  sys.K = g.in_degrees();
  sys.L = Matrix(sys.K.asDiagonal()) - sys.A;
  return sys;
}

PinSet::PinSet(std::vector<int> members, int n) : members_(std::move(members)), n_(n) {
  require(n_ >= 1, ErrorCode::InvalidArgument, "dimension must be positive");
  std::sort(members_.begin(), members_.end());
  for (size_t k = 0; k < members_.size(); ++k) {
    require(members_[k] >= 0 && members_[k] < n_, ErrorCode::InvalidArgument,
            "pinned node " + std::to_string(members_[k]) +
                " out of range [0, " + std::to_string(n_) + ")");
    require(k == 0 || members_[k] != members_[k - 1], ErrorCode::InvalidArgument,
            "pinned node " + std::to_string(members_[k]) + " listed twice");
  }
}

PinSet PinSet::single(int node, int n) { return PinSet({node}, n); }

PinSet PinSet::first(int count, int n) {
  require(count >= 0 && count <= n, ErrorCode::InvalidArgument,
          "pin count out of range");
  std::vector<int> m(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i) m[static_cast<size_t>(i)] = i;
  return PinSet(std::move(m), n);
}

PinSet PinSet::all(int n) { return PinSet::first(n, n); }

bool PinSet::contains(int node) const {
  return std::binary_search(members_.begin(), members_.end(), node);
}

Vector PinSet::indicator() const {
  Vector d = Vector::Zero(n_);
  for (int m : members_) d[m] = 1.0;
  return d;
}

Matrix PinSet::diagonal() const { return Matrix(indicator().asDiagonal()); }

PinningProblem::PinningProblem(LaplacianSystem system_in, PinSet pins_in,
                               double c_in, double tau_r_in, double tau_p_in,
                               double s_in)
    : system(std::move(system_in)),
      pins(std::move(pins_in)),
      c(c_in),
      tau_r(tau_r_in),
      tau_p(tau_p_in),
      s(s_in) {
  require(pins.dimension() == system.size(), ErrorCode::InvalidArgument,
          "pin set dimension does not match the system");
  require(c >= 0.0 && std::isfinite(c), ErrorCode::InvalidArgument,
          "gain c must be finite and nonnegative");
  require(tau_r >= 0.0 && std::isfinite(tau_r), ErrorCode::InvalidArgument,
          "tau_r must be finite and nonnegative");
  require(tau_p >= 0.0 && std::isfinite(tau_p), ErrorCode::InvalidArgument,
          "tau_p must be finite and nonnegative");
  require(std::isfinite(s), ErrorCode::InvalidArgument, "target s must be finite");
  if (c > 0.0 && pins.count() == 0)
    throw Error(ErrorCode::EmptyPinSet,
                "gain c > 0 requires at least one pinned node");
}

double PinningProblem::min_positive_delay() const {
  double m = 0.0;
  if (tau_r > 0.0) m = tau_r;
  if (tau_p > 0.0) m = (m == 0.0) ? tau_p : std::min(m, tau_p);
  return m;
}

namespace {

// Iterative Tarjan; successors of u are nodes that listen to u.
struct TarjanState {
  const Matrix* w;
  int n;
  std::vector<int> index, low, stack;
  std::vector<bool> on_stack;
  std::vector<std::vector<int>> components;
  int next_index = 0;

  explicit TarjanState(const Matrix& weights)
      : w(&weights),
        n(static_cast<int>(weights.rows())),
        index(static_cast<size_t>(n), -1),
        low(static_cast<size_t>(n), 0),
        on_stack(static_cast<size_t>(n), false) {}

  void run(int root) {
    struct Frame {
      int v;
      int next_succ;
    };
    std::vector<Frame> frames;
    frames.push_back({root, 0});
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      Frame& f = frames.back();
      bool descended = false;
      while (f.next_succ < n) {
        const int u = f.next_succ++;
        if ((*w)(u, f.v) <= 0.0) continue;  // u listens to v?
        if (index[u] < 0) {
          index[u] = low[u] = next_index++;
          stack.push_back(u);
          on_stack[u] = true;
          frames.push_back({u, 0});
          descended = true;
          break;
        }
        if (on_stack[u]) low[f.v] = std::min(low[f.v], index[u]);
      }
      if (descended) continue;
      const int v = f.v;
      frames.pop_back();
      if (!frames.empty())
        low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] == index[v]) {
        std::vector<int> comp;
        while (true) {
          int u = stack.back();
          stack.pop_back();
          on_stack[u] = false;
          comp.push_back(u);
          if (u == v) break;
        }
        std::sort(comp.begin(), comp.end());
        components.push_back(std::move(comp));
      }
    }
  }
};

}  // namespace

SccResult condensation(const DirectedGraph& g) {
  TarjanState t(g.weights());
  for (int v = 0; v < t.n; ++v)
    if (t.index[v] < 0) t.run(v);

  std::sort(t.components.begin(), t.components.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  SccResult r;
  r.components = std::move(t.components);
  r.component_of.assign(static_cast<size_t>(t.n), -1);
  for (size_t k = 0; k < r.components.size(); ++k)
    for (int v : r.components[k]) r.component_of[v] = static_cast<int>(k);

  r.is_source.assign(r.components.size(), true);
  const Matrix& w = g.weights();
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j)
      if (w(i, j) > 0.0 && r.component_of[i] != r.component_of[j])
        r.is_source[static_cast<size_t>(r.component_of[i])] = false;
  return r;
}

bool is_strongly_connected(const DirectedGraph& g) {
  return condensation(g).components.size() == 1;
}

bool has_spanning_tree(const DirectedGraph& g) {
  const SccResult r = condensation(g);
  int sources = 0;
  for (bool s : r.is_source)
    if (s) ++sources;
  return sources == 1;
}

bool check_hypothesis_H(const DirectedGraph& g, const PinSet& pins) {
  if (pins.dimension() != g.size())
    throw Error(ErrorCode::InvalidArgument,
                "pin set dimension does not match the graph");
  const SccResult r = condensation(g);
  for (size_t k = 0; k < r.components.size(); ++k) {
    if (!r.is_source[k]) continue;
    bool pinned = false;
    for (int v : r.components[k])
      if (pins.contains(v)) {
        pinned = true;
        break;
      }
    if (!pinned) return false;
  }
  return true;
}

}  // namespace pindelay
