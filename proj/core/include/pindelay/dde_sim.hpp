#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "pindelay/graph.hpp"
#include "pindelay/types.hpp"

namespace pindelay {

/// Initial segment y(u) for u <= 0. Either a constant vector (valid on any
/// interval) or samples on a uniform grid covering [-span, 0].
class HistoryFunction {
 public:
  static HistoryFunction constant(Vector value);
  /// Constant history with entries drawn uniformly from [-1, 1] via
  /// std::mt19937_64 (same portable derivation as the graph sampler).
  static HistoryFunction random_constant(int n, std::uint64_t seed);
  /// samples[k] is the value at u = -span + k * step, k = 0..m-1, with
  /// span = (m - 1) * step; the last sample is the value at u = 0.
  static HistoryFunction sampled(std::vector<Vector> samples, double step);

  int dimension() const;
  /// +infinity for constant histories.
  double span() const;
  /// Piecewise-cubic interpolation on the sample grid (the stencil shifts
  /// inward near the ends); u must lie in [-span, 0].
  Vector eval(double u) const;
  bool is_constant() const { return constant_history_; }

 private:
  HistoryFunction() = default;
  bool constant_history_ = true;
  Vector value_;
  std::vector<Vector> samples_;
  double step_ = 0.0;
};

/// One simulated path on a uniform time grid: samples[k] = y(k * step).
/// When the divergence guard trips (some |y_i| exceeding 1e12), `diverged`
/// is set and the trajectory ends at the last finite sample.
struct Trajectory {
  double step = 0.0;
  std::vector<Vector> samples;
  bool diverged = false;

  int size() const { return static_cast<int>(samples.size()); }
  double duration() const { return samples.empty() ? 0.0 : step * (size() - 1); }
  /// CSV rows "t,y0,...,y{n-1}" with 17 significant digits, header included.
  void write_csv(std::ostream& out) const;
};

/// Fixed-step classical Runge-Kutta for
///   y'(t) = -K y(t) + A y(t - tau_r) - c D (y(t - tau_p) - s 1)
/// with 4-point piecewise-cubic interpolation of stored states for delayed
/// lookups (zero-delay terms read the current Runge-Kutta stage instead).
/// The step must satisfy h <= min positive delay / 4 (StepTooLarge
/// otherwise); a ring buffer keeps just enough history.
class DdeIntegrator {
 public:
  DdeIntegrator(const PinningProblem& problem, const HistoryFunction& history,
                double step);

  void advance();  // one step of size step()
  double time() const { return static_cast<double>(step_index_) * h_; }
  const Vector& state() const;
  double step() const { return h_; }
  bool diverged() const { return diverged_; }
  /// Multiply all stored history (and the current state) by `factor`.
  /// Valid for the homogeneous system (s = 0); used by exponent estimation.
  void rescale(double factor);
  /// Interpolated y(t) for t within the retained window
  /// [time() - tau_max - 3h, time()].
  Vector interpolate(double t) const;

 private:
  Vector delayed(double t) const;
  Vector rhs(double t_absolute, const Vector& y_now, const Vector& y_tau_r,
             const Vector& y_tau_p) const;

  PinningProblem problem_;
  double h_;
  int n_hist_;          // stored past states (beyond the current one)
  long step_index_;     // current absolute step number
  long oldest_valid_;   // oldest ring slot holding genuine history
  std::vector<Vector> ring_;
  bool diverged_ = false;
  Vector scratch_;
};

/// Default step: min(min positive delay, 0.01) / 4, or 1e-3 with no delays.
double default_step(const PinningProblem& problem);

/// Integrate from the history up to time `duration` (rounded to the step
/// grid). The trajectory converges to the target s when the control is
/// stable.
Trajectory simulate(const PinningProblem& problem, const HistoryFunction& history,
                    double duration, double step);

}  // namespace pindelay
