#include "pindelay/dde_sim.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>

namespace pindelay {

namespace {

constexpr double kDivergenceCap = 1e12;

// 4-point Lagrange interpolation on a uniform grid. `at(i)` returns the
// sample at integer index i. Near the ends the stencil shifts inward so the
// cubic order is kept there too (a linear fallback at the edge would cost
// two orders of accuracy in the overall integration); x may overhang the
// ends by up to one cell, which turns into short-range extrapolation.
template <typename At>
Vector interp_uniform(const At& at, long lo, long hi, double x) {
  const double nearest = std::round(x);
  if (std::abs(x - nearest) < 1e-9) {
    long i = static_cast<long>(nearest);
    if (i < lo) i = lo;
    if (i > hi) i = hi;
    return at(i);
  }
  if (hi - lo < 3) {
    long i0 = static_cast<long>(std::floor(x));
    if (i0 < lo) i0 = lo;
    if (i0 >= hi) i0 = hi - 1;
    const double s = x - static_cast<double>(i0);
    return (1.0 - s) * at(i0) + s * at(i0 + 1);
  }
  long j = static_cast<long>(std::floor(x)) - 1;
  if (j < lo) j = lo;
  if (j + 3 > hi) j = hi - 3;
  const double s = x - static_cast<double>(j);
  const double w0 = -(s - 1.0) * (s - 2.0) * (s - 3.0) / 6.0;
  const double w1 = s * (s - 2.0) * (s - 3.0) / 2.0;
  const double w2 = -s * (s - 1.0) * (s - 3.0) / 2.0;
  const double w3 = s * (s - 1.0) * (s - 2.0) / 6.0;
  return w0 * at(j) + w1 * at(j + 1) + w2 * at(j + 2) + w3 * at(j + 3);
}

}  // namespace

HistoryFunction HistoryFunction::constant(Vector value) {
  if (value.size() < 1)
    throw Error(ErrorCode::InvalidArgument, "history needs at least one entry");
  HistoryFunction h;
  h.constant_history_ = true;
  h.value_ = std::move(value);
  return h;
}

HistoryFunction HistoryFunction::random_constant(int n, std::uint64_t seed) {
  if (n < 1)
    throw Error(ErrorCode::InvalidArgument, "history needs at least one entry");
  std::mt19937_64 rng(seed);
  Vector v(n);
  for (int i = 0; i < n; ++i) {
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    v[i] = 2.0 * u - 1.0;
  }
  return constant(std::move(v));
}

HistoryFunction HistoryFunction::sampled(std::vector<Vector> samples, double step) {
  if (samples.size() < 2)
    throw Error(ErrorCode::InvalidArgument, "sampled history needs >= 2 samples");
  if (!(step > 0.0) || !std::isfinite(step))
    throw Error(ErrorCode::InvalidArgument, "sample step must be positive");
  const Eigen::Index n = samples.front().size();
  for (const Vector& s : samples)
    if (s.size() != n)
      throw Error(ErrorCode::InvalidArgument, "history samples differ in dimension");
  HistoryFunction h;
  h.constant_history_ = false;
  h.samples_ = std::move(samples);
  h.step_ = step;
  return h;
}

int HistoryFunction::dimension() const {
  return constant_history_ ? static_cast<int>(value_.size())
                           : static_cast<int>(samples_.front().size());
}

double HistoryFunction::span() const {
  return constant_history_ ? std::numeric_limits<double>::infinity()
                           : step_ * static_cast<double>(samples_.size() - 1);
}

Vector HistoryFunction::eval(double u) const {
  if (constant_history_) return value_;
  const double sp = span();
  if (u > 1e-9 || u < -sp - step_ - 1e-9)
    throw Error(ErrorCode::InvalidArgument,
                "history evaluated outside [-span, 0]");
  double x = (u + sp) / step_;
  const long hi = static_cast<long>(samples_.size()) - 1;
  if (x < 0.0) x = 0.0;
  if (x > static_cast<double>(hi)) x = static_cast<double>(hi);
  return interp_uniform(
      [&](long i) -> const Vector& { return samples_[static_cast<size_t>(i)]; },
      0, hi, x);
}

DdeIntegrator::DdeIntegrator(const PinningProblem& problem,
                             const HistoryFunction& history, double step)
    : problem_(problem), h_(step), step_index_(0) {
  if (!(h_ > 0.0) || !std::isfinite(h_))
    throw Error(ErrorCode::InvalidArgument, "step must be positive");
  if (history.dimension() != problem_.size())
    throw Error(ErrorCode::InvalidArgument,
                "history dimension does not match the system");
  const double min_delay = problem_.min_positive_delay();
  if (min_delay > 0.0 && h_ > min_delay / 4.0 + 1e-12)
    throw Error(ErrorCode::StepTooLarge,
                "step " + std::to_string(h_) + " exceeds min positive delay / 4 = " +
                    std::to_string(min_delay / 4.0));
  const double tau_max = problem_.max_delay();
  if (!history.is_constant() && history.span() + 1e-9 < tau_max)
    throw Error(ErrorCode::InvalidArgument,
                "history span is shorter than the largest delay");

  n_hist_ = (tau_max > 0.0)
                ? static_cast<int>(std::ceil(tau_max / h_ - 1e-9))
                : 0;
  const int window = n_hist_ + 8;
  ring_.resize(static_cast<size_t>(window));
  const double sp = history.span();
  // Slots before -span hold the clamped edge value; delayed lookups never
  // read them (interpolate extrapolates from the genuine samples instead).
  oldest_valid_ = -(static_cast<long>(window) - 1);
  if (!history.is_constant())
    oldest_valid_ =
        std::max(oldest_valid_, -static_cast<long>(std::floor(sp / h_ + 1e-9)));
  for (int m = -(window - 1); m <= 0; ++m) {
    double u = static_cast<double>(m) * h_;
    if (u < -sp) u = -sp;
    const long slot = ((m % window) + window) % window;
    ring_[static_cast<size_t>(slot)] = history.eval(u);
  }
  scratch_.resize(problem_.size());
}

const Vector& DdeIntegrator::state() const {
  const int window = static_cast<int>(ring_.size());
  const long slot = ((step_index_ % window) + window) % window;
  return ring_[static_cast<size_t>(slot)];
}

void DdeIntegrator::rescale(double factor) {
  for (Vector& v : ring_) v *= factor;
}

Vector DdeIntegrator::interpolate(double t) const {
  const int window = static_cast<int>(ring_.size());
  const double x = t / h_;
  const long newest = step_index_;
  const long oldest = std::max(step_index_ - (window - 2), oldest_valid_);
  if (x < static_cast<double>(oldest) - 1.0 - 1e-9 ||
      x > static_cast<double>(newest) + 1e-9)
    throw Error(ErrorCode::InvalidArgument,
                "interpolation time outside the retained window");
  return interp_uniform(
      [&](long i) -> const Vector& {
        const long slot = ((i % window) + window) % window;
        return ring_[static_cast<size_t>(slot)];
      },
      oldest, newest, x);
}

Vector DdeIntegrator::rhs(double, const Vector& y_now, const Vector& y_tau_r,
                          const Vector& y_tau_p) const {
  Vector out = -(problem_.system.K.array() * y_now.array()).matrix();
  out.noalias() += problem_.system.A * y_tau_r;
  if (problem_.c > 0.0)
    for (int m : problem_.pins.members())
      out[m] -= problem_.c * (y_tau_p[m] - problem_.s);
  return out;
}

void DdeIntegrator::advance() {
  if (diverged_) return;
  const double t0 = time();
  const double h = h_;
  const bool lag_r = problem_.tau_r > 0.0;
  const bool lag_p = problem_.tau_p > 0.0;
  const Vector& y0 = state();

  const Vector yr0 = lag_r ? interpolate(t0 - problem_.tau_r) : Vector();
  const Vector yp0 = lag_p ? interpolate(t0 - problem_.tau_p) : Vector();
  const Vector yrh = lag_r ? interpolate(t0 + 0.5 * h - problem_.tau_r) : Vector();
  const Vector yph = lag_p ? interpolate(t0 + 0.5 * h - problem_.tau_p) : Vector();
  const Vector yr1 = lag_r ? interpolate(t0 + h - problem_.tau_r) : Vector();
  const Vector yp1 = lag_p ? interpolate(t0 + h - problem_.tau_p) : Vector();

  const Vector k1 = rhs(t0, y0, lag_r ? yr0 : y0, lag_p ? yp0 : y0);
  Vector stage = y0 + (0.5 * h) * k1;
  const Vector k2 =
      rhs(t0 + 0.5 * h, stage, lag_r ? yrh : stage, lag_p ? yph : stage);
  stage = y0 + (0.5 * h) * k2;
  const Vector k3 =
      rhs(t0 + 0.5 * h, stage, lag_r ? yrh : stage, lag_p ? yph : stage);
  stage = y0 + h * k3;
  const Vector k4 = rhs(t0 + h, stage, lag_r ? yr1 : stage, lag_p ? yp1 : stage);

  Vector next = y0 + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  if (!next.allFinite() || next.cwiseAbs().maxCoeff() > kDivergenceCap) {
    diverged_ = true;  // freeze at the last finite state
    return;
  }
  ++step_index_;
  const int window = static_cast<int>(ring_.size());
  const long slot = ((step_index_ % window) + window) % window;
  ring_[static_cast<size_t>(slot)] = std::move(next);
}

double default_step(const PinningProblem& problem) {
  const double min_delay = problem.min_positive_delay();
  if (min_delay <= 0.0) return 1e-3;
  return std::min(min_delay, 0.01) / 4.0;
}

Trajectory simulate(const PinningProblem& problem, const HistoryFunction& history,
                    double duration, double step) {
  if (!(duration >= 0.0) || !std::isfinite(duration))
    throw Error(ErrorCode::InvalidArgument, "duration must be finite and >= 0");
  if (duration < step)
    throw Error(ErrorCode::InvalidArgument,
                "duration must cover at least one step");
  DdeIntegrator integrator(problem, history, step);
  const long n_steps = std::lround(duration / step);
  Trajectory traj;
  traj.step = step;
  traj.samples.reserve(static_cast<size_t>(n_steps) + 1);
  traj.samples.push_back(integrator.state());
  for (long k = 0; k < n_steps; ++k) {
    integrator.advance();
    if (integrator.diverged()) {
      traj.diverged = true;
      break;
    }
    traj.samples.push_back(integrator.state());
  }
  return traj;
}

void Trajectory::write_csv(std::ostream& out) const {
  const int n = samples.empty() ? 0 : static_cast<int>(samples.front().size());
  out << "t";
  for (int i = 0; i < n; ++i) out << ",y" << i;
  out << "\n";
  char buf[40];
  for (size_t k = 0; k < samples.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%.17g", step * static_cast<double>(k));
    out << buf;
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", samples[k][i]);
      out << "," << buf;
    }
    out << "\n";
  }
}

}  // namespace pindelay
