#include "pindelay/lyapunov.hpp"

#include <cmath>

#include "pindelay/spectral.hpp"

namespace pindelay {

namespace {

double window_mean(const std::vector<double>& logs, size_t lo, size_t hi) {
  double sum = 0.0;
  for (size_t i = lo; i < hi; ++i) sum += logs[i];
  return (hi > lo) ? sum / static_cast<double>(hi - lo) : 0.0;
}

}  // namespace

ExponentEstimate largest_exponent(const PinningProblem& problem,
                                  const HistoryFunction& history,
                                  int n_segments, int samples_per_segment) {
  if (n_segments < 50)
    throw Error(ErrorCode::InvalidArgument, "need at least 50 segments");
  if (samples_per_segment < 16)
    throw Error(ErrorCode::InvalidArgument, "need at least 16 samples per segment");

  const double tau_max = problem.max_delay();
  ExponentEstimate est;
  est.samples_per_segment = samples_per_segment;

  if (tau_max <= 0.0) {
    est.method = ExponentMethod::SpectralAbscissa;
    est.value = undelayed_spectral_abscissa(problem.system, problem.pins, problem.c);
    est.converged = true;
    return est;
  }
  est.segment_length = tau_max;

  // Sub-steps per sample so the integration grid hits every sample point
  // exactly while staying at or below the accuracy-driven default step.
  const double sample_dt = tau_max / samples_per_segment;
  const int substeps = static_cast<int>(
      std::max(1L, std::lround(std::ceil(sample_dt / default_step(problem) - 1e-9))));
  const double h = sample_dt / substeps;

  // The exponent is a property of the homogeneous system; drop the target.
  PinningProblem hom(problem.system, problem.pins, problem.c, problem.tau_r,
                     problem.tau_p, 0.0);
  DdeIntegrator integrator(hom, history, h);

  const int steps_per_segment = samples_per_segment * substeps;
  est.segment_logs.reserve(static_cast<size_t>(n_segments));
  for (int seg = 0; seg <= n_segments; ++seg) {
    double sq = 0.0;
    for (int s = 0; s < samples_per_segment; ++s) {
      for (int k = 0; k < substeps; ++k) {
        integrator.advance();
        if (integrator.diverged())
          throw Error(ErrorCode::DegenerateNorm,
                      "trajectory overflowed during exponent estimation; "
                      "the system is too unstable for this segment count");
      }
      sq += integrator.state().squaredNorm();
    }
    const double norm = std::sqrt(sq);
    if (!(norm > 0.0) || !std::isfinite(norm))
      throw Error(ErrorCode::DegenerateNorm,
                  "segment norm vanished or overflowed; cannot renormalize");
    // First pass only sets the reference scale; later passes log the ratio.
    if (seg > 0) est.segment_logs.push_back(std::log(norm));
    integrator.rescale(1.0 / norm);
  }

  const size_t total = est.segment_logs.size();
  const size_t burn = total / 5;
  est.segments_used = static_cast<int>(total - burn);
  double sum = 0.0;
  for (size_t i = burn; i < total; ++i) sum += est.segment_logs[i];
  est.value = sum / (static_cast<double>(est.segments_used) * tau_max);

  const double q3 = window_mean(est.segment_logs, total / 2, 3 * total / 4) / tau_max;
  const double q4 = window_mean(est.segment_logs, 3 * total / 4, total) / tau_max;
  est.converged =
      std::abs(q3 - q4) < 0.05 * std::max(std::abs(q3), std::abs(q4)) + 1e-3;
  return est;
}

}  // namespace pindelay
