#pragma once

#include <vector>

#include "pindelay/dde_sim.hpp"
#include "pindelay/graph.hpp"
#include "pindelay/types.hpp"

namespace pindelay {

enum class ExponentMethod { SegmentNorms, SpectralAbscissa };

struct ExponentEstimate {
  double value = 0.0;
  ExponentMethod method = ExponentMethod::SegmentNorms;
  /// Per-segment log norm ratios (after the leading reference segment);
  /// value = sum of the post-burn-in entries / (segments_used * segment_length).
  std::vector<double> segment_logs;
  int segments_used = 0;       // after discarding the 20% burn-in
  double segment_length = 0.0; // tau_max
  int samples_per_segment = 0;
  bool converged = false;      // last two quarters agree within 5%
};

/// Largest Lyapunov exponent of the homogeneous delayed system via segment
/// renormalization: the state history over each window of length
/// tau_max = max(tau_r, tau_p) is treated as one function-space vector
/// (sampled at `samples_per_segment` points), its norm is logged, and the
/// history is rescaled to unit size before continuing. For stable systems
/// this converges to the dominant characteristic root's real part.
///
/// With both delays zero there is no function space to renormalize; the
/// exact answer, the spectral abscissa of -(L + cD), is reported instead
/// (method = SpectralAbscissa).
///
/// Requires n_segments >= 50 and samples_per_segment >= 16.
ExponentEstimate largest_exponent(const PinningProblem& problem,
                                  const HistoryFunction& history,
                                  int n_segments, int samples_per_segment);

}  // namespace pindelay
