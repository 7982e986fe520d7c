#pragma once

#include <vector>

#include "warpwatch/timeline.hpp"

namespace warpwatch {

struct TrackStats {
  double r = 0.0;
  TimeMs total_ms = 0;
  TimeMs language_ms = 0;
  std::int64_t cue_count = 0;
  std::int64_t text_units = 0;
  double required_rate = 0.0;     // units/min over summed cue display time
  double per_cue_rate_mean = 0.0;
  double per_cue_rate_std = 0.0;  // population std
};

struct CorpusStats {
  std::int64_t n_tracks = 0;
  double r_mean = 0.0;
  double r_std = 0.0;     // population std
  double rate_mean = 0.0;
  double rate_std = 0.0;
  std::int64_t total_cues = 0;
};

struct LogisticPoint {
  double x = 0.0;
  double y = 0.0;  // in [0, 1]
};

/// Least-squares fit of y = 1 / (1 + exp(a*(x - b))).
/// The model value at x = b is 0.5 exactly.
struct LogisticFit {
  double a = 0.0;
  double b = 0.0;
  double sse = 0.0;
  bool converged = true;  // false when the iteration cap hit first (best-so-far returned)
};

/// Per-track measurements: r from the segmentation, the required reading
/// rate (60000 * text_units / summed cue display ms) and per-cue rate
/// moments. A track with no cues reports r = 1 and zero rates.
TrackStats track_stats(const SubtitleTrack& track, TimeMs total, CountMode mode, TimeMs gap_merge);

/// Means and population standard deviations of r and required_rate over
/// a non-empty list of track stats.
CorpusStats corpus_stats(const std::vector<TrackStats>& stats);

/// Mean factor by which fading extends a cue's display,
/// (max(end_i, next_start) - start_i) / (end_i - start_i), the last cue
/// extending to total. Computed on source times (a uniform warp cancels).
double fade_extension_factor(const SubtitleTrack& track, TimeMs total);

/// Multi-start damped gradient descent on (a, b); analytic gradients,
/// convergence when step and gradient norms drop below 1e-10. Returns the
/// best start; `converged` is false if that run hit the iteration cap.
/// Throws DegenerateData for fewer than 3 points or constant y.
LogisticFit fit_logistic(const std::vector<LogisticPoint>& points);

namespace detail {
double logistic_sse(double a, double b, const std::vector<LogisticPoint>& pts);
void logistic_sse_grad(double a, double b, const std::vector<LogisticPoint>& pts,
                       double* da, double* db);
}  // namespace detail

}  // namespace warpwatch
