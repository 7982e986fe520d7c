#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "warpwatch/timeline.hpp"

namespace warpwatch {

/// Interface 1: one speed per segment class.
struct PerClassSpeed {
  double s_m = 1.0;  // NonLanguage multiplier
  double s_s = 1.0;  // Language multiplier
};

/// Interface 2: NonLanguage speed plus the user's reading rate in
/// text units per minute; each Language segment gets its own speed.
struct ReadingRateSpeed {
  double s_m = 1.0;
  double s_r = 300.0;  // units/min
  CountMode count_mode = CountMode::Graphemes;
  std::optional<double> min_speed;
  std::optional<double> max_speed;
};

/// Interface 3: target output duration; s_m is solved from the duration
/// model, raising s_s only if s_m would exceed s_m_max.
struct TargetDurationSpeed {
  TimeMs l_q = 0;
  double s_s = 1.0;
  std::optional<double> s_m_max;
};

using SpeedSpec = std::variant<PerClassSpeed, ReadingRateSpeed, TargetDurationSpeed>;

struct SolvedSpeeds {
  double s_m = 1.0;
  double s_s = 1.0;
  bool adjusted = false;  // true iff s_s differs from the request
};

struct WarpSegment {
  TimeMs in_start = 0;
  TimeMs in_end = 0;
  double speed = 1.0;
  TimeMs out_start = 0;
  TimeMs out_end = 0;
  SegmentKind kind = SegmentKind::NonLanguage;
};

/// Piecewise-linear monotonic map from source time to output time.
/// In-intervals tile [0, l_in], out-intervals tile [0, l_out] with strictly
/// increasing boundaries. Immutable after construction.
struct WarpPlan {
  std::vector<WarpSegment> segments;
  TimeMs l_in = 0;
  TimeMs l_out = 0;
  std::optional<SpeedSpec> spec;  // provenance; empty for plans loaded from file
  std::vector<std::string> warnings;
};

/// Output duration in ms of the two-level model:
/// round(r*l/s_m + (1-r)*l/s_s).
TimeMs predict_duration(double s_m, double s_s, double r, TimeMs l);

/// Reading-rate variant: NonLanguage time at s_m plus 60000*N/s_r per
/// Language segment (N summed over the segment's cues); segments with
/// N == 0 fall back to s_m.
TimeMs predict_duration_reading(double s_m, double s_r, const SegmentList& segs,
                                const SubtitleTrack& track, CountMode mode);

/// Solve the duration model for s_m given a target l_q, changing s_s only
/// when s_m would exceed s_m_max (then the minimal increase of s_s is used).
/// Throws InfeasibleTarget when no assignment reaches l_q.
SolvedSpeeds solve_sm_for_target(TimeMs l_q, double s_s, double r, TimeMs l,
                                 std::optional<double> s_m_max);

/// Assign a speed to every segment and lay out the output timeline.
/// Out boundaries are cumulative sums rounded once per boundary; a segment
/// whose output would round to zero length is forced to 1 ms (warning).
/// User speeds outside (0, 1000] are rejected; speeds below 1 warn.
WarpPlan build_warp_plan(const SegmentList& segs, const SpeedSpec& spec,
                         const SubtitleTrack& track,
                         double large_speed_warn_threshold = 50.0);

/// Map a source time through the plan. warp_time(0) == 0,
/// warp_time(l_in) == l_out, non-decreasing everywhere.
TimeMs warp_time(const WarpPlan& plan, TimeMs t);

/// Inverse map; |warp_time(unwarp_time(x)) - x| <= ceil(max segment speed).
TimeMs unwarp_time(const WarpPlan& plan, TimeMs t_out);

}  // namespace warpwatch
