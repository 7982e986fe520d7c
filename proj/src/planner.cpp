#include "warpwatch/planner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace warpwatch {

namespace {

void check_speed(double s, const char* name) {
  if (!std::isfinite(s) || s <= 0.0)
    throw Error(ErrorKind::InvalidSpeed,
                std::string(name) + " must be positive and finite");
}

void check_user_speed(double s, const char* name, std::vector<std::string>& warnings) {
  check_speed(s, name);
  if (s > 1000.0)
    throw Error(ErrorKind::InvalidSpeed, std::string(name) + " above the 1000x limit");
  if (s < 1.0)
    warnings.push_back(std::string(name) + " below 1.0 slows playback down");
}

std::string format_speed(double s) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", s);
  return buf;
}

std::int64_t language_units(const Segment& seg, const SubtitleTrack& track, CountMode mode) {
  std::int64_t n = 0;
  for (int idx : seg.cue_indices) {
    if (idx < 1 || static_cast<size_t>(idx) > track.cues.size())
      throw Error(ErrorKind::InvalidArgument,
                  "segment references cue " + std::to_string(idx) +
                      " absent from the track (segments built from a different track?)");
    n += count_text_units(track.cues[idx - 1], mode);
  }
  return n;
}

}  // namespace

TimeMs predict_duration(double s_m, double s_s, double r, TimeMs l) {
  check_speed(s_m, "s_m");
  check_speed(s_s, "s_s");
  if (!std::isfinite(r) || r < 0.0 || r > 1.0)
    throw Error(ErrorKind::InvalidArgument, "r must lie in [0, 1]");
  if (l < 0) throw Error(ErrorKind::InvalidDuration, "l must be >= 0");
  const double lf = static_cast<double>(l);
  return std::llround(r * lf / s_m + (1.0 - r) * lf / s_s);
}

TimeMs predict_duration_reading(double s_m, double s_r, const SegmentList& segs,
                                const SubtitleTrack& track, CountMode mode) {
  check_speed(s_m, "s_m");
  check_speed(s_r, "s_r");
  double out = 0.0;
  for (const auto& seg : segs.segments) {
    const double dur = static_cast<double>(seg.end - seg.start);
    if (seg.kind == SegmentKind::NonLanguage) {
      out += dur / s_m;
      continue;
    }
    const std::int64_t n = language_units(seg, track, mode);
    if (n > 0)
      out += 60000.0 * static_cast<double>(n) / s_r;
    else
      out += dur / s_m;  // nothing to read
  }
  return std::llround(out);
}

SolvedSpeeds solve_sm_for_target(TimeMs l_q, double s_s, double r, TimeMs l,
                                 std::optional<double> s_m_max) {
  check_speed(s_s, "s_s");
  if (s_m_max) check_speed(*s_m_max, "s_m_max");
  if (!std::isfinite(r) || r < 0.0 || r > 1.0)
    throw Error(ErrorKind::InvalidArgument, "r must lie in [0, 1]");
  if (l <= 0) throw Error(ErrorKind::InvalidDuration, "l must be positive");
  if (l_q <= 0) throw Error(ErrorKind::InvalidDuration, "l_q must be positive");

  const double lf = static_cast<double>(l);
  const double target = static_cast<double>(l_q);
  const double language_src = (1.0 - r) * lf;
  const double nonlanguage_src = r * lf;

  if (r == 0.0) {
    // s_m is irrelevant; only s_s can hit the target.
    const double at_requested = language_src / s_s;
    if (std::llround(at_requested) == l_q) return {1.0, s_s, false};
    return {1.0, language_src / target, true};
  }
  if (r == 1.0) {
    // No language part; s_s never matters.
    const double s_m = nonlanguage_src / target;
    if (s_m_max && s_m > *s_m_max)
      throw Error(ErrorKind::InfeasibleTarget,
                  "target needs s_m = " + format_speed(s_m) + ", above the cap " +
                      format_speed(*s_m_max));
    return {s_m, s_s, false};
  }

  const double language_time = language_src / s_s;  // floor contributed by s_s
  if (target > language_time) {
    const double s_m = nonlanguage_src / (target - language_time);
    if (!s_m_max || s_m <= *s_m_max) return {s_m, s_s, false};
  } else if (!s_m_max) {
    throw Error(ErrorKind::InfeasibleTarget,
                "target " + std::to_string(l_q) + " ms is not above the language-time floor " +
                    format_speed(language_time) + " ms at s_s = " + format_speed(s_s) +
                    " (no s_m_max given, so s_s stays fixed)");
  }

  // s_m capped: raise s_s minimally so the model still meets the target.
  const double floor_at_cap = nonlanguage_src / *s_m_max;
  if (target <= floor_at_cap)
    throw Error(ErrorKind::InfeasibleTarget,
                "target " + std::to_string(l_q) +
                    " ms is not above the non-language floor " + format_speed(floor_at_cap) +
                    " ms at s_m_max = " + format_speed(*s_m_max));
  const double adjusted_ss = language_src / (target - floor_at_cap);
  return {*s_m_max, adjusted_ss, true};
}

WarpPlan build_warp_plan(const SegmentList& segs, const SpeedSpec& spec,
                         const SubtitleTrack& track,
                         double large_speed_warn_threshold) {
  WarpPlan plan;
  plan.spec = spec;
  plan.l_in = segs.total;

  // Resolve the Language-segment speed policy.
  double s_m = 1.0;
  double per_class_ss = 1.0;
  const ReadingRateSpeed* reading = nullptr;
  if (const auto* pc = std::get_if<PerClassSpeed>(&spec)) {
    check_user_speed(pc->s_m, "s_m", plan.warnings);
    check_user_speed(pc->s_s, "s_s", plan.warnings);
    s_m = pc->s_m;
    per_class_ss = pc->s_s;
  } else if (const auto* rr = std::get_if<ReadingRateSpeed>(&spec)) {
    check_user_speed(rr->s_m, "s_m", plan.warnings);
    check_speed(rr->s_r, "s_r");
    if (rr->min_speed) check_speed(*rr->min_speed, "min_speed");
    if (rr->max_speed) check_speed(*rr->max_speed, "max_speed");
    if (rr->min_speed && rr->max_speed && *rr->min_speed > *rr->max_speed)
      throw Error(ErrorKind::InvalidSpeed, "min_speed above max_speed");
    s_m = rr->s_m;
    reading = rr;
  } else {
    const auto& td = std::get<TargetDurationSpeed>(spec);
    check_user_speed(td.s_s, "s_s", plan.warnings);
    SolvedSpeeds solved =
        solve_sm_for_target(td.l_q, td.s_s, compute_r(segs), segs.total, td.s_m_max);
    if (solved.s_m > large_speed_warn_threshold)
      plan.warnings.push_back("solved s_m = " + format_speed(solved.s_m) + " exceeds " +
                              format_speed(large_speed_warn_threshold) +
                              "x; comprehension ceilings sit far below that");
    s_m = solved.s_m;
    per_class_ss = solved.s_s;
  }

  double cumulative = 0.0;
  TimeMs out_pos = 0;
  bool forced = false;
  for (const auto& seg : segs.segments) {
    const double dur = static_cast<double>(seg.end - seg.start);
    double speed = s_m;
    if (seg.kind == SegmentKind::Language) {
      if (reading) {
        const std::int64_t n = language_units(seg, track, reading->count_mode);
        if (n > 0) {
          speed = dur * reading->s_r / (60000.0 * static_cast<double>(n));
          if (reading->min_speed) speed = std::max(speed, *reading->min_speed);
          if (reading->max_speed) speed = std::min(speed, *reading->max_speed);
        }
      } else {
        speed = per_class_ss;
      }
    }
    cumulative += dur / speed;
    TimeMs boundary = std::llround(cumulative);
    if (boundary <= out_pos) {
      boundary = out_pos + 1;  // keep out boundaries strictly increasing
      forced = true;
    }
    plan.segments.push_back({seg.start, seg.end, speed, out_pos, boundary, seg.kind});
    out_pos = boundary;
  }
  plan.l_out = out_pos;
  if (forced)
    plan.warnings.push_back("some segments rounded to zero output length; forced to 1 ms");
  return plan;
}

TimeMs warp_time(const WarpPlan& plan, TimeMs t) {
  if (t < 0 || t > plan.l_in)
    throw Error(ErrorKind::OutOfRange,
                "time " + std::to_string(t) + " ms outside [0, " +
                    std::to_string(plan.l_in) + "]");
  if (t == plan.l_in) return plan.l_out;
  auto it = std::upper_bound(plan.segments.begin(), plan.segments.end(), t,
                             [](TimeMs v, const WarpSegment& s) { return v < s.in_end; });
  const WarpSegment& seg = *it;
  TimeMs mapped = seg.out_start +
                  std::llround(static_cast<double>(t - seg.in_start) / seg.speed);
  return std::min(mapped, seg.out_end);
}

TimeMs unwarp_time(const WarpPlan& plan, TimeMs t_out) {
  if (t_out < 0 || t_out > plan.l_out)
    throw Error(ErrorKind::OutOfRange,
                "time " + std::to_string(t_out) + " ms outside [0, " +
                    std::to_string(plan.l_out) + "]");
  if (t_out == plan.l_out) return plan.l_in;
  auto it = std::upper_bound(plan.segments.begin(), plan.segments.end(), t_out,
                             [](TimeMs v, const WarpSegment& s) { return v < s.out_end; });
  const WarpSegment& seg = *it;
  TimeMs mapped = seg.in_start +
                  std::llround(static_cast<double>(t_out - seg.out_start) * seg.speed);
  return std::min(mapped, seg.in_end);
}

}  // namespace warpwatch
