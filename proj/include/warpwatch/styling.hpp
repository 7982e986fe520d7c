#pragma once

#include <optional>

#include "warpwatch/planner.hpp"

namespace warpwatch {

/// Fading keeps an expired subtitle on screen in translucent color until
/// the next one appears, optionally capped at max_extension ms.
struct FadeConfig {
  bool enabled = false;
  int alpha = 128;  // 0 = opaque .. 255 = invisible
  std::optional<TimeMs> max_extension;
};

struct FadeInterval {
  TimeMs start = 0;  // == solid end of the cue
  TimeMs end = 0;
};

struct StyledCue {
  SubtitleCue base;  // warped times
  bool centered = false;
  std::optional<FadeInterval> fade;
};

struct StyledTrack {
  std::vector<StyledCue> cues;
  TimeMs total_out = 0;
};

/// Map every cue through the plan. A cue that rounds to zero length gets
/// end = start + 1. Throws CueOutsidePlan if a cue is not contained in a
/// Language in-interval of the plan.
SubtitleTrack retime_track(const SubtitleTrack& track, const WarpPlan& plan);

/// Attach fade intervals: cue i fades over [end_i, min(next_start, end_i +
/// max_extension)), the last cue fading toward total_out. Empty intervals
/// are omitted; a disabled config yields none.
StyledTrack apply_fading(const SubtitleTrack& retimed, TimeMs total_out, const FadeConfig& cfg);

/// Set the centered flag on every cue. Idempotent.
StyledTrack apply_centering(StyledTrack track, bool centered);

}  // namespace warpwatch
