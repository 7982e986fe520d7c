#include "warpwatch/styling.hpp"

#include <algorithm>

namespace warpwatch {

SubtitleTrack retime_track(const SubtitleTrack& track, const WarpPlan& plan) {
  SubtitleTrack out;
  out.source_format = track.source_format;
  out.cues.reserve(track.cues.size());
  for (const auto& cue : track.cues) {
    auto it = std::find_if(plan.segments.begin(), plan.segments.end(),
                           [&](const WarpSegment& s) {
                             return s.kind == SegmentKind::Language &&
                                    cue.start >= s.in_start && cue.end <= s.in_end;
                           });
    if (it == plan.segments.end())
      throw Error(ErrorKind::CueOutsidePlan,
                  "cue " + std::to_string(cue.index) + " [" + std::to_string(cue.start) +
                      ", " + std::to_string(cue.end) +
                      "] is not contained in any language segment of the plan");
    SubtitleCue mapped = cue;
    mapped.start = warp_time(plan, cue.start);
    mapped.end = warp_time(plan, cue.end);
    if (mapped.end <= mapped.start) mapped.end = mapped.start + 1;
    out.cues.push_back(std::move(mapped));
  }
  return out;
}

StyledTrack apply_fading(const SubtitleTrack& retimed, TimeMs total_out,
                         const FadeConfig& cfg) {
  if (cfg.alpha < 0 || cfg.alpha > 255)
    throw Error(ErrorKind::InvalidArgument, "fade alpha must lie in [0, 255]");
  if (cfg.max_extension && *cfg.max_extension < 0)
    throw Error(ErrorKind::InvalidArgument, "fade max_extension must be >= 0");
  StyledTrack out;
  out.total_out = total_out;
  out.cues.reserve(retimed.cues.size());
  for (size_t i = 0; i < retimed.cues.size(); ++i) {
    StyledCue styled;
    styled.base = retimed.cues[i];
    if (cfg.enabled) {
      TimeMs fade_end = (i + 1 < retimed.cues.size()) ? retimed.cues[i + 1].start : total_out;
      if (cfg.max_extension)
        fade_end = std::min(fade_end, styled.base.end + *cfg.max_extension);
      if (fade_end > styled.base.end)
        styled.fade = FadeInterval{styled.base.end, fade_end};
    }
    out.cues.push_back(std::move(styled));
  }
  return out;
}

StyledTrack apply_centering(StyledTrack track, bool centered) {
  for (auto& cue : track.cues) cue.centered = centered;
  return track;
}

}  // namespace warpwatch
