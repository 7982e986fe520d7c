#pragma once

#include <vector>

#include "warpwatch/subtitle_io.hpp"

namespace warpwatch {

enum class SegmentKind { Language, NonLanguage };

struct Segment {
  TimeMs start = 0;
  TimeMs end = 0;
  SegmentKind kind = SegmentKind::NonLanguage;
  std::vector<int> cue_indices;  // canonical cue indices; empty iff NonLanguage
};

/// Alternating Language/NonLanguage segments tiling [0, total] exactly.
struct SegmentList {
  std::vector<Segment> segments;
  TimeMs total = 0;  // this is L
};

/// Cover [0, total] with the union of cue intervals as Language and the rest
/// as NonLanguage. Internal NonLanguage gaps strictly shorter than gap_merge
/// are absorbed into the surrounding Language interval; leading/trailing
/// gaps are kept. Throws CueBeyondDuration if a cue ends past total.
SegmentList segment_timeline(const SubtitleTrack& track, TimeMs total, TimeMs gap_merge);

/// NonLanguage fraction of the timeline (the r of the duration model):
/// sum of NonLanguage durations over total.
double compute_r(const SegmentList& segs);

}  // namespace warpwatch
