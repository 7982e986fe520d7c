#include "warpwatch/timeline.hpp"

#include <algorithm>

namespace warpwatch {

SegmentList segment_timeline(const SubtitleTrack& track, TimeMs total, TimeMs gap_merge) {
  if (total <= 0)
    throw Error(ErrorKind::InvalidDuration, "total duration must be positive");
  if (gap_merge < 0)
    throw Error(ErrorKind::InvalidArgument, "gap_merge must be >= 0");
  for (const auto& cue : track.cues) {
    if (cue.end > total)
      throw Error(ErrorKind::CueBeyondDuration,
                  "cue " + std::to_string(cue.index) + " ends at " +
                      std::to_string(cue.end) + " ms, past total " +
                      std::to_string(total) + " ms");
  }

  struct Block {
    TimeMs start, end;
    std::vector<int> cue_indices;
  };
  std::vector<Block> blocks;
  std::vector<const SubtitleCue*> ordered;
  ordered.reserve(track.cues.size());
  for (const auto& cue : track.cues) ordered.push_back(&cue);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const SubtitleCue* a, const SubtitleCue* b) {
                     return a->start != b->start ? a->start < b->start : a->end < b->end;
                   });

  // Abutting or overlapping intervals always union; internal gaps shorter
  // than gap_merge are absorbed too.
  const TimeMs merge_below = std::max<TimeMs>(gap_merge, 1);
  for (const SubtitleCue* cp : ordered) {
    const SubtitleCue& cue = *cp;
    if (!blocks.empty() && cue.start - blocks.back().end < merge_below) {
      blocks.back().end = std::max(blocks.back().end, cue.end);
      blocks.back().cue_indices.push_back(cue.index);
    } else {
      blocks.push_back({cue.start, cue.end, {cue.index}});
    }
  }

  SegmentList list;
  list.total = total;
  TimeMs pos = 0;
  for (auto& b : blocks) {
    if (b.start > pos)
      list.segments.push_back({pos, b.start, SegmentKind::NonLanguage, {}});
    list.segments.push_back({b.start, b.end, SegmentKind::Language, std::move(b.cue_indices)});
    pos = b.end;
  }
  if (pos < total)
    list.segments.push_back({pos, total, SegmentKind::NonLanguage, {}});
  if (list.segments.empty())
    list.segments.push_back({0, total, SegmentKind::NonLanguage, {}});
  return list;
}

double compute_r(const SegmentList& segs) {
  TimeMs non_language = 0;
  for (const auto& s : segs.segments)
    if (s.kind == SegmentKind::NonLanguage) non_language += s.end - s.start;
  return static_cast<double>(non_language) / static_cast<double>(segs.total);
}

}  // namespace warpwatch
