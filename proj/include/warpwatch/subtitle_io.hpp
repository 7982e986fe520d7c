#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "warpwatch/errors.hpp"

namespace warpwatch {

/// All timeline arithmetic is integer milliseconds.
using TimeMs = std::int64_t;

enum class SourceFormat { SRT, WebVTT };

enum class CountMode { Graphemes, Words };

struct SubtitleCue {
  int index = 0;               // 1-based, canonical order
  TimeMs start = 0;            // inclusive
  TimeMs end = 0;              // exclusive, > start
  std::vector<std::string> lines;  // at least one (possibly empty) line, markup kept

  friend bool operator==(const SubtitleCue&, const SubtitleCue&) = default;
};

/// Cues sorted by (start, end, parse order) and re-indexed 1..n.
/// Overlapping cues are legal; segmentation unions them.
struct SubtitleTrack {
  std::vector<SubtitleCue> cues;
  SourceFormat source_format = SourceFormat::SRT;
};

/// Parse SubRip text. Accepts an optional UTF-8 BOM, CRLF line endings,
/// '.' as the millisecond separator, and blocks missing the index line.
/// Whitespace-only input yields an empty track.
/// Throws Error{MalformedTimestamp, EndNotAfterStart, InvalidEncoding}.
SubtitleTrack parse_srt(std::string_view text);

/// Parse WebVTT (basic profile). NOTE/STYLE/REGION blocks and cue settings
/// are skipped; cue identifiers are ignored; hours are optional in timestamps.
/// Throws Error{MissingHeader, MalformedTimestamp, EndNotAfterStart, InvalidEncoding}.
SubtitleTrack parse_webvtt(std::string_view text);

/// Canonical SRT text; parse_srt(write_srt(t)) == t for canonical t.
/// Times at or above 100 hours do not fit the HH:MM:SS,mmm field and throw.
std::string write_srt(const SubtitleTrack& track);

/// Text units in a cue after stripping markup (<...> tags and {...} override
/// blocks). Graphemes counts grapheme clusters excluding all whitespace,
/// Words counts whitespace-delimited tokens.
///
/// Grapheme clusters use a common-case approximation: combining marks,
/// ZWJ sequences, variation selectors and emoji modifiers extend the
/// preceding cluster, regional-indicator pairs count once.
std::int64_t count_text_units(const SubtitleCue& cue, CountMode mode);

namespace detail {
// Shared by the SRT/ASS writers and the parsers.
std::string format_srt_timestamp(TimeMs t);
TimeMs parse_srt_timestamp(std::string_view field, int line_no);
TimeMs parse_vtt_timestamp(std::string_view field, int line_no);
void ensure_utf8(std::string_view text);
std::string strip_markup(std::string_view line);
}  // namespace detail

}  // namespace warpwatch
