#include "warpwatch/subtitle_io.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

namespace warpwatch {

namespace {

struct NumberedLine {
  std::string text;
  int number;  // 1-based
};

std::vector<NumberedLine> split_lines(std::string_view text) {
  std::vector<NumberedLine> lines;
  int number = 1;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    std::string_view raw = (nl == std::string_view::npos)
                               ? text.substr(pos)
                               : text.substr(pos, nl - pos);
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    lines.push_back({std::string(raw), number++});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  // A trailing newline produces one empty phantom line; harmless for block scans.
  return lines;
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

bool is_index_line(const std::string& s) {
  size_t i = 0, j = s.size();
  while (i < j && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  while (j > i && std::isspace(static_cast<unsigned char>(s[j - 1]))) --j;
  if (i == j) return false;
  for (size_t k = i; k < j; ++k)
    if (!std::isdigit(static_cast<unsigned char>(s[k]))) return false;
  return true;
}

std::string_view strip_bom(std::string_view text) {
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB &&
      static_cast<unsigned char>(text[2]) == 0xBF) {
    text.remove_prefix(3);
  }
  return text;
}

void canonicalize(SubtitleTrack& track) {
  std::stable_sort(track.cues.begin(), track.cues.end(),
                   [](const SubtitleCue& a, const SubtitleCue& b) {
                     if (a.start != b.start) return a.start < b.start;
                     return a.end < b.end;
                   });
  int idx = 1;
  for (auto& cue : track.cues) cue.index = idx++;
}

}  // namespace

namespace detail {

void ensure_utf8(std::string_view text) {
  size_t i = 0;
  int line = 1;
  while (i < text.size()) {
    unsigned char c = text[i];
    if (c == '\n') ++line;
    size_t extra;
    unsigned char lo = 0x80, hi = 0xBF;
    if (c < 0x80) {
      i += 1;
      continue;
    } else if (c >= 0xC2 && c <= 0xDF) {
      extra = 1;
    } else if (c == 0xE0) {
      extra = 2; lo = 0xA0;
    } else if (c >= 0xE1 && c <= 0xEC) {
      extra = 2;
    } else if (c == 0xED) {
      extra = 2; hi = 0x9F;  // no surrogates
    } else if (c >= 0xEE && c <= 0xEF) {
      extra = 2;
    } else if (c == 0xF0) {
      extra = 3; lo = 0x90;
    } else if (c >= 0xF1 && c <= 0xF3) {
      extra = 3;
    } else if (c == 0xF4) {
      extra = 3; hi = 0x8F;  // <= U+10FFFF
    } else {
      throw Error(ErrorKind::InvalidEncoding, "invalid UTF-8 byte", line);
    }
    if (i + extra >= text.size())
      throw Error(ErrorKind::InvalidEncoding, "truncated UTF-8 sequence", line);
    for (size_t k = 1; k <= extra; ++k) {
      unsigned char cc = text[i + k];
      unsigned char want_lo = (k == 1) ? lo : 0x80;
      unsigned char want_hi = (k == 1) ? hi : 0xBF;
      if (cc < want_lo || cc > want_hi)
        throw Error(ErrorKind::InvalidEncoding, "invalid UTF-8 continuation", line);
    }
    i += extra + 1;
  }
}

TimeMs parse_srt_timestamp(std::string_view field, int line_no) {
  // H+:MM:SS,mmm with '.' accepted for ',', 1-2 digit MM/SS, exactly 3 ms digits.
  size_t i = 0;
  auto fail = [&](const char* what) -> TimeMs {
    throw Error(ErrorKind::MalformedTimestamp,
                std::string(what) + " in timestamp '" + std::string(field) + "'", line_no);
  };
  auto digits = [&](size_t min_d, size_t max_d, long long cap) -> long long {
    size_t start = i;
    long long v = 0;
    while (i < field.size() && std::isdigit(static_cast<unsigned char>(field[i]))) {
      v = v * 10 + (field[i] - '0');
      if (v > cap) fail("field overflow");
      ++i;
    }
    size_t n = i - start;
    if (n < min_d || n > max_d) fail("bad digit count");
    return v;
  };
  while (i < field.size() && (field[i] == ' ' || field[i] == '\t')) ++i;
  long long hh = digits(1, 7, 9'000'000);
  if (i >= field.size() || field[i] != ':') fail("expected ':'");
  ++i;
  long long mm = digits(1, 2, 99);
  if (mm > 59) fail("minutes out of range");
  if (i >= field.size() || field[i] != ':') fail("expected ':'");
  ++i;
  long long ss = digits(1, 2, 99);
  if (ss > 59) fail("seconds out of range");
  if (i >= field.size() || (field[i] != ',' && field[i] != '.')) fail("expected ',' or '.'");
  ++i;
  long long ms = digits(3, 3, 999);
  while (i < field.size() && (field[i] == ' ' || field[i] == '\t')) ++i;
  if (i != field.size()) fail("trailing characters");
  return ((hh * 60 + mm) * 60 + ss) * 1000 + ms;
}

std::string format_srt_timestamp(TimeMs t) {
  if (t < 0) throw Error(ErrorKind::InvalidArgument, "negative timestamp");
  long long ms = t % 1000;
  long long s = (t / 1000) % 60;
  long long m = (t / 60000) % 60;
  long long h = t / 3600000;
  if (h > 99)
    throw Error(ErrorKind::InvalidArgument,
                "timestamp exceeds the 99-hour SRT field: " + std::to_string(t) + " ms");
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%02lld:%02lld:%02lld,%03lld", h, m, s, ms);
  return buf;
}

}  // namespace detail

SubtitleTrack parse_srt(std::string_view text) {
  text = strip_bom(text);
  detail::ensure_utf8(text);
  SubtitleTrack track;
  track.source_format = SourceFormat::SRT;
  if (text.empty()) return track;

  auto lines = split_lines(text);
  size_t i = 0;
  while (i < lines.size()) {
    if (is_blank(lines[i].text)) {
      ++i;
      continue;
    }
    // Block: optional index line, timing line, text lines until blank.
    size_t timing_at = i;
    if (is_index_line(lines[i].text)) {
      if (i + 1 >= lines.size())
        throw Error(ErrorKind::MalformedTimestamp, "cue index at end of file",
                    lines[i].number);
      timing_at = i + 1;
    }
    const std::string& timing = lines[timing_at].text;
    size_t arrow = timing.find("-->");
    if (arrow == std::string::npos)
      throw Error(ErrorKind::MalformedTimestamp,
                  "expected 'start --> end' timing line, got '" + timing + "'",
                  lines[timing_at].number);
    std::string_view lhs = std::string_view(timing).substr(0, arrow);
    std::string_view rhs = std::string_view(timing).substr(arrow + 3);
    // Positional extensions (X1: ... ) after the end time are ignored.
    if (size_t sp = rhs.find_first_of("XY"); sp != std::string_view::npos)
      rhs = rhs.substr(0, sp);
    SubtitleCue cue;
    cue.start = detail::parse_srt_timestamp(lhs, lines[timing_at].number);
    cue.end = detail::parse_srt_timestamp(rhs, lines[timing_at].number);
    if (cue.end <= cue.start)
      throw Error(ErrorKind::EndNotAfterStart,
                  "cue end " + std::to_string(cue.end) + " ms not after start " +
                      std::to_string(cue.start) + " ms",
                  lines[timing_at].number);
    i = timing_at + 1;
    while (i < lines.size() && !is_blank(lines[i].text)) {
      cue.lines.push_back(lines[i].text);
      ++i;
    }
    if (cue.lines.empty()) cue.lines.push_back("");
    track.cues.push_back(std::move(cue));
  }
  canonicalize(track);
  return track;
}

std::string write_srt(const SubtitleTrack& track) {
  std::string out;
  int idx = 1;
  for (const auto& cue : track.cues) {
    out += std::to_string(idx++);
    out += '\n';
    out += detail::format_srt_timestamp(cue.start);
    out += " --> ";
    out += detail::format_srt_timestamp(cue.end);
    out += '\n';
    for (const auto& line : cue.lines) {
      out += line;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

}  // namespace warpwatch
