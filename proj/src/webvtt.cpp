#include "warpwatch/subtitle_io.hpp"

#include <algorithm>
#include <cctype>

namespace warpwatch {

namespace {

struct NumberedLine {
  std::string text;
  int number;
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
  return lines;
}

bool is_blank(const std::string& s) {
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string trimmed(const std::string& s) {
  size_t i = 0, j = s.size();
  while (i < j && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  while (j > i && std::isspace(static_cast<unsigned char>(s[j - 1]))) --j;
  return s.substr(i, j - i);
}

bool starts_note(const std::string& s) {
  return s == "NOTE" || s.rfind("NOTE ", 0) == 0 || s.rfind("NOTE\t", 0) == 0;
}

}  // namespace

namespace detail {

TimeMs parse_vtt_timestamp(std::string_view field, int line_no) {
  // [H+:]MM:SS.mmm with ',' tolerated for '.', exactly 3 ms digits.
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
  long long first = digits(1, 7, 9'000'000);
  if (i >= field.size() || field[i] != ':') fail("expected ':'");
  ++i;
  long long second = digits(1, 2, 99);
  long long hh, mm, ss;
  if (i < field.size() && field[i] == ':') {
    ++i;
    hh = first;
    mm = second;
    ss = digits(1, 2, 99);
  } else {
    hh = 0;
    mm = first;
    ss = second;
    if (mm > 59) fail("minutes out of range");
  }
  if (mm > 59) fail("minutes out of range");
  if (ss > 59) fail("seconds out of range");
  if (i >= field.size() || (field[i] != '.' && field[i] != ',')) fail("expected '.'");
  ++i;
  long long ms = digits(3, 3, 999);
  while (i < field.size() && (field[i] == ' ' || field[i] == '\t')) ++i;
  if (i != field.size()) fail("trailing characters");
  return ((hh * 60 + mm) * 60 + ss) * 1000 + ms;
}

}  // namespace detail

SubtitleTrack parse_webvtt(std::string_view text) {
  if (text.size() >= 3 && static_cast<unsigned char>(text[0]) == 0xEF &&
      static_cast<unsigned char>(text[1]) == 0xBB &&
      static_cast<unsigned char>(text[2]) == 0xBF) {
    text.remove_prefix(3);
  }
  detail::ensure_utf8(text);
  auto lines = split_lines(text);
  if (lines.empty() || lines[0].text.rfind("WEBVTT", 0) != 0 ||
      (lines[0].text.size() > 6 && lines[0].text[6] != ' ' && lines[0].text[6] != '\t'))
    throw Error(ErrorKind::MissingHeader, "file does not start with WEBVTT");

  SubtitleTrack track;
  track.source_format = SourceFormat::WebVTT;

  // Header block runs to the first blank line.
  size_t i = 1;
  while (i < lines.size() && !is_blank(lines[i].text)) ++i;

  while (i < lines.size()) {
    if (is_blank(lines[i].text)) {
      ++i;
      continue;
    }
    const std::string head = trimmed(lines[i].text);
    if (starts_note(lines[i].text) || head == "STYLE" || head == "REGION") {
      while (i < lines.size() && !is_blank(lines[i].text)) ++i;
      continue;
    }
    // Optional cue identifier: a single line without "-->".
    size_t timing_at = i;
    if (lines[i].text.find("-->") == std::string::npos) {
      if (i + 1 >= lines.size() || lines[i + 1].text.find("-->") == std::string::npos)
        throw Error(ErrorKind::MalformedTimestamp,
                    "expected cue timing after '" + lines[i].text + "'",
                    lines[i].number);
      timing_at = i + 1;
    }
    const std::string& timing = lines[timing_at].text;
    size_t arrow = timing.find("-->");
    std::string_view lhs = std::string_view(timing).substr(0, arrow);
    std::string_view rhs = std::string_view(timing).substr(arrow + 3);
    // Cue settings after the end timestamp are ignored.
    {
      size_t k = 0;
      while (k < rhs.size() && (rhs[k] == ' ' || rhs[k] == '\t')) ++k;
      size_t e = k;
      while (e < rhs.size() && rhs[e] != ' ' && rhs[e] != '\t') ++e;
      rhs = rhs.substr(k, e - k);
    }
    SubtitleCue cue;
    cue.start = detail::parse_vtt_timestamp(lhs, lines[timing_at].number);
    cue.end = detail::parse_vtt_timestamp(rhs, lines[timing_at].number);
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

  std::stable_sort(track.cues.begin(), track.cues.end(),
                   [](const SubtitleCue& a, const SubtitleCue& b) {
                     if (a.start != b.start) return a.start < b.start;
                     return a.end < b.end;
                   });
  int idx = 1;
  for (auto& cue : track.cues) cue.index = idx++;
  return track;
}

}  // namespace warpwatch
