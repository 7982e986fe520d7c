#include "warpwatch/subtitle_io.hpp"

namespace warpwatch {

namespace {

bool is_unicode_space(char32_t cp) {
  switch (cp) {
    case U'\t': case U'\n': case 0x0B: case 0x0C: case U'\r': case U' ':
    case 0x85: case 0xA0: case 0x1680:
    case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

bool is_combining_mark(char32_t cp) {
  return (cp >= 0x0300 && cp <= 0x036F) ||  // diacritical marks
         (cp >= 0x0483 && cp <= 0x0489) ||
         (cp >= 0x0591 && cp <= 0x05C7) ||  // Hebrew points
         (cp >= 0x0610 && cp <= 0x061A) || (cp >= 0x064B && cp <= 0x065F) ||
         (cp >= 0x06D6 && cp <= 0x06ED) ||  // Arabic marks
         (cp >= 0x0E31 && cp <= 0x0E3A) || (cp >= 0x0E47 && cp <= 0x0E4E) ||
         (cp >= 0x1AB0 && cp <= 0x1AFF) ||
         (cp >= 0x1DC0 && cp <= 0x1DFF) ||
         (cp >= 0x20D0 && cp <= 0x20FF) ||
         (cp >= 0x3099 && cp <= 0x309A) ||  // kana voicing marks
         (cp >= 0xFE20 && cp <= 0xFE2F);
}

bool extends_cluster(char32_t cp) {
  return is_combining_mark(cp) ||
         (cp >= 0xFE00 && cp <= 0xFE0F) ||      // variation selectors
         (cp >= 0xE0100 && cp <= 0xE01EF) ||
         (cp >= 0x1F3FB && cp <= 0x1F3FF) ||    // emoji skin tones
         cp == 0x200D;                          // ZWJ
}

bool is_regional_indicator(char32_t cp) {
  return cp >= 0x1F1E6 && cp <= 0x1F1FF;
}

// Caller guarantees valid UTF-8 (parsers run ensure_utf8).
char32_t decode_utf8(std::string_view s, size_t& i) {
  unsigned char c = s[i];
  if (c < 0x80) {
    i += 1;
    return c;
  }
  size_t extra = (c >= 0xF0) ? 3 : (c >= 0xE0) ? 2 : 1;
  char32_t cp = c & (0x3F >> extra);
  for (size_t k = 1; k <= extra && i + k < s.size(); ++k)
    cp = (cp << 6) | (s[i + k] & 0x3F);
  i += extra + 1;
  return cp;
}

}  // namespace

namespace detail {

std::string strip_markup(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (c == '<' || c == '{') {
      char closer = (c == '<') ? '>' : '}';
      size_t end = line.find(closer, i + 1);
      if (end != std::string_view::npos) {
        i = end + 1;
        continue;
      }
      // Unterminated bracket: literal text.
    }
    out += c;
    ++i;
  }
  return out;
}

}  // namespace detail

std::int64_t count_text_units(const SubtitleCue& cue, CountMode mode) {
  std::int64_t count = 0;
  for (const auto& raw : cue.lines) {
    std::string line = detail::strip_markup(raw);
    detail::ensure_utf8(line);
    if (mode == CountMode::Words) {
      bool in_word = false;
      size_t i = 0;
      while (i < line.size()) {
        char32_t cp = decode_utf8(line, i);
        if (is_unicode_space(cp)) {
          in_word = false;
        } else if (!in_word) {
          in_word = true;
          ++count;
        }
      }
    } else {
      bool have_cluster = false;   // a cluster is open (absorbs extenders)
      bool after_zwj = false;      // previous code point was ZWJ
      bool open_ri = false;        // cluster is an unpaired regional indicator
      size_t i = 0;
      while (i < line.size()) {
        char32_t cp = decode_utf8(line, i);
        if (is_unicode_space(cp)) continue;  // stripped before clustering
        if (have_cluster && (extends_cluster(cp) || after_zwj)) {
          after_zwj = (cp == 0x200D);
          continue;
        }
        if (is_regional_indicator(cp) && open_ri) {
          open_ri = false;  // second half of a flag pair
          after_zwj = false;
          continue;
        }
        ++count;
        have_cluster = true;
        open_ri = is_regional_indicator(cp);
        after_zwj = false;
      }
    }
  }
  return count;
}

}  // namespace warpwatch
