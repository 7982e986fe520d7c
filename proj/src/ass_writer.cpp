#include "warpwatch/ass_writer.hpp"

#include <cstdio>
#include <string>

namespace warpwatch {

namespace {

std::string ass_timestamp(TimeMs ms) {
  if (ms < 0) throw Error(ErrorKind::InvalidArgument, "negative timestamp");
  const long long cs = ms / 10;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%lld:%02lld:%02lld.%02lld", cs / 360000,
                cs / 6000 % 60, cs / 100 % 60, cs % 100);
  return buf;
}

bool tag_toggle(std::string_view tag, std::string& out) {
  // <i> -> {\i1}, </i> -> {\i0}; same for b and u.
  bool closing = !tag.empty() && tag.front() == '/';
  std::string_view name = closing ? tag.substr(1) : tag;
  if (name != "i" && name != "b" && name != "u") return false;
  out += "{\\";
  out += name;
  out += closing ? "0}" : "1}";
  return true;
}

std::string ass_text(const std::vector<std::string>& lines) {
  std::string out;
  for (size_t li = 0; li < lines.size(); ++li) {
    if (li) out += "\\N";
    const std::string& line = lines[li];
    size_t i = 0;
    while (i < line.size()) {
      char c = line[i];
      if (c == '<') {
        size_t close = line.find('>', i + 1);
        if (close != std::string::npos) {
          tag_toggle(std::string_view(line).substr(i + 1, close - i - 1), out);
          i = close + 1;
          continue;
        }
      } else if (c == '{') {
        size_t close = line.find('}', i + 1);
        if (close != std::string::npos) {  // drop: braces open ASS override blocks
          i = close + 1;
          continue;
        }
      }
      out += c;
      ++i;
    }
  }
  return out;
}

}  // namespace

std::string write_ass(const StyledTrack& track, const RenderConfig& cfg) {
  if (cfg.play_res_x <= 0 || cfg.play_res_y <= 0)
    throw Error(ErrorKind::InvalidArgument, "play resolution must be positive");
  if (cfg.fade_alpha < 0 || cfg.fade_alpha > 255)
    throw Error(ErrorKind::InvalidArgument, "fade alpha must lie in [0, 255]");

  bool any_centered = false;
  for (const auto& cue : track.cues) any_centered |= cue.centered;
  const int alignment = any_centered ? 5 : 2;

  std::string out;
  out += "[Script Info]\n";
  out += "ScriptType: v4.00+\n";
  out += "PlayResX: " + std::to_string(cfg.play_res_x) + "\n";
  out += "PlayResY: " + std::to_string(cfg.play_res_y) + "\n";
  out += "WrapStyle: 0\n";
  out += "ScaledBorderAndShadow: yes\n";
  out += "\n";
  out += "[V4+ Styles]\n";
  out +=
      "Format: Name, Fontname, Fontsize, PrimaryColour, SecondaryColour, "
      "OutlineColour, BackColour, Bold, Italic, Underline, StrikeOut, ScaleX, "
      "ScaleY, Spacing, Angle, BorderStyle, Outline, Shadow, Alignment, "
      "MarginL, MarginR, MarginV, Encoding\n";
  char style[512];
  std::snprintf(style, sizeof(style),
                "Style: Main,%s,%d,&H00FFFFFF,&H000000FF,&H00000000,&H00000000,"
                "0,0,0,0,100,100,0,0,1,2,0,%d,20,20,40,1\n",
                cfg.font_name.c_str(), cfg.font_size, alignment);
  out += style;
  std::snprintf(style, sizeof(style),
                "Style: Fade,%s,%d,&H%02XFFFFFF,&H000000FF,&H00000000,&H00000000,"
                "0,0,0,0,100,100,0,0,1,2,0,%d,20,20,40,1\n",
                cfg.font_name.c_str(), cfg.font_size, cfg.fade_alpha, alignment);
  out += style;
  out += "\n";
  out += "[Events]\n";
  out += "Format: Layer, Start, End, Style, Name, MarginL, MarginR, MarginV, Effect, Text\n";
  for (const auto& cue : track.cues) {
    const std::string text = ass_text(cue.base.lines);
    out += "Dialogue: 0," + ass_timestamp(cue.base.start) + "," +
           ass_timestamp(cue.base.end) + ",Main,,0,0,0,," + text + "\n";
    if (cue.fade)
      out += "Dialogue: 0," + ass_timestamp(cue.fade->start) + "," +
             ass_timestamp(cue.fade->end) + ",Fade,,0,0,0,," + text + "\n";
  }
  return out;
}

}  // namespace warpwatch
