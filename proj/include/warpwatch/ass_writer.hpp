#pragma once

#include <string>

#include "warpwatch/styling.hpp"

namespace warpwatch {

struct RenderConfig {
  int play_res_x = 1920;
  int play_res_y = 1080;
  std::string font_name = "Arial";
  int font_size = 48;
  int fade_alpha = 128;  // PrimaryColour alpha of the "Fade" style
};

/// Render a styled track as an ASS (v4.00+) file with two styles:
/// "Main" (opaque) and "Fade" (translucent, alpha from cfg). Alignment is
/// middle-center when the track is centered, bottom-center otherwise.
/// Fade phases are separate dialogue events in the "Fade" style.
std::string write_ass(const StyledTrack& track, const RenderConfig& cfg);

}  // namespace warpwatch
