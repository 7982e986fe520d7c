#include "warpwatch/emit.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include <json.hpp>

namespace warpwatch {

namespace detail {

std::pair<std::int64_t, std::int64_t> to_rational(double x) {
  if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "non-finite value");
  const bool neg = x < 0.0;
  double v = neg ? -x : x;
  // Continued-fraction expansion, stopping at exact double round-trip.
  std::int64_t p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double frac = v;
  for (int i = 0; i < 128; ++i) {
    const double fl = std::floor(frac);
    if (fl > 9e17) break;
    const std::int64_t a = static_cast<std::int64_t>(fl);
    const std::int64_t p2 = a * p1 + p0;
    const std::int64_t q2 = a * q1 + q0;
    if (p2 < 0 || q2 <= 0) break;  // overflow guard
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (static_cast<double>(p1) / static_cast<double>(q1) == v) break;
    const double rem = frac - fl;
    if (rem <= 0.0) break;
    frac = 1.0 / rem;
  }
  return {neg ? -p1 : p1, q1};
}

}  // namespace detail

namespace {

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string seconds3(TimeMs ms) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3f", static_cast<double>(ms) / 1000.0);
  return buf;
}

const char* kind_name(SegmentKind k) {
  return k == SegmentKind::Language ? "language" : "nonlanguage";
}

}  // namespace

std::string emit_edl(const WarpPlan& plan) {
  std::string out;
  out += "{\"version\":1,\"source_duration_ms\":";
  out += std::to_string(plan.l_in);
  out += ",\"output_duration_ms\":";
  out += std::to_string(plan.l_out);
  out += ",\"segments\":[";
  for (size_t i = 0; i < plan.segments.size(); ++i) {
    const auto& s = plan.segments[i];
    if (i) out += ',';
    out += "{\"start_ms\":";
    out += std::to_string(s.in_start);
    out += ",\"end_ms\":";
    out += std::to_string(s.in_end);
    out += ",\"speed\":";
    out += fixed6(s.speed);
    out += ",\"kind\":\"";
    out += kind_name(s.kind);
    out += "\"}";
  }
  out += "]}";
  return out;
}

WarpPlan read_edl(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("bad edl json: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != 1)
    throw Error(ErrorKind::InvalidArgument, "edl version must be 1");
  for (const char* key : {"source_duration_ms", "output_duration_ms"})
    if (!doc.contains(key) || !doc[key].is_number_integer())
      throw Error(ErrorKind::InvalidArgument, std::string("edl needs integer ") + key);
  if (!doc.contains("segments") || !doc["segments"].is_array() || doc["segments"].empty())
    throw Error(ErrorKind::InvalidArgument, "edl needs a non-empty segments array");

  WarpPlan plan;
  plan.l_in = doc["source_duration_ms"].get<TimeMs>();
  if (plan.l_in <= 0) throw Error(ErrorKind::InvalidDuration, "source duration must be positive");

  double cumulative = 0.0;
  TimeMs in_pos = 0;
  TimeMs out_pos = 0;
  for (const auto& item : doc["segments"]) {
    if (!item.is_object() || !item.contains("start_ms") || !item.contains("end_ms") ||
        !item.contains("speed") || !item.contains("kind") ||
        !item["start_ms"].is_number_integer() || !item["end_ms"].is_number_integer() ||
        !item["speed"].is_number() || !item["kind"].is_string())
      throw Error(ErrorKind::InvalidArgument, "edl segment has missing or mistyped fields");
    const TimeMs start = item["start_ms"].get<TimeMs>();
    const TimeMs end = item["end_ms"].get<TimeMs>();
    const double speed = item["speed"].get<double>();
    const std::string kind = item["kind"].get<std::string>();
    if (start != in_pos)
      throw Error(ErrorKind::InvalidArgument,
                  "edl segments must tile the source; expected start " +
                      std::to_string(in_pos) + ", got " + std::to_string(start));
    if (end <= start) throw Error(ErrorKind::InvalidArgument, "edl segment end not after start");
    if (!std::isfinite(speed) || speed <= 0.0)
      throw Error(ErrorKind::InvalidSpeed, "edl segment speed must be positive");
    SegmentKind k;
    if (kind == "language") k = SegmentKind::Language;
    else if (kind == "nonlanguage") k = SegmentKind::NonLanguage;
    else throw Error(ErrorKind::InvalidArgument, "edl segment kind must be language or nonlanguage");

    cumulative += static_cast<double>(end - start) / speed;
    TimeMs boundary = std::llround(cumulative);
    if (boundary <= out_pos) boundary = out_pos + 1;
    plan.segments.push_back({start, end, speed, out_pos, boundary, k});
    in_pos = end;
    out_pos = boundary;
  }
  if (in_pos != plan.l_in)
    throw Error(ErrorKind::InvalidArgument,
                "edl segments end at " + std::to_string(in_pos) + ", not the source duration " +
                    std::to_string(plan.l_in));
  plan.l_out = out_pos;
  const TimeMs declared = doc["output_duration_ms"].get<TimeMs>();
  const TimeMs slack = static_cast<TimeMs>(plan.segments.size());
  if (declared < plan.l_out - slack || declared > plan.l_out + slack)
    throw Error(ErrorKind::InvalidArgument,
                "edl output_duration_ms " + std::to_string(declared) +
                    " is inconsistent with the segment list (recomputed " +
                    std::to_string(plan.l_out) + ")");
  return plan;
}

std::vector<double> decompose_tempo(double factor) {
  if (!std::isfinite(factor) || factor <= 0.0)
    throw Error(ErrorKind::InvalidSpeed, "tempo factor must be positive and finite");
  const double a = std::fabs(std::log2(factor));
  int k = std::max(1, static_cast<int>(std::ceil(a - 1e-12)));
  double stage = std::pow(factor, 1.0 / static_cast<double>(k));
  while (stage > 2.0 || stage < 0.5) {  // fp landed a hair outside; one more stage fixes it
    ++k;
    stage = std::pow(factor, 1.0 / static_cast<double>(k));
  }
  return std::vector<double>(static_cast<size_t>(k), stage);
}

std::string emit_filter_script(const WarpPlan& plan, ScriptProfile profile) {
  std::string out;
  if (profile == ScriptProfile::Generic) {
    out += "warpplan v1 " + std::to_string(plan.l_in) + " " + std::to_string(plan.l_out) + "\n";
    for (size_t i = 0; i < plan.segments.size(); ++i) {
      const auto& s = plan.segments[i];
      auto [num, den] = detail::to_rational(s.speed);
      out += "seg " + std::to_string(i) + " " + std::to_string(s.in_start) + " " +
             std::to_string(s.in_end) + " speed " + std::to_string(num) + "/" +
             std::to_string(den) + "\n";
    }
    return out;
  }

  for (size_t i = 0; i < plan.segments.size(); ++i) {
    const auto& s = plan.segments[i];
    const std::string start = seconds3(s.in_start);
    const std::string end = seconds3(s.in_end);
    out += "[0:v]trim=start=" + start + ":end=" + end +
           ",setpts=(PTS-STARTPTS)/" + fixed6(s.speed) + "[v" + std::to_string(i) + "];\n";
    out += "[0:a]atrim=start=" + start + ":end=" + end + ",asetpts=PTS-STARTPTS";
    for (double stage : decompose_tempo(s.speed)) out += ",atempo=" + fixed6(stage);
    out += "[a" + std::to_string(i) + "];\n";
  }
  for (size_t i = 0; i < plan.segments.size(); ++i)
    out += "[v" + std::to_string(i) + "][a" + std::to_string(i) + "]";
  out += "concat=n=" + std::to_string(plan.segments.size()) + ":v=1:a=1[outv][outa]\n";
  return out;
}

}  // namespace warpwatch
