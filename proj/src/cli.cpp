#include "warpwatch/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "warpwatch/analytics.hpp"
#include "warpwatch/ass_writer.hpp"
#include "warpwatch/emit.hpp"
#include "warpwatch/styling.hpp"

namespace warpwatch::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string sci6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

std::string json_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::IoError, "cannot read " + path.string());
  return ss.str();
}

void write_file(const fs::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
}

SubtitleTrack load_track(const fs::path& path) {
  const std::string text = read_file(path);
  try {
    if (path.extension() == ".vtt") return parse_webvtt(text);
    return parse_srt(text);
  } catch (const Error& e) {
    throw Error(e.kind(), path.filename().string() + ": " + e.what());
  }
}

// ---- layered option values: command line > WARPWATCH_* env > config file ----

std::optional<std::string> env_value(const std::string& name) {
  const char* v = std::getenv(name.c_str());
  if (v == nullptr || *v == '\0') return std::nullopt;
  return std::string(v);
}

double parse_env_double(const std::string& name, const std::string& text) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0')
    throw Error(ErrorKind::InvalidArgument, name + " is not a number: " + text);
  return v;
}

std::int64_t parse_env_int(const std::string& name, const std::string& text) {
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (end == text.c_str() || *end != '\0')
    throw Error(ErrorKind::InvalidArgument, name + " is not an integer: " + text);
  return v;
}

bool parse_env_bool(const std::string& name, const std::string& text) {
  if (text == "1" || text == "true" || text == "yes" || text == "on") return true;
  if (text == "0" || text == "false" || text == "no" || text == "off") return false;
  throw Error(ErrorKind::InvalidArgument, name + " is not a boolean: " + text);
}

/// Resolves one option across the three layers. The command-line layer is
/// handled by the caller (CLI11 already bound the value); this covers env
/// and config.
class Layers {
public:
  Layers(const CLI::App* cmd, json config) : cmd_(cmd), config_(std::move(config)) {}

  bool on_cmd(const std::string& flag) const { return cmd_->count(flag) > 0; }

  bool present_anywhere(const std::string& flag, const std::string& env,
                        const std::string& key) const {
    return on_cmd(flag) || env_value(env).has_value() || in_config(key);
  }

  bool in_config(const std::string& key) const {
    return config_.is_object() && config_.contains(key);
  }

  const json& config_at(const std::string& key) const { return config_.at(key); }

  std::optional<double> number(const std::string& flag, double cmd_value,
                               const std::string& env, const std::string& key) const {
    if (on_cmd(flag)) return cmd_value;
    if (auto e = env_value(env)) return parse_env_double(env, *e);
    if (in_config(key)) {
      const json& v = config_at(key);
      if (!v.is_number()) throw Error(ErrorKind::InvalidArgument, "config " + key + " must be a number");
      return v.get<double>();
    }
    return std::nullopt;
  }

  std::optional<std::int64_t> integer(const std::string& flag, std::int64_t cmd_value,
                                      const std::string& env, const std::string& key) const {
    if (on_cmd(flag)) return cmd_value;
    if (auto e = env_value(env)) return parse_env_int(env, *e);
    if (in_config(key)) {
      const json& v = config_at(key);
      if (!v.is_number_integer())
        throw Error(ErrorKind::InvalidArgument, "config " + key + " must be an integer");
      return v.get<std::int64_t>();
    }
    return std::nullopt;
  }

  std::optional<bool> boolean(const std::string& flag, bool cmd_value, const std::string& env,
                              const std::string& key) const {
    if (on_cmd(flag)) return cmd_value;
    if (auto e = env_value(env)) return parse_env_bool(env, *e);
    if (in_config(key)) {
      const json& v = config_at(key);
      if (!v.is_boolean()) throw Error(ErrorKind::InvalidArgument, "config " + key + " must be a boolean");
      return v.get<bool>();
    }
    return std::nullopt;
  }

  std::optional<std::string> text(const std::string& flag, const std::string& cmd_value,
                                  const std::string& env, const std::string& key) const {
    if (on_cmd(flag)) return cmd_value;
    if (auto e = env_value(env)) return *e;
    if (in_config(key)) {
      const json& v = config_at(key);
      if (!v.is_string()) throw Error(ErrorKind::InvalidArgument, "config " + key + " must be a string");
      return v.get<std::string>();
    }
    return std::nullopt;
  }

private:
  const CLI::App* cmd_;
  json config_;
};

json load_config(const std::string& path, const std::vector<std::string>& known_keys) {
  if (path.empty()) return json();
  json cfg;
  try {
    cfg = json::parse(read_file(path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, "config " + path + ": " + e.what());
  }
  if (!cfg.is_object())
    throw Error(ErrorKind::InvalidArgument, "config " + path + " must be a JSON object");
  for (const auto& [key, value] : cfg.items()) {
    (void)value;
    if (std::find(known_keys.begin(), known_keys.end(), key) == known_keys.end())
      throw Error(ErrorKind::InvalidArgument, "config " + path + ": unknown key \"" + key + "\"");
  }
  return cfg;
}

const std::vector<std::string> kConfigKeys = {
    "subs",      "duration_ms", "sm",          "ss",         "reading_rate",
    "target_duration_ms", "sm_max", "min_speed", "max_speed", "gap_merge_ms",
    "center",    "fade",        "fade_alpha",  "fade_max_ms", "count_mode",
    "emit",      "out_dir",     "subs_dir",    "duration_manifest", "points"};

CountMode parse_count_mode(const std::string& text) {
  if (text == "graphemes") return CountMode::Graphemes;
  if (text == "words") return CountMode::Words;
  throw Error(ErrorKind::InvalidArgument, "count mode must be graphemes or words, got " + text);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) if (!item.empty()) out.push_back(item);
  return out;
}

// ---- plan / retime ----

struct PlanFlags {
  std::string subs;
  std::int64_t duration_ms = 0;
  double sm = 0.0, ss = 0.0, rate = 0.0, sm_max = 0.0, min_speed = 0.0, max_speed = 0.0;
  std::int64_t target_ms = 0;
  std::int64_t gap_merge = 0;
  bool center = false;
  bool fade = false;
  int fade_alpha = 0;
  std::int64_t fade_max = 0;
  std::string count_mode;
  std::vector<std::string> emits;
  std::string out_dir;
  std::string config_path;
#ifdef WARPWATCH_FFMPEG_TOOLS
  std::string encode_media;
#endif
};

void add_plan_flags(CLI::App* cmd, PlanFlags& f) {
  cmd->add_option("--subs", f.subs, "input subtitle file (.srt or .vtt)");
  cmd->add_option("--duration-ms", f.duration_ms, "source video duration in ms");
  cmd->add_option("--sm", f.sm, "speed multiplier for non-language segments");
  cmd->add_option("--ss", f.ss, "speed multiplier for subtitled segments");
  cmd->add_option("--reading-rate", f.rate, "reading rate in text units per minute");
  cmd->add_option("--target-duration-ms", f.target_ms, "solve speeds for this output duration");
  cmd->add_option("--sm-max", f.sm_max, "cap on the solved non-language speed");
  cmd->add_option("--min-speed", f.min_speed, "lower clamp for reading-rate segment speeds");
  cmd->add_option("--max-speed", f.max_speed, "upper clamp for reading-rate segment speeds");
  cmd->add_option("--gap-merge-ms", f.gap_merge, "merge subtitle gaps shorter than this (default 500)");
  cmd->add_flag("--center", f.center, "move subtitles to screen center");
  cmd->add_flag("--fade", f.fade, "keep expired subtitles visible in translucent form");
  cmd->add_option("--fade-alpha", f.fade_alpha, "fade translucency 0..255 (default 128)");
  cmd->add_option("--fade-max-ms", f.fade_max, "cap fade extension in output ms");
  cmd->add_option("--count-mode", f.count_mode, "text unit: graphemes or words");
  cmd->add_option("--emit", f.emits, "artifact: edl, ass, srt, script-generic, script-filtergraph");
  cmd->add_option("--out-dir", f.out_dir, "directory for artifacts (default .)");
  cmd->add_option("--config", f.config_path, "JSON config file merged under flags");
#ifdef WARPWATCH_FFMPEG_TOOLS
  cmd->add_option("--encode", f.encode_media, "run the external encoder on this media file");
#endif
}

struct PlanOptions {
  fs::path subs;
  TimeMs duration = 0;
  SpeedSpec spec;
  TimeMs gap_merge = 500;
  bool center = false;
  FadeConfig fade;
  CountMode count_mode = CountMode::Graphemes;
  std::vector<std::string> emits;
  fs::path out_dir = ".";
};

/// Which speed-parameter interface a layer implies, if any.
enum class Interface { None, PerClass, ReadingRate, TargetDuration };

PlanOptions resolve_plan_options(const CLI::App* cmd, const PlanFlags& f,
                                 const std::string& default_emit) {
  const json config = load_config(f.config_path, kConfigKeys);
  const Layers layers(cmd, config);

  // Contradictory explicit flags are rejected outright.
  if (layers.on_cmd("--ss") && layers.on_cmd("--reading-rate"))
    throw Error(ErrorKind::InvalidArgument, "--ss and --reading-rate select different interfaces");
  if (layers.on_cmd("--sm") && layers.on_cmd("--target-duration-ms"))
    throw Error(ErrorKind::InvalidArgument, "--sm conflicts with --target-duration-ms (s_m is solved)");
  if (layers.on_cmd("--reading-rate") && layers.on_cmd("--target-duration-ms"))
    throw Error(ErrorKind::InvalidArgument, "--reading-rate conflicts with --target-duration-ms");
  if ((layers.on_cmd("--min-speed") || layers.on_cmd("--max-speed")) && !layers.on_cmd("--reading-rate"))
    throw Error(ErrorKind::InvalidArgument, "--min-speed/--max-speed need --reading-rate");
  if (layers.on_cmd("--sm-max") && !layers.on_cmd("--target-duration-ms"))
    throw Error(ErrorKind::InvalidArgument, "--sm-max needs --target-duration-ms");

  PlanOptions opt;

  const auto subs = layers.text("--subs", f.subs, "WARPWATCH_SUBS", "subs");
  if (!subs) throw Error(ErrorKind::InvalidArgument, "--subs is required");
  opt.subs = *subs;

  const auto duration =
      layers.integer("--duration-ms", f.duration_ms, "WARPWATCH_DURATION_MS", "duration_ms");
  if (!duration) throw Error(ErrorKind::InvalidArgument, "--duration-ms is required");
  opt.duration = *duration;

  // The strongest layer that names an interface wins; weaker layers then only
  // fill fields belonging to that interface.
  struct Presence {
    bool sm, ss, rate, target;
  };
  const Presence on_cmd_layer{layers.on_cmd("--sm"), layers.on_cmd("--ss"),
                              layers.on_cmd("--reading-rate"), layers.on_cmd("--target-duration-ms")};
  const Presence on_env{env_value("WARPWATCH_SM").has_value(), env_value("WARPWATCH_SS").has_value(),
                        env_value("WARPWATCH_READING_RATE").has_value(),
                        env_value("WARPWATCH_TARGET_DURATION_MS").has_value()};
  const Presence on_config{layers.in_config("sm"), layers.in_config("ss"),
                           layers.in_config("reading_rate"), layers.in_config("target_duration_ms")};
  Interface iface = Interface::None;
  for (const Presence& p : {on_cmd_layer, on_env, on_config}) {
    if (p.target) iface = Interface::TargetDuration;
    else if (p.rate) iface = Interface::ReadingRate;
    else if (p.sm || p.ss) iface = Interface::PerClass;
    if (iface != Interface::None) break;
  }
  if (iface == Interface::None)
    throw Error(ErrorKind::InvalidArgument,
                "no speed parameters: give --sm/--ss, --sm/--reading-rate, or "
                "--target-duration-ms/--ss");

  const auto sm = layers.number("--sm", f.sm, "WARPWATCH_SM", "sm");
  const auto ss = layers.number("--ss", f.ss, "WARPWATCH_SS", "ss");
  const auto rate = layers.number("--reading-rate", f.rate, "WARPWATCH_READING_RATE", "reading_rate");
  const auto target = layers.integer("--target-duration-ms", f.target_ms,
                                     "WARPWATCH_TARGET_DURATION_MS", "target_duration_ms");
  const auto sm_max = layers.number("--sm-max", f.sm_max, "WARPWATCH_SM_MAX", "sm_max");
  const auto min_speed = layers.number("--min-speed", f.min_speed, "WARPWATCH_MIN_SPEED", "min_speed");
  const auto max_speed = layers.number("--max-speed", f.max_speed, "WARPWATCH_MAX_SPEED", "max_speed");

  const auto mode = layers.text("--count-mode", f.count_mode, "WARPWATCH_COUNT_MODE", "count_mode");
  opt.count_mode = mode ? parse_count_mode(*mode) : CountMode::Graphemes;

  switch (iface) {
    case Interface::PerClass: {
      if (!sm || !ss)
        throw Error(ErrorKind::InvalidArgument, "the per-class interface needs both --sm and --ss");
      opt.spec = PerClassSpeed{*sm, *ss};
      break;
    }
    case Interface::ReadingRate: {
      if (!sm || !rate)
        throw Error(ErrorKind::InvalidArgument,
                    "the reading-rate interface needs both --sm and --reading-rate");
      ReadingRateSpeed spec;
      spec.s_m = *sm;
      spec.s_r = *rate;
      spec.count_mode = opt.count_mode;
      spec.min_speed = min_speed;
      spec.max_speed = max_speed;
      opt.spec = spec;
      break;
    }
    case Interface::TargetDuration: {
      if (!target || !ss)
        throw Error(ErrorKind::InvalidArgument,
                    "the target-duration interface needs both --target-duration-ms and --ss");
      TargetDurationSpeed spec;
      spec.l_q = *target;
      spec.s_s = *ss;
      spec.s_m_max = sm_max;
      opt.spec = spec;
      break;
    }
    case Interface::None: break;
  }

  opt.gap_merge =
      layers.integer("--gap-merge-ms", f.gap_merge, "WARPWATCH_GAP_MERGE_MS", "gap_merge_ms")
          .value_or(500);
  opt.center = layers.boolean("--center", f.center, "WARPWATCH_CENTER", "center").value_or(false);
  opt.fade.enabled = layers.boolean("--fade", f.fade, "WARPWATCH_FADE", "fade").value_or(false);
  const auto alpha = layers.integer("--fade-alpha", f.fade_alpha, "WARPWATCH_FADE_ALPHA", "fade_alpha");
  const auto fade_max = layers.integer("--fade-max-ms", f.fade_max, "WARPWATCH_FADE_MAX_MS", "fade_max_ms");
  if (!opt.fade.enabled && (layers.on_cmd("--fade-alpha") || layers.on_cmd("--fade-max-ms")))
    throw Error(ErrorKind::InvalidArgument, "--fade-alpha/--fade-max-ms need --fade");
  if (alpha) {
    if (*alpha < 0 || *alpha > 255)
      throw Error(ErrorKind::InvalidArgument, "--fade-alpha must lie in [0, 255]");
    opt.fade.alpha = static_cast<int>(*alpha);
  }
  if (fade_max) opt.fade.max_extension = *fade_max;

  if (!f.emits.empty()) {
    opt.emits = f.emits;
  } else if (auto e = env_value("WARPWATCH_EMIT")) {
    opt.emits = split_commas(*e);
  } else if (layers.in_config("emit")) {
    const json& v = layers.config_at("emit");
    if (!v.is_array()) throw Error(ErrorKind::InvalidArgument, "config emit must be an array");
    for (const auto& item : v) {
      if (!item.is_string()) throw Error(ErrorKind::InvalidArgument, "config emit entries must be strings");
      opt.emits.push_back(item.get<std::string>());
    }
  } else {
    opt.emits = {default_emit};
  }
  std::vector<std::string> unique;
  for (const auto& e : opt.emits) {
    if (e != "edl" && e != "ass" && e != "srt" && e != "script-generic" &&
        e != "script-filtergraph")
      throw Error(ErrorKind::InvalidArgument, "unknown --emit value: " + e);
    if (std::find(unique.begin(), unique.end(), e) == unique.end()) unique.push_back(e);
  }
  opt.emits = std::move(unique);
  if (opt.emits.empty()) throw Error(ErrorKind::InvalidArgument, "at least one --emit is required");

  opt.out_dir = layers.text("--out-dir", f.out_dir, "WARPWATCH_OUT_DIR", "out_dir").value_or(".");
  return opt;
}

int run_plan(const CLI::App* cmd, const PlanFlags& flags, const std::string& default_emit,
             std::ostream& out, std::ostream& err) {
  const PlanOptions opt = resolve_plan_options(cmd, flags, default_emit);
  const SubtitleTrack track = load_track(opt.subs);
  const SegmentList segs = segment_timeline(track, opt.duration, opt.gap_merge);
  const WarpPlan plan = build_warp_plan(segs, opt.spec, track);
  for (const auto& w : plan.warnings) err << "warning: " << w << "\n";

  // All validation is done; now produce artifacts.
  std::error_code ec;
  fs::create_directories(opt.out_dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + opt.out_dir.string());
  const std::string stem = opt.subs.stem().string();

  std::optional<SubtitleTrack> retimed;
  auto get_retimed = [&]() -> const SubtitleTrack& {
    if (!retimed) retimed = retime_track(track, plan);
    return *retimed;
  };
  for (const auto& kind : opt.emits) {
    if (kind == "edl") {
      write_file(opt.out_dir / (stem + ".edl.json"), emit_edl(plan));
    } else if (kind == "srt") {
      write_file(opt.out_dir / (stem + ".retimed.srt"), write_srt(get_retimed()));
    } else if (kind == "ass") {
      StyledTrack styled = apply_fading(get_retimed(), plan.l_out, opt.fade);
      styled = apply_centering(std::move(styled), opt.center);
      RenderConfig render;
      render.fade_alpha = opt.fade.alpha;
      write_file(opt.out_dir / (stem + ".styled.ass"), write_ass(styled, render));
    } else if (kind == "script-generic") {
      write_file(opt.out_dir / (stem + ".plan.txt"),
                 emit_filter_script(plan, ScriptProfile::Generic));
    } else {
      write_file(opt.out_dir / (stem + ".graph.txt"),
                 emit_filter_script(plan, ScriptProfile::FilterGraph));
    }
  }

#ifdef WARPWATCH_FFMPEG_TOOLS
  if (!flags.encode_media.empty()) {
    const fs::path graph = opt.out_dir / (stem + ".graph.txt");
    write_file(graph, emit_filter_script(plan, ScriptProfile::FilterGraph));
    const fs::path output = opt.out_dir / (stem + ".fast.mkv");
    const std::string command = "ffmpeg -nostdin -y -i \"" + flags.encode_media +
                                "\" -filter_complex_script \"" + graph.string() +
                                "\" -map \"[outv]\" -map \"[outa]\" \"" + output.string() + "\"";
    if (std::system(command.c_str()) != 0)
      throw Error(ErrorKind::IoError, "encoder failed: " + command);
  }
#endif

  const double r = compute_r(segs);
  std::string line = "{\"subs\":\"" + json_escape(opt.subs.filename().string()) + "\"";
  line += ",\"l_in_ms\":" + std::to_string(plan.l_in);
  line += ",\"l_out_ms\":" + std::to_string(plan.l_out);
  line += ",\"r\":" + fixed6(r);
  line += ",\"segments\":" + std::to_string(plan.segments.size());
  line += ",\"compression_ratio\":" +
          fixed6(static_cast<double>(plan.l_out) / static_cast<double>(plan.l_in));
  if (const auto* pc = std::get_if<PerClassSpeed>(&opt.spec)) {
    line += ",\"s_m\":" + fixed6(pc->s_m) + ",\"s_s\":" + fixed6(pc->s_s);
  } else if (const auto* rr = std::get_if<ReadingRateSpeed>(&opt.spec)) {
    line += ",\"s_m\":" + fixed6(rr->s_m) + ",\"s_r\":" + fixed6(rr->s_r);
  } else {
    const auto& td = std::get<TargetDurationSpeed>(opt.spec);
    const SolvedSpeeds solved = solve_sm_for_target(td.l_q, td.s_s, r, segs.total, td.s_m_max);
    line += ",\"s_m\":" + fixed6(solved.s_m) + ",\"s_s\":" + fixed6(solved.s_s);
    line += ",\"adjusted\":";
    line += solved.adjusted ? "true" : "false";
  }
  line += "}";
  out << line << "\n";
  return 0;
}

// ---- stats ----

struct StatsFlags {
  std::string subs;
  std::int64_t duration_ms = 0;
  std::string subs_dir;
  std::string manifest;
  std::int64_t gap_merge = 0;
  std::string count_mode;
  std::string config_path;
};

std::string track_stats_json(const std::string& file, const TrackStats& st) {
  std::string s = "{\"file\":\"" + json_escape(file) + "\"";
  s += ",\"r\":" + fixed6(st.r);
  s += ",\"total_ms\":" + std::to_string(st.total_ms);
  s += ",\"language_ms\":" + std::to_string(st.language_ms);
  s += ",\"cues\":" + std::to_string(st.cue_count);
  s += ",\"text_units\":" + std::to_string(st.text_units);
  s += ",\"required_rate\":" + fixed6(st.required_rate);
  s += ",\"per_cue_rate_mean\":" + fixed6(st.per_cue_rate_mean);
  s += ",\"per_cue_rate_std\":" + fixed6(st.per_cue_rate_std);
  s += "}";
  return s;
}

int run_stats(const CLI::App* cmd, const StatsFlags& f, std::ostream& out, std::ostream& err) {
  (void)err;
  const json config = load_config(f.config_path, kConfigKeys);
  const Layers layers(cmd, config);

  const auto subs = layers.text("--subs", f.subs, "WARPWATCH_SUBS", "subs");
  const auto subs_dir = layers.text("--subs-dir", f.subs_dir, "WARPWATCH_SUBS_DIR", "subs_dir");
  if (static_cast<bool>(subs) == static_cast<bool>(subs_dir))
    throw Error(ErrorKind::InvalidArgument, "give exactly one of --subs or --subs-dir");
  const TimeMs gap_merge =
      layers.integer("--gap-merge-ms", f.gap_merge, "WARPWATCH_GAP_MERGE_MS", "gap_merge_ms")
          .value_or(500);
  const auto mode_text = layers.text("--count-mode", f.count_mode, "WARPWATCH_COUNT_MODE", "count_mode");
  const CountMode mode = mode_text ? parse_count_mode(*mode_text) : CountMode::Graphemes;

  std::vector<std::pair<std::string, fs::path>> files;  // (sort key, path)
  json manifest;
  if (subs) {
    const auto duration =
        layers.integer("--duration-ms", f.duration_ms, "WARPWATCH_DURATION_MS", "duration_ms");
    if (!duration) throw Error(ErrorKind::InvalidArgument, "--subs needs --duration-ms");
    manifest[fs::path(*subs).filename().string()] = *duration;
    files.emplace_back(fs::path(*subs).filename().string(), *subs);
  } else {
    const auto manifest_path = layers.text("--duration-manifest", f.manifest,
                                           "WARPWATCH_DURATION_MANIFEST", "duration_manifest");
    if (!manifest_path)
      throw Error(ErrorKind::InvalidArgument, "--subs-dir needs --duration-manifest");
    try {
      manifest = json::parse(read_file(*manifest_path));
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidArgument, "manifest " + *manifest_path + ": " + e.what());
    }
    if (!manifest.is_object())
      throw Error(ErrorKind::InvalidArgument, "manifest must map file names to durations");
    std::error_code ec;
    fs::directory_iterator it(*subs_dir, ec);
    if (ec) throw Error(ErrorKind::IoError, "cannot list " + *subs_dir);
    for (const auto& entry : it) {
      if (!entry.is_regular_file()) continue;
      const fs::path p = entry.path();
      if (p.extension() == ".srt" || p.extension() == ".vtt")
        files.emplace_back(p.filename().string(), p);
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw Error(ErrorKind::EmptyCorpus, "no .srt or .vtt files in " + *subs_dir);
  }

  std::vector<TrackStats> all;
  std::string tracks_json = "[";
  for (size_t i = 0; i < files.size(); ++i) {
    const auto& [name, path] = files[i];
    if (!manifest.contains(name) || !manifest[name].is_number_integer())
      throw Error(ErrorKind::InvalidArgument, "manifest has no integer duration for " + name);
    const SubtitleTrack track = load_track(path);
    TrackStats st;
    try {
      st = track_stats(track, manifest[name].get<TimeMs>(), mode, gap_merge);
    } catch (const Error& e) {
      throw Error(e.kind(), name + ": " + e.what());
    }
    all.push_back(st);
    if (i) tracks_json += ",";
    tracks_json += track_stats_json(name, st);
  }
  tracks_json += "]";

  const CorpusStats cs = corpus_stats(all);
  std::string corpus = "{\"n_tracks\":" + std::to_string(cs.n_tracks);
  corpus += ",\"r_mean\":" + fixed6(cs.r_mean);
  corpus += ",\"r_std\":" + fixed6(cs.r_std);
  corpus += ",\"rate_mean\":" + fixed6(cs.rate_mean);
  corpus += ",\"rate_std\":" + fixed6(cs.rate_std);
  corpus += ",\"total_cues\":" + std::to_string(cs.total_cues);
  corpus += "}";

  out << "{\"tracks\":" << tracks_json << ",\"corpus\":" << corpus << "}\n";
  return 0;
}

// ---- fit ----

struct FitFlags {
  std::string points_path;
  std::string config_path;
};

int run_fit(const CLI::App* cmd, const FitFlags& f, std::ostream& out) {
  const json config = load_config(f.config_path, kConfigKeys);
  const Layers layers(cmd, config);
  const auto points_path = layers.text("--points", f.points_path, "WARPWATCH_POINTS", "points");
  if (!points_path) throw Error(ErrorKind::InvalidArgument, "--points is required");

  json doc;
  try {
    doc = json::parse(read_file(*points_path));
  } catch (const json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, "points " + *points_path + ": " + e.what());
  }
  if (!doc.is_array())
    throw Error(ErrorKind::InvalidArgument, "points file must be a JSON array");
  std::vector<LogisticPoint> pts;
  for (const auto& item : doc) {
    if (item.is_array() && item.size() == 2 && item[0].is_number() && item[1].is_number()) {
      pts.push_back({item[0].get<double>(), item[1].get<double>()});
    } else if (item.is_object() && item.contains("x") && item.contains("y") &&
               item["x"].is_number() && item["y"].is_number()) {
      pts.push_back({item["x"].get<double>(), item["y"].get<double>()});
    } else {
      throw Error(ErrorKind::InvalidArgument, "points entries must be [x, y] or {\"x\":..,\"y\":..}");
    }
  }

  const LogisticFit fit = fit_logistic(pts);
  out << "{\"a\":" << fixed6(fit.a) << ",\"b\":" << fixed6(fit.b) << ",\"sse\":" << sci6(fit.sse)
      << ",\"converged\":" << (fit.converged ? "true" : "false") << "}\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"subtitle-driven two-level fast-forward planner"};
  app.require_subcommand(1);

  PlanFlags plan_flags;
  CLI::App* plan_cmd = app.add_subcommand("plan", "build a warp plan and emit artifacts");
  add_plan_flags(plan_cmd, plan_flags);

  PlanFlags retime_flags;
  CLI::App* retime_cmd = app.add_subcommand("retime", "retime subtitles through a warp plan");
  add_plan_flags(retime_cmd, retime_flags);

  StatsFlags stats_flags;
  CLI::App* stats_cmd = app.add_subcommand("stats", "per-track and corpus statistics");
  stats_cmd->add_option("--subs", stats_flags.subs, "single subtitle file");
  stats_cmd->add_option("--duration-ms", stats_flags.duration_ms, "duration for --subs");
  stats_cmd->add_option("--subs-dir", stats_flags.subs_dir, "directory of subtitle files");
  stats_cmd->add_option("--duration-manifest", stats_flags.manifest,
                        "JSON object mapping file names to durations in ms");
  stats_cmd->add_option("--gap-merge-ms", stats_flags.gap_merge, "segmentation gap merge (default 500)");
  stats_cmd->add_option("--count-mode", stats_flags.count_mode, "graphemes or words");
  stats_cmd->add_option("--config", stats_flags.config_path, "JSON config file merged under flags");

  FitFlags fit_flags;
  CLI::App* fit_cmd = app.add_subcommand("fit", "fit the 2-parameter comprehension model");
  fit_cmd->add_option("--points", fit_flags.points_path, "JSON file with (x, y) samples");
  fit_cmd->add_option("--config", fit_flags.config_path, "JSON config file merged under flags");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  try {
    if (plan_cmd->parsed()) return run_plan(plan_cmd, plan_flags, "edl", out, err);
    if (retime_cmd->parsed()) return run_plan(retime_cmd, retime_flags, "srt", out, err);
    if (stats_cmd->parsed()) return run_stats(stats_cmd, stats_flags, out, err);
    return run_fit(fit_cmd, fit_flags, out);
  } catch (const Error& e) {
    err << "error [" << error_kind_name(e.kind()) << "]: " << e.what() << "\n";
    return e.kind() == ErrorKind::IoError ? 2 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace warpwatch::cli
