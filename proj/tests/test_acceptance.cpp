#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "warpwatch/analytics.hpp"
#include "warpwatch/ass_writer.hpp"
#include "warpwatch/emit.hpp"
#include "warpwatch/styling.hpp"

using namespace warpwatch;
namespace fs = std::filesystem;

// Every criterion below prints exactly one PASS/FAIL line; doctest still
// records each individual check.
#define ACC(cond)                            \
  do {                                       \
    const bool acc_c_ = static_cast<bool>(cond); \
    CHECK(acc_c_);                           \
    ok &= acc_c_;                            \
  } while (0)

namespace {

void report(int n, bool ok, const char* what) {
  std::printf("criterion %d: %s  (%s)\n", n, ok ? "PASS" : "FAIL", what);
  std::fflush(stdout);
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct RandomCase {
  SubtitleTrack track;
  TimeMs total = 0;
  TimeMs gap_merge = 0;
};

// Cue/gap grains stay >= 50 ms so no segment collapses to zero output
// at the speeds used here; criteria 2/3 then see pure rounding error.
RandomCase random_case(std::mt19937_64& rng, int max_cues) {
  std::uniform_int_distribution<int> n_cues(0, max_cues);
  std::uniform_int_distribution<TimeMs> lead(0, 5000), dur(500, 8000), gap(50, 6000),
      tail(0, 20000), merge(0, 1500);
  RandomCase rc;
  const int n = n_cues(rng);
  TimeMs t = lead(rng);
  for (int i = 0; i < n; ++i) {
    SubtitleCue c;
    c.index = i + 1;
    c.start = t;
    c.end = t + dur(rng);
    c.lines = {"plenty to read in this cue"};
    t = c.end + gap(rng);
    rc.track.cues.push_back(std::move(c));
  }
  rc.total = std::max<TimeMs>(t + tail(rng), 1000);
  rc.gap_merge = merge(rng);
  return rc;
}

double model_duration(double s_m, double s_s, double r, TimeMs l) {
  const double lf = static_cast<double>(l);
  return r * lf / s_m + (1.0 - r) * lf / s_s;
}

}  // namespace

TEST_CASE("criterion 1: duration model ratio at the reference constants") {
  bool ok = true;
  for (const TimeMs l : {TimeMs{1000000}, TimeMs{3600000}, TimeMs{7200000}, TimeMs{86400000},
                         TimeMs{1000000000}}) {
    const double ratio =
        static_cast<double>(predict_duration(11.14, 5.910, 0.5777, l)) / static_cast<double>(l);
    ACC(std::fabs(ratio - 0.12331) <= 1e-4);
  }
  report(1, ok, "predicted/source ratio is 0.12331 +/- 1e-4 for every l >= 1e6 ms");
}

TEST_CASE("criterion 2: per-class plans match the closed-form duration") {
  bool ok = true;
  std::mt19937_64 rng(900211);
  std::uniform_real_distribution<double> speed(1.0, 30.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const RandomCase rc = random_case(rng, 40);
    const SegmentList segs = segment_timeline(rc.track, rc.total, rc.gap_merge);
    const double s_m = speed(rng), s_s = speed(rng);
    const WarpPlan plan = build_warp_plan(segs, PerClassSpeed{s_m, s_s}, rc.track);
    const double predicted = model_duration(s_m, s_s, compute_r(segs), rc.total);
    ACC(std::fabs(static_cast<double>(plan.l_out) - predicted) <=
        static_cast<double>(plan.segments.size()));
  }
  report(2, ok, "1000 random plans: |l_out - model| <= segment count ms");
}

TEST_CASE("criterion 3: reading-rate plans match their closed-form duration") {
  bool ok = true;
  std::mt19937_64 rng(318294);
  std::uniform_real_distribution<double> speed(1.0, 30.0), rate(100.0, 800.0);
  for (int trial = 0; trial < 1000; ++trial) {
    const RandomCase rc = random_case(rng, 40);
    const SegmentList segs = segment_timeline(rc.track, rc.total, rc.gap_merge);
    ReadingRateSpeed spec;
    spec.s_m = speed(rng);
    spec.s_r = rate(rng);
    const WarpPlan plan = build_warp_plan(segs, spec, rc.track);
    const TimeMs predicted =
        predict_duration_reading(spec.s_m, spec.s_r, segs, rc.track, spec.count_mode);
    ACC(std::llabs(plan.l_out - predicted) <=
        static_cast<std::int64_t>(plan.segments.size()));
  }
  report(3, ok, "1000 unclamped reading-rate plans match the per-segment model");
}

TEST_CASE("criterion 4: target-duration solving round-trips") {
  bool ok = true;
  std::mt19937_64 rng(471103);
  std::uniform_real_distribution<double> ss_dist(1.0, 10.0), sm_dist(1.0, 40.0),
      u_dist(0.05, 0.95), cap_dist(2.0, 10.0), low_dist(0.2, 0.9);

  int feasible = 0;
  while (feasible < 1000) {
    const RandomCase rc = random_case(rng, 30);
    const SegmentList segs = segment_timeline(rc.track, rc.total, rc.gap_merge);
    const double r = compute_r(segs);
    if (r < 0.01 || r > 0.99) continue;
    const double s_s = ss_dist(rng);
    const TimeMs l_q = predict_duration(sm_dist(rng), s_s, r, rc.total);
    if (static_cast<double>(l_q) <= (1.0 - r) * static_cast<double>(rc.total) / s_s) continue;
    const SolvedSpeeds solved = solve_sm_for_target(l_q, s_s, r, rc.total, std::nullopt);
    ACC(!solved.adjusted);
    ACC(std::llabs(predict_duration(solved.s_m, solved.s_s, r, rc.total) - l_q) <= 1);
    ++feasible;
  }

  int infeasible = 0;
  while (infeasible < 200) {
    const RandomCase rc = random_case(rng, 30);
    const SegmentList segs = segment_timeline(rc.track, rc.total, rc.gap_merge);
    const double r = compute_r(segs);
    if (r < 0.01 || r > 0.95) continue;
    const double s_s = ss_dist(rng);
    const double language_time = (1.0 - r) * static_cast<double>(rc.total) / s_s;
    if (language_time < 100.0) continue;
    const TimeMs l_q = std::llround(language_time * low_dist(rng));
    if (l_q < 1) continue;
    bool threw = false;
    try {
      solve_sm_for_target(l_q, s_s, r, rc.total, std::nullopt);
    } catch (const Error& e) {
      threw = e.kind() == ErrorKind::InfeasibleTarget;
    }
    ACC(threw);
    ++infeasible;
  }

  int capped = 0;
  while (capped < 200) {
    const RandomCase rc = random_case(rng, 30);
    const SegmentList segs = segment_timeline(rc.track, rc.total, rc.gap_merge);
    const double r = compute_r(segs);
    if (r < 0.05 || r > 0.95) continue;
    const double s_s = ss_dist(rng);
    const double cap = cap_dist(rng);
    const double lf = static_cast<double>(rc.total);
    const double floor_at_cap = r * lf / cap;
    const double hi = (1.0 - r) * lf / s_s + floor_at_cap;
    const TimeMs l_q = std::llround(floor_at_cap + u_dist(rng) * (hi - floor_at_cap));
    if (static_cast<double>(l_q) <= floor_at_cap + 1.0 ||
        static_cast<double>(l_q) >= hi - 1.0)
      continue;
    const SolvedSpeeds solved = solve_sm_for_target(l_q, s_s, r, rc.total, cap);
    ACC(solved.adjusted);
    ACC(solved.s_m == cap);
    ACC(std::llabs(predict_duration(solved.s_m, solved.s_s, r, rc.total) - l_q) <= 1);
    ++capped;
  }
  report(4, ok, "1000 feasible within 1 ms, 200 infeasible raised, 200 capped adjusted");
}

TEST_CASE("criterion 5: warp map properties over 10000 probes") {
  bool ok = true;
  std::mt19937_64 rng(277551);
  std::uniform_real_distribution<double> speed(1.0, 20.0);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomCase rc = random_case(rng, 25);
    const SegmentList segs = segment_timeline(rc.track, rc.total, rc.gap_merge);
    const double s_m = speed(rng), s_s = speed(rng);
    const WarpPlan plan = build_warp_plan(segs, PerClassSpeed{s_m, s_s}, rc.track);

    ACC(warp_time(plan, 0) == 0);
    ACC(warp_time(plan, plan.l_in) == plan.l_out);
    ACC(unwarp_time(plan, 0) == 0);
    ACC(unwarp_time(plan, plan.l_out) == plan.l_in);

    const TimeMs back_bound =
        static_cast<TimeMs>(std::ceil(std::max(s_m, s_s))) + 1;
    std::uniform_int_distribution<TimeMs> t_in(0, plan.l_in), t_out(0, plan.l_out);
    TimeMs prev_t = 0;
    for (int probe = 0; probe < 50; ++probe) {
      TimeMs t = t_in(rng);
      if (t < prev_t) std::swap(t, prev_t);
      ACC(warp_time(plan, prev_t) <= warp_time(plan, t));  // monotone
      ACC(std::llabs(unwarp_time(plan, warp_time(plan, t)) - t) <= back_bound);
      const TimeMs w = t_out(rng);
      ACC(std::llabs(warp_time(plan, unwarp_time(plan, w)) - w) <= 1);
      prev_t = t;
    }
  }
  // uniform-speed exactness: a single constant-speed stretch maps by division
  {
    std::uniform_real_distribution<double> s_dist(1.0, 20.0);
    for (int trial = 0; trial < 50; ++trial) {
      const double s = s_dist(rng);
      const SegmentList segs = segment_timeline(SubtitleTrack{}, 100000, 0);
      const WarpPlan plan = build_warp_plan(segs, PerClassSpeed{s, s}, SubtitleTrack{});
      std::uniform_int_distribution<TimeMs> t_in(0, 100000);
      for (int probe = 0; probe < 20; ++probe) {
        const TimeMs t = t_in(rng);
        if (t == 100000) continue;  // endpoint pins to l_out by definition
        ACC(warp_time(plan, t) == std::llround(static_cast<double>(t) / s));
      }
    }
    const RandomCase rc = random_case(rng, 20);
    const SegmentList segs = segment_timeline(rc.track, rc.total, rc.gap_merge);
    const WarpPlan unit = build_warp_plan(segs, PerClassSpeed{1.0, 1.0}, rc.track);
    std::uniform_int_distribution<TimeMs> t_in(0, unit.l_in);
    for (int probe = 0; probe < 100; ++probe) {
      const TimeMs t = t_in(rng);
      ACC(warp_time(unit, t) == t);
    }
  }
  report(5, ok, "monotone, endpoint-pinned, inverse-bounded, exact at uniform speed");
}

TEST_CASE("criterion 6: styling properties and byte-stable artifacts") {
  bool ok = true;
  std::mt19937_64 rng(662148);
  std::uniform_real_distribution<double> speed(1.0, 12.0);
  std::uniform_int_distribution<int> alpha(0, 255);
  std::uniform_int_distribution<TimeMs> cap(0, 4000);
  std::uniform_int_distribution<int> capped(0, 1);
  for (int trial = 0; trial < 1000; ++trial) {
    RandomCase rc = random_case(rng, 20);
    if (rc.track.cues.empty()) continue;
    const SegmentList segs = segment_timeline(rc.track, rc.total, rc.gap_merge);
    const WarpPlan plan = build_warp_plan(segs, PerClassSpeed{speed(rng), speed(rng)}, rc.track);
    const SubtitleTrack retimed = retime_track(rc.track, plan);
    FadeConfig cfg;
    cfg.enabled = true;
    cfg.alpha = alpha(rng);
    if (capped(rng)) cfg.max_extension = cap(rng);
    const StyledTrack styled = apply_fading(retimed, plan.l_out, cfg);

    for (size_t i = 0; i < styled.cues.size(); ++i) {
      const StyledCue& sc = styled.cues[i];
      const TimeMs next_solid = i + 1 < styled.cues.size()
                                    ? styled.cues[i + 1].base.start
                                    : styled.total_out;
      TimeMs expected_end = std::max(next_solid, sc.base.end);
      if (cfg.max_extension)
        expected_end = std::min(expected_end, sc.base.end + *cfg.max_extension);
      if (sc.fade) {
        ACC(sc.fade->start == sc.base.end);          // fade begins where solid ends
        ACC(sc.fade->end == expected_end);           // cap semantics, exactly
        ACC(sc.fade->end > sc.fade->start);
        if (i + 1 < styled.cues.size())
          ACC(sc.fade->end <= styled.cues[i + 1].base.start);  // never into next solid
      } else {
        ACC(expected_end <= sc.base.end);            // interval would have been empty
      }
    }
  }

  // golden artifacts for the bundled 50-cue fixture are byte-stable
  const SubtitleTrack demo = parse_srt(read_file(fs::path(WARPWATCH_TEST_DATA_DIR) / "demo50.srt"));
  const SegmentList segs = segment_timeline(demo, 420000, 500);
  const WarpPlan plan = build_warp_plan(segs, PerClassSpeed{6.0, 2.5}, demo);
  const std::string edl = emit_edl(plan);
  FadeConfig fade;
  fade.enabled = true;
  StyledTrack styled = apply_fading(retime_track(demo, plan), plan.l_out, fade);
  styled = apply_centering(std::move(styled), true);
  const std::string ass = write_ass(styled, RenderConfig{});
  ACC(edl == read_file(fs::path(WARPWATCH_GOLDEN_DIR) / "demo50.edl.json"));
  ACC(ass == read_file(fs::path(WARPWATCH_GOLDEN_DIR) / "demo50.styled.ass"));

  // a second, independent pass produces identical bytes
  const WarpPlan again = build_warp_plan(segment_timeline(demo, 420000, 500),
                                         PerClassSpeed{6.0, 2.5}, demo);
  StyledTrack styled2 = apply_fading(retime_track(demo, again), again.l_out, fade);
  styled2 = apply_centering(std::move(styled2), true);
  ACC(emit_edl(again) == edl);
  ACC(write_ass(styled2, RenderConfig{}) == ass);
  report(6, ok, "fades never cover the next cue, caps exact, goldens byte-identical");
}

TEST_CASE("criterion 7: analytics fixtures and fit recovery") {
  bool ok = true;
  const auto track_of = [](std::vector<std::pair<TimeMs, TimeMs>> spans) {
    SubtitleTrack t;
    int i = 1;
    for (auto [s, e] : spans) {
      SubtitleCue c;
      c.index = i++;
      c.start = s;
      c.end = e;
      c.lines = {"x"};
      t.cues.push_back(std::move(c));
    }
    return t;
  };
  ACC(std::fabs(fade_extension_factor(track_of({{0, 2000}, {10000, 12000}}), 20000) - 5.0) <
      1e-12);
  ACC(std::fabs(fade_extension_factor(track_of({{0, 10000}, {10000, 20000}}), 20000) - 1.0) <
      1e-12);
  ACC(std::fabs(fade_extension_factor(track_of({{0, 1000}}), 3000) - 3.0) < 1e-12);

  std::mt19937_64 rng(804417);
  std::uniform_real_distribution<double> a_dist(0.2, 3.0), b_dist(1.0, 12.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double a = a_dist(rng), b = b_dist(rng);
    std::vector<LogisticPoint> pts;
    for (int i = 0; i <= 14; ++i) {
      const double x = b - 7.0 + i;
      pts.push_back({x, 1.0 / (1.0 + std::exp(a * (x - b)))});
    }
    const LogisticFit fit = fit_logistic(pts);
    ACC(std::fabs(fit.a - a) <= 1e-3);
    ACC(std::fabs(fit.b - b) <= 1e-3);
  }

  // analytic gradient against central differences
  std::uniform_real_distribution<double> x_dist(0.0, 12.0), y_dist(0.0, 1.0);
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    double a = a_dist(rng) * (trial % 2 ? 1.0 : -1.0);
    const double b = b_dist(rng);
    std::vector<LogisticPoint> pts;
    for (int i = 0; i < 10; ++i) pts.push_back({x_dist(rng), y_dist(rng)});
    double da = 0.0, db = 0.0;
    detail::logistic_sse_grad(a, b, pts, &da, &db);
    const double fd_a =
        (detail::logistic_sse(a + h, b, pts) - detail::logistic_sse(a - h, b, pts)) / (2 * h);
    const double fd_b =
        (detail::logistic_sse(a, b + h, pts) - detail::logistic_sse(a, b - h, pts)) / (2 * h);
    ACC(std::fabs(da - fd_a) <= 1e-5 * std::max({std::fabs(da), std::fabs(fd_a), 1e-8}) + 1e-9);
    ACC(std::fabs(db - fd_b) <= 1e-5 * std::max({std::fabs(db), std::fabs(fd_b), 1e-8}) + 1e-9);
  }

  // midpoint property: the fitted b sits where y crosses 0.5
  const std::vector<LogisticPoint> sym = {
      {2.0, 0.9}, {3.0, 0.7}, {4.0, 0.5}, {5.0, 0.3}, {6.0, 0.1}};
  const LogisticFit fit = fit_logistic(sym);
  ACC(std::fabs(fit.b - 4.0) <= 1e-6);
  report(7, ok, "fade fixtures exact, 100 noiseless fits within 1e-3, gradients verified");
}

TEST_CASE("criterion 8: parser fixture suite") {
  bool ok = true;
  const fs::path data = WARPWATCH_TEST_DATA_DIR;

  const SubtitleTrack well = parse_srt(read_file(data / "wellformed.srt"));
  ACC(well.cues.size() == 3);
  ACC(well.cues[0].start == 1000);
  ACC(well.cues[0].end == 2500);
  ACC(well.cues[1].lines == std::vector<std::string>({"Two lines", "of text"}));
  ACC(well.cues[2].end == 63250);
  ACC(parse_srt(write_srt(well)).cues == well.cues);

  const SubtitleTrack reordered = parse_srt(read_file(data / "outoforder.srt"));
  ACC(reordered.cues.size() == 3);
  ACC(reordered.cues[0].index == 1);
  ACC(reordered.cues[0].lines[0] == "First by time");
  ACC(reordered.cues[1].lines[0] == "Second by time");
  ACC(reordered.cues[2].lines[0] == "Third by time");

  const SubtitleTrack overlapping = parse_srt(read_file(data / "overlapping.srt"));
  ACC(overlapping.cues.size() == 3);
  const SegmentList segs = segment_timeline(overlapping, 10000, 0);
  ACC(std::fabs(compute_r(segs) - 0.2) < 1e-12);  // union [1000,9000) of 10000

  bool threw = false;
  try {
    parse_srt(read_file(data / "malformed_timestamp.srt"));
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::MalformedTimestamp && e.line() == 6;
  }
  ACC(threw);
  threw = false;
  try {
    parse_srt(read_file(data / "nonpositive.srt"));
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::EndNotAfterStart;
  }
  ACC(threw);

  const SubtitleTrack vtt = parse_webvtt(read_file(data / "wellformed.vtt"));
  ACC(vtt.cues.size() == 2);
  ACC(vtt.cues[0].start == 1000);
  ACC(vtt.cues[0].end == 2500);
  ACC(vtt.cues[0].lines[0] == "Hello <i>there</i>");
  ACC(vtt.cues[1].start == 4000);
  threw = false;
  try {
    parse_webvtt(read_file(data / "missing_header.vtt"));
  } catch (const Error& e) {
    threw = e.kind() == ErrorKind::MissingHeader;
  }
  ACC(threw);

  const SubtitleTrack demo = parse_srt(read_file(data / "demo50.srt"));
  ACC(demo.cues.size() == 50);
  ACC(demo.cues.front().start == 8000);
  ACC(demo.cues.back().end == 233100);
  ACC(parse_srt(write_srt(demo)).cues == demo.cues);

  SubtitleCue counting;
  counting.lines = {"Hello <i>there</i>"};
  ACC(count_text_units(counting, CountMode::Graphemes) == 10);
  ACC(count_text_units(counting, CountMode::Words) == 2);
  counting.lines = {"♪ And the river runs dry ♪"};
  ACC(count_text_units(counting, CountMode::Graphemes) == 20);
  ACC(count_text_units(counting, CountMode::Words) == 7);
  counting.lines = {"Is the café still open?"};
  ACC(count_text_units(counting, CountMode::Graphemes) == 19);
  ACC(count_text_units(counting, CountMode::Words) == 5);
  report(8, ok, "srt/vtt fixtures parse, round-trip and fail exactly as promised");
}

TEST_CASE("criterion 9: the command line is deterministic end to end") {
  bool ok = true;
  for (const char* name :
       {"WARPWATCH_SUBS", "WARPWATCH_DURATION_MS", "WARPWATCH_SM", "WARPWATCH_SS",
        "WARPWATCH_EMIT", "WARPWATCH_OUT_DIR", "WARPWATCH_FADE", "WARPWATCH_CENTER",
        "WARPWATCH_GAP_MERGE_MS"})
    unsetenv(name);

  const fs::path base = fs::temp_directory_path() /
                        ("warpwatch_acc_" + std::to_string(getpid()));
  fs::remove_all(base);
  fs::create_directories(base);
  const fs::path subs = fs::path(WARPWATCH_TEST_DATA_DIR) / "demo50.srt";

  auto run_once = [&](const std::string& tag) {
    const fs::path out_dir = base / tag;
    const fs::path stdout_file = base / (tag + ".out");
    const std::string cmd = std::string("\"") + WARPWATCH_CLI_BIN + "\" plan --subs \"" +
                            subs.string() + "\" --duration-ms 420000 --sm 6 --ss 2.5" +
                            " --fade --center --emit edl --emit ass --emit script-generic" +
                            " --emit script-filtergraph --out-dir \"" + out_dir.string() +
                            "\" > \"" + stdout_file.string() + "\" 2> \"" +
                            (base / (tag + ".err")).string() + "\"";
    return std::system(cmd.c_str());
  };
  ACC(run_once("run1") == 0);
  ACC(run_once("run2") == 0);

  for (const char* artifact :
       {"demo50.edl.json", "demo50.styled.ass", "demo50.plan.txt", "demo50.graph.txt"}) {
    const std::string a = read_file(base / "run1" / artifact);
    ACC(!a.empty());
    ACC(a == read_file(base / "run2" / artifact));
  }
  ACC(read_file(base / "run1.out") == read_file(base / "run2.out"));
  // the CLI writes the same bytes the library produces (checked against goldens)
  ACC(read_file(base / "run1" / "demo50.edl.json") ==
      read_file(fs::path(WARPWATCH_GOLDEN_DIR) / "demo50.edl.json"));
  ACC(read_file(base / "run1" / "demo50.styled.ass") ==
      read_file(fs::path(WARPWATCH_GOLDEN_DIR) / "demo50.styled.ass"));

  // the printed output duration obeys the two-level duration model
  const std::string summary = read_file(base / "run1.out");
  const std::string key = "\"l_out_ms\":";
  const size_t pos = summary.find(key);
  ACC(pos != std::string::npos);
  const TimeMs l_out = std::strtoll(summary.c_str() + pos + key.size(), nullptr, 10);

  const SubtitleTrack demo = parse_srt(read_file(subs));
  const SegmentList segs = segment_timeline(demo, 420000, 500);
  const WarpPlan plan = build_warp_plan(segs, PerClassSpeed{6.0, 2.5}, demo);
  ACC(l_out == plan.l_out);
  const double predicted = model_duration(6.0, 2.5, compute_r(segs), 420000);
  ACC(std::fabs(static_cast<double>(l_out) - predicted) <=
      static_cast<double>(plan.segments.size()));

  fs::remove_all(base);
  report(9, ok, "two runs, byte-identical artifacts, printed duration on the model");
}
