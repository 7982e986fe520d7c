#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "warpwatch/emit.hpp"

using namespace warpwatch;

namespace {

WarpPlan identity_plan() {
  WarpPlan plan;
  plan.l_in = 1000;
  plan.l_out = 1000;
  plan.segments.push_back({0, 1000, 1.0, 0, 1000, SegmentKind::NonLanguage});
  return plan;
}

WarpPlan two_speed_plan() {
  WarpPlan plan;
  plan.l_in = 20000;
  plan.l_out = 15000;
  plan.segments.push_back({0, 10000, 2.0, 0, 5000, SegmentKind::NonLanguage});
  plan.segments.push_back({10000, 20000, 1.0, 5000, 15000, SegmentKind::Language});
  return plan;
}

}  // namespace

TEST_CASE("edl: identity plan bytes are frozen") {
  CHECK(emit_edl(identity_plan()) ==
        "{\"version\":1,\"source_duration_ms\":1000,\"output_duration_ms\":1000,"
        "\"segments\":[{\"start_ms\":0,\"end_ms\":1000,\"speed\":1.000000,"
        "\"kind\":\"nonlanguage\"}]}");
}

TEST_CASE("edl: deterministic and injective") {
  const WarpPlan plan = two_speed_plan();
  CHECK(emit_edl(plan) == emit_edl(plan));
  WarpPlan other = plan;
  other.segments[1].speed = 1.25;
  CHECK(emit_edl(plan) != emit_edl(other));
}

TEST_CASE("edl: kind tags survive the round trip") {
  const WarpPlan back = read_edl(emit_edl(two_speed_plan()));
  REQUIRE(back.segments.size() == 2);
  CHECK(back.segments[0].kind == SegmentKind::NonLanguage);
  CHECK(back.segments[1].kind == SegmentKind::Language);
  CHECK_FALSE(back.spec.has_value());
}

TEST_CASE("edl: round trip reproduces plans with 6-decimal speeds") {
  std::mt19937_64 rng(112233);
  std::uniform_int_distribution<TimeMs> dur(1, 60000);
  std::uniform_int_distribution<int> n_segs(1, 40), speed_c(50, 1200);
  for (int trial = 0; trial < 1000; ++trial) {
    WarpPlan plan;
    double cumulative = 0.0;
    TimeMs in_pos = 0, out_pos = 0;
    const int n = n_segs(rng);
    for (int i = 0; i < n; ++i) {
      const TimeMs end = in_pos + dur(rng);
      const double speed = speed_c(rng) / 100.0;  // exact at 2 decimals
      cumulative += static_cast<double>(end - in_pos) / speed;
      TimeMs boundary = std::llround(cumulative);
      if (boundary <= out_pos) boundary = out_pos + 1;
      plan.segments.push_back({in_pos, end, speed, out_pos, boundary,
                               i % 2 ? SegmentKind::Language : SegmentKind::NonLanguage});
      in_pos = end;
      out_pos = boundary;
    }
    plan.l_in = in_pos;
    plan.l_out = out_pos;

    const WarpPlan back = read_edl(emit_edl(plan));
    REQUIRE(back.segments.size() == plan.segments.size());
    CHECK(back.l_in == plan.l_in);
    CHECK(back.l_out == plan.l_out);
    for (size_t i = 0; i < plan.segments.size(); ++i) {
      CHECK(back.segments[i].in_start == plan.segments[i].in_start);
      CHECK(back.segments[i].in_end == plan.segments[i].in_end);
      CHECK(back.segments[i].out_start == plan.segments[i].out_start);
      CHECK(back.segments[i].out_end == plan.segments[i].out_end);
      CHECK(back.segments[i].speed == doctest::Approx(plan.segments[i].speed).epsilon(1e-12));
    }
    // warp agreement at every boundary
    for (const auto& s : plan.segments) {
      CHECK(warp_time(back, s.in_start) == warp_time(plan, s.in_start));
      CHECK(warp_time(back, s.in_end) == warp_time(plan, s.in_end));
    }
  }
}

TEST_CASE("edl: reader validation") {
  CHECK_THROWS_AS(read_edl("not json"), Error);
  CHECK_THROWS_AS(read_edl("{\"version\":2,\"source_duration_ms\":1,\"output_duration_ms\":1,\"segments\":[]}"), Error);
  CHECK_THROWS_AS(read_edl("{\"version\":1,\"source_duration_ms\":1,\"output_duration_ms\":1,\"segments\":[]}"), Error);
  // gap between segments
  CHECK_THROWS_AS(
      read_edl("{\"version\":1,\"source_duration_ms\":30,\"output_duration_ms\":30,\"segments\":["
               "{\"start_ms\":0,\"end_ms\":10,\"speed\":1.0,\"kind\":\"language\"},"
               "{\"start_ms\":20,\"end_ms\":30,\"speed\":1.0,\"kind\":\"language\"}]}"),
      Error);
  // does not reach the declared duration
  CHECK_THROWS_AS(
      read_edl("{\"version\":1,\"source_duration_ms\":100,\"output_duration_ms\":100,\"segments\":["
               "{\"start_ms\":0,\"end_ms\":10,\"speed\":1.0,\"kind\":\"language\"}]}"),
      Error);
  // bad speed
  CHECK_THROWS_AS(
      read_edl("{\"version\":1,\"source_duration_ms\":10,\"output_duration_ms\":10,\"segments\":["
               "{\"start_ms\":0,\"end_ms\":10,\"speed\":0.0,\"kind\":\"language\"}]}"),
      Error);
  // bad kind
  CHECK_THROWS_AS(
      read_edl("{\"version\":1,\"source_duration_ms\":10,\"output_duration_ms\":10,\"segments\":["
               "{\"start_ms\":0,\"end_ms\":10,\"speed\":1.0,\"kind\":\"music\"}]}"),
      Error);
  // inconsistent output duration
  CHECK_THROWS_AS(
      read_edl("{\"version\":1,\"source_duration_ms\":10,\"output_duration_ms\":99,\"segments\":["
               "{\"start_ms\":0,\"end_ms\":10,\"speed\":1.0,\"kind\":\"language\"}]}"),
      Error);
}

TEST_CASE("tempo: frozen decompositions") {
  CHECK(decompose_tempo(1.5) == std::vector<double>{1.5});
  CHECK(decompose_tempo(1.0) == std::vector<double>{1.0});
  CHECK(decompose_tempo(2.0) == std::vector<double>{2.0});
  CHECK(decompose_tempo(0.5) == std::vector<double>{0.5});
  CHECK(decompose_tempo(0.25) == std::vector<double>{0.5, 0.5});

  const std::vector<double> six = decompose_tempo(6.0);
  REQUIRE(six.size() == 3);
  for (double s : six) CHECK(s == doctest::Approx(std::cbrt(6.0)).epsilon(1e-15));
}

TEST_CASE("tempo: stages stay legal and multiply back") {
  std::mt19937_64 rng(9182736);
  std::uniform_real_distribution<double> factor(0.01, 100.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double f = factor(rng);
    const std::vector<double> stages = decompose_tempo(f);
    REQUIRE(!stages.empty());
    double product = 1.0;
    for (double s : stages) {
      CHECK(s >= 0.5);
      CHECK(s <= 2.0);
      product *= s;
    }
    CHECK(std::fabs(product - f) / f <= 1e-9);
  }
}

TEST_CASE("tempo: invalid factors") {
  CHECK_THROWS_AS(decompose_tempo(0.0), Error);
  CHECK_THROWS_AS(decompose_tempo(-2.0), Error);
  CHECK_THROWS_AS(decompose_tempo(std::numeric_limits<double>::infinity()), Error);
}

TEST_CASE("rational: exact double round trips") {
  using detail::to_rational;
  CHECK(to_rational(1.0) == std::pair<std::int64_t, std::int64_t>{1, 1});
  CHECK(to_rational(2.5) == std::pair<std::int64_t, std::int64_t>{5, 2});
  CHECK(to_rational(6.0) == std::pair<std::int64_t, std::int64_t>{6, 1});
  CHECK(to_rational(0.0) == std::pair<std::int64_t, std::int64_t>{0, 1});

  std::mt19937_64 rng(5511);
  std::uniform_real_distribution<double> v(0.001, 1000.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double x = v(rng);
    const auto [num, den] = to_rational(x);
    CHECK(den > 0);
    CHECK(static_cast<double>(num) / static_cast<double>(den) == x);
  }
}

TEST_CASE("script: generic profile bytes") {
  CHECK(emit_filter_script(identity_plan(), ScriptProfile::Generic) ==
        "warpplan v1 1000 1000\nseg 0 0 1000 speed 1/1\n");
  CHECK(emit_filter_script(two_speed_plan(), ScriptProfile::Generic) ==
        "warpplan v1 20000 15000\n"
        "seg 0 0 10000 speed 2/1\n"
        "seg 1 10000 20000 speed 1/1\n");
}

TEST_CASE("script: filter graph structure") {
  WarpPlan plan;
  plan.l_in = 3000;
  plan.l_out = 1500;
  plan.segments.push_back({0, 1500, 6.0, 0, 250, SegmentKind::NonLanguage});
  plan.segments.push_back({1500, 3000, 1.2, 250, 1500, SegmentKind::Language});
  const std::string graph = emit_filter_script(plan, ScriptProfile::FilterGraph);

  CHECK(graph.find("[0:v]trim=start=0.000:end=1.500,setpts=(PTS-STARTPTS)/6.000000[v0];\n") !=
        std::string::npos);
  // speed 6 decomposes into exactly 3 tempo stages
  const std::string audio0 =
      "[0:a]atrim=start=0.000:end=1.500,asetpts=PTS-STARTPTS,"
      "atempo=1.817121,atempo=1.817121,atempo=1.817121[a0];\n";
  CHECK(graph.find(audio0) != std::string::npos);
  CHECK(graph.find("atempo=1.200000[a1]") != std::string::npos);
  CHECK(graph.find("[v0][a0][v1][a1]concat=n=2:v=1:a=1[outv][outa]\n") != std::string::npos);
  CHECK(graph == emit_filter_script(plan, ScriptProfile::FilterGraph));
}
