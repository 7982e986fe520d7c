#include "warpwatch/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace warpwatch {

namespace {

struct MeanStd {
  double mean = 0.0;
  double std_dev = 0.0;
};

MeanStd population_stats(const std::vector<double>& v) {
  if (v.empty()) return {};
  double sum = 0.0;
  for (double x : v) sum += x;
  const double mean = sum / static_cast<double>(v.size());
  double sq = 0.0;
  for (double x : v) sq += (x - mean) * (x - mean);
  return {mean, std::sqrt(sq / static_cast<double>(v.size()))};
}

double stable_logistic(double u) {
  if (u >= 0.0) {
    const double e = std::exp(-u);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(u));
}

}  // namespace

namespace detail {

double logistic_sse(double a, double b, const std::vector<LogisticPoint>& pts) {
  double sse = 0.0;
  for (const auto& p : pts) {
    const double e = stable_logistic(a * (p.x - b)) - p.y;
    sse += e * e;
  }
  return sse;
}

void logistic_sse_grad(double a, double b, const std::vector<LogisticPoint>& pts,
                       double* da, double* db) {
  *da = 0.0;
  *db = 0.0;
  for (const auto& p : pts) {
    const double f = stable_logistic(a * (p.x - b));
    const double e = f - p.y;
    const double slope = f * (1.0 - f);
    *da += 2.0 * e * -(p.x - b) * slope;
    *db += 2.0 * e * a * slope;
  }
}

}  // namespace detail

TrackStats track_stats(const SubtitleTrack& track, TimeMs total, CountMode mode,
                       TimeMs gap_merge) {
  const SegmentList segs = segment_timeline(track, total, gap_merge);
  TrackStats st;
  st.total_ms = total;
  st.r = compute_r(segs);
  for (const auto& seg : segs.segments)
    if (seg.kind == SegmentKind::Language) st.language_ms += seg.end - seg.start;
  st.cue_count = static_cast<std::int64_t>(track.cues.size());

  TimeMs display_ms = 0;
  std::vector<double> per_cue_rates;
  per_cue_rates.reserve(track.cues.size());
  for (const auto& cue : track.cues) {
    const std::int64_t n = count_text_units(cue, mode);
    st.text_units += n;
    display_ms += cue.end - cue.start;
    per_cue_rates.push_back(60000.0 * static_cast<double>(n) /
                            static_cast<double>(cue.end - cue.start));
  }
  if (display_ms > 0)
    st.required_rate = 60000.0 * static_cast<double>(st.text_units) /
                       static_cast<double>(display_ms);
  const MeanStd ms = population_stats(per_cue_rates);
  st.per_cue_rate_mean = ms.mean;
  st.per_cue_rate_std = ms.std_dev;
  return st;
}

CorpusStats corpus_stats(const std::vector<TrackStats>& stats) {
  if (stats.empty()) throw Error(ErrorKind::EmptyCorpus, "corpus has no tracks");
  CorpusStats cs;
  cs.n_tracks = static_cast<std::int64_t>(stats.size());
  std::vector<double> rs, rates;
  rs.reserve(stats.size());
  rates.reserve(stats.size());
  for (const auto& st : stats) {
    rs.push_back(st.r);
    rates.push_back(st.required_rate);
    cs.total_cues += st.cue_count;
  }
  const MeanStd r = population_stats(rs);
  const MeanStd rate = population_stats(rates);
  cs.r_mean = r.mean;
  cs.r_std = r.std_dev;
  cs.rate_mean = rate.mean;
  cs.rate_std = rate.std_dev;
  return cs;
}

double fade_extension_factor(const SubtitleTrack& track, TimeMs total) {
  if (track.cues.empty()) throw Error(ErrorKind::EmptyTrack, "no cues to fade");
  double sum = 0.0;
  for (size_t i = 0; i < track.cues.size(); ++i) {
    const auto& cue = track.cues[i];
    const TimeMs next = (i + 1 < track.cues.size()) ? track.cues[i + 1].start : total;
    // Overlaps (or a final cue past total) would push the ratio below 1,
    // which cannot happen on screen: display never ends before the cue does.
    const TimeMs faded_end = std::max(next, cue.end);
    sum += static_cast<double>(faded_end - cue.start) /
           static_cast<double>(cue.end - cue.start);
  }
  return sum / static_cast<double>(track.cues.size());
}

LogisticFit fit_logistic(const std::vector<LogisticPoint>& points) {
  if (points.size() < 3)
    throw Error(ErrorKind::DegenerateData, "need at least 3 points");
  for (const auto& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw Error(ErrorKind::InvalidArgument, "points must be finite");
    if (p.y < 0.0 || p.y > 1.0)
      throw Error(ErrorKind::InvalidArgument, "y values must lie in [0, 1]");
  }

  // Order-independent evaluation: work on a sorted copy.
  std::vector<LogisticPoint> pts = points;
  std::sort(pts.begin(), pts.end(), [](const LogisticPoint& l, const LogisticPoint& r) {
    return l.x != r.x ? l.x < r.x : l.y < r.y;
  });
  bool constant_y = true;
  for (const auto& p : pts) constant_y &= (p.y == pts.front().y);
  if (constant_y)
    throw Error(ErrorKind::DegenerateData, "all y values identical");

  // Start grid: a over both signs and magnitudes, b over x quantiles plus the
  // interpolated 0.5 crossing when one exists.
  std::vector<double> b_starts;
  const size_t n = pts.size();
  for (double q : {0.0, 0.25, 0.5, 0.75, 1.0})
    b_starts.push_back(pts[static_cast<size_t>(q * static_cast<double>(n - 1))].x);
  for (size_t i = 0; i + 1 < n; ++i) {
    const double y0 = pts[i].y - 0.5, y1 = pts[i + 1].y - 0.5;
    if (y0 == 0.0) { b_starts.push_back(pts[i].x); break; }
    if (y0 * y1 < 0.0) {
      b_starts.push_back(pts[i].x + (pts[i + 1].x - pts[i].x) * (-y0) / (y1 - y0));
      break;
    }
  }

  LogisticFit best;
  best.sse = std::numeric_limits<double>::infinity();
  best.converged = false;
  for (double a0 : {0.25, 1.0, 4.0, -0.25, -1.0, -4.0}) {
    for (double b0 : b_starts) {
      double a = a0, b = b0;
      double sse = detail::logistic_sse(a, b, pts);
      double step = 0.1;
      bool converged = false;
      for (int iter = 0; iter < 5000; ++iter) {
        double da, db;
        detail::logistic_sse_grad(a, b, pts, &da, &db);
        const double grad_norm = std::sqrt(da * da + db * db);
        if (grad_norm < 1e-10) { converged = true; break; }
        bool moved = false;
        while (step > 1e-18) {
          const double na = a - step * da;
          const double nb = b - step * db;
          const double nsse = detail::logistic_sse(na, nb, pts);
          if (nsse < sse) {
            const double step_norm = step * grad_norm;
            a = na;
            b = nb;
            sse = nsse;
            step *= 1.3;
            moved = true;
            if (step_norm < 1e-10) converged = true;
            break;
          }
          step *= 0.5;
        }
        if (!moved || converged || sse < 1e-20) {
          converged = converged || !moved || sse < 1e-20;
          break;
        }
      }
      if (sse < best.sse) {
        best.a = a;
        best.b = b;
        best.sse = sse;
        best.converged = converged;
      }
    }
  }
  return best;
}

}  // namespace warpwatch
