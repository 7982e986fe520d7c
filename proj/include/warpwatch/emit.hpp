#pragma once

#include <string>
#include <vector>

#include "warpwatch/planner.hpp"

namespace warpwatch {

enum class ScriptProfile { Generic, FilterGraph };

/// Deterministic EDL JSON: fixed key order, speeds at 6 decimal digits,
/// schema version 1. Equal plans produce identical bytes.
std::string emit_edl(const WarpPlan& plan);

/// Rebuild a plan from EDL JSON. Out boundaries are recomputed with the
/// same cumulative rounding as build_warp_plan; they reproduce the original
/// exactly when the plan's speeds are representable at 6 decimal digits.
WarpPlan read_edl(std::string_view json_text);

/// Factor a speed multiplier into pitch-preserving tempo stages, each in
/// [0.5, 2.0], using the minimal stage count and equal stages (k-th root).
/// Product matches factor within 1e-9 relative.
std::vector<double> decompose_tempo(double factor);

/// Serialize the plan as an encoder script.
/// Generic: `warpplan v1 <l_in> <l_out>` then one
/// `seg <i> <in_start_ms> <in_end_ms> speed <p>/<q>` line per segment,
/// speeds as exact rationals.
/// FilterGraph: a filter_complex graph; per segment a video trim +
/// timestamp rescale chain and an audio trim + atempo chain (stages from
/// decompose_tempo), concatenated. Grammar documented in the README.
std::string emit_filter_script(const WarpPlan& plan, ScriptProfile profile);

namespace detail {
/// Smallest-denominator rational whose double quotient equals value exactly.
std::pair<std::int64_t, std::int64_t> to_rational(double value);
}  // namespace detail

}  // namespace warpwatch
