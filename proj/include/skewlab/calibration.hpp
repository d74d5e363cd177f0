#pragma once

#include "skewlab/cocycle.hpp"
#include "skewlab/diophantine.hpp"

namespace skewlab::calibration {

// Fixed pair used by the decay checks: alpha = [0; 3, 7, 31, 400, 10^18, ...]
// with four Liouville quotients a_{k+1} = q_k^2 + 1 appended, and a cocycle
// with modes on q_1, 2 q_1, q_2, 2 q_2, q_3.
constexpr double kDecayRate = 0.05;
constexpr int kLiouvilleTail = 4;
constexpr double kOrbitX = 0.1;
constexpr double kOrbitY = 0.0;
// Scales where the coefficient bounds hold and the error is still resolved.
constexpr long kPhaseScaleLo = 3;
constexpr long kPhaseScaleHi = 6;

ContinuedFraction designated_alpha();
AnalyticCocycle designated_cocycle();
// designated_cocycle() reduced against designated_alpha() at depth - 1.
ReducedCocycle designated_reduced();

// max value / (sqrt(r q) d(q) log q) for the character progression statistic;
// the oracle run peaked at 0.1554.
constexpr double kProgressionCharConstant = 0.25;
constexpr double kProgressionCharFloor = 1e-3;

// |count - H phi(q')/q'| <= max(kWindowAbsTol, kWindowRelTol H phi(q')/q')
constexpr double kWindowAbsTol = 50.0;
constexpr double kWindowRelTol = 0.02;

// alpha = [0; 1, 1, 3, 1, 3, 4, 2, 1, ...] for the stage construction, with
// a_39 = a_1447 = 2 as well so that q_{k+1} >= 2 q_k after every stage index.
// The schedule k = 2, 6, 38 stays below the feasibility cap (q_38 = 900981121)
// and k = 1446 bounds the tail.
constexpr long kStageDepth = 1500;
ContinuedFraction counterexample_alpha();

}  // namespace skewlab::calibration
