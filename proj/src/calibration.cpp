#include "skewlab/calibration.hpp"

namespace skewlab::calibration {

ContinuedFraction designated_alpha() {
  std::vector<BigInt> qs = {3, 7, 31, 400, BigInt("1000000000000000000")};
  auto head = cf_from_quotients(qs, (long)qs.size(), kDefaultPrecision);
  BigInt q = head.q(head.depth()), prev = head.q(head.depth() - 1);
  for (int k = 0; k < kLiouvilleTail; ++k) {
    BigInt a = q * q + 1;
    qs.push_back(a);
    BigInt next = a * q + prev;
    prev = q;
    q = next;
  }
  return cf_from_quotients(qs, (long)qs.size(), kDefaultPrecision);
}

AnalyticCocycle designated_cocycle() {
  return AnalyticCocycle({{3, {0.3, 0.0}},
                          {6, {0.0, 0.1}},
                          {22, {0.0, 0.2}},
                          {44, {0.05, 0.0}},
                          {685, {1e-16, 0.0}}},
                         kDecayRate);
}

ReducedCocycle designated_reduced() {
  auto cf = designated_alpha();
  return reduce(designated_cocycle(), cf, AnalysisParams::make(kDecayRate), cf.depth() - 1);
}

ContinuedFraction counterexample_alpha() {
  std::vector<long> qs = {1, 1, 3, 1, 3, 4};
  qs.resize(kStageDepth, 1);
  for (long k : {6, 38, 1446}) qs[k] = 2;  // a_{k+1} after each stage index
  return cf_from_quotients(qs, kStageDepth, kDefaultPrecision);
}

}  // namespace skewlab::calibration
