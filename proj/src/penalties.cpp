#include "ilamm/penalties.hpp"

#include <algorithm>
#include <cmath>

namespace ilamm {

bool is_tightening_family(PenaltyFamily family) {
  return family != PenaltyFamily::AdaptiveRecip;
}

double weight(const PenaltySpec& spec, double t) {
  if (!(t >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "weight argument must be >= 0");
  }
  const double lam = spec.lambda;
  const double a = spec.a;
  switch (spec.family) {
    case PenaltyFamily::Lasso:
      return 1.0;
    case PenaltyFamily::Scad:
      if (t <= lam) return 1.0;
      return std::max(a * lam - t, 0.0) / ((a - 1.0) * lam);
    case PenaltyFamily::Mcp:
      return std::max(1.0 - t / (a * lam), 0.0);
    case PenaltyFamily::CappedL1:
      return t < a * lam ? 1.0 : 0.0;
    case PenaltyFamily::AdaptiveRecip:
      break;
  }
  throw Error(ErrorCode::InvalidArgument,
              "reciprocal weights are only available through adaptive_weights");
}

WeightVector adaptive_weights(const PenaltySpec& spec,
                              const Coefficients& previous) {
  const Vector& b = previous.values();
  WeightVector out(b.size());
  if (spec.family == PenaltyFamily::AdaptiveRecip) {
    for (Index j = 0; j < b.size(); ++j) {
      out[j] = b[j] == 0.0 ? kFrozen : spec.lambda / std::abs(b[j]);
    }
    return out;
  }
  for (Index j = 0; j < b.size(); ++j) {
    out[j] = spec.lambda * weight(spec, std::abs(b[j]));
  }
  return out;
}

double penalty_scalar(const PenaltySpec& spec, double t) {
  t = std::abs(t);
  const double lam = spec.lambda;
  const double a = spec.a;
  switch (spec.family) {
    case PenaltyFamily::Lasso:
      return lam * t;
    case PenaltyFamily::Scad:
      if (t <= lam) return lam * t;
      if (t <= a * lam) {
        return (2.0 * a * lam * t - t * t - lam * lam) / (2.0 * (a - 1.0));
      }
      return (a + 1.0) * lam * lam / 2.0;
    case PenaltyFamily::Mcp:
      if (t <= a * lam) return lam * t - t * t / (2.0 * a);
      return a * lam * lam / 2.0;
    case PenaltyFamily::CappedL1:
      return lam * std::min(t, a * lam);
    case PenaltyFamily::AdaptiveRecip:
      break;
  }
  throw Error(ErrorCode::InvalidArgument,
              "the reciprocal weight family has no finite penalty");
}

double penalty_value(const PenaltySpec& spec, const Coefficients& beta) {
  if (!is_tightening_family(spec.family)) {
    throw Error(ErrorCode::InvalidArgument,
                "the reciprocal weight family has no finite penalty");
  }
  double total = 0.0;
  for (Index j = 0; j < beta.size(); ++j) {
    total += penalty_scalar(spec, beta[j]);
  }
  return total;
}

}  // namespace ilamm
