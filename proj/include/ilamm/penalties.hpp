#pragma once

#include "ilamm/core.hpp"

#include <limits>

namespace ilamm {

/// Per-coordinate l1 weights lambda_j. An entry of +infinity marks a
/// coordinate frozen at zero (reciprocal adaptive-Lasso weights only).
using WeightVector = Vector;

inline constexpr double kFrozen = std::numeric_limits<double>::infinity();

inline bool is_frozen(double weight) { return weight == kFrozen; }

/// True for the non-increasing [0, 1]-valued weight families (LASSO, SCAD,
/// MCP, capped-l1).
bool is_tightening_family(PenaltyFamily family);

/// w(t) = p'_lambda(t) / lambda for t >= 0, with w(0) = 1.
///   LASSO  1
///   SCAD   1 for t <= lambda, (a lambda - t)_+ / ((a - 1) lambda) beyond
///   MCP    (1 - t / (a lambda))_+
///   capped 1 for t < a lambda, 0 from a lambda on
/// Throws for negative t and for the reciprocal family.
double weight(const PenaltySpec& spec, double t);

/// lambda_j = lambda * w(|beta_j|); for the reciprocal family
/// lambda_j = lambda / |beta_j|, frozen where beta_j == 0.
WeightVector adaptive_weights(const PenaltySpec& spec,
                              const Coefficients& previous);

/// p_lambda(t) for t >= 0, the primitive of lambda * w with p_lambda(0) = 0.
double penalty_scalar(const PenaltySpec& spec, double t);

/// sum_j p_lambda(|beta_j|). Reporting only; throws for the reciprocal family.
double penalty_value(const PenaltySpec& spec, const Coefficients& beta);

}  // namespace ilamm
