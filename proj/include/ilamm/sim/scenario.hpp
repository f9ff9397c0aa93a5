#pragma once

#include "ilamm/core.hpp"

#include <cstdint>
#include <vector>

namespace ilamm::sim {

enum class Model { Linear, Logistic, HuberT3 };
enum class DesignKind { Independent, Constant, Ar1 };

std::string to_string(Model model);
Model model_from_string(const std::string& name);

struct Design {
  DesignKind kind = DesignKind::Independent;
  double rho = 0.0;

  static Design independent() { return {}; }
  static Design constant(double rho) { return {DesignKind::Constant, rho}; }
  static Design ar1(double rho) { return {DesignKind::Ar1, rho}; }
};

struct Scenario {
  Model model = Model::Linear;
  Index n = 100;
  Index d = 1000;
  Vector beta_star;
  Design design;
  double sigma = 1.0;
  int replicates = 100;
  std::uint64_t base_seed = 20160101;
  /// Huber cutoff used for HuberT3 instances; unset means base_rate(n, d).
  std::optional<double> huber_alpha;

  void validate() const;
};

/// (5, 3, 0, 0, -2, 0, ..., 0) padded to length d.
Vector default_beta_star(Index d);

/// Lower-triangular A with A A^T equal to the design's correlation matrix.
Matrix covariance_factor(const Design& design, Index d);

/// splitmix64 finalizer applied to base_seed + (index + 1) * 0x9E3779B97F4A7C15.
std::uint64_t replicate_seed(std::uint64_t base_seed, std::uint64_t index);

struct GeneratedData {
  ProblemInstance instance;
  Coefficients truth;
  std::vector<Index> support;
};

/// Draws one replicate (deterministic in base_seed and index), then
/// normalizes the columns of X. Logistic labels are +-1.
GeneratedData generate(const Scenario& scenario, std::uint64_t replicate_index);

}  // namespace ilamm::sim
