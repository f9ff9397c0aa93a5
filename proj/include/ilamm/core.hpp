#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilamm {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
  InvalidArgument,
  DimensionMismatch,
  NotConverged,
  Numerical,
  Io,
  Parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

enum class LossKind { Squared, Logistic, Huber };

/// Loss selector. `huber_alpha` is the Huber cutoff parameter; residuals
/// with |r| <= 1/alpha fall in the quadratic branch.
struct Loss {
  LossKind kind = LossKind::Squared;
  double huber_alpha = 0.0;

  static Loss squared() { return {LossKind::Squared, 0.0}; }
  static Loss logistic() { return {LossKind::Logistic, 0.0}; }
  static Loss huber(double alpha);

  bool operator==(const Loss&) const = default;
};

std::string to_string(LossKind kind);

/// Design matrix, responses and loss. Immutable once built; the constructor
/// checks shapes, finiteness and (for logistic loss) that labels are +-1.
class ProblemInstance {
 public:
  ProblemInstance(Matrix x, Vector y, Loss loss);

  Index n() const { return x_.rows(); }
  Index d() const { return x_.cols(); }
  const Matrix& x() const { return x_; }
  const Vector& y() const { return y_; }
  const Loss& loss() const { return loss_; }

  /// Multiplier applied to each column by normalize_columns (1 when the
  /// instance was never normalized).
  const Vector& column_scales() const { return column_scales_; }
  bool normalized() const { return normalized_; }

  ProblemInstance with_loss(Loss loss) const;
  /// Row subset, keeping loss and column scales. Used for CV folds.
  ProblemInstance rows(std::span<const Index> idx) const;

 private:
  friend ProblemInstance normalize_columns(const ProblemInstance& instance);

  Matrix x_;
  Vector y_;
  Loss loss_;
  Vector column_scales_;
  bool normalized_ = false;
};

/// Rescales every nonzero column to Euclidean norm sqrt(n). All-zero columns
/// keep scale 1. Scales compose if the instance was normalized before.
ProblemInstance normalize_columns(const ProblemInstance& instance);

/// Dense coefficient vector. The support is the set of exactly nonzero
/// entries and is computed once at construction.
class Coefficients {
 public:
  Coefficients() = default;
  explicit Coefficients(Vector values);
  static Coefficients zeros(Index d) { return Coefficients(Vector::Zero(d)); }

  const Vector& values() const { return values_; }
  Index size() const { return values_.size(); }
  double operator[](Index j) const { return values_[j]; }
  const std::vector<Index>& support() const { return support_; }

 private:
  Vector values_;
  std::vector<Index> support_;
};

std::vector<Index> support_of(const Vector& v);

/// Maps coefficients fitted on a normalized instance back to the original
/// column scale, so that X_original * result == X_normalized * beta.
Coefficients denormalize(const ProblemInstance& instance,
                         const Coefficients& beta);

enum class PenaltyFamily { Lasso, Scad, Mcp, CappedL1, AdaptiveRecip };

std::string to_string(PenaltyFamily family);
PenaltyFamily penalty_family_from_string(const std::string& name);

/// Default concavity parameter: SCAD 3.7, MCP 3, capped-l1 3.
double default_concavity(PenaltyFamily family);

struct PenaltySpec {
  PenaltyFamily family = PenaltyFamily::Lasso;
  double lambda = 1.0;
  double a = 0.0;

  /// Validated constructor; an empty `a` selects the family default.
  static PenaltySpec make(PenaltyFamily family, double lambda,
                          std::optional<double> a = std::nullopt);
  void validate() const;
};

/// Knobs of the LAMM / I-LAMM loops. Unset tolerances resolve against the
/// instance: eps_c = base_rate(n, d), eps_t = min(sqrt(1/n), eps_c).
struct SolverConfig {
  double lambda = 1.0;
  double phi0 = 1e-6;
  double gamma_u = 2.0;
  std::optional<double> eps_c;
  std::optional<double> eps_t;
  int t_max = 15;
  int k_max = 10000;
  int max_inflations = 200;
  std::optional<Vector> initial_beta;

  double resolved_eps_c(Index n, Index d) const;
  double resolved_eps_t(Index n, Index d) const;
  void validate(Index n, Index d) const;
};

/// sqrt(log d / n), with log d floored at 1 so that d <= 2 stays positive.
/// Scales the lambda grid and the default contraction tolerance.
double base_rate(Index n, Index d);

struct TraceRecord {
  int k = 0;
  double phi = 0.0;
  double objective = 0.0;
  double omega = 0.0;
  double step_norm = 0.0;
  int inflations = 0;
};

struct StageTrace {
  int stage = 0;
  std::vector<TraceRecord> records;
};

struct SolveResult {
  std::vector<Coefficients> per_stage_estimates;
  Coefficients final;
  std::vector<StageTrace> traces;
  int total_lamm_iterations = 0;
  int stages_run = 0;
  Vector final_weights;
  // Weight vector, tolerance and terminal omega for every stage run.
  std::vector<Vector> stage_weights;
  std::vector<double> stage_tolerances;
  std::vector<double> stage_omegas;
  double final_phi = 0.0;
  bool converged = true;
};

}  // namespace ilamm
