#include "ilamm/losses.hpp"

#include <cmath>
#include <limits>

namespace ilamm {

namespace {

// Beyond this margin exp(-|m|) is below double epsilon relative to 1, and
// the asymptotic forms are exact to machine precision.
constexpr double kLogisticSwitch = 35.0;

// For margin changes below this the fourth-order Taylor series of the
// logistic divergence is exact to rounding.
constexpr double kLogisticSeries = 1e-3;

constexpr double kEps = std::numeric_limits<double>::epsilon();

void check_dimension(const ProblemInstance& instance, const Coefficients& beta) {
  if (beta.size() != instance.d()) {
    throw Error(ErrorCode::DimensionMismatch,
                "coefficient length " + std::to_string(beta.size()) +
                    " does not match dimension " +
                    std::to_string(instance.d()));
  }
}

void check_kind(const ProblemInstance& instance, LossKind expected) {
  if (instance.loss().kind != expected) {
    throw Error(ErrorCode::InvalidArgument,
                "instance loss is " + to_string(instance.loss().kind) +
                    ", expected " + to_string(expected));
  }
}

LossEval eval_at(const ProblemInstance& instance, const Coefficients& beta) {
  const Vector eta = linear_predictor(instance, beta.values());
  return {loss_value_at(instance, eta), loss_gradient_at(instance, eta)};
}

}  // namespace

double logistic_sample_loss(double margin) {
  if (margin > kLogisticSwitch) return std::exp(-margin);
  if (margin < -kLogisticSwitch) return -margin + std::exp(margin);
  return std::log1p(std::exp(-margin));
}

double logistic_sample_weight(double margin) {
  return 1.0 / (1.0 + std::exp(margin));
}

double huber_sample_loss(double residual, double alpha) {
  const double knot = 1.0 / alpha;
  const double a = std::abs(residual);
  if (a <= knot) return residual * residual;
  return 2.0 * a / alpha - 1.0 / (alpha * alpha);
}

double huber_sample_derivative(double residual, double alpha) {
  const double knot = 1.0 / alpha;
  if (std::abs(residual) <= knot) return 2.0 * residual;
  return residual > 0.0 ? 2.0 / alpha : -2.0 / alpha;
}

Vector linear_predictor(const ProblemInstance& instance, const Vector& beta) {
  Vector eta = Vector::Zero(instance.n());
  for (Index j = 0; j < beta.size(); ++j) {
    if (beta[j] != 0.0) eta.noalias() += beta[j] * instance.x().col(j);
  }
  return eta;
}

double loss_value_at(const ProblemInstance& instance, const Vector& eta) {
  const Vector& y = instance.y();
  const double n = static_cast<double>(instance.n());
  double total = 0.0;
  switch (instance.loss().kind) {
    case LossKind::Squared:
      return (y - eta).squaredNorm() / (2.0 * n);
    case LossKind::Logistic:
      for (Index i = 0; i < eta.size(); ++i) {
        total += logistic_sample_loss(y[i] * eta[i]);
      }
      return total / n;
    case LossKind::Huber: {
      const double alpha = instance.loss().huber_alpha;
      for (Index i = 0; i < eta.size(); ++i) {
        total += huber_sample_loss(y[i] - eta[i], alpha);
      }
      return total / n;
    }
  }
  return total;
}

Vector loss_gradient_at(const ProblemInstance& instance, const Vector& eta) {
  const Vector& y = instance.y();
  const double n = static_cast<double>(instance.n());
  // dL/deta_i, then chain through X^T.
  Vector w(eta.size());
  switch (instance.loss().kind) {
    case LossKind::Squared:
      w = eta - y;
      break;
    case LossKind::Logistic:
      for (Index i = 0; i < eta.size(); ++i) {
        w[i] = -y[i] * logistic_sample_weight(y[i] * eta[i]);
      }
      break;
    case LossKind::Huber: {
      const double alpha = instance.loss().huber_alpha;
      for (Index i = 0; i < eta.size(); ++i) {
        w[i] = -huber_sample_derivative(y[i] - eta[i], alpha);
      }
      break;
    }
  }
  return instance.x().transpose() * w / n;
}

Divergence loss_divergence(const ProblemInstance& instance,
                           const Vector& eta_new, const Vector& eta_old) {
  if (eta_new.size() != instance.n() || eta_old.size() != instance.n()) {
    throw Error(ErrorCode::DimensionMismatch,
                "predictor length does not match sample count");
  }
  const Vector& y = instance.y();
  const double n = static_cast<double>(instance.n());
  Divergence div;
  switch (instance.loss().kind) {
    case LossKind::Squared:
      div.value = 0.5 * (eta_new - eta_old).squaredNorm() / n;
      div.error_bound = 4.0 * kEps * div.value;
      return div;
    case LossKind::Logistic:
      for (Index i = 0; i < eta_new.size(); ++i) {
        const double c = y[i] * eta_old[i];
        const double delta = y[i] * (eta_new[i] - eta_old[i]);
        const double w = logistic_sample_weight(c);
        if (std::abs(delta) <= kLogisticSeries) {
          const double p = 1.0 - w;
          const double v = w * p;
          const double d2 = delta * delta;
          const double c3 = v * (1.0 - 2.0 * p) / 6.0;
          const double c4 = v * (1.0 - 6.0 * p + 6.0 * p * p) / 24.0;
          div.value += d2 * (v / 2.0 + delta * (c3 + delta * c4));
          div.error_bound += 4.0 * kEps * d2 * v;
        } else {
          const double la = logistic_sample_loss(c + delta);
          const double lc = logistic_sample_loss(c);
          div.value += la - lc + w * delta;
          div.error_bound += 4.0 * kEps * (la + lc + std::abs(w * delta));
        }
      }
      break;
    case LossKind::Huber: {
      const double alpha = instance.loss().huber_alpha;
      const double knot = 1.0 / alpha;
      for (Index i = 0; i < eta_new.size(); ++i) {
        const double r_old = y[i] - eta_old[i];
        const double r_new = y[i] - eta_new[i];
        const bool in_old = std::abs(r_old) <= knot;
        const bool in_new = std::abs(r_new) <= knot;
        if (in_old && in_new) {
          const double dr = r_new - r_old;
          div.value += dr * dr;
          div.error_bound += 4.0 * kEps * dr * dr;
        } else if (!in_old && !in_new && (r_old > 0.0) == (r_new > 0.0)) {
          // Same linear branch: the divergence vanishes.
        } else {
          const double ln = huber_sample_loss(r_new, alpha);
          const double lo = huber_sample_loss(r_old, alpha);
          const double lin = huber_sample_derivative(r_old, alpha) * (r_new - r_old);
          div.value += ln - lo - lin;
          div.error_bound += 4.0 * kEps * (ln + lo + std::abs(lin));
        }
      }
      break;
    }
  }
  div.value /= n;
  div.error_bound /= n;
  return div;
}

LossEval squared_eval(const ProblemInstance& instance, const Coefficients& beta) {
  check_kind(instance, LossKind::Squared);
  check_dimension(instance, beta);
  return eval_at(instance, beta);
}

LossEval logistic_eval(const ProblemInstance& instance,
                       const Coefficients& beta) {
  check_kind(instance, LossKind::Logistic);
  check_dimension(instance, beta);
  return eval_at(instance, beta);
}

LossEval huber_eval(const ProblemInstance& instance, const Coefficients& beta) {
  check_kind(instance, LossKind::Huber);
  check_dimension(instance, beta);
  return eval_at(instance, beta);
}

LossEval evaluate_loss(const ProblemInstance& instance,
                       const Coefficients& beta) {
  check_dimension(instance, beta);
  return eval_at(instance, beta);
}

double loss_value(const ProblemInstance& instance, const Coefficients& beta) {
  check_dimension(instance, beta);
  return loss_value_at(instance, linear_predictor(instance, beta.values()));
}

}  // namespace ilamm
