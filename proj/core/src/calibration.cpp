#include "lotto/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lotto/errors.hpp"

namespace lotto {

namespace {

void RequireSameLength(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::kDimensionMismatch, std::string(what) + ": lengths " + std::to_string(a.size()) +
                                                   " and " + std::to_string(b.size()) + " differ");
  }
}

}  // namespace

ProbVector softmax(std::span<const double> logits) {
  if (logits.empty()) throw Error(ErrorCode::kEmptyInput, "softmax of an empty logit vector");
  for (double v : logits) {
    if (!std::isfinite(v)) throw Error(ErrorCode::kNonFiniteLogit, "logit is not finite");
  }
  const double peak = *std::max_element(logits.begin(), logits.end());
  ProbVector out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - peak);
    total += out[i];
  }
  for (double& v : out) v /= total;
  return out;
}

ProbVector calibrate(std::span<const double> o, std::span<const double> q, PriorFloor floor) {
  RequireSameLength(o, q, "calibrate");
  ProbVector out(o.size());
  double total = 0.0;
  for (std::size_t i = 0; i < o.size(); ++i) {
    double prior = q[i];
    if (floor == PriorFloor::kEnabled) {
      prior = std::max(prior, kPriorFloor);
    } else if (!(prior >= kPriorFloor)) {
      throw Error(ErrorCode::kDegeneratePrior, "prior component " + std::to_string(i) + " is below 1e-12");
    }
    out[i] = o[i] / prior;
    total += out[i];
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw Error(ErrorCode::kDegeneratePrior, "calibrated scores cannot be normalized");
  }
  for (double& v : out) v /= total;
  return out;
}

std::size_t predict(std::span<const double> p) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (p[i] > p[best]) best = i;
  }
  return best;
}

double entropy(std::span<const double> p) {
  double h = 0.0;
  for (double v : p) {
    if (v > 0.0) h -= v * std::log(v);
  }
  return h;
}

double mutual_information(std::span<const double> q, std::span<const double> p) {
  RequireSameLength(q, p, "mutual_information");
  return entropy(q) - entropy(p);
}

}  // namespace lotto
