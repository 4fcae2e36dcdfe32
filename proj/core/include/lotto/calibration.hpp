#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lotto {

using ProbVector = std::vector<double>;

/// Floor applied to prior components before dividing by them.
inline constexpr double kPriorFloor = 1e-12;

enum class PriorFloor { kEnabled, kDisabled };

/// Label-word distributions for one (instance, template) pair: the raw class
/// scores, the template's empty-input prior, and the calibrated result.
struct CalibratedDistribution {
  ProbVector o;
  ProbVector q;
  ProbVector p;
};

/// Numerically stable softmax. Throws kNonFiniteLogit, kEmptyInput.
ProbVector softmax(std::span<const double> logits);

/// Normalize(o / q). Throws kDimensionMismatch; kDegeneratePrior when flooring
/// is disabled and some q component is below kPriorFloor.
ProbVector calibrate(std::span<const double> o, std::span<const double> q,
                     PriorFloor floor = PriorFloor::kEnabled);

/// Index of the largest component; ties go to the lowest index.
std::size_t predict(std::span<const double> p);

/// Shannon entropy in nats with 0 ln 0 = 0.
double entropy(std::span<const double> p);

/// H(q) - H(p): the entropy reduction the instance brings over the empty prompt.
double mutual_information(std::span<const double> q, std::span<const double> p);

}  // namespace lotto
