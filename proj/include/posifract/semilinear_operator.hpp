#pragma once

#include <optional>
#include <vector>

#include "posifract/semi_spaces.hpp"

namespace posifract {

/// Bounded semi-linear operator L on C^+I (and, through the same pointwise
/// formulas, on L_p^+I). Three kinds are provided:
///   identity         Lf = f
///   endpoint_affine  Lf = the line through (x0, f(x0)) and (xn, f(xn))
///   multiplier       Lf = v * f for a fixed v >= 0
class SemiLinearOperator {
 public:
  enum class Kind { identity, endpoint_affine, multiplier };

  static SemiLinearOperator identity();
  static SemiLinearOperator endpoint_affine();
  static SemiLinearOperator multiplier(SampledFunction v);

  Kind kind() const noexcept { return kind_; }
  const SampledFunction* multiplier_function() const noexcept {
    return multiplier_ ? &*multiplier_ : nullptr;
  }

 private:
  explicit SemiLinearOperator(Kind kind, std::optional<SampledFunction> v = std::nullopt)
      : kind_(kind), multiplier_(std::move(v)) {}

  Kind kind_;
  std::optional<SampledFunction> multiplier_;
};

const char* to_string(SemiLinearOperator::Kind kind) noexcept;

SampledFunction apply_L(const SemiLinearOperator& op, const SampledFunction& f);

/// (I - L) f on the grid. The result may be signed even for f >= 0.
std::vector<double> apply_identity_minus_L(const SemiLinearOperator& op,
                                           const SampledFunction& f);

}  // namespace posifract
