#include "posifract/semilinear_operator.hpp"

namespace posifract {

SemiLinearOperator SemiLinearOperator::identity() { return SemiLinearOperator(Kind::identity); }

SemiLinearOperator SemiLinearOperator::endpoint_affine() {
  return SemiLinearOperator(Kind::endpoint_affine);
}

SemiLinearOperator SemiLinearOperator::multiplier(SampledFunction v) {
  return SemiLinearOperator(Kind::multiplier, std::move(v));
}

const char* to_string(SemiLinearOperator::Kind kind) noexcept {
  switch (kind) {
    case SemiLinearOperator::Kind::identity: return "identity";
    case SemiLinearOperator::Kind::endpoint_affine: return "endpoint_affine";
    case SemiLinearOperator::Kind::multiplier: return "multiplier";
  }
  return "unknown";
}

SampledFunction apply_L(const SemiLinearOperator& op, const SampledFunction& f) {
  switch (op.kind()) {
    case SemiLinearOperator::Kind::identity:
      return f;
    case SemiLinearOperator::Kind::endpoint_affine: {
      const std::size_t n = f.size();
      const double left = f[0];
      const double right = f[n - 1];
      std::vector<double> out(n);
      out[0] = left;
      out[n - 1] = right;
      // Convex combination of the endpoint values keeps the line nonnegative.
      for (std::size_t k = 1; k + 1 < n; ++k) {
        const double t = static_cast<double>(k) / static_cast<double>(n - 1);
        out[k] = (1.0 - t) * left + t * right;
      }
      return SampledFunction(f.domain(), std::move(out), f.continuity());
    }
    case SemiLinearOperator::Kind::multiplier: {
      const SampledFunction& v = *op.multiplier_function();
      require_same_grid(v, f);
      std::vector<double> out(f.size());
      for (std::size_t k = 0; k < f.size(); ++k) out[k] = v[k] * f[k];
      return SampledFunction(f.domain(), std::move(out), f.continuity());
    }
  }
  return f;
}

std::vector<double> apply_identity_minus_L(const SemiLinearOperator& op,
                                           const SampledFunction& f) {
  return signed_difference(f, apply_L(op, f));
}

}  // namespace posifract
