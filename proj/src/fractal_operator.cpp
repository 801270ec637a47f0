#include "posifract/fractal_operator.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <sstream>

namespace posifract {

FractalOperator::FractalOperator(ContractionFamily family, ScalingFamily scaling,
                                 SemiLinearOperator op, double tol, std::size_t max_iter)
    : family_(std::move(family)),
      scaling_(std::move(scaling)),
      op_(std::move(op)),
      tol_(tol),
      max_iter_(max_iter) {
  if (scaling_.size() != family_.size()) {
    throw DimensionError("a fractal operator needs one scaling function per map");
  }
}

RBSpec FractalOperator::spec_for(const SampledFunction& f) const {
  return RBSpec(family_, scaling_, CForm{f, op_});
}

FixedPointResult fractal_map(const FractalOperator& fop, const SampledFunction& f) {
  return fixed_point(fop.spec_for(f), f, fop.tolerance(), fop.max_iterations());
}

std::vector<NamedFunction> default_sample_set(Interval domain, std::size_t grid,
                                              std::uint64_t seed, std::size_t random_count) {
  validate_interval(domain);
  std::vector<NamedFunction> out;
  for (double c : {1.0, 2.5}) {
    std::ostringstream name;
    name << "constant_" << c;
    out.push_back({name.str(), SampledFunction::constant(domain, grid, c)});
  }
  const auto unit = [domain](double x) { return (x - domain.lo) / domain.width(); };
  for (int k = 0; k <= 4; ++k) {
    out.push_back({"t^" + std::to_string(k) + "+1",
                   SampledFunction::from_function(
                       domain, grid, [&](double x) { return std::pow(unit(x), k) + 1.0; })});
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> value(1.0, 2.0);
  std::uniform_int_distribution<int> pieces(2, 8);
  for (std::size_t r = 0; r < random_count; ++r) {
    const int m = pieces(rng);
    std::vector<double> nodes(static_cast<std::size_t>(m) + 1);
    for (auto& v : nodes) v = value(rng);
    out.push_back({"random_pl_" + std::to_string(r),
                   SampledFunction::from_function(domain, grid, [&](double x) {
                     const double t = std::clamp(unit(x), 0.0, 1.0) * m;
                     const auto k = std::min(static_cast<int>(t), m - 1);
                     const double fr = t - k;
                     return (1.0 - fr) * nodes[k] + fr * nodes[k + 1];
                   })});
  }
  return out;
}

NormEstimate operator_norm_estimate(const GridOperator& op,
                                    const std::vector<NamedFunction>& samples, Exponent norm) {
  if (samples.empty()) throw DomainError("operator norm estimate needs at least one sample");
  NormEstimate result;
  for (const auto& s : samples) {
    const double denom = norm_from_zero(s.f, norm);
    if (!(denom > 0.0)) {
      throw DomainError("sample '" + s.name + "' is the zero function");
    }
    std::vector<double> image;
    try {
      image = op(s.f);
    } catch (const ValidationError& e) {
      result.skipped.push_back(s.name + ": " + e.what());
      continue;
    } catch (const PositivityError& e) {
      result.skipped.push_back(s.name + ": " + e.what());
      continue;
    }
    const double ratio = lp_abs(image, s.f.domain(), norm) / denom;
    if (result.used == 0 || ratio > result.estimate) {
      result.estimate = ratio;
      result.argmax = s.name;
    }
    ++result.used;
  }
  return result;
}

NormEstimate operator_norm_estimate(const SemiLinearOperator& op,
                                    const std::vector<NamedFunction>& samples, Exponent norm) {
  return operator_norm_estimate(
      [&op](const SampledFunction& f) {
        const SampledFunction g = apply_L(op, f);
        return std::vector<double>(g.samples().begin(), g.samples().end());
      },
      samples, norm);
}

NormEstimate operator_norm_estimate(const FractalOperator& fop,
                                    const std::vector<NamedFunction>& samples, Exponent norm) {
  return operator_norm_estimate(
      [&fop](const SampledFunction& f) {
        const SampledFunction g = fractal_map(fop, f).fstar;
        return std::vector<double>(g.samples().begin(), g.samples().end());
      },
      samples, norm);
}

NormEstimate identity_minus_L_norm_estimate(const SemiLinearOperator& op,
                                            const std::vector<NamedFunction>& samples,
                                            Exponent norm) {
  return operator_norm_estimate(
      [&op](const SampledFunction& f) { return apply_identity_minus_L(op, f); }, samples, norm);
}

bool SandwichReport::passed() const noexcept {
  return lower_ok && upper_ok &&
         std::all_of(per_function.begin(), per_function.end(),
                     [](const DisplacementCheck& c) { return c.ok; });
}

SandwichReport norm_sandwich_check(const FractalOperator& fop,
                                   const std::vector<NamedFunction>& samples, Exponent norm) {
  SandwichReport report;
  report.s_infinity = fop.s_infinity();
  if (!(report.s_infinity < 1.0)) {
    std::ostringstream msg;
    msg << "S_inf = " << report.s_infinity << " is not below 1";
    throw NotContractiveError(msg.str(), report.s_infinity);
  }
  const double ratio = report.s_infinity / (1.0 - report.s_infinity);
  report.identity_minus_L = identity_minus_L_norm_estimate(fop.op(), samples, norm).estimate;
  report.upper_bound = 1.0 + ratio * report.identity_minus_L;

  bool any = false;
  for (const auto& s : samples) {
    std::optional<FixedPointResult> r;
    try {
      r = fractal_map(fop, s.f);
    } catch (const ValidationError& e) {
      report.skipped.push_back(s.name + ": " + e.what());
      continue;
    } catch (const PositivityError& e) {
      report.skipped.push_back(s.name + ": " + e.what());
      continue;
    }

    const double fnorm = norm_from_zero(s.f, norm);
    const double image_ratio = norm_from_zero(r->fstar, norm) / fnorm;
    if (!any || image_ratio > report.estimate) {
      report.estimate = image_ratio;
      report.argmax = s.name;
    }
    any = true;

    DisplacementCheck check;
    check.name = s.name;
    check.lhs = lp_abs(signed_difference(r->fstar, s.f), s.f.domain(), norm);
    check.rhs = ratio * report.identity_minus_L * fnorm + 10.0 * fop.tolerance();
    check.ok = check.lhs <= check.rhs;
    report.per_function.push_back(std::move(check));
  }
  if (!any) throw DomainError("no sample germ is admissible for this fractal operator");

  report.lower_ok = report.estimate >= 1.0 - kSandwichLowerSlack;
  report.upper_ok = report.estimate <= report.upper_bound + kSandwichUpperSlack;
  return report;
}

}  // namespace posifract
