#include "posifract/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace posifract {

namespace {

double function_distance(const SampledFunction& f, const SampledFunction& g, Exponent p) {
  return p.is_infinite() ? sup_metric(f, g) : lp_metric(f, g, p);
}

void check_shape(const ContractionFamily& family, const ParameterSet& set, const char* what) {
  if (set.offsets.size() != family.size() || set.scaling.size() != family.size()) {
    std::ostringstream msg;
    msg << what << " has " << set.offsets.size() << " offsets and " << set.scaling.size()
        << " scalings, expected " << family.size();
    throw DimensionError(msg.str());
  }
}

RBSpec make_spec(const ContractionFamily& family, const ParameterSet& set, Exponent p) {
  return RBSpec(family, set.scaling, LpForm{set.offsets, p});
}

}  // namespace

ParameterSequence::ParameterSequence(ContractionFamily family, Exponent p,
                                     std::vector<ParameterSet> members, ParameterSet limit,
                                     std::size_t tail_start)
    : family_(std::move(family)),
      p_(p),
      members_(std::move(members)),
      limit_(std::move(limit)),
      tail_start_(tail_start) {
  if (members_.empty()) throw DimensionError("a parameter sequence needs at least one member");
  check_shape(family_, limit_, "the limit");
  for (const auto& m : members_) {
    check_shape(family_, m, "a member");
    for (std::size_t i = 0; i < family_.size(); ++i) {
      require_same_grid(limit_.offsets[i], m.offsets[i]);
      require_same_grid(limit_.scaling[i], m.scaling[i]);
    }
  }
  // Tail convergence: distances to the limit must not grow after tail_start.
  for (std::size_t m = std::max<std::size_t>(tail_start_, 1); m < members_.size(); ++m) {
    for (std::size_t i = 0; i < family_.size(); ++i) {
      const double dq_prev = function_distance(members_[m - 1].offsets[i], limit_.offsets[i], p_);
      const double dq = function_distance(members_[m].offsets[i], limit_.offsets[i], p_);
      const double ds_prev = sup_metric(members_[m - 1].scaling[i], limit_.scaling[i]);
      const double ds = sup_metric(members_[m].scaling[i], limit_.scaling[i]);
      if (dq > dq_prev || ds > ds_prev) {
        std::ostringstream msg;
        msg << "parameter distances to the limit increase at member " << m + 1
            << " (interval " << i << ")";
        throw ValidationError(msg.str());
      }
    }
  }
}

RBSpec ParameterSequence::member_spec(std::size_t m) const {
  return make_spec(family_, members_.at(m), p_);
}

RBSpec ParameterSequence::limit_spec() const { return make_spec(family_, limit_, p_); }

double ParameterSequence::offset_distance(std::size_t m) const {
  double d = 0.0;
  for (std::size_t i = 0; i < family_.size(); ++i) {
    d = std::max(d, function_distance(members_.at(m).offsets[i], limit_.offsets[i], p_));
  }
  return d;
}

double ParameterSequence::scaling_distance(std::size_t m) const {
  double d = 0.0;
  for (std::size_t i = 0; i < family_.size(); ++i) {
    d = std::max(d, sup_metric(members_.at(m).scaling[i], limit_.scaling[i]));
  }
  return d;
}

double stability_bound(const ParameterSequence& ps, std::size_t m, const SampledFunction& f,
                       double c_bar) {
  const Exponent p = ps.exponent();
  const ContractionFamily& family = ps.family();
  const ParameterSet& member = ps.members().at(m);
  const ParameterSet& limit = ps.limit();
  const double fnorm = norm_from_zero(f, p);

  double numerator = 0.0;
  for (std::size_t i = 0; i < family.size(); ++i) {
    const double term = function_distance(member.offsets[i], limit.offsets[i], p) +
                        sup_metric(member.scaling[i], limit.scaling[i]) * fnorm;
    if (p.is_infinite()) {
      numerator = std::max(numerator, term);
    } else {
      numerator += family.derivative_sup(i) * std::pow(term, p.value());
    }
  }
  double rate = c_bar;
  if (!p.is_infinite()) {
    numerator = std::pow(numerator, 1.0 / p.value());
    rate = std::pow(c_bar, 1.0 / p.value());
  }
  return numerator / (1.0 - rate);
}

bool SequenceResult::all_within_bound() const noexcept {
  return std::all_of(within_bound.begin(), within_bound.end(), [](bool b) { return b; });
}

SequenceResult fractal_sequence(const ParameterSequence& ps, std::size_t M, double tol,
                                std::size_t max_iter) {
  if (M < 2) throw ParameterError("a fractal sequence needs M >= 2 members");
  if (M > ps.members().size()) {
    std::ostringstream msg;
    msg << "requested " << M << " members but the sequence has " << ps.members().size();
    throw DimensionError(msg.str());
  }

  const RBSpec limit_spec = ps.limit_spec();
  const SampledFunction zero = SampledFunction::zero(limit_spec.domain(), limit_spec.grid_size());

  auto solve = [&](const RBSpec& spec, const std::string& label) {
    try {
      return fixed_point(spec, zero, tol, max_iter);
    } catch (const NonConvergenceError&) {
      throw;
    } catch (const Error& e) {
      throw ValidationError(label + ": " + e.what());
    }
  };

  double c_bar = contraction_factor(limit_spec);
  std::vector<RBSpec> specs;
  for (std::size_t m = 0; m < M; ++m) {
    specs.push_back(ps.member_spec(m));
    c_bar = std::max(c_bar, contraction_factor(specs.back()));
  }
  if (!(c_bar < 1.0)) {
    std::ostringstream msg;
    msg << "uniform contraction bound " << c_bar << " is not below 1";
    throw NotContractiveError(msg.str(), c_bar);
  }

  SequenceResult result{{}, solve(limit_spec, "limit parameters"), {}, {}, {}, c_bar, false};
  for (std::size_t m = 0; m < M; ++m) {
    result.members.push_back(solve(specs[m], "member m = " + std::to_string(m + 1)));
    const double d = spec_distance(limit_spec, result.members.back().fstar, result.limit.fstar);
    const double bound = stability_bound(ps, m, result.limit.fstar, c_bar) + 10.0 * tol;
    result.distances.push_back(d);
    result.bounds.push_back(bound);
    result.within_bound.push_back(d <= bound);
  }

  const std::size_t quarter = std::max<std::size_t>(1, M / 4);
  const double head_min =
      *std::min_element(result.distances.begin(), result.distances.begin() + quarter);
  const double tail_max =
      *std::max_element(result.distances.end() - quarter, result.distances.end());
  result.tail_decays = tail_max <= head_min;
  return result;
}

double SeriesResult::max_ratio() const noexcept {
  return ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
}

SeriesResult fractal_series(const ContractionFamily& family, Exponent p,
                            const std::vector<ParameterSet>& terms, std::size_t K, double tol,
                            std::size_t max_iter) {
  if (K == 0) throw ParameterError("a series needs at least one term");
  if (K > terms.size()) {
    std::ostringstream msg;
    msg << "requested " << K << " terms but only " << terms.size() << " were given";
    throw DimensionError(msg.str());
  }
  for (const auto& t : terms) check_shape(family, t, "a series term");

  SeriesResult result;
  ParameterSet sum = terms.front();
  for (std::size_t k = 0; k < K; ++k) {
    if (k > 0) {
      for (std::size_t i = 0; i < family.size(); ++i) {
        sum.offsets[i] = combine(sum.offsets[i], terms[k].offsets[i], 1.0, 1.0);
      }
      std::vector<SampledFunction> s;
      for (std::size_t i = 0; i < family.size(); ++i) {
        s.push_back(combine(sum.scaling[i], terms[k].scaling[i], 1.0, 1.0));
      }
      sum.scaling = ScalingFamily(std::move(s));
    }
    const RBSpec spec = make_spec(family, sum, p);
    const double factor = contraction_factor(spec);
    result.factors.push_back(factor);
    if (!(factor < 1.0)) {
      std::ostringstream msg;
      msg << "partial sum k = " << k + 1 << " has contraction factor " << factor;
      throw NotContractiveError(msg.str(), factor);
    }
    result.partial.push_back(
        fixed_point(spec, SampledFunction::zero(spec.domain(), spec.grid_size()), tol, max_iter));
    if (k > 0) {
      const double inc = spec_distance(spec, result.partial[k].fstar, result.partial[k - 1].fstar);
      if (!result.increments.empty() && result.increments.back() > 0.0) {
        result.ratios.push_back(inc / result.increments.back());
      }
      result.increments.push_back(inc);
    }
  }
  return result;
}

}  // namespace posifract
