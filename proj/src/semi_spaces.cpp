#include "posifract/semi_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace posifract {

namespace {

void require_nonnegative(std::span<const double> values, const char* what) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = values[k];
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream msg;
      msg << what << ": entry " << k << " = " << v << " is not a finite nonnegative real";
      throw ParameterError(msg.str());
    }
  }
}

void require_scalar(double lambda) {
  if (!std::isfinite(lambda) || lambda < 0.0) {
    std::ostringstream msg;
    msg << "scalars must be finite and nonnegative, got " << lambda;
    throw ParameterError(msg.str());
  }
}

// max{a,b} - min{a,b}
inline double spread(double a, double b) { return std::max(a, b) - std::min(a, b); }

}  // namespace

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::domain: return "domain";
    case ErrorKind::configuration: return "configuration";
    case ErrorKind::validation: return "validation";
    case ErrorKind::positivity: return "positivity";
    case ErrorKind::not_contractive: return "not_contractive";
    case ErrorKind::non_convergence: return "non_convergence";
  }
  return "unknown";
}

// ---------------------------------------------------------------- Exponent

Exponent::Exponent(double p) : p_(p) {
  if (std::isnan(p) || p < 1.0) {
    std::ostringstream msg;
    msg << "exponent p must lie in [1, inf], got " << p;
    throw ParameterError(msg.str());
  }
}

Exponent Exponent::infinity() { return Exponent(std::numeric_limits<double>::infinity()); }

bool Exponent::is_infinite() const noexcept { return std::isinf(p_); }

// ---------------------------------------------------------- PositiveVector

PositiveVector::PositiveVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw DimensionError("a positive vector needs at least one entry");
  require_nonnegative(values_, "positive vector");
}

PositiveVector PositiveVector::scaled(double lambda) const {
  require_scalar(lambda);
  std::vector<double> out(values_);
  for (double& v : out) v *= lambda;
  return PositiveVector(std::move(out));
}

PositiveVector operator+(const PositiveVector& u, const PositiveVector& v) {
  if (u.size() != v.size()) throw DimensionError("vector lengths differ");
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + v[i];
  return PositiveVector(std::move(out));
}

double euclidean_norm(const PositiveVector& x) {
  double sum = 0.0;
  for (double v : x.values()) sum += v * v;
  return std::sqrt(sum);
}

double euclidean_metric(const PositiveVector& x, const PositiveVector& y) {
  if (x.size() != y.size()) throw DimensionError("vector lengths differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = spread(x[i], y[i]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

double euclidean_inner(const PositiveVector& x, const PositiveVector& y) {
  if (x.size() != y.size()) throw DimensionError("vector lengths differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  return sum;
}

// -------------------------------------------------------- PositiveSequence

PositiveSequence::PositiveSequence(std::map<std::size_t, double> values, Exponent p)
    : values_(std::move(values)), p_(p) {
  for (const auto& [index, v] : values_) {
    if (!std::isfinite(v) || v < 0.0) {
      std::ostringstream msg;
      msg << "sequence entry " << index << " = " << v << " is not a finite nonnegative real";
      throw ParameterError(msg.str());
    }
  }
}

double PositiveSequence::at(std::size_t index) const {
  auto it = values_.find(index);
  return it == values_.end() ? 0.0 : it->second;
}

double lp_sequence_metric(const PositiveSequence& a, const PositiveSequence& b) {
  if (!(a.exponent() == b.exponent())) {
    throw ConfigurationError("sequences carry different exponents");
  }
  const Exponent p = a.exponent();

  // Merge the two supports in index order.
  std::vector<double> spreads;
  auto ia = a.values().begin();
  auto ib = b.values().begin();
  while (ia != a.values().end() || ib != b.values().end()) {
    if (ib == b.values().end() || (ia != a.values().end() && ia->first < ib->first)) {
      spreads.push_back(spread(ia->second, 0.0));
      ++ia;
    } else if (ia == a.values().end() || ib->first < ia->first) {
      spreads.push_back(spread(0.0, ib->second));
      ++ib;
    } else {
      spreads.push_back(spread(ia->second, ib->second));
      ++ia;
      ++ib;
    }
  }

  if (p.is_infinite()) {
    double m = 0.0;
    for (double s : spreads) m = std::max(m, s);
    return m;
  }
  double sum = 0.0;
  for (double s : spreads) sum += std::pow(s, p.value());
  return std::pow(sum, 1.0 / p.value());
}

// --------------------------------------------------------- SampledFunction

void validate_interval(const Interval& domain) {
  if (!std::isfinite(domain.lo) || !std::isfinite(domain.hi) || domain.lo < 0.0 ||
      !(domain.lo < domain.hi)) {
    std::ostringstream msg;
    msg << "domain [" << domain.lo << ", " << domain.hi
        << "] must be an ordered interval in the nonnegative reals";
    throw ParameterError(msg.str());
  }
}

SampledFunction::SampledFunction(Interval domain, std::vector<double> samples,
                                 Continuity continuity)
    : domain_(domain), samples_(std::move(samples)), continuity_(continuity) {
  validate_interval(domain_);
  if (samples_.size() < 2) throw DimensionError("a sampled function needs at least 2 samples");
  require_nonnegative(samples_, "sampled function");
}

SampledFunction SampledFunction::constant(Interval domain, std::size_t grid, double value,
                                          Continuity continuity) {
  if (grid < 2) throw DimensionError("a sampled function needs at least 2 samples");
  return SampledFunction(domain, std::vector<double>(grid, value), continuity);
}

SampledFunction SampledFunction::zero(Interval domain, std::size_t grid) {
  return constant(domain, grid, 0.0);
}

double SampledFunction::grid_abscissa(const Interval& domain, std::size_t grid, std::size_t k) {
  if (k + 1 == grid) return domain.hi;
  if (k == 0) return domain.lo;
  return domain.lo + domain.width() * (static_cast<double>(k) / static_cast<double>(grid - 1));
}

double SampledFunction::spacing() const noexcept {
  return domain_.width() / static_cast<double>(samples_.size() - 1);
}

double SampledFunction::operator()(double x) const {
  const double slack = 1e-12 * domain_.width();
  if (!(x >= domain_.lo - slack && x <= domain_.hi + slack)) {
    std::ostringstream msg;
    msg << "evaluation point " << x << " lies outside [" << domain_.lo << ", " << domain_.hi
        << "]";
    throw DomainError(msg.str());
  }
  const std::size_t last = samples_.size() - 1;
  double t = (x - domain_.lo) / domain_.width() * static_cast<double>(last);
  t = std::clamp(t, 0.0, static_cast<double>(last));
  std::size_t k = static_cast<std::size_t>(std::floor(t));
  if (k >= last) k = last - 1;
  const double frac = t - static_cast<double>(k);
  if (frac == 0.0) return samples_[k];
  if (frac == 1.0) return samples_[k + 1];
  return (1.0 - frac) * samples_[k] + frac * samples_[k + 1];
}

double SampledFunction::sup() const noexcept {
  return *std::max_element(samples_.begin(), samples_.end());
}

double SampledFunction::min() const noexcept {
  return *std::min_element(samples_.begin(), samples_.end());
}

bool SampledFunction::same_grid(const SampledFunction& other) const noexcept {
  return domain_ == other.domain_ && samples_.size() == other.samples_.size();
}

SampledFunction SampledFunction::with_continuity(Continuity continuity) const {
  SampledFunction copy(*this);
  copy.continuity_ = continuity;
  return copy;
}

void require_same_grid(const SampledFunction& f, const SampledFunction& g) {
  if (!f.same_grid(g)) {
    std::ostringstream msg;
    msg << "grid mismatch: [" << f.domain().lo << ", " << f.domain().hi << "] x " << f.size()
        << " vs [" << g.domain().lo << ", " << g.domain().hi << "] x " << g.size();
    throw DimensionError(msg.str());
  }
}

// ----------------------------------------------------------------- metrics

std::vector<double> trapezoid_weights(const Interval& domain, std::size_t grid) {
  if (grid < 2) throw DimensionError("trapezoid rule needs at least 2 nodes");
  const double h = domain.width() / static_cast<double>(grid - 1);
  std::vector<double> w(grid, h);
  w.front() = 0.5 * h;
  w.back() = 0.5 * h;
  return w;
}

double sup_abs(std::span<const double> values) {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double lp_abs_power(std::span<const double> values, const Interval& domain, double p) {
  const std::vector<double> w = trapezoid_weights(domain, values.size());
  double sum = 0.0;
  if (p == 1.0) {
    for (std::size_t k = 0; k < values.size(); ++k) sum += w[k] * std::abs(values[k]);
  } else if (p == 2.0) {
    for (std::size_t k = 0; k < values.size(); ++k) sum += w[k] * (values[k] * values[k]);
  } else {
    for (std::size_t k = 0; k < values.size(); ++k) sum += w[k] * std::pow(std::abs(values[k]), p);
  }
  return sum;
}

double lp_abs(std::span<const double> values, const Interval& domain, Exponent p) {
  if (p.is_infinite()) return sup_abs(values);
  const double integral = lp_abs_power(values, domain, p.value());
  if (p.value() == 1.0) return integral;
  if (p.value() == 2.0) return std::sqrt(integral);
  return std::pow(integral, 1.0 / p.value());
}

namespace {

std::vector<double> spreads(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g);
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = spread(f[k], g[k]);
  return out;
}

}  // namespace

double sup_metric(const SampledFunction& f, const SampledFunction& g) {
  const std::vector<double> s = spreads(f, g);
  return *std::max_element(s.begin(), s.end());
}

double lp_metric(const SampledFunction& f, const SampledFunction& g, Exponent p) {
  const std::vector<double> s = spreads(f, g);
  return lp_abs(s, f.domain(), p);
}

double norm_from_zero(const SampledFunction& f, Exponent p) {
  return lp_abs(f.samples(), f.domain(), p);
}

SampledFunction combine(const SampledFunction& f, const SampledFunction& g, double alpha,
                        double beta) {
  require_scalar(alpha);
  require_scalar(beta);
  require_same_grid(f, g);
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = alpha * f[k] + beta * g[k];
  const Continuity c = (f.continuity() == Continuity::continuous &&
                        g.continuity() == Continuity::continuous)
                           ? Continuity::continuous
                           : Continuity::measurable;
  return SampledFunction(f.domain(), std::move(out), c);
}

std::vector<double> signed_difference(const SampledFunction& f, const SampledFunction& g) {
  require_same_grid(f, g);
  std::vector<double> out(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) out[k] = f[k] - g[k];
  return out;
}

}  // namespace posifract
