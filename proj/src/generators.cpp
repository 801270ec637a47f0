#include "posifract/generators.hpp"

#include <algorithm>
#include <cmath>

namespace posifract {

namespace {

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_count(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Interval random_domain(Rng& rng) {
  const double lo = uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : uniform(rng, 0.0, 2.0);
  return {lo, lo + uniform(rng, 0.5, 3.0)};
}

// Cell counts per interval, each at least 8, summing to cells * n.
std::vector<std::size_t> random_cells(Rng& rng, std::size_t n, std::size_t cells) {
  std::vector<double> w(n);
  for (auto& v : w) v = uniform(rng, 0.5, 1.5);
  double total = 0.0;
  for (double v : w) total += v;
  const std::size_t all = cells * n;
  std::vector<std::size_t> out(n);
  std::size_t used = 0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    out[i] = std::max<std::size_t>(8, static_cast<std::size_t>(std::round(w[i] / total * all)));
    used += out[i];
  }
  out[n - 1] = all - used;
  return out;
}

}  // namespace

SampledFunction random_piecewise_linear(Rng& rng, Interval domain, std::size_t grid, double lo,
                                        double hi, std::size_t pieces, Continuity continuity) {
  std::vector<double> nodes(pieces + 1);
  for (auto& v : nodes) v = uniform(rng, lo, hi);
  return SampledFunction::from_function(
      domain, grid,
      [&](double x) {
        const double t = std::clamp((x - domain.lo) / domain.width(), 0.0, 1.0) *
                         static_cast<double>(pieces);
        const auto k = std::min(static_cast<std::size_t>(t), pieces - 1);
        const double fr = t - static_cast<double>(k);
        return std::max(0.0, (1.0 - fr) * nodes[k] + fr * nodes[k + 1]);
      },
      continuity);
}

RBSpec random_c_spec(Rng& rng, const RandomSpecOptions& options) {
  for (;;) {
    const std::size_t n = uniform_count(rng, options.min_intervals, options.max_intervals);
    const std::size_t grid = options.cells_per_interval * n + 1;
    const Interval domain = random_domain(rng);
    const auto cells = random_cells(rng, n, options.cells_per_interval);

    std::vector<double> knots{domain.lo};
    std::size_t index = 0;
    for (std::size_t i = 0; i < n; ++i) {
      index += cells[i];
      knots.push_back(SampledFunction::grid_abscissa(domain, grid, index));
    }
    ContractionFamily family = ContractionFamily::affine(KnotVector(knots));

    const double spread = uniform(rng, 0.0, 2.0);
    SampledFunction germ =
        random_piecewise_linear(rng, domain, grid, 1.0, 1.0 + spread, uniform_count(rng, 2, 8));
    const double lf_max = std::max(germ[0], germ[grid - 1]);
    const double cap = std::min(options.max_factor, germ.min() / lf_max);

    std::vector<SampledFunction> s;
    for (std::size_t i = 0; i < n; ++i) {
      if (uniform(rng, 0.0, 1.0) < 0.3) {
        s.push_back(SampledFunction::constant(domain, grid, uniform(rng, 0.0, cap)));
      } else {
        s.push_back(random_piecewise_linear(rng, domain, grid, 0.0, cap, uniform_count(rng, 1, 6)));
      }
    }
    RBSpec spec(std::move(family), ScalingFamily(std::move(s)),
                CForm{std::move(germ), SemiLinearOperator::endpoint_affine()});
    if (validate_spec(spec).passed()) return spec;
  }
}

RBSpec random_lp_spec(Rng& rng, Exponent p, const RandomSpecOptions& options) {
  const std::size_t n = uniform_count(rng, options.min_intervals, options.max_intervals);
  const std::size_t grid = options.cells_per_interval * n + 1;
  const Interval domain = random_domain(rng);

  // Knots off the grid on purpose: interior knots are arbitrary reals.
  std::vector<double> w(n);
  for (auto& v : w) v = uniform(rng, 0.5, 1.5);
  double total = 0.0;
  for (double v : w) total += v;
  std::vector<double> knots{domain.lo};
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    acc += w[i];
    knots.push_back(domain.lo + domain.width() * (acc / total));
  }
  knots.push_back(domain.hi);
  ContractionFamily family = ContractionFamily::affine(KnotVector(knots));

  const double s_max =
      p.is_infinite() ? options.max_factor : std::pow(options.max_factor, 1.0 / p.value());
  std::vector<SampledFunction> q;
  std::vector<SampledFunction> s;
  for (std::size_t i = 0; i < n; ++i) {
    q.push_back(random_piecewise_linear(rng, domain, grid, 0.0, 2.0, uniform_count(rng, 1, 6),
                                        Continuity::measurable));
    s.push_back(random_piecewise_linear(rng, domain, grid, 0.0, s_max, uniform_count(rng, 1, 6),
                                        Continuity::measurable));
  }
  return RBSpec(std::move(family), ScalingFamily(std::move(s)), LpForm{std::move(q), p});
}

SampledFunction random_grid_function(Rng& rng, const RBSpec& spec, double hi) {
  return random_piecewise_linear(rng, spec.domain(), spec.grid_size(), 0.0, hi,
                                 uniform_count(rng, 1, 12),
                                 spec.is_c_form() ? Continuity::continuous
                                                  : Continuity::measurable);
}

}  // namespace posifract
