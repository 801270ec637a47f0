#include "posifract/rb_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace posifract {

// ------------------------------------------------------------ ScalingFamily

ScalingFamily::ScalingFamily(std::vector<SampledFunction> functions)
    : functions_(std::move(functions)) {
  if (functions_.empty()) throw DimensionError("a scaling family needs at least one function");
  for (const auto& s : functions_) require_same_grid(functions_.front(), s);
}

ScalingFamily ScalingFamily::constants(std::span<const double> values, Interval domain,
                                       std::size_t grid) {
  std::vector<SampledFunction> fs;
  fs.reserve(values.size());
  for (double v : values) fs.push_back(SampledFunction::constant(domain, grid, v));
  return ScalingFamily(std::move(fs));
}

double ScalingFamily::s_infinity() const noexcept {
  double m = 0.0;
  for (const auto& s : functions_) m = std::max(m, s.sup());
  return m;
}

bool ScalingFamily::is_constant(std::size_t i) const {
  const auto samples = functions_.at(i).samples();
  return std::all_of(samples.begin(), samples.end(),
                     [&](double v) { return v == samples.front(); });
}

// --------------------------------------------------------- DiscreteOperator

DiscreteOperator::DiscreteOperator(std::vector<double> offset,
                                   std::vector<std::size_t> row_start,
                                   std::vector<std::size_t> columns,
                                   std::vector<double> weights)
    : offset_(std::move(offset)),
      row_start_(std::move(row_start)),
      columns_(std::move(columns)),
      weights_(std::move(weights)) {}

std::vector<double> DiscreteOperator::apply_linear(std::span<const double> g) const {
  if (g.size() != offset_.size()) throw DimensionError("operand length does not match the grid");
  std::vector<double> out(offset_.size(), 0.0);
  for (std::size_t j = 0; j < offset_.size(); ++j) {
    double acc = 0.0;
    for (std::size_t e = row_start_[j]; e < row_start_[j + 1]; ++e) {
      acc += weights_[e] * g[columns_[e]];
    }
    out[j] = acc;
  }
  return out;
}

std::vector<double> DiscreteOperator::apply(std::span<const double> g) const {
  std::vector<double> out = apply_linear(g);
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = offset_[j] + out[j];
  return out;
}

// ------------------------------------------------------------------- RBSpec

namespace {

struct Cell {
  std::size_t k;
  double frac;
};

// Grid cell containing x and the interpolation weight of its right node.
Cell locate_cell(const Interval& domain, std::size_t grid, double x) {
  const std::size_t last = grid - 1;
  double t = (x - domain.lo) / domain.width() * static_cast<double>(last);
  t = std::clamp(t, 0.0, static_cast<double>(last));
  auto k = static_cast<std::size_t>(std::floor(t));
  if (k >= last) k = last - 1;
  return {k, t - static_cast<double>(k)};
}

class RowBuilder {
 public:
  void add(std::size_t column, double weight) {
    if (weight != 0.0) entries_[column] += weight;
  }
  void flush(std::vector<std::size_t>& row_start, std::vector<std::size_t>& columns,
             std::vector<double>& weights, double scale) {
    for (const auto& [c, w] : entries_) {
      columns.push_back(c);
      weights.push_back(w * scale);
    }
    row_start.push_back(columns.size());
    entries_.clear();
  }

 private:
  std::map<std::size_t, double> entries_;
};

}  // namespace

RBSpec::RBSpec(ContractionFamily family, ScalingFamily scaling, LpForm form)
    : family_(std::move(family)), scaling_(std::move(scaling)), form_(std::move(form)) {
  check_structure();
  build();
}

RBSpec::RBSpec(ContractionFamily family, ScalingFamily scaling, CForm form)
    : family_(std::move(family)), scaling_(std::move(scaling)), form_(std::move(form)) {
  check_structure();
  build();
}

void RBSpec::check_structure() const {
  const std::size_t n = family_.size();
  if (scaling_.size() != n) {
    std::ostringstream msg;
    msg << "expected " << n << " scaling functions, got " << scaling_.size();
    throw DimensionError(msg.str());
  }
  const SampledFunction& ref = scaling_[0];
  if (!(ref.domain() == family_.domain())) {
    throw DimensionError("scaling functions are not defined on the knot interval");
  }
  if (const auto* lp = std::get_if<LpForm>(&form_)) {
    if (lp->offsets.size() != n) {
      std::ostringstream msg;
      msg << "expected " << n << " offset functions q_i, got " << lp->offsets.size();
      throw DimensionError(msg.str());
    }
    for (const auto& q : lp->offsets) require_same_grid(ref, q);
  } else {
    const auto& c = std::get<CForm>(form_);
    require_same_grid(ref, c.germ);
    if (const auto* v = c.op.multiplier_function()) require_same_grid(ref, *v);
  }
}

Exponent RBSpec::metric_exponent() const noexcept {
  if (const auto* lp = lp_form()) return lp->p;
  return Exponent::infinity();
}

const SampledFunction& RBSpec::germ_image() const {
  if (!germ_image_) throw ConfigurationError("Lf is only defined for the C form");
  return *germ_image_;
}

void RBSpec::build() {
  const std::size_t n = family_.size();
  const Interval domain = family_.domain();
  grid_ = scaling_[0].size();
  const std::size_t N = grid_;

  std::vector<double> offset(N, 0.0);
  std::vector<std::size_t> row_start{0};
  std::vector<std::size_t> columns;
  std::vector<double> weights;
  RowBuilder row;

  if (const auto* c = c_form()) {
    germ_image_ = std::make_shared<const SampledFunction>(apply_L(c->op, c->germ));
    const SampledFunction& f = c->germ;
    const SampledFunction& lf = *germ_image_;

    offsets_.assign(n, std::vector<double>(N));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t m = 0; m < N; ++m) {
        const double x = f.abscissa(m);
        offsets_[i][m] = f(family_.apply(i, x)) - scaling_[i][m] * lf[m];
      }
    }

    // (Tg)(x_j) = f(x_j) - S_i(u) Lf(u) + S_i(u) g(u),  u = l_i^{-1}(x_j)
    for (std::size_t j = 0; j < N; ++j) {
      const double x = f.abscissa(j);
      const std::size_t i = family_.locate(x);
      const double u = family_.invert(i, x);
      const double s = scaling_[i](u);
      offset[j] = f[j] - s * lf(u);
      const Cell cell = locate_cell(domain, N, u);
      if (cell.frac == 0.0) {
        row.add(cell.k, s);
      } else if (cell.frac == 1.0) {
        row.add(cell.k + 1, s);
      } else {
        row.add(cell.k, s * (1.0 - cell.frac));
        row.add(cell.k + 1, s * cell.frac);
      }
      row.flush(row_start, columns, weights, 1.0);
    }
  } else {
    const LpForm& lp = std::get<LpForm>(form_);
    offsets_.assign(n, std::vector<double>(N));
    for (std::size_t i = 0; i < n; ++i) {
      const auto q = lp.offsets[i].samples();
      offsets_[i].assign(q.begin(), q.end());
    }

    const double h = domain.width() / static_cast<double>(N - 1);
    const std::vector<double> mass = trapezoid_weights(domain, N);
    const auto knots = family_.knots().knots();
    const double gauss = 1.0 / std::sqrt(3.0);
    auto x_at = [&](std::size_t m) { return SampledFunction::grid_abscissa(domain, N, m); };

    for (std::size_t j = 0; j < N; ++j) {
      const double xj = x_at(j);
      double acc_offset = 0.0;

      auto integrate_half = [&](double y0, double y1) {
        // Split [y0, y1] at interior knots so each piece lies in one I_i.
        std::vector<double> ys{y0};
        for (double kv : knots) {
          if (kv > y0 && kv < y1) ys.push_back(kv);
        }
        ys.push_back(y1);
        for (std::size_t s = 0; s + 1 < ys.size(); ++s) {
          const double v0 = ys[s];
          const double v1 = ys[s + 1];
          const std::size_t i = family_.locate(0.5 * (v0 + v1));
          const double a = family_.derivative_sup(i);
          const double z0 = family_.invert(i, v0);
          const double z1 = family_.invert(i, v1);
          // Split the preimage at grid nodes so every factor is linear.
          std::vector<double> zs{z0};
          const auto m_first =
              static_cast<std::size_t>(std::floor((z0 - domain.lo) / h)) + 1;
          for (std::size_t m = m_first; m < N; ++m) {
            const double xm = x_at(m);
            if (xm >= z1) break;
            if (xm > z0) zs.push_back(xm);
          }
          zs.push_back(z1);
          for (std::size_t t = 0; t + 1 < zs.size(); ++t) {
            const double s0 = zs[t];
            const double s1 = zs[t + 1];
            const double half = 0.5 * (s1 - s0);
            if (!(half > 0.0)) continue;
            const double mid = 0.5 * (s0 + s1);
            const Cell cell = locate_cell(domain, N, mid);
            const double xk = x_at(cell.k);
            for (double sign : {-1.0, 1.0}) {
              const double z = mid + sign * half * gauss;
              const double y = family_.apply(i, z);
              const double hat = std::max(0.0, 1.0 - std::abs(y - xj) / h);
              const double c = a * half * hat;
              if (c == 0.0) continue;
              const double fr = std::clamp((z - xk) / h, 0.0, 1.0);
              const double sv = scaling_[i](z);
              acc_offset += c * lp.offsets[i](z);
              row.add(cell.k, c * sv * (1.0 - fr));
              row.add(cell.k + 1, c * sv * fr);
            }
          }
        }
      };

      if (j > 0) integrate_half(x_at(j - 1), xj);
      if (j + 1 < N) integrate_half(xj, x_at(j + 1));
      offset[j] = acc_offset / mass[j];
      row.flush(row_start, columns, weights, 1.0 / mass[j]);
    }
  }

  op_ = std::make_shared<const DiscreteOperator>(std::move(offset), std::move(row_start),
                                                 std::move(columns), std::move(weights));
}

// --------------------------------------------------------------- operations

namespace {

void require_spec_grid(const RBSpec& spec, const SampledFunction& g) {
  if (!(g.domain() == spec.domain()) || g.size() != spec.grid_size()) {
    std::ostringstream msg;
    msg << "function grid [" << g.domain().lo << ", " << g.domain().hi << "] x " << g.size()
        << " does not match the operator grid [" << spec.domain().lo << ", "
        << spec.domain().hi << "] x " << spec.grid_size();
    throw DimensionError(msg.str());
  }
}

Continuity output_continuity(const RBSpec& spec) {
  return spec.is_c_form() ? Continuity::continuous : Continuity::measurable;
}

SampledFunction to_function(const RBSpec& spec, std::vector<double> values) {
  const Interval d = spec.domain();
  const std::size_t N = spec.grid_size();
  for (std::size_t j = 0; j < values.size(); ++j) {
    if (!(values[j] >= 0.0)) {
      std::ostringstream msg;
      msg << "operator output " << values[j] << " at x = "
          << SampledFunction::grid_abscissa(d, N, j)
          << " is negative; the RB spec leaves the positive cone (check q_i = f o l_i - S_i Lf >= 0)";
      throw PositivityError(msg.str(), SampledFunction::grid_abscissa(d, N, j), values[j]);
    }
  }
  return SampledFunction(d, std::move(values), output_continuity(spec));
}

// Distance of signed grid data in the gauge the contraction factor bounds.
double gauge(const RBSpec& spec, std::span<const double> delta) {
  const Exponent p = spec.metric_exponent();
  if (p.is_infinite()) return sup_abs(delta);
  return lp_abs_power(delta, spec.domain(), p.value());
}

double gauge_to_metric(const RBSpec& spec, double g) {
  const Exponent p = spec.metric_exponent();
  if (p.is_infinite() || p.value() == 1.0) return g;
  return std::pow(g, 1.0 / p.value());
}

}  // namespace

SampledFunction apply_rb(const RBSpec& spec, const SampledFunction& g) {
  require_spec_grid(spec, g);
  return to_function(spec, spec.discretization().apply(g.samples()));
}

double contraction_factor(const RBSpec& spec) {
  const ScalingFamily& s = spec.scaling();
  const Exponent p = spec.metric_exponent();
  if (p.is_infinite()) return s.s_infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double d = spec.family().derivative_sup(i);
    double m = 0.0;
    for (double v : s[i].samples()) m = std::max(m, d * std::pow(v, p.value()));
    total += m;
  }
  return total;
}

double metric_contraction_rate(const RBSpec& spec) {
  return gauge_to_metric(spec, contraction_factor(spec));
}

double spec_distance(const RBSpec& spec, const SampledFunction& f, const SampledFunction& g) {
  const Exponent p = spec.metric_exponent();
  return p.is_infinite() ? sup_metric(f, g) : lp_metric(f, g, p);
}

bool ValidationReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(),
                     [](const ValidationCheck& c) { return c.passed || !c.required; });
}

const ValidationCheck* ValidationReport::find(const std::string& name) const noexcept {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

std::string ValidationReport::failure_summary() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    if (c.required && !c.passed) out << c.name << ": " << c.detail << "\n";
  }
  return out.str();
}

ValidationReport validate_spec(const RBSpec& spec) {
  ValidationReport report;
  const ContractionFamily& family = spec.family();
  const std::size_t n = family.size();
  const std::size_t N = spec.grid_size();
  const Interval d = spec.domain();

  // (a) nonnegative offsets
  {
    ValidationCheck check{"q_nonnegative", true, true, 0.0, ""};
    double worst = std::numeric_limits<double>::infinity();
    std::size_t wi = 0;
    std::size_t wm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& q = spec.offsets_on_grid()[i];
      for (std::size_t m = 0; m < N; ++m) {
        if (q[m] < worst) {
          worst = q[m];
          wi = i;
          wm = m;
        }
      }
    }
    check.measured = worst;
    check.passed = worst >= 0.0;
    std::ostringstream detail;
    if (spec.is_c_form()) {
      detail << "derived offset q_" << wi + 1 << " = f o l_" << wi + 1 << " - S_" << wi + 1
             << " * Lf has minimum " << worst << " at x = "
             << SampledFunction::grid_abscissa(d, N, wm);
      if (!check.passed) detail << "; positivity of the offsets fails, so T leaves C+";
    } else {
      detail << "min q_i = " << worst;
    }
    check.detail = detail.str();
    report.checks.push_back(std::move(check));
  }

  if (const CForm* c = spec.c_form()) {
    const SampledFunction& f = c->germ;
    const SampledFunction& lf = spec.germ_image();

    // Sufficient condition f >= ||S_i Lf||_inf on I (informational).
    {
      double bound = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t m = 0; m < N; ++m) bound = std::max(bound, spec.scaling()[i][m] * lf[m]);
      }
      const double slack = f.min() - bound;
      std::ostringstream detail;
      detail << "min f = " << f.min() << ", max_i ||S_i Lf||_inf = " << bound;
      report.checks.push_back({"germ_dominates_scaled_Lf", slack >= 0.0, false, slack,
                               detail.str()});
    }

    // (b) endpoint conditions
    {
      const double e0 = std::abs(lf[0] - f[0]);
      const double e1 = std::abs(lf[N - 1] - f[N - 1]);
      const double worst = std::max(e0, e1);
      std::ostringstream detail;
      detail << "|Lf(x0) - f(x0)| = " << e0 << ", |Lf(xn) - f(xn)| = " << e1;
      report.checks.push_back(
          {"endpoint_conditions", worst <= kJoinUpTolerance, true, worst, detail.str()});
    }

    // (c) join-up at interior knots: T f from the left piece at l_j(xn) and
    // from the right piece at l_{j+1}(x0).
    {
      double worst = 0.0;
      std::size_t wj = 0;
      for (std::size_t j = 1; j < n; ++j) {
        const double xj = family.knots()[j];
        const double left =
            f(xj) + spec.scaling()[j - 1](d.hi) * (f(d.hi) - lf(d.hi));
        const double right = f(xj) + spec.scaling()[j](d.lo) * (f(d.lo) - lf(d.lo));
        const double gap = std::abs(left - right);
        if (gap > worst) {
          worst = gap;
          wj = j;
        }
      }
      std::ostringstream detail;
      detail << "max |Tf(x_j-) - Tf(x_j+)| = " << worst;
      if (worst > 0.0) detail << " at knot x_" << wj;
      report.checks.push_back(
          {"join_up", worst <= kJoinUpTolerance, true, worst, detail.str()});
    }

    // continuity flags
    {
      bool ok = f.continuity() == Continuity::continuous;
      for (const auto& s : spec.scaling().functions()) ok = ok && s.continuity() == Continuity::continuous;
      report.checks.push_back({"continuity_flags", ok, true, ok ? 1.0 : 0.0,
                               ok ? "f, Lf and S_i are flagged continuous"
                                  : "the C form needs continuous f and S_i"});
    }
  }

  // (d) contractivity
  {
    const double factor = contraction_factor(spec);
    std::ostringstream detail;
    detail << "contraction factor " << factor << (factor < 1.0 ? " < 1" : " >= 1");
    report.checks.push_back({"contractive", factor < 1.0, true, factor, detail.str()});
  }
  return report;
}

FixedPointResult fixed_point(const RBSpec& spec, const SampledFunction& g0, double tol,
                             std::size_t max_iter) {
  require_spec_grid(spec, g0);
  if (!(tol > 0.0)) throw ParameterError("tolerance must be positive");
  if (max_iter == 0) throw ParameterError("max_iter must be at least 1");

  const double factor = contraction_factor(spec);
  if (!(factor < 1.0)) {
    std::ostringstream msg;
    msg << "contraction factor " << factor << " is not below 1";
    throw NotContractiveError(msg.str(), factor);
  }
  const ValidationReport report = validate_spec(spec);
  if (!report.passed()) throw ValidationError(report.failure_summary());

  const double rate = metric_contraction_rate(spec);
  const double amplification = rate / (1.0 - rate);
  const DiscreteOperator& op = spec.discretization();

  // For finite p the rooted d_p bound says little about single samples. When
  // every S_i is below 1 the discrete operator is also a sup contraction with
  // rate S_inf, so the same a-posteriori test is applied to the sup step.
  const double s_inf = spec.scaling().s_infinity();
  const bool sup_check = !spec.metric_exponent().is_infinite() && s_inf < 1.0;
  const double sup_amplification = sup_check ? s_inf / (1.0 - s_inf) : 0.0;

  // Iterate in increment form: g_{k+1} = g_k + delta_k with
  // delta_k = T g_k - T g_{k-1} = K delta_{k-1}. This is the same sequence
  // as g_{k+1} = T g_k but the increments carry full relative precision.
  std::vector<double> g(g0.samples().begin(), g0.samples().end());
  std::vector<double> next = op.apply(g);
  std::vector<double> delta(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) delta[j] = next[j] - g[j];

  std::vector<double> history;
  for (std::size_t k = 0; k < max_iter; ++k) {
    if (k > 0) {
      delta = op.apply_linear(delta);
      for (std::size_t j = 0; j < g.size(); ++j) next[j] = g[j] + delta[j];
    }
    // Positivity is intrinsic: every iterate must stay in the cone.
    SampledFunction iterate = to_function(spec, next);

    const double step_gauge = gauge(spec, delta);
    if (!std::isfinite(step_gauge)) {
      throw NonConvergenceError("iteration produced a non-finite distance", history);
    }
    history.push_back(step_gauge);
    const double step = gauge_to_metric(spec, step_gauge);
    g.swap(next);

    const bool sup_ok =
        !sup_check || std::max(1.0, sup_amplification) * sup_abs(delta) <= tol;
    if (step <= tol && amplification * step <= tol && sup_ok) {
      FixedPointResult result{std::move(iterate), k + 1, factor, 0.0, std::move(history)};
      result.residual = selfref_residual(spec, result.fstar);
      return result;
    }
  }
  std::ostringstream msg;
  msg << "no convergence to tol " << tol << " within " << max_iter << " iterations (last step "
      << gauge_to_metric(spec, history.back()) << ")";
  throw NonConvergenceError(msg.str(), std::move(history));
}

double selfref_residual(const RBSpec& spec, const SampledFunction& candidate) {
  require_spec_grid(spec, candidate);
  return spec_distance(spec, apply_rb(spec, candidate), candidate);
}

std::vector<double> knot_errors(const RBSpec& spec, const SampledFunction& fstar) {
  const CForm* c = spec.c_form();
  if (c == nullptr) throw ConfigurationError("knot interpolation is defined for the C form");
  require_spec_grid(spec, fstar);
  std::vector<double> errors;
  for (double x : spec.family().knots().knots()) {
    errors.push_back(std::abs(fstar(x) - c->germ(x)));
  }
  return errors;
}

double interpolation_check(const RBSpec& spec, const SampledFunction& fstar) {
  const std::vector<double> errors = knot_errors(spec, fstar);
  return *std::max_element(errors.begin(), errors.end());
}

}  // namespace posifract
