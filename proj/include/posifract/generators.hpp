#pragma once

// Seeded random inputs for property checks: piecewise-linear functions and
// valid C-form / L_p-form specs.

#include <cstddef>
#include <random>

#include "posifract/rb_core.hpp"

namespace posifract {

using Rng = std::mt19937_64;

/// Piecewise-linear function with `pieces` equal pieces and node values
/// drawn uniformly from [lo, hi].
SampledFunction random_piecewise_linear(Rng& rng, Interval domain, std::size_t grid, double lo,
                                        double hi, std::size_t pieces,
                                        Continuity continuity = Continuity::continuous);

struct RandomSpecOptions {
  std::size_t min_intervals = 2;
  std::size_t max_intervals = 4;
  /// Cells per interval for an equal split; the grid has cells * n + 1 points.
  std::size_t cells_per_interval = 256;
  /// Upper bound on S_inf (C form) or the contraction factor (L_p form).
  double max_factor = 0.9;
};

/// C form with L = endpoint_affine, germ values in [1, 1 + U], knots on grid
/// points and S_inf capped so f >= ||S_i Lf||_inf. Redraws until
/// validate_spec passes.
RBSpec random_c_spec(Rng& rng, const RandomSpecOptions& options = {});

/// L_p form with exponent p, nonnegative q_i and S_i <= max_factor^(1/p)
/// pointwise, so the contraction factor is at most max_factor.
RBSpec random_lp_spec(Rng& rng, Exponent p, const RandomSpecOptions& options = {});

/// Random nonnegative grid function on the spec's grid.
SampledFunction random_grid_function(Rng& rng, const RBSpec& spec, double hi = 2.0);

}  // namespace posifract
