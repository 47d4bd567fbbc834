#pragma once

#include "fatou/grid.hpp"
#include "fatou/rng.hpp"

namespace fatou {

/// Real trigonometric polynomial with modes |k| <= max_mode (per axis), amplitude ~ (1+|k|)^-decay.
GridFunction random_trig(const Grid& grid, Rng& rng, int max_mode, double decay = 1.0);

/// Nonnegative sum of `count` Gaussian bumps with widths in [w_min, w_max] (physical units,
/// periodised), random heights in (0, 1], plus a constant background.
GridFunction random_bumps(const Grid& grid, Rng& rng, int count, double w_min, double w_max,
                          double background = 0.0);

/// i.i.d. uniform samples in [0, 1).
GridFunction random_uniform(const Grid& grid, Rng& rng);

/// Single-cell spike at the sample nearest x0 with unit L^p norm (height h^(-n/p)).
GridFunction unit_spike(const Grid& grid, const Point& x0, double p);

} // namespace fatou
