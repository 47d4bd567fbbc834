#pragma once

#include <optional>
#include <vector>

#include "fatou/extension.hpp"
#include "fatou/grid.hpp"

namespace fatou {

enum class Flavor { HalfSpace, GraphDomain };

struct ApproachRegionSpec {
    double beta = 1.0;
    double aperture = 1.0;
    double t_max = 1.0;
    Flavor flavor = Flavor::HalfSpace;
    double c = 1.0; // GraphDomain only
};

void validate(const ApproachRegionSpec& spec);

/// a t^beta for t <= 1, a t for t >= 1.
double region_radius(const ApproachRegionSpec& spec, double t);

/// |x - x0| < region_radius(t); torus metric when a grid is given, Euclidean otherwise.
bool region_contains(const ApproachRegionSpec& spec, const Point& x0, double t, const Point& x,
                     const Grid* torus = nullptr);

/// Sample attaining a sampled sup: height index k and grid index of x.
struct Witness {
    std::size_t k = 0;
    std::size_t x = 0;
};

/// max |u(t_k, x_i)| over samples in the region of each x0, heights t_k <= t_max.
/// Ties resolve to the lowest (k, i). Throws CoverageError with fewer than 2 usable heights.
GridFunction tangential_max(const HalfSpaceField& u, const ApproachRegionSpec& spec,
                            std::vector<Witness>* argmax = nullptr);

/// Signed extrema of u over the region of each x0, restricted to heights t <= t_upper.
struct RegionExtrema {
    GridFunction max;
    GridFunction min;
};
RegionExtrema region_extrema(const HalfSpaceField& u, const ApproachRegionSpec& spec, double t_upper);

/// Sampled sup of t^{n(1-beta)/p} |u(t,x)| over the beta-region (aperture a) with t <= 1.
GridFunction mitigated_max(const HalfSpaceField& u, double p, double beta, double aperture = 1.0);

/// 2^{nj/p} sup of t^{n(1-beta)/p} |v(2^j t, x)| over |x - x0| < a t^beta, t < 2^{-j/(1-beta)}.
/// Slice k of v is read as t = t_k 2^-j.
GridFunction dilated_mitigated_max(const HalfSpaceField& v, double p, double beta, int j, double aperture = 1.0);

/// Dyadic radii 4h, 8h, ... up to L/4.
std::vector<double> dyadic_radii(const Grid& grid);

/// sup over dyadic radii of r^alpha (mean over B(x,r) of |f|^s)^{1/s}.
GridFunction fractional_power_max(const GridFunction& f, double s, double alpha);
/// Hardy-Littlewood maximal function M_q.
GridFunction hl_max(const GridFunction& f, double q = 1.0);

struct CompositeParts {
    GridFunction total;
    GridFunction tangential; // N_{*,beta} of the Poisson extension
    GridFunction local;      // M_r f
    std::vector<GridFunction> dilated; // M_{p,beta,j} w for j = 0..J
};

/// sum_{j=0}^{J} 2^{-alpha_L j} [M_{p,beta,j} w + N_{*,beta} u_f + M_r f], w the annuli surrogate of f.
CompositeParts composite_parts(const GridFunction& f, double p, double r, double beta, double alpha_L, int J,
                               const std::vector<double>& heights);
GridFunction composite_max(const GridFunction& f, double p, double r, double beta, double alpha_L, int J);

} // namespace fatou
