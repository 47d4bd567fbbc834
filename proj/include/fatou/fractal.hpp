#pragma once

#include <utility>
#include <vector>

#include "fatou/extension.hpp"
#include "fatou/grid.hpp"
#include "fatou/maximal.hpp"
#include "fatou/potentials.hpp"

namespace fatou {

/// Two-branch self-similar measure on [0,1] with contraction 2^{-1/s}, truncated at `depth`.
/// At finite depth the mass 2^{-depth} of each interval is spread uniformly over it.
struct CantorMeasure {
    double s = 1.0;
    double ratio = 0.5;
    int depth = 0;
    std::vector<double> left; // sorted left endpoints of the level-depth intervals
    double length = 1.0;      // ratio^depth

    double weight() const;
    /// mu([0, x]).
    double cdf(double x) const;
    /// mu of the open interval (x - r, x + r).
    double ball_mass(double x, double r) const;
};

CantorMeasure cantor_measure(double s, int depth);

/// Geometric radii from ratio^depth to 1, `per_octave` per factor 2.
std::vector<double> frostman_radii(const CantorMeasure& mu, int per_octave = 4);

/// max of mu(B(x,r)) / r^s over the given radii and over centres at interval endpoints,
/// midpoints, and every position where one edge of the ball meets an endpoint.
/// The last family makes the value the exact sup over x for each listed r.
double frostman_constant(const CantorMeasure& mu, const std::vector<double>& radii);

/// Midpoint rule against mu, reading f at the nearest grid point.
double integrate_against(const GridFunction& f, const CantorMeasure& mu);

struct PointSet {
    Grid grid;
    std::vector<Point> points;
};

PointSet make_point_set(const Grid& grid, std::vector<Point> points);
/// Midpoints of the level-depth intervals of mu.
PointSet cantor_points(const Grid& grid, const CantorMeasure& mu);
/// Grid points where f > lambda.
PointSet superlevel_set(const GridFunction& f, double lambda);

struct BoxDimension {
    double slope = 0.0;
    double r2 = 0.0;
    std::vector<std::size_t> counts; // one per m in [m_lo, m_hi]
    bool empty = false;
};

/// Dyadic box counting with boxes of side L 2^{-m}; least-squares slope of log2 N against m.
BoxDimension box_dimension(const PointSet& set, int m_lo, int m_hi);

/// N(L 2^{-m}) (L 2^{-m})^gamma.
double box_content(const PointSet& set, int m, double gamma);

/// Grid points x0 whose oscillation sup |u(t,x) - f_ref(x0)| over region points with
/// t <= t_min exceeds eps.
PointSet divergence_set(const HalfSpaceField& u, const GridFunction& f_ref, const ApproachRegionSpec& spec,
                        double eps, double t_min);

/// Same, with f_ref taken from representative_value of bf; points whose representative
/// diverges are members.
PointSet divergence_set(const HalfSpaceField& u, const BesselFunction& bf, const std::vector<double>& radii,
                        const ApproachRegionSpec& spec, double eps, double t_min);

} // namespace fatou
