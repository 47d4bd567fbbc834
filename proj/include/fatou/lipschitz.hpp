#pragma once

#include <cstdint>
#include <vector>

#include "fatou/extension.hpp"
#include "fatou/grid.hpp"
#include "fatou/rng.hpp"

namespace fatou {

/// Point (t, x) of R^{1+n}; t is the vertical coordinate, x lives on the torus.
struct SpacePoint {
    double t = 0.0;
    Point x{};
};

/// Graph domain {t > phi(x)} over a torus.
struct LipschitzGraph {
    GridFunction phi;
    double M = 0.0; // largest slope between neighbouring samples (axis and diagonal)
    int smooth_class = 0;

    const Grid& grid() const { return phi.grid(); }
};

/// Certifies M from the samples. A positive `declared_M` smaller than the certified
/// value is rejected with a DomainError.
LipschitzGraph make_lipschitz_graph(GridFunction phi, double declared_M = 0.0, int smooth_class = 0);

/// Triangle wave with slopes +-M and `teeth` periods per axis (dim 2: gradient norm M).
LipschitzGraph sawtooth_graph(const Grid& grid, double M, int teeth);
/// Random trigonometric profile rescaled to certified constant M.
LipschitzGraph random_graph(const Grid& grid, Rng& rng, double M);

struct BoundaryPoint {
    Point x{};
    double lift = 0.0;
    SpacePoint point() const { return SpacePoint{lift, x}; }
};

/// Snaps x to the nearest grid point and lifts it onto the graph.
BoundaryPoint boundary_point(const LipschitzGraph& graph, const Point& x);

/// Euclidean distance (torus metric in x) to the sampled boundary points.
double graph_distance(const LipschitzGraph& graph, const SpacePoint& X);
double space_distance(const Grid& grid, const SpacePoint& a, const SpacePoint& b);

/// 1/2 for M <= 1, min(1/4, 1/(2(M-1))) otherwise.
double corkscrew_kappa(double M);
SpacePoint corkscrew(const LipschitzGraph& graph, const BoundaryPoint& q, double t);

enum class FlattenDirection { Forward, Inverse };
/// Forward (t, x) -> (t - phi(x), x); inverse adds phi back. phi is read at the nearest sample.
SpacePoint flatten(const LipschitzGraph& graph, const SpacePoint& X, FlattenDirection dir);

/// |X - Q| < (1+c) d^beta (d <= 1) or (1+c) d (d > 1), d = graph_distance(X).
bool domain_region_contains(const LipschitzGraph& graph, double beta, double c, const BoundaryPoint& q,
                            const SpacePoint& X);

struct InclusionReport {
    std::size_t accepted = 0;
    std::size_t attempts = 0;
    std::size_t violations = 0;
    std::vector<std::pair<BoundaryPoint, SpacePoint>> witnesses; // first few violations
};

/// Rejection-samples points of the domain region (horizontal offsets on grid points, |X - Q| < L/4)
/// and checks each flattened point lies in the half-space region of aperture target_scale (1 + c).
InclusionReport region_inclusion_check(const LipschitzGraph& graph, double beta, double c, std::size_t samples,
                                       std::uint64_t seed = 1, double target_scale = 1.0);

/// (1 + |grad phi|^2)^{1/2} with centred differences.
GridFunction surface_density(const LipschitzGraph& graph);
/// sum of density h^n over the listed samples.
double surface_measure(const LipschitzGraph& graph, const std::vector<std::size_t>& indices);
/// Indices x with |(phi(x), x) - Q| < r.
std::vector<std::size_t> surface_ball(const LipschitzGraph& graph, const BoundaryPoint& q, double r);
double surface_ball_measure(const LipschitzGraph& graph, const BoundaryPoint& q, double r);
/// L^p norm against the surface measure.
double surface_lp_norm(const LipschitzGraph& graph, const GridFunction& f, double p);

/// (||f||_p^p + [f]_{s,p}^p)^{1/p} in the global graph chart; s = 0 gives ||f||_p.
double boundary_seminorm(const LipschitzGraph& graph, const GridFunction& f, double s, double p);

struct BoundaryMaxParams {
    double p = 2.0;
    double p0 = 0.0; // averaging exponent; 0 selects (1 + p) / 2
    double alpha_L = 0.5;
    int J = 3;
    std::vector<double> heights; // empty selects default_heights
};

/// tangential_max of the annuli surrogate of the chart pullback, aperture 1 + c.
GridFunction boundary_tangential_max(const LipschitzGraph& graph, const GridFunction& f, double beta, double c,
                                     const BoundaryMaxParams& params = {});

} // namespace fatou
