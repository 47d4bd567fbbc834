#include "fatou/lipschitz.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fatou/error.hpp"
#include "fatou/maximal.hpp"
#include "fatou/potentials.hpp"
#include "fatou/random_fields.hpp"

namespace fatou {

namespace {

long wrap(long i, long n) { return ((i % n) + n) % n; }

double certified_slope(const GridFunction& phi) {
    const Grid& g = phi.grid();
    const long n = static_cast<long>(g.points_per_axis());
    const double h = g.spacing();
    double m = 0.0;
    if (g.dim == 1) {
        for (long i = 0; i < n; ++i) m = std::max(m, std::abs(phi[wrap(i + 1, n)] - phi[i]) / h);
        return m;
    }
    const double diag = std::sqrt(2.0) * h;
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            const double v = phi[g.flat_index(i, j)];
            auto at = [&](long a, long b) { return phi[g.flat_index(wrap(a, n), wrap(b, n))]; };
            m = std::max({m, std::abs(at(i + 1, j) - v) / h, std::abs(at(i, j + 1) - v) / h,
                          std::abs(at(i + 1, j + 1) - v) / diag, std::abs(at(i + 1, j - 1) - v) / diag});
        }
    }
    return m;
}

double tri(double x, double period) {
    const double u = x / period - std::floor(x / period);
    return period * (0.5 - std::abs(u - 0.5));
}

} // namespace

LipschitzGraph make_lipschitz_graph(GridFunction phi, double declared_M, int smooth_class) {
    if (smooth_class < 0) throw ParameterError("smooth_class must be >= 0");
    const double m = certified_slope(phi);
    if (declared_M > 0.0 && m > declared_M * (1.0 + 1e-12)) {
        std::ostringstream os;
        os << "profile violates the declared Lipschitz constant: sampled slope " << m << " > " << declared_M;
        throw DomainError(os.str());
    }
    return LipschitzGraph{std::move(phi), m, smooth_class};
}

LipschitzGraph sawtooth_graph(const Grid& grid, double M, int teeth) {
    if (!(M >= 0.0) || teeth < 1) throw ParameterError("sawtooth_graph requires M >= 0 and teeth >= 1");
    const double period = grid.extent / teeth;
    const double k = grid.dim == 1 ? M : M / std::sqrt(2.0);
    auto phi = GridFunction::sample(grid, [&](const Point& x) {
        double v = tri(x[0], period);
        if (grid.dim == 2) v += tri(x[1], period);
        return k * v;
    });
    return make_lipschitz_graph(std::move(phi));
}

LipschitzGraph random_graph(const Grid& grid, Rng& rng, double M) {
    if (!(M > 0.0)) throw ParameterError("random_graph requires M > 0");
    const GridFunction base = random_trig(grid, rng, 4);
    const double m = certified_slope(base);
    if (!(m > 0.0)) throw NumericError("random_graph drew a constant profile");
    return make_lipschitz_graph(scale(base, M / m));
}

BoundaryPoint boundary_point(const LipschitzGraph& graph, const Point& x) {
    const std::size_t i = graph.grid().nearest_index(x);
    return BoundaryPoint{graph.grid().coord(i), graph.phi[i]};
}

double space_distance(const Grid& grid, const SpacePoint& a, const SpacePoint& b) {
    return std::hypot(a.t - b.t, grid.distance(a.x, b.x));
}

double graph_distance(const LipschitzGraph& graph, const SpacePoint& X) {
    const Grid& g = graph.grid();
    const long n = static_cast<long>(g.points_per_axis());
    const double h = g.spacing();
    const std::size_t c = g.nearest_index(X.x);
    double best = std::hypot(X.t - graph.phi[c], g.distance(X.x, g.coord(c)));
    // Only samples within `best` horizontally can do better.
    const long k = std::min(n / 2, static_cast<long>(std::ceil(best / h)) + 1);
    const long lo = 2 * k + 1 >= n ? 0 : -k;
    const long hi = 2 * k + 1 >= n ? n - 1 : k;
    if (g.dim == 1) {
        for (long d = lo; d <= hi; ++d) {
            const auto i = static_cast<std::size_t>(wrap(static_cast<long>(c) + d, n));
            best = std::min(best, std::hypot(X.t - graph.phi[i], g.distance(X.x, g.coord(i))));
        }
        return best;
    }
    const long ci = static_cast<long>(c) / n, cj = static_cast<long>(c) % n;
    for (long a = lo; a <= hi; ++a) {
        for (long b = lo; b <= hi; ++b) {
            const std::size_t i = g.flat_index(wrap(ci + a, n), wrap(cj + b, n));
            best = std::min(best, std::hypot(X.t - graph.phi[i], g.distance(X.x, g.coord(i))));
        }
    }
    return best;
}

double corkscrew_kappa(double M) { return M <= 1.0 ? 0.5 : std::min(0.25, 1.0 / (2.0 * (M - 1.0))); }

SpacePoint corkscrew(const LipschitzGraph& graph, const BoundaryPoint& q, double t) {
    if (!(t > 0.0)) throw ParameterError("corkscrew requires t > 0");
    const BoundaryPoint snapped = boundary_point(graph, q.x);
    return SpacePoint{snapped.lift + t, snapped.x};
}

SpacePoint flatten(const LipschitzGraph& graph, const SpacePoint& X, FlattenDirection dir) {
    const double lift = graph.phi[graph.grid().nearest_index(X.x)];
    if (dir == FlattenDirection::Inverse) return SpacePoint{X.t + lift, X.x};
    if (!(X.t > lift)) {
        std::ostringstream os;
        os << "flatten: point (" << X.t << ", ...) is not above the graph (phi = " << lift << ")";
        throw DomainError(os.str());
    }
    return SpacePoint{X.t - lift, X.x};
}

bool domain_region_contains(const LipschitzGraph& graph, double beta, double c, const BoundaryPoint& q,
                            const SpacePoint& X) {
    if (!(beta > 0.0 && beta <= 1.0)) throw ParameterError("domain region requires beta in (0,1]");
    if (!(c > 0.0)) throw ParameterError("domain region requires c > 0");
    const double d = graph_distance(graph, X);
    const double reach = d <= 1.0 ? (1.0 + c) * std::pow(d, beta) : (1.0 + c) * d;
    return space_distance(graph.grid(), X, q.point()) < reach;
}

InclusionReport region_inclusion_check(const LipschitzGraph& graph, double beta, double c, std::size_t samples,
                                       std::uint64_t seed, double target_scale) {
    if (samples < 1) throw ParameterError("region_inclusion_check requires samples >= 1");
    if (!(target_scale > 0.0)) throw ParameterError("region_inclusion_check requires target_scale > 0");
    const Grid& g = graph.grid();
    const long n = static_cast<long>(g.points_per_axis());
    const double reach = 0.25 * g.extent;
    const long kmax = static_cast<long>(std::floor(reach / g.spacing()));
    const ApproachRegionSpec target{beta, target_scale * (1.0 + c), 1.0};
    Rng rng(seed, 0x1c);
    InclusionReport rep;
    const std::size_t cap = 400 * samples;
    while (rep.accepted < samples && rep.attempts < cap) {
        ++rep.attempts;
        const std::size_t i0 = rng.below(g.size());
        const BoundaryPoint q{g.coord(i0), graph.phi[i0]};
        std::size_t j;
        if (g.dim == 1) {
            j = static_cast<std::size_t>(wrap(static_cast<long>(i0) + static_cast<long>(rng.below(2 * kmax + 1)) - kmax, n));
        } else {
            const long a = static_cast<long>(i0) / n + static_cast<long>(rng.below(2 * kmax + 1)) - kmax;
            const long b = static_cast<long>(i0) % n + static_cast<long>(rng.below(2 * kmax + 1)) - kmax;
            j = g.flat_index(wrap(a, n), wrap(b, n));
        }
        const SpacePoint X{q.lift + rng.uniform(-reach, reach), g.coord(j)};
        if (!(X.t > graph.phi[j])) continue;
        if (!(space_distance(g, X, q.point()) < reach)) continue;
        if (!domain_region_contains(graph, beta, c, q, X)) continue;
        ++rep.accepted;
        const SpacePoint F = flatten(graph, X, FlattenDirection::Forward);
        if (!region_contains(target, q.x, F.t, F.x, &g)) {
            ++rep.violations;
            if (rep.witnesses.size() < 8) rep.witnesses.emplace_back(q, X);
        }
    }
    return rep;
}

GridFunction surface_density(const LipschitzGraph& graph) {
    const Grid& g = graph.grid();
    const long n = static_cast<long>(g.points_per_axis());
    const double h2 = 2.0 * g.spacing();
    std::vector<double> out(g.size());
    if (g.dim == 1) {
        for (long i = 0; i < n; ++i) {
            const double d = (graph.phi[wrap(i + 1, n)] - graph.phi[wrap(i - 1, n)]) / h2;
            out[i] = std::sqrt(1.0 + d * d);
        }
    } else {
        for (long i = 0; i < n; ++i) {
            for (long j = 0; j < n; ++j) {
                const double dx = (graph.phi[g.flat_index(wrap(i + 1, n), j)] - graph.phi[g.flat_index(wrap(i - 1, n), j)]) / h2;
                const double dy = (graph.phi[g.flat_index(i, wrap(j + 1, n))] - graph.phi[g.flat_index(i, wrap(j - 1, n))]) / h2;
                out[g.flat_index(i, j)] = std::sqrt(1.0 + dx * dx + dy * dy);
            }
        }
    }
    return GridFunction(g, std::move(out));
}

double surface_measure(const LipschitzGraph& graph, const std::vector<std::size_t>& indices) {
    const GridFunction rho = surface_density(graph);
    double s = 0.0;
    for (std::size_t i : indices) s += rho[i];
    return s * graph.grid().cell_volume();
}

std::vector<std::size_t> surface_ball(const LipschitzGraph& graph, const BoundaryPoint& q, double r) {
    const Grid& g = graph.grid();
    if (!(r >= 4.0 * g.spacing() && r <= 0.25 * g.extent)) {
        std::ostringstream os;
        os << "surface ball radius " << r << " outside [4h, L/4]";
        throw ParameterError(os.str());
    }
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < g.size(); ++i) {
        if (space_distance(g, SpacePoint{graph.phi[i], g.coord(i)}, q.point()) < r) idx.push_back(i);
    }
    return idx;
}

double surface_ball_measure(const LipschitzGraph& graph, const BoundaryPoint& q, double r) {
    return surface_measure(graph, surface_ball(graph, q, r));
}

double surface_lp_norm(const LipschitzGraph& graph, const GridFunction& f, double p) {
    if (!(f.grid() == graph.grid())) throw ParameterError("surface_lp_norm: grid mismatch");
    if (!(p >= 1.0)) throw ParameterError("surface_lp_norm requires p >= 1");
    const GridFunction rho = surface_density(graph);
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) s += std::pow(std::abs(f[i]), p) * rho[i];
    return std::pow(s * graph.grid().cell_volume(), 1.0 / p);
}

double boundary_seminorm(const LipschitzGraph& graph, const GridFunction& f, double s, double p) {
    if (!(f.grid() == graph.grid())) throw ParameterError("boundary_seminorm: grid mismatch");
    if (!(s >= 0.0 && s < 1.0)) throw ParameterError("boundary_seminorm requires s in [0,1)");
    if (!(p >= 1.0)) throw ParameterError("boundary_seminorm requires p >= 1");
    const double lp = std::pow(lp_norm(f, p), p);
    const double semi = s > 0.0 ? std::pow(slobodeckij_seminorm(f, s, p), p) : 0.0;
    return std::pow(lp + semi, 1.0 / p);
}

GridFunction boundary_tangential_max(const LipschitzGraph& graph, const GridFunction& f, double beta, double c,
                                     const BoundaryMaxParams& params) {
    if (!(f.grid() == graph.grid())) throw ParameterError("boundary_tangential_max: grid mismatch");
    if (!(c > 0.0)) throw ParameterError("boundary_tangential_max requires c > 0");
    const double p0 = params.p0 > 0.0 ? params.p0 : 0.5 * (1.0 + params.p);
    const std::vector<double> heights = params.heights.empty() ? default_heights(f.grid()) : params.heights;
    const HalfSpaceField w = annuli_surrogate(f, heights, params.alpha_L, p0, params.J);
    return tangential_max(w, ApproachRegionSpec{beta, 1.0 + c, 1.0});
}

} // namespace fatou
