#include "fatou/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "fatou/error.hpp"
#include "fatou/parallel.hpp"

namespace fatou {

double CantorMeasure::weight() const { return std::ldexp(1.0, -depth); }

double CantorMeasure::cdf(double x) const {
    if (x <= 0.0) return 0.0;
    const auto it = std::upper_bound(left.begin(), left.end(), x);
    if (it == left.begin()) return 0.0;
    const std::size_t k = static_cast<std::size_t>(it - left.begin()) - 1;
    const double frac = std::min(1.0, (x - left[k]) / length);
    return weight() * (static_cast<double>(k) + frac);
}

double CantorMeasure::ball_mass(double x, double r) const { return cdf(x + r) - cdf(x - r); }

CantorMeasure cantor_measure(double s, int depth) {
    if (!(s > 0.0 && s <= 1.0)) throw ParameterError("cantor_measure requires s in (0,1]");
    if (depth < 0 || depth > 24) throw ParameterError("cantor_measure requires 0 <= depth <= 24");
    CantorMeasure mu;
    mu.s = s;
    mu.ratio = std::exp2(-1.0 / s);
    mu.depth = depth;
    mu.left = {0.0};
    double len = 1.0;
    for (int d = 0; d < depth; ++d) {
        std::vector<double> next;
        next.reserve(mu.left.size() * 2);
        const double child = mu.ratio * len;
        for (double a : mu.left) {
            next.push_back(a);
            next.push_back(a + len - child);
        }
        mu.left = std::move(next);
        len = child;
    }
    mu.length = len;
    return mu;
}

std::vector<double> frostman_radii(const CantorMeasure& mu, int per_octave) {
    if (per_octave < 1) throw ParameterError("frostman_radii requires per_octave >= 1");
    std::vector<double> r;
    const double lo = mu.length;
    const int steps = static_cast<int>(std::floor(std::log2(1.0 / lo) * per_octave + 1e-9));
    for (int i = 0; i <= steps; ++i) r.push_back(lo * std::exp2(static_cast<double>(i) / per_octave));
    if (r.back() < 1.0) r.push_back(1.0);
    return r;
}

double frostman_constant(const CantorMeasure& mu, const std::vector<double>& radii) {
    for (double r : radii) {
        if (!(r >= mu.length * (1.0 - 1e-12) && r <= 1.0 + 1e-12))
            throw ParameterError("frostman_constant radii must lie in [ratio^depth, 1]");
    }
    const long count = static_cast<long>(mu.left.size());
    double best = 0.0;
    const int threads = thread_count();
    for (double r : radii) {
        const double rs = std::pow(r, mu.s);
#pragma omp parallel for schedule(static) reduction(max : best) num_threads(threads)
        for (long k = 0; k < count; ++k) {
            const double a = mu.left[static_cast<std::size_t>(k)];
            const double b = a + mu.length;
            const double centres[7] = {a, b, 0.5 * (a + b), a - r, a + r, b - r, b + r};
            for (double x : centres) best = std::max(best, mu.ball_mass(x, r) / rs);
        }
    }
    return best;
}

double integrate_against(const GridFunction& f, const CantorMeasure& mu) {
    const Grid& g = f.grid();
    if (g.extent < 1.0) throw ParameterError("integrate_against: the measure lives on [0,1] and needs extent >= 1");
    double sum = 0.0;
    for (double a : mu.left) sum += f[g.nearest_index(Point{a + 0.5 * mu.length, 0.0})];
    return sum * mu.weight();
}

PointSet make_point_set(const Grid& grid, std::vector<Point> points) {
    for (const Point& p : points) {
        for (int a = 0; a < grid.dim; ++a) {
            if (!(p[a] >= 0.0 && p[a] < grid.extent)) throw ParameterError("point set coordinates must lie in [0, L)");
        }
    }
    return PointSet{grid, std::move(points)};
}

PointSet cantor_points(const Grid& grid, const CantorMeasure& mu) {
    std::vector<Point> pts;
    pts.reserve(mu.left.size());
    for (double a : mu.left) pts.push_back(Point{a + 0.5 * mu.length, 0.0});
    return make_point_set(grid, std::move(pts));
}

PointSet superlevel_set(const GridFunction& f, double lambda) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i] > lambda) pts.push_back(f.grid().coord(i));
    }
    return PointSet{f.grid(), std::move(pts)};
}

namespace {

std::size_t count_boxes(const PointSet& set, int m) {
    const std::size_t side = std::size_t{1} << m;
    const double w = set.grid.extent / static_cast<double>(side);
    std::vector<std::size_t> ids;
    ids.reserve(set.points.size());
    for (const Point& p : set.points) {
        std::size_t id = 0;
        for (int a = 0; a < set.grid.dim; ++a) {
            const auto b = static_cast<std::size_t>(std::clamp(std::floor(p[a] / w), 0.0, static_cast<double>(side - 1)));
            id = id * side + b;
        }
        ids.push_back(id);
    }
    std::sort(ids.begin(), ids.end());
    return static_cast<std::size_t>(std::unique(ids.begin(), ids.end()) - ids.begin());
}

} // namespace

BoxDimension box_dimension(const PointSet& set, int m_lo, int m_hi) {
    if (!(m_lo >= 0 && m_lo < m_hi && m_hi <= set.grid.levels)) {
        std::ostringstream os;
        os << "box_dimension window must satisfy 0 <= m_lo < m_hi <= " << set.grid.levels;
        throw ParameterError(os.str());
    }
    BoxDimension out;
    const int k = m_hi - m_lo + 1;
    out.counts.assign(static_cast<std::size_t>(k), 0);
    if (set.points.empty()) {
        out.empty = true;
        return out;
    }
#pragma omp parallel for schedule(dynamic) num_threads(thread_count())
    for (int i = 0; i < k; ++i) out.counts[static_cast<std::size_t>(i)] = count_boxes(set, m_lo + i);
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < k; ++i) {
        mx += m_lo + i;
        my += std::log2(static_cast<double>(out.counts[static_cast<std::size_t>(i)]));
    }
    mx /= k;
    my /= k;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < k; ++i) {
        const double dx = m_lo + i - mx;
        const double dy = std::log2(static_cast<double>(out.counts[static_cast<std::size_t>(i)])) - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    const double slope = sxy / sxx;
    out.slope = std::clamp(slope, 0.0, static_cast<double>(set.grid.dim));
    out.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return out;
}

double box_content(const PointSet& set, int m, double gamma) {
    if (m < 0 || m > set.grid.levels) throw ParameterError("box_content scale out of range");
    const double w = set.grid.extent * std::ldexp(1.0, -m);
    return static_cast<double>(set.points.empty() ? 0 : count_boxes(set, m)) * std::pow(w, gamma);
}

namespace {

void check_divergence_args(const HalfSpaceField& u, const Grid& ref, double eps, double t_min) {
    if (!(eps > 0.0)) throw ParameterError("divergence_set requires eps > 0");
    if (!(ref == u.grid())) throw ParameterError("divergence_set: reference and field grids differ");
    if (t_min < u.heights().back() * (1.0 - 1e-12)) {
        std::ostringstream os;
        os << "divergence_set: t_min = " << t_min << " is below the finest height " << u.heights().back();
        throw ParameterError(os.str());
    }
}

PointSet threshold(const HalfSpaceField& u, const ApproachRegionSpec& spec, double t_min, double eps,
                   const std::vector<double>& ref, const std::vector<char>& forced) {
    const RegionExtrema e = region_extrema(u, spec, t_min * (1.0 + 1e-12));
    const Grid& g = u.grid();
    std::vector<Point> pts;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double osc = std::max(e.max[i] - ref[i], ref[i] - e.min[i]);
        if ((!forced.empty() && forced[i]) || osc > eps) pts.push_back(g.coord(i));
    }
    return PointSet{g, std::move(pts)};
}

} // namespace

PointSet divergence_set(const HalfSpaceField& u, const GridFunction& f_ref, const ApproachRegionSpec& spec,
                        double eps, double t_min) {
    check_divergence_args(u, f_ref.grid(), eps, t_min);
    const std::vector<double> ref(f_ref.samples().begin(), f_ref.samples().end());
    return threshold(u, spec, t_min, eps, ref, {});
}

PointSet divergence_set(const HalfSpaceField& u, const BesselFunction& bf, const std::vector<double>& radii,
                        const ApproachRegionSpec& spec, double eps, double t_min) {
    check_divergence_args(u, bf.f.grid(), eps, t_min);
    const Grid& g = u.grid();
    const long size = static_cast<long>(g.size());
    std::vector<double> ref(g.size(), 0.0);
    std::vector<char> forced(g.size(), 0);
#pragma omp parallel for schedule(dynamic, 64) num_threads(thread_count())
    for (long i = 0; i < size; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const Representative r = representative_value(bf, g.coord(k), radii);
        ref[k] = r.value;
        forced[k] = r.diverged ? 1 : 0;
    }
    return threshold(u, spec, t_min, eps, ref, forced);
}

} // namespace fatou
