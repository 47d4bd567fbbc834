#include "fatou/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <sstream>

#include "fatou/error.hpp"
#include "fatou/parallel.hpp"

namespace fatou {

namespace {

struct SliceScan {
    std::size_t k;
    double radius;
    double weight;
};

long min_image(long d, long n) {
    d %= n;
    if (d < 0) d += n;
    if (d >= n / 2 + (n % 2)) d -= n;
    return d;
}

// dst[i] = max of src over the circular window [i - m, i + m]; m >= 0, 2m + 1 < n.
void window_max(const double* src, long n, long m, double* dst) {
    if (2 * m + 1 >= n) {
        const double g = *std::max_element(src, src + n);
        std::fill(dst, dst + n, g);
        return;
    }
    std::deque<long> dq; // positions in the extended index range [-m, n - 1 + m]
    auto at = [&](long p) { return src[((p % n) + n) % n]; };
    for (long p = -m; p < n + m; ++p) {
        const double v = at(p);
        while (!dq.empty() && at(dq.back()) <= v) dq.pop_back();
        dq.push_back(p);
        const long centre = p - m;
        if (centre >= 0) {
            while (dq.front() < centre - m) dq.pop_front();
            dst[centre] = at(dq.front());
        }
    }
}

enum class Sample { Abs, Signed, Negated };

std::vector<double> transform_samples(const GridFunction& f, Sample mode) {
    std::vector<double> a(f.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = mode == Sample::Abs ? std::abs(f[i]) : mode == Sample::Signed ? f[i] : -f[i];
    }
    return a;
}

GridFunction region_max(const HalfSpaceField& u, const std::vector<SliceScan>& scans, Sample mode = Sample::Abs) {
    const Grid& g = u.grid();
    const long n = static_cast<long>(g.points_per_axis());
    std::vector<double> out(g.size(), mode == Sample::Abs ? 0.0 : -INFINITY);
    std::vector<double> buf(g.size());
    for (const SliceScan& s : scans) {
        const std::vector<double> a = transform_samples(u.slice(s.k), mode);
        if (g.dim == 1) {
            const long m = ball_chord(g, s.radius, 0);
            window_max(a.data(), n, m, buf.data());
            for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], s.weight * buf[i]);
            continue;
        }
        // Chord half-width per minimum-image row offset.
        std::map<long, std::vector<long>> rows_by_width;
        for (long d = 0; d < n; ++d) {
            const long m = ball_chord(g, s.radius, min_image(d, n));
            if (m >= 0) rows_by_width[m].push_back(d);
        }
        std::fill(buf.begin(), buf.end(), -INFINITY);
        std::vector<double> rowmax(g.size());
        for (const auto& [m, offsets] : rows_by_width) {
            for (long i = 0; i < n; ++i) window_max(a.data() + i * n, n, m, rowmax.data() + i * n);
            const int threads = thread_count();
#pragma omp parallel for schedule(static) num_threads(threads)
            for (long i = 0; i < n; ++i) {
                for (long d : offsets) {
                    const double* src = rowmax.data() + ((i + d) % n) * n;
                    double* dst = buf.data() + i * n;
                    for (long j = 0; j < n; ++j) dst[j] = std::max(dst[j], src[j]);
                }
            }
        }
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], s.weight * buf[i]);
    }
    return GridFunction(g, std::move(out));
}

// Witness per x0 by exhaustive scan in (k, i) order; ties keep the earliest.
std::vector<Witness> region_argmax(const HalfSpaceField& u, const std::vector<SliceScan>& scans) {
    const Grid& g = u.grid();
    std::vector<Witness> w(g.size());
    const long size = static_cast<long>(g.size());
    const int threads = thread_count();
#pragma omp parallel for schedule(dynamic, 64) num_threads(threads)
    for (long x0 = 0; x0 < size; ++x0) {
        const Point p0 = g.coord(static_cast<std::size_t>(x0));
        double best = -1.0;
        Witness bw;
        for (const SliceScan& s : scans) {
            const GridFunction& sl = u.slice(s.k);
            for (std::size_t i = 0; i < g.size(); ++i) {
                if (!(g.distance(p0, g.coord(i)) < s.radius)) continue;
                const double v = s.weight * std::abs(sl[i]);
                if (v > best || (v == best && (s.k < bw.k || (s.k == bw.k && i < bw.x)))) {
                    best = v;
                    bw = Witness{s.k, i};
                }
            }
        }
        w[static_cast<std::size_t>(x0)] = bw;
    }
    return w;
}

} // namespace

void validate(const ApproachRegionSpec& spec) {
    if (!(spec.beta > 0.0 && spec.beta <= 1.0)) throw ParameterError("approach region beta must lie in (0,1]");
    if (!(spec.aperture > 0.0)) throw ParameterError("approach region aperture must be > 0");
    if (!(spec.t_max > 0.0)) throw ParameterError("approach region t_max must be > 0");
    if (spec.flavor == Flavor::GraphDomain && !(spec.c > 0.0)) throw ParameterError("graph-domain region needs c > 0");
}

double region_radius(const ApproachRegionSpec& spec, double t) {
    return t <= 1.0 ? spec.aperture * std::pow(t, spec.beta) : spec.aperture * t;
}

bool region_contains(const ApproachRegionSpec& spec, const Point& x0, double t, const Point& x, const Grid* torus) {
    validate(spec);
    if (!(t > 0.0)) throw ParameterError("region_contains requires t > 0");
    const double d = torus ? torus->distance(x0, x) : std::hypot(x[0] - x0[0], x[1] - x0[1]);
    return d < region_radius(spec, t);
}

GridFunction tangential_max(const HalfSpaceField& u, const ApproachRegionSpec& spec, std::vector<Witness>* argmax) {
    validate(spec);
    std::vector<SliceScan> scans;
    for (std::size_t k = 0; k < u.levels(); ++k) {
        const double t = u.heights()[k];
        if (t <= spec.t_max) scans.push_back({k, region_radius(spec, t), 1.0});
    }
    if (scans.size() < 2) {
        std::ostringstream os;
        os << "tangential_max needs at least 2 heights <= t_max = " << spec.t_max << ", field has " << scans.size();
        throw CoverageError(os.str());
    }
    if (argmax) *argmax = region_argmax(u, scans);
    return region_max(u, scans);
}

RegionExtrema region_extrema(const HalfSpaceField& u, const ApproachRegionSpec& spec, double t_upper) {
    validate(spec);
    std::vector<SliceScan> scans;
    for (std::size_t k = 0; k < u.levels(); ++k) {
        const double t = u.heights()[k];
        if (t <= t_upper) scans.push_back({k, region_radius(spec, t), 1.0});
    }
    if (scans.empty()) throw CoverageError("region_extrema: no height at or below the requested cap");
    GridFunction hi = region_max(u, scans, Sample::Signed);
    GridFunction lo = map(region_max(u, scans, Sample::Negated), [](double v) { return -v; });
    return RegionExtrema{std::move(hi), std::move(lo)};
}

GridFunction mitigated_max(const HalfSpaceField& u, double p, double beta, double aperture) {
    if (!(p > 0.0)) throw ParameterError("mitigated_max requires p > 0");
    const ApproachRegionSpec spec{beta, aperture, 1.0};
    validate(spec);
    const int n = u.grid().dim;
    std::vector<SliceScan> scans;
    for (std::size_t k = 0; k < u.levels(); ++k) {
        const double t = u.heights()[k];
        if (t <= 1.0) scans.push_back({k, region_radius(spec, t), std::pow(t, n * (1.0 - beta) / p)});
    }
    if (scans.empty()) throw CoverageError("mitigated_max: no height in (0, 1]");
    return region_max(u, scans);
}

GridFunction dilated_mitigated_max(const HalfSpaceField& v, double p, double beta, int j, double aperture) {
    if (!(p > 0.0)) throw ParameterError("dilated_mitigated_max requires p > 0");
    if (j < 0) throw ParameterError("dilated_mitigated_max requires j >= 0");
    const ApproachRegionSpec spec{beta, aperture, 1.0};
    validate(spec);
    if (beta == 1.0 && j > 0) throw ParameterError("dilated_mitigated_max: beta = 1 admits only j = 0");
    const int n = v.grid().dim;
    const double cutoff = beta < 1.0 ? std::pow(2.0, -j / (1.0 - beta)) : 1.0;
    const double scale = std::pow(2.0, n * j / p);
    std::vector<SliceScan> scans;
    for (std::size_t k = 0; k < v.levels(); ++k) {
        const double t = std::ldexp(v.heights()[k], -j);
        const bool inside = beta < 1.0 ? t < cutoff : t <= 1.0;
        if (inside) scans.push_back({k, region_radius(spec, t), scale * std::pow(t, n * (1.0 - beta) / p)});
    }
    if (scans.empty()) {
        std::ostringstream os;
        os << "dilated_mitigated_max: field has no height 2^j t with t < " << cutoff << " for j = " << j;
        throw CoverageError(os.str());
    }
    return region_max(v, scans);
}

std::vector<double> dyadic_radii(const Grid& grid) {
    std::vector<double> r;
    const double cap = 0.25 * grid.extent * (1.0 + 1e-12);
    for (double x = 4.0 * grid.spacing(); x <= cap; x *= 2.0) r.push_back(x);
    if (r.empty()) r.push_back(0.25 * grid.extent);
    return r;
}

GridFunction fractional_power_max(const GridFunction& f, double s, double alpha) {
    if (!(s >= 1.0)) throw ParameterError("fractional_power_max requires s >= 1");
    if (!(alpha >= 0.0 && alpha < f.grid().dim)) throw ParameterError("fractional_power_max requires 0 <= alpha < n");
    std::vector<double> out(f.size(), 0.0);
    for (double r : dyadic_radii(f.grid())) {
        const GridFunction a = ball_average_field(f, r, s);
        const double w = std::pow(r, alpha);
        for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::max(out[i], w * a[i]);
    }
    return GridFunction(f.grid(), std::move(out));
}

GridFunction hl_max(const GridFunction& f, double q) { return fractional_power_max(f, q, 0.0); }

CompositeParts composite_parts(const GridFunction& f, double p, double r, double beta, double alpha_L, int J,
                               const std::vector<double>& heights) {
    if (!(1.0 < r && r < p)) throw ParameterError("composite_max requires 1 < r < p");
    if (!(beta > 0.0 && beta < 1.0)) throw ParameterError("composite_max requires beta in (0,1)");
    // The dilated terms read w at heights 2^j t with t < 2^{-j/(1-beta)}; extend the ladder so every j is covered.
    const int needed = static_cast<int>(std::ceil(J * beta / (1.0 - beta))) + 2;
    const int K = std::max(static_cast<int>(heights.size()) - 1, needed);
    const HalfSpaceField w = annuli_surrogate(f, dyadic_heights(heights.front(), K), alpha_L, r, J);
    const HalfSpaceField u = poisson_extend(f, heights);
    CompositeParts parts;
    parts.tangential = tangential_max(u, ApproachRegionSpec{beta, 1.0, 1.0});
    parts.local = fractional_power_max(f, r, 0.0);
    std::vector<double> total(f.size(), 0.0);
    for (int j = 0; j <= J; ++j) {
        const double weight = std::pow(2.0, -alpha_L * j);
        GridFunction d = dilated_mitigated_max(w, p, beta, j);
        for (std::size_t i = 0; i < total.size(); ++i)
            total[i] += weight * (d[i] + parts.tangential[i] + parts.local[i]);
        parts.dilated.push_back(std::move(d));
    }
    parts.total = GridFunction(f.grid(), std::move(total));
    return parts;
}

GridFunction composite_max(const GridFunction& f, double p, double r, double beta, double alpha_L, int J) {
    return composite_parts(f, p, r, beta, alpha_L, J, default_heights(f.grid())).total;
}

} // namespace fatou
