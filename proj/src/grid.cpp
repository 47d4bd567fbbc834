#include "fatou/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fatou/error.hpp"
#include "fatou/parallel.hpp"
#include "fatou/spectral.hpp"

namespace fatou {

double Grid::cell_volume() const {
    const double h = spacing();
    return dim == 1 ? h : h * h;
}

Point Grid::coord(std::size_t index) const {
    const double h = spacing();
    if (dim == 1) return {static_cast<double>(index) * h, 0.0};
    const std::size_t n = points_per_axis();
    return {static_cast<double>(index / n) * h, static_cast<double>(index % n) * h};
}

std::size_t Grid::nearest_index(const Point& p) const {
    const auto n = static_cast<long>(points_per_axis());
    const double h = spacing();
    auto axis = [&](double x) {
        long i = std::lround(x / h) % n;
        if (i < 0) i += n;
        return static_cast<std::size_t>(i);
    };
    if (dim == 1) return axis(p[0]);
    return flat_index(axis(p[0]), axis(p[1]));
}

double Grid::wrap_delta(double a, double b) const {
    double d = std::fmod(b - a, extent);
    if (d > 0.5 * extent) d -= extent;
    if (d < -0.5 * extent) d += extent;
    return d;
}

double Grid::distance(const Point& a, const Point& b) const {
    const double dx = wrap_delta(a[0], b[0]);
    if (dim == 1) return std::abs(dx);
    const double dy = wrap_delta(a[1], b[1]);
    return std::hypot(dx, dy);
}

Grid make_grid(int dim, int levels, double extent) {
    if (dim != 1 && dim != 2) throw ParameterError("grid dim must be 1 or 2");
    const int max_levels = dim == 1 ? 24 : 12;
    if (levels < 2 || levels > max_levels) {
        std::ostringstream os;
        os << "grid levels must lie in [2, " << max_levels << "] for dim " << dim << ", got "
           << levels;
        throw ParameterError(os.str());
    }
    if (!(extent > 0.0) || !std::isfinite(extent)) throw ParameterError("grid extent must be > 0");
    return Grid{dim, levels, extent};
}

GridFunction::GridFunction(Grid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size()) {
        std::ostringstream os;
        os << "sample count " << samples_.size() << " does not match grid size " << grid_.size();
        throw ParameterError(os.str());
    }
    for (double v : samples_) {
        if (!std::isfinite(v)) throw ParameterError("grid function samples must be finite");
    }
}

GridFunction GridFunction::constant(const Grid& grid, double value) {
    return GridFunction(grid, std::vector<double>(grid.size(), value));
}

GridFunction GridFunction::sample(const Grid& grid,
                                  const std::function<double(const Point&)>& fn) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(grid.coord(i));
    return GridFunction(grid, std::move(v));
}

double lp_norm(const GridFunction& f, double p) {
    if (std::isinf(p) && p > 0) {
        double m = 0.0;
        for (double v : f.samples()) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) throw ParameterError("lp_norm requires p >= 1");
    long double acc = 0.0L;
    if (p == 1.0) {
        for (double v : f.samples()) acc += std::abs(v);
        return static_cast<double>(acc) * f.grid().cell_volume();
    }
    if (p == 2.0) {
        for (double v : f.samples()) acc += static_cast<long double>(v) * v;
    } else {
        for (double v : f.samples()) acc += std::pow(static_cast<long double>(std::abs(v)), p);
    }
    return std::pow(static_cast<double>(acc) * f.grid().cell_volume(), 1.0 / p);
}

namespace {

double power(double v, double q) {
    const double a = std::abs(v);
    if (q == 1.0) return a;
    if (q == 2.0) return a * a;
    return std::pow(a, q);
}

double root(double mean, double q) {
    if (q == 1.0) return mean;
    if (q == 2.0) return std::sqrt(mean);
    return std::pow(mean, 1.0 / q);
}

// Minimum-image representative of an axis offset in [-(n/2), n/2).
long min_image(long d, long n) {
    d %= n;
    if (d < 0) d += n;
    if (d >= n / 2 + (n % 2)) d -= n;
    return d;
}

} // namespace

long ball_chord(const Grid& grid, double radius, long dy) {
    const double h = grid.spacing();
    const double y = static_cast<double>(dy) * h;
    auto inside = [&](long m) { return std::hypot(static_cast<double>(m) * h, y) < radius; };
    if (!inside(0)) return -1;
    const double rr = radius / h;
    const double rem = rr * rr - static_cast<double>(dy) * static_cast<double>(dy);
    long m = rem > 0.0 ? static_cast<long>(std::floor(std::sqrt(rem))) : 0;
    while (m > 0 && !inside(m)) --m;
    while (inside(m + 1)) ++m;
    return m;
}

std::vector<std::array<long, 2>> ball_offsets(const Grid& grid, double radius) {
    const long n = static_cast<long>(grid.points_per_axis());
    std::vector<std::array<long, 2>> out;
    const long rows = grid.dim == 1 ? 0 : n / 2;
    for (long d0 = -rows; d0 < (grid.dim == 1 ? 1 : n - n / 2); ++d0) {
        const long m = ball_chord(grid, radius, d0);
        if (m < 0) continue;
        const long lo = std::max(-m, -n / 2);
        const long hi = std::min(m, n - n / 2 - 1);
        for (long d1 = lo; d1 <= hi; ++d1) {
            if (grid.dim == 1) {
                out.push_back({d1, 0});
            } else {
                out.push_back({d0, d1});
            }
        }
    }
    return out;
}

double ball_average(const GridFunction& f, const Point& center, double radius, double q) {
    if (!(q >= 1.0)) throw ParameterError("ball_average requires q >= 1");
    if (!(radius > 0.0)) throw ParameterError("ball_average requires radius > 0");
    const Grid& g = f.grid();
    const long n = static_cast<long>(g.points_per_axis());
    const double h = g.spacing();
    auto axis_range = [&](double c) {
        long lo = static_cast<long>(std::floor((c - radius) / h));
        long hi = static_cast<long>(std::ceil((c + radius) / h));
        if (hi - lo + 1 > n) hi = lo + n - 1;
        return std::pair{lo, hi};
    };
    long double acc = 0.0L;
    std::size_t count = 0;
    const auto [lo0, hi0] = axis_range(center[0]);
    if (g.dim == 1) {
        for (long i = lo0; i <= hi0; ++i) {
            const long w = ((i % n) + n) % n;
            if (g.distance(center, g.coord(static_cast<std::size_t>(w))) < radius) {
                acc += power(f[static_cast<std::size_t>(w)], q);
                ++count;
            }
        }
    } else {
        const auto [lo1, hi1] = axis_range(center[1]);
        for (long i = lo0; i <= hi0; ++i) {
            const long wi = ((i % n) + n) % n;
            for (long j = lo1; j <= hi1; ++j) {
                const long wj = ((j % n) + n) % n;
                const std::size_t idx =
                    g.flat_index(static_cast<std::size_t>(wi), static_cast<std::size_t>(wj));
                if (g.distance(center, g.coord(idx)) < radius) {
                    acc += power(f[idx], q);
                    ++count;
                }
            }
        }
    }
    if (count == 0) return std::abs(f[g.nearest_index(center)]);
    return root(static_cast<double>(acc / static_cast<long double>(count)), q);
}

double ball_mean(const GridFunction& f, const Point& center, double radius) {
    if (!(radius > 0.0)) throw ParameterError("ball_mean requires radius > 0");
    const Grid& g = f.grid();
    const long n = static_cast<long>(g.points_per_axis());
    const double h = g.spacing();
    const long lo0 = static_cast<long>(std::floor((center[0] - radius) / h));
    const long hi0 = std::min(static_cast<long>(std::ceil((center[0] + radius) / h)), lo0 + n - 1);
    long lo1 = 0;
    long hi1 = 0;
    if (g.dim == 2) {
        lo1 = static_cast<long>(std::floor((center[1] - radius) / h));
        hi1 = std::min(static_cast<long>(std::ceil((center[1] + radius) / h)), lo1 + n - 1);
    }
    long double acc = 0.0L;
    std::size_t count = 0;
    for (long i = lo0; i <= hi0; ++i) {
        const auto wi = static_cast<std::size_t>(((i % n) + n) % n);
        for (long j = lo1; j <= hi1; ++j) {
            const auto wj = static_cast<std::size_t>(((j % n) + n) % n);
            const std::size_t idx = g.flat_index(wi, wj);
            if (g.distance(center, g.coord(idx)) < radius) {
                acc += f[idx];
                ++count;
            }
        }
    }
    if (count == 0) return f[g.nearest_index(center)];
    return static_cast<double>(acc / static_cast<long double>(count));
}

namespace {

// Prefix sums of one periodic row; range_sum(a, b) sums indices a..b (inclusive, wrapping).
class RowPrefix {
public:
    explicit RowPrefix(std::span<const double> row, double q) : prefix_(row.size() + 1, 0.0L) {
        for (std::size_t i = 0; i < row.size(); ++i) prefix_[i + 1] = prefix_[i] + power(row[i], q);
    }
    long double total() const { return prefix_.back(); }
    // Sum over the 2m+1 wrapped indices centred at c; m < n/2 assumed.
    long double window(long c, long m) const {
        const long n = static_cast<long>(prefix_.size()) - 1;
        long a = c - m;
        long b = c + m;
        if (a < 0) return prefix_[static_cast<std::size_t>(b + 1)] +
                          (prefix_[static_cast<std::size_t>(n)] - prefix_[static_cast<std::size_t>(a + n)]);
        if (b >= n) return (prefix_[static_cast<std::size_t>(n)] - prefix_[static_cast<std::size_t>(a)]) +
                           prefix_[static_cast<std::size_t>(b - n + 1)];
        return prefix_[static_cast<std::size_t>(b + 1)] - prefix_[static_cast<std::size_t>(a)];
    }

private:
    std::vector<long double> prefix_;
};

} // namespace

GridFunction ball_average_field(const GridFunction& f, double radius, double q) {
    if (!(q >= 1.0)) throw ParameterError("ball_average_field requires q >= 1");
    if (!(radius > 0.0)) throw ParameterError("ball_average_field requires radius > 0");
    const Grid& g = f.grid();
    const long n = static_cast<long>(g.points_per_axis());
    std::vector<double> out(g.size());
    if (g.dim == 1) {
        RowPrefix row(f.samples(), q);
        const long m = ball_chord(g, radius, 0);
        const bool full = 2 * m + 1 >= n;
        const long count = full ? n : 2 * m + 1;
        for (long i = 0; i < n; ++i) {
            const long double s = full ? row.total() : row.window(i, m);
            out[static_cast<std::size_t>(i)] =
                root(static_cast<double>(s / static_cast<long double>(count)), q);
        }
        return GridFunction(g, std::move(out));
    }
    std::vector<RowPrefix> rows;
    rows.reserve(static_cast<std::size_t>(n));
    for (long r = 0; r < n; ++r) {
        rows.emplace_back(f.samples().subspan(static_cast<std::size_t>(r * n),
                                              static_cast<std::size_t>(n)),
                          q);
    }
    // Chord half-width per minimum-image row offset; -1 marks rows outside the ball.
    std::vector<long> chord(static_cast<std::size_t>(n), -1);
    long count = 0;
    for (long d = 0; d < n; ++d) {
        const long m = ball_chord(g, radius, min_image(d, n));
        if (m < 0) continue;
        chord[static_cast<std::size_t>(d)] = m;
        count += (2 * m + 1 >= n) ? n : 2 * m + 1;
    }
    const int threads = thread_count();
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long i = 0; i < n; ++i) {
        for (long j = 0; j < n; ++j) {
            long double s = 0.0L;
            for (long d = 0; d < n; ++d) {
                const long m = chord[static_cast<std::size_t>(d)];
                if (m < 0) continue;
                const RowPrefix& row = rows[static_cast<std::size_t>((i + d) % n)];
                s += (2 * m + 1 >= n) ? row.total() : row.window(j, m);
            }
            out[static_cast<std::size_t>(i * n + j)] =
                root(static_cast<double>(s / static_cast<long double>(count)), q);
        }
    }
    return GridFunction(g, std::move(out));
}

GridFunction fft_convolve(const GridFunction& f, const GridFunction& k) {
    if (!(f.grid() == k.grid())) throw ParameterError("fft_convolve: grid mismatch");
    spectral::Spectrum sf = spectral::forward(f);
    const spectral::Spectrum sk = spectral::forward(k);
    const double w = f.grid().cell_volume();
    for (std::size_t i = 0; i < sf.coeffs.size(); ++i) sf.coeffs[i] *= sk.coeffs[i] * w;
    return spectral::inverse(sf);
}

GridFunction map(const GridFunction& f, const std::function<double(double)>& fn) {
    std::vector<double> v(f.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = fn(f[i]);
    return GridFunction(f.grid(), std::move(v));
}

GridFunction add(const GridFunction& a, const GridFunction& b) {
    if (!(a.grid() == b.grid())) throw ParameterError("add: grid mismatch");
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] + b[i];
    return GridFunction(a.grid(), std::move(v));
}

GridFunction scale(const GridFunction& a, double factor) {
    return map(a, [factor](double v) { return v * factor; });
}

GridFunction shift_samples(const GridFunction& f, long shift_x, long shift_y) {
    const Grid& g = f.grid();
    const long n = static_cast<long>(g.points_per_axis());
    std::vector<double> v(f.size());
    if (g.dim == 1) {
        for (long i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = f[static_cast<std::size_t>(((i + shift_x) % n + n) % n)];
    } else {
        for (long i = 0; i < n; ++i) {
            for (long j = 0; j < n; ++j) {
                const long si = ((i + shift_x) % n + n) % n;
                const long sj = ((j + shift_y) % n + n) % n;
                v[static_cast<std::size_t>(i * n + j)] = f[static_cast<std::size_t>(si * n + sj)];
            }
        }
    }
    return GridFunction(g, std::move(v));
}

} // namespace fatou
