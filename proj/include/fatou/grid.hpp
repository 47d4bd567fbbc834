#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace fatou {

/// Coordinates on the torus. Only the first `Grid::dim` entries are used.
using Point = std::array<double, 2>;

/// Uniform periodic grid on the torus [0, extent)^dim with 2^levels points per axis.
struct Grid {
    int dim = 1;
    int levels = 2;
    double extent = 1.0;

    std::size_t points_per_axis() const { return std::size_t{1} << levels; }
    std::size_t size() const {
        return dim == 1 ? points_per_axis() : points_per_axis() * points_per_axis();
    }
    double spacing() const { return extent / static_cast<double>(points_per_axis()); }
    /// h^dim, the quadrature weight of one sample.
    double cell_volume() const;

    /// Coordinates of sample `index` (row-major for dim = 2, first axis slowest).
    Point coord(std::size_t index) const;
    std::size_t flat_index(std::size_t i, std::size_t j = 0) const {
        return dim == 1 ? i : i * points_per_axis() + j;
    }
    /// Index of the sample nearest to `p` in the torus metric.
    std::size_t nearest_index(const Point& p) const;

    /// Minimum-image displacement b - a along one axis.
    double wrap_delta(double a, double b) const;
    double distance(const Point& a, const Point& b) const;

    bool operator==(const Grid& other) const = default;
};

/// Validating constructor: dim in {1,2}; 2 <= levels <= 24 (dim 1) or 12 (dim 2); extent > 0.
Grid make_grid(int dim, int levels, double extent);

/// Samples of a real function on a Grid. Immutable once built.
class GridFunction {
public:
    GridFunction() = default;
    GridFunction(Grid grid, std::vector<double> samples);

    static GridFunction constant(const Grid& grid, double value);
    static GridFunction sample(const Grid& grid, const std::function<double(const Point&)>& fn);

    const Grid& grid() const { return grid_; }
    std::span<const double> samples() const { return samples_; }
    std::size_t size() const { return samples_.size(); }
    double operator[](std::size_t i) const { return samples_[i]; }

    /// Moves the sample buffer out; the function is left empty.
    std::vector<double> release() && { return std::move(samples_); }

private:
    Grid grid_{};
    std::vector<double> samples_;
};

/// Discrete L^p norm (h^dim sum |f|^p)^(1/p); p = infinity gives the max norm.
double lp_norm(const GridFunction& f, double p);

/// (mean over grid points with |x - center| < radius of |f|^q)^(1/q), torus metric.
/// An empty ball falls back to the nearest grid point.
double ball_average(const GridFunction& f, const Point& center, double radius, double q = 1.0);

/// Signed mean of f over the same grid-point ball (no absolute value).
double ball_mean(const GridFunction& f, const Point& center, double radius);

/// ball_average evaluated at every grid point for one radius. O(N) in dim 1.
GridFunction ball_average_field(const GridFunction& f, double radius, double q = 1.0);

/// Circular convolution scaled by h^dim, approximating the integral of f(x - y) k(y).
GridFunction fft_convolve(const GridFunction& f, const GridFunction& k);

/// Elementwise helpers used across modules.
GridFunction map(const GridFunction& f, const std::function<double(double)>& fn);
GridFunction add(const GridFunction& a, const GridFunction& b);
GridFunction scale(const GridFunction& a, double factor);
/// Translation by whole grid cells: result[i] = f[i + shift] (wrapping).
GridFunction shift_samples(const GridFunction& f, long shift_x, long shift_y = 0);

/// Largest m >= 0 with |(m h, dy h)| < radius, evaluated with the same floating-point
/// predicate as Grid::distance; -1 when the row dy misses the ball.
long ball_chord(const Grid& grid, double radius, long dy);

/// Integer offsets (dx, dy) of the grid points strictly inside a radius-r ball
/// centred on a grid point, deduplicated on the torus.
std::vector<std::array<long, 2>> ball_offsets(const Grid& grid, double radius);

} // namespace fatou
