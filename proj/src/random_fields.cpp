#include "fatou/random_fields.hpp"

#include <cmath>
#include <numbers>

#include "fatou/error.hpp"

namespace fatou {

namespace {
constexpr double kPi = std::numbers::pi;
}

GridFunction random_trig(const Grid& grid, Rng& rng, int max_mode, double decay) {
    const long n = static_cast<long>(grid.points_per_axis());
    if (max_mode < 0 || 2L * max_mode >= n) throw ParameterError("random_trig: max_mode must stay below Nyquist");
    struct Mode {
        int k0, k1;
        double a, b;
    };
    std::vector<Mode> modes;
    const int k1_max = grid.dim == 2 ? max_mode : 0;
    for (int k0 = 0; k0 <= max_mode; ++k0) {
        for (int k1 = -k1_max; k1 <= k1_max; ++k1) {
            if (k0 == 0 && k1 < 0) continue;
            const double amp = std::pow(1.0 + std::hypot(k0, k1), -decay);
            modes.push_back({k0, k1, amp * rng.normal(), (k0 == 0 && k1 == 0) ? 0.0 : amp * rng.normal()});
        }
    }
    const double L = grid.extent;
    return GridFunction::sample(grid, [&](const Point& x) {
        double s = 0.0;
        for (const Mode& m : modes) {
            const double ph = 2.0 * kPi * (m.k0 * x[0] + m.k1 * x[1]) / L;
            s += m.a * std::cos(ph) + m.b * std::sin(ph);
        }
        return s;
    });
}

GridFunction random_bumps(const Grid& grid, Rng& rng, int count, double w_min, double w_max, double background) {
    struct Bump {
        Point c;
        double w, a;
    };
    std::vector<Bump> bumps;
    for (int i = 0; i < count; ++i) {
        const Point c{rng.uniform(0.0, grid.extent), grid.dim == 2 ? rng.uniform(0.0, grid.extent) : 0.0};
        const double w = std::exp(rng.uniform(std::log(w_min), std::log(w_max)));
        const double a = 1.0 - rng.uniform();
        bumps.push_back({c, w, a});
    }
    return GridFunction::sample(grid, [&](const Point& x) {
        double s = background;
        for (const Bump& b : bumps) {
            const double d = grid.distance(b.c, x);
            s += b.a * std::exp(-0.5 * d * d / (b.w * b.w));
        }
        return s;
    });
}

GridFunction random_uniform(const Grid& grid, Rng& rng) {
    std::vector<double> v(grid.size());
    for (double& x : v) x = rng.uniform();
    return GridFunction(grid, std::move(v));
}

GridFunction unit_spike(const Grid& grid, const Point& x0, double p) {
    std::vector<double> v(grid.size(), 0.0);
    v[grid.nearest_index(x0)] = std::pow(grid.cell_volume(), -1.0 / p);
    return GridFunction(grid, std::move(v));
}

} // namespace fatou
