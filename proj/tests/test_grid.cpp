#include "doctest.h"

#include <cmath>
#include <numbers>

#include "fatou/error.hpp"
#include "fatou/grid.hpp"
#include "fatou/rng.hpp"
#include "fatou/spectral.hpp"

using namespace fatou;
constexpr double kPi = std::numbers::pi;

namespace {

GridFunction random_nonneg(const Grid& g, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(g.size());
    for (double& x : v) x = rng.uniform();
    return GridFunction(g, std::move(v));
}

// O(N^2) circular convolution oracle.
std::vector<double> direct_convolve(const GridFunction& f, const GridFunction& k) {
    const std::size_t n = f.size();
    const double h = f.grid().spacing();
    std::vector<double> out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        long double s = 0;
        for (std::size_t j = 0; j < n; ++j) s += f[(i + n - j) % n] * k[j];
        out[i] = static_cast<double>(s) * h;
    }
    return out;
}

} // namespace

TEST_CASE("make_grid") {
    const Grid g = make_grid(1, 3, 1.0);
    CHECK(g.points_per_axis() == 8);
    CHECK(g.spacing() == 0.125);
    const Grid g2 = make_grid(2, 2, 2.0);
    CHECK(g2.points_per_axis() == 4);
    CHECK(g2.spacing() == 0.5);
    CHECK(g2.size() == 16);
    CHECK_THROWS_AS(make_grid(1, 1, 1.0), ParameterError);
    CHECK_THROWS_AS(make_grid(3, 4, 1.0), ParameterError);
    CHECK_THROWS_AS(make_grid(2, 13, 1.0), ParameterError);
    CHECK_THROWS_AS(make_grid(1, 25, 1.0), ParameterError);
    CHECK_THROWS_AS(make_grid(1, 4, 0.0), ParameterError);
    CHECK_NOTHROW(make_grid(1, 24, 1.0));
}

TEST_CASE("grid function invariants") {
    const Grid g = make_grid(1, 3, 1.0);
    CHECK_THROWS_AS(GridFunction(g, std::vector<double>(7, 0.0)), ParameterError);
    std::vector<double> bad(8, 0.0);
    bad[3] = NAN;
    CHECK_THROWS_AS(GridFunction(g, bad), ParameterError);
    const Grid g2 = make_grid(2, 3, 1.0);
    const Point p = g2.coord(g2.flat_index(2, 5));
    CHECK(p[0] == doctest::Approx(0.25));
    CHECK(p[1] == doctest::Approx(0.625));
    CHECK(g2.nearest_index({0.26, 0.99}) == g2.flat_index(2, 0));
}

TEST_CASE("lp_norm") {
    const Grid g = make_grid(1, 8, 1.0);
    CHECK(lp_norm(GridFunction::constant(g, 1.0), 2.0) == doctest::Approx(1.0));
    for (double p : {1.0, 2.0, 3.5, HUGE_VAL}) CHECK(lp_norm(GridFunction::constant(g, 0.0), p) == 0.0);
    const Grid g12 = make_grid(1, 12, 1.0);
    const auto s = GridFunction::sample(g12, [](const Point& x) { return std::sin(2 * kPi * x[0]); });
    CHECK(std::abs(lp_norm(s, 2.0) - std::sqrt(0.5)) < 1e-6);
    CHECK(lp_norm(s, INFINITY) == doctest::Approx(1.0));
    CHECK_THROWS_AS(lp_norm(s, 0.5), ParameterError);
}

TEST_CASE("ball_average") {
    const Grid g = make_grid(1, 8, 1.0);
    CHECK(ball_average(GridFunction::constant(g, 3.0), {0.3, 0}, 0.2) == doctest::Approx(3.0));
    const auto ind = GridFunction::sample(g, [](const Point& x) { return x[0] < 0.5 ? 1.0 : 0.0; });
    CHECK(ball_average(ind, {0.25, 0}, 0.1) == doctest::Approx(1.0));
    CHECK_THROWS_AS(ball_average(ind, {0.25, 0}, 0.1, 0.5), ParameterError);

    const Grid g10 = make_grid(1, 10, 1.0);
    const auto lin = GridFunction::sample(g10, [](const Point& x) { return x[0]; });
    // Oracle: direct summation over the ball.
    double s = 0;
    int c = 0;
    for (std::size_t i = 0; i < g10.size(); ++i) {
        if (std::abs(g10.coord(i)[0] - 0.5) < 0.25) {
            s += lin[i];
            ++c;
        }
    }
    const double avg = ball_average(lin, {0.5, 0}, 0.25);
    CHECK(avg == doctest::Approx(s / c).epsilon(1e-12));
    CHECK(std::abs(avg - 0.5) <= g10.spacing());

    // Empty ball falls back to the nearest sample.
    CHECK(ball_average(lin, {0.5001, 0}, 1e-6) == doctest::Approx(lin[512]));
}

TEST_CASE("ball_average_field matches pointwise ball_average") {
    for (int dim : {1, 2}) {
        const Grid g = make_grid(dim, dim == 1 ? 9 : 5, 1.0);
        const auto f = random_nonneg(g, 7 + dim);
        for (double r : {0.01, 0.07, 0.3, 0.9}) {
            for (double q : {1.0, 2.0, 3.0}) {
                const auto field = ball_average_field(f, r, q);
                for (std::size_t i = 0; i < g.size(); i += 7) {
                    CHECK(field[i] == doctest::Approx(ball_average(f, g.coord(i), r, q)).epsilon(1e-10));
                }
            }
        }
    }
}

TEST_CASE("power mean monotone in q") {
    const Grid g = make_grid(1, 9, 1.0);
    const auto f = random_nonneg(g, 3);
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
        const Point c{rng.uniform(), 0};
        const double r = rng.uniform(0.01, 0.4);
        double prev = 0.0;
        for (double q : {1.0, 1.5, 2.0, 4.0}) {
            const double a = ball_average(f, c, r, q);
            CHECK(prev <= a + 1e-12);
            prev = a;
        }
    }
}

TEST_CASE("fft_convolve") {
    const Grid g = make_grid(1, 8, 1.0);
    const double h = g.spacing();
    const auto f = random_nonneg(g, 5);
    std::vector<double> delta(g.size(), 0.0);
    delta[0] = 1.0 / h;
    const auto id = fft_convolve(f, GridFunction(g, delta));
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(id[i] == doctest::Approx(f[i]).epsilon(1e-12));

    // k with khat(1) = 0.5: k(x) = cos(2 pi x).
    const auto c = GridFunction::sample(g, [](const Point& x) { return std::cos(2 * kPi * x[0]); });
    const auto out = fft_convolve(c, c);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(out[i] - 0.5 * c[i]) < 1e-12);

    const auto ind = GridFunction::sample(g, [](const Point& x) { return x[0] < 0.5 ? 1.0 : 0.0; });
    const auto tri = fft_convolve(ind, ind);
    const auto oracle = direct_convolve(ind, ind);
    double peak = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        CHECK(std::abs(tri[i] - oracle[i]) < 1e-12);
        peak = std::max(peak, tri[i]);
    }
    CHECK(std::abs(peak - 0.5) <= 2 * h);
    CHECK_THROWS_AS(fft_convolve(f, GridFunction::constant(make_grid(1, 7, 1.0), 1.0)), ParameterError);
}

TEST_CASE("convolution properties") {
    for (int dim : {1, 2}) {
        const Grid g = make_grid(dim, dim == 1 ? 10 : 6, 1.0);
        for (std::uint64_t seed = 0; seed < 5; ++seed) {
            const auto f = random_nonneg(g, 100 + seed);
            const auto k = random_nonneg(g, 200 + seed);
            const auto fk = fft_convolve(f, k);
            const auto kf = fft_convolve(k, f);
            for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(fk[i] - kf[i]) < 1e-12);
            for (double p : {1.0, 2.0, 3.0, HUGE_VAL}) {
                CHECK(lp_norm(fk, p) <= lp_norm(f, p) * lp_norm(k, 1.0) * (1 + 1e-8));
            }
            // Parseval with the FFTW half spectrum.
            const auto s = spectral::forward(f);
            const std::size_t n = g.points_per_axis();
            const std::size_t half = n / 2 + 1;
            long double e = 0;
            for (std::size_t idx = 0; idx < s.coeffs.size(); ++idx) {
                const std::size_t j = idx % half;
                const double w = (j == 0 || j == n / 2) ? 1.0 : 2.0;
                e += w * std::norm(s.coeffs[idx]);
            }
            const double parseval = static_cast<double>(e) * g.cell_volume() / static_cast<double>(g.size());
            const double l2 = lp_norm(f, 2.0);
            CHECK(std::abs(parseval - l2 * l2) / (l2 * l2) < 1e-10);
        }
    }
}

TEST_CASE("convolution is deterministic") {
    const Grid g = make_grid(2, 6, 1.0);
    const auto f = random_nonneg(g, 1);
    const auto k = random_nonneg(g, 2);
    const auto a = fft_convolve(f, k);
    const auto b = fft_convolve(f, k);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("ball offsets") {
    const Grid g = make_grid(2, 5, 1.0);
    const auto off = ball_offsets(g, 3.0 * g.spacing());
    std::size_t count = 0;
    for (long dx = -3; dx <= 3; ++dx)
        for (long dy = -3; dy <= 3; ++dy)
            if (dx * dx + dy * dy < 9) ++count;
    CHECK(off.size() == count);
    CHECK(ball_offsets(g, 10.0).size() == g.size());
}

TEST_CASE("shift_samples") {
    const Grid g = make_grid(1, 4, 1.0);
    std::vector<double> v(16);
    for (int i = 0; i < 16; ++i) v[i] = i;
    const auto s = shift_samples(GridFunction(g, v), 3);
    CHECK(s[0] == 3);
    CHECK(s[15] == 2);
}
