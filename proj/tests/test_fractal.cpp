#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fatou/error.hpp"
#include "fatou/fractal.hpp"
#include "fatou/random_fields.hpp"
#include "fatou/rng.hpp"

using namespace fatou;

namespace {

const double kCantorS = std::log(2.0) / std::log(3.0);

// Exact sup of mu(B)/r^s at finite depth: both ball edges on interval endpoints.
double frostman_oracle(double s, int depth) {
    const double rho = std::exp2(-1.0 / s);
    std::vector<std::pair<double, double>> iv{{0.0, 1.0}};
    for (int d = 0; d < depth; ++d) {
        std::vector<std::pair<double, double>> next;
        for (auto [a, b] : iv) {
            const double c = rho * (b - a);
            next.push_back({a, a + c});
            next.push_back({b - c, b});
        }
        iv = next;
    }
    const double w = std::ldexp(1.0, -depth);
    std::vector<std::pair<double, double>> ends; // (position, cumulative mass)
    for (std::size_t k = 0; k < iv.size(); ++k) {
        ends.push_back({iv[k].first, w * k});
        ends.push_back({iv[k].second, w * (k + 1)});
    }
    double best = 0.0;
    for (std::size_t i = 0; i < ends.size(); ++i) {
        for (std::size_t j = i + 1; j < ends.size(); ++j) {
            const double r = 0.5 * (ends[j].first - ends[i].first);
            if (r <= 0.0) continue;
            best = std::max(best, (ends[j].second - ends[i].second) / std::pow(r, s));
        }
    }
    return best;
}

} // namespace

TEST_CASE("cantor_measure construction") {
    const auto leb = cantor_measure(1.0, 8);
    CHECK(leb.ratio == doctest::Approx(0.5).epsilon(1e-15));
    REQUIRE(leb.left.size() == 256);
    for (std::size_t k = 0; k < leb.left.size(); ++k) CHECK(leb.left[k] == doctest::Approx(k / 256.0));

    const auto c = cantor_measure(kCantorS, 10);
    CHECK(c.ratio == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(c.left.size() == 1024);
    CHECK(c.length == doctest::Approx(std::pow(1.0 / 3.0, 10)).epsilon(1e-13));
    CHECK(c.cdf(1.0) == doctest::Approx(1.0));
    CHECK(std::log(2.0) / std::log(1.0 / c.ratio) == doctest::Approx(kCantorS).epsilon(1e-14));
    CHECK(2.0 * c.ratio <= 1.0);
    // level-k child interval carries 2^-k, and (rho^k)^-s 2^-k = 1
    for (int k = 0; k <= 10; ++k) {
        const double len = std::pow(c.ratio, k);
        CHECK(c.cdf(len) == doctest::Approx(std::ldexp(1.0, -k)).epsilon(1e-12));
        CHECK(std::pow(len, -c.s) * std::ldexp(1.0, -k) == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK_THROWS_AS(cantor_measure(0.0, 4), ParameterError);
    CHECK_THROWS_AS(cantor_measure(1.2, 4), ParameterError);
    CHECK_THROWS_AS(cantor_measure(0.5, 25), ParameterError);
}

TEST_CASE("frostman_constant") {
    const auto leb = cantor_measure(1.0, 10);
    CHECK(frostman_constant(leb, frostman_radii(leb, 2)) == doctest::Approx(2.0).epsilon(1e-9));

    const auto small = cantor_measure(kCantorS, 6);
    const double oracle = frostman_oracle(kCantorS, 6);
    const double c6 = frostman_constant(small, frostman_radii(small, 32));
    CHECK(c6 <= oracle + 1e-12);
    CHECK(c6 >= 0.95 * oracle);

    const auto m10 = cantor_measure(kCantorS, 10);
    const auto m16 = cantor_measure(kCantorS, 16);
    const double c10 = frostman_constant(m10, frostman_radii(m10, 4));
    const double c16 = frostman_constant(m16, frostman_radii(m16, 4));
    CHECK(c10 >= 1.0);
    CHECK(c10 <= 4.0);
    CHECK(std::abs(c16 / c10 - 1.0) <= 0.1);

    CHECK_THROWS_AS(frostman_constant(m10, {2.0}), ParameterError);
}

TEST_CASE("frostman consistency on random balls") {
    const auto mu = cantor_measure(kCantorS, 12);
    const auto radii = frostman_radii(mu, 4);
    const double c = frostman_constant(mu, radii);
    Rng rng(7);
    double worst = -1.0;
    for (int i = 0; i < 10000; ++i) {
        const double x = rng.uniform(-0.1, 1.1);
        const double r = radii[rng.below(radii.size())];
        worst = std::max(worst, mu.ball_mass(x, r) - c * std::pow(r, mu.s));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("integrate_against") {
    const Grid g = make_grid(1, 14, 1.0);
    const auto mu = cantor_measure(kCantorS, 12);
    CHECK(integrate_against(GridFunction::constant(g, 3.5), mu) == doctest::Approx(3.5).epsilon(1e-12));

    // Lipschitz f: nearest-point midpoint rule against a linear-interpolation rule.
    const auto f = GridFunction::sample(g, [](const Point& x) { return std::abs(std::sin(6.0 * x[0])) + x[0]; });
    const double h = g.spacing();
    double interp = 0.0;
    for (double a : mu.left) {
        const double x = a + 0.5 * mu.length;
        const double pos = x / h;
        const auto i0 = static_cast<std::size_t>(std::floor(pos));
        const double t = pos - std::floor(pos);
        interp += (1.0 - t) * f[i0 % g.size()] + t * f[(i0 + 1) % g.size()];
    }
    interp *= mu.weight();
    CHECK(std::abs(interp - integrate_against(f, mu)) <= 7.0 * h);

    CHECK_THROWS_AS(integrate_against(GridFunction::constant(make_grid(1, 8, 0.5), 1.0), mu), ParameterError);
}

TEST_CASE("dimensional measure bound for Bessel potentials") {
    const Grid g = make_grid(1, 12, 1.0);
    const double alpha = 0.4, p = 2.0;
    const auto mu = cantor_measure(kCantorS, 12); // s > n - alpha p = 0.2
    const double cs = frostman_constant(mu, frostman_radii(mu, 4));
    Rng rng(11);
    double lo = HUGE_VAL, hi = 0.0;
    for (int draw = 0; draw < 20; ++draw) {
        const auto gfun = map(random_bumps(g, rng, 6, 0.002, 0.05, 0.0), [](double v) { return std::abs(v); });
        const auto bf = make_bessel_function(gfun, alpha, p);
        const double ratio = integrate_against(map(bf.f, [](double v) { return std::abs(v); }), mu) /
                             (std::max(std::pow(cs, 1.0 / p), 1.0) * lp_norm(gfun, p));
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
    }
    MESSAGE("ratio range " << lo << " .. " << hi);
    CHECK(hi <= 10.0);
    CHECK(hi / lo <= 20.0);
}

TEST_CASE("box_dimension calibrations") {
    const Grid g = make_grid(1, 14, 1.0);
    const auto single = box_dimension(make_point_set(g, {Point{0.3, 0.0}}), 2, 12);
    CHECK(std::abs(single.slope) <= 0.05);
    CHECK_FALSE(single.empty);

    std::vector<Point> all;
    for (std::size_t i = 0; i < g.size(); ++i) all.push_back(g.coord(i));
    const auto full = box_dimension(make_point_set(g, all), 2, 12);
    CHECK(std::abs(full.slope - 1.0) <= 0.05);
    CHECK(full.counts.front() == 4);
    CHECK(full.counts.back() == 4096);

    const auto cantor = box_dimension(cantor_points(g, cantor_measure(kCantorS, 14)), 4, 10);
    CHECK(std::abs(cantor.slope - kCantorS) <= 0.05);
    CHECK(cantor.r2 > 0.95);

    const auto empty = box_dimension(PointSet{g, {}}, 2, 6);
    CHECK(empty.empty);
    CHECK(empty.slope == 0.0);

    const Grid g2 = make_grid(2, 8, 1.0);
    std::vector<Point> plane;
    for (std::size_t i = 0; i < g2.size(); ++i) plane.push_back(g2.coord(i));
    CHECK(std::abs(box_dimension(make_point_set(g2, plane), 1, 7).slope - 2.0) <= 0.05);

    CHECK_THROWS_AS(box_dimension(PointSet{g, {}}, 5, 5), ParameterError);
    CHECK_THROWS_AS(box_dimension(PointSet{g, {}}, 2, 15), ParameterError);
    CHECK_THROWS_AS(make_point_set(g, {Point{1.0, 0.0}}), ParameterError);

    CHECK(box_content(make_point_set(g, all), 3, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("divergence_set") {
    {
        // Empty once the finest region t^beta is narrow against eps / Lip(f).
        const Grid fine = make_grid(1, 16, 1.0);
        const auto fh = default_heights(fine);
        const auto smooth = GridFunction::sample(fine, [](const Point& x) {
            return 0.5 * std::cos(2 * std::numbers::pi * x[0]) + 0.2 * std::sin(6 * std::numbers::pi * x[0]);
        });
        const auto u = poisson_extend(smooth, fh);
        for (double beta : {0.7, 1.0}) {
            CHECK(divergence_set(u, smooth, ApproachRegionSpec{beta}, 0.01, fh.back()).points.empty());
        }
    }
    const Grid g = make_grid(1, 10, 1.0);
    const auto heights = default_heights(g);
    Rng rng(3);
    const auto smooth = random_trig(g, rng, 6);
    const auto u = poisson_extend(smooth, heights);
    CHECK_THROWS_AS(divergence_set(u, smooth, ApproachRegionSpec{}, 0.01, 0.5 * heights.back()), ParameterError);
    CHECK_THROWS_AS(divergence_set(u, smooth, ApproachRegionSpec{}, 0.0, heights.back()), ParameterError);

    const auto rough = random_bumps(g, rng, 12, 0.002, 0.02, 0.0);
    const auto v = poisson_extend(rough, heights);
    const ApproachRegionSpec spec{0.5};
    const double t_mid = heights[heights.size() / 2];
    std::size_t prev = g.size() + 1;
    for (double eps : {0.001, 0.01, 0.05, 0.2}) {
        const auto set = divergence_set(v, rough, spec, eps, t_mid);
        CHECK(set.points.size() <= prev);
        prev = set.points.size();
    }
    std::size_t last = 0;
    for (std::size_t k = heights.size(); k-- > 0;) {
        const auto set = divergence_set(v, rough, spec, 0.05, heights[k]);
        CHECK(set.points.size() >= last);
        last = set.points.size();
    }
}

TEST_CASE("divergence set of a singular potential concentrates at the spike") {
    const Grid g = make_grid(1, 12, 1.0);
    const double alpha = 0.4, p = 2.0;
    const auto spike = unit_spike(g, Point{0.5, 0.0}, p);
    const auto bf = make_bessel_function(spike, alpha, p);
    const auto heights = default_heights(g);
    const auto u = poisson_extend(bf.f, heights);
    const auto set = divergence_set(u, bf.f, ApproachRegionSpec{1.0}, 0.5, heights[heights.size() - 4]);
    REQUIRE_FALSE(set.points.empty());
    for (const Point& x : set.points) CHECK(std::abs(x[0] - 0.5) < 0.01);
    const auto dim = box_dimension(set, 2, 10);
    CHECK(dim.slope <= 1.0 - alpha * p + 0.1);

    const auto with_rep = divergence_set(u, bf, {16 * g.spacing(), 8 * g.spacing(), 4 * g.spacing()},
                                         ApproachRegionSpec{1.0}, 0.5, heights[heights.size() - 4]);
    CHECK(with_rep.points.size() >= 1);
}
