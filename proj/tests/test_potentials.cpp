#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fatou/error.hpp"
#include "fatou/kernels.hpp"
#include "fatou/potentials.hpp"
#include "fatou/random_fields.hpp"

using namespace fatou;
constexpr double kPi = std::numbers::pi;

namespace {

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

GridFunction cosine(const Grid& g) {
    return GridFunction::sample(g, [](const Point& x) { return std::cos(2 * kPi * x[0]); });
}

// Brute-force Hardy-Littlewood maximal function over radii 4h..L/4 (doubling), as oracle.
GridFunction brute_max(const GridFunction& f) {
    const Grid& g = f.grid();
    std::vector<double> out(g.size(), 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (double r = 4 * g.spacing(); r <= 0.25 * g.extent * (1 + 1e-12); r *= 2)
            out[i] = std::max(out[i], ball_average(f, g.coord(i), r));
    }
    return GridFunction(g, out);
}

} // namespace

TEST_CASE("bessel_smooth examples") {
    const Grid g = make_grid(1, 10, 1.0);
    Rng rng(1);
    const auto r = random_uniform(g, rng);
    const auto same = bessel_smooth(r, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(same[i] == r[i]);
    const auto c = cosine(g);
    const auto s = bessel_smooth(c, 2.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(std::abs(s[i] - c[i] / (1 + 4 * kPi * kPi)) < 1e-12);
    CHECK_THROWS_AS(bessel_smooth(c, -1.0), ParameterError);
}

TEST_CASE("bessel_smooth of a spike matches spatial convolution with G_1") {
    // Unit-mass discrete spike on a padded torus. The two routes differ by aliasing of the
    // log singularity, which is confined to a neighbourhood of the spike.
    const Grid g = make_grid(1, 14, 8.0);
    std::vector<double> v(g.size(), 0.0);
    v[g.size() / 2] = 1.0 / g.spacing();
    const GridFunction spike(g, v);
    const auto spectral = bessel_smooth(spike, 1.0);
    const auto spatial = fft_convolve(spike, sample_kernel(g, {KernelKind::Bessel, 1, 1.0, 0}, 40.0));
    double worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (std::abs(g.coord(i)[0] - 4.0) >= 0.05) worst = std::max(worst, std::abs(spectral[i] - spatial[i]));
    CHECK(worst < 1e-4);
}

TEST_CASE("inverse_bessel") {
    const Grid g = make_grid(1, 10, 1.0);
    Rng rng(2);
    const auto f = random_trig(g, rng, 40);
    const auto same = inverse_bessel(f, 0.0);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(same[i] == f[i]);
    CHECK(max_abs_diff(bessel_smooth(inverse_bessel(f, 1.5), 1.5), f) < 1e-10);
    const auto c = cosine(g);
    CHECK(max_abs_diff(inverse_bessel(c, 2.0), scale(c, 1 + 4 * kPi * kPi)) < 1e-8);
}

TEST_CASE("riesz transform") {
    const Grid g = make_grid(1, 10, 1.0);
    const auto h = riesz_transform(cosine(g), 1);
    const auto sine = GridFunction::sample(g, [](const Point& x) { return std::sin(2 * kPi * x[0]); });
    CHECK(max_abs_diff(h, sine) < 1e-12);
    CHECK_THROWS_AS(riesz_transform(sine, 2), ParameterError);

    const Grid g2 = make_grid(2, 6, 1.0);
    Rng rng(3);
    auto f = random_trig(g2, rng, 10);
    double mean = 0;
    for (double v : f.samples()) mean += v;
    mean /= static_cast<double>(f.size());
    f = map(f, [mean](double v) { return v - mean; });
    const auto s = add(riesz_transform(riesz_transform(f, 1), 1), riesz_transform(riesz_transform(f, 2), 2));
    CHECK(max_abs_diff(s, scale(f, -1.0)) < 1e-8);
    for (int j : {1, 2}) CHECK(lp_norm(riesz_transform(f, j), 2) <= lp_norm(f, 2) * (1 + 1e-12));
    CHECK(std::abs(lp_norm(riesz_transform(f, 1), 2) * lp_norm(riesz_transform(f, 1), 2) +
                   lp_norm(riesz_transform(f, 2), 2) * lp_norm(riesz_transform(f, 2), 2) -
                   lp_norm(f, 2) * lp_norm(f, 2)) < 1e-10);
    const Grid g1 = make_grid(1, 10, 1.0);
    auto f1 = random_trig(g1, rng, 30);
    f1 = map(f1, [m = ball_mean(f1, {0, 0}, 1.0)](double v) { return v - m; });
    CHECK(std::abs(lp_norm(riesz_transform(f1, 1), 2) - lp_norm(f1, 2)) < 1e-10);
}

TEST_CASE("spectral derivative") {
    const Grid g = make_grid(1, 12, 1.0);
    const auto d = spectral_derivative(cosine(g), {1, 0});
    const auto sine = GridFunction::sample(g, [](const Point& x) { return -2 * kPi * std::sin(2 * kPi * x[0]); });
    CHECK(max_abs_diff(d, sine) < 1e-9);
    for (MultiIndex gamma : {MultiIndex{1, 0}, MultiIndex{2, 0}, MultiIndex{3, 0}}) {
        const auto z = spectral_derivative(GridFunction::constant(g, 4.0), gamma);
        CHECK(lp_norm(z, HUGE_VAL) < 1e-12);
    }
    CHECK_THROWS_AS(spectral_derivative(cosine(g), {4, 0}), ParameterError);

    // Eighth-order centred differences as oracle.
    Rng rng(4);
    const auto f = random_trig(g, rng, 12);
    const auto df = spectral_derivative(f, {1, 0});
    const double h = g.spacing();
    const double c[4] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
    const long n = static_cast<long>(g.size());
    double worst = 0;
    for (long i = 0; i < n; ++i) {
        double s = 0;
        for (long m = 1; m <= 4; ++m) s += c[m - 1] * (f[(i + m) % n] - f[(i - m + n) % n]);
        worst = std::max(worst, std::abs(s / h - df[i]));
    }
    CHECK(worst < 1e-6);

    const Grid g2 = make_grid(2, 6, 1.0);
    const auto f2 = GridFunction::sample(g2, [](const Point& x) { return std::sin(2 * kPi * x[0]) * std::sin(4 * kPi * x[1]); });
    const auto mixed = spectral_derivative(f2, {1, 1});
    const auto expect = GridFunction::sample(
        g2, [](const Point& x) { return 8 * kPi * kPi * std::cos(2 * kPi * x[0]) * std::cos(4 * kPi * x[1]); });
    CHECK(max_abs_diff(mixed, expect) < 1e-9);
}

TEST_CASE("poly_project") {
    const Grid g = make_grid(1, 10, 1.0);
    const auto affine = GridFunction::sample(g, [](const Point& x) { return 3.0 - 2.0 * x[0]; });
    const Point c{0.4, 0};
    const double r = 0.1;
    const auto p = poly_project(affine, c, r, 1);
    double worst = 0;
    for (std::size_t i = 0; i < g.size(); ++i)
        if (g.distance(c, g.coord(i)) < r) worst = std::max(worst, std::abs(p(g.coord(i)) - affine[i]));
    CHECK(worst < 1e-8);

    Rng rng(5);
    const auto f = random_trig(g, rng, 30);
    const auto p0 = poly_project(f, c, r, 0);
    CHECK(p0.coefficients.size() == 1);
    CHECK(p0.coefficients[0] == doctest::Approx(ball_mean(f, c, r)).epsilon(1e-12));

    // Orthogonality of the residual to monomials.
    for (int k = 0; k <= 3; ++k) {
        const auto pk = poly_project(f, c, r, k);
        for (int e = 0; e <= k; ++e) {
            double s = 0, scale_ = 0;
            int count = 0;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const Point x = g.coord(i);
                if (g.distance(c, x) >= r) continue;
                const double y = std::pow(g.wrap_delta(c[0], x[0]) / r, e);
                s += (f[i] - pk(x)) * y;
                scale_ += std::abs(f[i] * y);
                ++count;
            }
            CHECK(std::abs(s) <= 1e-6 * scale_);
        }
    }

    // Local sup bound: sup |P f| <= C mean |f| with C bounded across random f.
    double cmax = 0;
    for (int s = 0; s < 100; ++s) {
        Rng rr(100 + s);
        const auto h = random_trig(g, rr, 40);
        const auto pk = poly_project(h, c, r, 2);
        double sup = 0;
        for (std::size_t i = 0; i < g.size(); ++i)
            if (g.distance(c, g.coord(i)) < r) sup = std::max(sup, std::abs(pk(g.coord(i))));
        cmax = std::max(cmax, sup / ball_average(h, c, r));
    }
    CHECK(cmax < 20);

    CHECK_THROWS_AS(poly_project(f, c, 1.5 * g.spacing(), 3), NumericError);

    const Grid g2 = make_grid(2, 6, 1.0);
    const auto quad = GridFunction::sample(g2, [](const Point& x) { return 1 + x[0] - 2 * x[1] + x[0] * x[1]; });
    const auto p2 = poly_project(quad, {0.5, 0.5}, 0.2, 2);
    CHECK(p2.coefficients.size() == 6);
    CHECK(p2({0.55, 0.45}) == doctest::Approx(1 + 0.55 - 0.9 + 0.55 * 0.45).epsilon(1e-9));
}

TEST_CASE("sharp maximal") {
    const Grid g = make_grid(1, 10, 1.0);
    const std::vector<double> scales{4 * g.spacing(), 8 * g.spacing(), 0.05, 0.2};
    // Linear in the interior; the torus wrap only matters near the seam.
    const auto affine = GridFunction::sample(g, [](const Point& x) { return 2.0 + std::sin(2 * kPi * x[0]) * 0 + 0.5 * x[0]; });
    const auto s = sharp_maximal(affine, 1.5, std::vector<double>{4 * g.spacing(), 0.02});
    for (std::size_t i = 64; i < g.size() - 64; ++i) CHECK(s[i] < 1e-8);
    const auto z = sharp_maximal(GridFunction::constant(g, 3.0), 0.5, scales);
    CHECK(lp_norm(z, HUGE_VAL) < 1e-10);
    CHECK_THROWS_AS(sharp_maximal(affine, 0.5, std::vector<double>{}), ParameterError);

    // Refinement monotonicity: more scales never lower the value.
    Rng rng(6);
    const auto f = random_trig(g, rng, 60);
    const auto coarse = sharp_maximal(f, 0.5, std::vector<double>{0.05});
    const auto fine = sharp_maximal(f, 0.5, scales);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK(fine[i] >= coarse[i]);

    // Poincare pattern for f = J_alpha g: mean |f - P f| <= C r^alpha (mean (Mg)^q)^(1/q).
    const double alpha = 0.6;
    std::vector<double> ratios;
    for (int seed = 0; seed < 5; ++seed) {
        Rng r2(50 + seed);
        const auto gg = random_bumps(g, r2, 12, 0.005, 0.05, 0.1);
        const auto ff = bessel_smooth(gg, alpha);
        const auto mg = brute_max(gg);
        for (int b = 0; b < 10; ++b) {
            const Point c{r2.uniform(), 0};
            const double r = std::exp(r2.uniform(std::log(8 * g.spacing()), std::log(0.2)));
            const double lhs = oscillation(ff, c, r, 0);
            const double rhs = std::pow(r, alpha) * ball_average(mg, c, r, 2.0);
            ratios.push_back(lhs / rhs);
        }
    }
    CHECK(*std::max_element(ratios.begin(), ratios.end()) < 10.0);
}

TEST_CASE("C^p_alpha Poincare") {
    const Grid g = make_grid(1, 10, 1.0);
    const double alpha = 0.5;
    std::vector<double> scales;
    for (double r = 4 * g.spacing(); r <= 0.25; r *= 2) scales.push_back(r);
    double worst = 0;
    for (int seed = 0; seed < 3; ++seed) {
        Rng rng(70 + seed);
        const auto f = bessel_smooth(random_bumps(g, rng, 10, 0.01, 0.05), alpha);
        const auto sharp = sharp_maximal(f, alpha, scales);
        for (int b = 0; b < 17; ++b) {
            const Point c{rng.uniform(), 0};
            const double r = scales[rng.below(scales.size() - 1)];
            const double lhs = oscillation(f, c, r, 0);
            const double rhs = std::pow(2 * r, alpha) * ball_average(sharp, c, r, 1.0);
            worst = std::max(worst, lhs / rhs);
        }
    }
    CHECK(worst < 4.0);
}

TEST_CASE("slobodeckij seminorm") {
    const Grid g = make_grid(1, 8, 1.0);
    CHECK(slobodeckij_seminorm(GridFunction::constant(g, 2.0), 0.5, 2.0) == 0.0);
    Rng rng(7);
    const auto f = random_uniform(g, rng);
    const double a = slobodeckij_seminorm(f, 0.3, 2.0);
    const double b = slobodeckij_seminorm(shift_samples(f, 37), 0.3, 2.0);
    CHECK(std::abs(a - b) < 1e-10 * a);
    const double c10 = slobodeckij_seminorm(cosine(make_grid(1, 10, 1.0)), 0.5, 2.0);
    const double c11 = slobodeckij_seminorm(cosine(make_grid(1, 11, 1.0)), 0.5, 2.0);
    CHECK(std::abs(c11 / c10 - 1) < 0.02);
    std::vector<std::size_t> half;
    for (std::size_t i = 0; i < 128; ++i) half.push_back(i);
    CHECK(slobodeckij_seminorm(f, 0.3, 2.0, half) < a);
}

TEST_CASE("representative value") {
    const Grid g = make_grid(1, 14, 1.0);
    Rng rng(8);
    const auto smooth = make_bessel_function(random_trig(g, rng, 5), 1.0, 2.0);
    std::vector<double> radii;
    for (int m = 4; m <= 10; ++m) radii.push_back(std::ldexp(1.0, -m));
    const Point x = g.coord(4915);
    const auto rep = representative_value(smooth, x, radii);
    CHECK_FALSE(rep.diverged);
    // Mean over a ball of radius r differs from the centre value by at most sup|f''| r^2 / 6.
    const double f2 = lp_norm(spectral_derivative(smooth.f, {2, 0}), HUGE_VAL);
    CHECK(std::abs(rep.value - smooth.f[g.nearest_index(x)]) <= f2 * radii.back() * radii.back() / 6 + 1e-12);

    // Tall spike with alpha p < 1: averages increase toward the spike and do not settle.
    const auto spike = make_bessel_function(unit_spike(g, {0.5, 0}, 2.0), 0.25, 2.0);
    const auto srep = representative_value(spike, {0.5, 0}, radii);
    CHECK(srep.diverged);
    for (std::size_t i = 1; i < srep.averages.size(); ++i) CHECK(srep.averages[i] > srep.averages[i - 1]);

    // |f~(x)| <= (G_alpha * |g|)(x) where resolved.
    const auto gabs = map(smooth.g, [](double v) { return std::abs(v); });
    const auto bound = bessel_smooth(gabs, 1.0);
    for (double xx : {0.1, 0.35, 0.7, 0.9}) {
        const auto rv = representative_value(smooth, {xx, 0}, radii);
        if (!rv.diverged) CHECK(std::abs(rv.value) <= bound[g.nearest_index({xx, 0})] + 1e-9);
    }
    CHECK_THROWS_AS(representative_value(smooth, x, std::vector<double>{0.1, 0.2, 0.05}), ParameterError);
}

TEST_CASE("contraction and semigroup") {
    const Grid g = make_grid(1, 10, 1.0);
    for (int s = 0; s < 50; ++s) {
        Rng rng(200 + s);
        const auto gg = s % 2 ? random_uniform(g, rng) : random_trig(g, rng, 100);
        const double alpha = rng.uniform(0.1, 2.0);
        const auto f = bessel_smooth(gg, alpha);
        for (double p : {1.0, 2.0, 4.0, HUGE_VAL}) CHECK(lp_norm(f, p) <= lp_norm(gg, p) * (1 + 1e-8));
        if (s < 10) {
            const double beta = rng.uniform(0.1, 1.0);
            CHECK(max_abs_diff(bessel_smooth(f, beta), bessel_smooth(gg, alpha + beta)) < 1e-10);
        }
    }
}

TEST_CASE("derivative decomposition stays bounded") {
    const double alpha = 1.5;
    std::vector<double> ratios;
    for (int levels : {10, 12}) {
        const Grid g = make_grid(1, levels, 1.0);
        for (int s = 0; s < 5; ++s) {
            Rng rng(300 + s);
            const auto gg = random_bumps(g, rng, 10, 0.003, 0.05);
            const auto f = bessel_smooth(gg, alpha);
            const auto gg1 = inverse_bessel(spectral_derivative(f, {1, 0}), alpha - 1);
            ratios.push_back(lp_norm(gg1, 2.0) / lp_norm(gg, 2.0));
        }
    }
    const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
    CHECK(*hi <= 1.0 + 1e-9);
    CHECK(*hi / *lo < 3.0);
}
