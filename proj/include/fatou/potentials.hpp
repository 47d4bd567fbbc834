#pragma once

#include <array>
#include <span>
#include <vector>

#include "fatou/grid.hpp"

namespace fatou {

/// f = J_alpha g together with its density g. ||f|| in the potential space is ||g||_p.
struct BesselFunction {
    double alpha = 0.0;
    GridFunction g;
    GridFunction f;
    double p = 2.0;
};

BesselFunction make_bessel_function(GridFunction g, double alpha, double p);

/// Multiplier (1 + 4 pi^2 |xi|^2)^(-alpha/2); alpha = 0 returns g unchanged.
GridFunction bessel_smooth(const GridFunction& g, double alpha);
/// Multiplier (1 + 4 pi^2 |xi|^2)^(alpha/2).
GridFunction inverse_bessel(const GridFunction& f, double alpha);
/// Multiplier (2 pi |xi|)^(-alpha) with the mean mode set to 0. Requires 0 < alpha < n.
GridFunction riesz_potential(const GridFunction& g, double alpha);
/// Multiplier -i xi_j / |xi|, axis is 1-based; mean and Nyquist modes set to 0.
GridFunction riesz_transform(const GridFunction& f, int axis);

using MultiIndex = std::array<int, 2>;
/// Multiplier (2 pi i xi)^gamma, |gamma| <= 3.
GridFunction spectral_derivative(const GridFunction& f, const MultiIndex& gamma);

/// Polynomial of degree <= 3 in local coordinates y = (x - center) / radius (torus wrap).
/// Coefficients follow graded lexicographic order of the exponents: 1, y1, y2, y1^2, y1 y2, ...
struct Polynomial {
    int dim = 1;
    int degree = 0;
    Point center{};
    double radius = 1.0;
    double extent = 1.0;
    std::vector<double> coefficients;

    double operator()(const Point& x) const;
    static std::vector<MultiIndex> exponents(int dim, int degree);
};

/// L^2(ball) projection onto polynomials of degree k, Gram-Schmidt over grid points.
/// Throws NumericError when the Gram matrix condition number exceeds 1e8.
Polynomial poly_project(const GridFunction& f, const Point& center, double radius, int k);

/// Sampled f^#_alpha with k = floor(alpha): max over balls of radius in `scales` centred on a
/// lattice of stride r/2 of |ball|^(-alpha/n) * mean |f - P^k f|.
GridFunction sharp_maximal(const GridFunction& f, double alpha, std::span<const double> scales);

/// Mean over the ball of |f - P^k f| (the quantity inside the sharp maximal function).
double oscillation(const GridFunction& f, const Point& center, double radius, int k);

/// (sum over distinct pairs of the domain of h^(2 dim) |f_i - f_j|^p / |x_i - x_j|^(n + sigma p))^(1/p).
double slobodeckij_seminorm(const GridFunction& f, double sigma, double p,
                            std::span<const std::size_t> domain);
double slobodeckij_seminorm(const GridFunction& f, double sigma, double p);

struct Representative {
    bool diverged = false;
    double value = 0.0;
    std::vector<double> averages;
};

/// Lebesgue-point limit of the ball means of bf.f along decreasing radii.
Representative representative_value(const BesselFunction& bf, const Point& x,
                                     std::span<const double> radii, double tol = 1e-3);

} // namespace fatou
