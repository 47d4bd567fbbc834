#pragma once

#include <array>
#include <string>

#include "fatou/grid.hpp"

namespace fatou {

enum class KernelKind { Poisson, Bessel, Riesz };

struct KernelSpec {
    KernelKind kind = KernelKind::Poisson;
    int dim = 1;
    double order = 0.0; // alpha for Bessel / Riesz
    double scale = 1.0; // t for Poisson
};

/// Throws ParameterError unless the spec satisfies its kind's invariants.
void validate(const KernelSpec& spec);

enum class Route { Quadrature, Series };

/// c_n t / (t^2 + |x|^2)^((n+1)/2), c_1 = 1/pi, c_2 = 1/(2 pi).
double poisson_kernel(int n, double t, const Point& x);
double poisson_constant(int n);

double bessel_kernel(int n, double alpha, const Point& x, Route route = Route::Quadrature);
double bessel_kernel_radial(int n, double alpha, double r, Route route = Route::Quadrature);
/// c_alpha fixed numerically so that the quadrature kernel has unit mass. Cached per (n, alpha).
double bessel_normalization(int n, double alpha);
/// The closed form 1 / ((4 pi)^(alpha/2) Gamma(alpha/2)) used by the series route.
double bessel_normalization_exact(double alpha);

double riesz_kernel(int n, double alpha, const Point& x);
double riesz_kernel_radial(int n, double alpha, double r);
/// Gamma((n-alpha)/2) / (2^alpha pi^(n/2) Gamma(alpha/2)).
double riesz_constant(int n, double alpha);

double kernel_symbol(const KernelSpec& spec, const std::array<double, 2>& xi);

/// Pointwise value of a spec at x (Bessel uses the series route).
double kernel_value(const KernelSpec& spec, const Point& x);

/// Periodised samples of the kernel on the grid, centred at index 0. Images are summed out to
/// `image_radius`; the origin sample of a singular kernel is its average over the central cell.
/// Riesz kernels are not periodised (only the nearest image is used).
GridFunction sample_kernel(const Grid& grid, const KernelSpec& spec, double image_radius = 40.0);

/// Mean of the kernel over the cell [-h/2, h/2]^n.
double central_cell_average(const KernelSpec& spec, double h);

/// How the normalising constant of a kernel was fixed, for output metadata.
std::string normalization_note(const KernelSpec& spec);

} // namespace fatou
