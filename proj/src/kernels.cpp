#include "fatou/kernels.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "fatou/error.hpp"

namespace fatou {

namespace {

constexpr double kPi = std::numbers::pi;

double norm_n(int n, const Point& x) { return n == 1 ? std::abs(x[0]) : std::hypot(x[0], x[1]); }

void check_dim(int n) {
    if (n != 1 && n != 2) throw ParameterError("kernel dimension must be 1 or 2");
}

// Unit-sphere surface measure.
double omega(int n) { return n == 1 ? 2.0 : 2.0 * kPi; }

template <typename F>
double adaptive(F&& f, double a, double b, double rel_tol, const char* what) {
    double error = 0.0;
    double l1 = 0.0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 18, rel_tol * 1e-2, &error, &l1);
    if (!std::isfinite(value) || error > rel_tol * std::max(std::abs(value), 1e-300)) {
        std::ostringstream os;
        os << what << ": quadrature did not converge on [" << a << ", " << b << "], value " << value
           << ", error estimate " << error;
        throw NumericError(os.str());
    }
    return value;
}

// Integral over u = log t of exp(-pi r^2 e^-u - e^u/(4 pi)) e^{-u (n - alpha)/2}.
double bessel_integral(int n, double alpha, double r) {
    const double nu = 0.5 * (n - alpha);
    const double a = kPi * r * r;
    auto exponent = [&](double u) { return -a * std::exp(-u) - std::exp(u) / (4.0 * kPi) - nu * u; };
    const double u_hi = std::log(4.0 * kPi * 800.0);
    double u_lo;
    if (r > 0.0) {
        u_lo = std::log(a) - std::log(800.0);
    } else {
        u_lo = -80.0 / (alpha - n);
    }
    // Split at the peak so the adaptive rule sees it.
    double best = u_lo;
    double best_e = -INFINITY;
    constexpr int probes = 256;
    for (int i = 0; i <= probes; ++i) {
        const double u = u_lo + (u_hi - u_lo) * i / probes;
        const double e = exponent(u);
        if (e > best_e) {
            best_e = e;
            best = u;
        }
    }
    auto integrand = [&](double u) { return std::exp(exponent(u)); };
    double total = 0.0;
    if (best > u_lo) total += adaptive(integrand, u_lo, best, 1e-10, "bessel_kernel");
    if (best < u_hi) total += adaptive(integrand, best, u_hi, 1e-10, "bessel_kernel");
    return total;
}

std::mutex& cache_mutex() {
    static std::mutex m;
    return m;
}
std::map<std::pair<int, double>, double>& cache() {
    static std::map<std::pair<int, double>, double> c;
    return c;
}

void check_bessel(int n, double alpha) {
    check_dim(n);
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw ParameterError("Bessel order must be > 0");
}

void check_riesz(int n, double alpha) {
    check_dim(n);
    if (!(alpha > 0.0 && alpha < n)) throw ParameterError("Riesz order must lie in (0, n)");
}

} // namespace

void validate(const KernelSpec& spec) {
    check_dim(spec.dim);
    switch (spec.kind) {
    case KernelKind::Poisson:
        if (!(spec.scale > 0.0)) throw ParameterError("Poisson kernel requires t > 0");
        break;
    case KernelKind::Bessel:
        check_bessel(spec.dim, spec.order);
        break;
    case KernelKind::Riesz:
        check_riesz(spec.dim, spec.order);
        break;
    }
}

double poisson_constant(int n) {
    check_dim(n);
    return n == 1 ? 1.0 / kPi : 1.0 / (2.0 * kPi);
}

double poisson_kernel(int n, double t, const Point& x) {
    check_dim(n);
    if (!(t > 0.0)) throw ParameterError("Poisson kernel requires t > 0");
    const double r = norm_n(n, x);
    const double q = t * t + r * r;
    return poisson_constant(n) * t / (n == 1 ? q : q * std::sqrt(q));
}

double bessel_normalization_exact(double alpha) {
    return 1.0 / (std::pow(4.0 * kPi, 0.5 * alpha) * std::tgamma(0.5 * alpha));
}

double bessel_normalization(int n, double alpha) {
    check_bessel(n, alpha);
    const auto key = std::make_pair(n, alpha);
    {
        std::lock_guard lock(cache_mutex());
        if (auto it = cache().find(key); it != cache().end()) return it->second;
    }
    // Mass of the unnormalised kernel, integrated radially in s = log r.
    const double s_lo = -36.0 / std::min(alpha, static_cast<double>(n));
    const double s_hi = std::log(80.0);
    auto integrand = [&](double s) {
        const double r = std::exp(s);
        return omega(n) * std::pow(r, n) * bessel_integral(n, alpha, r);
    };
    const double mass = adaptive(integrand, s_lo, s_hi, 1e-9, "bessel_normalization");
    const double c = 1.0 / mass;
    std::lock_guard lock(cache_mutex());
    cache().emplace(key, c);
    return c;
}

double bessel_kernel_radial(int n, double alpha, double r, Route route) {
    check_bessel(n, alpha);
    if (r < 0.0) r = -r;
    if (r == 0.0 && alpha <= n) throw SingularityError("Bessel kernel is singular at the origin for alpha <= n");
    const double nu = 0.5 * (alpha - n);
    if (route == Route::Series) {
        const double c = bessel_normalization_exact(alpha);
        if (r == 0.0) return c * std::pow(4.0 * kPi, nu) * std::tgamma(nu);
        return c * 2.0 * std::pow(2.0 * kPi * r, nu) * boost::math::cyl_bessel_k(std::abs(nu), r);
    }
    return bessel_normalization(n, alpha) * bessel_integral(n, alpha, r);
}

double bessel_kernel(int n, double alpha, const Point& x, Route route) {
    check_dim(n);
    return bessel_kernel_radial(n, alpha, norm_n(n, x), route);
}

double riesz_constant(int n, double alpha) {
    check_riesz(n, alpha);
    return std::tgamma(0.5 * (n - alpha)) /
           (std::pow(2.0, alpha) * std::pow(kPi, 0.5 * n) * std::tgamma(0.5 * alpha));
}

double riesz_kernel_radial(int n, double alpha, double r) {
    check_riesz(n, alpha);
    r = std::abs(r);
    if (r == 0.0) throw SingularityError("Riesz kernel is singular at the origin");
    return riesz_constant(n, alpha) * std::pow(r, -(n - alpha));
}

double riesz_kernel(int n, double alpha, const Point& x) {
    check_dim(n);
    return riesz_kernel_radial(n, alpha, norm_n(n, x));
}

double kernel_symbol(const KernelSpec& spec, const std::array<double, 2>& xi) {
    validate(spec);
    const double k = spec.dim == 1 ? std::abs(xi[0]) : std::hypot(xi[0], xi[1]);
    switch (spec.kind) {
    case KernelKind::Poisson:
        return std::exp(-2.0 * kPi * spec.scale * k);
    case KernelKind::Bessel:
        return std::pow(1.0 + 4.0 * kPi * kPi * k * k, -0.5 * spec.order);
    case KernelKind::Riesz:
        if (k == 0.0) throw SingularityError("Riesz symbol is singular at xi = 0");
        return std::pow(2.0 * kPi * k, -spec.order);
    }
    return 0.0;
}

double kernel_value(const KernelSpec& spec, const Point& x) {
    switch (spec.kind) {
    case KernelKind::Poisson:
        return poisson_kernel(spec.dim, spec.scale, x);
    case KernelKind::Bessel:
        return bessel_kernel(spec.dim, spec.order, x, Route::Series);
    case KernelKind::Riesz:
        return riesz_kernel(spec.dim, spec.order, x);
    }
    return 0.0;
}

double central_cell_average(const KernelSpec& spec, double h) {
    validate(spec);
    if (!(h > 0.0)) throw ParameterError("cell width must be > 0");
    auto radial = [&](double r) { return kernel_value(spec, {r, 0.0}); };
    boost::math::quadrature::tanh_sinh<double> ts;
    const double half = 0.5 * h;
    if (spec.dim == 1) {
        return 2.0 * ts.integrate([&](double r) { return r > 0.0 ? radial(r) : 0.0; }, 0.0, half) / h;
    }
    auto wedge = [&](double theta) {
        const double rmax = half / std::cos(theta);
        return ts.integrate([&](double r) { return r > 0.0 ? radial(r) * r : 0.0; }, 0.0, rmax);
    };
    const double angular =
        boost::math::quadrature::gauss_kronrod<double, 31>::integrate(wedge, 0.0, 0.25 * kPi, 8, 1e-12);
    return 8.0 * angular / (h * h);
}

GridFunction sample_kernel(const Grid& grid, const KernelSpec& spec, double image_radius) {
    validate(spec);
    if (spec.dim != grid.dim) throw ParameterError("kernel dimension does not match grid");
    const double L = grid.extent;
    const double h = grid.spacing();
    const std::size_t n = grid.points_per_axis();
    std::vector<double> v(grid.size(), 0.0);

    auto signed_coord = [&](std::size_t i) {
        const double x = static_cast<double>(i) * h;
        return x >= 0.5 * L ? x - L : x;
    };

    if (spec.kind == KernelKind::Poisson && grid.dim == 1) {
        const double a = 2.0 * kPi * spec.scale / L;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = static_cast<double>(i) * h;
            v[i] = std::sinh(a) / (L * (std::cosh(a) - std::cos(2.0 * kPi * x / L)));
        }
        return GridFunction(grid, std::move(v));
    }

    const bool singular = spec.kind != KernelKind::Poisson &&
                          !(spec.kind == KernelKind::Bessel && spec.order > spec.dim);
    const bool periodise = spec.kind != KernelKind::Riesz;
    const long images = periodise ? static_cast<long>(std::ceil(image_radius / L)) : 0;
    const double cutoff = spec.kind == KernelKind::Poisson ? INFINITY : image_radius;

    auto image_sum = [&](double x, double y, bool skip_origin) {
        double s = 0.0;
        for (long mx = -images; mx <= images; ++mx) {
            const long my_range = grid.dim == 1 ? 0 : images;
            for (long my = -my_range; my <= my_range; ++my) {
                if (skip_origin && mx == 0 && my == 0) continue;
                const Point p{x + mx * L, y + my * L};
                const double r = grid.dim == 1 ? std::abs(p[0]) : std::hypot(p[0], p[1]);
                if (r > cutoff && !(mx == 0 && my == 0)) continue;
                s += kernel_value(spec, p);
            }
        }
        return s;
    };

    for (std::size_t idx = 0; idx < grid.size(); ++idx) {
        double x;
        double y = 0.0;
        if (grid.dim == 1) {
            x = signed_coord(idx);
        } else {
            x = signed_coord(idx / n);
            y = signed_coord(idx % n);
        }
        if (idx == 0) {
            v[idx] = (singular ? central_cell_average(spec, h) : kernel_value(spec, {0.0, 0.0})) +
                     image_sum(0.0, 0.0, true);
        } else {
            v[idx] = image_sum(x, y, false);
        }
    }
    if (spec.kind == KernelKind::Poisson) {
        // Mass of the 2-d kernel beyond the summed block of images, spread uniformly.
        const double rho = (2.0 * images + 1.0) * L / std::sqrt(kPi);
        const double tail = spec.scale / std::hypot(spec.scale, rho) / (L * L);
        for (double& s : v) s += tail;
    }
    return GridFunction(grid, std::move(v));
}

std::string normalization_note(const KernelSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    switch (spec.kind) {
    case KernelKind::Poisson:
        os << "poisson c_n = " << poisson_constant(spec.dim) << " (unit mass, closed form)";
        break;
    case KernelKind::Bessel:
        os << "bessel c_alpha = " << bessel_normalization(spec.dim, spec.order)
           << " (unit L1 mass by radial quadrature; closed form " << bessel_normalization_exact(spec.order)
           << ")";
        break;
    case KernelKind::Riesz:
        os << "riesz gamma = " << riesz_constant(spec.dim, spec.order)
           << " (Gamma((n-a)/2) / (2^a pi^(n/2) Gamma(a/2)))";
        break;
    }
    return os.str();
}

} // namespace fatou
