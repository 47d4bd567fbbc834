#include "fatou/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "fatou/error.hpp"
#include "fatou/parallel.hpp"
#include "fatou/spectral.hpp"

namespace fatou {

namespace {

constexpr double kPi = std::numbers::pi;
using spectral::Complex;

double xi_norm(const std::array<double, 2>& xi) { return std::hypot(xi[0], xi[1]); }

double monomial(const Point& y, const MultiIndex& e) {
    double v = 1.0;
    for (int a = 0; a < e[0]; ++a) v *= y[0];
    for (int a = 0; a < e[1]; ++a) v *= y[1];
    return v;
}

// Orthonormal basis of polynomials of degree <= k under the mean inner product on the points y.
struct LocalBasis {
    std::vector<MultiIndex> exps;
    std::vector<std::vector<double>> phi;
    std::vector<std::vector<double>> transform; // phi_a = sum_b transform[a][b] y^exps[b]
};

double mean_dot(const std::vector<double>& a, const std::vector<double>& b) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < a.size(); ++i) s += static_cast<long double>(a[i]) * b[i];
    return static_cast<double>(s / static_cast<long double>(a.size()));
}

LocalBasis build_basis(const std::vector<Point>& y, int dim, int k) {
    LocalBasis basis;
    basis.exps = Polynomial::exponents(dim, k);
    const std::size_t terms = basis.exps.size();
    if (y.size() < terms) {
        std::ostringstream os;
        os << "polynomial projection of degree " << k << " needs " << terms << " points, ball has " << y.size();
        throw NumericError(os.str());
    }
    for (std::size_t a = 0; a < terms; ++a) {
        std::vector<double> v(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) v[i] = monomial(y[i], basis.exps[a]);
        std::vector<double> t(terms, 0.0);
        t[a] = 1.0;
        const double original = std::sqrt(mean_dot(v, v));
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t b = 0; b < a; ++b) {
                const double c = mean_dot(v, basis.phi[b]);
                for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * basis.phi[b][i];
                for (std::size_t m = 0; m < terms; ++m) t[m] -= c * basis.transform[b][m];
            }
        }
        const double norm = std::sqrt(mean_dot(v, v));
        // Squared residual ratio bounds the Gram condition number from below.
        if (!(norm > 1e-4 * original)) {
            std::ostringstream os;
            os << "polynomial projection is ill-conditioned (Gram condition > 1e8) with " << y.size()
               << " points at degree " << k;
            throw NumericError(os.str());
        }
        for (double& x : v) x /= norm;
        for (double& x : t) x /= norm;
        basis.phi.push_back(std::move(v));
        basis.transform.push_back(std::move(t));
    }
    return basis;
}

struct BallSamples {
    std::vector<Point> y;
    std::vector<double> values;
};

BallSamples gather(const GridFunction& f, const Point& center, double radius) {
    const Grid& g = f.grid();
    const long n = static_cast<long>(g.points_per_axis());
    const double h = g.spacing();
    BallSamples out;
    auto range = [&](double c) {
        const long lo = static_cast<long>(std::floor((c - radius) / h));
        const long hi = std::min(static_cast<long>(std::ceil((c + radius) / h)), lo + n - 1);
        return std::pair{lo, hi};
    };
    const auto [lo0, hi0] = range(center[0]);
    auto [lo1, hi1] = g.dim == 2 ? range(center[1]) : std::pair<long, long>{0, 0};
    for (long i = lo0; i <= hi0; ++i) {
        const auto wi = static_cast<std::size_t>(((i % n) + n) % n);
        for (long j = lo1; j <= hi1; ++j) {
            const auto wj = static_cast<std::size_t>(((j % n) + n) % n);
            const std::size_t idx = g.flat_index(wi, wj);
            const Point x = g.coord(idx);
            const Point d{g.wrap_delta(center[0], x[0]), g.dim == 2 ? g.wrap_delta(center[1], x[1]) : 0.0};
            if (std::hypot(d[0], d[1]) < radius) {
                out.y.push_back({d[0] / radius, d[1] / radius});
                out.values.push_back(f[idx]);
            }
        }
    }
    return out;
}

// Projection coefficients onto the orthonormal basis, and the mean absolute residual.
std::pair<std::vector<double>, double> project(const LocalBasis& basis, const std::vector<double>& values) {
    std::vector<double> c(basis.phi.size());
    for (std::size_t a = 0; a < c.size(); ++a) c[a] = mean_dot(values, basis.phi[a]);
    long double resid = 0.0L;
    for (std::size_t i = 0; i < values.size(); ++i) {
        double p = 0.0;
        for (std::size_t a = 0; a < c.size(); ++a) p += c[a] * basis.phi[a][i];
        resid += std::abs(values[i] - p);
    }
    return {c, static_cast<double>(resid / static_cast<long double>(values.size()))};
}

double ball_volume(int dim, double r) { return dim == 1 ? 2.0 * r : kPi * r * r; }

} // namespace

BesselFunction make_bessel_function(GridFunction g, double alpha, double p) {
    if (!(p >= 1.0)) throw ParameterError("BesselFunction requires p >= 1");
    GridFunction f = bessel_smooth(g, alpha);
    return BesselFunction{alpha, std::move(g), std::move(f), p};
}

GridFunction bessel_smooth(const GridFunction& g, double alpha) {
    if (!(alpha >= 0.0)) throw ParameterError("bessel_smooth requires alpha >= 0 (use inverse_bessel)");
    if (alpha == 0.0) return g;
    return spectral::apply_multiplier(g, [alpha](const std::array<double, 2>& xi) {
        const double k = xi_norm(xi);
        return std::pow(1.0 + 4.0 * kPi * kPi * k * k, -0.5 * alpha);
    });
}

GridFunction inverse_bessel(const GridFunction& f, double alpha) {
    if (!(alpha >= 0.0)) throw ParameterError("inverse_bessel requires alpha >= 0");
    if (alpha == 0.0) return f;
    return spectral::apply_multiplier(f, [alpha](const std::array<double, 2>& xi) {
        const double k = xi_norm(xi);
        return std::pow(1.0 + 4.0 * kPi * kPi * k * k, 0.5 * alpha);
    });
}

GridFunction riesz_potential(const GridFunction& g, double alpha) {
    if (!(alpha > 0.0 && alpha < g.grid().dim)) throw ParameterError("riesz_potential requires 0 < alpha < n");
    return spectral::apply_multiplier(g, [alpha](const std::array<double, 2>& xi) {
        const double k = xi_norm(xi);
        return k == 0.0 ? 0.0 : std::pow(2.0 * kPi * k, -alpha);
    });
}

GridFunction riesz_transform(const GridFunction& f, int axis) {
    if (axis < 1 || axis > f.grid().dim) throw ParameterError("riesz_transform axis out of range");
    const int a = axis - 1;
    return spectral::apply_multiplier(
        f,
        [a](const std::array<double, 2>& xi) {
            const double k = xi_norm(xi);
            return k == 0.0 ? Complex(0.0) : Complex(0.0, -xi[a] / k);
        },
        true);
}

GridFunction spectral_derivative(const GridFunction& f, const MultiIndex& gamma) {
    if (gamma[0] < 0 || gamma[1] < 0 || gamma[0] + gamma[1] > 3)
        throw ParameterError("spectral_derivative requires |gamma| <= 3");
    if (f.grid().dim == 1 && gamma[1] != 0) throw ParameterError("multi-index has more axes than the grid");
    if (gamma[0] + gamma[1] == 0) return f;
    const bool odd = (gamma[0] % 2) != 0 || (gamma[1] % 2) != 0;
    return spectral::apply_multiplier(
        f,
        [gamma](const std::array<double, 2>& xi) {
            Complex m(1.0);
            for (int a = 0; a < 2; ++a)
                for (int e = 0; e < gamma[a]; ++e) m *= Complex(0.0, 2.0 * kPi * xi[a]);
            return m;
        },
        odd);
}

std::vector<MultiIndex> Polynomial::exponents(int dim, int degree) {
    std::vector<MultiIndex> out;
    for (int d = 0; d <= degree; ++d) {
        if (dim == 1) {
            out.push_back({d, 0});
        } else {
            for (int a = d; a >= 0; --a) out.push_back({a, d - a});
        }
    }
    return out;
}

double Polynomial::operator()(const Point& x) const {
    auto wrap = [this](double a, double b) {
        double d = std::fmod(b - a, extent);
        if (d > 0.5 * extent) d -= extent;
        if (d < -0.5 * extent) d += extent;
        return d;
    };
    const Point y{wrap(center[0], x[0]) / radius, dim == 2 ? wrap(center[1], x[1]) / radius : 0.0};
    const auto exps = exponents(dim, degree);
    double v = 0.0;
    for (std::size_t a = 0; a < exps.size(); ++a) v += coefficients[a] * monomial(y, exps[a]);
    return v;
}

Polynomial poly_project(const GridFunction& f, const Point& center, double radius, int k) {
    if (k < 0 || k > 3) throw ParameterError("poly_project requires 0 <= k <= 3");
    if (!(radius > 0.0)) throw ParameterError("poly_project requires radius > 0");
    const BallSamples s = gather(f, center, radius);
    const int dim = f.grid().dim;
    const LocalBasis basis = build_basis(s.y, dim, k);
    const auto [c, resid] = project(basis, s.values);
    Polynomial p{dim, k, center, radius, f.grid().extent, std::vector<double>(basis.exps.size(), 0.0)};
    for (std::size_t a = 0; a < c.size(); ++a)
        for (std::size_t b = 0; b < c.size(); ++b) p.coefficients[b] += c[a] * basis.transform[a][b];
    return p;
}

double oscillation(const GridFunction& f, const Point& center, double radius, int k) {
    const BallSamples s = gather(f, center, radius);
    const LocalBasis basis = build_basis(s.y, f.grid().dim, k);
    return project(basis, s.values).second;
}

GridFunction sharp_maximal(const GridFunction& f, double alpha, std::span<const double> scales) {
    if (scales.empty()) throw ParameterError("sharp_maximal requires at least one scale");
    if (!(alpha > 0.0)) throw ParameterError("sharp_maximal requires alpha > 0");
    const Grid& g = f.grid();
    const double h = g.spacing();
    const long n = static_cast<long>(g.points_per_axis());
    const int k = std::min(3, static_cast<int>(std::floor(alpha)));
    std::vector<double> out(g.size(), 0.0);
    for (double r : scales) {
        if (r < 4.0 * h * (1.0 - 1e-12) || r > 0.25 * g.extent * (1.0 + 1e-12)) {
            std::ostringstream os;
            os << "sharp_maximal scale " << r << " outside [4h, L/4] = [" << 4.0 * h << ", " << 0.25 * g.extent << "]";
            throw ParameterError(os.str());
        }
        const auto offsets = ball_offsets(g, r);
        std::vector<Point> y;
        y.reserve(offsets.size());
        for (const auto& o : offsets) y.push_back({o[0] * h / r, o[1] * h / r});
        const LocalBasis basis = build_basis(y, g.dim, k);
        const long stride = std::max(1L, static_cast<long>(std::floor(r / (2.0 * h))));
        std::vector<long> axis_centres;
        for (long c = 0; c < n; c += stride) axis_centres.push_back(c);
        const long per_axis = static_cast<long>(axis_centres.size());
        const long centres = g.dim == 1 ? per_axis : per_axis * per_axis;
        const double weight = std::pow(ball_volume(g.dim, r), -alpha / g.dim);
        auto centre_index = [&](long c, long o0, long o1) {
            const long ci = g.dim == 1 ? axis_centres[c] : axis_centres[c / per_axis];
            const long cj = g.dim == 1 ? 0 : axis_centres[c % per_axis];
            const auto i = static_cast<std::size_t>(((ci + o0) % n + n) % n);
            const auto j = static_cast<std::size_t>(((cj + o1) % n + n) % n);
            return g.flat_index(i, j);
        };
        std::vector<double> value(static_cast<std::size_t>(centres));
        const int threads = thread_count();
#pragma omp parallel for schedule(static) num_threads(threads)
        for (long c = 0; c < centres; ++c) {
            std::vector<double> vals(offsets.size());
            for (std::size_t o = 0; o < offsets.size(); ++o) vals[o] = f[centre_index(c, offsets[o][0], offsets[o][1])];
            value[static_cast<std::size_t>(c)] = weight * project(basis, vals).second;
        }
        for (long c = 0; c < centres; ++c) {
            for (const auto& o : offsets) {
                double& slot = out[centre_index(c, o[0], o[1])];
                slot = std::max(slot, value[static_cast<std::size_t>(c)]);
            }
        }
    }
    return GridFunction(g, std::move(out));
}

double slobodeckij_seminorm(const GridFunction& f, double sigma, double p, std::span<const std::size_t> domain) {
    if (!(sigma > 0.0 && sigma < 1.0)) throw ParameterError("slobodeckij_seminorm requires sigma in (0,1)");
    if (!(p >= 1.0)) throw ParameterError("slobodeckij_seminorm requires p >= 1");
    const Grid& g = f.grid();
    const double expo = g.dim + sigma * p;
    const double w = g.cell_volume() * g.cell_volume();
    std::vector<double> partial(domain.size(), 0.0);
    const int threads = thread_count();
    const long m = static_cast<long>(domain.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(threads)
    for (long a = 0; a < m; ++a) {
        const std::size_t i = domain[static_cast<std::size_t>(a)];
        const Point xi = g.coord(i);
        long double s = 0.0L;
        for (std::size_t b = 0; b < domain.size(); ++b) {
            const std::size_t j = domain[b];
            if (j == i) continue;
            const double d = g.distance(xi, g.coord(j));
            const double diff = std::abs(f[i] - f[j]);
            const double num = p == 2.0 ? diff * diff : std::pow(diff, p);
            s += num / std::pow(d, expo);
        }
        partial[static_cast<std::size_t>(a)] = static_cast<double>(s);
    }
    long double total = 0.0L;
    for (double v : partial) total += v;
    return std::pow(static_cast<double>(total) * w, 1.0 / p);
}

double slobodeckij_seminorm(const GridFunction& f, double sigma, double p) {
    std::vector<std::size_t> all(f.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
    return slobodeckij_seminorm(f, sigma, p, all);
}

Representative representative_value(const BesselFunction& bf, const Point& x, std::span<const double> radii,
                                     double tol) {
    if (radii.size() < 3) throw ParameterError("representative_value needs at least 3 radii");
    const double h = bf.f.grid().spacing();
    for (std::size_t i = 0; i < radii.size(); ++i) {
        if (i > 0 && !(radii[i] < radii[i - 1])) throw ParameterError("radii must be strictly decreasing");
        if (radii[i] < 4.0 * h * (1.0 - 1e-12)) throw ParameterError("radii must be >= 4h");
    }
    Representative rep;
    for (double r : radii) rep.averages.push_back(ball_mean(bf.f, x, r));
    const auto& a = rep.averages;
    const std::size_t m = a.size();
    bool cauchy = true;
    for (std::size_t i = m - 3; i + 1 < m; ++i) {
        if (!(std::abs(a[i + 1] - a[i]) < tol * (1.0 + std::abs(a[i])))) cauchy = false;
    }
    rep.diverged = !cauchy;
    rep.value = a.back();
    return rep;
}

} // namespace fatou
