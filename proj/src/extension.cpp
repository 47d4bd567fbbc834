#include "fatou/extension.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "fatou/error.hpp"
#include "fatou/spectral.hpp"

namespace fatou {

HalfSpaceField::HalfSpaceField(Grid grid, std::vector<double> heights, std::vector<GridFunction> slices)
    : grid_(grid), heights_(std::move(heights)), slices_(std::move(slices)) {
    if (heights_.empty()) throw ParameterError("HalfSpaceField needs at least one height");
    if (heights_.size() != slices_.size()) throw ParameterError("HalfSpaceField: one slice per height required");
    for (std::size_t k = 0; k < heights_.size(); ++k) {
        if (!(heights_[k] > 0.0) || !std::isfinite(heights_[k])) throw ParameterError("heights must be positive");
        if (k > 0 && !(heights_[k] < heights_[k - 1])) throw ParameterError("heights must be strictly decreasing");
        if (!(slices_[k].grid() == grid_)) throw ParameterError("HalfSpaceField: slice grid mismatch");
    }
}

std::vector<double> dyadic_heights(double t0, int K) {
    if (!(t0 > 0.0) || K < 0) throw ParameterError("dyadic_heights requires t0 > 0 and K >= 0");
    std::vector<double> h(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k) h[static_cast<std::size_t>(k)] = std::ldexp(t0, -k);
    return h;
}

std::vector<double> default_heights(const Grid& grid) { return dyadic_heights(1.0, grid.levels + 2); }

GridFunction poisson_smooth(const GridFunction& f, double t) {
    if (!(t > 0.0)) throw ParameterError("poisson_smooth requires t > 0");
    return spectral::apply_multiplier(f, [t](const std::array<double, 2>& xi) {
        return std::exp(-2.0 * std::numbers::pi * t * std::hypot(xi[0], xi[1]));
    });
}

HalfSpaceField poisson_extend(const GridFunction& f, const std::vector<double>& heights) {
    const spectral::Spectrum s = spectral::forward(f);
    std::vector<double> mag(s.coeffs.size());
    for (std::size_t i = 0; i < mag.size(); ++i) {
        const auto b = spectral::bin(f.grid(), i);
        mag[i] = std::hypot(b.xi[0], b.xi[1]);
    }
    std::vector<GridFunction> slices;
    slices.reserve(heights.size());
    for (double t : heights) {
        if (!(t > 0.0)) throw ParameterError("poisson_extend requires positive heights");
        spectral::Spectrum st = s;
        for (std::size_t i = 0; i < mag.size(); ++i) st.coeffs[i] *= std::exp(-2.0 * std::numbers::pi * t * mag[i]);
        slices.push_back(spectral::inverse(st));
    }
    return HalfSpaceField(f.grid(), heights, std::move(slices));
}

HalfSpaceField annuli_surrogate(const GridFunction& f, const std::vector<double>& heights, double alpha_L,
                                double r, int J) {
    if (!(alpha_L > 0.0 && alpha_L <= 1.0)) throw ParameterError("annuli_surrogate requires alpha_L in (0,1]");
    if (!(r >= 1.0)) throw ParameterError("annuli_surrogate requires r >= 1");
    if (J < 1) throw ParameterError("annuli_surrogate requires J >= 1");
    const Grid& g = f.grid();
    const double cap = 0.25 * g.extent;
    std::map<double, GridFunction> cache;
    auto averages = [&](double radius) -> const GridFunction& {
        auto it = cache.find(radius);
        if (it == cache.end()) it = cache.emplace(radius, ball_average_field(f, radius, r)).first;
        return it->second;
    };
    std::vector<GridFunction> slices;
    for (double t : heights) {
        std::vector<double> w(g.size(), 0.0);
        for (int j = 0; j <= J; ++j) {
            const double weight = std::pow(2.0, -alpha_L * j);
            const GridFunction& a = averages(std::min(std::ldexp(t, j + 1), cap));
            for (std::size_t i = 0; i < w.size(); ++i) w[i] += weight * a[i];
        }
        slices.emplace_back(g, std::move(w));
    }
    HalfSpaceField out(g, heights, std::move(slices));
    out.metadata["tail_bound"] = std::pow(2.0, -alpha_L * J) / (1.0 - std::pow(2.0, -alpha_L)) * lp_norm(f, HUGE_VAL);
    out.metadata["alpha_L"] = alpha_L;
    out.metadata["r"] = r;
    out.metadata["J"] = J;
    return out;
}

HalfSpaceField average_field(const GridFunction& f, const std::vector<double>& heights, double q) {
    const double cap = 0.25 * f.grid().extent;
    std::vector<GridFunction> slices;
    for (double t : heights) slices.push_back(ball_average_field(f, std::min(2.0 * t, cap), q));
    return HalfSpaceField(f.grid(), heights, std::move(slices));
}

} // namespace fatou
