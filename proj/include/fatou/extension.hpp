#pragma once

#include <map>
#include <string>
#include <vector>

#include "fatou/grid.hpp"

namespace fatou {

/// Values u(t_k, x_i) on a strictly decreasing height ladder.
class HalfSpaceField {
public:
    HalfSpaceField() = default;
    HalfSpaceField(Grid grid, std::vector<double> heights, std::vector<GridFunction> slices);

    const Grid& grid() const { return grid_; }
    const std::vector<double>& heights() const { return heights_; }
    const std::vector<GridFunction>& slices() const { return slices_; }
    const GridFunction& slice(std::size_t k) const { return slices_[k]; }
    std::size_t levels() const { return heights_.size(); }

    /// Free-form numeric annotations (e.g. truncation tail bounds).
    std::map<std::string, double> metadata;

private:
    Grid grid_{};
    std::vector<double> heights_;
    std::vector<GridFunction> slices_;
};

/// t0, t0/2, ..., t0 2^-K.
std::vector<double> dyadic_heights(double t0, int K);
/// Default ladder for a grid: t0 = 1, K = levels + 2.
std::vector<double> default_heights(const Grid& grid);

/// Poisson multiplier exp(-2 pi t |xi|) applied to f.
GridFunction poisson_smooth(const GridFunction& f, double t);
HalfSpaceField poisson_extend(const GridFunction& f, const std::vector<double>& heights);

/// w(t,x) = sum_{j=0}^{J} 2^{-alpha_L j} (mean over B(x, min(2^{j+1} t, L/4)) of |f|^r)^{1/r}.
/// metadata["tail_bound"] = 2^{-alpha_L J} / (1 - 2^{-alpha_L}) ||f||_inf.
HalfSpaceField annuli_surrogate(const GridFunction& f, const std::vector<double>& heights, double alpha_L,
                                double r, int J);

/// v_f(t,x) = (mean over B(x, 2t) of |f|^q)^{1/q}, radius capped at L/4.
HalfSpaceField average_field(const GridFunction& f, const std::vector<double>& heights, double q);

} // namespace fatou
