#pragma once

#include <complex>
#include <vector>

#include "fatou/grid.hpp"

namespace fatou::spectral {

using Complex = std::complex<double>;

/// Half spectrum of a real GridFunction (FFTW r2c layout: last axis has N/2+1 bins).
struct Spectrum {
    Grid grid;
    std::vector<Complex> coeffs;

    std::size_t half_bins() const { return grid.points_per_axis() / 2 + 1; }
};

Spectrum forward(const GridFunction& f);
/// Normalised inverse: inverse(forward(f)) == f up to round-off.
GridFunction inverse(const Spectrum& s);

/// Physical frequency (cycles per unit length) of bin k on one axis.
double frequency(const Grid& grid, std::size_t k);

/// Frequency vector of half-spectrum bin `index`, plus whether any axis sits on Nyquist.
struct Bin {
    std::array<double, 2> xi{};
    bool nyquist = false;
};
Bin bin(const Grid& grid, std::size_t index);

/// Multiplies every Fourier coefficient of f by m(xi). If `zero_nyquist`, bins on a
/// Nyquist row/column are zeroed, which odd (imaginary) multipliers need for a real result.
template <typename Multiplier>
GridFunction apply_multiplier(const GridFunction& f, Multiplier&& m, bool zero_nyquist = false) {
    Spectrum s = forward(f);
    for (std::size_t idx = 0; idx < s.coeffs.size(); ++idx) {
        const Bin b = bin(s.grid, idx);
        if (zero_nyquist && b.nyquist) {
            s.coeffs[idx] = 0.0;
        } else {
            s.coeffs[idx] *= Complex(m(b.xi));
        }
    }
    return inverse(s);
}

} // namespace fatou::spectral
