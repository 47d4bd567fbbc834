#include "fatou/spectral.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "fatou/error.hpp"

namespace fatou::spectral {

namespace {

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
using RealBuf = std::unique_ptr<double, FftwFree>;
using ComplexBuf = std::unique_ptr<fftw_complex, FftwFree>;

RealBuf alloc_real(std::size_t n) {
    return RealBuf(static_cast<double*>(fftw_malloc(sizeof(double) * n)));
}
ComplexBuf alloc_complex(std::size_t n) {
    return ComplexBuf(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n)));
}

// FFTW planning is not thread safe; execution with fresh arrays is. Plans are made once
// per (dim, levels, direction) and reused through the new-array execute interface.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(const Grid& g, bool forward) {
        const auto key = std::make_tuple(g.dim, g.levels, forward);
        std::lock_guard lock(mutex_);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        const int n = static_cast<int>(g.points_per_axis());
        const std::size_t real_size = g.size();
        const std::size_t half = g.dim == 1 ? g.points_per_axis() / 2 + 1
                                            : g.points_per_axis() * (g.points_per_axis() / 2 + 1);
        RealBuf r = alloc_real(real_size);
        ComplexBuf c = alloc_complex(half);
        fftw_plan plan = nullptr;
        if (forward) {
            plan = g.dim == 1 ? fftw_plan_dft_r2c_1d(n, r.get(), c.get(), FFTW_ESTIMATE)
                              : fftw_plan_dft_r2c_2d(n, n, r.get(), c.get(), FFTW_ESTIMATE);
        } else {
            plan = g.dim == 1 ? fftw_plan_dft_c2r_1d(n, c.get(), r.get(), FFTW_ESTIMATE)
                              : fftw_plan_dft_c2r_2d(n, n, c.get(), r.get(), FFTW_ESTIMATE);
        }
        if (plan == nullptr) throw NumericError("FFTW failed to create a plan");
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, bool>, fftw_plan> plans_;
};

std::size_t half_size(const Grid& g) {
    const std::size_t n = g.points_per_axis();
    return g.dim == 1 ? n / 2 + 1 : n * (n / 2 + 1);
}

} // namespace

Spectrum forward(const GridFunction& f) {
    const Grid& g = f.grid();
    fftw_plan plan = PlanCache::instance().get(g, true);
    const std::size_t half = half_size(g);
    RealBuf in = alloc_real(g.size());
    ComplexBuf out = alloc_complex(half);
    std::memcpy(in.get(), f.samples().data(), sizeof(double) * g.size());
    fftw_execute_dft_r2c(plan, in.get(), out.get());
    Spectrum s{g, std::vector<Complex>(half)};
    for (std::size_t i = 0; i < half; ++i) s.coeffs[i] = Complex(out.get()[i][0], out.get()[i][1]);
    return s;
}

GridFunction inverse(const Spectrum& s) {
    const Grid& g = s.grid;
    if (s.coeffs.size() != half_size(g)) throw ParameterError("spectrum size does not match grid");
    fftw_plan plan = PlanCache::instance().get(g, false);
    ComplexBuf in = alloc_complex(s.coeffs.size());
    RealBuf out = alloc_real(g.size());
    for (std::size_t i = 0; i < s.coeffs.size(); ++i) {
        in.get()[i][0] = s.coeffs[i].real();
        in.get()[i][1] = s.coeffs[i].imag();
    }
    fftw_execute_dft_c2r(plan, in.get(), out.get());
    const double norm = 1.0 / static_cast<double>(g.size());
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = out.get()[i] * norm;
    return GridFunction(g, std::move(v));
}

double frequency(const Grid& grid, std::size_t k) {
    const std::size_t n = grid.points_per_axis();
    const double kk = k <= n / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
    return kk / grid.extent;
}

Bin bin(const Grid& grid, std::size_t index) {
    const std::size_t n = grid.points_per_axis();
    const std::size_t half = n / 2 + 1;
    Bin b;
    if (grid.dim == 1) {
        b.xi = {static_cast<double>(index) / grid.extent, 0.0};
        b.nyquist = index == n / 2;
        return b;
    }
    const std::size_t i = index / half;
    const std::size_t j = index % half;
    b.xi = {frequency(grid, i), static_cast<double>(j) / grid.extent};
    b.nyquist = i == n / 2 || j == n / 2;
    return b;
}

} // namespace fatou::spectral
