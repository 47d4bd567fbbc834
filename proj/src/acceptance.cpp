#include "fatou/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "fatou/error.hpp"
#include "fatou/experiments.hpp"
#include "fatou/extension.hpp"
#include "fatou/fractal.hpp"
#include "fatou/kernels.hpp"
#include "fatou/rng.hpp"

namespace fatou {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Spec {
    const char* name;
    double limit_seconds;
};

const Spec kSpecs[kCriterionCount] = {
    {"kernel identities", 30},
    {"poisson eigenfunction exactness", 5},
    {"commutation lemma", 60},
    {"poincare constant band", 120},
    {"nagel-stein band and negative control", 600},
    {"j-uniformity", 300},
    {"frostman/bessel lemma band", 120},
    {"divergence-set dimension", 600},
    {"corkscrew constants", 30},
    {"inclusion lemma", 60},
    {"boundary maximal band", 600},
    {"box-dimension calibration", 30},
};

struct Verdict {
    bool passed = true;
    std::ostringstream detail;

    void check(bool ok, const std::string& what) {
        if (detail.tellp() > 0) detail << "; ";
        detail << (ok ? "" : "FAILED ") << what;
        passed = passed && ok;
    }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

void absorb(Verdict& v, const RunReport& rep, const std::string& prefix = "") {
    for (const auto& o : rep.outcomes) v.check(o.passed, prefix + o.name + " [" + o.detail + "]");
}

ExperimentConfig base(Experiment e, std::vector<int> levels, int seeds) {
    ExperimentConfig cfg;
    cfg.experiment = e;
    cfg.levels = std::move(levels);
    cfg.seeds.clear();
    for (int s = 0; s < seeds; ++s) cfg.seeds.push_back(static_cast<std::uint64_t>(s));
    return cfg;
}

void ac1(Verdict& v) {
    boost::math::quadrature::tanh_sinh<double> ts;
    boost::math::quadrature::exp_sinh<double> es;
    for (int n : {1, 2}) {
        for (double alpha : {0.25, 0.5, 1.0, 1.5}) {
            const auto w = [&](double r) { return (n == 1 ? 2.0 : 2.0 * kPi * r) * bessel_kernel_radial(n, alpha, r); };
            // Head [0, delta] in closed form from the small-r asymptotics.
            const double delta = 1e-10;
            const double ball = n == 1 ? 2.0 * delta : kPi * delta * delta;
            const double head = alpha < n ? ball * n * riesz_kernel_radial(n, alpha, delta) / alpha
                                          : ball * bessel_kernel_radial(n, alpha, delta);
            const double mass = head + ts.integrate(w, delta, 1.0) + es.integrate([&](double r) { return w(1.0 + r); });
            const std::string tag = "n=" + std::to_string(n) + " a=" + num(alpha);
            v.check(std::abs(mass - 1.0) <= 1e-4, tag + " mass-1 " + num(mass - 1.0));
            if (alpha >= n) continue;
            Rng rng(static_cast<std::uint64_t>(n * 100 + alpha * 8), 0xac1);
            int violations = 0;
            for (int i = 0; i < 1000; ++i) {
                const double r = std::exp(rng.uniform(std::log(1e-4), std::log(20.0)));
                if (bessel_kernel_radial(n, alpha, r) > riesz_kernel_radial(n, alpha, r)) ++violations;
            }
            v.check(violations == 0, tag + " G<=I violations " + std::to_string(violations));
            const double ratio = bessel_kernel_radial(n, alpha, 1e-3) / riesz_kernel_radial(n, alpha, 1e-3);
            v.check(ratio >= 0.9 && ratio <= 1.0, tag + " G/I(1e-3) " + num(ratio));
        }
    }
}

void ac2(Verdict& v) {
    const Grid g = make_grid(1, 12, 1.0);
    std::vector<double> vals(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) vals[i] = std::cos(2 * kPi * g.coord(i)[0]);
    const GridFunction f(g, vals);
    const auto heights = default_heights(g);
    const HalfSpaceField u = poisson_extend(f, heights);
    double err = 0.0;
    for (std::size_t k = 0; k < heights.size(); ++k) {
        const double damp = std::exp(-2 * kPi * heights[k]);
        for (std::size_t i = 0; i < g.size(); ++i) err = std::max(err, std::abs(u.slice(k)[i] - damp * vals[i]));
    }
    v.check(err <= 1e-12, "max error " + num(err) + " over " + std::to_string(heights.size()) + " slices");
}

void ac3(Verdict& v) {
    ExperimentConfig cfg = base(Experiment::CommuteLemma, {10}, 20);
    cfg.qs = {1, 2};
    absorb(v, run_experiment(cfg));
}

void ac4(Verdict& v) {
    for (double alpha : {0.3, 0.7}) {
        ExperimentConfig cfg = base(Experiment::Poincare, {10, 12}, 20);
        cfg.alpha = alpha;
        cfg.band_limit = 1.5;
        cfg.samples = 10000;
        absorb(v, run_experiment(cfg), "alpha=" + num(alpha) + " ");
    }
}

void ac5(Verdict& v) {
    ExperimentConfig cfg = base(Experiment::NagelSteinBound, {10, 12, 14}, 20);
    cfg.p = 2;
    cfg.alpha = 0.25;
    cfg.beta = 0.5;
    cfg.band_limit = 3;
    cfg.control_beta = 0.25;
    absorb(v, run_experiment(cfg));
}

void ac6(Verdict& v) {
    ExperimentConfig cfg = base(Experiment::DorronsoroBound, {12}, 10);
    cfg.j_max = 8;
    cfg.band_limit = 2;
    absorb(v, run_experiment(cfg));
}

void ac7(Verdict& v) {
    for (double s : {0.6, 0.75, 0.9}) {
        ExperimentConfig cfg = base(Experiment::FrostmanLemma, {14}, 20);
        cfg.alpha = 0.25;
        cfg.s = s;
        cfg.depths = {12, 16};
        cfg.band_limit = 3;
        absorb(v, run_experiment(cfg), "s=" + num(s) + " ");
    }
}

void ac8(Verdict& v) {
    ExperimentConfig cfg = base(Experiment::DivergenceDimension, {10, 12, 14}, 1);
    cfg.alpha = 0.25;
    cfg.beta = 0.5;
    cfg.beta_prime = {0.5, 0.75, 1.0};
    cfg.window_lo = 4;
    cfg.window_hi = 10;
    cfg.band_limit = 3;
    absorb(v, run_experiment(cfg));
}

void ac9(Verdict& v) {
    ExperimentConfig cfg = base(Experiment::CorkscrewGeometry, {12}, 1);
    cfg.Ms = {0.5, 1, 3};
    cfg.samples = 10000;
    absorb(v, run_experiment(cfg));
}

void ac10(Verdict& v) {
    ExperimentConfig cfg = base(Experiment::InclusionLemma, {12}, 10);
    cfg.beta = 0.5;
    cfg.Ms = {1};
    cfg.samples = 100000;
    absorb(v, run_experiment(cfg));
}

void ac11(Verdict& v) {
    ExperimentConfig cfg = base(Experiment::BoundaryMax, {10, 12}, 10);
    cfg.p = 2;
    cfg.s = 0.25;
    cfg.Ms = {1};
    cfg.teeth = 4;
    cfg.band_limit = 4;
    absorb(v, run_experiment(cfg));
}

void ac12(Verdict& v) {
    const Grid g = make_grid(1, 14, 1.0);
    const auto cantor = box_dimension(cantor_points(g, cantor_measure(std::log(2.0) / std::log(3.0), 14)), 4, 10);
    v.check(std::abs(cantor.slope - 0.6309) <= 0.05, "middle-thirds slope " + num(cantor.slope));
    std::vector<Point> all;
    for (std::size_t i = 0; i < g.size(); ++i) all.push_back(g.coord(i));
    const auto full = box_dimension(make_point_set(g, all), 2, 12);
    v.check(std::abs(full.slope - 1.0) <= 0.05, "interval slope " + num(full.slope));
    const auto single = box_dimension(make_point_set(g, {Point{0.3, 0.0}}), 2, 12);
    v.check(std::abs(single.slope) <= 0.05, "point slope " + num(single.slope));
}

using Runner = void (*)(Verdict&);
const Runner kRunners[kCriterionCount] = {ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10, ac11, ac12};

} // namespace

std::string criterion_name(int id) {
    if (id < 1 || id > kCriterionCount) throw ParameterError("criterion id must be in [1, 12], got " + std::to_string(id));
    return kSpecs[id - 1].name;
}

CriterionResult run_criterion(int id) {
    CriterionResult r;
    r.id = id;
    r.name = criterion_name(id);
    r.limit_seconds = kSpecs[id - 1].limit_seconds;
    Verdict v;
    const auto start = std::chrono::steady_clock::now();
    try {
        kRunners[id - 1](v);
    } catch (const std::exception& e) {
        v.check(false, std::string("error: ") + e.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    v.check(r.seconds < r.limit_seconds, "runtime " + num(r.seconds) + " s < " + num(r.limit_seconds) + " s");
    r.passed = v.passed;
    r.detail = v.detail.str();
    return r;
}

std::vector<CriterionResult> run_acceptance(const std::vector<int>& ids,
                                            const std::function<void(const CriterionResult&)>& on_result) {
    std::vector<int> todo = ids;
    if (todo.empty())
        for (int i = 1; i <= kCriterionCount; ++i) todo.push_back(i);
    for (int id : todo) (void)criterion_name(id);
    std::vector<CriterionResult> out;
    for (int id : todo) {
        out.push_back(run_criterion(id));
        if (on_result) on_result(out.back());
    }
    return out;
}

std::string format_result(const CriterionResult& r) {
    char head[96];
    std::snprintf(head, sizeof head, "AC%-2d %s  %-38s %8.2fs  ", r.id, r.passed ? "PASS" : "FAIL", r.name.c_str(), r.seconds);
    return head + r.detail;
}

} // namespace fatou
