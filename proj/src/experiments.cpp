#include "fatou/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <map>
#include <sstream>

#include "json.hpp"

#include "fatou/error.hpp"
#include "fatou/extension.hpp"
#include "fatou/fractal.hpp"
#include "fatou/io.hpp"
#include "fatou/lipschitz.hpp"
#include "fatou/maximal.hpp"
#include "fatou/parallel.hpp"
#include "fatou/potentials.hpp"
#include "fatou/random_fields.hpp"

namespace fatou {

using nlohmann::json;

namespace {

const std::vector<std::pair<Experiment, std::string>> kNames = {
    {Experiment::NagelSteinBound, "nagel-stein-bound"},
    {Experiment::DorronsoroBound, "dorronsoro-bound"},
    {Experiment::DivergenceDimension, "divergence-dimension"},
    {Experiment::FrostmanLemma, "frostman-lemma"},
    {Experiment::CommuteLemma, "commute-lemma"},
    {Experiment::Poincare, "poincare"},
    {Experiment::CorkscrewGeometry, "corkscrew-geometry"},
    {Experiment::InclusionLemma, "inclusion-lemma"},
    {Experiment::BoundaryMax, "boundary-max"},
};

std::string fmt(double v, int prec = 6) {
    std::ostringstream os;
    os << std::setprecision(prec) << v;
    return os.str();
}

void require(bool ok, const std::string& what) {
    if (!ok) throw ParameterError("invalid experiment config: " + what);
}

Grid grid_for(const ExperimentConfig& cfg, int level) { return make_grid(cfg.dim, level, cfg.extent); }

Outcome band_outcome(const Band& b, double limit) {
    return Outcome{"band " + b.quantity + " max/min < " + fmt(limit), b.ratio() < limit,
                   "min " + fmt(b.min) + ", max " + fmt(b.max) + ", ratio " + fmt(b.ratio())};
}

// Mean of `quantity` per level, as a curve against N = 2^level.
Curve level_curve(const std::vector<ReportRow>& rows, const std::string& quantity) {
    std::map<int, std::pair<double, int>> acc;
    for (const auto& r : rows) {
        if (r.quantity != quantity) continue;
        acc[r.level].first += r.value;
        acc[r.level].second += 1;
    }
    Curve c{quantity, {}, {}, "N", quantity};
    for (const auto& [lvl, sum] : acc) {
        c.x.push_back(std::ldexp(1.0, lvl));
        c.y.push_back(sum.first / sum.second);
    }
    return c;
}

// ---------------------------------------------------------------------------

RunReport nagel_stein(const ExperimentConfig& cfg) {
    RunReport rep;
    const double beta = effective_beta(cfg);
    const ApproachRegionSpec spec{beta, cfg.aperture, 1.0};
    for (int level : cfg.levels) {
        const Grid g = grid_for(cfg, level);
        const auto heights = default_heights(g);
        std::vector<double> ratio(cfg.seeds.size());
        parallel_for(cfg.seeds.size(), [&](std::size_t k) {
            Rng rng(cfg.seeds[k]);
            const GridFunction data = random_density(g, rng);
            const HalfSpaceField u = poisson_extend(bessel_smooth(data, cfg.alpha), heights);
            ratio[k] = lp_norm(tangential_max(u, spec), cfg.p) / lp_norm(data, cfg.p);
        });
        for (std::size_t k = 0; k < ratio.size(); ++k) rep.rows.push_back({level, cfg.seeds[k], "ratio", ratio[k]});
        if (cfg.control_beta) {
            const GridFunction spike = unit_spike(g, Point{0.5 * cfg.extent, 0.5 * cfg.extent}, cfg.p);
            const HalfSpaceField u = poisson_extend(bessel_smooth(spike, cfg.alpha), heights);
            const double v = lp_norm(tangential_max(u, ApproachRegionSpec{*cfg.control_beta, cfg.aperture, 1.0}), cfg.p) /
                             lp_norm(spike, cfg.p);
            rep.rows.push_back({level, 0, "control_ratio", v});
        }
    }
    rep.bands.push_back(band_of(rep.rows, "ratio"));
    rep.outcomes.push_back(band_outcome(rep.bands.back(), cfg.band_limit));
    rep.curves.push_back(level_curve(rep.rows, "ratio"));
    if (cfg.control_beta) {
        const Curve c = level_curve(rep.rows, "control_ratio");
        const double growth = c.y.back() / c.y.front();
        rep.outcomes.push_back({"negative control (beta = " + fmt(*cfg.control_beta) + ", spike data) grows > x2", growth > 2.0,
                                "ratio " + fmt(c.y.front()) + " -> " + fmt(c.y.back()) + ", growth x" + fmt(growth)});
        rep.curves.push_back(c);
    }
    return rep;
}

RunReport dorronsoro(const ExperimentConfig& cfg) {
    RunReport rep;
    const double beta = effective_beta(cfg);
    double worst = 0.0;
    for (int level : cfg.levels) {
        const Grid g = grid_for(cfg, level);
        const auto heights = default_heights(g);
        std::vector<std::vector<double>> vals(cfg.seeds.size());
        parallel_for(cfg.seeds.size(), [&](std::size_t k) {
            Rng rng(cfg.seeds[k]);
            const GridFunction f = random_density(g, rng);
            const HalfSpaceField v = poisson_extend(f, heights);
            const double norm = lp_norm(f, cfg.p);
            for (int j = 0; j <= cfg.j_max; ++j)
                vals[k].push_back(lp_norm(dilated_mitigated_max(v, cfg.p, beta, j, cfg.aperture), cfg.p) / norm);
        });
        for (std::size_t k = 0; k < vals.size(); ++k) {
            for (int j = 0; j <= cfg.j_max; ++j) rep.rows.push_back({level, cfg.seeds[k], "j" + std::to_string(j), vals[k][j]});
            const auto [lo, hi] = std::minmax_element(vals[k].begin(), vals[k].end());
            worst = std::max(worst, *hi / *lo);
        }
    }
    for (int j = 0; j <= cfg.j_max; ++j) rep.bands.push_back(band_of(rep.rows, "j" + std::to_string(j)));
    rep.outcomes.push_back({"per-seed max_j/min_j < " + fmt(cfg.band_limit), worst < cfg.band_limit, "worst x" + fmt(worst)});
    Curve c{"mean ratio over j", {}, {}, "2^j", "ratio"};
    for (int j = 0; j <= cfg.j_max; ++j) {
        double sum = 0.0;
        int n = 0;
        for (const auto& r : rep.rows) {
            if (r.quantity == "j" + std::to_string(j)) {
                sum += r.value;
                ++n;
            }
        }
        c.x.push_back(std::ldexp(1.0, j));
        c.y.push_back(sum / n);
    }
    rep.curves.push_back(c);
    return rep;
}

GridFunction cantor_spikes(const Grid& g, double s, int depth, double p) {
    const CantorMeasure mu = cantor_measure(s, depth);
    std::vector<double> v(g.size(), 0.0);
    for (double a : mu.left) v[g.nearest_index(Point{(a + 0.5 * mu.length) * g.extent, 0.0})] += 1.0;
    GridFunction out(g, std::move(v));
    return scale(out, 1.0 / lp_norm(out, p));
}

RunReport divergence_dimension(const ExperimentConfig& cfg) {
    RunReport rep;
    const int n = cfg.dim;
    const double beta = effective_beta(cfg);
    std::vector<double> bps = cfg.beta_prime;
    if (bps.empty()) bps = {beta, 0.5 * (beta + 1.0), 1.0};
    const int level = cfg.levels.back();
    const Grid g = grid_for(cfg, level);
    const auto heights = default_heights(g);
    const GridFunction data = cantor_spikes(g, cfg.cantor_s, cfg.cantor_depth, cfg.p);
    const GridFunction f = bessel_smooth(data, cfg.alpha);
    const HalfSpaceField u = poisson_extend(f, heights);
    const double eps = cfg.eps * lp_norm(f, HUGE_VAL);
    const double t_min = heights.back();
    rep.notes.push_back("eps = " + fmt(eps) + " (" + fmt(cfg.eps) + " ||f||_inf), t_min = " + fmt(t_min));
    for (double bp : bps) {
        const PointSet set = divergence_set(u, f, ApproachRegionSpec{bp, cfg.aperture, 1.0}, eps, t_min);
        const BoxDimension d = box_dimension(set, cfg.window_lo, cfg.window_hi);
        const double bound = n - n * (bp - beta);
        const std::string tag = "beta'=" + fmt(bp, 4);
        rep.rows.push_back({level, 0, "dim " + tag, d.slope});
        rep.rows.push_back({level, 0, "size " + tag, static_cast<double>(set.points.size())});
        rep.outcomes.push_back({"box dimension " + tag + " <= " + fmt(bound) + " + 0.1", d.slope <= bound + 0.1,
                                "slope " + fmt(d.slope) + ", r2 " + fmt(d.r2) + ", " + std::to_string(set.points.size()) +
                                    " points" + (d.empty ? " (empty set)" : "")});
        Curve c{"boxdim " + tag, {}, {}, "scale", "count"};
        for (int m = cfg.window_lo; m <= cfg.window_hi; ++m) {
            c.x.push_back(std::ldexp(1.0, m));
            c.y.push_back(std::max<double>(1.0, static_cast<double>(d.counts[m - cfg.window_lo])));
        }
        rep.curves.push_back(c);
        if (std::abs(bp - beta) < 1e-12) {
            rep.notes.push_back("limiting case covered by maximal bound");
            for (int lvl : cfg.levels) {
                const Grid gl = grid_for(cfg, lvl);
                const GridFunction dl = cantor_spikes(gl, cfg.cantor_s, cfg.cantor_depth, cfg.p);
                const HalfSpaceField ul = poisson_extend(bessel_smooth(dl, cfg.alpha), default_heights(gl));
                rep.rows.push_back({lvl, 0, "maximal_ratio",
                                    lp_norm(tangential_max(ul, ApproachRegionSpec{beta, cfg.aperture, 1.0}), cfg.p)});
            }
            const Band b = band_of(rep.rows, "maximal_ratio");
            rep.bands.push_back(b);
            rep.outcomes.push_back(band_outcome(b, cfg.band_limit));
        }
    }
    return rep;
}

RunReport frostman_lemma(const ExperimentConfig& cfg) {
    RunReport rep;
    const Grid g = grid_for(cfg, cfg.levels.back());
    for (int depth : cfg.depths) {
        const CantorMeasure mu = cantor_measure(cfg.s, depth);
        const double cs = frostman_constant(mu, frostman_radii(mu, 4));
        rep.rows.push_back({depth, 0, "frostman_constant", cs});
        std::vector<double> ratio(cfg.seeds.size());
        parallel_for(cfg.seeds.size(), [&](std::size_t k) {
            Rng rng(cfg.seeds[k]);
            const GridFunction data = random_density(g, rng);
            const GridFunction f = map(bessel_smooth(data, cfg.alpha), [](double v) { return std::abs(v); });
            ratio[k] = integrate_against(f, mu) / lp_norm(data, cfg.p);
        });
        for (std::size_t k = 0; k < ratio.size(); ++k) {
            rep.rows.push_back({depth, cfg.seeds[k], "ratio", ratio[k]});
            rep.rows.push_back({depth, cfg.seeds[k], "normalized_ratio", ratio[k] / std::max(std::pow(cs, 1.0 / cfg.p), 1.0)});
        }
    }
    rep.notes.push_back("level column carries the Cantor depth");
    rep.bands.push_back(band_of(rep.rows, "ratio"));
    rep.bands.push_back(band_of(rep.rows, "frostman_constant"));
    rep.outcomes.push_back(band_outcome(rep.bands.front(), cfg.band_limit));
    return rep;
}

RunReport commute_lemma(const ExperimentConfig& cfg) {
    RunReport rep;
    double worst = -HUGE_VAL;
    for (int level : cfg.levels) {
        const Grid g = grid_for(cfg, level);
        std::vector<double> excess(cfg.seeds.size(), -HUGE_VAL);
        parallel_for(cfg.seeds.size(), [&](std::size_t k) {
            Rng rng(cfg.seeds[k]);
            const GridFunction G = random_density(g, rng);
            const GridFunction data = random_density(g, rng);
            for (double q : cfg.qs) {
                const GridFunction lhs = hl_max(fft_convolve(G, data), q);
                const GridFunction rhs = fft_convolve(G, hl_max(data, q));
                for (std::size_t i = 0; i < g.size(); ++i) excess[k] = std::max(excess[k], lhs[i] - rhs[i]);
            }
        });
        for (std::size_t k = 0; k < excess.size(); ++k) {
            rep.rows.push_back({level, cfg.seeds[k], "max_excess", excess[k]});
            worst = std::max(worst, excess[k]);
        }
    }
    rep.outcomes.push_back({"M_q(G*g) <= G*M_q(g) + 1e-8 everywhere", worst <= 1e-8, "largest excess " + fmt(worst)});
    return rep;
}

RunReport poincare(const ExperimentConfig& cfg) {
    RunReport rep;
    for (int level : cfg.levels) {
        const Grid g = grid_for(cfg, level);
        std::vector<double> C(cfg.seeds.size());
        parallel_for(cfg.seeds.size(), [&](std::size_t k) {
            Rng rng(cfg.seeds[k]);
            const GridFunction data = random_density(g, rng);
            const GridFunction f = bessel_smooth(data, cfg.alpha);
            const GridFunction M = hl_max(data, 1.0);
            Rng pairs(cfg.seeds[k], 0x9a1c);
            double best = 0.0;
            for (std::size_t s = 0; s < cfg.samples; ++s) {
                const std::size_t i = pairs.below(g.size());
                const std::size_t j = pairs.below(g.size());
                if (i == j) continue;
                const double d = g.distance(g.coord(i), g.coord(j));
                best = std::max(best, std::abs(f[i] - f[j]) / (std::pow(d, cfg.alpha) * (M[i] + M[j])));
            }
            C[k] = best;
        });
        for (std::size_t k = 0; k < C.size(); ++k) rep.rows.push_back({level, cfg.seeds[k], "C", C[k]});
    }
    rep.bands.push_back(band_of(rep.rows, "C"));
    rep.outcomes.push_back(band_outcome(rep.bands.back(), cfg.band_limit));
    rep.curves.push_back(level_curve(rep.rows, "C"));
    return rep;
}

RunReport corkscrew_geometry(const ExperimentConfig& cfg) {
    RunReport rep;
    const int level = cfg.levels.front();
    const Grid g = grid_for(cfg, level);
    const double h = g.spacing();
    for (double M : cfg.Ms) {
        const LipschitzGraph graph = sawtooth_graph(g, M, cfg.teeth);
        const double kappa = corkscrew_kappa(graph.M);
        Rng rng(cfg.seeds.front(), 0xc0c);
        std::size_t violations = 0;
        double worst = HUGE_VAL;
        for (std::size_t s = 0; s < cfg.samples; ++s) {
            Point x{rng.uniform(0.0, g.extent), g.dim == 2 ? rng.uniform(0.0, g.extent) : 0.0};
            const double t = std::exp(rng.uniform(std::log(h), 0.0));
            const BoundaryPoint q = boundary_point(graph, x);
            const double d = graph_distance(graph, corkscrew(graph, q, t));
            const double slack = d - (kappa * t - 2.0 * h);
            worst = std::min(worst, slack);
            if (slack < 0.0 || d > t * (1.0 + 1e-12)) ++violations;
        }
        const std::string tag = "M=" + fmt(M);
        rep.rows.push_back({level, cfg.seeds.front(), "violations " + tag, static_cast<double>(violations)});
        rep.rows.push_back({level, cfg.seeds.front(), "min_slack " + tag, worst});
        rep.outcomes.push_back({"corkscrew kappa(M) t - 2h <= d <= t, " + tag, violations == 0,
                                std::to_string(violations) + " violations in " + std::to_string(cfg.samples) +
                                    ", certified M " + fmt(graph.M) + ", min slack " + fmt(worst)});
    }
    return rep;
}

RunReport inclusion_lemma(const ExperimentConfig& cfg) {
    RunReport rep;
    const int level = cfg.levels.front();
    const Grid g = grid_for(cfg, level);
    const double beta = effective_beta(cfg);
    std::vector<InclusionReport> reports(cfg.seeds.size());
    parallel_for(cfg.seeds.size(), [&](std::size_t k) {
        Rng rng(cfg.seeds[k], 0x9e0);
        const LipschitzGraph graph = random_graph(g, rng, cfg.Ms.front());
        reports[k] = region_inclusion_check(graph, beta, cfg.c, cfg.samples, cfg.seeds[k]);
    });
    std::size_t violations = 0, short_runs = 0;
    for (std::size_t k = 0; k < reports.size(); ++k) {
        rep.rows.push_back({level, cfg.seeds[k], "violations", static_cast<double>(reports[k].violations)});
        rep.rows.push_back({level, cfg.seeds[k], "accepted", static_cast<double>(reports[k].accepted)});
        violations += reports[k].violations;
        short_runs += reports[k].accepted < cfg.samples;
    }
    rep.outcomes.push_back({"inclusion: 0 violations", violations == 0 && short_runs == 0,
                            std::to_string(violations) + " violations over " + std::to_string(reports.size()) + " profiles x " +
                                std::to_string(cfg.samples) + " samples" +
                                (short_runs ? ", " + std::to_string(short_runs) + " profiles under-sampled" : "")});
    Rng rng(cfg.seeds.front(), 0x9e0);
    const LipschitzGraph graph = random_graph(g, rng, cfg.Ms.front());
    const InclusionReport control =
        region_inclusion_check(graph, beta, cfg.c, std::max<std::size_t>(1000, cfg.samples / 10), cfg.seeds.front(), 0.5);
    rep.rows.push_back({level, cfg.seeds.front(), "control_violations", static_cast<double>(control.violations)});
    rep.outcomes.push_back({"negative control (target aperture (1+c)/2) finds a violation", control.violations >= 1,
                            std::to_string(control.violations) + " violations in " + std::to_string(control.accepted)});
    return rep;
}

RunReport boundary_max(const ExperimentConfig& cfg) {
    RunReport rep;
    const double beta = effective_beta(cfg);
    BoundaryMaxParams params;
    params.p = cfg.p;
    params.p0 = cfg.p0;
    params.alpha_L = cfg.alpha_L;
    params.J = cfg.J;
    for (int level : cfg.levels) {
        const Grid g = grid_for(cfg, level);
        const LipschitzGraph graph = sawtooth_graph(g, cfg.Ms.front(), cfg.teeth);
        std::vector<double> ratio(cfg.seeds.size());
        parallel_for(cfg.seeds.size(), [&](std::size_t k) {
            Rng rng(cfg.seeds[k]);
            const GridFunction f = random_density(g, rng);
            const GridFunction m = boundary_tangential_max(graph, f, beta, cfg.c, params);
            ratio[k] = surface_lp_norm(graph, m, cfg.p) / boundary_seminorm(graph, f, cfg.s, cfg.p);
        });
        for (std::size_t k = 0; k < ratio.size(); ++k) rep.rows.push_back({level, cfg.seeds[k], "ratio", ratio[k]});
    }
    rep.bands.push_back(band_of(rep.rows, "ratio"));
    rep.outcomes.push_back(band_outcome(rep.bands.back(), cfg.band_limit));
    rep.curves.push_back(level_curve(rep.rows, "ratio"));
    return rep;
}

std::string sanitize(const std::string& s) {
    std::string out;
    for (char ch : s) out += std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' ? ch : '_';
    return out;
}

} // namespace

std::string experiment_name(Experiment e) {
    for (const auto& [k, v] : kNames)
        if (k == e) return v;
    throw ParameterError("unknown experiment");
}

Experiment parse_experiment(const std::string& name) {
    for (const auto& [k, v] : kNames)
        if (v == name) return k;
    std::string all;
    for (const auto& kv : kNames) all += (all.empty() ? "" : ", ") + kv.second;
    throw ParameterError("unknown experiment '" + name + "' (expected one of " + all + ")");
}

double effective_beta(const ExperimentConfig& cfg) {
    if (cfg.beta) return *cfg.beta;
    const double order = cfg.experiment == Experiment::BoundaryMax ? cfg.s : cfg.alpha;
    return 1.0 - order * cfg.p / cfg.dim;
}

void validate(const ExperimentConfig& cfg) {
    require(cfg.dim == 1 || cfg.dim == 2, "dim must be 1 or 2");
    require(!cfg.levels.empty(), "levels must be non-empty");
    for (int l : cfg.levels) (void)make_grid(cfg.dim, l, cfg.extent);
    require(!cfg.seeds.empty(), "seeds must be non-empty");
    require(cfg.p >= 1.0, "p >= 1 required");
    require(cfg.band_limit > 1.0, "band_limit > 1 required");
    require(cfg.aperture > 0.0 && cfg.c > 0.0, "aperture > 0 and c > 0 required");
    const int n = cfg.dim;
    const double beta = effective_beta(cfg);
    switch (cfg.experiment) {
    case Experiment::NagelSteinBound:
        require(cfg.alpha > 0.0 && cfg.alpha * cfg.p < n, "0 < alpha p < n required");
        require(beta > 0.0 && beta <= 1.0, "beta in (0,1] required");
        if (cfg.control_beta) require(*cfg.control_beta > 0.0 && *cfg.control_beta <= 1.0, "control_beta in (0,1] required");
        break;
    case Experiment::DorronsoroBound:
        require(beta > 0.0 && beta < 1.0, "beta in (0,1) required");
        require(cfg.j_max >= 0, "j_max >= 0 required");
        break;
    case Experiment::DivergenceDimension:
        require(cfg.alpha > 0.0 && cfg.alpha * cfg.p < n, "0 < alpha p < n required");
        require(beta > 0.0 && beta <= 1.0, "beta in (0,1] required");
        for (double bp : cfg.beta_prime) require(bp >= beta && bp <= 1.0, "beta' in [beta, 1] required");
        require(cfg.eps > 0.0, "eps > 0 required");
        require(0 <= cfg.window_lo && cfg.window_lo < cfg.window_hi && cfg.window_hi <= cfg.levels.back(),
                "0 <= window_lo < window_hi <= finest level required");
        require(cfg.cantor_s > 0.0 && cfg.cantor_s <= 1.0 && cfg.cantor_depth >= 0 && cfg.cantor_depth <= 24,
                "cantor_s in (0,1] and cantor_depth in [0,24] required");
        break;
    case Experiment::FrostmanLemma:
        require(n == 1, "frostman-lemma runs in dimension 1");
        require(cfg.alpha > 0.0, "alpha > 0 required");
        require(cfg.s > n - cfg.alpha * cfg.p, "s > n-alpha p required");
        require(cfg.s <= 1.0, "s <= 1 required");
        require(!cfg.depths.empty(), "depths must be non-empty");
        for (int d : cfg.depths) require(d >= 0 && d <= 24, "depths in [0,24] required");
        break;
    case Experiment::CommuteLemma:
        require(!cfg.qs.empty(), "qs must be non-empty");
        for (double q : cfg.qs) require(q >= 1.0, "q >= 1 required");
        break;
    case Experiment::Poincare:
        require(cfg.alpha > 0.0 && cfg.alpha < 1.0, "alpha in (0,1) required");
        require(cfg.samples >= 1, "samples >= 1 required");
        break;
    case Experiment::CorkscrewGeometry:
        require(!cfg.Ms.empty(), "Ms must be non-empty");
        for (double M : cfg.Ms) require(M > 0.0, "M > 0 required");
        require(cfg.teeth >= 1 && cfg.samples >= 1, "teeth >= 1 and samples >= 1 required");
        break;
    case Experiment::InclusionLemma:
        require(beta > 0.0 && beta <= 1.0, "beta in (0,1] required");
        require(!cfg.Ms.empty() && cfg.Ms.front() > 0.0, "M > 0 required");
        require(cfg.samples >= 1, "samples >= 1 required");
        break;
    case Experiment::BoundaryMax:
        require(cfg.s > 0.0 && cfg.s < 1.0, "s in (0,1) required");
        require(cfg.s * cfg.p < n, "s p < n required");
        require(beta > 0.0 && beta <= 1.0, "beta in (0,1] required");
        require(cfg.r > 1.0 && cfg.r < cfg.p, "1 < r < p required");
        require(cfg.alpha_L > 0.0 && cfg.alpha_L <= 1.0 && cfg.J >= 1, "surrogate parameters out of range");
        require(!cfg.Ms.empty() && cfg.Ms.front() > 0.0 && cfg.teeth >= 1, "profile parameters out of range");
        break;
    }
}

std::string to_json(const ExperimentConfig& cfg) {
    json j;
    j["experiment"] = experiment_name(cfg.experiment);
    j["grid"] = {{"dim", cfg.dim}, {"levels", cfg.levels}, {"extent", cfg.extent}};
    j["exponents"] = {{"p", cfg.p},
                      {"alpha", cfg.alpha},
                      {"s", cfg.s},
                      {"beta", cfg.beta ? json(*cfg.beta) : json(nullptr)},
                      {"beta_prime", cfg.beta_prime},
                      {"aperture", cfg.aperture},
                      {"c", cfg.c}};
    j["surrogate"] = {{"alpha_L", cfg.alpha_L}, {"r", cfg.r}, {"J", cfg.J}, {"p0", cfg.p0}};
    j["study"] = {{"band_limit", cfg.band_limit},
                  {"control_beta", cfg.control_beta ? json(*cfg.control_beta) : json(nullptr)},
                  {"eps", cfg.eps},
                  {"j_max", cfg.j_max},
                  {"depths", cfg.depths},
                  {"window", {cfg.window_lo, cfg.window_hi}},
                  {"Ms", cfg.Ms},
                  {"teeth", cfg.teeth},
                  {"samples", cfg.samples},
                  {"cantor_s", cfg.cantor_s},
                  {"cantor_depth", cfg.cantor_depth},
                  {"qs", cfg.qs}};
    j["seeds"] = cfg.seeds;
    j["output_dir"] = cfg.output_dir;
    return j.dump(2) + "\n";
}

namespace {

template <class T>
void read_opt(const json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

void read_opt_double(const json& obj, const char* key, std::optional<double>& out) {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    out = v.is_null() ? std::nullopt : std::optional<double>(v.get<double>());
}

} // namespace

ExperimentConfig config_from_json(const std::string& text) {
    ExperimentConfig cfg;
    try {
        const json j = json::parse(text);
        cfg.experiment = parse_experiment(j.at("experiment").get<std::string>());
        if (j.contains("grid")) {
            const json& g = j.at("grid");
            read_opt(g, "dim", cfg.dim);
            read_opt(g, "levels", cfg.levels);
            read_opt(g, "extent", cfg.extent);
        }
        if (j.contains("exponents")) {
            const json& e = j.at("exponents");
            read_opt(e, "p", cfg.p);
            read_opt(e, "alpha", cfg.alpha);
            read_opt(e, "s", cfg.s);
            read_opt_double(e, "beta", cfg.beta);
            read_opt(e, "beta_prime", cfg.beta_prime);
            read_opt(e, "aperture", cfg.aperture);
            read_opt(e, "c", cfg.c);
        }
        if (j.contains("surrogate")) {
            const json& s = j.at("surrogate");
            read_opt(s, "alpha_L", cfg.alpha_L);
            read_opt(s, "r", cfg.r);
            read_opt(s, "J", cfg.J);
            read_opt(s, "p0", cfg.p0);
        }
        if (j.contains("study")) {
            const json& s = j.at("study");
            read_opt(s, "band_limit", cfg.band_limit);
            read_opt_double(s, "control_beta", cfg.control_beta);
            read_opt(s, "eps", cfg.eps);
            read_opt(s, "j_max", cfg.j_max);
            read_opt(s, "depths", cfg.depths);
            if (s.contains("window")) {
                const auto w = s.at("window").get<std::vector<int>>();
                if (w.size() != 2) throw ParameterError("study.window must have two entries");
                cfg.window_lo = w[0];
                cfg.window_hi = w[1];
            }
            read_opt(s, "Ms", cfg.Ms);
            read_opt(s, "teeth", cfg.teeth);
            read_opt(s, "samples", cfg.samples);
            read_opt(s, "cantor_s", cfg.cantor_s);
            read_opt(s, "cantor_depth", cfg.cantor_depth);
            read_opt(s, "qs", cfg.qs);
        }
        read_opt(j, "seeds", cfg.seeds);
        read_opt(j, "output_dir", cfg.output_dir);
    } catch (const json::exception& e) {
        throw ParameterError(std::string("malformed experiment config: ") + e.what());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) { return config_from_json(read_text(path)); }

std::uint64_t config_hash(const ExperimentConfig& cfg) {
    ExperimentConfig c = cfg;
    c.output_dir.clear();
    return fnv1a(to_json(c));
}

Band band_of(const std::vector<ReportRow>& rows, const std::string& quantity) {
    Band b{quantity, HUGE_VAL, -HUGE_VAL};
    for (const auto& r : rows) {
        if (r.quantity != quantity) continue;
        b.min = std::min(b.min, r.value);
        b.max = std::max(b.max, r.value);
    }
    if (b.min > b.max) b.min = b.max = 0.0;
    return b;
}

double loglog_slope(const Curve& c) {
    const std::size_t n = c.x.size();
    if (n < 2) return 0.0;
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log2(c.x[i]);
        my += std::log2(c.y[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log2(c.x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log2(c.y[i]) - my);
    }
    return sxx > 0.0 ? sxy / sxx : 0.0;
}

bool RunReport::passed() const {
    return std::all_of(outcomes.begin(), outcomes.end(), [](const Outcome& o) { return o.passed; });
}

std::uint64_t RunReport::hash() const { return fnv1a(render_report(*this, ReportFormat::Csv)); }

GridFunction random_density(const Grid& grid, Rng& rng) {
    return random_bumps(grid, rng, 16, 0.005 * grid.extent, 0.05 * grid.extent, 0.0);
}

RunReport run_experiment(const ExperimentConfig& cfg) {
    validate(cfg);
    RunReport rep;
    switch (cfg.experiment) {
    case Experiment::NagelSteinBound: rep = nagel_stein(cfg); break;
    case Experiment::DorronsoroBound: rep = dorronsoro(cfg); break;
    case Experiment::DivergenceDimension: rep = divergence_dimension(cfg); break;
    case Experiment::FrostmanLemma: rep = frostman_lemma(cfg); break;
    case Experiment::CommuteLemma: rep = commute_lemma(cfg); break;
    case Experiment::Poincare: rep = poincare(cfg); break;
    case Experiment::CorkscrewGeometry: rep = corkscrew_geometry(cfg); break;
    case Experiment::InclusionLemma: rep = inclusion_lemma(cfg); break;
    case Experiment::BoundaryMax: rep = boundary_max(cfg); break;
    }
    rep.experiment = experiment_name(cfg.experiment);
    rep.config_hash = config_hash(cfg);
    rep.seeds = cfg.seeds;
    if (!cfg.output_dir.empty()) {
        emit_report(rep, ReportFormat::Csv, cfg.output_dir);
        emit_report(rep, ReportFormat::Svg, cfg.output_dir);
        emit_report(rep, ReportFormat::Text, cfg.output_dir);
        for (const Curve& c : rep.curves) {
            std::ostringstream os;
            os << std::setprecision(17) << c.x_label << ',' << c.y_label << '\n';
            for (std::size_t i = 0; i < c.x.size(); ++i) os << c.x[i] << ',' << c.y[i] << '\n';
            write_text((std::filesystem::path(cfg.output_dir) / ("data_" + sanitize(c.name) + ".csv")).string(), os.str());
        }
        write_text((std::filesystem::path(cfg.output_dir) / "config.json").string(), to_json(cfg));
    }
    return rep;
}

namespace {

std::string render_csv(const RunReport& r) {
    std::ostringstream os;
    os << std::setprecision(17) << "experiment,level,seed,quantity,value\n";
    for (const auto& row : r.rows) os << r.experiment << ',' << row.level << ',' << row.seed << ',' << row.quantity << ',' << row.value << '\n';
    return os.str();
}

std::string render_text(const RunReport& r) {
    std::ostringstream os;
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(r.config_hash));
    os << "experiment: " << r.experiment << "\nversion: " << r.version << "\nconfig hash: " << hash << "\nseeds:";
    for (auto s : r.seeds) os << ' ' << s;
    os << '\n';
    for (const auto& b : r.bands) os << "band " << b.quantity << ": " << fmt(b.min) << " .. " << fmt(b.max) << " (x" << fmt(b.ratio()) << ")\n";
    for (const auto& c : r.curves) os << "slope " << c.name << ": " << fmt(loglog_slope(c)) << '\n';
    for (const auto& o : r.outcomes) os << (o.passed ? "PASS " : "FAIL ") << o.name << ": " << o.detail << '\n';
    for (const auto& n : r.notes) os << "note: " << n << '\n';
    os << "result: " << (r.passed() ? "PASS" : "FAIL") << '\n';
    return os.str();
}

std::string render_svg(const RunReport& r) {
    const int w = 480, h = 320, pad = 50;
    const int panels = static_cast<int>(r.curves.size());
    std::ostringstream os;
    char buf[256];
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << std::max(1, panels) * h << "\">\n";
    for (int p = 0; p < panels; ++p) {
        const Curve& c = r.curves[p];
        const int y0 = p * h;
        double xmin = HUGE_VAL, xmax = -HUGE_VAL, ymin = HUGE_VAL, ymax = -HUGE_VAL;
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            xmin = std::min(xmin, std::log2(c.x[i]));
            xmax = std::max(xmax, std::log2(c.x[i]));
            ymin = std::min(ymin, std::log2(c.y[i]));
            ymax = std::max(ymax, std::log2(c.y[i]));
        }
        if (!(xmax > xmin)) xmax = xmin + 1.0;
        if (!(ymax > ymin)) {
            ymin -= 0.5;
            ymax += 0.5;
        }
        auto X = [&](double lx) { return pad + (lx - xmin) / (xmax - xmin) * (w - 2 * pad); };
        auto Y = [&](double ly) { return y0 + h - pad - (ly - ymin) / (ymax - ymin) * (h - 2 * pad); };
        std::snprintf(buf, sizeof buf, "<rect x=\"%d\" y=\"%d\" width=\"%d\" height=\"%d\" fill=\"none\" stroke=\"#888\"/>\n", pad, y0 + pad,
                      w - 2 * pad, h - 2 * pad);
        os << buf;
        std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"13\">%s (log2 %s vs log2 %s)</text>\n", pad, y0 + 30,
                      c.name.c_str(), c.y_label.c_str(), c.x_label.c_str());
        os << buf;
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"#246\"/>\n", X(std::log2(c.x[i])), Y(std::log2(c.y[i])));
            os << buf;
        }
        const double slope = loglog_slope(c);
        if (c.x.size() >= 2) {
            double mx = 0.0, my = 0.0;
            for (std::size_t i = 0; i < c.x.size(); ++i) {
                mx += std::log2(c.x[i]);
                my += std::log2(c.y[i]);
            }
            mx /= c.x.size();
            my /= c.x.size();
            std::snprintf(buf, sizeof buf, "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#c33\"/>\n", X(xmin),
                          Y(my + slope * (xmin - mx)), X(xmax), Y(my + slope * (xmax - mx)));
            os << buf;
        }
        std::snprintf(buf, sizeof buf, "<text x=\"%d\" y=\"%d\" font-size=\"12\">slope = %.4f</text>\n", pad + 5, y0 + h - pad - 8, slope);
        os << buf;
    }
    os << "</svg>\n";
    return os.str();
}

} // namespace

std::string render_report(const RunReport& report, ReportFormat format) {
    switch (format) {
    case ReportFormat::Csv: return render_csv(report);
    case ReportFormat::Svg: return render_svg(report);
    case ReportFormat::Text: return render_text(report);
    }
    return {};
}

std::string emit_report(const RunReport& report, ReportFormat format, const std::string& dir) {
    const char* name = format == ReportFormat::Csv ? "report.csv" : format == ReportFormat::Svg ? "plots.svg" : "summary.txt";
    const std::string path = (std::filesystem::path(dir) / name).string();
    write_text(path, render_report(report, format));
    return path;
}

} // namespace fatou
