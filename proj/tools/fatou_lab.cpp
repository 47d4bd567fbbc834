#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "fatou/acceptance.hpp"
#include "fatou/error.hpp"
#include "fatou/experiments.hpp"
#include "fatou/extension.hpp"
#include "fatou/fractal.hpp"
#include "fatou/io.hpp"
#include "fatou/kernels.hpp"
#include "fatou/lipschitz.hpp"
#include "fatou/maximal.hpp"
#include "fatou/potentials.hpp"

using namespace fatou;

namespace {

// Exit codes.
constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct GridOpts {
    int dim = 1;
    int level = 10;
    double extent = 1.0;
    Grid grid() const { return make_grid(dim, level, extent); }
};

void add_grid_opts(CLI::App* app, GridOpts& g) {
    app->add_option("--dim", g.dim, "grid dimension (CSV inputs and generated data)")->check(CLI::Range(1, 2));
    app->add_option("--level", g.level, "grid level, N = 2^level per axis");
    app->add_option("--extent", g.extent, "torus side length");
}

bool is_csv(const std::string& path) { return path.size() >= 4 && path.substr(path.size() - 4) == ".csv"; }

GridFunction load_function(const std::string& path, const GridOpts& g) {
    return is_csv(path) ? read_grid_function_csv(path, g.grid()) : read_grid_function(path);
}

void save_function(const std::string& path, const GridFunction& f) {
    if (is_csv(path))
        write_grid_function_csv(path, f);
    else
        write_grid_function(path, f);
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw ParameterError("not a number: '" + item + "' in '" + text + "'");
        }
    }
    return out;
}

std::vector<double> parse_heights(const std::string& text, const Grid& grid) {
    if (text.empty()) return default_heights(grid);
    const auto v = parse_list(text);
    if (v.size() != 2 || v[1] != std::floor(v[1])) throw ParameterError("--heights expects t0,K");
    return dyadic_heights(v[0], static_cast<int>(v[1]));
}

std::pair<int, int> parse_window(const std::string& text) {
    const auto v = parse_list(text);
    if (v.size() != 2) throw ParameterError("--window expects lo,hi");
    return {static_cast<int>(v[0]), static_cast<int>(v[1])};
}

void emit(const std::string& out, const std::string& text) {
    if (out.empty() || out == "-")
        std::cout << text;
    else
        write_text(out, text);
}

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// ---------------------------------------------------------------------------

struct KernelTableOpts {
    std::string kind = "bessel";
    int n = 1;
    double alpha = 0.5;
    double t = 1.0;
    std::string points;
    std::string out;
};

int kernel_table(const KernelTableOpts& o) {
    KernelSpec spec;
    if (o.kind == "poisson") {
        spec = {KernelKind::Poisson, o.n, 0.0, o.t};
    } else if (o.kind == "bessel") {
        spec = {KernelKind::Bessel, o.n, o.alpha, 1.0};
    } else if (o.kind == "riesz") {
        spec = {KernelKind::Riesz, o.n, o.alpha, 1.0};
    } else {
        throw ParameterError("--kind must be poisson, bessel or riesz");
    }
    validate(spec);
    std::istringstream in(read_text(o.points));
    std::ostringstream os;
    os << "# " << normalization_note(spec) << "\nr,value\n";
    std::string line;
    while (std::getline(in, line)) {
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#' || std::isalpha(static_cast<unsigned char>(line[start]))) continue;
        const double r = parse_list(line.substr(start, line.find_first_of(",\r", start) - start)).at(0);
        os << g17(r) << ',' << g17(kernel_value(spec, Point{std::abs(r), 0.0})) << '\n';
    }
    emit(o.out, os.str());
    return kPass;
}

struct ExtendOpts {
    std::string kind = "poisson";
    std::string heights;
    std::string in, out;
    double alpha_L = 0.5, r = 1.5;
    int J = 3;
    GridOpts grid;
};

int extend(const ExtendOpts& o) {
    const GridFunction f = load_function(o.in, o.grid);
    const auto heights = parse_heights(o.heights, f.grid());
    HalfSpaceField u;
    if (o.kind == "poisson")
        u = poisson_extend(f, heights);
    else if (o.kind == "surrogate")
        u = annuli_surrogate(f, heights, o.alpha_L, o.r, o.J);
    else
        throw ParameterError("--kind must be poisson or surrogate");
    write_half_space_field(o.out, u);
    return kPass;
}

struct MaxfnOpts {
    std::string op = "tangential";
    double beta = 1.0, aperture = 1.0, p = 2.0, r = 1.5, s = 1.0, alpha = 0.5, alpha_L = 0.5;
    int j = 0, J = 3;
    std::string in, out, argmax;
    GridOpts grid;
};

int maxfn(const MaxfnOpts& o) {
    GridFunction result;
    if (o.op == "tangential" || o.op == "mitigated" || o.op == "dilated") {
        const HalfSpaceField u = read_half_space_field(o.in);
        if (o.op == "tangential") {
            std::vector<Witness> witnesses;
            result = tangential_max(u, ApproachRegionSpec{o.beta, o.aperture, u.heights().front()},
                                    o.argmax.empty() ? nullptr : &witnesses);
            if (!o.argmax.empty()) {
                const Grid& g = u.grid();
                std::ostringstream os;
                os << (g.dim == 1 ? "x0,t,x\n" : "x0,y0,t,x,y\n");
                for (std::size_t i = 0; i < witnesses.size(); ++i) {
                    const Point a = g.coord(i), b = g.coord(witnesses[i].x);
                    os << g17(a[0]) << ',' << (g.dim == 2 ? g17(a[1]) + "," : "") << g17(u.heights()[witnesses[i].k]) << ','
                       << g17(b[0]) << (g.dim == 2 ? "," + g17(b[1]) : "") << '\n';
                }
                write_text(o.argmax, os.str());
            }
        } else if (o.op == "mitigated") {
            result = mitigated_max(u, o.p, o.beta, o.aperture);
        } else {
            result = dilated_mitigated_max(u, o.p, o.beta, o.j, o.aperture);
        }
    } else if (o.op == "fractional") {
        result = fractional_power_max(load_function(o.in, o.grid), o.s, o.alpha);
    } else if (o.op == "composite") {
        result = composite_max(load_function(o.in, o.grid), o.p, o.r, o.beta, o.alpha_L, o.J);
    } else {
        throw ParameterError("--op must be tangential, mitigated, dilated, fractional or composite");
    }
    save_function(o.out, result);
    return kPass;
}

struct PotentialOpts {
    std::string mode = "smooth";
    double alpha = 0.5, p = 2.0, sigma = 0.5;
    std::string scales;
    std::string in, out;
    GridOpts grid;
};

int potential(const PotentialOpts& o) {
    const GridFunction f = load_function(o.in, o.grid);
    if (o.mode == "smooth") {
        save_function(o.out, bessel_smooth(f, o.alpha));
    } else if (o.mode == "sharp") {
        const auto scales = o.scales.empty() ? dyadic_radii(f.grid()) : parse_list(o.scales);
        save_function(o.out, sharp_maximal(f, o.alpha, scales));
    } else if (o.mode == "seminorm") {
        emit(o.out, g17(slobodeckij_seminorm(f, o.sigma, o.p)) + "\n");
    } else {
        throw ParameterError("mode must be smooth, sharp or seminorm");
    }
    return kPass;
}

struct FractalOpts {
    std::string mode = "cantor";
    double s = 0.5, eps = 0.1, tmin = 0.0, beta = 1.0, aperture = 1.0;
    int depth = 8;
    std::string window = "4,10";
    std::string in, ref, out;
    GridOpts grid;
};

int fractal(const FractalOpts& o) {
    if (o.mode == "cantor") {
        write_point_set_csv(o.out, cantor_points(o.grid.grid(), cantor_measure(o.s, o.depth)));
    } else if (o.mode == "boxdim") {
        const auto [lo, hi] = parse_window(o.window);
        const BoxDimension d = box_dimension(read_point_set_csv(o.in, o.grid.grid()), lo, hi);
        std::ostringstream os;
        os << "scale,count\n";
        for (int m = lo; m <= hi; ++m) os << m << ',' << d.counts[m - lo] << '\n';
        emit(o.out, os.str());
        std::fprintf(stderr, "slope %.6f r2 %.6f%s\n", d.slope, d.r2, d.empty ? " (empty set)" : "");
    } else if (o.mode == "divset") {
        const HalfSpaceField u = read_half_space_field(o.in);
        if (o.ref.empty()) throw ParameterError("divset needs --ref (boundary data)");
        const GridFunction f = load_function(o.ref, o.grid);
        const double tmin = o.tmin > 0.0 ? o.tmin : u.heights().back();
        write_point_set_csv(o.out, divergence_set(u, f, ApproachRegionSpec{o.beta, o.aperture, u.heights().front()}, o.eps, tmin));
    } else {
        throw ParameterError("mode must be cantor, boxdim or divset");
    }
    return kPass;
}

struct LipschitzOpts {
    std::string mode = "corkscrew";
    double beta = 0.5, c = 1.0, s = 0.25, p = 2.0, M = 1.0;
    int teeth = 4;
    std::size_t samples = 10000;
    std::uint64_t seed = 1;
    std::string profile, in, out;
    GridOpts grid;
};

int lipschitz(const LipschitzOpts& o) {
    const LipschitzGraph graph = o.profile.empty() ? sawtooth_graph(o.grid.grid(), o.M, o.teeth) : read_lipschitz_graph(o.profile);
    const Grid& g = graph.phi.grid();
    if (o.mode == "corkscrew") {
        const double kappa = corkscrew_kappa(graph.M), h = g.spacing();
        Rng rng(o.seed);
        std::size_t violations = 0;
        for (std::size_t i = 0; i < o.samples; ++i) {
            const Point x{rng.uniform(0.0, g.extent), g.dim == 2 ? rng.uniform(0.0, g.extent) : 0.0};
            const double t = std::exp(rng.uniform(std::log(h), 0.0));
            const double d = graph_distance(graph, corkscrew(graph, boundary_point(graph, x), t));
            violations += d < kappa * t - 2.0 * h || d > t * (1.0 + 1e-12);
        }
        std::printf("M %.6g kappa %.6g samples %zu violations %zu\n", graph.M, kappa, o.samples, violations);
        return violations == 0 ? kPass : kFail;
    }
    if (o.mode == "inclusion") {
        const InclusionReport r = region_inclusion_check(graph, o.beta, o.c, o.samples, o.seed);
        std::printf("accepted %zu attempts %zu violations %zu\n", r.accepted, r.attempts, r.violations);
        return r.violations == 0 && r.accepted == o.samples ? kPass : kFail;
    }
    if (o.mode == "surface") {
        std::vector<std::size_t> all(g.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        std::printf("surface measure %.17g\n", surface_measure(graph, all));
        if (!o.out.empty()) save_function(o.out, surface_density(graph));
        return kPass;
    }
    if (o.mode == "boundary-max") {
        GridOpts go{g.dim, g.levels, g.extent};
        const GridFunction f = load_function(o.in, go);
        BoundaryMaxParams params;
        params.p = o.p;
        const double beta = o.beta > 0.0 ? o.beta : 1.0 - o.s * o.p / g.dim;
        const GridFunction m = boundary_tangential_max(graph, f, beta, o.c, params);
        std::printf("ratio %.17g\n", surface_lp_norm(graph, m, o.p) / boundary_seminorm(graph, f, o.s, o.p));
        if (!o.out.empty()) save_function(o.out, m);
        return kPass;
    }
    throw ParameterError("mode must be corkscrew, inclusion, surface or boundary-max");
}

struct VerifyOpts {
    std::string config;
    std::string experiment;
    std::vector<int> levels;
    std::vector<std::uint64_t> seeds;
    std::string output_dir;
    std::string format = "text";
};

int verify(const VerifyOpts& o) {
    ExperimentConfig cfg;
    if (!o.config.empty()) cfg = load_config(o.config);
    if (!o.experiment.empty()) cfg.experiment = parse_experiment(o.experiment);
    if (!o.levels.empty()) cfg.levels = o.levels;
    if (!o.seeds.empty()) cfg.seeds = o.seeds;
    if (!o.output_dir.empty()) cfg.output_dir = o.output_dir;
    const RunReport rep = run_experiment(cfg);
    const ReportFormat fmt = o.format == "csv" ? ReportFormat::Csv : o.format == "svg" ? ReportFormat::Svg : ReportFormat::Text;
    std::cout << render_report(rep, fmt);
    return rep.passed() ? kPass : kFail;
}

struct SuiteOpts {
    std::vector<int> criteria;
    std::string output_dir;
};

int suite(const SuiteOpts& o) {
    std::ostringstream log;
    const auto results = run_acceptance(o.criteria, [&](const CriterionResult& r) {
        const std::string line = format_result(r);
        std::printf("%s\n", line.c_str());
        std::fflush(stdout);
        log << line << '\n';
    });
    int failed = 0;
    for (const auto& r : results) failed += !r.passed;
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    if (!o.output_dir.empty()) write_text(o.output_dir + "/suite.txt", log.str());
    return failed == 0 ? kPass : kFail;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"fatou-lab: numerical harmonic-analysis experiments"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    KernelTableOpts kt;
    auto* c_kt = app.add_subcommand("kernel-table", "tabulate a kernel at the radii listed in a file");
    c_kt->add_option("--kind", kt.kind, "poisson | bessel | riesz")->check(CLI::IsMember({"poisson", "bessel", "riesz"}));
    c_kt->add_option("--n", kt.n, "dimension")->check(CLI::Range(1, 2));
    c_kt->add_option("--alpha", kt.alpha, "order (bessel, riesz)");
    c_kt->add_option("--t", kt.t, "height (poisson)");
    c_kt->add_option("--points", kt.points, "file with one radius per line (first CSV column)")->required();
    c_kt->add_option("--out", kt.out, "output CSV (stdout if omitted)");

    ExtendOpts ex;
    auto* c_ex = app.add_subcommand("extend", "extend boundary data to the half-space");
    c_ex->add_option("--kind", ex.kind)->check(CLI::IsMember({"poisson", "surrogate"}));
    c_ex->add_option("--heights", ex.heights, "t0,K (default: 1 and levels + 2)");
    c_ex->add_option("--in", ex.in, "GridFunction (.bin or .csv)")->required();
    c_ex->add_option("--out", ex.out, "HalfSpaceField file")->required();
    c_ex->add_option("--alpha-L", ex.alpha_L);
    c_ex->add_option("--r", ex.r);
    c_ex->add_option("--J", ex.J);
    add_grid_opts(c_ex, ex.grid);

    MaxfnOpts mf;
    auto* c_mf = app.add_subcommand("maxfn", "maximal functions");
    c_mf->add_option("--op", mf.op)->check(CLI::IsMember({"tangential", "mitigated", "dilated", "fractional", "composite"}));
    c_mf->add_option("--beta", mf.beta);
    c_mf->add_option("--aperture", mf.aperture);
    c_mf->add_option("--p", mf.p);
    c_mf->add_option("--r", mf.r);
    c_mf->add_option("--j", mf.j);
    c_mf->add_option("--s", mf.s, "power (fractional)");
    c_mf->add_option("--alpha", mf.alpha, "order (fractional)");
    c_mf->add_option("--alpha-L", mf.alpha_L);
    c_mf->add_option("--J", mf.J);
    c_mf->add_option("--in", mf.in, "HalfSpaceField, or GridFunction for fractional/composite")->required();
    c_mf->add_option("--out", mf.out, "GridFunction (.bin or .csv)")->required();
    c_mf->add_option("--argmax", mf.argmax, "witness CSV (tangential)");
    add_grid_opts(c_mf, mf.grid);

    PotentialOpts po;
    auto* c_po = app.add_subcommand("potential", "Bessel smoothing, sharp maximal function, Slobodeckij seminorm");
    c_po->add_option("mode", po.mode, "smooth | sharp | seminorm")->required()->check(CLI::IsMember({"smooth", "sharp", "seminorm"}));
    c_po->add_option("--alpha", po.alpha);
    c_po->add_option("--p", po.p);
    c_po->add_option("--sigma", po.sigma);
    c_po->add_option("--scales", po.scales, "comma-separated radii (sharp; default dyadic)");
    c_po->add_option("--in", po.in)->required();
    c_po->add_option("--out", po.out);
    add_grid_opts(c_po, po.grid);

    FractalOpts fr;
    auto* c_fr = app.add_subcommand("fractal", "Cantor sets, box dimension, divergence sets");
    c_fr->add_option("mode", fr.mode, "cantor | boxdim | divset")->required()->check(CLI::IsMember({"cantor", "boxdim", "divset"}));
    c_fr->add_option("--s", fr.s);
    c_fr->add_option("--depth", fr.depth);
    c_fr->add_option("--eps", fr.eps);
    c_fr->add_option("--tmin", fr.tmin, "default: finest height");
    c_fr->add_option("--window", fr.window, "lo,hi");
    c_fr->add_option("--beta", fr.beta);
    c_fr->add_option("--aperture", fr.aperture);
    c_fr->add_option("--in", fr.in, "PointSet CSV (boxdim) or HalfSpaceField (divset)");
    c_fr->add_option("--ref", fr.ref, "boundary data (divset)");
    c_fr->add_option("--out", fr.out);
    add_grid_opts(c_fr, fr.grid);

    LipschitzOpts lp;
    auto* c_lp = app.add_subcommand("lipschitz", "Lipschitz-graph geometry");
    c_lp->add_option("mode", lp.mode, "corkscrew | inclusion | surface | boundary-max")
        ->required()
        ->check(CLI::IsMember({"corkscrew", "inclusion", "surface", "boundary-max"}));
    c_lp->add_option("--beta", lp.beta, "boundary-max: <= 0 derives 1 - sp/n");
    c_lp->add_option("--c", lp.c);
    c_lp->add_option("--s", lp.s);
    c_lp->add_option("--p", lp.p);
    c_lp->add_option("--profile", lp.profile, "LipschitzGraph file (default: sawtooth)");
    c_lp->add_option("--M", lp.M, "sawtooth slope");
    c_lp->add_option("--teeth", lp.teeth);
    c_lp->add_option("--samples", lp.samples);
    c_lp->add_option("--seed", lp.seed);
    c_lp->add_option("--in", lp.in, "boundary data (boundary-max)");
    c_lp->add_option("--out", lp.out);
    add_grid_opts(c_lp, lp.grid);

    VerifyOpts ve;
    auto* c_ve = app.add_subcommand("verify", "run one experiment config");
    c_ve->add_option("--config", ve.config, "JSON experiment config")->check(CLI::ExistingFile);
    c_ve->add_option("--experiment", ve.experiment);
    c_ve->add_option("--levels", ve.levels)->delimiter(',');
    c_ve->add_option("--seeds", ve.seeds)->delimiter(',');
    c_ve->add_option("--output-dir", ve.output_dir);
    c_ve->add_option("--format", ve.format, "text | csv | svg")->check(CLI::IsMember({"text", "csv", "svg"}));

    SuiteOpts su;
    auto* c_su = app.add_subcommand("suite", "run the acceptance battery");
    c_su->add_option("--criteria", su.criteria, "subset of 1..12")->delimiter(',');
    c_su->add_option("--output-dir", su.output_dir);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kPass : kUsage;
    }

    try {
        if (*c_kt) return kernel_table(kt);
        if (*c_ex) return extend(ex);
        if (*c_mf) return maxfn(mf);
        if (*c_po) return potential(po);
        if (*c_fr) return fractal(fr);
        if (*c_lp) return lipschitz(lp);
        if (*c_ve) return verify(ve);
        if (*c_su) return suite(su);
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "fatou-lab: %s\n", e.what());
        return kUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "fatou-lab: %s\n", e.what());
        return kFail;
    }
    return kUsage;
}
