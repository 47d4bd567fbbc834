#include "doctest.h"

#include <filesystem>
#include <regex>

#include "fatou/error.hpp"
#include "fatou/experiments.hpp"
#include "fatou/io.hpp"

using namespace fatou;

namespace {

std::string tmpdir(const std::string& name) {
    const auto dir = std::filesystem::temp_directory_path() / "fatou_exp_test" / name;
    std::filesystem::remove_all(dir);
    return dir.string();
}

ExperimentConfig small(Experiment e) {
    ExperimentConfig cfg;
    cfg.experiment = e;
    cfg.levels = {8, 9};
    cfg.seeds = {3, 4};
    cfg.samples = 500;
    return cfg;
}

} // namespace

TEST_CASE("experiment names round trip") {
    for (const char* name : {"nagel-stein-bound", "dorronsoro-bound", "divergence-dimension", "frostman-lemma", "commute-lemma",
                             "poincare", "corkscrew-geometry", "inclusion-lemma", "boundary-max"})
        CHECK(experiment_name(parse_experiment(name)) == name);
    CHECK_THROWS_AS(parse_experiment("nagel-stein"), ParameterError);
}

TEST_CASE("config json round trip") {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::DivergenceDimension;
    cfg.dim = 2;
    cfg.levels = {7, 9};
    cfg.alpha = 0.3;
    cfg.beta = 0.4;
    cfg.beta_prime = {0.4, 0.7};
    cfg.control_beta = 0.2;
    cfg.window_lo = 2;
    cfg.window_hi = 6;
    cfg.seeds = {11, 12, 99};
    cfg.output_dir = "out/x";
    cfg.eps = 0.0125;
    cfg.Ms = {0.5, 3};
    const ExperimentConfig back = config_from_json(to_json(cfg));
    CHECK(back == cfg);
    CHECK(to_json(back) == to_json(cfg));

    ExperimentConfig none;
    CHECK(config_from_json(to_json(none)) == none);
    CHECK_FALSE(none.beta.has_value());
}

TEST_CASE("partial json takes defaults, malformed json is a parameter error") {
    const auto cfg = config_from_json(R"({"experiment": "poincare", "exponents": {"alpha": 0.7}})");
    CHECK(cfg.experiment == Experiment::Poincare);
    CHECK(cfg.alpha == 0.7);
    CHECK(cfg.p == 2.0);
    CHECK_THROWS_AS(config_from_json("{"), ParameterError);
    CHECK_THROWS_AS(config_from_json(R"({"grid": {}})"), ParameterError);
    CHECK_THROWS_AS(config_from_json(R"({"experiment": "poincare", "grid": {"dim": "one"}})"), ParameterError);
}

TEST_CASE("beta is derived from the exponents") {
    ExperimentConfig cfg;
    cfg.alpha = 0.25;
    cfg.p = 2;
    CHECK(effective_beta(cfg) == doctest::Approx(0.5));
    cfg.experiment = Experiment::BoundaryMax;
    cfg.s = 0.1;
    CHECK(effective_beta(cfg) == doctest::Approx(0.8));
    cfg.beta = 0.3;
    CHECK(effective_beta(cfg) == 0.3);
}

TEST_CASE("validation names the violated constraint") {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::FrostmanLemma;
    cfg.alpha = 0.25;
    cfg.p = 2;
    cfg.s = 0.4;
    try {
        validate(cfg);
        FAIL("expected ParameterError");
    } catch (const ParameterError& e) {
        CHECK(std::string(e.what()).find("s > n-alpha p required") != std::string::npos);
    }
    cfg.s = 0.6;
    CHECK_NOTHROW(validate(cfg));

    ExperimentConfig bm;
    bm.experiment = Experiment::BoundaryMax;
    bm.r = 2.5;
    CHECK_THROWS_AS(validate(bm), ParameterError);
    bm.r = 1.5;
    CHECK_NOTHROW(validate(bm));

    ExperimentConfig ns;
    ns.alpha = 0.6; // alpha p > n
    CHECK_THROWS_AS(validate(ns), ParameterError);
    ExperimentConfig bad_level;
    bad_level.levels = {40};
    CHECK_THROWS_AS(validate(bad_level), ParameterError);
    CHECK_THROWS_AS(run_experiment(ns), ParameterError);
}

TEST_CASE("config hash ignores output_dir and tracks everything else") {
    ExperimentConfig a;
    ExperimentConfig b = a;
    b.output_dir = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.seeds.push_back(7);
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("empty report renders a header-only csv") {
    RunReport r;
    r.experiment = "poincare";
    CHECK(render_report(r, ReportFormat::Csv) == "experiment,level,seed,quantity,value\n");
    CHECK(r.passed());
}

TEST_CASE("loglog slope and svg annotation agree") {
    Curve c{"boxdim", {2, 4, 8, 16}, {1, 8, 64, 512}, "scale", "count"};
    CHECK(loglog_slope(c) == doctest::Approx(3.0));
    RunReport r;
    r.curves.push_back(c);
    r.curves.push_back(Curve{"noisy", {2, 4, 8}, {3, 5, 13}, "x", "y"});
    const std::string svg = render_report(r, ReportFormat::Svg);
    std::regex re("slope = ([-0-9.]+)");
    std::vector<double> found;
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it)
        found.push_back(std::stod((*it)[1]));
    REQUIRE(found.size() == 2);
    CHECK(found[0] == doctest::Approx(loglog_slope(r.curves[0])).epsilon(1e-4));
    CHECK(found[1] == doctest::Approx(loglog_slope(r.curves[1])).epsilon(1e-4));
}

TEST_CASE("band statistics") {
    std::vector<ReportRow> rows{{1, 0, "a", 2.0}, {1, 1, "a", 5.0}, {2, 0, "b", 100.0}, {2, 1, "a", 3.0}};
    const Band b = band_of(rows, "a");
    CHECK(b.min == 2.0);
    CHECK(b.max == 5.0);
    CHECK(b.ratio() == doctest::Approx(2.5));
}

TEST_CASE("runs are deterministic and write their artifacts") {
    for (Experiment e : {Experiment::NagelSteinBound, Experiment::Poincare, Experiment::CommuteLemma, Experiment::BoundaryMax,
                         Experiment::CorkscrewGeometry}) {
        ExperimentConfig cfg = small(e);
        if (e == Experiment::NagelSteinBound) cfg.control_beta = 0.25;
        const std::string dir_a = tmpdir(experiment_name(e) + "_a");
        const std::string dir_b = tmpdir(experiment_name(e) + "_b");
        cfg.output_dir = dir_a;
        const RunReport a = run_experiment(cfg);
        cfg.output_dir = dir_b;
        const RunReport b = run_experiment(cfg);
        CHECK(a.hash() == b.hash());
        CHECK(a.config_hash == b.config_hash);
        CHECK_FALSE(a.outcomes.empty());
        const std::string csv_a = read_text(dir_a + "/report.csv");
        CHECK(csv_a == render_report(a, ReportFormat::Csv));
        CHECK(csv_a == read_text(dir_b + "/report.csv"));
        CHECK(read_text(dir_a + "/plots.svg") == read_text(dir_b + "/plots.svg"));
        for (const char* f : {"report.csv", "plots.svg", "summary.txt", "config.json"})
            CHECK(std::filesystem::exists(std::filesystem::path(dir_a) / f));
        CHECK(csv_a.rfind("experiment,level,seed,quantity,value\n", 0) == 0);
        CHECK(csv_a.find(experiment_name(e) + ",") != std::string::npos);
    }
}

TEST_CASE("different seeds change the report") {
    ExperimentConfig cfg = small(Experiment::Poincare);
    const auto a = run_experiment(cfg);
    cfg.seeds = {5, 6};
    CHECK(run_experiment(cfg).hash() != a.hash());
}

TEST_CASE("divergence-dimension notes the limiting case") {
    ExperimentConfig cfg;
    cfg.experiment = Experiment::DivergenceDimension;
    cfg.levels = {9, 10};
    cfg.beta_prime = {0.5, 1.0};
    cfg.window_lo = 2;
    cfg.window_hi = 7;
    const RunReport r = run_experiment(cfg);
    bool noted = false;
    for (const auto& n : r.notes) noted = noted || n == "limiting case covered by maximal bound";
    CHECK(noted);
    CHECK(band_of(r.rows, "maximal_ratio").max > 0.0);
    std::size_t dims = 0;
    for (const auto& row : r.rows) dims += row.quantity.rfind("dim ", 0) == 0;
    CHECK(dims == 2);

    cfg.beta_prime = {1.0};
    const RunReport r2 = run_experiment(cfg);
    for (const auto& n : r2.notes) CHECK(n != "limiting case covered by maximal bound");
}

TEST_CASE("text summary carries provenance") {
    ExperimentConfig cfg = small(Experiment::CommuteLemma);
    const auto r = run_experiment(cfg);
    const std::string txt = render_report(r, ReportFormat::Text);
    CHECK(txt.find("experiment: commute-lemma") != std::string::npos);
    CHECK(txt.find("version: " + std::string(kVersion)) != std::string::npos);
    CHECK(txt.find("seeds: 3 4") != std::string::npos);
    CHECK(txt.find("result: PASS") != std::string::npos);
}

TEST_CASE("emit_report surfaces io failures with the path") {
    const std::string blocker = tmpdir("blocker");
    write_text(blocker, "file");
    try {
        emit_report(RunReport{}, ReportFormat::Csv, blocker + "/sub");
        FAIL("expected IoError");
    } catch (const IoError& e) {
        CHECK(std::string(e.what()).find("blocker") != std::string::npos);
    }
}
