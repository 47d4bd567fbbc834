#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fatou/grid.hpp"
#include "fatou/rng.hpp"

namespace fatou {

inline constexpr const char* kVersion = "0.1.0";

enum class Experiment {
    NagelSteinBound,
    DorronsoroBound,
    DivergenceDimension,
    FrostmanLemma,
    CommuteLemma,
    Poincare,
    CorkscrewGeometry,
    InclusionLemma,
    BoundaryMax,
};

std::string experiment_name(Experiment e);
Experiment parse_experiment(const std::string& name);

struct ExperimentConfig {
    Experiment experiment = Experiment::NagelSteinBound;

    int dim = 1;
    std::vector<int> levels{10, 12};
    double extent = 1.0;

    double p = 2.0;
    double alpha = 0.25;
    double s = 0.25;
    std::optional<double> beta; // derived as 1 - alpha p / n (or 1 - s p / n) when absent
    std::vector<double> beta_prime;
    double aperture = 1.0;
    double c = 1.0;

    double alpha_L = 0.5;
    double r = 1.5;
    int J = 3;
    double p0 = 0.0;

    double band_limit = 3.0;
    std::optional<double> control_beta;
    double eps = 0.1;
    int j_max = 8;
    std::vector<int> depths{12, 16};
    int window_lo = 4;
    int window_hi = 10;
    std::vector<double> Ms{1.0};
    int teeth = 4;
    std::size_t samples = 10000;
    double cantor_s = 0.4;
    int cantor_depth = 8;
    std::vector<double> qs{1.0, 2.0};

    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    std::string output_dir;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Throws ParameterError naming the violated constraint.
void validate(const ExperimentConfig& cfg);
/// beta if set, else the critical value 1 - alpha p / n (1 - s p / n for boundary-max).
double effective_beta(const ExperimentConfig& cfg);

std::string to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::uint64_t config_hash(const ExperimentConfig& cfg);

struct ReportRow {
    int level = 0;
    std::uint64_t seed = 0;
    std::string quantity;
    double value = 0.0;
};

struct Band {
    std::string quantity;
    double min = 0.0;
    double max = 0.0;
    double ratio() const { return min > 0.0 ? max / min : HUGE_VAL; }
};

struct Outcome {
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Points plotted on log2-log2 axes with a least-squares slope annotation.
struct Curve {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
    std::string x_label = "x";
    std::string y_label = "y";
};

struct RunReport {
    std::string experiment;
    std::vector<ReportRow> rows;
    std::vector<Band> bands;
    std::vector<Outcome> outcomes;
    std::vector<Curve> curves;
    std::vector<std::string> notes;
    std::uint64_t config_hash = 0;
    std::vector<std::uint64_t> seeds;
    std::string version = kVersion;

    bool passed() const;
    /// FNV-1a of the CSV rendering.
    std::uint64_t hash() const;
};

/// min/max over the rows carrying `quantity`.
Band band_of(const std::vector<ReportRow>& rows, const std::string& quantity);
/// Least-squares slope of log2 y against log2 x.
double loglog_slope(const Curve& curve);

/// Runs the experiment; writes report.csv, data CSVs, summary.txt and plots.svg when output_dir is set.
RunReport run_experiment(const ExperimentConfig& cfg);

enum class ReportFormat { Csv, Svg, Text };
std::string render_report(const RunReport& report, ReportFormat format);
/// Writes the rendering into `dir` (report.csv, plots.svg or summary.txt); returns the path.
std::string emit_report(const RunReport& report, ReportFormat format, const std::string& dir);

/// Shared random data ensemble: 16 periodized Gaussian bumps, widths in [0.005, 0.05], heights in (0, 1].
GridFunction random_density(const Grid& grid, Rng& rng);

} // namespace fatou
