// run.hpp — run configuration, per-tau comparison rows, sweeps, and the
// command-line entry point. The CLI binary is a thin wrapper over run_cli so
// everything here is testable in-process.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "geomphase/decomposition.hpp"
#include "geomphase/phase.hpp"

namespace geomphase {

struct RunConfig {
    // model: exactly one of rotating / model_file
    std::optional<RotatingFieldParams> rotating;
    std::string model_file;

    int level = 0;  // k; paper-label order for the rotating field, ascending otherwise

    double tau = 2.0 * M_PI;
    bool sweep = false;
    double tau_start = 0.0;
    double tau_stop = 0.0;
    int tau_count = 0;

    double tol = kDefaultEvolveTol;
    double adiabatic_threshold = 0.01;

    std::string format = "csv";  // csv | json
    std::string out_path;        // empty = stdout

    void validate() const;
};

// One tau point of the exact-vs-adiabatic comparison.
struct ComparisonRow {
    double tau = 0.0;
    double gamma_exact_unwrapped = 0.0;
    double gamma_exact_principal = 0.0;
    double gamma_adiabatic_unwrapped = 0.0;
    double gamma_adiabatic_principal = 0.0;
    double delta_gamma_measured = 0.0;   // exact - adiabatic, unwrapped
    double delta_gamma_predicted = 0.0;  // -tau*s; NaN for non-rotating models
    double overlap_magnitude = 0.0;
    double max_constraint_ratio = 0.0;
    double norm_drift = 0.0;
};

struct SweepSummary {
    double slope = 0.0;  // least-squares slope of delta_gamma_measured vs tau
    bool adiabatic = false;
    // only for adiabatic rotating-field sweeps:
    std::optional<double> predicted_slope;      // -s
    std::optional<double> relative_deviation;   // |slope - (-s)| / |s|
};

struct SweepResult {
    std::vector<ComparisonRow> rows;
    SweepSummary summary;
};

// Single simulation at config.tau (or the given tau override).
ComparisonRow simulate_row(const RunConfig& config);
ComparisonRow simulate_row(const RunConfig& config, double tau);

// All sweep rows, evaluated concurrently, returned in tau order.
SweepResult run_sweep(const RunConfig& config);

// Expansion/decomposition report for a single run.
struct DecomposeResult {
    double tau = 0.0;
    int level = 0;
    ReconstructionReport report;
};
DecomposeResult run_decompose(const RunConfig& config);

// Serialization; field names match the struct members.
std::string comparison_csv(const std::vector<ComparisonRow>& rows,
                           const std::optional<SweepSummary>& summary = std::nullopt);
std::string comparison_json(const std::vector<ComparisonRow>& rows,
                            const std::optional<SweepSummary>& summary = std::nullopt);
std::string decompose_json(const DecomposeResult& result);

// Full CLI: parses argv, dispatches simulate | sweep | decompose, writes the
// output, and maps errors to exit codes (1 config, 2 numerical, 3 model).
int run_cli(int argc, const char* const* argv);

// "0.52", "deg:30" -> radians.
double parse_theta(const std::string& text);

}  // namespace geomphase
