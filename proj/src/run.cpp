#include "geomphase/run.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

namespace geomphase {

namespace {

constexpr double kCrossCheckTol = 1e-5;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

HamiltonianModel build_model(const RunConfig& config) {
    if (config.rotating && !config.model_file.empty()) {
        throw InvalidArgument("config: give either rotating-field parameters or a model "
                              "file, not both");
    }
    if (config.rotating) return HamiltonianModel::rotating_field(*config.rotating);
    if (!config.model_file.empty()) {
        return HamiltonianModel::sampled(load_sampled_hamiltonian(config.model_file));
    }
    throw InvalidArgument("config: no model given (need omega0/omega/theta or a model file)");
}

// Frames resolve the drive rate (omega for the rotating field), not the
// much faster dressed precession the state itself carries.
EigenframeTrajectory build_frames(const HamiltonianModel& model, const RunConfig& config,
                                  double t0, double t1, const TimeGrid& traj_grid) {
    if (const auto* p = model.rotating_field()) {
        const TimeGrid grid = TimeGrid::for_rate(t0, t1, p->omega);
        return rotating_field_eigenframes(*p, grid);
    }
    (void)config;
    return eigenframe_trajectory(model, traj_grid);
}

}  // namespace

void RunConfig::validate() const {
    if (sweep) {
        if (!(tau_start > 0.0) || !(tau_stop > tau_start)) {
            throw InvalidArgument("config: sweep needs 0 < tau-start < tau-stop");
        }
        if (tau_count < 2) throw InvalidArgument("config: sweep needs tau-count >= 2");
    } else if (!(tau > 0.0)) {
        throw InvalidArgument("config: tau must be positive");
    }
    if (!(tol >= 1e-12 && tol <= 1e-6)) {
        throw InvalidArgument("config: tol must lie in [1e-12, 1e-6]");
    }
    if (!(adiabatic_threshold > 0.0)) {
        throw InvalidArgument("config: threshold must be positive");
    }
    if (format != "csv" && format != "json") {
        throw InvalidArgument("config: format must be csv or json");
    }
    if (level < 0) throw InvalidArgument("config: k must be >= 0");
}

ComparisonRow simulate_row(const RunConfig& config, double tau) {
    if (!(tau > 0.0)) throw InvalidArgument("simulate: tau must be positive");
    const HamiltonianModel model = build_model(config);
    if (config.level >= model.dim()) {
        throw InvalidArgument("simulate: level k out of range for this model");
    }
    const double t0 = model.domain_start();
    const double t1 = t0 + tau;
    if (!model.contains_time(t1)) {
        throw DomainError("simulate: tau exceeds the sampled model's time domain");
    }

    const TimeGrid grid = TimeGrid::for_rate(t0, t1, model.grid_rate());
    const EigenframeTrajectory frames = build_frames(model, config, t0, t1, grid);
    const StateVector psi0 = frames.at(0).vector(config.level);

    const Trajectory traj = evolve(model, psi0, grid, config.tol);
    const PhaseValue exact = geometric_phase_exact(traj, model);
    const PhaseValue adiab = geometric_phase_adiabatic(frames, config.level);
    const std::vector<double> ratios = adiabatic_constraint_ratios(frames, config.level);

    ComparisonRow row;
    row.tau = tau;
    row.gamma_exact_unwrapped = exact.unwrapped;
    row.gamma_exact_principal = exact.principal;
    row.gamma_adiabatic_unwrapped = adiab.unwrapped;
    row.gamma_adiabatic_principal = adiab.principal;
    row.delta_gamma_measured = exact.unwrapped - adiab.unwrapped;
    row.delta_gamma_predicted = std::numeric_limits<double>::quiet_NaN();
    row.overlap_magnitude = std::abs(traj.states.col(0).dot(traj.states.col(traj.points() - 1)));
    row.max_constraint_ratio = *std::max_element(ratios.begin(), ratios.end());
    row.norm_drift = traj.norm_drift;

    if (const auto* p = model.rotating_field()) {
        row.delta_gamma_predicted = delta_gamma_spin_estimate(*p, tau);
        if (config.level == 0) {
            // the closed forms are stated for the level started in |E_1(0)>
            const double cf_exact = closed_form_exact_phase(*p, tau).unwrapped;
            if (std::abs(exact.unwrapped - cf_exact) > kCrossCheckTol) {
                throw CrossCheckError("simulate: ODE geometric phase " +
                                      fmt17(exact.unwrapped) +
                                      " deviates from the closed form " + fmt17(cf_exact));
            }
            const double cf_adiab = closed_form_adiabatic_phase(*p, tau).unwrapped;
            if (std::abs(adiab.unwrapped - cf_adiab) > kCrossCheckTol) {
                throw CrossCheckError("simulate: frame-based adiabatic phase " +
                                      fmt17(adiab.unwrapped) +
                                      " deviates from the closed form " + fmt17(cf_adiab));
            }
        }
    }
    return row;
}

ComparisonRow simulate_row(const RunConfig& config) {
    config.validate();
    return simulate_row(config, config.tau);
}

SweepResult run_sweep(const RunConfig& config) {
    config.validate();
    if (!config.sweep) throw InvalidArgument("sweep: config carries no tau sweep");

    std::vector<double> taus(static_cast<size_t>(config.tau_count));
    for (int i = 0; i < config.tau_count; ++i) {
        taus[static_cast<size_t>(i)] =
            config.tau_start +
            (config.tau_stop - config.tau_start) * i / (config.tau_count - 1);
    }

    SweepResult result;
    result.rows.resize(taus.size());

    // pure per-point work: a handful of workers pull indices off a counter
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const unsigned workers =
        std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                           static_cast<unsigned>(taus.size()));
    auto work = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= taus.size()) return;
            try {
                result.rows[i] = simulate_row(config, taus[i]);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 0; w + 1 < workers; ++w) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);

    std::vector<double> xs(taus.size()), ys(taus.size());
    double worst_ratio = 0.0;
    for (size_t i = 0; i < result.rows.size(); ++i) {
        xs[i] = result.rows[i].tau;
        ys[i] = result.rows[i].delta_gamma_measured;
        worst_ratio = std::max(worst_ratio, result.rows[i].max_constraint_ratio);
    }
    result.summary.slope = least_squares_slope(xs, ys);
    result.summary.adiabatic = worst_ratio <= config.adiabatic_threshold;
    if (result.summary.adiabatic && config.rotating && config.level == 0) {
        const double s = -delta_gamma_spin_estimate(*config.rotating, 1.0);
        result.summary.predicted_slope = -s;
        result.summary.relative_deviation =
            s != 0.0 ? std::abs(result.summary.slope + s) / s
                     : std::abs(result.summary.slope);
    }
    return result;
}

DecomposeResult run_decompose(const RunConfig& config) {
    config.validate();
    const HamiltonianModel model = build_model(config);
    if (config.level >= model.dim()) {
        throw InvalidArgument("decompose: level k out of range for this model");
    }
    const double t0 = model.domain_start();
    const double t1 = t0 + config.tau;
    if (!model.contains_time(t1)) {
        throw DomainError("decompose: tau exceeds the sampled model's time domain");
    }

    // expansion needs frames on the trajectory grid itself
    const TimeGrid grid = TimeGrid::for_rate(t0, t1, model.grid_rate());
    const EigenframeTrajectory frames =
        model.rotating_field()
            ? rotating_field_eigenframes(*model.rotating_field(), grid)
            : eigenframe_trajectory(model, grid);
    const StateVector psi0 = frames.at(0).vector(config.level);
    const Trajectory traj = evolve(model, psi0, grid, config.tol);

    DecomposeResult out;
    out.tau = config.tau;
    out.level = config.level;
    out.report = verify_reconstruction(traj, frames, config.level, &model);
    return out;
}

// ------------------------------- serialization -------------------------------

namespace {

const char* const kRowFields[] = {
    "tau",
    "gamma_exact_unwrapped",
    "gamma_exact_principal",
    "gamma_adiabatic_unwrapped",
    "gamma_adiabatic_principal",
    "delta_gamma_measured",
    "delta_gamma_predicted",
    "overlap_magnitude",
    "max_constraint_ratio",
    "norm_drift",
};

std::vector<double> row_values(const ComparisonRow& r) {
    return {r.tau,
            r.gamma_exact_unwrapped,
            r.gamma_exact_principal,
            r.gamma_adiabatic_unwrapped,
            r.gamma_adiabatic_principal,
            r.delta_gamma_measured,
            r.delta_gamma_predicted,
            r.overlap_magnitude,
            r.max_constraint_ratio,
            r.norm_drift};
}

nlohmann::ordered_json row_json(const ComparisonRow& r) {
    nlohmann::ordered_json j;
    const auto values = row_values(r);
    for (size_t f = 0; f < std::size(kRowFields); ++f) {
        if (std::isnan(values[f])) {
            j[kRowFields[f]] = nullptr;
        } else {
            j[kRowFields[f]] = values[f];
        }
    }
    return j;
}

nlohmann::ordered_json summary_json(const SweepSummary& s) {
    nlohmann::ordered_json j;
    j["slope"] = s.slope;
    j["adiabatic"] = s.adiabatic;
    if (s.predicted_slope) {
        j["predicted_slope"] = *s.predicted_slope;
        j["relative_deviation"] = *s.relative_deviation;
    }
    return j;
}

}  // namespace

std::string comparison_csv(const std::vector<ComparisonRow>& rows,
                           const std::optional<SweepSummary>& summary) {
    std::ostringstream out;
    for (size_t f = 0; f < std::size(kRowFields); ++f) {
        out << (f ? "," : "") << kRowFields[f];
    }
    out << "\n";
    for (const ComparisonRow& r : rows) {
        const auto values = row_values(r);
        for (size_t f = 0; f < values.size(); ++f) {
            out << (f ? "," : "") << fmt17(values[f]);
        }
        out << "\n";
    }
    if (summary) {
        out << "# slope=" << fmt17(summary->slope)
            << " adiabatic=" << (summary->adiabatic ? "true" : "false");
        if (summary->predicted_slope) {
            out << " predicted_slope=" << fmt17(*summary->predicted_slope)
                << " relative_deviation=" << fmt17(*summary->relative_deviation);
        }
        out << "\n";
    }
    return out.str();
}

std::string comparison_json(const std::vector<ComparisonRow>& rows,
                            const std::optional<SweepSummary>& summary) {
    nlohmann::ordered_json j;
    j["rows"] = nlohmann::ordered_json::array();
    for (const ComparisonRow& r : rows) j["rows"].push_back(row_json(r));
    if (summary) j["summary"] = summary_json(*summary);
    return j.dump(2) + "\n";
}

std::string decompose_json(const DecomposeResult& result) {
    nlohmann::ordered_json j;
    j["tau"] = result.tau;
    j["k"] = result.level;
    j["gamma_exact_unwrapped"] = result.report.gamma_exact_unwrapped;
    j["gamma_adiabatic_unwrapped"] = result.report.gamma_adiabatic_unwrapped;
    nlohmann::ordered_json terms;
    terms["term_arg"] = result.report.delta.term_arg;
    terms["term_boundary"] = result.report.delta.term_boundary;
    terms["term_re_alpha"] = result.report.delta.term_re_alpha;
    terms["term_im_connection"] = result.report.delta.term_im_connection;
    terms["term_im_quadratic"] = result.report.delta.term_im_quadratic;
    terms["total"] = result.report.delta.total;
    terms["boundary_imag_residual"] = result.report.delta.boundary_imag_residual;
    j["delta_gamma"] = terms;
    j["residual"] = result.report.residual;
    j["tolerance"] = result.report.tolerance;
    j["pass"] = result.report.pass;
    return j.dump(2) + "\n";
}

// ----------------------------------- CLI ------------------------------------

double parse_theta(const std::string& text) {
    try {
        size_t used = 0;
        double value = 0.0;
        if (text.rfind("deg:", 0) == 0) {
            const std::string num = text.substr(4);
            value = std::stod(num, &used) * M_PI / 180.0;
            if (used != num.size()) throw std::invalid_argument(text);
        } else {
            value = std::stod(text, &used);
            if (used != text.size()) throw std::invalid_argument(text);
        }
        return value;
    } catch (const std::exception&) {
        throw InvalidArgument("theta: expected radians or deg:<value>, got '" + text + "'");
    }
}

namespace {

void apply_config_file(RunConfig& config, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("config: cannot open " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("config: invalid JSON: ") + e.what());
    }
    if (j.contains("omega0") || j.contains("omega") || j.contains("theta")) {
        RotatingFieldParams p = config.rotating.value_or(RotatingFieldParams{});
        if (j.contains("omega0")) p.omega0 = j["omega0"].get<double>();
        if (j.contains("omega")) p.omega = j["omega"].get<double>();
        if (j.contains("theta")) {
            p.theta = j["theta"].is_string() ? parse_theta(j["theta"].get<std::string>())
                                             : j["theta"].get<double>();
        }
        config.rotating = p;
    }
    if (j.contains("model_file")) config.model_file = j["model_file"].get<std::string>();
    if (j.contains("k")) config.level = j["k"].get<int>();
    if (j.contains("tau")) config.tau = j["tau"].get<double>();
    if (j.contains("tau_start")) {
        config.tau_start = j["tau_start"].get<double>();
        config.sweep = true;
    }
    if (j.contains("tau_stop")) config.tau_stop = j["tau_stop"].get<double>();
    if (j.contains("tau_count")) config.tau_count = j["tau_count"].get<int>();
    if (j.contains("tol")) config.tol = j["tol"].get<double>();
    if (j.contains("threshold")) config.adiabatic_threshold = j["threshold"].get<double>();
    if (j.contains("format")) config.format = j["format"].get<std::string>();
    if (j.contains("out")) config.out_path = j["out"].get<std::string>();
}

void write_output(const RunConfig& config, const std::string& text) {
    if (config.out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(config.out_path, std::ios::binary);
    if (!out) throw InvalidArgument("config: cannot write " + config.out_path);
    out << text;
}

}  // namespace

namespace {

// raw flag values; presence is tracked through CLI11 option counts
struct CliFlags {
    std::string config_path;
    double omega0 = 0.0;
    double omega = 0.0;
    std::string theta_text;
    std::string model_file;
    int level = 0;
    double tau = 0.0;
    double tau_start = 0.0;
    double tau_stop = 0.0;
    int tau_count = 0;
    double tol = 0.0;
    double threshold = 0.0;
    std::string format;
    std::string out_path;
};

void register_flags(CLI::App* cmd, CliFlags& flags, bool with_tau, bool with_sweep) {
    cmd->add_option("--config", flags.config_path, "JSON config file; flags override it");
    cmd->add_option("--omega0", flags.omega0, "field/moment coupling (> 0)");
    cmd->add_option("--omega", flags.omega, "field rotation frequency (>= 0)");
    cmd->add_option("--theta", flags.theta_text, "tilt angle, radians or deg:<value>");
    cmd->add_option("--model-file", flags.model_file, "sampled-matrix JSON file");
    cmd->add_option("--k", flags.level, "level index (default 0)");
    cmd->add_option("--tol", flags.tol, "integrator tolerance [1e-12, 1e-6]");
    cmd->add_option("--threshold", flags.threshold,
                    "adiabaticity threshold on the constraint ratios");
    cmd->add_option("--format", flags.format, "csv or json");
    cmd->add_option("--out", flags.out_path, "output path (default stdout)");
    if (with_tau) cmd->add_option("--tau", flags.tau, "evolution time");
    if (with_sweep) {
        cmd->add_option("--tau-start", flags.tau_start, "first tau");
        cmd->add_option("--tau-stop", flags.tau_stop, "last tau");
        cmd->add_option("--tau-count", flags.tau_count, "number of tau points (>= 2)");
    }
}

RunConfig merge_config(const CLI::App* active, const CliFlags& flags, bool is_sweep) {
    RunConfig config;
    if (!flags.config_path.empty()) apply_config_file(config, flags.config_path);

    if (active->count("--omega0") || active->count("--omega") || active->count("--theta")) {
        RotatingFieldParams p = config.rotating.value_or(RotatingFieldParams{});
        if (active->count("--omega0")) p.omega0 = flags.omega0;
        if (active->count("--omega")) p.omega = flags.omega;
        if (active->count("--theta")) p.theta = parse_theta(flags.theta_text);
        config.rotating = p;
    }
    if (active->count("--model-file")) config.model_file = flags.model_file;
    if (active->count("--k")) config.level = flags.level;
    if (active->count("--tol")) config.tol = flags.tol;
    if (active->count("--threshold")) config.adiabatic_threshold = flags.threshold;
    if (active->count("--format")) config.format = flags.format;
    if (active->count("--out")) config.out_path = flags.out_path;
    if (!is_sweep && active->count("--tau")) config.tau = flags.tau;
    if (is_sweep) {
        config.sweep = true;
        if (active->count("--tau-start")) config.tau_start = flags.tau_start;
        if (active->count("--tau-stop")) config.tau_stop = flags.tau_stop;
        if (active->count("--tau-count")) config.tau_count = flags.tau_count;
    } else {
        config.sweep = false;
    }
    return config;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"geometric-phase simulations for driven quantum systems"};
    app.require_subcommand(1);

    CliFlags flags;
    CLI::App* simulate = app.add_subcommand("simulate", "single evolution at one tau");
    register_flags(simulate, flags, true, false);
    CLI::App* sweep = app.add_subcommand("sweep", "tau sweep with drift-slope summary");
    register_flags(sweep, flags, false, true);
    CLI::App* decompose = app.add_subcommand("decompose", "per-term divergence breakdown");
    register_flags(decompose, flags, true, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (sweep->parsed()) {
            const RunConfig config = merge_config(sweep, flags, true);
            const SweepResult result = run_sweep(config);
            write_output(config, config.format == "json"
                                     ? comparison_json(result.rows, result.summary)
                                     : comparison_csv(result.rows, result.summary));
        } else if (simulate->parsed()) {
            const RunConfig config = merge_config(simulate, flags, false);
            const ComparisonRow row = simulate_row(config);
            write_output(config, config.format == "json" ? comparison_json({row})
                                                         : comparison_csv({row}));
        } else {
            const RunConfig config = merge_config(decompose, flags, false);
            const DecomposeResult result = run_decompose(config);
            write_output(config, decompose_json(result));
        }
        return 0;
    } catch (const ModelFormatError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const DomainError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const DegenerateSpectrum& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const InvalidArgument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace geomphase
