#include "jclcd/runner.hpp"

#include "jclcd/errors.hpp"
#include "jclcd/observables.hpp"
#include "jclcd/spectrum.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

namespace jclcd {

namespace detail {
// Generated from presets/*.json at configure time.
extern const std::map<std::string, std::string>& builtin_presets();
}  // namespace detail

namespace {

using nlohmann::json;

const std::set<std::string> kRequiredKeys{"n_sites", "boundary", "delta", "g0", "gf", "j0", "jf", "total_time"};
const std::set<std::string> kOptionalKeys{"drive",        "gamma",    "kappa",        "steps",
                                          "record_every", "t_values", "kappa_values", "output"};

double get_real(const json& doc, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_number()) throw ConfigError("config key '" + key + "' must be a number");
    return v.get<double>();
}

int get_int(const json& doc, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_number_integer()) throw ConfigError("config key '" + key + "' must be an integer");
    return v.get<int>();
}

std::vector<double> get_increasing_list(const json& doc, const std::string& key) {
    const json& v = doc.at(key);
    if (!v.is_array() || v.empty()) throw ConfigError("config key '" + key + "' must be a non-empty array");
    std::vector<double> out;
    for (const json& item : v) {
        if (!item.is_number()) throw ConfigError("config key '" + key + "' must contain numbers only");
        const double x = item.get<double>();
        if (!out.empty() && !(x > out.back())) {
            throw ConfigError("config key '" + key + "' must be strictly increasing");
        }
        out.push_back(x);
    }
    return out;
}

std::vector<DrivePlan> get_drives(const json& doc) {
    const json& v = doc.at("drive");
    std::vector<DrivePlan> out;
    auto add = [&](const json& item) {
        if (!item.is_string()) throw ConfigError("config key 'drive' must hold strings");
        const DrivePlan d = parse_drive(item.get<std::string>().c_str());
        if (std::find(out.begin(), out.end(), d) != out.end()) {
            throw ConfigError("config key 'drive' lists a drive twice");
        }
        out.push_back(d);
    };
    if (v.is_array()) {
        if (v.empty()) throw ConfigError("config key 'drive' must not be empty");
        for (const json& item : v) add(item);
    } else {
        add(v);
    }
    return out;
}

std::string real_or_nan(double x) { return std::isnan(x) ? std::string("nan") : format_real(x); }

bool closed_system(const DecoherenceRates& r) { return r.closed(); }

// Uniform sample times 0 = t_0 < ... < t_{count-1} = T.
std::vector<double> sample_times(double total_time, int count) {
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) out[i] = i + 1 == count ? total_time : total_time * i / (count - 1);
    return out;
}

double max_abs_diff(const std::vector<ComplexVector>& a, const std::vector<ComplexVector>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, (a[i] - b[i]).cwiseAbs().maxCoeff());
    return worst;
}

IntegratorConfig endpoints_only(IntegratorConfig cfg) {
    cfg.record_every = cfg.steps;
    cfg.convergence_check = true;
    return cfg;
}

void warn_positivity(const DensityTrajectory& traj) {
    for (const PositivityWarning& w : traj.positivity_warnings) {
        std::cerr << "warning: density matrix eigenvalue " << format_real(w.min_eigenvalue) << " at t = "
                  << format_real(w.t) << "\n";
    }
}

}  // namespace

// ---------------------------------------------------------------- config

ExperimentConfig parse_config(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (!kRequiredKeys.contains(key) && !kOptionalKeys.contains(key)) {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    for (const std::string& key : kRequiredKeys) {
        if (!doc.contains(key)) throw ConfigError("missing config key '" + key + "'");
    }

    ExperimentConfig cfg;
    cfg.n_sites = get_int(doc, "n_sites");
    if (!doc.at("boundary").is_string()) throw ConfigError("config key 'boundary' must be a string");
    cfg.boundary = parse_boundary(doc.at("boundary").get<std::string>().c_str());
    cfg.delta = get_real(doc, "delta");
    cfg.g0 = get_real(doc, "g0");
    cfg.gf = get_real(doc, "gf");
    cfg.j0 = get_real(doc, "j0");
    cfg.jf = get_real(doc, "jf");
    cfg.total_time = get_real(doc, "total_time");
    if (doc.contains("drive")) cfg.drives = get_drives(doc);
    if (doc.contains("gamma")) cfg.rates.gamma = get_real(doc, "gamma");
    if (doc.contains("kappa")) cfg.rates.kappa = get_real(doc, "kappa");
    if (doc.contains("steps")) cfg.integrator.steps = get_int(doc, "steps");
    if (doc.contains("record_every")) cfg.integrator.record_every = get_int(doc, "record_every");
    if (doc.contains("t_values")) cfg.t_values = get_increasing_list(doc, "t_values");
    if (doc.contains("kappa_values")) cfg.kappa_values = get_increasing_list(doc, "kappa_values");
    if (doc.contains("output")) {
        if (!doc.at("output").is_string()) throw ConfigError("config key 'output' must be a string");
        cfg.output = doc.at("output").get<std::string>();
    }

    // Preconditions of every module the config feeds.
    const LatticeSpec spec = cfg.lattice();
    cfg.schedule();
    cfg.integrator.validate();
    jump_rates(spec, cfg.rates);
    if (cfg.g0 < 0.0 || cfg.gf < 0.0) throw RangeError("onsite couplings g0, gf must be non-negative");
    if (!cfg.t_values.empty() && !(cfg.t_values.front() > 0.0)) {
        throw ConfigError("t_values must be positive");
    }
    if (!cfg.kappa_values.empty() && cfg.kappa_values.front() < 0.0) {
        throw ConfigError("kappa_values must be non-negative");
    }
    mode_spectrum(spec, cfg.g0, cfg.j0, 0);
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_config(text.str());
}

std::vector<std::string> preset_names() {
    std::vector<std::string> out;
    for (const auto& [name, text] : detail::builtin_presets()) out.push_back(name);
    return out;
}

std::string preset_json(const std::string& name) {
    const auto& presets = detail::builtin_presets();
    const auto it = presets.find(name);
    if (it == presets.end()) throw ConfigError("unknown preset '" + name + "'");
    return it->second;
}

ExperimentConfig load_preset(const std::string& name) { return parse_config(preset_json(name)); }

// ---------------------------------------------------------------- CSV

std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != header_.size()) throw DimensionError("CSV row width does not match the header");
    rows_.push_back(std::move(row));
}

std::size_t CsvTable::column(std::string_view name) const {
    const auto it = std::find(header_.begin(), header_.end(), name);
    if (it == header_.end()) throw RangeError("no CSV column '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - header_.begin());
}

double CsvTable::number(std::size_t row, std::string_view column_name) const {
    return std::stod(rows_.at(row).at(column(column_name)));
}

void CsvTable::write(std::ostream& out) const {
    auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
        out << "\n";
    };
    line(header_);
    for (const auto& row : rows_) line(row);
}

std::string CsvTable::str() const {
    std::ostringstream out;
    write(out);
    return out.str();
}

// ---------------------------------------------------------------- experiments

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body, std::optional<unsigned> threads) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t workers = std::min<std::size_t>(count, threads.value_or(hw));
    std::vector<std::exception_ptr> errors(count);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
}

CsvTable run_trace(const ExperimentConfig& config) {
    const LatticeSpec spec = config.lattice();
    const RampSchedule schedule = config.schedule();
    const bool closed = closed_system(config.rates);
    std::vector<std::string> header{"drive", "t", "t_over_T", "g", "J", "Im_gL", "infidelity"};
    if (closed) header.push_back("delta_E");
    CsvTable table(header);

    IntegratorConfig integrator = config.integrator;
    integrator.convergence_check = true;
    const ComplexVector psi0 = initial_ground_state(spec, schedule);

    for (DrivePlan drive : config.drives) {
        auto row_prefix = [&](const CouplingSample& c, double im_gl) {
            return std::vector<std::string>{to_string(drive), format_real(c.t),
                                            format_real(c.t / schedule.total_time()), format_real(c.g),
                                            format_real(c.j), real_or_nan(im_gl)};
        };
        if (closed) {
            const Trajectory traj = evolve_blockwise(spec, schedule, drive, psi0, integrator);
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const CouplingSample& c = traj.couplings[i];
                auto row = row_prefix(c, traj.im_gl[i]);
                row.push_back(format_real(1.0 - ground_fidelity_pure(spec, c.g, c.j, traj.states[i])));
                row.push_back(format_real(energy_cost(spec, schedule, drive, traj.states[i], c.t).delta_e));
                table.add_row(std::move(row));
            }
        } else {
            const DensityTrajectory traj =
                evolve_lindblad(spec, schedule, drive, embed_pure_state(psi0), config.rates, integrator);
            warn_positivity(traj);
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                const CouplingSample& c = traj.couplings[i];
                auto row = row_prefix(c, traj.im_gl[i]);
                row.push_back(format_real(1.0 - ground_fidelity_mixed(spec, c.g, c.j, traj.states[i])));
                table.add_row(std::move(row));
            }
        }
    }
    return table;
}

double final_infidelity(const ExperimentConfig& config, DrivePlan drive, double total_time,
                        const DecoherenceRates& rates) {
    const LatticeSpec spec = config.lattice();
    const RampSchedule schedule = config.schedule().with_total_time(total_time);
    const IntegratorConfig integrator = endpoints_only(config.integrator);
    const ComplexVector psi0 = initial_ground_state(spec, schedule);
    const CouplingSample end = couplings_at(schedule, total_time);
    if (closed_system(rates)) {
        const Trajectory traj = evolve_blockwise(spec, schedule, drive, psi0, integrator);
        return 1.0 - ground_fidelity_pure(spec, end.g, end.j, traj.states.back());
    }
    const DensityTrajectory traj =
        evolve_lindblad(spec, schedule, drive, embed_pure_state(psi0), rates, integrator);
    warn_positivity(traj);
    return 1.0 - ground_fidelity_mixed(spec, end.g, end.j, traj.states.back());
}

CsvTable run_time_sweep(const ExperimentConfig& config) {
    if (config.t_values.empty()) throw ConfigError("sweep-time needs a non-empty t_values list");
    const std::vector<double> kappas =
        config.kappa_values.empty() ? std::vector<double>{config.rates.kappa} : config.kappa_values;

    struct Point {
        DrivePlan drive;
        double kappa;
        double t;
    };
    std::vector<Point> points;
    for (DrivePlan d : config.drives)
        for (double kappa : kappas)
            for (double t : config.t_values) points.push_back({d, kappa, t});

    std::vector<double> results(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        const Point& p = points[i];
        results[i] = final_infidelity(config, p.drive, p.t, {config.rates.gamma, p.kappa});
    });

    CsvTable table({"T", "drive", "gamma", "kappa", "final_infidelity"});
    for (std::size_t i = 0; i < points.size(); ++i) {
        table.add_row({format_real(points[i].t), to_string(points[i].drive), format_real(config.rates.gamma),
                       format_real(points[i].kappa), format_real(results[i])});
    }
    return table;
}

CsvTable run_kappa_sweep(const ExperimentConfig& config) {
    if (config.kappa_values.empty()) throw ConfigError("sweep-kappa needs a non-empty kappa_values list");
    const std::vector<double> times =
        config.t_values.empty() ? std::vector<double>{config.total_time} : config.t_values;

    struct Point {
        DrivePlan drive;
        double t;
        double kappa;
    };
    std::vector<Point> points;
    for (DrivePlan d : config.drives)
        for (double t : times)
            for (double kappa : config.kappa_values) points.push_back({d, t, kappa});

    std::vector<double> results(points.size());
    parallel_for(points.size(), [&](std::size_t i) {
        const Point& p = points[i];
        results[i] = final_infidelity(config, p.drive, p.t, {config.rates.gamma, p.kappa});
    });

    CsvTable table({"kappa", "T", "drive", "final_infidelity"});
    for (std::size_t i = 0; i < points.size(); ++i) {
        table.add_row({format_real(points[i].kappa), format_real(points[i].t), to_string(points[i].drive),
                       format_real(results[i])});
    }
    return table;
}

// ---------------------------------------------------------------- validation

bool ValidationReport::passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
}

void ValidationReport::print(std::ostream& out) const {
    for (const CheckResult& c : checks) {
        char tol[16];
        std::snprintf(tol, sizeof tol, "%.0e", c.tolerance);
        out << (c.passed ? "PASS " : "FAIL ") << c.name << "  max_dev=" << format_real(c.max_deviation)
            << "  tol=" << tol;
        if (!c.detail.empty()) out << "  (" << c.detail << ")";
        out << "\n";
    }
    out << (passed() ? "all checks passed" : "validation FAILED") << "\n";
}

ValidationReport validate(const ExperimentConfig& config) {
    const LatticeSpec spec = config.lattice();
    const RampSchedule schedule = config.schedule();
    const std::vector<double> times = sample_times(schedule.total_time(), 64);
    ValidationReport report;

    // Runs `fn`, which returns the max deviation; errors become failed checks.
    auto check = [&](const std::string& name, double tol, auto&& fn) {
        try {
            const double dev = fn();
            report.checks.push_back({name, dev, tol, dev <= tol, ""});
        } catch (const std::exception& e) {
            report.checks.push_back({name, std::numeric_limits<double>::infinity(), tol, false, e.what()});
        }
    };

    check("spectrum: analytic vs Jacobi eigenvalues", 1e-10, [&] {
        double worst = 0.0;
        for (double t : times) {
            const CouplingSample c = couplings_at(schedule, t);
            std::vector<double> analytic;
            for (const ModeSpectrum& m : mode_spectra(spec, c.g, c.j)) {
                analytic.push_back(m.lambda_plus);
                analytic.push_back(m.lambda_minus);
            }
            std::sort(analytic.begin(), analytic.end());
            const RealVector numeric = jacobi_eigensystem(assemble_hr(spec, c.g, c.j)).eigenvalues;
            for (std::size_t i = 0; i < analytic.size(); ++i) {
                worst = std::max(worst, std::abs(analytic[i] - numeric(static_cast<Eigen::Index>(i))));
            }
        }
        return worst;
    });

    check("cd: spectral sum vs mode blocks", 1e-10, [&] {
        double worst = 0.0;
        for (double t : times) {
            const CouplingSample c = couplings_at(schedule, t);
            const ComplexMatrix a = exact_cd_matrix(spec, c, CdMethod::SpectralSum);
            const ComplexMatrix b = exact_cd_matrix(spec, c, CdMethod::ModeBlocks);
            worst = std::max(worst, (a - b).cwiseAbs().maxCoeff());
        }
        return worst;
    });

    check("cd: local drive blocks equal exact ground-mode block", 1e-12, [&] {
        double worst = 0.0;
        for (double t : times) {
            const CouplingSample c = couplings_at(schedule, t);
            const ModeBlock target = exact_cd_eigen_block(spec, c, 0);
            for (const ModeBlock& g : project_to_mode_blocks(spec, c.g, c.j,
                                                             local_cd_matrix(spec, local_cd_params(spec, c)))) {
                worst = std::max(worst, (g - target).cwiseAbs().maxCoeff());
            }
        }
        return worst;
    });

    check("energy: closed-form E_G vs Jacobi minimum", 1e-10, [&] {
        double worst = 0.0;
        for (double t : times) {
            const CouplingSample c = couplings_at(schedule, t);
            for (DrivePlan d : {DrivePlan::None, DrivePlan::ExactCD, DrivePlan::LocalCD}) {
                const auto blocks = drive_eigen_blocks(spec, c, d);
                const double closed = ground_energy_ht(spec, c.g, c.j, blocks);
                const double dense = jacobi_eigensystem(total_hamiltonian(spec, c, d)).eigenvalues(0);
                worst = std::max(worst, std::abs(closed - dense));
            }
        }
        return worst;
    });

    const ComplexVector psi0 = initial_ground_state(spec, schedule);
    IntegratorConfig checked = config.integrator;
    checked.convergence_check = true;
    IntegratorConfig plain = config.integrator;
    plain.convergence_check = false;

    std::map<DrivePlan, Trajectory> block_runs;
    for (DrivePlan d : {DrivePlan::None, DrivePlan::ExactCD, DrivePlan::LocalCD}) {
        check(std::string("evolve: step-halving convergence, drive ") + to_string(d), 1e-10, [&] {
            block_runs[d] = evolve_blockwise(spec, schedule, d, psi0, checked);
            return block_runs[d].convergence_error;
        });
    }
    if (block_runs.size() == 3) {
        for (DrivePlan d : {DrivePlan::None, DrivePlan::ExactCD, DrivePlan::LocalCD}) {
            check(std::string("evolve: dense vs block, drive ") + to_string(d), 1e-10, [&] {
                const Trajectory dense = evolve_schrodinger(spec, schedule, d, psi0, plain);
                return max_abs_diff(dense.states, block_runs[d].states);
            });
        }
        check("evolve: exact CD vs local CD trajectories", 1e-10, [&] {
            return max_abs_diff(block_runs[DrivePlan::ExactCD].states, block_runs[DrivePlan::LocalCD].states);
        });
        check("energy: delta_E >= 0 along local-CD run", 1e-10, [&] {
            const Trajectory& traj = block_runs[DrivePlan::LocalCD];
            double worst = 0.0;
            for (std::size_t i = 0; i < traj.times.size(); ++i) {
                worst = std::max(worst, -energy_cost(spec, schedule, DrivePlan::LocalCD, traj.states[i],
                                                     traj.times[i]).delta_e);
            }
            return worst;
        });

        const DecoherenceRates rates =
            config.rates.closed() ? DecoherenceRates{5.0 / std::numbers::pi * 1e-5, 5e-5} : config.rates;
        for (DrivePlan d : config.drives) {
            const std::string tag = std::string(", drive ") + to_string(d);
            DensityTrajectory open;
            try {
                open = evolve_lindblad(spec, schedule, d, embed_pure_state(psi0), rates, plain);
            } catch (const std::exception& e) {
                report.checks.push_back({"lindblad: run" + tag, std::numeric_limits<double>::infinity(), 0.0,
                                         false, e.what()});
                continue;
            }
            check("lindblad: trace drift" + tag, 1e-9, [&] {
                double worst = 0.0;
                for (const ComplexMatrix& rho : open.states) worst = std::max(worst, std::abs(rho.trace() - 1.0));
                return worst;
            });
            check("lindblad: Hermiticity drift" + tag, 1e-10, [&] {
                double worst = 0.0;
                for (const ComplexMatrix& rho : open.states)
                    worst = std::max(worst, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
                return worst;
            });
            check("lindblad: negative eigenvalue" + tag, 1e-9, [&] {
                double worst = 0.0;
                for (const ComplexMatrix& rho : open.states) {
                    const ComplexMatrix sym = 0.5 * (rho + rho.adjoint());
                    worst = std::max(worst, -jacobi_eigensystem(sym).eigenvalues(0));
                }
                return worst;
            });
            check("lindblad: closed limit vs pure state" + tag, 1e-9, [&] {
                const DensityTrajectory closed =
                    evolve_lindblad(spec, schedule, d, embed_pure_state(psi0), DecoherenceRates{}, plain);
                double worst = 0.0;
                const Trajectory& pure = block_runs[d];
                for (std::size_t i = 0; i < closed.states.size(); ++i) {
                    worst = std::max(worst, (closed.states[i] - embed_pure_state(pure.states[i]))
                                                .cwiseAbs()
                                                .maxCoeff());
                }
                return worst;
            });
        }
    }
    return report;
}

}  // namespace jclcd
