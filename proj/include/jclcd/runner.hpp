// runner.hpp: config-driven experiments, CSV output and the oracle harness
// behind the `jclcd` command-line tool.

#pragma once

#include "jclcd/cd.hpp"
#include "jclcd/evolve.hpp"
#include "jclcd/lattice.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace jclcd {

struct ExperimentConfig {
    int n_sites = 4;
    Boundary boundary = Boundary::Periodic;
    double delta = 1.0;
    double g0 = 1.0, gf = 1.0, j0 = 0.0, jf = 2.0;
    double total_time = 0.0;
    std::vector<DrivePlan> drives{DrivePlan::LocalCD};
    DecoherenceRates rates;
    IntegratorConfig integrator;
    std::vector<double> t_values;
    std::vector<double> kappa_values;
    std::string output;

    LatticeSpec lattice() const { return LatticeSpec(n_sites, boundary, delta); }
    RampSchedule schedule() const { return RampSchedule(g0, gf, j0, jf, total_time); }
};

// Parses the flat JSON config. Unknown keys, wrong types, missing required
// keys and non-increasing sweep lists raise ConfigError; lattice and ramp
// preconditions are checked here too (SizeError, RangeError, ...).
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config_file(const std::string& path);

// Built-in presets: fig2-pbc, fig2-obc, fig3, fig4a, fig4b.
std::vector<std::string> preset_names();
std::string preset_json(const std::string& name);
ExperimentConfig load_preset(const std::string& name);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row);
    const std::vector<std::string>& header() const noexcept { return header_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
    std::size_t column(std::string_view name) const;
    double number(std::size_t row, std::string_view column_name) const;

    void write(std::ostream& out) const;
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

// Scientific notation with 17 significant digits.
std::string format_real(double x);

// One trajectory per configured drive: drive, t, t_over_T, g, J, Im_gL,
// infidelity and (closed systems only) delta_E.
CsvTable run_trace(const ExperimentConfig& config);

// Final infidelity for every (drive, kappa, T); kappa iterates over
// kappa_values when present, otherwise the single configured kappa.
CsvTable run_time_sweep(const ExperimentConfig& config);

// Final infidelity for every (drive, T, kappa); T iterates over t_values when
// present, otherwise total_time.
CsvTable run_kappa_sweep(const ExperimentConfig& config);

// Final 1 - F(T) of a single run (pure-state path when the rates vanish).
double final_infidelity(const ExperimentConfig& config, DrivePlan drive, double total_time,
                        const DecoherenceRates& rates);

struct CheckResult {
    std::string name;
    double max_deviation;
    double tolerance;
    bool passed;
    std::string detail;
};

struct ValidationReport {
    std::vector<CheckResult> checks;
    bool passed() const;
    void print(std::ostream& out) const;
};

ValidationReport validate(const ExperimentConfig& config);

// Runs body(i) for i in [0, count) on up to hardware_concurrency threads.
// The first exception by index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body,
                  std::optional<unsigned> threads = std::nullopt);

}  // namespace jclcd
