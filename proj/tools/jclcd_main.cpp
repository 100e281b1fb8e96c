// jclcd: run JC-lattice counterdiabatic-driving experiments from a config
// file or a built-in preset and write the results as CSV.
//
// Exit codes: 0 success, 1 validation or physics error, 2 config error.

#include "jclcd/errors.hpp"
#include "jclcd/runner.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

constexpr int kExitPhysics = 1;
constexpr int kExitConfig = 2;

struct Options {
    std::string config_path;
    std::string preset;
    std::string out;
    std::optional<int> steps;
};

jclcd::ExperimentConfig load(const Options& opt) {
    if (opt.config_path.empty() == opt.preset.empty()) {
        throw jclcd::ConfigError("pass exactly one of --config or --preset");
    }
    jclcd::ExperimentConfig cfg =
        opt.preset.empty() ? jclcd::load_config_file(opt.config_path) : jclcd::load_preset(opt.preset);
    if (opt.steps) {
        cfg.integrator.steps = *opt.steps;
        // A preset cadence may not divide the new step count.
        if (cfg.integrator.record_every > 0 && *opt.steps % cfg.integrator.record_every != 0) {
            cfg.integrator.record_every = 0;
        }
        cfg.integrator.validate();
    }
    return cfg;
}

void emit(const jclcd::CsvTable& table, const Options& opt, const jclcd::ExperimentConfig& cfg) {
    const std::string path = opt.out.empty() ? cfg.output : opt.out;
    if (path.empty() || path == "-") {
        table.write(std::cout);
        return;
    }
    std::ofstream file(path);
    if (!file) throw jclcd::ConfigError("cannot write '" + path + "'");
    table.write(file);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jaynes-Cummings lattice counterdiabatic-driving simulator"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON experiment config");
        sub->add_option("--preset", opt.preset, "built-in preset (fig2-pbc, fig2-obc, fig3, fig4a, fig4b)");
        sub->add_option("--steps", opt.steps, "override the RK4 step count (power of two >= 256)");
    };
    auto add_out = [&](CLI::App* sub) { sub->add_option("--out", opt.out, "CSV output path (default stdout)"); };

    CLI::App* trace = app.add_subcommand("trace", "time trace of couplings, infidelity and energy cost");
    CLI::App* sweep_time = app.add_subcommand("sweep-time", "final infidelity versus total time T");
    CLI::App* sweep_kappa = app.add_subcommand("sweep-kappa", "final infidelity versus cavity decay rate");
    CLI::App* check = app.add_subcommand("validate", "run the oracle suite on a config");
    CLI::App* presets = app.add_subcommand("presets", "list built-in presets or print one");
    std::string show;
    presets->add_option("name", show, "preset to print");
    for (CLI::App* sub : {trace, sweep_time, sweep_kappa, check}) add_common(sub);
    for (CLI::App* sub : {trace, sweep_time, sweep_kappa}) add_out(sub);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    jclcd::ExperimentConfig cfg;
    try {
        if (presets->parsed()) {
            if (show.empty()) {
                for (const std::string& name : jclcd::preset_names()) std::cout << name << "\n";
            } else {
                std::cout << jclcd::preset_json(show);
            }
            return 0;
        }
        cfg = load(opt);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        if (check->parsed()) {
            const jclcd::ValidationReport report = jclcd::validate(cfg);
            report.print(std::cout);
            return report.passed() ? 0 : kExitPhysics;
        }
        if (trace->parsed()) emit(jclcd::run_trace(cfg), opt, cfg);
        if (sweep_time->parsed()) emit(jclcd::run_time_sweep(cfg), opt, cfg);
        if (sweep_kappa->parsed()) emit(jclcd::run_kappa_sweep(cfg), opt, cfg);
    } catch (const jclcd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitPhysics;
    }
    return 0;
}
