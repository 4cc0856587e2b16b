// phonon_chain: harmonic-chain thermodynamics, length statistics, oracle
// checks and density-matrix demos from the command line.

#include "commands.hpp"
#include "run_config.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using namespace phonon_chain::tool;

struct Flags {
    std::optional<std::string> config;
    std::optional<std::string> format;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    bool parallel = false;

    std::optional<std::size_t> n;
    std::optional<double> mass, coupling, spacing, hbar, lambda, energy;
    std::optional<std::string> n_values;
    std::optional<std::size_t> cutoff, mc_samples;
};

RunConfig resolve(const Flags& f) {
    RunConfig config;
    if (f.config) {
        apply_config_file(config, *f.config);
    } else if (const char* env = std::getenv("PHONON_CHAIN_CONFIG"); env && *env) {
        apply_config_file(config, env);
    }

    if (f.n) config.params.n_particles = *f.n;
    if (f.mass) config.params.mass = *f.mass;
    if (f.coupling) config.params.coupling = *f.coupling;
    if (f.spacing) config.params.spacing = *f.spacing;
    if (f.hbar) config.params.hbar = *f.hbar;
    // a flag for one of lambda/energy replaces whatever the file chose
    if (f.lambda) {
        config.lambda = *f.lambda;
        if (!f.energy) config.energy.reset();
    }
    if (f.energy) {
        config.energy = *f.energy;
        if (!f.lambda) config.lambda.reset();
    }
    if (f.n_values) config.n_values = parse_size_list("n-values", *f.n_values);
    if (f.cutoff) config.cutoff = *f.cutoff;
    if (f.mc_samples) config.mc_samples = *f.mc_samples;
    if (f.seed) config.seed = *f.seed;
    if (f.format) config.format = parse_format(*f.format);
    if (f.out) config.out = *f.out;
    if (f.parallel) config.parallel = true;
    return config;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum harmonic chain: normal modes, Gibbs thermodynamics, length statistics"};
    app.require_subcommand(1);

    Flags f;
    app.add_option("--config", f.config, "key=value config file (fallback: $PHONON_CHAIN_CONFIG)");
    app.add_option("--format", f.format, "Output format: csv or json");
    app.add_option("--out", f.out, "Write the report to this file instead of stdout");
    app.add_option("--seed", f.seed, "Seed for every random stream");
    app.add_flag("--parallel", f.parallel, "Compute sweep rows concurrently");

    app.add_option("--n", f.n, "Number of particles N >= 2");
    app.add_option("--mass", f.mass, "Particle mass mu > 0");
    app.add_option("--coupling", f.coupling, "Spring strength kappa > 0");
    app.add_option("--spacing", f.spacing, "Equilibrium spacing xi >= 0");
    app.add_option("--hbar", f.hbar, "Quantum of action (default 1)");
    app.add_option("--lambda", f.lambda, "Lagrange multiplier lambda > 0 (inverse temperature)");
    app.add_option("--energy", f.energy, "Mean internal energy E > 0");
    app.add_option("--n-values", f.n_values, "Comma-separated N list for scaling-sweep");
    app.add_option("--cutoff", f.cutoff, "Base Fock cutoff for oracle-check");
    app.add_option("--mc-samples", f.mc_samples, "Monte-Carlo sample count for oracle-check");

    auto* modes = app.add_subcommand("modes", "Mode frequencies and orthogonality residual");
    auto* thermo = app.add_subcommand("thermo", "Gibbs state at given lambda or energy");
    auto* length = app.add_subcommand("length-stats", "Mean and spread of the chain length");
    auto* sweep = app.add_subcommand("scaling-sweep", "Relative length spread versus N");
    auto* oracle = app.add_subcommand("oracle-check", "Brute-force checks of the closed forms");

    MeasureOptions measure_opts;
    auto* measure = app.add_subcommand("measure-demo", "Premeasurement and the apparatus mixture");
    measure->add_option("--amplitudes", measure_opts.amplitudes_re, "Real parts of c_k")
        ->delimiter(',')
        ->required();
    measure->add_option("--amplitudes-im", measure_opts.amplitudes_im, "Imaginary parts of c_k")
        ->delimiter(',');
    measure->add_option("--dim-system", measure_opts.dim_system, "System dimension");
    measure->add_option("--dim-apparatus", measure_opts.dim_apparatus, "Apparatus dimension");
    measure->add_flag("--normalize", measure_opts.normalize, "Rescale amplitudes to unit norm");
    measure->add_option("--trials", measure_opts.trials, "Random registrations per check");

    ClassCheckOptions class_opts;
    auto* klass = app.add_subcommand("class-check", "Classical-state coordinates and equivalence");
    klass->add_option("--rho", class_opts.rho_path, "First density matrix (JSON)");
    klass->add_option("--sigma", class_opts.sigma_path, "Second density matrix (JSON)");
    klass->add_option("--observables", class_opts.observables_path, "Observable list (JSON)");
    klass->add_flag("--counterexample", class_opts.counterexample,
                    "Run the built-in qubit superposition counterexample");
    klass->add_option("--tol-mean", class_opts.tolerances.mean, "Tolerance on means");
    klass->add_option("--tol-spread", class_opts.tolerances.spread, "Tolerance on spreads");
    klass->add_option("--trials", class_opts.trials, "Random phase trials for the counterexample");

    for (auto* sub : {modes, thermo, length, sweep, oracle, measure, klass})
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const RunConfig config = resolve(f);
        std::ofstream file;
        if (!config.out.empty()) {
            file.open(config.out);
            if (!file)
                throw config_error("cannot open output file '" + config.out + "'");
        }
        std::ostream& out = config.out.empty() ? std::cout : file;

        if (*modes) return cmd_modes(config, out);
        if (*thermo) return cmd_thermo(config, out);
        if (*length) return cmd_length_stats(config, out);
        if (*sweep) return cmd_scaling_sweep(config, out);
        if (*oracle) return cmd_oracle_check(config, out);
        if (*measure) return cmd_measure_demo(config, measure_opts, out);
        if (*klass) return cmd_class_check(config, class_opts, out);
    } catch (const config_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const phonon_chain::error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
