#pragma once

// Subcommands of the phonon_chain tool. Each writes its report to `out` and
// returns the process exit code: 0 success, 1 check failure. Usage and
// configuration problems are thrown as config_error (exit code 2).

#include "run_config.hpp"

#include <phonon_chain/phonon_chain.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

namespace phonon_chain::tool {

using nlohmann::json;

/// %.17g, enough digits to round-trip a double.
inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string num(const std::optional<double>& v) { return v ? num(*v) : std::string(); }

inline json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json report_header(const char* command, const RunConfig& config) {
    json j;
    j["command"] = command;
    j["config"] = to_json(config);
    j["seed"] = config.seed;
    return j;
}

inline void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

// ---- matrix files: {"dim": d, "re": [...row-major...], "im": [...]} ----

inline json matrix_to_json(const Eigen::MatrixXcd& m) {
    json re = json::array(), im = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            re.push_back(m(i, k).real());
            im.push_back(m(i, k).imag());
        }
    return json{{"dim", static_cast<std::size_t>(m.rows())}, {"re", re}, {"im", im}};
}

inline Eigen::MatrixXcd matrix_from_json(const json& j) {
    if (!j.is_object() || !j.contains("dim") || !j.contains("re") || !j.contains("im"))
        throw config_error("matrix object needs fields dim, re, im");
    if (!j["dim"].is_number_integer() || j["dim"].get<long long>() <= 0)
        throw config_error("matrix dim must be a positive integer");
    const auto d = j["dim"].get<std::size_t>();
    const json& re = j["re"];
    const json& im = j["im"];
    if (!re.is_array() || !im.is_array() || re.size() != d * d || im.size() != d * d)
        throw config_error("matrix re/im must be arrays of dim*dim numbers");
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t idx = 0; idx < d * d; ++idx) {
        if (!re[idx].is_number() || !im[idx].is_number())
            throw config_error("matrix entries must be numbers");
        m(static_cast<Eigen::Index>(idx / d), static_cast<Eigen::Index>(idx % d)) =
            cplx(re[idx].get<double>(), im[idx].get<double>());
    }
    return m;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot read '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error("malformed JSON in '" + path + "': " + e.what());
    }
}

inline DensityMatrix read_density_matrix(const std::string& path) {
    try {
        return DensityMatrix(matrix_from_json(read_json_file(path)));
    } catch (const phonon_chain::error& e) {
        throw config_error("'" + path + "': " + e.what());
    } catch (const config_error& e) {
        throw config_error("'" + path + "': " + e.what());
    }
}

/// Either a JSON array of matrix objects or {"observables": [...]}.
inline std::vector<Eigen::MatrixXcd> read_observables(const std::string& path) {
    json j = read_json_file(path);
    if (j.is_object() && j.contains("observables"))
        j = j["observables"];
    if (!j.is_array() || j.empty())
        throw config_error("'" + path + "': expected a nonempty array of observables");
    std::vector<Eigen::MatrixXcd> observables;
    try {
        for (const auto& item : j)
            observables.push_back(matrix_from_json(item));
    } catch (const config_error& e) {
        throw config_error("'" + path + "': " + e.what());
    }
    return observables;
}

// ---- modes ----

/// Dense transforms above this size are skipped; the residual needs N^3 work.
inline constexpr std::size_t max_dense_modes = 4096;

inline int cmd_modes(const RunConfig& config, std::ostream& out) {
    validate(config);
    const ChainParams& p = config.params;
    std::optional<double> residual;
    const ModeBasis basis = p.n_particles <= max_dense_modes ? build_mode_basis(p)
                                                             : build_mode_spectrum(p);
    if (basis.has_transform())
        residual = orthogonality_residual(basis);

    if (config.format == OutputFormat::json) {
        json j = report_header("modes", config);
        j["frequencies"] = std::vector<double>(basis.frequencies().begin(), basis.frequencies().end());
        j["orthogonality_residual"] = opt_json(residual);
        emit_json(out, j);
    } else {
        out << "m,omega\n";
        for (std::size_t m = 0; m < basis.size(); ++m)
            out << m << ',' << num(basis.frequency(m)) << '\n';
        out << "# orthogonality_residual=" << num(residual) << '\n';
    }
    return 0;
}

// ---- thermo ----

inline ThermoState resolve_thermo(const RunConfig& config, const ModeBasis& basis) {
    if (config.lambda.has_value() == config.energy.has_value())
        throw config_error("set exactly one of --lambda and --energy");
    if (config.lambda)
        return thermo_state(*config.lambda, config.params, basis);
    return solve_lambda(*config.energy, config.params, basis);
}

inline int cmd_thermo(const RunConfig& config, std::ostream& out) {
    validate(config);
    const ChainParams& p = config.params;
    const ModeBasis basis = build_mode_spectrum(p);
    const ThermoState thermo = resolve_thermo(config, basis);
    const double S = entropy(thermo);

    // lambda -> E -> lambda, or E -> lambda -> E
    double roundtrip = 0.0;
    if (config.lambda) {
        const ThermoState back = solve_lambda(thermo.internal_energy, p, basis);
        roundtrip = std::abs(back.lambda - thermo.lambda) / thermo.lambda;
    } else {
        roundtrip = std::abs(thermo.internal_energy - *config.energy) / *config.energy;
    }

    if (config.format == OutputFormat::json) {
        json j = report_header("thermo", config);
        j["lambda"] = thermo.lambda;
        j["internal_energy"] = thermo.internal_energy;
        j["entropy"] = S;
        j["gamma"] = thermo.gamma;
        j["temperature"] = thermo.temperature();
        j["roundtrip_residual"] = roundtrip;
        json modes = json::array();
        for (std::size_t k = 0; k < thermo.per_mode.size(); ++k) {
            const auto& m = thermo.per_mode[k];
            modes.push_back({{"m", k + 1},
                             {"omega", m.omega},
                             {"partition", m.partition},
                             {"mean_occupation", m.mean_occupation},
                             {"u2_mean", m.u2_mean}});
        }
        j["modes"] = modes;
        emit_json(out, j);
    } else {
        out << "m,omega,partition,mean_occupation,u2_mean\n";
        for (std::size_t k = 0; k < thermo.per_mode.size(); ++k) {
            const auto& m = thermo.per_mode[k];
            out << k + 1 << ',' << num(m.omega) << ',' << num(m.partition) << ','
                << num(m.mean_occupation) << ',' << num(m.u2_mean) << '\n';
        }
        out << "# lambda=" << num(thermo.lambda) << '\n'
            << "# internal_energy=" << num(thermo.internal_energy) << '\n'
            << "# entropy=" << num(S) << '\n'
            << "# gamma=" << num(thermo.gamma) << '\n'
            << "# temperature=" << num(thermo.temperature()) << '\n'
            << "# roundtrip_residual=" << num(roundtrip) << '\n';
    }
    return 0;
}

// ---- length-stats ----

inline int cmd_length_stats(const RunConfig& config, std::ostream& out) {
    validate(config);
    const ChainParams& p = config.params;
    const ModeBasis basis = build_mode_spectrum(p);
    const ThermoState thermo = resolve_thermo(config, basis);
    const MomentReport exact = length_variance_exact(p, basis, thermo);
    const double asym_var = length_variance_asymptotic(p, thermo);
    std::optional<double> asym_rel;
    if (p.spacing > 0.0)
        asym_rel = relative_std_asymptotic(p, thermo);
    const double bound = length_variance_bound(p, thermo);

    if (config.format == OutputFormat::json) {
        json j = report_header("length-stats", config);
        j["lambda"] = thermo.lambda;
        j["internal_energy"] = thermo.internal_energy;
        j["mean"] = exact.mean;
        j["variance_exact"] = exact.variance;
        j["variance_asymptotic"] = asym_var;
        j["variance_bound"] = bound;
        j["rel_std_exact"] = opt_json(exact.rel_std);
        j["rel_std_asymptotic"] = opt_json(asym_rel);
        emit_json(out, j);
    } else {
        out << "n,lambda,mean,variance_exact,variance_asymptotic,variance_bound,rel_std_exact,"
               "rel_std_asymptotic\n";
        out << p.n_particles << ',' << num(thermo.lambda) << ',' << num(exact.mean) << ','
            << num(exact.variance) << ',' << num(asym_var) << ',' << num(bound) << ','
            << num(exact.rel_std) << ',' << num(asym_rel) << '\n';
    }
    return 0;
}

// ---- scaling-sweep ----

inline std::vector<std::size_t> default_sweep_sizes() {
    std::vector<std::size_t> n;
    for (std::size_t k = 6; k <= 16; ++k)
        n.push_back(std::size_t{1} << k);
    return n;
}

inline int cmd_scaling_sweep(const RunConfig& config, std::ostream& out) {
    validate(config);
    if (config.energy)
        throw config_error("scaling-sweep holds lambda fixed; pass --lambda, not --energy");
    if (!config.lambda)
        throw config_error("scaling-sweep needs --lambda");
    if (!(config.params.spacing > 0.0))
        throw config_error("scaling-sweep needs a positive spacing (MeanZero)");
    const auto sizes = config.n_values.empty() ? default_sweep_sizes() : config.n_values;
    ScalingSweep sweep;
    try {
        sweep = scaling_sweep(config.params, *config.lambda, sizes, config.parallel);
    } catch (const phonon_chain::error& e) {
        throw config_error(e.what());
    }

    if (config.format == OutputFormat::json) {
        json j = report_header("scaling-sweep", config);
        json rows = json::array();
        for (const auto& r : sweep.rows)
            rows.push_back({{"n", r.n_particles},
                            {"lambda", r.lambda},
                            {"mean_length", r.mean_length},
                            {"variance_exact", r.variance_exact},
                            {"variance_asymptotic", r.variance_asymptotic},
                            {"rel_std_exact", r.rel_std_exact},
                            {"rel_std_asymptotic", r.rel_std_asymptotic}});
        j["rows"] = rows;
        j["slope"] = opt_json(sweep.slope);
        j["intercept"] = opt_json(sweep.intercept);
        j["rel_std_ratio"] = sweep.rel_std_ratio;
        j["variance_ratio"] = sweep.variance_ratio;
        emit_json(out, j);
    } else {
        out << "n,lambda,mean_length,variance_exact,variance_asymptotic,rel_std_exact,"
               "rel_std_asymptotic\n";
        for (const auto& r : sweep.rows)
            out << r.n_particles << ',' << num(r.lambda) << ',' << num(r.mean_length) << ','
                << num(r.variance_exact) << ',' << num(r.variance_asymptotic) << ','
                << num(r.rel_std_exact) << ',' << num(r.rel_std_asymptotic) << '\n';
        out << "# slope=" << num(sweep.slope) << '\n'
            << "# intercept=" << num(sweep.intercept) << '\n'
            << "# rel_std_ratio=" << num(sweep.rel_std_ratio) << '\n'
            << "# variance_ratio=" << num(sweep.variance_ratio) << '\n';
    }
    return 0;
}

// ---- oracle-check ----

struct OracleCheckLine {
    std::string check;
    std::string parameter;
    std::size_t cutoff = 0;
    double value = 0.0;
    double reference = 0.0;
    double deviation = 0.0;
    double bound = 0.0;
    bool passed = false;
    std::string message;
};

inline constexpr double oracle_u2_tolerance = 1e-10;
inline constexpr double oracle_length_tolerance = 1e-9;

/// Truncated-Fock <u^2> against the coth closed form on a
/// (lambda hbar omega) x (cutoff, 2 cutoff, 4 cutoff) grid, the N-body length
/// moments against the exact sum, and Monte-Carlo occupations against the
/// Planck mean.
inline std::vector<OracleCheckLine> run_oracle_checks(const RunConfig& config) {
    const ChainParams& p = config.params;
    std::vector<OracleCheckLine> lines;
    const double omega = 1.0;
    for (double y : {0.1, 0.3, 1.0, 3.0, 10.0}) {
        const double lambda = y / (p.hbar * omega);
        for (std::size_t mult : {1u, 2u, 4u}) {
            OracleCheckLine line;
            line.check = "mode_u2";
            line.parameter = "lambda_hbar_omega=" + num(y);
            line.cutoff = config.cutoff * mult;
            line.reference = mode_u2_mean(lambda, omega, p.mass, p.hbar);
            try {
                const TruncatedMode mode = build_truncated_mode(lambda, omega, p.mass, p.hbar, line.cutoff);
                line.value = oracle_u2(mode);
                line.deviation = std::abs(line.value - line.reference);
                line.passed = line.deviation <= oracle_u2_tolerance && line.deviation <= mode.tail_bound;
                line.bound = mode.tail_bound;
            } catch (const phonon_chain::error& e) {
                line.passed = false;
                line.message = e.what();
            }
            lines.push_back(line);
        }
    }

    {
        ChainParams chain = p;
        if (chain.n_particles > 12)
            chain.n_particles = 6;
        const double lambda = config.lambda.value_or(1.0);
        OracleCheckLine line;
        line.check = "length_variance";
        line.parameter = "n=" + std::to_string(chain.n_particles) + ";lambda=" + num(lambda);
        line.cutoff = config.cutoff;
        try {
            const ModeBasis basis = build_mode_basis(chain);
            const ThermoState thermo = thermo_state(lambda, chain, basis);
            const auto oracle = oracle_length_moments(chain, basis, thermo, config.cutoff);
            line.value = oracle.moments.variance;
            line.reference = length_variance_exact(chain, basis, thermo).variance;
            line.deviation = std::abs(line.value - line.reference);
            line.bound = oracle.tail_bound;
            line.passed = line.deviation <= oracle_length_tolerance &&
                          oracle.moments.mean == length_mean(chain);
        } catch (const phonon_chain::error& e) {
            line.passed = false;
            line.message = e.what();
        }
        lines.push_back(line);
    }

    {
        const double y = std::numbers::ln2;
        const double lambda = y / (p.hbar * omega);
        const auto stats = mc_sample_occupations(lambda, omega, p.mass, p.hbar, config.mc_samples, config.seed);
        OracleCheckLine line;
        line.check = "mc_occupation";
        line.parameter = "lambda_hbar_omega=ln2;generator=" + std::string(stats.generator) +
                         ";seed=" + std::to_string(config.seed) +
                         ";samples=" + std::to_string(config.mc_samples);
        line.value = stats.mean_occupation;
        line.reference = mean_occupation(lambda, omega, p.hbar);
        line.deviation = std::abs(line.value - line.reference);
        line.bound = 3.0 * stats.occupation_stderr;
        line.passed = line.deviation <= line.bound;
        lines.push_back(line);
    }
    return lines;
}

inline int cmd_oracle_check(const RunConfig& config, std::ostream& out) {
    validate(config);
    if (config.energy)
        throw config_error("oracle-check takes --lambda, not --energy");
    const auto lines = run_oracle_checks(config);
    bool all = true;
    double worst_u2 = 0.0;
    for (const auto& l : lines) {
        all = all && l.passed;
        if (l.check == "mode_u2" && l.message.empty())
            worst_u2 = std::max(worst_u2, l.deviation);
    }

    if (config.format == OutputFormat::json) {
        json j = report_header("oracle-check", config);
        json checks = json::array();
        for (const auto& l : lines)
            checks.push_back({{"check", l.check},
                              {"parameter", l.parameter},
                              {"cutoff", l.cutoff},
                              {"value", l.value},
                              {"reference", l.reference},
                              {"deviation", l.deviation},
                              {"bound", l.bound},
                              {"status", l.passed ? "pass" : "fail"},
                              {"message", l.message}});
        j["checks"] = checks;
        j["max_u2_deviation"] = worst_u2;
        j["passed"] = all;
        emit_json(out, j);
    } else {
        out << "check,parameter,cutoff,value,reference,deviation,bound,status,message\n";
        for (const auto& l : lines)
            out << l.check << ',' << l.parameter << ',' << l.cutoff << ',' << num(l.value) << ','
                << num(l.reference) << ',' << num(l.deviation) << ',' << num(l.bound) << ','
                << (l.passed ? "pass" : "fail") << ",\"" << l.message << "\"\n";
        out << "# max_u2_deviation=" << num(worst_u2) << '\n'
            << "# passed=" << (all ? "true" : "false") << '\n';
    }
    return all ? 0 : 1;
}

// ---- measure-demo ----

struct MeasureOptions {
    std::vector<double> amplitudes_re;
    std::vector<double> amplitudes_im;
    std::size_t dim_system = 0;    ///< 0: number of amplitudes
    std::size_t dim_apparatus = 0; ///< 0: number of amplitudes
    bool normalize = false;
    std::size_t trials = 20;
};

inline int cmd_measure_demo(const RunConfig& config, const MeasureOptions& opts, std::ostream& out) {
    if (opts.amplitudes_re.empty())
        throw config_error("measure-demo needs --amplitudes");
    if (!opts.amplitudes_im.empty() && opts.amplitudes_im.size() != opts.amplitudes_re.size())
        throw config_error("--amplitudes-im must match --amplitudes in length");
    const std::size_t k = opts.amplitudes_re.size();
    Eigen::VectorXcd c(static_cast<Eigen::Index>(k));
    for (std::size_t i = 0; i < k; ++i)
        c(static_cast<Eigen::Index>(i)) =
            cplx(opts.amplitudes_re[i], opts.amplitudes_im.empty() ? 0.0 : opts.amplitudes_im[i]);
    if (opts.normalize) {
        if (!(c.norm() > 0.0))
            throw config_error("amplitudes are all zero");
        c /= c.norm();
    }
    const std::size_t dS = opts.dim_system ? opts.dim_system : k;
    const std::size_t dA = opts.dim_apparatus ? opts.dim_apparatus : k;

    Eigen::VectorXcd joint;
    try {
        joint = premeasurement(c, dS, dA);
    } catch (const phonon_chain::error& e) {
        throw config_error(e.what());
    }
    const DensityMatrix apparatus =
        partial_trace(DensityMatrix::from_pure(joint), dS, dA, Factor::second);
    const DensityMatrix expected = apparatus_mixture(c, dA);
    const double af_deviation = apparatus.max_abs_difference(expected);

    // The apparatus state as two different ensembles: its eigen-ensemble and
    // a random unitary remix of it.
    std::mt19937_64 rng(config.seed);
    const Decomposition eigen_ensemble = spectral_decomposition(apparatus);
    const Decomposition remixed =
        unitary_remix(eigen_ensemble, random_unitary(eigen_ensemble.size() + 1, rng));
    const auto indist = decompositions_indistinguishable(eigen_ensemble, remixed, opts.trials, config.seed);

    const bool passed = af_deviation <= algebraic_tol && indist.indistinguishable;
    const double trace = apparatus.elements().trace().real();
    if (config.format == OutputFormat::json) {
        json j = report_header("measure-demo", config);
        j["amplitudes"] = {{"re", opts.amplitudes_re}, {"im", opts.amplitudes_im}};
        j["apparatus_state"] = matrix_to_json(apparatus.elements());
        j["apparatus_trace"] = trace;
        j["mixture_deviation"] = af_deviation;
        j["indistinguishability"] = {{"trials", indist.trials},
                                     {"max_deviation", indist.max_deviation},
                                     {"ensemble_sizes", {eigen_ensemble.size(), remixed.size()}}};
        j["passed"] = passed;
        emit_json(out, j);
    } else {
        out << "row,col,re,im\n";
        const auto& m = apparatus.elements();
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index jx = 0; jx < m.cols(); ++jx)
                out << i << ',' << jx << ',' << num(m(i, jx).real()) << ',' << num(m(i, jx).imag())
                    << '\n';
        out << "# apparatus_trace=" << num(trace) << '\n'
            << "# mixture_deviation=" << num(af_deviation) << '\n'
            << "# indistinguishability_trials=" << indist.trials << '\n'
            << "# indistinguishability_max_deviation=" << num(indist.max_deviation) << '\n'
            << "# passed=" << (passed ? "true" : "false") << '\n';
    }
    return passed ? 0 : 1;
}

// ---- class-check ----

struct ClassCheckOptions {
    std::string rho_path;
    std::string sigma_path;
    std::string observables_path;
    bool counterexample = false;
    ClassTolerances tolerances{};
    std::size_t trials = 200;
};

inline json coordinates_json(const ClassicalCoordinates& c) {
    return {{"means", c.means}, {"spreads", c.spreads}};
}

inline void write_coordinates_csv(std::ostream& out, const std::string& state,
                                  const ClassicalCoordinates& c) {
    for (std::size_t k = 0; k < c.means.size(); ++k)
        out << state << ',' << k << ',' << num(c.means[k]) << ',' << num(c.spreads[k]) << '\n';
}

/// |0>, |1> against |0>, -|1> superposed with c = d = 1/sqrt(2), seen by sigma_x.
inline SuperpositionProbe qubit_counterexample(const ClassTolerances& tol) {
    Eigen::VectorXcd zero(2), one(2);
    zero << 1.0, 0.0;
    one << 0.0, 1.0;
    Eigen::MatrixXcd sigma_x(2, 2);
    sigma_x << 0.0, 1.0, 1.0, 0.0;
    const cplx h(1.0 / std::numbers::sqrt2, 0.0);
    return superposition_class_probe(zero, zero, one, -one, h, h, {sigma_x}, tol);
}

inline int cmd_class_check(const RunConfig& config, const ClassCheckOptions& opts, std::ostream& out) {
    if (opts.counterexample) {
        const SuperpositionProbe probe = qubit_counterexample(opts.tolerances);
        Eigen::VectorXcd zero(2), one(2);
        zero << 1.0, 0.0;
        one << 0.0, 1.0;
        Eigen::MatrixXcd sigma_x(2, 2);
        sigma_x << 0.0, 1.0, 1.0, 0.0;
        const cplx h(1.0 / std::numbers::sqrt2, 0.0);
        const auto search = superposition_phase_search(zero, one, h, h, {sigma_x}, opts.tolerances,
                                                       opts.trials, config.seed);
        const std::string verdict = probe.same_class ? "same class" : "different classes";
        if (config.format == OutputFormat::json) {
            json j = report_header("class-check", config);
            j["mode"] = "superposition-counterexample";
            j["first"] = coordinates_json(probe.first);
            j["second"] = coordinates_json(probe.second);
            j["verdict"] = verdict;
            j["phase_search"] = {{"trials", search.trials},
                                 {"same_class", search.same_class_count},
                                 {"fraction", search.fraction()}};
            emit_json(out, j);
        } else {
            out << "state,observable,mean,spread\n";
            write_coordinates_csv(out, "c|0>+d|1>", probe.first);
            write_coordinates_csv(out, "c|0>-d|1>", probe.second);
            out << "# verdict=" << verdict << '\n'
                << "# phase_search_same_class_fraction=" << num(search.fraction()) << '\n';
        }
        return 0;
    }

    if (opts.rho_path.empty() || opts.sigma_path.empty() || opts.observables_path.empty())
        throw config_error("class-check needs --rho, --sigma and --observables (or --counterexample)");
    const DensityMatrix rho = read_density_matrix(opts.rho_path);
    const DensityMatrix sigma = read_density_matrix(opts.sigma_path);
    const auto observables = read_observables(opts.observables_path);

    ClassicalCoordinates cr, cs;
    bool same = false;
    try {
        cr = classical_coordinates(rho, observables);
        cs = classical_coordinates(sigma, observables);
        same = same_class(rho, sigma, observables, opts.tolerances);
    } catch (const phonon_chain::error& e) {
        throw config_error(e.what());
    }
    const std::string verdict = same ? "same class" : "different classes";
    if (config.format == OutputFormat::json) {
        json j = report_header("class-check", config);
        j["mode"] = "files";
        j["rho"] = coordinates_json(cr);
        j["sigma"] = coordinates_json(cs);
        j["tolerances"] = {{"mean", opts.tolerances.mean}, {"spread", opts.tolerances.spread}};
        j["verdict"] = verdict;
        emit_json(out, j);
    } else {
        out << "state,observable,mean,spread\n";
        write_coordinates_csv(out, "rho", cr);
        write_coordinates_csv(out, "sigma", cs);
        out << "# verdict=" << verdict << '\n';
    }
    return 0;
}

} // namespace phonon_chain::tool
