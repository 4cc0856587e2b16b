// Acceptance suite. One line per criterion:
//
//   acceptance            run all criteria
//   acceptance 4 6        run criteria 4 and 6
//
// Exit status is 0 only when every requested criterion passes.

#include "../test_common.hpp"

#include <phonon_chain/phonon_chain.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

using namespace phonon_chain;
namespace pt = phonon_chain::testing;

namespace {

struct Outcome {
    bool passed = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(const char* format, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, format, args...);
    return buf;
}

Outcome orthogonality() {
    const auto start = Clock::now();
    double worst = 0.0;
    for (std::size_t n : {2, 3, 17, 256, 4096})
        worst = std::max(worst, orthogonality_residual(build_mode_basis(ChainParams{n})));
    const double t = seconds_since(start);
    return {worst < 1e-10 && t < 5.0,
            fmt("max |Y^T Y - I| = %.3g (< 1e-10), %.2f s (< 5 s)", worst, t)};
}

Outcome diagonalization() {
    const auto start = Clock::now();
    std::mt19937_64 rng(1);
    double worst = 0.0;
    for (std::size_t n = 2; n <= 64; ++n) {
        const ChainParams p{n};
        const ModeBasis b = build_mode_basis(p);
        for (int trial = 0; trial < 100; ++trial) {
            const PhaseState s = pt::random_phase_state(p, rng);
            const ModeCoordinates mc = to_modes(p, b, s);
            const double hc = hamiltonian_cartesian(p, s);
            const double hm = hamiltonian_modes(p, b, mc.u, mc.q);
            worst = std::max(worst, std::abs(hc - hm) / std::abs(hc));
        }
    }
    const double t = seconds_since(start);
    return {worst < 1e-10 && t < 5.0,
            fmt("max relative |H_x - H_u| = %.3g over 6300 states (< 1e-10), %.2f s (< 5 s)", worst, t)};
}

Outcome mean_length() {
    bool ok = true;
    std::size_t runs = 0;
    for (std::size_t n : {2, 3, 10, 101, 1000, 65536})
        for (double spacing : {0.3, 1.0, 2.5}) {
            const ChainParams p{n, 1.0, 1.0, spacing, 1.0};
            const ModeBasis b = build_mode_spectrum(p);
            const double expected = static_cast<double>(n - 1) * spacing;
            double first = 0.0;
            for (double lambda : {0.1, 1.0, 10.0}) {
                const double mean = length_variance_exact(p, b, thermo_state(lambda, p, b)).mean;
                if (lambda == 0.1)
                    first = mean;
                ok = ok && mean == expected && mean == first;
                ++runs;
            }
        }
    return {ok, fmt("<L> == (N-1) xi bit-for-bit and lambda-independent in %zu runs", runs)};
}

Outcome oracle_equivalence() {
    const auto start = Clock::now();
    double worst = 0.0;
    bool grid_ok = true;
    const double omega = 1.0;
    for (double y : {0.1, 0.3, 1.0, 3.0, 10.0})
        for (std::size_t cutoff : {400, 800, 1600}) {
            try {
                const TruncatedMode mode = build_truncated_mode(y / omega, omega, 1.0, 1.0, cutoff);
                const double dev = std::abs(oracle_u2(mode) - mode_u2_mean(y / omega, omega, 1.0, 1.0));
                worst = std::max(worst, dev);
                grid_ok = grid_ok && dev < 1e-10;
            } catch (const error&) {
                grid_ok = false;
            }
        }

    const double y = std::numbers::ln2;
    const double n_exact = mean_occupation(y, omega, 1.0);
    int inside = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        const auto s = mc_sample_occupations(y, omega, 1.0, 1.0, 1'000'000, seed);
        if (std::abs(s.mean_occupation - n_exact) <= 3.0 * s.occupation_stderr)
            ++inside;
    }
    const double t = seconds_since(start);
    return {grid_ok && inside >= 99 && t < 60.0,
            fmt("5x3 grid max |Tr(rho u^2) - coth form| = %.3g (< 1e-10); "
                "MC 1e6 samples within 3 SE in %d/100 seeds (>= 99); %.1f s (< 60 s)",
                worst, inside, t)};
}

Outcome two_particle() {
    double worst = 0.0;
    for (double lambda : {0.1, 1.0, 10.0})
        for (double mass : {0.5, 1.0, 3.0})
            for (double coupling : {0.7, 1.0, 2.0}) {
                const ChainParams p{2, mass, coupling, 1.0, 1.0};
                const ModeBasis b = build_mode_spectrum(p);
                const double exact = length_variance_exact(p, b, thermo_state(lambda, p, b)).variance;
                const double w1 = std::sqrt(2.0) * coupling / std::sqrt(mass);
                const double closed = p.hbar / (mass * w1) / std::tanh(lambda * p.hbar * w1 / 2.0);
                const double reduced = pt::reduced_mass_length_variance(p, lambda);
                worst = std::max({worst, std::abs(exact - closed) / closed,
                                  std::abs(exact - reduced) / reduced});
            }
    return {worst < 1e-12, fmt("max relative deviation from (hbar / mu w1) coth = %.3g (< 1e-12)", worst)};
}

Outcome scaling_law() {
    const auto start = Clock::now();
    std::vector<std::size_t> ns;
    for (int k = 6; k <= 16; ++k)
        ns.push_back(std::size_t{1} << k);
    const ScalingSweep sweep = scaling_sweep(ChainParams{2, 1.0, 1.0, 1.0, 1.0}, 1.0, ns);
    const double t = seconds_since(start);
    const double slope = sweep.slope.value_or(0.0);
    const bool slope_ok = std::abs(slope + 0.5) <= 0.02;
    const bool ratio_ok = sweep.rel_std_ratio >= 0.95 && sweep.rel_std_ratio <= 1.05;
    return {slope_ok && ratio_ok && t < 120.0,
            fmt("slope = %.5f (-0.5 +/- 0.02: %s); rel-std ratio at N=65536 = %.5f "
                "([0.95, 1.05]: %s); %.2f s (< 120 s)",
                slope, slope_ok ? "ok" : "out", sweep.rel_std_ratio, ratio_ok ? "ok" : "out", t)};
}

Outcome variance_prefactor() {
    bool ok = true;
    std::string detail = "exact / (12 N / pi^2 lambda kappa^2) at N=65536:";
    const ChainParams p{65536, 1.0, 1.0, 1.0, 1.0};
    const ModeBasis b = build_mode_spectrum(p);
    for (double lambda : {0.5, 1.0, 2.0}) {
        const ThermoState t = thermo_state(lambda, p, b);
        const double ratio = length_variance_exact(p, b, t).variance / length_variance_asymptotic(p, t);
        ok = ok && ratio >= 0.9 && ratio <= 1.1;
        detail += fmt(" lambda=%g -> %.5f", lambda, ratio);
    }
    detail += " (each in [0.9, 1.1])";
    return {ok, detail};
}

Outcome apparatus_mixture_check() {
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t dS = dim(rng), dA = dim(rng);
        std::uniform_int_distribution<std::size_t> count(1, std::min(dS, dA));
        const Eigen::VectorXcd c = random_state(count(rng), rng);
        const DensityMatrix joint = DensityMatrix::from_pure(premeasurement(c, dS, dA));
        const DensityMatrix reduced = partial_trace(joint, dS, dA, Factor::second);
        Eigen::MatrixXcd expected = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dA),
                                                           static_cast<Eigen::Index>(dA));
        for (Eigen::Index k = 0; k < c.size(); ++k)
            expected(k, k) = std::norm(c(k));
        worst = std::max(worst, pt::max_abs(reduced.elements() - expected));
    }
    return {worst <= 1e-12,
            fmt("50 amplitude vectors, dims 1..8: max |Tr_S - sum |c_k|^2 |A_k><A_k|| = %.3g (<= 1e-12)", worst)};
}

Outcome indistinguishability() {
    std::mt19937_64 rng(9);
    std::uniform_int_distribution<std::size_t> dim(2, 6), count(1, 6);
    double worst = 0.0;
    for (int pair = 0; pair < 100; ++pair) {
        const std::size_t d = dim(rng);
        const Decomposition mixed = random_decomposition(d, count(rng), rng);
        const Decomposition other = pair % 2 == 0
                                        ? spectral_decomposition(proper_mixture(mixed))
                                        : unitary_remix(mixed, random_unitary(mixed.size() + 2, rng));
        const auto r = decompositions_indistinguishable(mixed, other, 20, static_cast<std::uint64_t>(pair));
        worst = std::max(worst, r.max_deviation);
    }
    return {worst < 1e-10, fmt("100 pairs x 20 effect sets: max |p1 - p2| = %.3g (< 1e-10)", worst)};
}

Outcome classical_state() {
    bool zero_spread = true;
    const std::vector<Eigen::MatrixXcd> sz{pt::pauli_z()};
    for (std::size_t k : {0, 1})
        zero_spread = zero_spread &&
                      classical_coordinates(DensityMatrix::from_pure(pt::basis_vector(2, k)), sz).spreads[0] == 0.0;
    Eigen::MatrixXcd plus(2, 2);
    plus << 0.5, 0.5, 0.5, 0.5;
    zero_spread = zero_spread && classical_coordinates(DensityMatrix(plus), {pt::pauli_x()}).spreads[0] == 0.0;
    Eigen::MatrixXcd level4;
    pt::one_class_many_states(level4);
    for (std::size_t k = 0; k < 4; ++k)
        zero_spread = zero_spread &&
                      classical_coordinates(DensityMatrix::from_pure(pt::basis_vector(4, k)), {level4}).spreads[0] == 0.0;

    const double h = 1.0 / std::sqrt(2.0);
    const auto probe = superposition_class_probe(pt::basis_vector(2, 0), pt::basis_vector(2, 0),
                                                 pt::basis_vector(2, 1), -pt::basis_vector(2, 1),
                                                 cplx(h), cplx(h), {pt::pauli_x()});

    Eigen::MatrixXcd a;
    const auto states = pt::one_class_many_states(a);
    const auto c = classical_coordinates(states.front(), {a});
    const ClassicalStateSpec spec{{a}, c.means, c.spreads, {}};
    std::vector<const DensityMatrix*> members;
    for (const auto& s : states) {
        if (!in_class(s, spec))
            continue;
        bool distinct = true;
        for (const auto* m : members)
            distinct = distinct && s.max_abs_difference(*m) > 1e-6;
        if (distinct)
            members.push_back(&s);
    }
    const bool ok = zero_spread && !probe.same_class && members.size() >= 2;
    return {ok, fmt("eigenstate spreads exactly 0: %s; counterexample: %s (means %+.3f vs %+.3f); "
                    "distinct states in one class: %zu (>= 2)",
                    zero_spread ? "yes" : "no", probe.same_class ? "same class" : "different classes",
                    probe.first.means[0], probe.second.means[0], members.size())};
}

Outcome lambda_inversion() {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> log_energy(std::log(1e-2), std::log(1e2));
    double worst = 0.0;
    for (std::size_t n : {2, 100, 10000}) {
        const ChainParams p{n};
        const ModeBasis b = build_mode_spectrum(p);
        for (int trial = 0; trial < 20; ++trial) {
            const double target = static_cast<double>(n - 1) * std::exp(log_energy(rng));
            const ThermoState t = solve_lambda(target, p, b);
            const double back = internal_energy(t.lambda, p, b);
            worst = std::max(worst, std::abs(back - target) / target);
        }
    }
    return {worst < 1e-10, fmt("60 targets: max relative |E(lambda(E)) - E| = %.3g (< 1e-10)", worst)};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv) {
    const std::vector<Criterion> criteria{
        {1, "orthogonality", orthogonality},
        {2, "diagonalization", diagonalization},
        {3, "mean length", mean_length},
        {4, "oracle equivalence", oracle_equivalence},
        {5, "two-particle variance", two_particle},
        {6, "scaling law", scaling_law},
        {7, "variance prefactor", variance_prefactor},
        {8, "apparatus mixture", apparatus_mixture_check},
        {9, "indistinguishability", indistinguishability},
        {10, "classical state", classical_state},
        {11, "lambda inversion", lambda_inversion},
    };

    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i)
        wanted.push_back(std::atoi(argv[i]));

    bool all = true;
    for (const auto& c : criteria) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end())
            continue;
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.passed;
        std::printf("criterion %2d %-22s %s  %s\n", c.id, c.name, o.passed ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return all ? 0 : 1;
}
