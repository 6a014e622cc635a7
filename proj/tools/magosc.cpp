// Command-line surface for constructing and verifying the integral tower of a
// charged particle in a constant magnetic field with a unidirectional
// harmonic potential, plus trajectory generation and plot export.
//
// Exit codes: 0 all good, 1 a mathematical identity or drift budget failed,
// 2 bad input, 3 I/O failure.

#include <magosc/json_io.hpp>
#include <magosc/svg.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace magosc;

namespace {

constexpr int kExitIdentity = 1;
constexpr int kExitBadInput = 2;
constexpr int kExitIo = 3;

struct GlobalOpts {
    std::string omega1 = "1";
    std::string omega2 = "1";
    int m = 1;
    int n = 1;
    bool json = false;
    unsigned long long seed = 12345;
    std::string output;
};

SystemParams params_from(const GlobalOpts& g) {
    return derive_params(parse_rational(g.omega1), parse_rational(g.omega2), g.m, g.n);
}

std::ostream& open_output(const GlobalOpts& g, std::ofstream& file) {
    if (g.output.empty()) return std::cout;
    file.open(g.output);
    if (!file) throw std::ios_base::failure("cannot open output file: " + g.output);
    return file;
}

std::array<Rational, 6> random_rational_point(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 3);
    std::array<Rational, 6> pt;
    for (auto& c : pt) c = Rational(num(rng), den(rng));
    return pt;
}

StateD parse_state(const std::string& s) {
    StateD out{};
    std::stringstream ss(s);
    std::string item;
    int i = 0;
    while (std::getline(ss, item, ',')) {
        if (i >= 6) throw std::invalid_argument("initial state: expected 6 components");
        out[i++] = to_double(parse_rational(item));
    }
    if (i != 6) throw std::invalid_argument("initial state: expected 6 components");
    return out;
}

int cmd_params(const GlobalOpts& g) {
    const SystemParams p = params_from(g);
    std::ofstream file;
    std::ostream& os = open_output(g, file);
    if (g.json) {
        json j = params_to_json(p);
        j["omega1_S_plus_omega2"] = format_rational(p.omega1 * p.S + p.omega2);
        os << j.dump(2) << '\n';
        return 0;
    }
    os << "S          = " << format_rational(p.S) << '\n'
       << "kappa      = " << format_rational(p.kappa) << '\n'
       << "omega^2    = " << format_rational(p.rho) << '\n'
       << "omega1^2   = " << format_rational(Rational(p.m * p.m) * p.rho) << '\n'
       << "omega2^2   = " << format_rational(Rational(p.n * p.n) * p.rho) << '\n'
       << "O1*S + O2  = " << format_rational(p.omega1 * p.S + p.omega2) << '\n'
       << "period T   = " << p.period << '\n';
    return 0;
}

int cmd_integrals(const GlobalOpts& g) {
    const IntegralSet set = build_integral_set(params_from(g));
    std::ofstream file;
    std::ostream& os = open_output(g, file);
    os << integral_set_to_json(set).dump(2) << '\n';
    return 0;
}

int cmd_reduce(const GlobalOpts& g) {
    const IntegralSet set = build_integral_set(params_from(g));
    std::ofstream file;
    std::ostream& os = open_output(g, file);
    json j = reduction_report_to_json(set.reduction);
    // observed monomial support of the top momentum block; reported, never
    // predicted
    json support = json::array();
    const PhasePoly top = set.X4_reduced.momentum_leading();
    for (const auto& [mono, c] : top.terms())
        support.push_back(std::vector<int>(mono.e.begin(), mono.e.end()));
    j["top_block_monomials"] = std::move(support);
    os << j.dump(2) << '\n';
    return 0;
}

int cmd_verify(const GlobalOpts& g) {
    const SystemParams p = params_from(g);
    const IntegralSet set = build_integral_set(p);
    bool all_ok = true;
    auto report = [&](const std::string& name, bool ok, const PhasePoly* offending = nullptr) {
        std::cout << (ok ? "ok   " : "FAIL ") << name << '\n';
        if (!ok) {
            all_ok = false;
            if (offending) std::cout << "     residual: " << poly_to_json(*offending).dump() << '\n';
        }
    };
    auto check_zero = [&](const std::string& name, const PhasePoly& q) {
        report(name, q.is_zero(), &q);
    };

    for (const auto& [name, poly] : set.named())
        if (name != "H") check_zero("{H, " + name + "} == 0", poisson_bracket(set.H, *poly));

    const Rational half(1, 2);
    check_zero("H == (X0^2 + X1 + X2)/2",
               set.H - constant(half, p) * (set.X0 * set.X0 + set.X1 + set.X2));
    check_zero("X0 == p3", set.X0 - coordinate(Var::p3, p));

    const OscillatorInvariants inv = build_oscillator_invariants(p);
    check_zero("I3^2 + I4^2 == I1^n I2^m",
               inv.I3 * inv.I3 + inv.I4 * inv.I4 - inv.I1.pow(p.n) * inv.I2.pow(p.m));
    const PhasePoly h2 = two_dof_hamiltonian(p);
    check_zero("{H2, I3} == 0", poisson_bracket(h2, inv.I3));
    check_zero("{H2, I4} == 0", poisson_bracket(h2, inv.I4));

    const auto [i3s, i4s] = oscillator_i34_series(p);
    check_zero("I3 series route matches", inv.I3 - i3s);
    check_zero("I4 series route matches", inv.I4 - i4s);

    report("X4_raw momentum degree (observed " +
               std::to_string(set.reduction.raw_momentum_degree) + ")",
           true);
    report("X4_reduced momentum degree == m+n-1",
           set.X4_reduced.momentum_degree() == p.m + p.n - 1);
    report("X5 momentum degree == m+n", set.X5.momentum_degree() == p.m + p.n);
    try {
        FirstIntegrals fi{set.X0, set.X1, set.X2, set.X3};
        attempt_reduce_x5(set.X5, fi, p);
        report("X5 leading part irreducible", true);
    } catch (const invariant_violation_error&) {
        report("X5 leading part irreducible", false);
    }

    std::mt19937_64 rng(g.seed);
    const auto pt = random_rational_point(rng);
    const int rank5 =
        independence_rank({&set.X0, &set.X1, &set.X2, &set.X3, &set.X4_reduced}, pt);
    report("rank(X0,X1,X2,X3,X4_reduced) == 5 at seeded point", rank5 == 5);
    const int rank_h = independence_rank({&set.X0, &set.X1, &set.X2, &set.H}, pt);
    report("rank(X0,X1,X2,H) == 3 (H is dependent)", rank_h == 3);

    return all_ok ? 0 : kExitIdentity;
}

int cmd_independence(const GlobalOpts& g) {
    const IntegralSet set = build_integral_set(params_from(g));
    std::mt19937_64 rng(g.seed);
    const auto pt = random_rational_point(rng);
    const int rank5 =
        independence_rank({&set.X0, &set.X1, &set.X2, &set.X3, &set.X4_reduced}, pt);
    const int rank5_x5 = independence_rank({&set.X0, &set.X1, &set.X2, &set.X3, &set.X5}, pt);
    const int rank_h_swap =
        independence_rank({&set.X0, &set.X1, &set.X2, &set.X3, &set.H}, pt);
    const int rank_h = independence_rank({&set.X0, &set.X1, &set.X2, &set.H}, pt);
    if (g.json) {
        json j{{"point", json::array()},
               {"rank_five", rank5},
               {"rank_five_with_X5", rank5_x5},
               {"rank_H_for_X4", rank_h_swap},
               {"rank_X0_X1_X2_H", rank_h}};
        for (const auto& c : pt) j["point"].push_back(format_rational(c));
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << "rank(X0,X1,X2,X3,X4_reduced) = " << rank5 << '\n'
                  << "rank(X0,X1,X2,X3,X5)         = " << rank5_x5 << '\n'
                  << "rank(X0,X1,X2,X3,H)          = " << rank_h_swap << '\n'
                  << "rank(X0,X1,X2,H)             = " << rank_h << '\n';
    }
    return rank5 == 5 ? 0 : kExitIdentity;
}

struct SimOpts {
    std::string initial = "1,0,0,0,1,1/2";
    double t_end = -1.0;  // default: one common period
    double dt = -1.0;     // default: T/2000
    std::string method = "closed_form";
    std::string drift_output;
    std::string plot_output;
    double enforce_drift = -1.0;
};

int run_simulation(const GlobalOpts& g, const SimOpts& so, bool write_csv) {
    const SystemParams p = params_from(g);
    const IntegralSet set = build_integral_set(p);
    TrajectorySpec spec;
    spec.initial = parse_state(so.initial);
    spec.t_end = so.t_end >= 0 ? so.t_end : p.period;
    spec.dt = so.dt > 0 ? so.dt : p.period / 2000.0;
    if (so.method == "closed_form")
        spec.method = Method::closed_form;
    else if (so.method == "rk4")
        spec.method = Method::rk4;
    else
        throw CLI::ValidationError("--method", "must be closed_form or rk4");

    const auto samples = generate_trajectory(p, set.H, spec);
    const DriftReport drift = conservation_drift(p, set, spec);

    if (write_csv) {
        std::ofstream file;
        std::ostream& os = open_output(g, file);
        write_trajectory_csv(os, samples);
    }
    if (!so.drift_output.empty() || !write_csv) {
        if (so.drift_output.empty()) {
            std::cout << drift_report_to_json(drift).dump(2) << '\n';
        } else {
            std::ofstream df(so.drift_output);
            if (!df) throw std::ios_base::failure("cannot open " + so.drift_output);
            df << drift_report_to_json(drift).dump(2) << '\n';
        }
    }
    if (!so.plot_output.empty()) {
        std::ofstream pf(so.plot_output);
        if (!pf) throw std::ios_base::failure("cannot open " + so.plot_output);
        write_trajectory_svg(pf, samples);
    }
    if (so.enforce_drift > 0 && drift.max_rel_drift() > so.enforce_drift) {
        std::cerr << "drift budget violated: " << drift.max_rel_drift() << " > "
                  << so.enforce_drift << '\n';
        return kExitIdentity;
    }
    return 0;
}

int cmd_plot(const GlobalOpts& g, const SimOpts& so) {
    const SystemParams p = params_from(g);
    TrajectorySpec spec;
    spec.initial = parse_state(so.initial);
    spec.t_end = so.t_end >= 0 ? so.t_end : p.period;
    spec.dt = so.dt > 0 ? so.dt : p.period / 2000.0;
    const auto samples = generate_trajectory(p, build_system(p).H, spec);
    std::ofstream file;
    std::ostream& os = open_output(g, file);
    write_trajectory_svg(os, samples);
    return 0;
}

void add_sim_options(CLI::App* cmd, SimOpts& so) {
    cmd->add_option("--initial", so.initial, "initial state x,y,z,p1,p2,p3 (rationals)");
    cmd->add_option("--t-end", so.t_end, "simulation time (default: one common period)");
    cmd->add_option("--dt", so.dt, "sample / integration step (default: T/2000)");
    cmd->add_option("--method", so.method, "closed_form or rk4");
    cmd->add_option("--drift-output", so.drift_output, "write drift report JSON here");
    cmd->add_option("--plot", so.plot_output, "also write an SVG projection here");
    cmd->add_option("--enforce-drift", so.enforce_drift,
                    "exit 1 when max relative drift exceeds this budget");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"integrals of motion for a charged particle in a constant magnetic "
                 "field with a unidirectional harmonic potential"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--omega1", g.omega1, "Omega_1 > 0, as num/den or integer")->capture_default_str();
    app.add_option("--omega2", g.omega2, "Omega_2 > 0, as num/den or integer")->capture_default_str();
    app.add_option("-m", g.m, "frequency ratio numerator")->capture_default_str();
    app.add_option("-n", g.n, "frequency ratio denominator")->capture_default_str();
    app.add_flag("--json", g.json, "machine readable output");
    app.add_option("--seed", g.seed, "random seed for point sampling")->capture_default_str();
    app.add_option("--output", g.output, "output file (default stdout)");
    app.fallthrough();

    auto* c_params = app.add_subcommand("params", "derived constants of the system");
    auto* c_integrals = app.add_subcommand("integrals", "emit the full integral set as JSON");
    auto* c_verify = app.add_subcommand("verify", "run the exact identity suite");
    auto* c_reduce = app.add_subcommand("reduce", "order reduction report for X4");
    auto* c_indep = app.add_subcommand("independence", "exact Jacobian ranks at a seeded point");
    auto* c_sim = app.add_subcommand("simulate", "trajectory CSV plus drift report");
    auto* c_drift = app.add_subcommand("drift", "conservation drift report only");
    auto* c_plot = app.add_subcommand("plot", "SVG projection of a trajectory");

    SimOpts so_sim, so_drift, so_plot;
    add_sim_options(c_sim, so_sim);
    add_sim_options(c_drift, so_drift);
    c_plot->add_option("--initial", so_plot.initial, "initial state x,y,z,p1,p2,p3");
    c_plot->add_option("--t-end", so_plot.t_end, "simulation time");
    c_plot->add_option("--dt", so_plot.dt, "sample step");

    try {
        app.parse(argc, argv);
        if (c_params->parsed()) return cmd_params(g);
        if (c_integrals->parsed()) return cmd_integrals(g);
        if (c_verify->parsed()) return cmd_verify(g);
        if (c_reduce->parsed()) return cmd_reduce(g);
        if (c_indep->parsed()) return cmd_independence(g);
        if (c_sim->parsed()) return run_simulation(g, so_sim, true);
        if (c_drift->parsed()) return run_simulation(g, so_drift, false);
        if (c_plot->parsed()) return cmd_plot(g, so_plot);
        return kExitBadInput;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << '\n';
        return kExitBadInput;
    } catch (const std::ios_base::failure& e) {
        std::cerr << "I/O error: " << e.what() << '\n';
        return kExitIo;
    } catch (const invariant_violation_error& e) {
        std::cerr << "identity violation: " << e.what() << '\n';
        return kExitIdentity;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitBadInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitIdentity;
    }
}
