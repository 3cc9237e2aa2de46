#include "dampwave/cli.hpp"

#include "dampwave/error.hpp"
#include "dampwave/harness.hpp"
#include "dampwave/linalg.hpp"
#include "dampwave/problems.hpp"
#include "dampwave/schemes.hpp"
#include "dampwave/stability.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

namespace dampwave::cli {

namespace {

using harness::format_number;

struct UsageError : Error {
    using Error::Error;
};

struct Common {
    std::string problem = "sample";
    std::optional<int> N;
    std::optional<double> h;
    std::optional<double> k;
    std::optional<double> r;
    std::optional<double> t_final;
    std::string out;
    std::string start_up = "taylor2";
};

void add_problem(CLI::App* app, Common& c) {
    app->add_option("--problem", c.problem, "builtin problem name or path to a JSON problem file")
        ->capture_default_str();
}

void add_mesh(CLI::App* app, Common& c) {
    auto* n = app->add_option("--N", c.N, "number of subintervals");
    auto* h = app->add_option("--h", c.h, "mesh width (rounded to the nearest whole number of subintervals)");
    n->excludes(h);
    h->excludes(n);
}

void add_step(CLI::App* app, Common& c) {
    auto* k = app->add_option("--k", c.k, "time step");
    auto* r = app->add_option("--r", c.r, "ratio r = k/h; sets k = r h");
    k->excludes(r);
    r->excludes(k);
}

void add_start_up(CLI::App* app, Common& c) {
    app->add_option("--start-up", c.start_up, "start-up for oefd/oifd")
        ->check(CLI::IsMember({"taylor2", "ghost"}))
        ->capture_default_str();
}

DampedWaveProblem resolve_problem(const std::string& source) {
    const auto names = builtin_names();
    if (std::find(names.begin(), names.end(), source) != names.end()) return builtin_problem(source);
    if (!std::filesystem::exists(source)) {
        throw UsageError("--problem: '" + source + "' is neither a builtin problem nor an existing file");
    }
    return load_problem_file(source);
}

StartUp resolve_start_up(const std::string& s) { return s == "ghost" ? StartUp::ghost : StartUp::taylor2; }

SpatialGrid resolve_grid(const Common& c, const DampedWaveProblem& p, std::ostream& err) {
    if (!c.N && !c.h) throw UsageError("one of --N or --h is required");
    if (c.N) return build_grid(p.a, p.b, *c.N);
    if (!(*c.h > 0.0)) throw UsageError("--h must be positive");
    const int N = static_cast<int>(std::lround((p.b - p.a) / *c.h));
    const SpatialGrid g = build_grid(p.a, p.b, std::max(N, 2));
    if (std::abs(g.h() - *c.h) > 1e-9 * *c.h) {
        err << "note: --h " << *c.h << " does not divide the domain; using N = " << g.N() << ", h = "
            << format_number(g.h()) << "\n";
    }
    return g;
}

double resolve_k(const Common& c, const SpatialGrid& g) {
    if (!c.k && !c.r) throw UsageError("one of --k or --r is required");
    const double k = c.k ? *c.k : *c.r * g.h();
    if (!(k > 0.0)) throw UsageError("time step must be positive");
    return k;
}

double require_t_final(const Common& c) {
    if (!c.t_final) throw UsageError("--t-final is required");
    if (!(*c.t_final > 0.0)) throw UsageError("--t-final must be positive");
    return *c.t_final;
}

SchemeConfig resolve_scheme(const std::string& name, const std::string& pade, double k, StartUp start_up) {
    SchemeConfig cfg;
    if (name == "fdST") {
        int S = -1, T = -1;
        char comma = 0;
        std::istringstream in(pade);
        if (pade.empty() || !(in >> S >> comma >> T) || comma != ',' || !in.eof()) {
            throw UsageError("--scheme fdST needs --pade S,T");
        }
        cfg = SchemeConfig::semigroup(S, T, k);
        pade_coefficients(S, T);  // validates the order range
    } else {
        try {
            cfg = parse_scheme(name, k);
        } catch (const InvalidArgument& e) {
            throw UsageError(std::string("--scheme: ") + e.what());
        }
    }
    cfg.start_up = start_up;
    return cfg;
}

std::string param(double v) {
    std::ostringstream s;
    s << v;
    return s.str();
}

std::string output_path(const std::string& requested, const std::string& command, const std::string& scheme,
                        const std::string& params) {
    if (!requested.empty()) return requested;
    return command + "_" + scheme + "_" + params + ".csv";
}

// ------------------------------------------------------------ subcommands

int cmd_solve(const Common& c, const std::string& scheme_name, const std::string& pade, std::ostream& out,
              std::ostream& err) {
    const DampedWaveProblem problem = resolve_problem(c.problem);
    for (const auto& w : compatibility_warnings(problem)) err << "warning: " << w << "\n";
    const SpatialGrid grid = resolve_grid(c, problem, err);
    const double k = resolve_k(c, grid);
    const double t_final = require_t_final(c);
    const SchemeConfig cfg = resolve_scheme(scheme_name, pade, k, resolve_start_up(c.start_up));

    const Trajectory traj = solve_evolution(problem, grid, cfg, t_final, SnapshotPolicy::final_only());
    const StateVector& fin = traj.final_state();

    harness::Table table;
    if (problem.has_exact()) {
        const auto profile = harness::error_profile(traj, problem, fin.t);
        table.header = {"x", "numeric", "exact", "abs_error"};
        for (const auto& row : profile.rows) table.rows.push_back({row.x, row.numeric, row.exact, row.error});
        out << cfg.label() << " N=" << grid.N() << " k=" << format_number(k) << " t=" << format_number(fin.t)
            << " max_error=" << format_number(profile.max_error) << "\n";
    } else {
        table = harness::solution_table(traj, problem, fin.t);
        out << cfg.label() << " N=" << grid.N() << " k=" << format_number(k) << " t=" << format_number(fin.t)
            << " (no exact solution)\n";
    }
    const std::string path = output_path(c.out, "solve", cfg.name(),
                                         "N" + std::to_string(grid.N()) + "_k" + param(k) + "_t" + param(t_final));
    harness::write_csv(table, path);
    out << "wrote " << path << "\n";
    if (traj.blow_up) {
        err << "run diverged: non-finite values at step " << *traj.blow_up_step << "\n";
        return kDiverged;
    }
    return kOk;
}

int cmd_compare(const Common& c, const std::vector<std::string>& schemes, std::ostream& out, std::ostream& err) {
    const DampedWaveProblem problem = resolve_problem(c.problem);
    if (!problem.has_exact()) throw UsageError("compare needs a problem with an exact solution");
    const SpatialGrid grid = resolve_grid(c, problem, err);
    const double k = resolve_k(c, grid);
    const double t_final = require_t_final(c);
    std::vector<SchemeConfig> configs;
    for (const auto& s : schemes) configs.push_back(resolve_scheme(s, "", k, resolve_start_up(c.start_up)));

    std::vector<Trajectory> runs;
    for (const auto& cfg : configs) {
        runs.push_back(solve_evolution(problem, grid, cfg, t_final, SnapshotPolicy::final_only()));
    }
    for (const auto& run : runs) {
        const auto p = harness::error_profile(run, problem, run.final_state().t);
        const bool diverged = run.blow_up || !(p.max_error <= harness::kDivergenceThreshold);
        out << run.config.label() << " max_error=" << format_number(p.max_error) << (diverged ? " (diverged)" : "")
            << "\n";
    }
    const std::string path = output_path(c.out, "compare", "all",
                                         "N" + std::to_string(grid.N()) + "_k" + param(k) + "_t" + param(t_final));
    harness::write_csv(harness::profile_comparison(runs, problem, t_final), path);
    out << "wrote " << path << "\n";
    return kOk;
}

int cmd_stability(const Common& c, std::optional<double> gamma_max, bool power_check, std::uint64_t seed,
                  std::ostream& out, std::ostream& err) {
    std::optional<SpatialGrid> grid;
    double gamma_star = 0.0;
    double h = 0.0;
    if (gamma_max) {
        gamma_star = *gamma_max;
        if (c.h) h = *c.h;
    }
    if (!gamma_max || c.N) {
        const DampedWaveProblem problem = resolve_problem(c.problem);
        if (!c.N && !c.h) throw UsageError("one of --N or --h is required");
        grid = resolve_grid(c, problem, err);
        h = grid->h();
        if (!gamma_max) {
            for (double x : grid->interior_nodes()) gamma_star = std::max(gamma_star, problem.gamma(x));
        }
    }
    if (!(h > 0.0)) throw UsageError("one of --N or --h is required");
    if (!c.k && !c.r) throw UsageError("one of --k or --r is required");
    const double k = c.k ? *c.k : *c.r * h;

    const auto verdict = stability::check_explicit_stability(k, h, gamma_star);
    harness::Table table;
    table.header = {"condition", "value", "bound", "margin", "satisfied"};
    out << "explicit FD-(0,1): " << (verdict.stable ? "stable" : "unstable") << " (gamma* = "
        << format_number(gamma_star) << ", k = " << format_number(k) << ", h = " << format_number(h) << ")\n";
    for (const auto& cond : verdict.conditions) {
        out << "  " << cond.name << ": " << format_number(cond.value) << " vs " << format_number(cond.bound)
            << " margin " << format_number(cond.margin()) << (cond.satisfied ? " ok" : " violated") << "\n";
        table.rows.push_back(
            {cond.name, cond.value, cond.bound, cond.margin(), std::string(cond.satisfied ? "yes" : "no")});
    }
    if (grid) {
        const auto modes = stability::explicit_mode_checks(grid->N(), k, h, gamma_star);
        const auto passing = std::count(modes.begin(), modes.end(), true);
        out << "  per-mode Jury test: " << passing << "/" << modes.size() << " modes inside the unit disk\n";
        const auto amp = stability::implicit_amplification(grid->N(), h, k, gamma_star);
        out << "implicit FD-(1,1): max |mu| = " << format_number(amp.max_modulus) << "\n";
        table.rows.push_back({std::string("implicit max |mu|"), amp.max_modulus, 1.0, 1.0 - amp.max_modulus,
                              std::string(amp.max_modulus <= 1.0 + 1e-12 ? "yes" : "no")});
        if (power_check) {
            DampedWaveProblem homogeneous = resolve_problem(c.problem);
            homogeneous.g = [](double, double) { return 0.0; };
            homogeneous.u_a = [](double) { return 0.0; };
            homogeneous.u_b = [](double) { return 0.0; };
            const Stepper st = make_stepper(SchemeConfig::fd11(k), assemble_system(*grid, homogeneous), *grid,
                                            homogeneous);
            const auto est = linalg::spectral_radius(
                [&](std::span<const double> in, std::span<double> o) {
                    const auto next = step_semigroup(st, StateVector{0.0, {in.begin(), in.end()}});
                    std::copy(next.values.begin(), next.values.end(), o.begin());
                },
                st.op().state_size(), seed);
            out << "implicit FD-(1,1): power-iteration spectral radius = " << format_number(est.value)
                << (est.converged ? "" : " (not converged)") << " after " << est.iterations << " iterations\n";
        }
    }
    if (!c.out.empty()) {
        harness::write_csv(table, c.out);
        out << "wrote " << c.out << "\n";
    }
    return kOk;
}

int cmd_convergence(const Common& c, const std::string& scheme_name, const std::string& pade,
                    const std::string& axis, int levels, const std::string& reference, std::ostream& out,
                    std::ostream& err) {
    const DampedWaveProblem problem = resolve_problem(c.problem);
    const SpatialGrid grid = resolve_grid(c, problem, err);
    const double k = resolve_k(c, grid);
    const double t_final = require_t_final(c);
    const SchemeConfig cfg = resolve_scheme(scheme_name, pade, k, resolve_start_up(c.start_up));
    const auto ax = axis == "space" ? harness::Axis::space : harness::Axis::time;
    const auto ref = reference == "semi" ? harness::Reference::semi_discrete : harness::Reference::exact;
    const auto report = harness::observed_order(problem, cfg, ax, k, grid.N(), levels, t_final, ref);
    for (std::size_t j = 0; j < report.errors.size(); ++j) {
        out << (ax == harness::Axis::time ? "k=" : "h=") << format_number(report.levels[j])
            << " error=" << format_number(report.errors[j]);
        if (j > 0) out << " order=" << format_number(report.orders[j - 1]);
        out << "\n";
    }
    const std::string path =
        output_path(c.out, "convergence", cfg.name(),
                    axis + "_N" + std::to_string(grid.N()) + "_k" + param(k) + "_t" + param(t_final));
    harness::write_csv(harness::to_table(report), path);
    out << "wrote " << path << "\n";
    return kOk;
}

int cmd_table1(const Common& c, std::ostream& out) {
    harness::Table1Options opt;
    if (c.t_final) opt.t = *c.t_final;
    if (c.N) opt.N = *c.N;
    if (c.k) opt.k = *c.k;
    opt.start_up = resolve_start_up(c.start_up);
    const auto rows = harness::reproduce_table1(opt);
    const auto table = harness::to_table(rows);
    const std::string path =
        output_path(c.out, "table1", "all", "N" + std::to_string(opt.N) + "_k" + param(opt.k) + "_t" + param(opt.t));
    harness::write_csv(table, path);
    out << harness::format_csv(table) << "wrote " << path << "\n";
    return kOk;
}

int cmd_table2(const Common& c, std::ostream& out) {
    const double h = c.h ? *c.h : std::numbers::pi / 50.0;
    const double t = c.t_final ? *c.t_final : 6.0;
    const auto rows = harness::reproduce_table2(h, t, harness::kTable2Ratios, resolve_start_up(c.start_up));
    const auto table = harness::to_table(rows);
    const std::string path = output_path(c.out, "table2", "all", "h" + param(h) + "_t" + param(t));
    harness::write_csv(table, path);
    out << harness::format_csv(table) << "wrote " << path << "\n";
    return kOk;
}

int cmd_figures(const std::string& dir, std::ostream& out) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    const DampedWaveProblem problem = sample_problem();
    auto emit = [&](const harness::Table& t, const std::string& name) {
        const std::string path = (fs::path(dir) / name).string();
        harness::write_csv(t, path);
        out << "wrote " << path << "\n";
    };

    // solution profiles at t = 1 with k = 0.05 on N = 23 (h ~ 0.1366)
    const SpatialGrid g23 = build_grid(problem.a, problem.b, 23);
    for (const auto& cfg : {SchemeConfig::fd01(0.05), SchemeConfig::fd11(0.05)}) {
        const auto traj = solve_evolution(problem, g23, cfg, 1.0, SnapshotPolicy::final_only());
        emit(harness::solution_table(traj, problem, 1.0), "figures_" + cfg.name() + "_N23_k0.05_t1.csv");
    }

    // error histories on h = pi/50 for each r
    const SpatialGrid g50 = build_grid(problem.a, problem.b, 50);
    for (double r : {1.5915, 1.45, 0.995, 0.159, 0.016}) {
        const double k = r * g50.h();
        const double t_final = std::min(6.0, 2000.0 * k);
        for (const auto& cfg : {SchemeConfig::fd01(k), SchemeConfig::fd11(k), SchemeConfig::oefd(k),
                                SchemeConfig::oifd(k)}) {
            const std::size_t steps = step_count(t_final, k);
            const auto traj =
                solve_evolution(problem, g50, cfg, t_final, SnapshotPolicy{std::max<std::size_t>(1, steps / 200)});
            emit(harness::error_history_table(traj, problem),
                 "figures_" + cfg.name() + "_N50_r" + param(r) + "_t" + param(t_final) + ".csv");
        }
    }
    return kOk;
}

}  // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Finite-difference solvers for the 1D damped wave equation", "dampwave"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1, 1);

    Common c;
    std::string scheme, pade;
    std::vector<std::string> schemes = {"oefd", "oifd", "fd01", "fd11"};
    std::optional<double> gamma_max;
    bool power_check = false;
    std::uint64_t seed = 1;
    std::string axis = "time", reference = "exact", dir = "figures";
    int levels = 4;

    auto* solve = app.add_subcommand("solve", "run one scheme and write the error profile at t-final");
    add_problem(solve, c);
    solve->add_option("--scheme", scheme, "fd01, fd11, fdST (with --pade S,T), oefd or oifd")->required();
    solve->add_option("--pade", pade, "Pade orders S,T for --scheme fdST");
    add_mesh(solve, c);
    add_step(solve, c);
    solve->add_option("--t-final", c.t_final, "final time");
    solve->add_option("--out", c.out, "output CSV path");
    add_start_up(solve, c);

    auto* compare = app.add_subcommand("compare", "run several schemes and tabulate pointwise errors");
    add_problem(compare, c);
    compare->add_option("--schemes", schemes, "schemes to compare")->delimiter(',')->capture_default_str();
    add_mesh(compare, c);
    add_step(compare, c);
    compare->add_option("--t-final", c.t_final, "final time");
    compare->add_option("--out", c.out, "output CSV path");
    add_start_up(compare, c);

    auto* stab = app.add_subcommand("stability", "explicit stability verdict and implicit amplification factors");
    add_problem(stab, c);
    stab->add_option("--gamma-max", gamma_max, "maximum damping gamma*; sampled from --problem if omitted");
    add_mesh(stab, c);
    add_step(stab, c);
    stab->add_flag("--power-check", power_check, "estimate the FD-(1,1) spectral radius by power iteration");
    stab->add_option("--seed", seed, "seed for the power-iteration start vector")->capture_default_str();
    stab->add_option("--out", c.out, "output CSV path");

    auto* conv = app.add_subcommand("convergence", "observed convergence order under refinement");
    add_problem(conv, c);
    conv->add_option("--scheme", scheme, "scheme name")->required();
    conv->add_option("--pade", pade, "Pade orders S,T for --scheme fdST");
    add_mesh(conv, c);
    add_step(conv, c);
    conv->add_option("--t-final", c.t_final, "evaluation time");
    conv->add_option("--axis", axis, "refined axis")->check(CLI::IsMember({"time", "space"}))->capture_default_str();
    conv->add_option("--levels", levels, "refinement levels (>= 3)")->check(CLI::Range(3, 12))->capture_default_str();
    conv->add_option("--reference", reference, "exact solution or semi-discrete reference")
        ->check(CLI::IsMember({"exact", "semi"}))
        ->capture_default_str();
    conv->add_option("--out", c.out, "output CSV path");
    add_start_up(conv, c);

    auto* t1 = app.add_subcommand("table1", "pointwise errors of the four schemes on the sample problem");
    t1->add_option("--t-final", c.t_final, "evaluation time (default 0.3)");
    t1->add_option("--N", c.N, "subintervals (default 10)");
    t1->add_option("--k", c.k, "time step (default 0.1)");
    t1->add_option("--out", c.out, "output CSV path");
    add_start_up(t1, c);

    auto* t2 = app.add_subcommand("table2", "maximum errors at t = 6 for the tabulated ratios r");
    t2->add_option("--h", c.h, "mesh width (default pi/50)");
    t2->add_option("--t-final", c.t_final, "evaluation time (default 6)");
    t2->add_option("--out", c.out, "output CSV path");
    add_start_up(t2, c);

    auto* figs = app.add_subcommand("figures", "CSV series for the solution-profile and error-history plots");
    figs->add_option("--out-dir", dir, "output directory")->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kUsage;
    }

    CLI::App* active = app.get_subcommands().front();
    try {
        if (active == solve) return cmd_solve(c, scheme, pade, out, err);
        if (active == compare) return cmd_compare(c, schemes, out, err);
        if (active == stab) return cmd_stability(c, gamma_max, power_check, seed, out, err);
        if (active == conv) return cmd_convergence(c, scheme, pade, axis, levels, reference, out, err);
        if (active == t1) return cmd_table1(c, out);
        if (active == t2) return cmd_table2(c, out);
        if (active == figs) return cmd_figures(dir, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n" << active->help();
        return kUsage;
    } catch (const SingularMatrix& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumerical;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n" << active->help();
        return kUsage;
    } catch (const SchemaError& e) {
        err << "problem definition error: " << e.what() << "\n";
        return kUsage;
    } catch (const ParseError& e) {
        err << "problem definition error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kUsage;
}

}  // namespace dampwave::cli
