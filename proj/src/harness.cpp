#include "dampwave/harness.hpp"

#include "dampwave/error.hpp"
#include "dampwave/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace dampwave::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string quote_field(const std::string& s) {
    if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string format_cell(const Cell& c) {
    if (const auto* d = std::get_if<double>(&c)) return format_number(*d);
    return quote_field(std::get<std::string>(c));
}

double max_error_against(const SpatialGrid& grid, const DampedWaveProblem& problem, const StateVector& state,
                         std::span<const double> reference) {
    return error_profile(grid, problem, state, reference).max_error;
}

std::vector<double> exact_interior(const DampedWaveProblem& problem, const SpatialGrid& grid, double t) {
    std::vector<double> out;
    for (double x : grid.interior_nodes()) out.push_back((*problem.exact)(x, t));
    return out;
}

void require_exact(const DampedWaveProblem& problem) {
    if (!problem.has_exact()) throw InvalidArgument("problem '" + problem.name + "' has no exact solution");
}

}  // namespace

// ------------------------------------------------------------------ CSV

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";
    char buf[64];
    if (std::abs(v) < 1e-3) {
        std::snprintf(buf, sizeof buf, "%.10e", v);
    } else {
        std::snprintf(buf, sizeof buf, "%.12g", v);
    }
    return buf;
}

std::string format_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (i) out += ',';
        out += quote_field(table.header[i]);
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += format_cell(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const Table& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << format_csv(table);
    out.flush();
    if (!out) throw Error("failed writing CSV to '" + path + "'");
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool quoted = false;
    bool any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
            continue;
        }
        any = true;
        if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            record.push_back(std::move(field));
            field.clear();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            record.push_back(std::move(field));
            field.clear();
            records.push_back(std::move(record));
            record.clear();
            any = false;
        } else {
            field += c;
        }
    }
    if (any || !field.empty() || !record.empty()) {
        record.push_back(std::move(field));
        records.push_back(std::move(record));
    }
    return records;
}

// --------------------------------------------------------------- errors

ErrorProfile error_profile(const SpatialGrid& grid, const DampedWaveProblem& problem, const StateVector& state,
                           std::span<const double> reference_interior) {
    const std::size_t n = grid.n_interior();
    if (state.values.size() != 2 * n || reference_interior.size() != n) {
        throw DimensionMismatch("error_profile: state or reference does not match the grid");
    }
    ErrorProfile p;
    p.t = state.t;
    p.requested_t = state.t;
    auto add = [&](double x, double numeric, double exact) {
        const double err = std::abs(numeric - exact);
        p.rows.push_back({x, numeric, exact, err});
        // NaN compares false; make it dominate so blow-ups are never hidden.
        if (std::isnan(err) || err > p.max_error) p.max_error = err;
    };
    const double t = state.t;
    // endpoints carry the prescribed boundary data on both sides
    add(grid.a(), problem.u_a(t), problem.u_a(t));
    for (std::size_t i = 0; i < n; ++i) add(grid.interior_nodes()[i], state.values[i], reference_interior[i]);
    add(grid.b(), problem.u_b(t), problem.u_b(t));
    return p;
}

ErrorProfile error_profile(const Trajectory& traj, const DampedWaveProblem& problem, double t) {
    require_exact(problem);
    const StateVector& s = traj.nearest(t);
    ErrorProfile p = error_profile(traj.grid, problem, s, exact_interior(problem, traj.grid, s.t));
    p.requested_t = t;
    return p;
}

StateVector semi_discrete_reference(const DampedWaveProblem& problem, const SpatialGrid& grid, double t) {
    const BlockOperator op = assemble_system(grid, problem);
    const std::size_t m = op.state_size();
    StateVector v{0.0, std::vector<double>(m)};
    const auto& x = grid.interior_nodes();
    for (std::size_t i = 0; i < grid.n_interior(); ++i) {
        v.values[i] = problem.phi(x[i]);
        v.values[grid.n_interior() + i] = problem.psi(x[i]);
    }
    if (t <= 0.0) return v;

    const std::size_t substeps = static_cast<std::size_t>(std::ceil(t / 0.01 - 1e-9));
    const double tau = t / static_cast<double>(substeps);
    const auto propagator = linalg::matrix_exponential(op, tau);
    const double g = std::sqrt(0.6);
    const double nodes[3] = {0.5 * tau * (1.0 - g), 0.5 * tau, 0.5 * tau * (1.0 + g)};
    const double weights[3] = {5.0 / 18.0 * tau, 8.0 / 18.0 * tau, 5.0 / 18.0 * tau};
    std::vector<linalg::DenseMatrix> kernels;
    for (double s : nodes) kernels.push_back(linalg::matrix_exponential(op, tau - s));

    std::vector<double> f(m);
    for (std::size_t j = 0; j < substeps; ++j) {
        const double t0 = static_cast<double>(j) * tau;
        std::vector<double> next = propagator.multiply(v.values);
        for (int q = 0; q < 3; ++q) {
            fill_forcing(problem, grid, t0 + nodes[q], f);
            if (std::all_of(f.begin(), f.end(), [](double z) { return z == 0.0; })) continue;
            const auto contrib = kernels[q].multiply(f);
            for (std::size_t i = 0; i < m; ++i) next[i] += weights[q] * contrib[i];
        }
        v.values = std::move(next);
    }
    v.t = t;
    return v;
}

StateVector duhamel_step(const BlockOperator& op, const DampedWaveProblem& problem, const SpatialGrid& grid,
                         const StateVector& state, double k) {
    const std::size_t m = op.state_size();
    if (state.values.size() != m) throw DimensionMismatch("duhamel_step: state length mismatch");
    const auto e = linalg::matrix_exponential(op, k);
    std::vector<double> f(m);
    fill_forcing(problem, grid, state.t, f);
    std::vector<double> w(m);
    for (std::size_t i = 0; i < m; ++i) w[i] = state.values[i] + 0.5 * k * f[i];
    std::vector<double> next = e.multiply(w);
    fill_forcing(problem, grid, state.t + k, f);
    for (std::size_t i = 0; i < m; ++i) next[i] += 0.5 * k * f[i];
    return {state.t + k, std::move(next)};
}

// ----------------------------------------------------------- convergence

ConvergenceReport observed_order(const DampedWaveProblem& problem, const SchemeConfig& scheme, Axis axis,
                                 double base_k, int base_N, int levels, double t_eval, Reference reference) {
    if (levels < 3) throw InvalidArgument("observed_order needs at least 3 levels");
    if (reference == Reference::exact) require_exact(problem);

    ConvergenceReport rep;
    rep.axis = axis;
    rep.reference = reference;
    for (int j = 0; j < levels; ++j) {
        const double k = axis == Axis::time ? base_k / std::ldexp(1.0, j) : base_k;
        const int N = axis == Axis::space ? base_N << j : base_N;
        rep.ks.push_back(k);
        rep.Ns.push_back(N);
        rep.levels.push_back(axis == Axis::time ? k : (problem.b - problem.a) / N);
    }

    rep.errors = parallel_map<double>(static_cast<std::size_t>(levels), [&](std::size_t j) {
        const SpatialGrid grid = build_grid(problem.a, problem.b, rep.Ns[j]);
        SchemeConfig cfg = scheme;
        cfg.k = rep.ks[j];
        const Trajectory traj = solve_evolution(problem, grid, cfg, t_eval, SnapshotPolicy::final_only());
        if (traj.blow_up) return kNaN;
        const StateVector& fin = traj.final_state();
        if (reference == Reference::exact) {
            return max_error_against(grid, problem, fin, exact_interior(problem, grid, fin.t));
        }
        const StateVector ref = semi_discrete_reference(problem, grid, fin.t);
        return max_error_against(grid, problem, fin, ref.displacement());
    });

    for (std::size_t j = 0; j + 1 < rep.errors.size(); ++j) {
        const double a = rep.errors[j], b = rep.errors[j + 1];
        rep.orders.push_back(std::isfinite(a) && std::isfinite(b) && a > 0.0 && b > 0.0 ? std::log2(a / b) : kNaN);
    }
    return rep;
}

Table to_table(const ConvergenceReport& report) {
    Table t;
    t.header = {report.axis == Axis::time ? "k" : "h", "N", "k_step", "max_error", "order"};
    for (std::size_t j = 0; j < report.errors.size(); ++j) {
        const Cell order = j == 0 ? Cell(std::string()) : Cell(report.orders[j - 1]);
        t.rows.push_back({report.levels[j], static_cast<double>(report.Ns[j]), report.ks[j], report.errors[j], order});
    }
    return t;
}

// ---------------------------------------------------------------- tables

std::vector<Table1Row> reproduce_table1(const Table1Options& opt) {
    const DampedWaveProblem problem = sample_problem();
    const SpatialGrid grid = build_grid(problem.a, problem.b, opt.N);
    const std::vector<SchemeConfig> configs = {SchemeConfig::oefd(opt.k, opt.start_up),
                                               SchemeConfig::oifd(opt.k, opt.start_up), SchemeConfig::fd01(opt.k),
                                               SchemeConfig::fd11(opt.k)};
    const auto profiles = parallel_map<ErrorProfile>(configs.size(), [&](std::size_t i) {
        return error_profile(solve_evolution(problem, grid, configs[i], opt.t), problem, opt.t);
    });
    std::vector<Table1Row> rows;
    for (std::size_t i = 0; i < profiles[0].rows.size(); ++i) {
        rows.push_back({profiles[0].rows[i].x, profiles[0].rows[i].error, profiles[1].rows[i].error,
                        profiles[2].rows[i].error, profiles[3].rows[i].error});
    }
    return rows;
}

Table to_table(const std::vector<Table1Row>& rows) {
    Table t;
    t.header = {"x", "OEFD", "OIFD", "EX-(0,1)", "IM-(1,1)"};
    for (const auto& r : rows) t.rows.push_back({r.x, r.oefd, r.oifd, r.ex01, r.im11});
    return t;
}

SchemeOutcome run_outcome(const DampedWaveProblem& problem, const SpatialGrid& grid, const SchemeConfig& config,
                          double t_final) {
    const Trajectory traj = solve_evolution(problem, grid, config, t_final, SnapshotPolicy::final_only());
    const StateVector& fin = traj.final_state();
    SchemeOutcome out;
    out.t = fin.t;
    out.blow_up = traj.blow_up;
    out.max_error = problem.has_exact()
                        ? max_error_against(grid, problem, fin, exact_interior(problem, grid, fin.t))
                        : traj.peak_magnitude;
    out.diverged = out.blow_up || !(out.max_error <= kDivergenceThreshold);
    return out;
}

std::vector<Table2Row> reproduce_table2(double h, double t, const std::vector<double>& ratios, StartUp start_up) {
    if (!(h > 0.0)) throw InvalidArgument("table2: h must be positive");
    const DampedWaveProblem problem = sample_problem();
    const int N = std::max(2, static_cast<int>(std::lround((problem.b - problem.a) / h)));
    const SpatialGrid grid = build_grid(problem.a, problem.b, N);

    struct Job {
        std::size_t row;
        int scheme;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        for (int s = 0; s < 4; ++s) jobs.push_back({i, s});
    }
    const auto outcomes = parallel_map<SchemeOutcome>(jobs.size(), [&](std::size_t j) {
        const double k = ratios[jobs[j].row] * grid.h();
        const SchemeConfig cfg = jobs[j].scheme == 0   ? SchemeConfig::oefd(k, start_up)
                                 : jobs[j].scheme == 1 ? SchemeConfig::oifd(k, start_up)
                                 : jobs[j].scheme == 2 ? SchemeConfig::fd01(k)
                                                       : SchemeConfig::fd11(k);
        return run_outcome(problem, grid, cfg, t);
    });

    std::vector<Table2Row> rows;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        Table2Row r;
        r.r = ratios[i];
        r.k = ratios[i] * grid.h();
        r.oefd = outcomes[4 * i];
        r.oifd = outcomes[4 * i + 1];
        r.ex01 = outcomes[4 * i + 2];
        r.im11 = outcomes[4 * i + 3];
        rows.push_back(r);
    }
    return rows;
}

Table to_table(const std::vector<Table2Row>& rows) {
    Table t;
    t.header = {"r", "k", "OEFD", "OIFD", "EX-(0,1)", "IM-(1,1)", "OEFD_diverged", "OIFD_diverged",
                "EX-(0,1)_diverged", "IM-(1,1)_diverged"};
    auto flag = [](const SchemeOutcome& o) { return Cell(std::string(o.diverged ? "yes" : "no")); };
    for (const auto& r : rows) {
        t.rows.push_back({r.r, r.k, r.oefd.max_error, r.oifd.max_error, r.ex01.max_error, r.im11.max_error,
                          flag(r.oefd), flag(r.oifd), flag(r.ex01), flag(r.im11)});
    }
    return t;
}

// --------------------------------------------------------------- figures

Table solution_table(const Trajectory& traj, const DampedWaveProblem& problem, double t) {
    const StateVector& s = traj.nearest(t);
    std::vector<double> ref = problem.exact ? exact_interior(problem, traj.grid, s.t)
                                            : std::vector<double>(traj.grid.n_interior(), kNaN);
    const ErrorProfile p = error_profile(traj.grid, problem, s, ref);
    Table table;
    table.header = {"x", "numeric", "exact"};
    for (const auto& row : p.rows) table.rows.push_back({row.x, row.numeric, row.exact});
    return table;
}

Table error_history_table(const Trajectory& traj, const DampedWaveProblem& problem) {
    require_exact(problem);
    Table table;
    table.header = {"t", "max_error"};
    for (const auto& s : traj.snapshots) {
        table.rows.push_back({s.t, max_error_against(traj.grid, problem, s, exact_interior(problem, traj.grid, s.t))});
    }
    return table;
}

Table profile_comparison(const std::vector<Trajectory>& runs, const DampedWaveProblem& problem, double t) {
    require_exact(problem);
    Table table;
    table.header = {"x"};
    std::vector<ErrorProfile> profiles;
    for (const auto& run : runs) {
        table.header.push_back(run.config.label());
        profiles.push_back(error_profile(run, problem, t));
    }
    if (profiles.empty()) return table;
    for (std::size_t i = 0; i < profiles[0].rows.size(); ++i) {
        std::vector<Cell> row{profiles[0].rows[i].x};
        for (const auto& p : profiles) row.emplace_back(p.rows[i].error);
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace dampwave::harness
