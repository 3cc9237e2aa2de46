#pragma once

#include "dampwave/linalg.hpp"
#include "dampwave/problems.hpp"
#include "dampwave/schemes.hpp"

#include <string>
#include <variant>
#include <vector>

namespace dampwave::harness {

// ------------------------------------------------------------------ tables

using Cell = std::variant<double, std::string>;

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<Cell>> rows;
};

/// Numbers: "0" for zero, %.10e when |v| < 1e-3, %.12g otherwise, and
/// inf / -inf / nan for non-finite values.
std::string format_number(double v);

/// RFC 4180 style text: header line, one line per row, fields quoted only
/// when they contain a comma, quote or newline, every line ending in '\n'.
std::string format_csv(const Table& table);

/// Writes format_csv(table) to path. Throws Error naming the path on
/// failure.
void write_csv(const Table& table, const std::string& path);

/// Splits CSV text into records of raw field strings (quotes removed).
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

// ------------------------------------------------------------------ errors

struct ProfileRow {
    double x = 0.0;
    double numeric = 0.0;
    double exact = 0.0;
    double error = 0.0;
};

/// Pointwise absolute error at all N+1 grid nodes, endpoints included (the
/// endpoint "numeric" value is the prescribed boundary datum).
struct ErrorProfile {
    double t = 0.0;            // time of the snapshot used
    double requested_t = 0.0;
    std::vector<ProfileRow> rows;
    double max_error = 0.0;

    double offset() const { return t - requested_t; }
};

/// Uses the snapshot nearest to t. Throws InvalidArgument if the problem has
/// no exact solution.
ErrorProfile error_profile(const Trajectory& traj, const DampedWaveProblem& problem, double t);

/// Same, against an explicit reference field (interior values only).
ErrorProfile error_profile(const SpatialGrid& grid, const DampedWaveProblem& problem, const StateVector& state,
                           std::span<const double> reference_interior);

/// Solution of the semi-discrete system V' = MV + F(t) at time t:
/// exp(Mt) V(0) plus the Duhamel integral by 3-point Gauss-Legendre
/// quadrature on substeps of at most 0.01. State size is limited by the
/// matrix-exponential oracle (N <= 101).
StateVector semi_discrete_reference(const DampedWaveProblem& problem, const SpatialGrid& grid, double t);

/// One step of the exact propagator with trapezoidal forcing:
/// exp(Mk) V + (k/2) [exp(Mk) F(t) + F(t + k)].
StateVector duhamel_step(const BlockOperator& op, const DampedWaveProblem& problem, const SpatialGrid& grid,
                         const StateVector& state, double k);

// ------------------------------------------------------------- convergence

enum class Axis { time, space };
enum class Reference { exact, semi_discrete };

struct ConvergenceReport {
    Axis axis = Axis::time;
    Reference reference = Reference::exact;
    std::vector<double> ks;
    std::vector<int> Ns;
    std::vector<double> levels;   // k (time axis) or h (space axis), halving per level
    std::vector<double> errors;   // NaN when the level blew up
    std::vector<double> orders;   // log2(e_j / e_{j+1}); NaN if either side is missing
};

/// Refinement study at t_eval. The time axis halves k from base_k with N
/// fixed; the space axis doubles N from base_N with k fixed. The scheme's
/// own k is ignored.
ConvergenceReport observed_order(const DampedWaveProblem& problem, const SchemeConfig& scheme, Axis axis,
                                 double base_k, int base_N, int levels, double t_eval,
                                 Reference reference = Reference::exact);

Table to_table(const ConvergenceReport& report);

// ------------------------------------------------------------------ tables

struct Table1Options {
    int N = 10;
    double k = 0.1;
    double t = 0.3;
    StartUp start_up = StartUp::taylor2;
};

struct Table1Row {
    double x = 0.0;
    double oefd = 0.0;
    double oifd = 0.0;
    double ex01 = 0.0;
    double im11 = 0.0;
};

/// Pointwise absolute errors of OEFD, OIFD, EX-(0,1) and IM-(1,1) on the
/// sample problem, one row per grid node.
std::vector<Table1Row> reproduce_table1(const Table1Options& opt = {});
Table to_table(const std::vector<Table1Row>& rows);

inline const std::vector<double> kTable2Ratios = {1.59, 0.53, 0.32, 0.23, 0.18};

/// A finite error above this magnitude is reported as divergent.
inline constexpr double kDivergenceThreshold = 1e3;

struct SchemeOutcome {
    double max_error = 0.0;   // at the last finite snapshot
    double t = 0.0;           // time of that snapshot
    bool blow_up = false;     // a non-finite value appeared
    bool diverged = false;    // blow_up or max_error > kDivergenceThreshold
};

struct Table2Row {
    double r = 0.0;
    double k = 0.0;
    SchemeOutcome oefd, oifd, ex01, im11;
};

/// Maximum error at t (default 6) for each ratio r, with k = r h.
std::vector<Table2Row> reproduce_table2(double h, double t = 6.0,
                                        const std::vector<double>& ratios = kTable2Ratios,
                                        StartUp start_up = StartUp::taylor2);
Table to_table(const std::vector<Table2Row>& rows);

SchemeOutcome run_outcome(const DampedWaveProblem& problem, const SpatialGrid& grid, const SchemeConfig& config,
                          double t_final);

// ------------------------------------------------------------------ figures

/// Columns x, numeric, exact at the snapshot nearest t.
Table solution_table(const Trajectory& traj, const DampedWaveProblem& problem, double t);

/// Columns t, max_error for every stored snapshot.
Table error_history_table(const Trajectory& traj, const DampedWaveProblem& problem);

/// Rows x, then one absolute-error column per trajectory at time t.
Table profile_comparison(const std::vector<Trajectory>& runs, const DampedWaveProblem& problem, double t);

}  // namespace dampwave::harness
