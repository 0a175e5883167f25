#pragma once

#include "mgrit/bounds.hpp"
#include "mgrit/config.hpp"
#include "mgrit/simulator.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace mgrit {

struct CsvRow {
    int levels = 0;
    Estimator estimator = Estimator::Norm2;
    double value = 0.0;
    int argmax_mode = -1; // -1 prints as an empty field
};

inline constexpr const char* csv_header = "levels,estimator,value,argmax_mode";

// 15 significant digits, locale independent.
std::string format_value(double v);
std::string format_csv(const std::vector<CsvRow>& rows);

// Estimator rows for one level count, in the order observed, norm2, sqrt1inf,
// analytic, approx, fine_grid. Unavailable estimators are skipped with a note.
std::vector<CsvRow> estimator_rows(const RunConfig& cfg, int n_levels, bool with_observed,
                                   std::ostream& notes);

// Each command writes its result to `out` and diagnostics to `notes`, and
// returns the process exit code.
int cmd_eigs(const RunConfig& cfg, std::ostream& out, std::ostream& notes);
int cmd_bound(const RunConfig& cfg, std::ostream& out, std::ostream& notes);
int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& notes);
int cmd_simulate(const RunConfig& cfg, bool allow_divergence, std::ostream& out,
                 std::ostream& notes);

// Exit code used when a simulation diverges without --allow-divergence.
inline constexpr int exit_diverged = 3;

} // namespace mgrit
