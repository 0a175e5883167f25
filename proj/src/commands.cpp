#include "mgrit/commands.hpp"

#include "mgrit/errors.hpp"
#include "mgrit/rk.hpp"
#include "mgrit/spectrum.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <tuple>

namespace mgrit {

namespace {

bool wants(const RunConfig& cfg, Estimator e)
{
    return std::find(cfg.estimators.begin(), cfg.estimators.end(), e) != cfg.estimators.end();
}

void note_divergence(const CsvRow& row, std::ostream& notes)
{
    if (row.estimator != Estimator::Observed && row.value > 1.0)
        notes << "note: levels=" << row.levels << ' ' << to_string(row.estimator) << " = "
              << format_value(row.value) << " exceeds 1 (divergence)\n";
}

} // namespace

std::string format_value(double v)
{
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(15);
    out << v;
    return out.str();
}

std::string format_csv(const std::vector<CsvRow>& rows)
{
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out << csv_header << '\n';
    for (const auto& r : rows) {
        out << r.levels << ',' << to_string(r.estimator) << ',' << format_value(r.value) << ',';
        if (r.argmax_mode >= 0) out << r.argmax_mode;
        out << '\n';
    }
    return out.str();
}

std::vector<CsvRow> estimator_rows(const RunConfig& cfg, int n_levels, bool with_observed,
                                   std::ostream& notes)
{
    const Hierarchy h = make_hierarchy(cfg, n_levels);
    const SpatialSpectrum spec = make_spectrum(cfg);
    const ModeEigenvalues modes = level_lambda_table(spec, h, builtin_tableau(cfg.scheme));
    if (!modes.strongly_stable && n_levels == 2)
        notes << "note: " << modes.unstable.size()
              << " (level, mode) pairs have |lambda| >= 1; bounds are still evaluated\n";

    std::vector<CsvRow> rows;
    auto push = [&](Estimator e, double value, int argmax) {
        rows.push_back({n_levels, e, value, argmax});
        note_divergence(rows.back(), notes);
    };

    if (with_observed && wants(cfg, Estimator::Observed)) {
        const SimTrace trace = run(modes, h, cfg.plan, cfg.seed, cfg.max_iter, cfg.tol);
        try {
            push(Estimator::Observed, worst_factor(trace), -1);
        } catch (const TooShort& e) {
            notes << "note: levels=" << n_levels << " observed omitted: " << e.what() << '\n';
        }
    }

    const bool need_norm2 = wants(cfg, Estimator::Norm2) || wants(cfg, Estimator::FineGrid);
    BoundReport direct, ineq;
    if (need_norm2)
        std::tie(direct, ineq) = norm_bounds(modes, h, cfg.plan);
    else if (wants(cfg, Estimator::Sqrt1Inf))
        ineq = inequality_bound(modes, h, cfg.plan);

    if (wants(cfg, Estimator::Norm2)) push(Estimator::Norm2, direct.value, direct.argmax_mode);
    if (wants(cfg, Estimator::Sqrt1Inf)) push(Estimator::Sqrt1Inf, ineq.value, ineq.argmax_mode);
    if (wants(cfg, Estimator::Analytic)) {
        if (analytic_supported(h, cfg.plan)) {
            const BoundReport a = analytic_bound(modes, h, cfg.plan);
            push(Estimator::Analytic, a.value, a.argmax_mode);
        } else {
            notes << "note: levels=" << n_levels << " analytic omitted (no closed form)\n";
        }
    }
    if (wants(cfg, Estimator::Approx)) {
        if (approx_supported(h, cfg.plan)) {
            const BoundReport a = approx_factor(modes, h, cfg.plan);
            push(Estimator::Approx, a.value, a.argmax_mode);
        } else {
            notes << "note: levels=" << n_levels << " approx omitted (V-cycle, r <= 1 only)\n";
        }
    }
    if (wants(cfg, Estimator::FineGrid))
        push(Estimator::FineGrid, fine_grid_bound(direct.value, h.m[0]), direct.argmax_mode);
    return rows;
}

int cmd_eigs(const RunConfig& cfg, std::ostream& out, std::ostream& notes)
{
    const SpatialSpectrum spec = make_spectrum(cfg);
    if (spec.dx && cfg.problem != "file") {
        const Hierarchy h = make_hierarchy(cfg, cfg.n_levels);
        const auto cfl = cfl_report(spec, h, problem_params(cfg));
        const char* name = cfg.problem == "wave" ? "courant" : "cfl";
        for (std::size_t l = 0; l < cfl.size(); ++l)
            out << "# " << name << " level " << l << ": " << format_value(cfl[l]) << '\n';
    }
    out << format_spectrum(spec);
    notes << "note: " << spec.xi.size() << " eigenvalues\n";
    return 0;
}

int cmd_bound(const RunConfig& cfg, std::ostream& out, std::ostream& notes)
{
    out << format_csv(estimator_rows(cfg, cfg.n_levels, false, notes));
    return 0;
}

int cmd_compare(const RunConfig& cfg, std::ostream& out, std::ostream& notes)
{
    std::vector<CsvRow> rows;
    for (int n = 2; n <= cfg.n_levels; ++n) {
        auto part = estimator_rows(cfg, n, true, notes);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    out << format_csv(rows);
    return 0;
}

int cmd_simulate(const RunConfig& cfg, bool allow_divergence, std::ostream& out,
                 std::ostream& notes)
{
    const Hierarchy h = make_hierarchy(cfg, cfg.n_levels);
    const ModeEigenvalues modes =
        level_lambda_table(make_spectrum(cfg), h, builtin_tableau(cfg.scheme));
    const SimTrace trace = run(modes, h, cfg.plan, cfg.seed, cfg.max_iter, cfg.tol);

    std::ostringstream csv;
    csv.imbue(std::locale::classic());
    csv << "iteration,residual_norm,worst_factor\n";
    for (std::size_t i = 0; i < trace.residual_norms.size(); ++i) {
        csv << i << ',' << format_value(trace.residual_norms[i]) << ',';
        try {
            const std::vector<double> head(trace.residual_norms.begin(),
                                           trace.residual_norms.begin() + i + 1);
            csv << format_value(worst_factor(head, trace.tol));
        } catch (const TooShort&) {
            // left empty
        }
        csv << '\n';
    }
    out << csv.str();

    notes << "note: " << trace.iterations << " cycles, "
          << (trace.converged ? "converged" : "not converged") << '\n';
    if (trace.diverged()) {
        notes << "note: residual grew during the iteration (divergence)\n";
        if (!allow_divergence) return exit_diverged;
    }
    return 0;
}

} // namespace mgrit
