#include "mgrit/simulator.hpp"

#include "mgrit/errors.hpp"
#include "mgrit/parallel.hpp"

#include <cmath>
#include <random>

namespace mgrit {

namespace {

using Vec = Eigen::VectorXcd;

struct Cycler {
    const std::vector<complex>& lam;
    const Hierarchy& h;
    int r;
    bool uniform; // leading F sweep on every level

    void forward_solve(int l, Vec& u, const Vec& g) const
    {
        u(0) = g(0);
        for (Index i = 1; i < u.size(); ++i) u(i) = lam[l] * u(i - 1) + g(i);
    }

    void f_relax(int l, Vec& u, const Vec& g) const
    {
        const int m = h.m[l];
        for (Index c = 0; c < u.size(); c += m)
            for (Index i = c + 1; i < std::min<Index>(c + m, u.size()); ++i)
                u(i) = lam[l] * u(i - 1) + g(i);
    }

    void c_relax(int l, Vec& u, const Vec& g) const
    {
        const int m = h.m[l];
        u(0) = g(0);
        for (Index c = m; c < u.size(); c += m) u(c) = lam[l] * u(c - 1) + g(c);
    }

    void cycle(int l, Vec& u, const Vec& g, Cycle kind) const
    {
        if (l == h.n_levels - 1) {
            forward_solve(l, u, g);
            return;
        }
        const int m = h.m[l];
        const complex lambda = lam[l];

        if (uniform || l == 0 || r == 0) f_relax(l, u, g);
        for (int s = 0; s < r; ++s) {
            c_relax(l, u, g);
            f_relax(l, u, g);
        }

        // Ideal restriction of the residual.
        const Vec res = mode_residual(u, g, lambda);
        const Index Nc = h.N[l + 1];
        Vec gc(Nc);
        gc(0) = res(0);
        for (Index q = 1; q < Nc; ++q) {
            complex acc = res(q * m);
            complex p = 1.0;
            for (int d = 1; d < m; ++d) {
                p *= lambda;
                acc += p * res(q * m - d);
            }
            gc(q) = acc;
        }

        Vec v = Vec::Zero(Nc);
        if (kind == Cycle::F) {
            cycle(l + 1, v, gc, Cycle::F);
            cycle(l + 1, v, gc, Cycle::V);
        } else {
            cycle(l + 1, v, gc, Cycle::V);
        }

        // Ideal interpolation of the correction.
        for (Index q = 0; q < Nc; ++q) {
            complex p = 1.0;
            for (int d = 0; d < m && q * m + d < u.size(); ++d) {
                u(q * m + d) += p * v(q);
                p *= lambda;
            }
        }
    }
};

} // namespace

bool SimTrace::diverged() const
{
    for (double v : residual_norms)
        if (!std::isfinite(v)) return true;
    try {
        return worst_factor(*this) > 1.0;
    } catch (const TooShort&) {
        return false;
    }
}

Vec mode_residual(const Vec& u, const Vec& g, complex lambda)
{
    Vec r(u.size());
    r(0) = g(0) - u(0);
    for (Index i = 1; i < u.size(); ++i) r(i) = g(i) - u(i) + lambda * u(i - 1);
    return r;
}

void mode_cycle(ModeState& state, const std::vector<complex>& lambdas, const Hierarchy& h,
                const CyclePlan& plan)
{
    if (static_cast<int>(lambdas.size()) != h.n_levels)
        throw ArgumentError("expected one eigenvalue per level");
    if (state.u.size() != h.N[0] || state.g.size() != h.N[0])
        throw ArgumentError("mode state does not match the fine level size");
    if (plan.r < 0) throw ArgumentError("r must be >= 0");
    const Cycler c{lambdas, h, plan.r, plan.cycle == Cycle::F};
    c.cycle(0, state.u, state.g, plan.cycle);
}

SimTrace run_states(std::vector<ModeState>& states, const ModeEigenvalues& modes,
                    const Hierarchy& h, const CyclePlan& plan, int max_iter, double tol)
{
    if (max_iter < 1) throw ArgumentError("max_iter must be >= 1");
    if (!(tol > 0.0)) throw ArgumentError("tol must be positive");
    if (static_cast<int>(states.size()) != modes.n_modes())
        throw ArgumentError("one state per mode required");

    const int nk = modes.n_modes();
    std::vector<std::vector<complex>> lambdas(nk);
    for (int k = 0; k < nk; ++k) lambdas[k] = modes.mode(k);

    std::vector<double> sq(nk);
    auto global_norm = [&] {
        double sum = 0.0;
        for (int k = 0; k < nk; ++k) sum += sq[k];
        return std::sqrt(sum);
    };
    for (int k = 0; k < nk; ++k)
        sq[k] = mode_residual(states[k].u, states[k].g, lambdas[k][0]).squaredNorm();

    SimTrace trace;
    trace.tol = tol;
    trace.residual_norms.push_back(global_norm());
    if (trace.residual_norms.back() < tol) {
        trace.converged = true;
        return trace;
    }
    for (int it = 0; it < max_iter; ++it) {
        parallel_for(nk, [&](std::size_t k) {
            mode_cycle(states[k], lambdas[k], h, plan);
            sq[k] = mode_residual(states[k].u, states[k].g, lambdas[k][0]).squaredNorm();
        });
        const double norm = global_norm();
        trace.residual_norms.push_back(norm);
        trace.iterations = it + 1;
        if (norm < tol) {
            trace.converged = true;
            break;
        }
        if (!std::isfinite(norm)) break;
    }
    return trace;
}

SimTrace run(const ModeEigenvalues& modes, const Hierarchy& h, const CyclePlan& plan,
             std::uint64_t seed, int max_iter, double tol)
{
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<ModeState> states(modes.n_modes());
    for (auto& s : states) {
        s.u.resize(h.N[0]);
        s.g = Vec::Zero(h.N[0]);
        for (Index i = 0; i < h.N[0]; ++i) {
            const double re = dist(gen);
            const double im = dist(gen);
            s.u(i) = complex(re, im);
        }
    }
    SimTrace trace = run_states(states, modes, h, plan, max_iter, tol);
    trace.seed = seed;
    return trace;
}

double worst_factor(const std::vector<double>& norms, double tol)
{
    if (norms.size() < 2) throw TooShort("need at least two residual norms");
    double worst = -1.0;
    for (std::size_t i = 0; i + 1 < norms.size(); ++i) {
        if (norms[i] < 100.0 * tol) continue;
        worst = std::max(worst, norms[i + 1] / norms[i]);
    }
    if (worst < 0.0) throw TooShort("no residual ratio above the convergence floor");
    return worst;
}

double worst_factor(const SimTrace& trace) { return worst_factor(trace.residual_norms, trace.tol); }

} // namespace mgrit
