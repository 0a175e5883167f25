#pragma once

#include "mgrit/hierarchy.hpp"
#include "mgrit/rk.hpp"
#include "mgrit/types.hpp"

#include <cstdint>
#include <vector>

namespace mgrit {

// Level-0 unknowns and right-hand side of one spatial mode.
struct ModeState {
    Eigen::VectorXcd u;
    Eigen::VectorXcd g;
};

struct SimTrace {
    std::vector<double> residual_norms; // before the first cycle and after each cycle
    int iterations = 0;
    bool converged = false;
    std::uint64_t seed = 0;
    double tol = 0.0;

    // Some cycle increased the residual (worst factor > 1) or it became non-finite.
    bool diverged() const;
};

// r = g - A u on one level with time-stepper eigenvalue lambda.
Eigen::VectorXcd mode_residual(const Eigen::VectorXcd& u, const Eigen::VectorXcd& g, complex lambda);

// One MGRIT cycle for one mode. V-cycles relax with F then r CF sweeps on the
// fine level and r sweeps of C-then-F on coarser levels; F-cycles use F then
// r CF sweeps everywhere and solve each coarse problem with an F-cycle followed
// by a V-cycle. The coarsest level is solved exactly.
void mode_cycle(ModeState& state, const std::vector<complex>& lambdas, const Hierarchy& h,
                const CyclePlan& plan);

// Iterates all modes from the given states (zero forcing is not assumed).
SimTrace run_states(std::vector<ModeState>& states, const ModeEigenvalues& modes,
                    const Hierarchy& h, const CyclePlan& plan, int max_iter, double tol);

// Zero forcing, u drawn uniformly from [-1, 1] (real and imaginary parts).
SimTrace run(const ModeEigenvalues& modes, const Hierarchy& h, const CyclePlan& plan,
             std::uint64_t seed, int max_iter, double tol);

// max_i r_{i+1} / r_i over ratios whose denominator is at least 100 tol.
double worst_factor(const SimTrace& trace);
double worst_factor(const std::vector<double>& residual_norms, double tol);

} // namespace mgrit
