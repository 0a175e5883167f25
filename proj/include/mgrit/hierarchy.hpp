#pragma once

#include <string>
#include <vector>

namespace mgrit {

// Time-grid ladder. Level 0 is the fine grid.
struct Hierarchy {
    int n_levels = 0;
    std::vector<long> N;    // time points per level
    std::vector<int> m;     // coarsening factor between level l and l+1
    double t_final = 0.0;
    std::vector<double> dt; // t_final / (N_l - 1)
};

enum class Cycle { V, F };

// r = number of CF sweeps after the first F sweep (0: F-relaxation, 1: FCF).
struct CyclePlan {
    Cycle cycle = Cycle::V;
    int r = 0;
};

Hierarchy build_hierarchy(long N0, const std::vector<int>& coarsening, int n_levels,
                          double t_final);
Hierarchy build_hierarchy(long N0, int coarsening, int n_levels, double t_final);

// Leading levels of h (levels 0..n_levels-1) as a hierarchy of its own.
Hierarchy truncate(const Hierarchy& h, int n_levels);

Cycle parse_cycle(const std::string& s);
std::string to_string(Cycle c);

} // namespace mgrit
