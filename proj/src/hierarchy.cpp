#include "mgrit/hierarchy.hpp"

#include "mgrit/errors.hpp"

#include <algorithm>

namespace mgrit {

Hierarchy build_hierarchy(long N0, const std::vector<int>& coarsening, int n_levels,
                          double t_final)
{
    if (N0 < 3) throw ArgumentError("N0 must be at least 3");
    if (n_levels < 2) throw ArgumentError("n_levels must be at least 2");
    if (!(t_final > 0.0)) throw ArgumentError("t_final must be positive");
    if (static_cast<int>(coarsening.size()) != n_levels - 1)
        throw ArgumentError("expected " + std::to_string(n_levels - 1) +
                            " coarsening factors, got " + std::to_string(coarsening.size()));

    Hierarchy h;
    h.n_levels = n_levels;
    h.m = coarsening;
    h.t_final = t_final;
    h.N.push_back(N0);
    for (int l = 0; l + 1 < n_levels; ++l) {
        const int m = coarsening[l];
        if (m < 1) throw ArgumentError("coarsening factors must be >= 1");
        const long prev = h.N.back();
        if ((prev - 1) % m != 0)
            throw DivisibilityError("level " + std::to_string(l) + ": N-1 = " +
                                    std::to_string(prev - 1) + " is not divisible by m = " +
                                    std::to_string(m));
        h.N.push_back((prev - 1) / m + 1);
    }
    if (h.N.back() < 2) throw ArgumentError("coarsest level needs at least 2 time points");
    for (long n : h.N) h.dt.push_back(t_final / static_cast<double>(n - 1));
    return h;
}

Hierarchy build_hierarchy(long N0, int coarsening, int n_levels, double t_final)
{
    return build_hierarchy(N0, std::vector<int>(std::max(n_levels - 1, 0), coarsening),
                           n_levels, t_final);
}

Hierarchy truncate(const Hierarchy& h, int n_levels)
{
    if (n_levels < 2 || n_levels > h.n_levels)
        throw ArgumentError("cannot truncate hierarchy to " + std::to_string(n_levels) +
                            " levels");
    return build_hierarchy(h.N[0], std::vector<int>(h.m.begin(), h.m.begin() + n_levels - 1),
                           n_levels, h.t_final);
}

Cycle parse_cycle(const std::string& s)
{
    if (s == "V" || s == "v") return Cycle::V;
    if (s == "F" || s == "f") return Cycle::F;
    throw ArgumentError("unknown cycle '" + s + "' (expected V or F)");
}

std::string to_string(Cycle c) { return c == Cycle::V ? "V" : "F"; }

} // namespace mgrit
