#pragma once

#include "mgrit/hierarchy.hpp"
#include "mgrit/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace mgrit {

struct SpatialSpectrum {
    std::vector<complex> xi;
    std::string label;
    std::optional<double> dx;
};

enum class ProblemKind { Diffusion, Wave };

struct ProblemParams {
    ProblemKind kind = ProblemKind::Diffusion;
    double k1 = 0.0;
    double k2 = 0.0;
    double c = 0.0;
};

// Eigenvalues of the 5-point Laplacian with conductivities (k1, k2) on an
// n_interior x n_interior Dirichlet grid; ordered with the x-index outermost.
SpatialSpectrum diffusion_spectrum(double k1, double k2, int n_interior, double dx);

// First-order form of u_tt = c^2 Lap u: pairs +-i c sqrt(mu) per Laplacian mode.
SpatialSpectrum wave_spectrum(double c, int n_interior, double dx);

// One eigenvalue per line as "re,im"; '#' starts a comment line.
SpatialSpectrum load_spectrum(const std::string& path);
SpatialSpectrum parse_spectrum(const std::string& text, const std::string& label = "");
void save_spectrum(const SpatialSpectrum& spec, const std::string& path);
std::string format_spectrum(const SpatialSpectrum& spec);

// Per-level CFL (diffusion) or Courant (wave) numbers.
std::vector<double> cfl_report(const SpatialSpectrum& spec, const Hierarchy& h,
                               const ProblemParams& params);

} // namespace mgrit
