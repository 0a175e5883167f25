#pragma once

#include "mgrit/bounds.hpp"
#include "mgrit/hierarchy.hpp"
#include "mgrit/spectrum.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace mgrit {

using KeyValues = std::map<std::string, std::string>;

struct RunConfig {
    std::string problem; // isotropic | anisotropic | wave | file
    double k1 = 0.0;
    double k2 = 0.0;
    double c = 0.0;
    int nx = 0;
    double dx = 0.0;
    std::string spectrum_path;

    std::string scheme;
    long N0 = 0;
    int n_levels = 0;
    std::vector<int> coarsening; // one entry per level transition
    double t_final = 0.0;
    CyclePlan plan;
    std::vector<Estimator> estimators;
    std::uint64_t seed = 0;
    int max_iter = 0;
    double tol = 0.0;
};

const std::vector<std::string>& config_keys();

// "key = value" lines; '#' starts a comment. Throws ParseError / UnknownKey.
KeyValues parse_config_text(const std::string& text);
KeyValues load_config_file(const std::string& path);

// Preset for "isotropic", "anisotropic" or "wave" (also "*-diffusion" names).
KeyValues named_preset(const std::string& name);

// Builds the run configuration. `base` holds preset values, `explicit_values` the
// config file and command line (later sources already merged over earlier ones).
// Preset keys that do not apply to the final problem are dropped; explicit keys
// that do not apply raise ConflictingProblemParams.
RunConfig make_run_config(const KeyValues& base, const KeyValues& explicit_values);

Hierarchy make_hierarchy(const RunConfig& cfg, int n_levels);
SpatialSpectrum make_spectrum(const RunConfig& cfg);
ProblemParams problem_params(const RunConfig& cfg);

} // namespace mgrit
