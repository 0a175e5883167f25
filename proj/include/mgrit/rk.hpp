#pragma once

#include "mgrit/hierarchy.hpp"
#include "mgrit/types.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace mgrit {

struct SpatialSpectrum;

struct ButcherTableau {
    std::string id;
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
    Eigen::VectorXd c;

    int stages() const { return static_cast<int>(b.size()); }
};

// Scheme ids: L-SDIRK1..4, A-SDIRK2..4. Lookup is case-insensitive.
ButcherTableau builtin_tableau(std::string_view id);
const std::vector<std::string>& builtin_scheme_ids();

// R(z) = 1 + z b^T (I - zA)^{-1} 1
complex stability_value(complex z, const ButcherTableau& tab);

struct ModeEigenvalues {
    Eigen::MatrixXcd lambda;                   // n_levels x n_modes
    bool strongly_stable = false;              // max |lambda| < 1
    std::vector<std::pair<int, int>> unstable; // (level, mode) with |lambda| >= 1

    int n_levels() const { return static_cast<int>(lambda.rows()); }
    int n_modes() const { return static_cast<int>(lambda.cols()); }
    bool is_real() const { return lambda.imag().cwiseAbs().maxCoeff() == 0.0; }
    std::vector<complex> mode(int k) const;
};

ModeEigenvalues level_lambda_table(const SpatialSpectrum& spectrum, const Hierarchy& h,
                                   const ButcherTableau& tab);

// Table from explicit per-level values (rows = levels); used for synthetic spectra.
ModeEigenvalues make_mode_eigenvalues(Eigen::MatrixXcd lambda);

} // namespace mgrit
