#pragma once

#include "mgrit/hierarchy.hpp"
#include "mgrit/rk.hpp"
#include "mgrit/types.hpp"

#include <string>
#include <vector>

namespace mgrit {

struct MatrixNorms {
    double norm1 = 0.0;   // max absolute column sum
    double norm2 = 0.0;   // largest singular value
    double norminf = 0.0; // max absolute row sum
};

double norm1(const Eigen::MatrixXd& M);
double norm1(const Eigen::MatrixXcd& M);
double norm_inf(const Eigen::MatrixXd& M);
double norm_inf(const Eigen::MatrixXcd& M);

// Largest singular value. Dense Hermitian eigensolve of M^H M for small
// matrices, Lanczos with full reorthogonalization otherwise.
double spectral_norm(const Eigen::MatrixXd& M);
double spectral_norm(const Eigen::MatrixXcd& M);

MatrixNorms matrix_norms(const Eigen::MatrixXd& M);
MatrixNorms matrix_norms(const Eigen::MatrixXcd& M);

// sum_{i<n} a^i
double geometric_sum(double a, long n);

enum class Estimator { Observed, Norm2, Sqrt1Inf, Analytic, Approx, FineGrid };

std::string to_string(Estimator e);
Estimator parse_estimator(const std::string& s);

struct BoundReport {
    Estimator estimator = Estimator::Norm2;
    double value = 0.0;
    int argmax_mode = -1;
    int levels = 0;
    CyclePlan plan;
    std::string scheme;
    bool diverges = false;        // value > 1
    bool unstable_modes = false;  // some |lambda| > 1
};

// Per-mode maximum column and row sums of the coarse-level propagator.
struct ColRowSums {
    double col = 0.0;
    double row = 0.0;
    double value() const;
};

// Per-mode quantities of E^Delta; norm2 is only filled when requested.
struct ModeNorms {
    std::vector<MatrixNorms> per_mode;
};

ModeNorms mode_norms(const ModeEigenvalues& modes, const Hierarchy& h, const CyclePlan& plan,
                     bool with_norm2);

BoundReport direct_bound(const ModeEigenvalues& modes, const Hierarchy& h, const CyclePlan& plan);
BoundReport inequality_bound(const ModeEigenvalues& modes, const Hierarchy& h,
                             const CyclePlan& plan);

// Both of the above from one pass over the modes.
std::pair<BoundReport, BoundReport> norm_bounds(const ModeEigenvalues& modes, const Hierarchy& h,
                                                const CyclePlan& plan);

// Closed-form column and row sums for one mode. Supported: two levels with any r;
// V-cycles with three levels (r = 0, 1) and four levels (r = 0), coarse m >= 2.
bool analytic_supported(const Hierarchy& h, const CyclePlan& plan);
ColRowSums analytic_mode(const std::vector<complex>& lambdas, const Hierarchy& h,
                         const CyclePlan& plan);
BoundReport analytic_bound(const ModeEigenvalues& modes, const Hierarchy& h,
                           const CyclePlan& plan);

// Approximate column/row sums for V-cycles with F (r = 0) or FCF (r = 1).
bool approx_supported(const Hierarchy& h, const CyclePlan& plan);
ColRowSums approx_mode(const std::vector<complex>& lambdas, const Hierarchy& h,
                       const CyclePlan& plan);
BoundReport approx_factor(const ModeEigenvalues& modes, const Hierarchy& h, const CyclePlan& plan);

// Level-0 residual bound from a coarse-level value: sqrt(m0) * delta_value.
double fine_grid_bound(double delta_value, int m0);

// Indices of modes whose eigenvalue columns are unique up to complex
// conjugation; rep[k] is the first mode with the same (or conjugate) column.
std::vector<int> mode_representatives(const ModeEigenvalues& modes);

} // namespace mgrit
