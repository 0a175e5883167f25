#pragma once

#include "mgrit/errors.hpp"
#include "mgrit/hierarchy.hpp"
#include "mgrit/types.hpp"

#include <string>
#include <vector>

namespace mgrit {

// Dense operators of one time level for a single spatial mode with time-stepper
// eigenvalue lambda. N time points, coarsening m, Nc = (N-1)/m + 1 C-points.
template <typename Scalar>
struct LevelBlocks {
    Matrix<Scalar> A;     // N x N, unit diagonal, -lambda on the subdiagonal
    Matrix<Scalar> A_inv; // N x N, entries lambda^(i-j) for i >= j
    Matrix<Scalar> R;     // Nc x N ideal restriction
    Matrix<Scalar> P;     // N x Nc ideal interpolation
    Matrix<Scalar> R_I;   // Nc x N injection
    Matrix<Scalar> RAP;   // Nc x Nc, unit diagonal, -lambda^m on the subdiagonal
};

template <typename Scalar>
LevelBlocks<Scalar> level_blocks(Scalar lambda, Index N, int m)
{
    if (N < 2) throw ArgumentError("level needs at least 2 time points");
    if (m < 1) throw ArgumentError("coarsening factor must be >= 1");
    if ((N - 1) % m != 0)
        throw DivisibilityError("N-1 = " + std::to_string(N - 1) + " not divisible by m = " +
                                std::to_string(m));
    const Index Nc = (N - 1) / m + 1;
    LevelBlocks<Scalar> b;

    b.A = Matrix<Scalar>::Identity(N, N);
    for (Index i = 1; i < N; ++i) b.A(i, i - 1) = -lambda;

    b.A_inv = Matrix<Scalar>::Zero(N, N);
    for (Index j = 0; j < N; ++j)
        for (Index i = j; i < N; ++i) b.A_inv(i, j) = ipow(lambda, i - j);

    b.R = Matrix<Scalar>::Zero(Nc, N);
    b.R_I = Matrix<Scalar>::Zero(Nc, N);
    b.P = Matrix<Scalar>::Zero(N, Nc);
    for (Index q = 0; q < Nc; ++q) {
        const Index c = q * m;
        b.R_I(q, c) = Scalar(1);
        b.R(q, c) = Scalar(1);
        if (q > 0)
            for (Index d = 1; d < m; ++d) b.R(q, c - d) = ipow(lambda, d);
        if (q + 1 < Nc)
            for (Index d = 0; d < m; ++d) b.P(c + d, q) = ipow(lambda, d);
        else
            b.P(c, q) = Scalar(1);
    }

    b.RAP = Matrix<Scalar>::Identity(Nc, Nc);
    const Scalar mu = ipow(lambda, m);
    for (Index q = 1; q < Nc; ++q) b.RAP(q, q - 1) = -mu;
    return b;
}

// Two-level coarse-level propagator with r CF sweeps, written out entrywise.
template <typename Scalar>
Matrix<Scalar> two_level_closed_form(Scalar lambda0, Scalar lambda1, Index N1, int m0, int r)
{
    if (N1 < 2 || r < 0) throw ArgumentError("two_level_closed_form needs N1 >= 2, r >= 0");
    const Scalar mu = ipow(lambda0, m0);
    const Scalar scale = (mu - lambda1) * ipow(mu, r);
    Matrix<Scalar> E = Matrix<Scalar>::Zero(N1, N1);
    for (Index j = 0; j < N1; ++j)
        for (Index i = j + r + 1; i < N1; ++i) E(i, j) = ipow(lambda1, i - j - 1 - r) * scale;
    return E;
}

namespace detail {

// Lower triangular Toeplitz A_c^{-1} * RAP: unit diagonal and
// lc^(i-j-1) * (lc - mu) below it.
template <typename Scalar>
Matrix<Scalar> inv_times_rap(Scalar lc, Scalar mu, Index n)
{
    Vector<Scalar> col(n);
    col(0) = Scalar(1);
    Scalar p(1);
    for (Index d = 1; d < n; ++d) {
        col(d) = p * (lc - mu);
        p *= lc;
    }
    Matrix<Scalar> X = Matrix<Scalar>::Zero(n, n);
    for (Index j = 0; j < n; ++j) X.col(j).tail(n - j) = col.head(n - j);
    return X;
}

// E * A_c^{-1} * RAP in O(n^2), using column recurrences for both factors.
template <typename Scalar>
Matrix<Scalar> times_inv_rap(const Matrix<Scalar>& E, Scalar lc, Scalar mu)
{
    const Index n = E.cols();
    Matrix<Scalar> Y(E.rows(), n);
    Y.col(n - 1) = E.col(n - 1);
    for (Index j = n - 2; j >= 0; --j) Y.col(j) = E.col(j) + lc * Y.col(j + 1);
    for (Index j = 0; j + 1 < n; ++j) Y.col(j) -= mu * Y.col(j + 1);
    return Y;
}

// M * (I - RAP): column j becomes mu * M(:, j+1).
template <typename Scalar>
Matrix<Scalar> times_shift(const Matrix<Scalar>& M, Scalar mu)
{
    const Index n = M.cols();
    Matrix<Scalar> out(M.rows(), n);
    if (n > 1) out.leftCols(n - 1) = mu * M.rightCols(n - 1);
    out.col(n - 1).setZero();
    return out;
}

// Level propagator P * core * R_I, optionally followed by (I - A) on the right.
// core is Nc x Nc; the result is N x N.
template <typename Scalar>
Matrix<Scalar> expand(const Matrix<Scalar>& core, Scalar lambda, int m, Index N, bool c_first)
{
    const Index Nc = core.rows();
    std::vector<Scalar> pw(m);
    for (int d = 0; d < m; ++d) pw[d] = ipow(lambda, d);
    Matrix<Scalar> out = Matrix<Scalar>::Zero(N, N);
    for (Index q = 0; q < Nc; ++q) {
        const Index col = c_first ? q * m - 1 : q * m;
        if (col < 0) continue;
        const Scalar w = c_first ? lambda : Scalar(1);
        for (Index i = 0; i < N; ++i) out(i, col) = w * pw[i % m] * core(i / m, q);
    }
    return out;
}

// (P * core * R_I) * W without forming the level propagator.
template <typename Scalar>
Matrix<Scalar> expand_times(const Matrix<Scalar>& core, Scalar lambda, int m,
                            const Matrix<Scalar>& W)
{
    const Index N = W.rows();
    const Index Nc = core.rows();
    Matrix<Scalar> picked(Nc, W.cols());
    for (Index q = 0; q < Nc; ++q) picked.row(q) = W.row(q * m);
    const Matrix<Scalar> Z = core * picked;
    std::vector<Scalar> pw(m);
    for (int d = 0; d < m; ++d) pw[d] = ipow(lambda, d);
    Matrix<Scalar> out(N, W.cols());
    for (Index i = 0; i < N; ++i) out.row(i) = pw[i % m] * Z.row(i / m);
    return out;
}

template <typename Scalar>
void check_inputs(const std::vector<Scalar>& lambdas, const Hierarchy& h, int r)
{
    if (static_cast<int>(lambdas.size()) != h.n_levels)
        throw ArgumentError("expected " + std::to_string(h.n_levels) + " eigenvalues, got " +
                            std::to_string(lambdas.size()));
    if (r < 0) throw ArgumentError("r must be >= 0");
    for (int l = 0; l + 1 < h.n_levels; ++l)
        if ((h.N[l] - 1) % h.m[l] != 0 || (h.N[l] - 1) / h.m[l] + 1 != h.N[l + 1])
            throw DivisibilityError("inconsistent hierarchy at level " + std::to_string(l));
}

// Cores D_l (size N_{l+1}) of the V-cycle for every level l < n-1.
//   D_l = (I - B_{l+1} RAP_l) (I - RAP_l)^r'
// with B_{l+1} RAP_l = (I - E_{l+1}) A_{l+1}^{-1} RAP_l and E at the coarsest level zero.
// When c_first is set, levels l >= 1 relax with r sweeps of C then F (no leading
// F sweep), so their propagator is P D R_I (I - A) with r' = r - 1.
template <typename Scalar>
std::vector<Matrix<Scalar>> v_cycle_cores(const std::vector<Scalar>& lam, const Hierarchy& h,
                                          int r, bool c_first)
{
    const int n = h.n_levels;
    std::vector<Matrix<Scalar>> core(n - 1);
    for (int l = n - 2; l >= 0; --l) {
        const Index Nc = h.N[l + 1];
        const Scalar mu = ipow(lam[l], h.m[l]);
        const Scalar lc = lam[l + 1];
        Matrix<Scalar> G = Matrix<Scalar>::Identity(Nc, Nc) - inv_times_rap(lc, mu, Nc);
        if (l + 1 < n - 1) {
            const bool tail = c_first && r >= 1;
            const Matrix<Scalar> Ec = expand(core[l + 1], lc, h.m[l + 1], Nc, tail);
            G += times_inv_rap(Ec, lc, mu);
        }
        const int sweeps = (c_first && l > 0 && r >= 1) ? r - 1 : r;
        for (int s = 0; s < sweeps; ++s) G = times_shift(G, mu);
        core[l] = std::move(G);
    }
    return core;
}

} // namespace detail

// Coarse-level (C-points of level 0) error propagator of one V-cycle.
// Level 0 relaxes with F followed by r CF sweeps; coarser levels use r sweeps of
// C-then-F relaxation (plain F when r = 0).
template <typename Scalar>
Matrix<Scalar> v_cycle_delta(const std::vector<Scalar>& lambdas, const Hierarchy& h, int r)
{
    detail::check_inputs(lambdas, h, r);
    return detail::v_cycle_cores(lambdas, h, r, true)[0];
}

// Coarse-level error propagator of one F-cycle: the coarse solve on each level is
// an F-cycle followed by a V-cycle, with F then r CF sweeps on every level.
template <typename Scalar>
Matrix<Scalar> f_cycle_delta(const std::vector<Scalar>& lambdas, const Hierarchy& h, int r)
{
    detail::check_inputs(lambdas, h, r);
    const int n = h.n_levels;
    const auto vcore = detail::v_cycle_cores(lambdas, h, r, false);
    std::vector<Matrix<Scalar>> fcore(n - 1);
    for (int l = n - 2; l >= 0; --l) {
        const Index Nc = h.N[l + 1];
        const Scalar mu = ipow(lambdas[l], h.m[l]);
        const Scalar lc = lambdas[l + 1];
        Matrix<Scalar> G = Matrix<Scalar>::Identity(Nc, Nc) - detail::inv_times_rap(lc, mu, Nc);
        if (l + 1 < n - 1) {
            const int mc = h.m[l + 1];
            const Matrix<Scalar> EF = detail::expand(fcore[l + 1], lc, mc, Nc, false);
            G += detail::expand_times(vcore[l + 1], lc, mc, detail::times_inv_rap(EF, lc, mu));
        }
        for (int s = 0; s < r; ++s) G = detail::times_shift(G, mu);
        fcore[l] = std::move(G);
    }
    return fcore[0];
}

template <typename Scalar>
Matrix<Scalar> delta_propagator(const std::vector<Scalar>& lambdas, const Hierarchy& h,
                                const CyclePlan& plan)
{
    return plan.cycle == Cycle::V ? v_cycle_delta(lambdas, h, plan.r)
                                  : f_cycle_delta(lambdas, h, plan.r);
}

inline constexpr Index fine_level_size_limit = 4096;

// Level-0 error propagator P_0 E^Delta R_I0.
template <typename Scalar>
Matrix<Scalar> fine_level_action(const std::vector<Scalar>& lambdas, const Hierarchy& h,
                                 const CyclePlan& plan)
{
    if (h.N[0] > fine_level_size_limit)
        throw SizeLimit("fine_level_action limited to N0 <= " +
                        std::to_string(fine_level_size_limit));
    return detail::expand(delta_propagator(lambdas, h, plan), lambdas[0], h.m[0], h.N[0], false);
}

} // namespace mgrit
