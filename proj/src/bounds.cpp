#include "mgrit/bounds.hpp"

#include "mgrit/errors.hpp"
#include "mgrit/parallel.hpp"
#include "mgrit/propagator.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace mgrit {

namespace {

template <typename Scalar>
void check_finite(const Matrix<Scalar>& M)
{
    if (!M.allFinite()) throw NonFinite("matrix has non-finite entries");
}

template <typename Scalar>
double norm1_impl(const Matrix<Scalar>& M)
{
    check_finite(M);
    return M.size() == 0 ? 0.0 : M.cwiseAbs().colwise().sum().maxCoeff();
}

template <typename Scalar>
double norm_inf_impl(const Matrix<Scalar>& M)
{
    check_finite(M);
    return M.size() == 0 ? 0.0 : M.cwiseAbs().rowwise().sum().maxCoeff();
}

constexpr Index dense_gram_limit = 1024;
constexpr Index lanczos_check_every = 16;

template <typename Scalar>
double spectral_norm_impl(const Matrix<Scalar>& M)
{
    check_finite(M);
    if (M.size() == 0) return 0.0;
    const double scale = M.cwiseAbs().maxCoeff();
    if (scale == 0.0) return 0.0;
    const Matrix<Scalar> S = M / scale;
    const Index n = S.cols();

    if (n <= dense_gram_limit) {
        Matrix<Scalar> gram = Matrix<Scalar>::Zero(n, n);
        gram.template selfadjointView<Eigen::Lower>().rankUpdate(S.adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> es(gram, Eigen::EigenvaluesOnly);
        return scale * std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
    }

    // Lanczos on S^H S from a fixed pseudo-random start.
    std::mt19937_64 gen(0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix<Scalar> V(n, std::min<Index>(n, 64));
    Vector<Scalar> v(n);
    for (Index i = 0; i < n; ++i) {
        if constexpr (Eigen::NumTraits<Scalar>::IsComplex)
            v(i) = Scalar(dist(gen), dist(gen));
        else
            v(i) = dist(gen);
    }
    V.col(0) = v / v.norm();

    std::vector<double> alpha, beta;
    double theta = 0.0;
    for (Index k = 0; k < n; ++k) {
        Vector<Scalar> w = S.adjoint() * (S * V.col(k));
        alpha.push_back(std::real(V.col(k).dot(w)));
        for (int pass = 0; pass < 2; ++pass) {
            const Vector<Scalar> h = V.leftCols(k + 1).adjoint() * w;
            w -= V.leftCols(k + 1) * h;
        }
        const double b = w.norm();

        const bool last = k + 1 == n || b == 0.0;
        if (last || (k + 1) % lanczos_check_every == 0) {
            const Eigen::Map<const Eigen::VectorXd> diag(alpha.data(), k + 1);
            const Eigen::Map<const Eigen::VectorXd> sub(beta.data(), k);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> tri;
            tri.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
            theta = tri.eigenvalues()(k);
            const double residual = b * std::abs(tri.eigenvectors()(k, k));
            if (residual <= 1e-13 * theta || last) break;
        }
        beta.push_back(b);
        if (k + 1 == V.cols()) V.conservativeResize(Eigen::NoChange, std::min<Index>(n, 2 * V.cols()));
        V.col(k + 1) = w / b;
    }
    return scale * std::sqrt(std::max(0.0, theta));
}

constexpr double unstable_threshold = 1.0 + 1e-12;

bool has_unstable(const ModeEigenvalues& modes)
{
    return modes.lambda.size() > 0 && modes.lambda.cwiseAbs().maxCoeff() > unstable_threshold;
}

BoundReport make_report(Estimator est, const std::vector<double>& per_mode,
                        const ModeEigenvalues& modes, const Hierarchy& h, const CyclePlan& plan)
{
    BoundReport rep;
    rep.estimator = est;
    rep.levels = h.n_levels;
    rep.plan = plan;
    rep.value = 0.0;
    rep.argmax_mode = per_mode.empty() ? -1 : 0;
    for (std::size_t k = 0; k < per_mode.size(); ++k)
        if (per_mode[k] > rep.value) {
            rep.value = per_mode[k];
            rep.argmax_mode = static_cast<int>(k);
        }
    rep.diverges = rep.value > 1.0;
    rep.unstable_modes = has_unstable(modes);
    return rep;
}

template <typename Scalar>
std::vector<Scalar> mode_lambdas(const ModeEigenvalues& modes, int k)
{
    std::vector<Scalar> out(modes.n_levels());
    for (int l = 0; l < modes.n_levels(); ++l) out[l] = from_complex<Scalar>(modes.lambda(l, k));
    return out;
}

template <typename Scalar>
MatrixNorms delta_norms(const ModeEigenvalues& modes, int k, const Hierarchy& h,
                        const CyclePlan& plan, bool with_norm2)
{
    const Matrix<Scalar> E = delta_propagator(mode_lambdas<Scalar>(modes, k), h, plan);
    MatrixNorms n;
    n.norm1 = norm1_impl(E);
    n.norminf = norm_inf_impl(E);
    if (with_norm2) n.norm2 = spectral_norm_impl(E);
    return n;
}

// Evaluates fn on one representative per conjugate class and spreads the result.
template <typename T, typename Fn>
std::vector<T> map_modes(const ModeEigenvalues& modes, Fn fn)
{
    const auto rep = mode_representatives(modes);
    std::vector<int> unique;
    for (int k = 0; k < modes.n_modes(); ++k)
        if (rep[k] == k) unique.push_back(k);
    std::vector<T> results(modes.n_modes());
    parallel_for(unique.size(), [&](std::size_t i) {
        const int k = unique[i];
        try {
            results[k] = fn(k);
        } catch (const Error& e) {
            throw Error("mode " + std::to_string(k) + ": " + e.what());
        }
    });
    for (int k = 0; k < modes.n_modes(); ++k) results[k] = results[rep[k]];
    return results;
}

void check_levels(const ModeEigenvalues& modes, const Hierarchy& h)
{
    if (modes.n_levels() != h.n_levels)
        throw ArgumentError("eigenvalue table has " + std::to_string(modes.n_levels()) +
                            " levels, hierarchy has " + std::to_string(h.n_levels));
}

double g(double a, long n) { return geometric_sum(a, n); }

} // namespace

double norm1(const Eigen::MatrixXd& M) { return norm1_impl<double>(M); }
double norm1(const Eigen::MatrixXcd& M) { return norm1_impl<complex>(M); }
double norm_inf(const Eigen::MatrixXd& M) { return norm_inf_impl<double>(M); }
double norm_inf(const Eigen::MatrixXcd& M) { return norm_inf_impl<complex>(M); }
double spectral_norm(const Eigen::MatrixXd& M) { return spectral_norm_impl<double>(M); }
double spectral_norm(const Eigen::MatrixXcd& M) { return spectral_norm_impl<complex>(M); }

MatrixNorms matrix_norms(const Eigen::MatrixXd& M)
{
    return {norm1(M), spectral_norm(M), norm_inf(M)};
}

MatrixNorms matrix_norms(const Eigen::MatrixXcd& M)
{
    return {norm1(M), spectral_norm(M), norm_inf(M)};
}

double geometric_sum(double a, long n)
{
    if (n <= 0) return 0.0;
    if (std::abs(1.0 - a) > 1e-8) return (1.0 - std::pow(a, static_cast<double>(n))) / (1.0 - a);
    double sum = 0.0, p = 1.0;
    for (long i = 0; i < n; ++i) {
        sum += p;
        p *= a;
    }
    return sum;
}

std::string to_string(Estimator e)
{
    switch (e) {
    case Estimator::Observed: return "observed";
    case Estimator::Norm2: return "norm2";
    case Estimator::Sqrt1Inf: return "sqrt1inf";
    case Estimator::Analytic: return "analytic";
    case Estimator::Approx: return "approx";
    case Estimator::FineGrid: return "fine_grid";
    }
    return "?";
}

Estimator parse_estimator(const std::string& s)
{
    for (Estimator e : {Estimator::Observed, Estimator::Norm2, Estimator::Sqrt1Inf,
                        Estimator::Analytic, Estimator::Approx, Estimator::FineGrid})
        if (to_string(e) == s) return e;
    throw ArgumentError("unknown estimator '" + s + "'");
}

double ColRowSums::value() const { return std::sqrt(col * row); }

std::vector<int> mode_representatives(const ModeEigenvalues& modes)
{
    std::map<std::vector<double>, int> first;
    std::vector<int> rep(modes.n_modes());
    for (int k = 0; k < modes.n_modes(); ++k) {
        // Canonical key: conjugate the column if its first nonzero imaginary part is negative.
        double sign = 1.0;
        for (int l = 0; l < modes.n_levels(); ++l)
            if (modes.lambda(l, k).imag() != 0.0) {
                sign = modes.lambda(l, k).imag() < 0.0 ? -1.0 : 1.0;
                break;
            }
        std::vector<double> key;
        for (int l = 0; l < modes.n_levels(); ++l) {
            key.push_back(modes.lambda(l, k).real());
            key.push_back(sign * modes.lambda(l, k).imag());
        }
        rep[k] = first.emplace(std::move(key), k).first->second;
    }
    return rep;
}

ModeNorms mode_norms(const ModeEigenvalues& modes, const Hierarchy& h, const CyclePlan& plan,
                     bool with_norm2)
{
    check_levels(modes, h);
    ModeNorms out;
    if (modes.is_real())
        out.per_mode = map_modes<MatrixNorms>(
            modes, [&](int k) { return delta_norms<double>(modes, k, h, plan, with_norm2); });
    else
        out.per_mode = map_modes<MatrixNorms>(
            modes, [&](int k) { return delta_norms<complex>(modes, k, h, plan, with_norm2); });
    return out;
}

std::pair<BoundReport, BoundReport> norm_bounds(const ModeEigenvalues& modes, const Hierarchy& h,
                                                const CyclePlan& plan)
{
    const ModeNorms mn = mode_norms(modes, h, plan, true);
    std::vector<double> v2, v1i;
    for (const auto& n : mn.per_mode) {
        v2.push_back(n.norm2);
        v1i.push_back(std::sqrt(n.norm1 * n.norminf));
    }
    return {make_report(Estimator::Norm2, v2, modes, h, plan),
            make_report(Estimator::Sqrt1Inf, v1i, modes, h, plan)};
}

BoundReport direct_bound(const ModeEigenvalues& modes, const Hierarchy& h, const CyclePlan& plan)
{
    const ModeNorms mn = mode_norms(modes, h, plan, true);
    std::vector<double> v;
    for (const auto& n : mn.per_mode) v.push_back(n.norm2);
    return make_report(Estimator::Norm2, v, modes, h, plan);
}

BoundReport inequality_bound(const ModeEigenvalues& modes, const Hierarchy& h,
                             const CyclePlan& plan)
{
    const ModeNorms mn = mode_norms(modes, h, plan, false);
    std::vector<double> v;
    for (const auto& n : mn.per_mode) v.push_back(std::sqrt(n.norm1 * n.norminf));
    return make_report(Estimator::Sqrt1Inf, v, modes, h, plan);
}

bool analytic_supported(const Hierarchy& h, const CyclePlan& plan)
{
    if (h.n_levels == 2) return plan.r >= 0;
    if (plan.cycle != Cycle::V) return false;
    for (int l = 1; l + 1 < h.n_levels; ++l)
        if (h.m[l] < 2) return false;
    if (h.n_levels == 3 && plan.r == 0) return true;
    if (h.n_levels == 3 && plan.r == 1) return h.N[2] >= 3;
    if (h.n_levels == 4 && plan.r == 0) return true;
    return false;
}

ColRowSums analytic_mode(const std::vector<complex>& lam, const Hierarchy& h, const CyclePlan& plan)
{
    if (!analytic_supported(h, plan))
        throw Unsupported("no closed form for " + std::to_string(h.n_levels) + " levels, r = " +
                          std::to_string(plan.r) + ", " + to_string(plan.cycle) + "-cycle");
    const int n = h.n_levels;
    std::vector<double> a(n);
    for (int l = 0; l < n; ++l) a[l] = std::abs(lam[l]);
    const complex mu0 = ipow(lam[0], h.m[0]);
    const long N1 = h.N[1];
    ColRowSums out;

    if (n == 2) {
        const int r = plan.r;
        const double v = std::abs(mu0 - lam[1]) * std::pow(a[0], static_cast<double>(r) * h.m[0]) *
                         g(a[1], N1 - 1 - r);
        out.col = out.row = v;
        return out;
    }

    const int m1 = h.m[1];
    const long N2 = h.N[2];
    const double a1 = a[1], a2 = a[2];
    const double d1 = std::abs(lam[1] - mu0);
    const complex mu1 = mu0 * ipow(lam[1], m1 - 1);
    const double d2 = std::abs(lam[2] - mu1);
    const double g1 = g(a1, m1);

    if (n == 3 && plan.r == 0) {
        // Columns of the first CF interval, rows of the last one.
        const double tail = std::pow(a2, N2 - 2) + g(a2, N2 - 2) * g1;
        out.col = d1 * g(a1, m1 - 1) + d2 * tail;
        for (int j = 1; j < m1; ++j)
            out.col = std::max(out.col, d1 * g(a1, j - 1) + std::pow(a1, j - 1) * d1 * tail);
        out.row = g(a2, N2 - 1) * (d1 * g(a1, m1 - 1) + d2);
        for (int j = 1; j < m1; ++j)
            out.row = std::max(out.row, d1 * g(a1, m1 - j) +
                                            std::pow(a1, m1 - j) * g(a2, N2 - 2) *
                                                (d1 * g(a1, m1 - 1) + d2));
        return out;
    }

    if (n == 3 && plan.r == 1) {
        const double p = std::pow(a[0], h.m[0]);
        const double far = std::pow(a2, N2 - 3) + g(a2, N2 - 3) * g1;
        const double near = std::pow(a2, N2 - 2) + g(a2, N2 - 2) * g1;
        // column m1-1 (last F-point), column m1-2, then columns m1-2-t
        out.col = p * d1 * (g(a1, m1 - 1) + std::pow(a1, m1 - 1) * far);
        out.col = std::max(out.col, p * (d1 * g1 + a1 * d2 * far));
        for (int t = 1; t <= m1 - 2; ++t)
            out.col = std::max(out.col, p * d1 * (g(a1, t) + std::pow(a1, t) * near));
        // rows of the last CF interval: offset s from the C-point with coarse index c
        auto row = [&](long c, int s) {
            return p * (d1 * g(a1, s) +
                        std::pow(a1, s) * (d1 + d1 * (g(a1, m1 - 1) - 1.0) * g(a2, c) +
                                           d1 * std::pow(a1, m1 - 1) * g(a2, c - 1) +
                                           a1 * d2 * g(a2, c - 1)));
        };
        out.row = row(N2 - 1, 0);
        for (int s = 1; s < m1; ++s) out.row = std::max(out.row, row(N2 - 2, s));
        return out;
    }

    // four levels, F-relaxation
    const int m2 = h.m[2];
    const long N3 = h.N[3];
    const double a3 = a[3];
    const complex mu2 = mu1 * ipow(lam[2], m2 - 1);
    const double d3 = std::abs(lam[3] - mu2);
    const double T3 = g(a3, N3 - 2) * g(a2, m2) * g1 + std::pow(a3, N3 - 2);
    auto Q2 = [&](int cc) { return g(a2, m2 - cc) * g1 + std::pow(a2, m2 - cc) * T3; };

    out.col = d1 * g(a1, m1 - 1) + d2 * g(a2, m2 - 1) * g1 + d3 * T3;
    for (int c = 0; c < m2; ++c)
        for (int f = 0; f < m1; ++f) {
            double v;
            if (f >= 1)
                v = d1 * g(a1, m1 - 1 - f) + std::pow(a1, m1 - 1 - f) * d1 * Q2(c + 1);
            else if (c >= 1)
                v = d1 * g(a1, m1 - 1) + d2 * Q2(c + 1);
            else
                continue;
            out.col = std::max(out.col, v);
        }

    const long M = static_cast<long>(m1) * m2;
    out.row = 0.0;
    for (long i = N1 - M; i < N1; ++i) {
        const long i2 = (i / m1) * m1;
        const long cp = i2 / m1;
        const long c3 = (cp / m2) * m2;
        const long K = c3 / m2;
        const double coarse_g = g(a2, cp - c3);
        const double coarse_p = std::pow(a2, cp - c3);
        const double v =
            d1 * g(a1, i - i2) +
            std::pow(a1, i - i2) *
                (d2 * coarse_g + coarse_p * g(a3, K) * (d3 + d2 * g(a2, m2 - 1)) +
                 d1 * g(a1, m1 - 1) * (coarse_g + coarse_p * g(a3, K) * g(a2, m2)));
        out.row = std::max(out.row, v);
    }
    return out;
}

BoundReport analytic_bound(const ModeEigenvalues& modes, const Hierarchy& h, const CyclePlan& plan)
{
    check_levels(modes, h);
    if (!analytic_supported(h, plan))
        throw Unsupported("no closed form for " + std::to_string(h.n_levels) + " levels, r = " +
                          std::to_string(plan.r) + ", " + to_string(plan.cycle) + "-cycle");
    std::vector<double> v(modes.n_modes());
    for (int k = 0; k < modes.n_modes(); ++k) v[k] = analytic_mode(modes.mode(k), h, plan).value();
    return make_report(Estimator::Analytic, v, modes, h, plan);
}

bool approx_supported(const Hierarchy&, const CyclePlan& plan)
{
    return plan.cycle == Cycle::V && (plan.r == 0 || plan.r == 1);
}

ColRowSums approx_mode(const std::vector<complex>& lam, const Hierarchy& h, const CyclePlan& plan)
{
    if (!approx_supported(h, plan))
        throw Unsupported("approximation needs a V-cycle with r in {0, 1}");
    const int n = h.n_levels;
    std::vector<double> a(n);
    for (int l = 0; l < n; ++l) a[l] = std::abs(lam[l]);
    const complex mu0 = ipow(lam[0], h.m[0]);

    // mt = [m_0, ..., m_{n-2}, N_{n-1} - 1]
    std::vector<long> mt(h.m.begin(), h.m.end());
    mt.push_back(h.N[n - 1] - 1);

    // coef[l] = |lambda_l - lambda_0^{m_0} prod_{p=1}^{l-1} lambda_p^{mt_p - 1}|
    std::vector<double> coef(n, 0.0);
    complex prod = mu0;
    for (int l = 1; l < n; ++l) {
        coef[l] = std::abs(lam[l] - prod);
        prod *= ipow(lam[l], mt[l] - 1);
    }

    ColRowSums out;
    if (plan.r == 0) {
        for (int l = 1; l < n; ++l) {
            double pc = 1.0;
            for (int q = 1; q <= l; ++q) pc *= g(a[q], mt[q] - 1);
            out.col += coef[l] * pc;
            double pr = 1.0;
            for (int q = l; q < n; ++q) pr *= g(a[q], mt[q]);
            out.row += coef[l] * pr;
        }
        if (n > 2) out.col += std::pow(a[n - 1], mt[n - 1] - 1) * coef[n - 1];
        return out;
    }

    const double am0 = std::pow(a[0], h.m[0]);
    const double gN = g(a[n - 1], h.N[n - 1] - 1);
    auto prod_a = [&](int lo, int hi) { // prod_{j=lo}^{hi} a_j
        double p = 1.0;
        for (int j = lo; j <= hi; ++j) p *= a[j];
        return p;
    };
    auto prod_g = [&](int lo, int hi) { // prod_{j=lo}^{hi} g(a_j, m_j)
        double p = 1.0;
        for (int j = lo; j <= hi; ++j) p *= g(a[j], h.m[j]);
        return p;
    };
    const double w = 1.0 / (n - 1);

    if (n > 2) out.col += am0 * coef[1] * g(a[1], h.m[1]);
    double mid = 0.0;
    for (int p = 2; p <= n - 2; ++p) mid += prod_a(1, p - 1) * coef[p] * prod_g(1, p);
    out.col += w * am0 * mid;
    double pm = a[0];
    for (int j = 0; j <= n - 2; ++j) pm *= std::pow(a[j], h.m[j] - 1);
    out.col += w * gN * pm * prod_g(1, n - 2) * coef[1];
    double tail = 0.0;
    for (int p = 2; p <= n - 1; ++p) tail += coef[p];
    out.col += w * gN * am0 * prod_a(1, n - 2) * tail * prod_g(1, n - 2);

    double rs = 0.0;
    for (int p = 1; p <= n - 1; ++p) rs += prod_a(1, p - 1) * coef[p] * prod_g(p, n - 2);
    out.row = am0 * gN * rs;
    return out;
}

BoundReport approx_factor(const ModeEigenvalues& modes, const Hierarchy& h, const CyclePlan& plan)
{
    check_levels(modes, h);
    if (!approx_supported(h, plan))
        throw Unsupported("approximation needs a V-cycle with r in {0, 1}");
    std::vector<double> v(modes.n_modes());
    for (int k = 0; k < modes.n_modes(); ++k) v[k] = approx_mode(modes.mode(k), h, plan).value();
    return make_report(Estimator::Approx, v, modes, h, plan);
}

double fine_grid_bound(double delta_value, int m0)
{
    if (delta_value < 0.0) throw ArgumentError("delta_value must be nonnegative");
    return std::sqrt(static_cast<double>(m0)) * delta_value;
}

} // namespace mgrit
