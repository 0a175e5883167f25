#include "mgrit/bounds.hpp"
#include "mgrit/errors.hpp"
#include "mgrit/propagator.hpp"
#include "oracles.hpp"

#include <Eigen/SVD>
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

using namespace mgrit;
using Mat = Eigen::MatrixXcd;

namespace {

double svd_norm(const Mat& M)
{
    return Eigen::JacobiSVD<Mat>(M).singularValues()(0);
}

ModeEigenvalues random_table(std::mt19937_64& gen, int levels, int modes, double max_abs)
{
    Eigen::MatrixXcd lam(levels, modes);
    for (int k = 0; k < modes; ++k) {
        const auto col = oracle::random_lambdas(gen, levels, max_abs);
        for (int l = 0; l < levels; ++l) lam(l, k) = col[l];
    }
    return make_mode_eigenvalues(lam);
}

} // namespace

TEST_CASE("matrix norm examples")
{
    Eigen::MatrixXd M(2, 2);
    M << 0, 0, -2.5, 0;
    auto n = matrix_norms(M);
    CHECK(n.norm1 == 2.5);
    CHECK(n.norm2 == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(n.norminf == 2.5);

    n = matrix_norms(Eigen::MatrixXd(Eigen::MatrixXd::Identity(7, 7)));
    CHECK(n.norm1 == 1.0);
    CHECK(n.norm2 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(n.norminf == 1.0);

    CHECK(spectral_norm(Eigen::MatrixXd(Eigen::MatrixXd::Zero(100, 100))) == 0.0);

    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(3, 3);
    bad(1, 0) = std::nan("");
    CHECK_THROWS_AS(norm1(bad), NonFinite);
    CHECK_THROWS_AS(spectral_norm(bad), NonFinite);
}

TEST_CASE("spectral norm against SVD")
{
    std::mt19937_64 gen(31);
    std::normal_distribution<double> nd;
    for (int n : {5, 50, 64, 65, 130, 257}) {
        CAPTURE(n);
        Mat M(n, n);
        for (Index i = 0; i < M.size(); ++i) M(i) = complex(nd(gen), nd(gen));
        const double ref = svd_norm(M);
        CHECK(std::abs(spectral_norm(M) - ref) <= 1e-10 * ref);
        const Eigen::MatrixXd Mr = M.real();
        const double refr = Eigen::JacobiSVD<Eigen::MatrixXd>(Mr).singularValues()(0);
        CHECK(std::abs(spectral_norm(Mr) - refr) <= 1e-10 * refr);

        const auto n1 = norm1(M), ni = norm_inf(M), n2 = spectral_norm(M);
        CHECK(n2 * n2 <= n1 * ni * (1 + 1e-12));
    }
}

TEST_CASE("spectral norm of highly non-normal propagators")
{
    std::mt19937_64 gen(37);
    const Hierarchy h = build_hierarchy(257, 2, 3, 1.0);
    for (int t = 0; t < 4; ++t) {
        auto lam = oracle::random_lambdas(gen, 3, 0.999);
        const Mat E = delta_propagator(lam, h, CyclePlan{Cycle::V, t % 2});
        const double ref = svd_norm(E);
        CHECK(std::abs(spectral_norm(E) - ref) <= 1e-10 * ref);
    }
    // nearly singular spectrum of a real diffusion-type mode
    const std::vector<double> lr{0.9999, 0.9998, 0.9996};
    const Eigen::MatrixXd E = v_cycle_delta(lr, h, 0);
    const double ref = Eigen::JacobiSVD<Eigen::MatrixXd>(E).singularValues()(0);
    CHECK(std::abs(spectral_norm(E) - ref) <= 1e-10 * ref);
}

TEST_CASE("spectral norm of large matrices")
{
    // Above the dense cutoff: compare with a singular value decomposition.
    std::mt19937_64 gen(39);
    std::normal_distribution<double> nd;
    Eigen::MatrixXd M(1100, 1100);
    for (Index i = 0; i < M.size(); ++i) M(i) = nd(gen);
    double ref = Eigen::BDCSVD<Eigen::MatrixXd>(M).singularValues()(0);
    CHECK(std::abs(spectral_norm(M) - ref) <= 1e-10 * ref);

    // Slow diffusion mode: clustered leading singular values.
    const Hierarchy h = build_hierarchy(2049, 2, 2, 1.0);
    const std::vector<double> lam{0.999, 0.998};
    const Eigen::MatrixXd E = v_cycle_delta(lam, h, 0);
    ref = Eigen::BDCSVD<Eigen::MatrixXd>(E).singularValues()(0);
    CHECK(std::abs(spectral_norm(E) - ref) <= 1e-10 * ref);
}

TEST_CASE("geometric sums")
{
    CHECK(geometric_sum(0.5, 3) == 1.75);
    CHECK(geometric_sum(1.0, 5) == 5.0);
    CHECK(geometric_sum(1.0 - 1e-12, 1000) == doctest::Approx(1000).epsilon(1e-6));
    CHECK(geometric_sum(0.3, 0) == 0.0);
    CHECK(geometric_sum(0.3, 1) == 1.0);
    CHECK(geometric_sum(2.0, 10) == 1023.0);
}

TEST_CASE("fine-grid factor")
{
    CHECK(fine_grid_bound(0.5, 4) == 1.0);
    CHECK(fine_grid_bound(0.37, 1) == 0.37);
    CHECK_THROWS_AS(fine_grid_bound(-1.0, 2), ArgumentError);
}

TEST_CASE("estimator names")
{
    for (auto e : {Estimator::Observed, Estimator::Norm2, Estimator::Sqrt1Inf, Estimator::Analytic,
                   Estimator::Approx, Estimator::FineGrid})
        CHECK(parse_estimator(to_string(e)) == e);
    CHECK(to_string(Estimator::FineGrid) == "fine_grid");
    CHECK_THROWS_AS(parse_estimator("norm3"), ArgumentError);
}

TEST_CASE("two-level analytic examples")
{
    const Hierarchy h = build_hierarchy(5, 2, 2, 1.0);
    const std::vector<complex> lam{0.5, 0.2};
    auto s = analytic_mode(lam, h, CyclePlan{Cycle::V, 0});
    CHECK(s.col == doctest::Approx(0.06).epsilon(1e-14));
    CHECK(s.value() == doctest::Approx(0.06).epsilon(1e-14));
    CHECK(s.col == doctest::Approx(norm1(Eigen::MatrixXd(two_level_closed_form(0.5, 0.2, 3, 2, 0)))));
    s = analytic_mode(lam, h, CyclePlan{Cycle::F, 1});
    CHECK(s.value() == doctest::Approx(0.0125).epsilon(1e-14));
}

TEST_CASE("closed-form column and row sums match assembled propagators")
{
    std::mt19937_64 gen(41);
    struct Case {
        long N0;
        std::vector<int> m;
        int levels;
        int r;
    };
    const Case cases[] = {
        {33, {2}, 2, 0},          {33, {4}, 2, 2},          {65, {2, 2}, 3, 0},
        {97, {4, 3}, 3, 0},       {73, {3, 4}, 3, 0},       {65, {2, 2}, 3, 1},
        {145, {3, 4}, 3, 1},      {97, {2, 3}, 3, 1},       {25, {2, 2}, 3, 1},
        {65, {2, 2, 2}, 4, 0},    {193, {2, 3, 4}, 4, 0},   {97, {3, 2, 2}, 4, 0},
    };
    for (const auto& c : cases) {
        const Hierarchy h = build_hierarchy(c.N0, c.m, c.levels, 1.0);
        const CyclePlan plan{Cycle::V, c.r};
        REQUIRE(analytic_supported(h, plan));
        for (int t = 0; t < 5; ++t) {
            CAPTURE(c.N0);
            CAPTURE(c.levels);
            CAPTURE(c.r);
            const auto lam = oracle::random_lambdas(gen, c.levels, 0.99);
            const Mat E = oracle::delta_reference(lam, h, plan);
            const auto s = analytic_mode(lam, h, plan);
            const double n1 = norm1(E), ni = norm_inf(E);
            CHECK(std::abs(s.col - n1) <= 1e-11 * std::max(1.0, n1));
            CHECK(std::abs(s.row - ni) <= 1e-11 * std::max(1.0, ni));
        }
    }
}

TEST_CASE("analytic support")
{
    CHECK(analytic_supported(build_hierarchy(17, 2, 2, 1.0), CyclePlan{Cycle::F, 3}));
    CHECK(analytic_supported(build_hierarchy(17, 2, 3, 1.0), CyclePlan{Cycle::V, 1}));
    CHECK_FALSE(analytic_supported(build_hierarchy(17, 2, 3, 1.0), CyclePlan{Cycle::F, 0}));
    CHECK_FALSE(analytic_supported(build_hierarchy(17, 2, 3, 1.0), CyclePlan{Cycle::V, 2}));
    CHECK_FALSE(analytic_supported(build_hierarchy(17, 2, 4, 1.0), CyclePlan{Cycle::V, 1}));
    CHECK_FALSE(analytic_supported(build_hierarchy(17, 2, 5, 1.0), CyclePlan{Cycle::V, 0}));
    CHECK_FALSE(analytic_supported(build_hierarchy(9, std::vector<int>{2, 1}, 3, 1.0),
                                   CyclePlan{Cycle::V, 0}));
    CHECK_THROWS_AS(analytic_mode(std::vector<complex>(5, 0.5), build_hierarchy(17, 2, 5, 1.0),
                                  CyclePlan{}),
                    Unsupported);
    CHECK(approx_supported(build_hierarchy(17, 2, 5, 1.0), CyclePlan{Cycle::V, 1}));
    CHECK_FALSE(approx_supported(build_hierarchy(17, 2, 5, 1.0), CyclePlan{Cycle::F, 1}));
    CHECK_FALSE(approx_supported(build_hierarchy(17, 2, 5, 1.0), CyclePlan{Cycle::V, 2}));
}

TEST_CASE("approximation is exact-coarse consistent and conjugation invariant")
{
    const Hierarchy h = build_hierarchy(65, 2, 5, 1.0);
    for (int r : {0, 1}) {
        std::vector<complex> lam{complex(0.3, 0.9)};
        for (int l = 0; l < 4; ++l) lam.push_back(ipow(lam.back(), 2));
        CHECK(approx_mode(lam, h, CyclePlan{Cycle::V, r}).value() < 1e-15);

        std::mt19937_64 gen(43 + r);
        const auto z = oracle::random_lambdas(gen, 5, 0.99);
        std::vector<complex> zc;
        for (auto x : z) zc.push_back(std::conj(x));
        const auto a = approx_mode(z, h, CyclePlan{Cycle::V, r});
        const auto b = approx_mode(zc, h, CyclePlan{Cycle::V, r});
        CHECK(a.col == doctest::Approx(b.col).epsilon(1e-14));
        CHECK(a.row == doctest::Approx(b.row).epsilon(1e-14));
        CHECK(a.value() > 0.0);
    }
    CHECK_THROWS_AS(approx_mode(std::vector<complex>(5, 0.5), h, CyclePlan{Cycle::F, 0}),
                    Unsupported);
}

TEST_CASE("norm bounds over modes")
{
    std::mt19937_64 gen(47);
    const Hierarchy h = build_hierarchy(33, 2, 3, 1.0);
    const ModeEigenvalues modes = random_table(gen, 3, 12, 0.99);
    for (auto plan : {CyclePlan{Cycle::V, 0}, CyclePlan{Cycle::V, 1}, CyclePlan{Cycle::F, 1}}) {
        const auto [direct, ineq] = norm_bounds(modes, h, plan);
        const auto d2 = direct_bound(modes, h, plan);
        const auto i2 = inequality_bound(modes, h, plan);
        CHECK(d2.value == direct.value);
        CHECK(i2.value == ineq.value);
        CHECK(ineq.value >= direct.value - 1e-12);
        CHECK(direct.levels == 3);
        CHECK(direct.estimator == Estimator::Norm2);
        CHECK(ineq.estimator == Estimator::Sqrt1Inf);

        // Maximum over modes of the per-mode dense SVD.
        double best = 0.0;
        int arg = -1;
        for (int k = 0; k < modes.n_modes(); ++k) {
            const double v = svd_norm(oracle::delta_reference(modes.mode(k), h, plan));
            if (v > best) {
                best = v;
                arg = k;
            }
        }
        CHECK(std::abs(direct.value - best) <= 1e-10 * best);
        CHECK(direct.argmax_mode == arg);
    }
}

TEST_CASE("conjugate modes share results and ties pick the first index")
{
    Eigen::MatrixXcd lam(2, 4);
    lam << complex(0.5, 0.3), complex(0.5, -0.3), complex(0.2), complex(0.5, 0.3),
        complex(0.1, 0.2), complex(0.1, -0.2), complex(0.1), complex(0.1, 0.2);
    const ModeEigenvalues modes = make_mode_eigenvalues(lam);
    CHECK(mode_representatives(modes) == std::vector<int>{0, 0, 2, 0});
    const Hierarchy h = build_hierarchy(17, 2, 2, 1.0);
    const auto rep = direct_bound(modes, h, CyclePlan{});
    CHECK(rep.argmax_mode == 0);
    const auto per = mode_norms(modes, h, CyclePlan{}, true).per_mode;
    CHECK(per[1].norm2 == per[0].norm2);
    const double ref = svd_norm(oracle::delta_reference(modes.mode(1), h, CyclePlan{}));
    CHECK(std::abs(per[1].norm2 - ref) <= 1e-12 * ref);
}

TEST_CASE("report flags")
{
    const Hierarchy h = build_hierarchy(65, 2, 2, 1.0);
    Eigen::MatrixXcd lam(2, 1);
    lam << complex(0.9), complex(-0.9);
    auto rep = direct_bound(make_mode_eigenvalues(lam), h, CyclePlan{});
    CHECK(rep.value > 1.0);
    CHECK(rep.diverges);
    CHECK_FALSE(rep.unstable_modes);

    lam << complex(0.5), complex(1.01);
    rep = inequality_bound(make_mode_eigenvalues(lam), h, CyclePlan{});
    CHECK(rep.unstable_modes);

    lam << complex(0.5), complex(0.2);
    rep = direct_bound(make_mode_eigenvalues(lam), h, CyclePlan{});
    CHECK_FALSE(rep.diverges);
    CHECK_THROWS_AS(direct_bound(make_mode_eigenvalues(lam), build_hierarchy(65, 2, 3, 1.0),
                                 CyclePlan{}),
                    ArgumentError);
}

TEST_CASE("results do not depend on the worker count")
{
    std::mt19937_64 gen(53);
    const Hierarchy h = build_hierarchy(129, 2, 4, 1.0);
    const ModeEigenvalues modes = random_table(gen, 4, 9, 0.99);
    setenv("MGRIT_ORACLE_THREADS", "1", 1);
    const auto [d1, i1] = norm_bounds(modes, h, CyclePlan{Cycle::F, 1});
    setenv("MGRIT_ORACLE_THREADS", "4", 1);
    const auto [d4, i4] = norm_bounds(modes, h, CyclePlan{Cycle::F, 1});
    unsetenv("MGRIT_ORACLE_THREADS");
    CHECK(d1.value == d4.value);
    CHECK(i1.value == i4.value);
    CHECK(d1.argmax_mode == d4.argmax_mode);
}
