#include "mgrit/bounds.hpp"
#include "mgrit/errors.hpp"
#include "mgrit/propagator.hpp"
#include "mgrit/simulator.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <random>

using namespace mgrit;
using oracle::max_abs_diff;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

namespace {

Vec random_vec(std::mt19937_64& gen, Index n)
{
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    Vec v(n);
    for (Index i = 0; i < n; ++i) v(i) = complex(d(gen), d(gen));
    return v;
}

ModeEigenvalues table(const std::vector<std::vector<complex>>& cols)
{
    Eigen::MatrixXcd lam(cols[0].size(), cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k)
        for (std::size_t l = 0; l < cols[k].size(); ++l) lam(l, k) = cols[k][l];
    return make_mode_eigenvalues(lam);
}

} // namespace

TEST_CASE("residual")
{
    Vec u(3), g(3);
    u << 1.0, 2.0, 3.0;
    g << 1.0, 0.0, 0.0;
    const Vec r = mode_residual(u, g, 0.5);
    CHECK(r(0) == complex(0.0));
    CHECK(r(1) == complex(-1.5));
    CHECK(r(2) == complex(-2.0));
}

TEST_CASE("exact coarse operator solves in one cycle")
{
    std::mt19937_64 gen(59);
    const Hierarchy h = build_hierarchy(33, 4, 2, 1.0);
    for (complex l0 : {complex(0.9), complex(0.2, 0.95), complex(-0.7, 0.1)}) {
        const std::vector<complex> lam{l0, ipow(l0, 4)};
        ModeState s{random_vec(gen, 33), random_vec(gen, 33)};
        const double before = mode_residual(s.u, s.g, l0).norm();
        mode_cycle(s, lam, h, CyclePlan{});
        CHECK(mode_residual(s.u, s.g, l0).norm() <= 1e-13 * before);
    }
}

TEST_CASE("error transition equals the assembled propagator")
{
    std::mt19937_64 gen(61);
    struct Case {
        long N0;
        std::vector<int> m;
        int levels;
    };
    const Case cases[] = {{9, {2}, 2}, {17, {4}, 2}, {17, {2, 2}, 3}, {37, {3, 2}, 3},
                          {33, {2, 2, 2}, 4}, {49, {2, 3, 2}, 4}};
    double worst = 0.0;
    for (const auto& c : cases) {
        const Hierarchy h = build_hierarchy(c.N0, c.m, c.levels, 1.0);
        for (int r = 0; r <= 2; ++r)
            for (auto cyc : {Cycle::V, Cycle::F}) {
                const auto lam = oracle::random_lambdas(gen, c.levels, 0.99);
                const CyclePlan plan{cyc, r};
                const Mat M = oracle::simulated_transition(lam, h, plan);
                const bool c_first = cyc == Cycle::V;
                worst = std::max(worst, max_abs_diff(M, fine_level_action(lam, h, plan)));
                worst = std::max(worst, max_abs_diff(M, oracle::level_error(lam, h, 0, r, cyc, c_first)));
            }
    }
    CHECK(worst < 1e-11);
}

TEST_CASE("forcing does not change the error transition")
{
    std::mt19937_64 gen(67);
    const Hierarchy h = build_hierarchy(33, 2, 3, 1.0);
    const auto lam = oracle::random_lambdas(gen, 3, 0.99);
    const CyclePlan plan{Cycle::F, 1};
    const Vec g = random_vec(gen, 33);
    const Mat A = oracle::time_stepping(lam[0], 33);
    const Vec exact = A.triangularView<Eigen::Lower>().solve(g);

    ModeState s{random_vec(gen, 33), g};
    const Vec e0 = s.u - exact;
    mode_cycle(s, lam, h, plan);
    const Vec e1 = s.u - exact;
    CHECK(max_abs_diff(Vec(fine_level_action(lam, h, plan) * e0), e1) < 1e-12);

    ModeState solved{exact, g};
    mode_cycle(solved, lam, h, plan);
    CHECK(max_abs_diff(solved.u, exact) < 1e-13);
}

TEST_CASE("linearity and zero error")
{
    std::mt19937_64 gen(71);
    const Hierarchy h = build_hierarchy(17, 2, 3, 1.0);
    const auto lam = oracle::random_lambdas(gen, 3, 0.99);
    const CyclePlan plan{Cycle::V, 1};
    const Vec a = random_vec(gen, 17), b = random_vec(gen, 17);
    const Vec zero = Vec::Zero(17);
    ModeState sa{a, zero}, sb{b, zero}, sab{a + complex(2.0, -1.0) * b, zero};
    mode_cycle(sa, lam, h, plan);
    mode_cycle(sb, lam, h, plan);
    mode_cycle(sab, lam, h, plan);
    CHECK(max_abs_diff(sab.u, Vec(sa.u + complex(2.0, -1.0) * sb.u)) < 1e-13);

    ModeState z{zero, zero};
    for (int i = 0; i < 3; ++i) mode_cycle(z, lam, h, plan);
    CHECK(z.u.cwiseAbs().maxCoeff() == 0.0);

    const ModeEigenvalues modes = table({lam});
    std::vector<ModeState> states{ModeState{zero, zero}};
    const SimTrace t = run_states(states, modes, h, plan, 10, 1e-11);
    CHECK(t.converged);
    CHECK(t.iterations == 0);
    CHECK(t.residual_norms == std::vector<double>{0.0});
}

TEST_CASE("two independent modes")
{
    const Hierarchy h = build_hierarchy(17, 2, 2, 1.0);
    const std::vector<complex> l1{0.8, 0.5}, l2{complex(0.1, 0.6), complex(-0.2, 0.3)};
    std::mt19937_64 gen(73);
    const Vec u1 = random_vec(gen, 17), u2 = random_vec(gen, 17);
    const Vec zero = Vec::Zero(17);
    std::vector<ModeState> both{{u1, zero}, {u2, zero}};
    const SimTrace t = run_states(both, table({l1, l2}), h, CyclePlan{}, 3, 1e-30);
    REQUIRE(t.residual_norms.size() == 4);

    ModeState a{u1, zero}, b{u2, zero};
    for (int i = 0; i < 3; ++i) {
        mode_cycle(a, l1, h, CyclePlan{});
        mode_cycle(b, l2, h, CyclePlan{});
    }
    CHECK(max_abs_diff(both[0].u, a.u) == 0.0);
    CHECK(max_abs_diff(both[1].u, b.u) == 0.0);
    const double expect = std::hypot(mode_residual(a.u, zero, l1[0]).norm(),
                                     mode_residual(b.u, zero, l2[0]).norm());
    CHECK(t.residual_norms.back() == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("residual ratios stay below the norm bound")
{
    std::mt19937_64 gen(79);
    const Hierarchy h = build_hierarchy(65, 2, 3, 1.0);
    std::vector<std::vector<complex>> cols;
    for (int k = 0; k < 6; ++k) {
        const double x = -0.5 * (k + 1);
        cols.push_back({1.0 / (1.0 - x / 64), 1.0 / (1.0 - x / 32), 1.0 / (1.0 - x / 16)});
    }
    const ModeEigenvalues modes = table(cols);
    for (auto plan : {CyclePlan{Cycle::V, 0}, CyclePlan{Cycle::V, 1}, CyclePlan{Cycle::F, 0}}) {
        const double bound = direct_bound(modes, h, plan).value;
        const SimTrace t = run(modes, h, plan, 5, 40, 1e-11);
        CHECK(t.converged);
        CHECK(worst_factor(t) <= bound + 1e-8);
    }
}

TEST_CASE("worst factor")
{
    CHECK(worst_factor({1.0, 0.5, 0.2}, 1e-11) == 0.5);
    CHECK(worst_factor({1.0, 0.1, 0.09}, 1e-11) == doctest::Approx(0.9).epsilon(1e-15));
    std::vector<double> geo{1.0};
    for (int i = 0; i < 20; ++i) geo.push_back(geo.back() * 0.3);
    CHECK(std::abs(worst_factor(geo, 1e-30) - 0.3) < 1e-15);
    // ratios out of values below 100 tol are ignored
    CHECK(worst_factor({1.0, 0.5, 1e-10, 5e-11}, 1e-11) == 0.5);
    CHECK_THROWS_AS(worst_factor({1.0}, 1e-11), TooShort);
    CHECK_THROWS_AS(worst_factor({1e-12, 1e-13}, 1e-11), TooShort);
}

TEST_CASE("trace divergence flag")
{
    SimTrace t;
    t.residual_norms = {1.0, 2.0, 4.0};
    CHECK(t.diverged());
    t.residual_norms = {1.0, 0.5};
    CHECK_FALSE(t.diverged());
    t.residual_norms = {1.0, std::nan("")};
    CHECK(t.diverged());
    t.residual_norms = {1.0, 2.0, 1e-12};
    t.tol = 1e-11;
    t.converged = true;
    CHECK(t.diverged());
    t.residual_norms = {1.0, 1e-10, 2e-10};
    CHECK_FALSE(t.diverged());
}

TEST_CASE("growing residuals are flagged")
{
    const Hierarchy h = build_hierarchy(65, 2, 2, 1.0);
    const ModeEigenvalues modes = table({{complex(1.0, 0.0), complex(-3.0, 0.0)}});
    // nilpotent, so only the first few cycles can grow
    const SimTrace t = run(modes, h, CyclePlan{}, 1, 10, 1e-11);
    CHECK_FALSE(t.converged);
    CHECK(t.diverged());
    CHECK(worst_factor(t) > 1.0);
}

TEST_CASE("runs are reproducible")
{
    std::mt19937_64 gen(83);
    const Hierarchy h = build_hierarchy(33, 2, 3, 1.0);
    std::vector<std::vector<complex>> cols;
    for (int k = 0; k < 10; ++k) cols.push_back(oracle::random_lambdas(gen, 3, 0.95));
    const ModeEigenvalues modes = table(cols);
    const CyclePlan plan{Cycle::F, 1};

    setenv("MGRIT_ORACLE_THREADS", "1", 1);
    const SimTrace a = run(modes, h, plan, 42, 15, 1e-11);
    setenv("MGRIT_ORACLE_THREADS", "3", 1);
    const SimTrace b = run(modes, h, plan, 42, 15, 1e-11);
    unsetenv("MGRIT_ORACLE_THREADS");
    CHECK(a.residual_norms == b.residual_norms);
    CHECK(a.seed == 42);

    const SimTrace c = run(modes, h, plan, 43, 15, 1e-11);
    CHECK(c.residual_norms != a.residual_norms);
}

TEST_CASE("simulator argument checks")
{
    const Hierarchy h = build_hierarchy(9, 2, 2, 1.0);
    const ModeEigenvalues modes = table({{0.5, 0.2}});
    ModeState s{Vec::Zero(8), Vec::Zero(9)};
    CHECK_THROWS_AS(mode_cycle(s, {0.5, 0.2}, h, CyclePlan{}), ArgumentError);
    CHECK_THROWS_AS(run(modes, h, CyclePlan{}, 1, 0, 1e-11), ArgumentError);
    CHECK_THROWS_AS(run(modes, h, CyclePlan{}, 1, 5, 0.0), ArgumentError);
    std::vector<ModeState> none;
    CHECK_THROWS_AS(run_states(none, modes, h, CyclePlan{}, 5, 1e-11), ArgumentError);
}
