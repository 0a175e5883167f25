#include "mgrit/rk.hpp"

#include "mgrit/errors.hpp"
#include "mgrit/spectrum.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

namespace mgrit {

namespace {

std::string upper(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::toupper(ch)); });
    return out;
}

ButcherTableau make(std::string id, std::initializer_list<std::initializer_list<double>> rows,
                    std::initializer_list<double> b, std::initializer_list<double> c)
{
    const int s = static_cast<int>(b.size());
    ButcherTableau tab;
    tab.id = std::move(id);
    tab.A = Eigen::MatrixXd::Zero(s, s);
    int i = 0;
    for (const auto& row : rows) {
        int j = 0;
        for (double v : row) tab.A(i, j++) = v;
        ++i;
    }
    tab.b = Eigen::Map<const Eigen::VectorXd>(std::data(b), s);
    tab.c = Eigen::Map<const Eigen::VectorXd>(std::data(c), s);
    return tab;
}

} // namespace

const std::vector<std::string>& builtin_scheme_ids()
{
    static const std::vector<std::string> ids = {"L-SDIRK1", "L-SDIRK2", "L-SDIRK3", "L-SDIRK4",
                                                 "A-SDIRK2", "A-SDIRK3", "A-SDIRK4"};
    return ids;
}

ButcherTableau builtin_tableau(std::string_view id)
{
    const std::string key = upper(id);
    using std::numbers::pi;
    using std::numbers::sqrt2;
    using std::numbers::sqrt3;

    if (key == "L-SDIRK1") return make("L-SDIRK1", {{1.0}}, {1.0}, {1.0});

    if (key == "L-SDIRK2") {
        const double g = 1.0 / sqrt2;
        return make("L-SDIRK2", {{1.0 - g}, {2.0 * g - 1.0, 1.0 - g}}, {0.5, 0.5},
                    {1.0 - g, g});
    }

    if (key == "L-SDIRK3") {
        // q is the root of x^3 - 3x^2 + 3x/2 - 1/6 in (1/6, 1/2)
        const double q = 1.0 + sqrt2 * std::cos(std::acos(2.0 * sqrt2 / 3.0) / 3.0 - 2.0 * pi / 3.0);
        const double s = (1.0 + q) / 2.0;
        const double r = -(6.0 * q * q - 16.0 * q + 1.0) / 4.0;
        return make("L-SDIRK3", {{q}, {s - q, q}, {r, 1.0 - q - r, q}}, {r, 1.0 - q - r, q},
                    {q, s, 1.0});
    }

    if (key == "L-SDIRK4") {
        return make("L-SDIRK4",
                    {{1.0 / 4},
                     {1.0 / 2, 1.0 / 4},
                     {17.0 / 50, -1.0 / 25, 1.0 / 4},
                     {371.0 / 1360, -137.0 / 2720, 15.0 / 544, 1.0 / 4},
                     {25.0 / 24, -49.0 / 48, 125.0 / 16, -85.0 / 12, 1.0 / 4}},
                    {25.0 / 24, -49.0 / 48, 125.0 / 16, -85.0 / 12, 1.0 / 4},
                    {1.0 / 4, 3.0 / 4, 11.0 / 20, 1.0 / 2, 1.0});
    }

    if (key == "A-SDIRK2")
        return make("A-SDIRK2", {{1.0 / 4}, {1.0 / 2, 1.0 / 4}}, {0.5, 0.5},
                    {1.0 / 4, 3.0 / 4});

    if (key == "A-SDIRK3") {
        const double g = (3.0 + sqrt3) / 6.0;
        return make("A-SDIRK3", {{g}, {1.0 - 2.0 * g, g}}, {0.5, 0.5}, {g, 1.0 - g});
    }

    if (key == "A-SDIRK4") {
        const double q = std::cos(pi / 18.0) / sqrt3 + 0.5;
        const double r = 1.0 / (6.0 * (2.0 * q - 1.0) * (2.0 * q - 1.0));
        return make("A-SDIRK4", {{q}, {0.5 - q, q}, {2.0 * q, 1.0 - 4.0 * q, q}},
                    {r, 1.0 - 2.0 * r, r}, {q, 0.5, 1.0 - q});
    }

    throw UnknownScheme("unknown scheme '" + std::string(id) + "'");
}

complex stability_value(complex z, const ButcherTableau& tab)
{
    // Forward substitution for (I - zA) x = 1.
    const int s = tab.stages();
    std::vector<complex> x(s);
    complex acc = 0.0;
    for (int i = 0; i < s; ++i) {
        const complex diag = 1.0 - z * tab.A(i, i);
        if (std::abs(diag) < 1e-300)
            throw SingularStage("singular stage " + std::to_string(i) + " of " + tab.id);
        complex rhs = 1.0;
        for (int j = 0; j < i; ++j) rhs += z * tab.A(i, j) * x[j];
        x[i] = rhs / diag;
        acc += tab.b(i) * x[i];
    }
    return 1.0 + z * acc;
}

std::vector<complex> ModeEigenvalues::mode(int k) const
{
    std::vector<complex> out(lambda.rows());
    for (Index l = 0; l < lambda.rows(); ++l) out[l] = lambda(l, k);
    return out;
}

ModeEigenvalues make_mode_eigenvalues(Eigen::MatrixXcd lambda)
{
    ModeEigenvalues me;
    me.lambda = std::move(lambda);
    double amax = 0.0;
    for (Index k = 0; k < me.lambda.cols(); ++k)
        for (Index l = 0; l < me.lambda.rows(); ++l) {
            const double a = std::abs(me.lambda(l, k));
            amax = std::max(amax, a);
            if (a >= 1.0) me.unstable.emplace_back(static_cast<int>(l), static_cast<int>(k));
        }
    me.strongly_stable = amax < 1.0;
    return me;
}

ModeEigenvalues level_lambda_table(const SpatialSpectrum& spectrum, const Hierarchy& h,
                                   const ButcherTableau& tab)
{
    if (spectrum.xi.empty()) throw ArgumentError("empty spectrum");
    const Index nk = static_cast<Index>(spectrum.xi.size());
    Eigen::MatrixXcd lambda(h.n_levels, nk);
    for (Index k = 0; k < nk; ++k)
        for (int l = 0; l < h.n_levels; ++l) {
            try {
                lambda(l, k) = stability_value(h.dt[l] * spectrum.xi[k], tab);
            } catch (const SingularStage& e) {
                throw SingularStage(std::string(e.what()) + " at level " + std::to_string(l) +
                                    ", mode " + std::to_string(k));
            }
        }
    return make_mode_eigenvalues(std::move(lambda));
}

} // namespace mgrit
