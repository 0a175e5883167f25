#include "mgrit/spectrum.hpp"

#include "mgrit/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mgrit {

namespace {

double sin2(int j, int n)
{
    const double s = std::sin(j * std::numbers::pi / (2.0 * (n + 1)));
    return s * s;
}

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

bool parse_double(const std::string& token, double& out)
{
    const std::string t = trim(token);
    if (t.empty()) return false;
    const char* begin = t.data();
    const char* end = t.data() + t.size();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

} // namespace

SpatialSpectrum diffusion_spectrum(double k1, double k2, int n_interior, double dx)
{
    if (!(dx > 0.0)) throw ArgumentError("dx must be positive");
    if (!(k1 > 0.0) || !(k2 >= 0.0)) throw ArgumentError("need k1 > 0 and k2 >= 0");
    if (n_interior < 1) throw ArgumentError("n_interior must be >= 1");

    SpatialSpectrum spec;
    spec.dx = dx;
    spec.label = "diffusion";
    const double s1 = 4.0 * k1 / (dx * dx);
    const double s2 = 4.0 * k2 / (dx * dx);
    for (int j = 1; j <= n_interior; ++j)
        for (int k = 1; k <= n_interior; ++k)
            spec.xi.emplace_back(-s1 * sin2(j, n_interior) - s2 * sin2(k, n_interior), 0.0);
    return spec;
}

SpatialSpectrum wave_spectrum(double c, int n_interior, double dx)
{
    if (!(dx > 0.0) || !(c > 0.0) || n_interior < 1)
        throw ArgumentError("wave spectrum needs c > 0, dx > 0, n_interior >= 1");

    SpatialSpectrum spec;
    spec.dx = dx;
    spec.label = "wave";
    const double s = 4.0 / (dx * dx);
    for (int j = 1; j <= n_interior; ++j)
        for (int k = 1; k <= n_interior; ++k) {
            const double mu = s * (sin2(j, n_interior) + sin2(k, n_interior));
            const double w = c * std::sqrt(mu);
            spec.xi.emplace_back(0.0, w);
            spec.xi.emplace_back(0.0, -w);
        }
    return spec;
}

SpatialSpectrum parse_spectrum(const std::string& text, const std::string& label)
{
    SpatialSpectrum spec;
    spec.label = label;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto comma = t.find(',');
        double re = 0.0, im = 0.0;
        if (comma == std::string::npos || !parse_double(t.substr(0, comma), re) ||
            !parse_double(t.substr(comma + 1), im))
            throw ParseError("expected 're,im', got '" + t + "'", lineno);
        if (!std::isfinite(re) || !std::isfinite(im))
            throw ParseError("non-finite eigenvalue", lineno);
        spec.xi.emplace_back(re, im);
    }
    if (spec.xi.empty()) throw ParseError("no eigenvalues found", lineno);
    return spec;
}

SpatialSpectrum load_spectrum(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open spectrum file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_spectrum(buf.str(), path);
}

std::string format_spectrum(const SpatialSpectrum& spec)
{
    std::ostringstream out;
    out.imbue(std::locale::classic());
    out.precision(17);
    if (!spec.label.empty()) out << "# " << spec.label << '\n';
    for (const complex& z : spec.xi) out << z.real() << ',' << z.imag() << '\n';
    return out.str();
}

void save_spectrum(const SpatialSpectrum& spec, const std::string& path)
{
    std::ofstream out(path);
    if (!out) throw IoError("cannot write spectrum file '" + path + "'");
    out << format_spectrum(spec);
    if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<double> cfl_report(const SpatialSpectrum& spec, const Hierarchy& h,
                               const ProblemParams& params)
{
    if (!spec.dx) throw MissingGridSpacing("spectrum has no grid spacing");
    const double dx = *spec.dx;
    std::vector<double> out;
    for (double dt : h.dt) {
        if (params.kind == ProblemKind::Diffusion)
            out.push_back(dt * (params.k1 + params.k2) / (dx * dx));
        else
            out.push_back(params.c * dt / dx);
    }
    return out;
}

} // namespace mgrit
