#include "mgrit/config.hpp"

#include "mgrit/errors.hpp"
#include "mgrit/rk.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace mgrit {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::string canonical_problem(const std::string& name)
{
    if (name == "isotropic" || name == "isotropic-diffusion") return "isotropic";
    if (name == "anisotropic" || name == "anisotropic-diffusion") return "anisotropic";
    if (name == "wave") return "wave";
    if (name == "file") return "file";
    throw ArgumentError("unknown problem '" + name +
                        "' (expected isotropic, anisotropic, wave or file)");
}

bool is_diffusion(const std::string& problem)
{
    return problem == "isotropic" || problem == "anisotropic";
}

// Whether a problem-specific key applies to the given problem kind.
bool applies(const std::string& key, const std::string& problem)
{
    if (key == "k1" || key == "k2") return is_diffusion(problem);
    if (key == "c") return problem == "wave";
    if (key == "nx") return problem != "file";
    if (key == "spectrum") return problem == "file";
    return true;
}

double to_double(const std::string& key, const std::string& value)
{
    double out = 0.0;
    const char* begin = value.data();
    const char* end = value.data() + value.size();
    if (begin != end && *begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, out);
    if (ec != std::errc() || ptr != end || !std::isfinite(out))
        throw ArgumentError("key '" + key + "': expected a number, got '" + value + "'");
    return out;
}

long to_long(const std::string& key, const std::string& value)
{
    long out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc() || ptr != value.data() + value.size())
        throw ArgumentError("key '" + key + "': expected an integer, got '" + value + "'");
    return out;
}

std::vector<std::string> split_list(const std::string& value)
{
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

const std::vector<std::string>& config_keys()
{
    static const std::vector<std::string> keys = {
        "paper", "problem", "k1",      "k2",         "c",     "nx",   "dx",
        "spectrum", "scheme", "N0",    "levels",     "m",     "t_final", "cycle",
        "r",     "estimators", "seed", "max_iter",   "tol"};
    return keys;
}

KeyValues parse_config_text(const std::string& text)
{
    KeyValues kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    const auto& keys = config_keys();
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ParseError("expected 'key = value'", lineno);
        const std::string key = trim(t.substr(0, eq));
        const std::string value = trim(t.substr(eq + 1));
        if (key.empty() || value.empty()) throw ParseError("expected 'key = value'", lineno);
        if (std::find(keys.begin(), keys.end(), key) == keys.end())
            throw UnknownKey("line " + std::to_string(lineno) + ": unknown key '" + key + "'", key);
        kv[key] = value;
    }
    return kv;
}

KeyValues load_config_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

KeyValues named_preset(const std::string& name)
{
    const std::string problem = canonical_problem(name);
    if (problem == "file") throw ArgumentError("no preset named 'file'");
    std::ostringstream num;
    num.imbue(std::locale::classic());
    num.precision(17);
    auto str = [&](double v) {
        num.str("");
        num << v;
        return num.str();
    };
    KeyValues kv = {{"problem", problem}, {"nx", "9"},       {"dx", str(two_pi / 10.0)},
                    {"N0", "1025"},       {"m", "2"},        {"t_final", str(two_pi)},
                    {"tol", "1e-11"}};
    if (problem == "isotropic") {
        kv["k1"] = "10";
        kv["k2"] = "10";
    } else if (problem == "anisotropic") {
        kv["k1"] = "0.5";
        kv["k2"] = "0.001";
    } else {
        kv["c"] = str(std::sqrt(10.0));
    }
    return kv;
}

RunConfig make_run_config(const KeyValues& base_in, const KeyValues& explicit_values)
{
    KeyValues base = base_in;
    if (auto it = explicit_values.find("paper"); it != explicit_values.end())
        for (const auto& [k, v] : named_preset(it->second)) base[k] = v;

    KeyValues merged = base;
    for (const auto& [k, v] : explicit_values) merged[k] = v;

    auto has = [&](const std::string& k) { return merged.count(k) > 0; };
    auto get = [&](const std::string& k) { return merged.at(k); };

    RunConfig cfg;
    if (has("problem"))
        cfg.problem = canonical_problem(get("problem"));
    else if (has("spectrum"))
        cfg.problem = "file";
    else
        throw MissingKey("missing required key 'problem' (or --paper / --spectrum)", "problem");

    for (const auto& [k, v] : explicit_values)
        if (!applies(k, cfg.problem))
            throw ConflictingProblemParams("key '" + k + "' does not apply to problem '" +
                                           cfg.problem + "'");
    for (const auto& [k, v] : base)
        if (!applies(k, cfg.problem) && !explicit_values.count(k)) merged.erase(k);

    if (cfg.problem == "isotropic") {
        cfg.k1 = has("k1") ? to_double("k1", get("k1")) : 10.0;
        cfg.k2 = has("k2") ? to_double("k2", get("k2")) : 10.0;
    } else if (cfg.problem == "anisotropic") {
        cfg.k1 = has("k1") ? to_double("k1", get("k1")) : 0.5;
        cfg.k2 = has("k2") ? to_double("k2", get("k2")) : 0.001;
    } else if (cfg.problem == "wave") {
        cfg.c = has("c") ? to_double("c", get("c")) : std::sqrt(10.0);
    } else {
        if (!has("spectrum")) throw MissingKey("problem 'file' needs key 'spectrum'", "spectrum");
        cfg.spectrum_path = get("spectrum");
    }
    if (cfg.problem != "file") {
        cfg.nx = has("nx") ? static_cast<int>(to_long("nx", get("nx"))) : 9;
        if (cfg.nx < 1) throw ArgumentError("nx must be >= 1");
    }
    if (has("dx"))
        cfg.dx = to_double("dx", get("dx"));
    else if (cfg.problem != "file")
        cfg.dx = two_pi / (cfg.nx + 1);

    if (!has("scheme")) throw MissingKey("missing required key 'scheme'", "scheme");
    cfg.scheme = builtin_tableau(get("scheme")).id;

    cfg.N0 = has("N0") ? to_long("N0", get("N0")) : 1025;
    cfg.n_levels = has("levels") ? static_cast<int>(to_long("levels", get("levels"))) : 2;
    if (cfg.n_levels < 2) throw ArgumentError("levels must be >= 2");
    const std::vector<std::string> ms = split_list(has("m") ? get("m") : "2");
    if (ms.size() == 1)
        cfg.coarsening.assign(cfg.n_levels - 1, static_cast<int>(to_long("m", ms[0])));
    else
        for (const auto& s : ms) cfg.coarsening.push_back(static_cast<int>(to_long("m", s)));
    cfg.t_final = has("t_final") ? to_double("t_final", get("t_final")) : two_pi;
    cfg.plan.cycle = has("cycle") ? parse_cycle(get("cycle")) : Cycle::V;
    cfg.plan.r = has("r") ? static_cast<int>(to_long("r", get("r"))) : 0;
    if (cfg.plan.r < 0) throw ArgumentError("r must be >= 0");

    const std::string est = has("estimators") ? get("estimators") : "all";
    if (est == "all")
        cfg.estimators = {Estimator::Observed, Estimator::Norm2,  Estimator::Sqrt1Inf,
                          Estimator::Analytic, Estimator::Approx, Estimator::FineGrid};
    else
        for (const auto& s : split_list(est)) cfg.estimators.push_back(parse_estimator(s));

    cfg.seed = has("seed") ? static_cast<std::uint64_t>(to_long("seed", get("seed"))) : 1;
    cfg.max_iter = has("max_iter") ? static_cast<int>(to_long("max_iter", get("max_iter"))) : 100;
    cfg.tol = has("tol") ? to_double("tol", get("tol")) : 1e-11;

    // Validate the ladder early so bad sizes fail at configuration time.
    make_hierarchy(cfg, cfg.n_levels);
    return cfg;
}

Hierarchy make_hierarchy(const RunConfig& cfg, int n_levels)
{
    if (n_levels > cfg.n_levels || n_levels < 2)
        throw ArgumentError("level count " + std::to_string(n_levels) + " outside 2.." +
                            std::to_string(cfg.n_levels));
    return build_hierarchy(cfg.N0,
                           std::vector<int>(cfg.coarsening.begin(),
                                            cfg.coarsening.begin() +
                                                std::min<std::size_t>(n_levels - 1,
                                                                      cfg.coarsening.size())),
                           n_levels, cfg.t_final);
}

SpatialSpectrum make_spectrum(const RunConfig& cfg)
{
    if (cfg.problem == "file") {
        SpatialSpectrum s = load_spectrum(cfg.spectrum_path);
        if (cfg.dx > 0.0) s.dx = cfg.dx;
        return s;
    }
    if (cfg.problem == "wave") return wave_spectrum(cfg.c, cfg.nx, cfg.dx);
    return diffusion_spectrum(cfg.k1, cfg.k2, cfg.nx, cfg.dx);
}

ProblemParams problem_params(const RunConfig& cfg)
{
    ProblemParams p;
    p.kind = cfg.problem == "wave" ? ProblemKind::Wave : ProblemKind::Diffusion;
    p.k1 = cfg.k1;
    p.k2 = cfg.k2;
    p.c = cfg.c;
    return p;
}

} // namespace mgrit
