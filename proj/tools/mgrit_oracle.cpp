// mgrit-oracle: convergence bounds and simulated convergence factors for MGRIT.

#include "mgrit/commands.hpp"
#include "mgrit/config.hpp"
#include "mgrit/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

struct Options {
    std::string config;
    std::string paper;
    std::string out;
    bool allow_divergence = false;
    // Flags that override config values, keyed like the config file.
    std::map<std::string, std::string> values;
};

void add_common(CLI::App* cmd, Options& opt)
{
    cmd->add_option("--config", opt.config, "key = value configuration file");
    cmd->add_option("--paper", opt.paper, "preset: isotropic, anisotropic or wave");
    cmd->add_option("--out", opt.out, "output file (default: stdout)");

    auto value = [&](const char* flag, const char* key, const char* help) {
        cmd->add_option_function<std::string>(
            flag, [&opt, key](const std::string& v) { opt.values[key] = v; }, help);
    };
    value("--scheme", "scheme", "L-SDIRK1..4 or A-SDIRK2..4");
    value("--levels", "levels", "number of time levels (compare sweeps 2..levels)");
    value("--cycle", "cycle", "V or F");
    value("--r", "r", "CF sweeps after the first F sweep (0: F, 1: FCF)");
    value("--N0", "N0", "fine-grid time points");
    value("--m", "m", "coarsening factor, or comma list per level");
    value("--seed", "seed", "random seed for the simulator");
    value("--tol", "tol", "absolute residual tolerance");
    value("--max-iter", "max_iter", "maximum simulator cycles");
    value("--spectrum", "spectrum", "spectrum file ('re,im' per line)");
    value("--estimators", "estimators", "comma list or 'all'");
}

mgrit::RunConfig resolve(const Options& opt)
{
    mgrit::KeyValues base;
    mgrit::KeyValues given;
    if (!opt.config.empty()) given = mgrit::load_config_file(opt.config);
    if (!opt.paper.empty()) given["paper"] = opt.paper;
    for (const auto& [k, v] : opt.values) given[k] = v;
    if (opt.values.count("spectrum") && !opt.values.count("problem")) given["problem"] = "file";
    return mgrit::make_run_config(base, given);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"MGRIT convergence bounds and simulated convergence factors"};
    app.require_subcommand(1);

    Options opt;
    auto* eigs = app.add_subcommand("eigs", "write the spatial spectrum");
    auto* bound = app.add_subcommand("bound", "evaluate bounds for the configured level count");
    auto* simulate = app.add_subcommand("simulate", "run the per-mode MGRIT simulator");
    auto* compare = app.add_subcommand("compare", "bounds and observed factors for 2..levels");
    for (auto* cmd : {eigs, bound, simulate, compare}) add_common(cmd, opt);
    simulate->add_flag("--allow-divergence", opt.allow_divergence,
                       "exit 0 even when the residual does not decrease");

    CLI11_PARSE(app, argc, argv);

    try {
        const mgrit::RunConfig cfg = resolve(opt);
        std::ofstream file;
        if (!opt.out.empty()) {
            file.open(opt.out);
            if (!file) throw mgrit::IoError("cannot write '" + opt.out + "'");
        }
        std::ostream& out = opt.out.empty() ? std::cout : file;

        if (eigs->parsed()) return mgrit::cmd_eigs(cfg, out, std::cerr);
        if (bound->parsed()) return mgrit::cmd_bound(cfg, out, std::cerr);
        if (compare->parsed()) return mgrit::cmd_compare(cfg, out, std::cerr);
        return mgrit::cmd_simulate(cfg, opt.allow_divergence, out, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
