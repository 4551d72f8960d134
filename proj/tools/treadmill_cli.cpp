#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "treadmill/cli/commands.hpp"

namespace {

using namespace treadmill::cli;

struct Options {
    std::string config_path;
    std::string out_path;
    std::string format;
    std::vector<std::string> overrides;
    double eta_min = 0.0;
    double eta_max = 0.0;
    std::size_t points = 0;
    bool linear = false;
    std::size_t grid_n = 0;
    double r1 = 0.0;
    double V0 = 0.0;
};

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--config", o.config_path, "key = value parameter file");
    cmd->add_option("--set", o.overrides, "override a config key, e.g. --set chem.mu_inf=2.5");
    cmd->add_option("--out", o.out_path, "write output here instead of stdout");
}

void add_format(CLI::App* cmd, Options& o) {
    cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Steady treadmilling of an elastic solid accreting on a rigid sphere"};
    app.require_subcommand(1);
    Options o;

    auto* solve_cmd = app.add_subcommand("solve", "solve for the treadmilling state");
    add_common(solve_cmd, o);
    add_format(solve_cmd, o);

    auto* sweep_cmd = app.add_subcommand("sweep", "sweep the nondimensional bead radius eta");
    add_common(sweep_cmd, o);
    add_format(sweep_cmd, o);
    auto* eta_min_opt = sweep_cmd->add_option("--eta-min", o.eta_min, "smallest eta (default 1e-6)");
    auto* eta_max_opt = sweep_cmd->add_option("--eta-max", o.eta_max, "largest eta (default 1e6)");
    auto* points_opt = sweep_cmd->add_option("--points", o.points, "number of eta values (default 121)");
    sweep_cmd->add_flag("--linear", o.linear, "linear instead of logarithmic eta spacing");

    auto* profiles_cmd = app.add_subcommand("profiles", "stress, stretch, flux and chemical potential profiles");
    add_common(profiles_cmd, o);
    add_format(profiles_cmd, o);
    auto* grid_opt = profiles_cmd->add_option("--grid-n", o.grid_n, "radial samples (default 101)");
    auto* r1_opt = profiles_cmd->add_option("--r1", o.r1, "prescribed outer radius (mechanics-only)");
    auto* v0_opt = profiles_cmd->add_option("--V0", o.V0, "prescribed accretion speed (with --r1)");

    auto* validate_cmd = app.add_subcommand("validate", "check energy assumptions and root uniqueness");
    add_common(validate_cmd, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    RunConfig cfg;
    try {
        if (!o.config_path.empty()) apply_config_file(cfg, o.config_path);
        for (const auto& s : o.overrides) {
            const auto [key, value] = split_assignment(s);
            apply_setting(cfg, key, value);
        }
    } catch (const InputError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return exit_input_error;
    }
    if (*eta_min_opt) cfg.eta_min = o.eta_min;
    if (*eta_max_opt) cfg.eta_max = o.eta_max;
    if (*points_opt) cfg.points = o.points;
    if (o.linear) cfg.linear = true;
    if (*grid_opt) cfg.grid_n = o.grid_n;
    if (*r1_opt) cfg.r1_override = o.r1;
    if (*v0_opt) cfg.V0_override = o.V0;

    std::ofstream file;
    if (!o.out_path.empty()) {
        file.open(o.out_path, std::ios::binary);
        if (!file) {
            std::cerr << "input error: cannot open output file '" << o.out_path << "'\n";
            return exit_input_error;
        }
    }
    std::ostream& out = o.out_path.empty() ? std::cout : file;

    const bool json_default = app.got_subcommand(solve_cmd);
    const Format fmt = o.format.empty() ? (json_default ? Format::json : Format::csv)
                                        : (o.format == "json" ? Format::json : Format::csv);

    if (app.got_subcommand(solve_cmd)) return cmd_solve(cfg, fmt, out, std::cerr);
    if (app.got_subcommand(sweep_cmd)) return cmd_sweep(cfg, fmt, out, std::cerr);
    if (app.got_subcommand(profiles_cmd)) return cmd_profiles(cfg, fmt, out, std::cerr);
    return cmd_validate(cfg, out, std::cerr);
}
