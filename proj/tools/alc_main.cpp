#include <CLI11.hpp>
#include <iostream>

#include "alc/cli_app.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Axisymmetric phase-field solver around a critically placed catenoid"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "out";
    int jobs = 0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON configuration file");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--jobs", jobs, "parallel independent alpha runs");
    };

    CLI::App* profile = app.add_subcommand("profile", "transition-layer tables and constants");
    CLI::App* place = app.add_subcommand("place", "critical placement, determinant, spectrum");
    CLI::App* residual = app.add_subcommand("residual", "residual convergence-order study");
    CLI::App* solve = app.add_subcommand("solve", "Newton continuation study");
    for (CLI::App* sub : {profile, place, residual, solve}) add_common(sub);

    double tmax_override = 0.0;
    profile->add_option("--tmax", tmax_override, "half-width of the profile table");

    CLI11_PARSE(app, argc, argv);

    alc::RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = alc::load_config(config_path);
        if (jobs > 0) cfg.jobs = jobs;
        if (tmax_override != 0.0) {
            if (!(tmax_override >= 8.0))
                throw alc::ConfigError("tmax must be >= 8");
            cfg.tmax = tmax_override;
        }
    } catch (const alc::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    if (profile->parsed()) return alc::cmd_profile(cfg, out_dir);
    if (place->parsed()) return alc::cmd_place(cfg, out_dir);
    if (residual->parsed()) return alc::cmd_residual(cfg, out_dir);
    if (solve->parsed()) return alc::cmd_solve(cfg, out_dir);
    return 2;
}
