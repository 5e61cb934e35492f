#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "alc/domain.hpp"

namespace alc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Batch-run configuration; parsed from JSON with unknown keys rejected.
struct RunConfig {
    AxisymDomain domain = make_ball(2.1717);
    std::vector<double> alphas = {0.2, 0.1, 0.05};
    int ppl = 8;
    std::vector<int> modes = {0, 1, 2, 3};
    int eig_count = 4;
    double tmax = 12.0;
    double sigma = 1.0;
    bool with_psi1 = true;
    bool with_reduced_h = true;
    double quadrature_tol = 1e-12;
    double newton_tol = 1e-9;
    int newton_max_iter = 25;
    int newton_max_backtracks = 10;
    int jobs = 1;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

// Subcommand drivers; each writes its artifacts under out_dir and returns
// the process exit code (0 ok, 1 numerical failure, 2 config/io error).
int cmd_profile(const RunConfig& cfg, const std::string& out_dir);
int cmd_place(const RunConfig& cfg, const std::string& out_dir);
int cmd_residual(const RunConfig& cfg, const std::string& out_dir);
int cmd_solve(const RunConfig& cfg, const std::string& out_dir);

}  // namespace alc
