#include "alc/cli_app.hpp"

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include <json.hpp>

#include "alc/approx.hpp"
#include "alc/catenoid.hpp"
#include "alc/jacobi.hpp"
#include "alc/newton_solver.hpp"
#include "alc/profile.hpp"
#include "alc/quadrature.hpp"

namespace alc {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::vector<std::string>& known,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const auto& k : known)
            if (it.key() == k) ok = true;
        if (!ok) throw ConfigError("unknown key '" + it.key() + "' in " + where);
    }
}

AxisymDomain parse_domain(const json& j) {
    reject_unknown(j, {"shape", "R", "a", "b"}, "domain");
    std::string shape = j.value("shape", "ball");
    if (shape == "ball") {
        double R = j.contains("R") ? j["R"].get<double>() : j.value("a", 2.1717);
        if (j.contains("b") && j["b"].get<double>() != R)
            throw ConfigError("ball domain needs equal semi-axes");
        if (!(R > 0.0)) throw ConfigError("domain.R must be positive");
        return make_ball(R);
    }
    if (shape == "ellipsoid") {
        if (!j.contains("a") || !j.contains("b"))
            throw ConfigError("ellipsoid domain needs both semi-axes a and b");
        double a = j["a"].get<double>(), b = j["b"].get<double>();
        if (!(a > 0.0) || !(b > 0.0)) throw ConfigError("semi-axes must be positive");
        return make_ellipsoid(a, b);
    }
    throw ConfigError("domain.shape must be 'ball' or 'ellipsoid'");
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open output file " + path);
    out << text;
}

json domain_json(const AxisymDomain& d) {
    if (d.shape == AxisymDomain::Shape::Ball) return {{"shape", "ball"}, {"R", d.a}};
    return {{"shape", "ellipsoid"}, {"a", d.a}, {"b", d.b}};
}

int guarded(const std::string& what, const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << what << ": config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << what << ": " << e.what() << "\n";
        return 1;
    }
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    reject_unknown(j,
                   {"domain", "alphas", "ppl", "modes", "eig_count", "tmax", "sigma",
                    "with_psi1", "with_reduced_h", "quadrature_tol", "newton_tol", "jobs"},
                   "config");
    RunConfig cfg;
    if (j.contains("domain")) cfg.domain = parse_domain(j["domain"]);
    if (j.contains("alphas")) {
        cfg.alphas = j["alphas"].get<std::vector<double>>();
        if (cfg.alphas.empty()) throw ConfigError("alphas must be nonempty");
        for (double a : cfg.alphas)
            if (!(a > 0.0)) throw ConfigError("alphas must be positive");
    }
    cfg.ppl = j.value("ppl", cfg.ppl);
    if (cfg.ppl < 8) throw ConfigError("ppl must be >= 8");
    if (j.contains("modes")) {
        cfg.modes = j["modes"].get<std::vector<int>>();
        for (int m : cfg.modes)
            if (m < 0) throw ConfigError("modes must be nonnegative");
    }
    cfg.eig_count = j.value("eig_count", cfg.eig_count);
    if (cfg.eig_count < 1) throw ConfigError("eig_count must be >= 1");
    cfg.tmax = j.value("tmax", cfg.tmax);
    if (!(cfg.tmax >= 8.0)) throw ConfigError("tmax must be >= 8");
    cfg.sigma = j.value("sigma", cfg.sigma);
    if (!(cfg.sigma > 0.0 && cfg.sigma < std::sqrt(2.0)))
        throw ConfigError("sigma must lie in (0, sqrt(2))");
    cfg.with_psi1 = j.value("with_psi1", cfg.with_psi1);
    cfg.with_reduced_h = j.value("with_reduced_h", cfg.with_reduced_h);
    cfg.quadrature_tol = j.value("quadrature_tol", cfg.quadrature_tol);
    if (!(cfg.quadrature_tol > 0.0)) throw ConfigError("quadrature_tol must be positive");
    cfg.newton_tol = j.value("newton_tol", cfg.newton_tol);
    if (!(cfg.newton_tol > 0.0)) throw ConfigError("newton_tol must be positive");
    cfg.newton_max_iter = j.value("newton_max_iter", cfg.newton_max_iter);
    if (cfg.newton_max_iter < 1) throw ConfigError("newton_max_iter must be >= 1");
    cfg.newton_max_backtracks = j.value("newton_max_backtracks", cfg.newton_max_backtracks);
    if (cfg.newton_max_backtracks < 0) throw ConfigError("newton_max_backtracks must be >= 0");
    cfg.jobs = j.value("jobs", cfg.jobs);
    if (cfg.jobs < 1) throw ConfigError("jobs must be >= 1");
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

int cmd_profile(const RunConfig& cfg, const std::string& out_dir) {
    return guarded("profile", [&] {
        std::filesystem::create_directories(out_dir);
        ProfileConstants pc = compute_constants(cfg.quadrature_tol);
        Psi1Correction psi = solve_psi1(cfg.tmax, cfg.sigma);

        json out = {{"c0", pc.c0},
                    {"sigma0", pc.sigma0},
                    {"c1", pc.c1},
                    {"quadrature_tol", cfg.quadrature_tol},
                    {"tmax", cfg.tmax},
                    {"sigma", cfg.sigma},
                    {"psi1_ode_residual", psi.ode_residual()}};
        write_text(out_dir + "/constants.json", out.dump(2) + "\n");

        std::ostringstream csv;
        csv << "t,w,wp,psi1,psi1p\n";
        csv.precision(15);
        for (size_t i = 0; i < psi.grid().size(); ++i) {
            double t = psi.grid()[i];
            WValue wv = eval_w(t);
            csv << t << "," << wv.w << "," << wv.wp << "," << psi.samples()[i] << ","
                << psi.samples_d1()[i] << "\n";
        }
        write_text(out_dir + "/profile_table.csv", csv.str());
    });
}

int cmd_place(const RunConfig& cfg, const std::string& out_dir) {
    return guarded("place", [&] {
        std::filesystem::create_directories(out_dir);
        json out;
        out["domain"] = domain_json(cfg.domain);
        try {
            CriticalPlacement cp = critical_placement(cfg.domain);
            double kappa = cp.I * cp.c;
            double det = nondeg_determinant(-cp.y_bar, cp.y_bar, kappa, kappa);
            // The axisymmetric class decides nondegeneracy (mode 0); higher
            // modes carry genuine zero modes from the ambient rotations of
            // symmetric containers and are reported for the record.
            RobinSpectralReport axial =
                spectrum(-cp.y_bar, cp.y_bar, kappa, kappa, {0}, cfg.eig_count);
            RobinSpectralReport rep =
                spectrum(-cp.y_bar, cp.y_bar, kappa, kappa, cfg.modes, cfg.eig_count);
            out["found"] = true;
            out["c"] = cp.c;
            out["y_bar"] = cp.y_bar;
            out["K1"] = cp.K1;
            out["K2"] = cp.K2;
            out["I"] = cp.I;
            out["m1"] = cp.m1;
            out["det"] = det;
            out["orthogonality_residual"] =
                orthogonality_residual(cfg.domain, cp.c, cp.y_bar);
            out["nondegenerate"] = axial.nondegenerate;
            out["min_abs_eigenvalue"] = axial.min_abs_eigenvalue;
            out["morse_index"] = rep.morse_index;
            json modes = json::object();
            for (size_t k = 0; k < rep.modes.size(); ++k)
                modes[std::to_string(rep.modes[k])] = rep.eigenvalues[k];
            out["modes"] = modes;

            // Meridian polylines and a chart table for plotting.
            std::ostringstream mer;
            mer.precision(15);
            mer << "y,r,x3,z1,z2,A_norm_sq\n";
            for (int k = 0; k <= 400; ++k) {
                double y = -cp.y_bar + 2.0 * cp.y_bar * k / 400;
                auto p = meridian_point(cp.c, y);
                JacobiFieldPair f = jacobi_fields(y);
                mer << y << "," << p[0] << "," << p[1] << "," << f.z1 << "," << f.z2
                    << "," << 2.0 / (cp.c * cp.c * std::pow(1.0 + y * y, 2)) << "\n";
            }
            write_text(out_dir + "/catenoid_meridian.csv", mer.str());
            std::ostringstream bnd;
            bnd.precision(15);
            bnd << "r,x3\n";
            for (int k = 0; k <= 400; ++k) {
                double phi = -M_PI / 2 + M_PI * k / 400;
                bnd << cfg.domain.a * std::cos(phi) << "," << cfg.domain.b * std::sin(phi)
                    << "\n";
            }
            write_text(out_dir + "/boundary_meridian.csv", bnd.str());
        } catch (const NoCriticalCatenoid&) {
            out["found"] = false;
        }
        write_text(out_dir + "/placement.json", out.dump(2) + "\n");
    });
}

int cmd_residual(const RunConfig& cfg, const std::string& out_dir) {
    return guarded("residual", [&] {
        std::filesystem::create_directories(out_dir);
        if (cfg.alphas.size() < 3)
            throw ConfigError("residual study needs at least three alphas");
        CriticalPlacement cp = critical_placement(cfg.domain);
        ProfileConstants pc = compute_constants(cfg.quadrature_tol);
        Psi1Correction psi = solve_psi1(cfg.tmax, cfg.sigma);
        ResidualOrders ro = residual_orders(cfg.domain, cp, psi, pc, cfg.alphas,
                                            cfg.with_psi1, cfg.with_reduced_h,
                                            std::max(cfg.ppl, 12), cfg.sigma);

        // Residual field of the coarsest member as (r, x3, value) rows.
        {
            double alpha = cfg.alphas.front();
            ApproximationSpec spec;
            spec.alpha = alpha;
            spec.placement = cp;
            spec.with_psi1 = cfg.with_psi1;
            if (cfg.with_reduced_h) {
                ReducedDisplacement rd = solve_reduced_h(cp, alpha, pc);
                spec.h_y = rd.h.y;
                spec.h_vals = rd.h.h;
            }
            Approximation U(spec, psi);
            MeridianField f = residual_field(U, cfg.domain, alpha / 8.0);
            std::ostringstream csv;
            csv.precision(12);
            csv << "r,x3,value\n";
            for (int j = 0; j < f.nx3; ++j)
                for (int i = 0; i < f.nr; ++i)
                    if (f.mask[f.idx(i, j)] & MeridianField::kInside)
                        csv << f.r0 + i * f.dr << "," << f.x30 + j * f.dx3 << ","
                            << f.value[f.idx(i, j)] << "\n";
            write_text(out_dir + "/residual_field.csv", csv.str());
        }

        json out = {{"domain", domain_json(cfg.domain)},
                    {"alphas", ro.alphas},
                    {"with_psi1", cfg.with_psi1},
                    {"with_reduced_h", cfg.with_reduced_h},
                    {"interior_sup", ro.interior_sup},
                    {"interior_sup_fermi", ro.interior_sup_fermi},
                    {"boundary_sup", ro.boundary_sup},
                    {"robin_defect", ro.robin_defect},
                    {"slope_interior", ro.slope_interior},
                    {"slope_interior_fermi", ro.slope_interior_fermi},
                    {"slope_boundary", ro.slope_boundary},
                    {"slope_defect", ro.slope_defect},
                    {"monotone", ro.monotone}};
        write_text(out_dir + "/slopes.json", out.dump(2) + "\n");
    });
}

int cmd_solve(const RunConfig& cfg, const std::string& out_dir) {
    return guarded("solve", [&] {
        std::filesystem::create_directories(out_dir);
        ContinuationConfig cc;
        cc.ppl = cfg.ppl;
        cc.with_psi1 = cfg.with_psi1;
        cc.with_reduced_h = cfg.with_reduced_h;
        cc.newton.tol = cfg.newton_tol;
        cc.newton.max_iter = cfg.newton_max_iter;
        cc.newton.max_backtracks = cfg.newton_max_backtracks;

        std::vector<SolveReport> reports;
        ContinuationState final_state;
        if (cfg.jobs > 1) {
            // Independent alpha runs (no seeding) in parallel.
            cc.seed_from_previous = false;
            std::vector<std::future<std::vector<SolveReport>>> futs;
            for (double a : cfg.alphas)
                futs.push_back(std::async(std::launch::async, [&, a] {
                    return continuation_study(cfg.domain, {a}, cc);
                }));
            for (auto& f : futs) {
                auto r = f.get();
                reports.insert(reports.end(), r.begin(), r.end());
            }
        } else {
            reports = continuation_study(cfg.domain, cfg.alphas, cc, &final_state);
        }

        if (final_state.valid) {
            std::ostringstream csv;
            csv.precision(12);
            csv << "r,x3,u\n";
            const MeridianGrid& g = final_state.grid;
            for (int k = 0; k < g.cells(); ++k)
                csv << g.cr[k] << "," << g.cz[k] << "," << final_state.u[k] << "\n";
            write_text(out_dir + "/solution_final.csv", csv.str());
        }

        bool all_ok = true;
        json arr = json::array();
        for (const auto& r : reports) {
            all_ok = all_ok && r.converged;
            arr.push_back({{"alpha", r.alpha},
                           {"converged", r.converged},
                           {"iterations", r.iterations},
                           {"final_residual", r.final_residual},
                           {"energy", r.energy},
                           {"interface_distance", r.interface_distance},
                           {"sup_distance_to_initial", r.sup_distance_to_initial},
                           {"h1_distance_to_initial", r.h1_distance_to_initial}});
        }
        json out = {{"domain", domain_json(cfg.domain)}, {"runs", arr}};
        write_text(out_dir + "/report.json", out.dump(2) + "\n");
        if (!all_ok) throw std::runtime_error("one or more solves failed; see report.json");
    });
}

}  // namespace alc
