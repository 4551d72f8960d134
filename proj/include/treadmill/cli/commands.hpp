#pragma once

// Subcommands of the treadmill tool. Each writes its artifact to `out`,
// diagnostics to `err`, and returns a process exit code.

#include <cmath>
#include <cstddef>
#include <cstdio>
#include <exception>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "treadmill/cli/run_config.hpp"
#include "treadmill/mechanics.hpp"
#include "treadmill/treadmill.hpp"

namespace treadmill::cli {

using nlohmann::json;

struct SweepRow {
    double eta = 0.0;
    double nu = 1.0;
    double d_over_r0 = 0.0;
    double V0 = 0.0;
    double V0_over_Vstar = 0.0;
    double mu0 = 0.0;
    double f0 = 0.0;
    double f1 = 0.0;
    std::optional<double> d_small_bead_est;
    std::optional<double> d_diffusion_limited_est;
};

inline const std::vector<std::string>& sweep_columns() {
    static const std::vector<std::string> cols = {"eta", "nu", "d_over_r0", "V0", "V0_over_Vstar",
                                                  "mu0", "f0", "f1", "d_small_bead_est",
                                                  "d_diffusion_limited_est"};
    return cols;
}

/// 17 significant digits; "NA" for an unavailable value.
inline std::string csv_number(std::optional<double> v) {
    if (!v) return "NA";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *v);
    return buf;
}

inline json json_number(std::optional<double> v) { return v ? json(*v) : json(nullptr); }

inline std::vector<double> eta_grid(const RunConfig& cfg) {
    std::vector<double> grid(cfg.points);
    const double n1 = static_cast<double>(cfg.points - 1);
    for (std::size_t i = 0; i < cfg.points; ++i) {
        const double t = static_cast<double>(i) / n1;
        grid[i] = cfg.linear ? cfg.eta_min + t * (cfg.eta_max - cfg.eta_min)
                             : std::exp(std::log(cfg.eta_min) + t * (std::log(cfg.eta_max) - std::log(cfg.eta_min)));
    }
    grid.front() = cfg.eta_min;
    grid.back() = cfg.eta_max;
    return grid;
}

inline json params_json(const RunConfig& cfg) {
    json energy = {{"kind", cfg.energy_override ? cfg.energy_override->name() : cfg.energy_kind}};
    if (!cfg.energy_override) {
        if (cfg.energy_kind == "neo_hookean") energy["G"] = cfg.G;
        if (cfg.energy_kind == "mooney_rivlin") {
            energy["C1"] = cfg.C1;
            energy["C2"] = cfg.C2;
        }
    }
    return {{"energy", energy},
            {"kinetics", {{"b0", cfg.b0}, {"b1", cfg.b1}}},
            {"chem", {{"muR0", cfg.muR0}, {"muR1", cfg.muR1}, {"mu_inf", cfg.mu_inf}, {"rhoR", cfg.rhoR}}},
            {"transport", {{"M_inner", cfg.M_inner}, {"M_outer", cfg.M_outer}}},
            {"geom", {{"r0", cfg.r0}}}};
}

inline json scales_json(const Scales& s, bool with_eta) {
    json j = {{"Vstar", s.Vstar}, {"Vstarstar", s.Vstarstar}, {"ellStar", s.ellStar}, {"muStar", s.muStar}};
    if (with_eta) j["eta"] = s.eta;
    return j;
}

inline json state_json(const TreadmillState& st) {
    return {{"nu", st.nu}, {"r1", st.r1}, {"d", st.d},     {"V0", st.V0}, {"V1", st.V1},
            {"mu0", st.mu0}, {"mu1", st.mu1}, {"f0", st.f0}, {"f1", st.f1}};
}

inline json row_json(const SweepRow& r) {
    return {{"eta", r.eta},
            {"nu", r.nu},
            {"d_over_r0", r.d_over_r0},
            {"V0", r.V0},
            {"V0_over_Vstar", r.V0_over_Vstar},
            {"mu0", r.mu0},
            {"f0", r.f0},
            {"f1", r.f1},
            {"d_small_bead_est", json_number(r.d_small_bead_est)},
            {"d_diffusion_limited_est", json_number(r.d_diffusion_limited_est)}};
}

/// Maps library exceptions onto exit codes; `body` does the actual work.
inline int run_guarded(std::ostream& err, const std::function<int()>& body) {
    try {
        return body();
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const DomainError& e) {
        err << "input error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const NoTreadmillingState& e) {
        err << e.what() << '\n';
        return exit_no_treadmilling;
    } catch (const NumericFailure& e) {
        err << "numeric failure: " << e.what() << '\n';
        return exit_numeric_failure;
    }
}

inline void require_solvable(const ModelParams& p) {
    const Solvability ok = solvable(p);
    if (!ok) throw NoTreadmillingState(ok.violation);
}

// ---------------------------------------------------------------------------

inline int cmd_solve(const RunConfig& cfg, Format fmt, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        cfg.check();
        const ModelParams p = cfg.model();
        require_solvable(p);
        const Scales sc = compute_scales(p);
        const TreadmillState st = solve(p);
        if (fmt == Format::json) {
            json j = {{"params", params_json(cfg)}, {"scales", scales_json(sc, true)}, {"state", state_json(st)}};
            out << j.dump(2) << '\n';
        } else {
            out << "Vstar,Vstarstar,ellStar,muStar,eta,nu,r1,d,V0,V1,mu0,mu1,f0,f1\n";
            const double vals[] = {sc.Vstar, sc.Vstarstar, sc.ellStar, sc.muStar, sc.eta, st.nu, st.r1,
                                   st.d,     st.V0,        st.V1,      st.mu0,    st.mu1, st.f0, st.f1};
            for (std::size_t i = 0; i < std::size(vals); ++i) {
                out << (i ? "," : "") << csv_number(vals[i]);
            }
            out << '\n';
        }
        return int{exit_ok};
    });
}

/// One row per eta; the bead radius is varied with all other parameters
/// held fixed.
inline std::vector<SweepRow> sweep_rows(const RunConfig& cfg) {
    cfg.check();
    const ModelParams base = cfg.model();
    require_solvable(base);
    const Scales sc = compute_scales(base);
    const double small_bead = small_bead_asymptote(base).nu_star - 1.0;
    const auto etas = eta_grid(cfg);

    std::vector<SweepRow> rows(etas.size());
    std::vector<std::exception_ptr> errors(etas.size());
    auto work = [&](std::size_t i) {
        try {
            const ModelParams p = with_eta(base, etas[i]);
            const TreadmillState st = solve(p);
            SweepRow& r = rows[i];
            r.eta = etas[i];
            r.nu = st.nu;
            r.d_over_r0 = st.d / p.r0;
            r.V0 = st.V0;
            r.V0_over_Vstar = st.V0 / sc.Vstar;
            r.mu0 = st.mu0;
            r.f0 = st.f0;
            r.f1 = st.f1;
            r.d_small_bead_est = small_bead;
            r.d_diffusion_limited_est = diffusion_limited_thickness(base, etas[i]);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    };

    const std::size_t workers =
        std::max<std::size_t>(1, std::min<std::size_t>(std::thread::hardware_concurrency(), etas.size()));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (std::size_t i = w; i < etas.size(); i += workers) work(i);
            });
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return rows;
}

inline void write_sweep_csv(const std::vector<SweepRow>& rows, std::ostream& out) {
    const auto& cols = sweep_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
    out << '\n';
    for (const auto& r : rows) {
        out << csv_number(r.eta) << ',' << csv_number(r.nu) << ',' << csv_number(r.d_over_r0) << ','
            << csv_number(r.V0) << ',' << csv_number(r.V0_over_Vstar) << ',' << csv_number(r.mu0) << ','
            << csv_number(r.f0) << ',' << csv_number(r.f1) << ',' << csv_number(r.d_small_bead_est) << ','
            << csv_number(r.d_diffusion_limited_est) << '\n';
    }
}

inline int cmd_sweep(const RunConfig& cfg, Format fmt, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        const auto rows = sweep_rows(cfg);
        if (fmt == Format::json) {
            json j = {{"params", params_json(cfg)}, {"scales", scales_json(compute_scales(cfg.model()), false)}};
            j["rows"] = json::array();
            for (const auto& r : rows) j["rows"].push_back(row_json(r));
            out << j.dump(2) << '\n';
        } else {
            write_sweep_csv(rows, out);
        }
        return int{exit_ok};
    });
}

struct ProfileRow {
    double r = 0.0;
    double sigma_r_over_G = 0.0;
    double sigma_theta_over_G = 0.0;
    double lambda_r = 1.0;
    double lambda_theta = 1.0;
    double v_over_V0 = 1.0;
    double h = 0.0;
    double mu = 0.0;
};

struct ProfileTable {
    std::vector<ProfileRow> rows;
    double r1 = 0.0;
    double h_below = 0.0;  // flux just inside the outer surface
    double h_above = 0.0;  // ... and just outside
};

/// Radial profiles through the shell, either for the solved treadmilling
/// state or for a prescribed (r1, V0) with V1 = -V0.
inline ProfileTable profile_table(const RunConfig& cfg) {
    cfg.check();
    const ModelParams p = cfg.model();
    SteadyProfiles pr;
    if (cfg.r1_override) {
        const double r1 = *cfg.r1_override;
        const double V0 = *cfg.V0_override;
        pr.r0 = p.r0;
        pr.r1 = r1;
        pr.V0 = V0;
        pr.V1 = -V0;
        pr.transport = {cfg.M_inner, cfg.M_outer, cfg.rhoR, cfg.mu_inf};
        // Continuity of mu at r1 with mu1 = mu_inf.
        pr.mu0 = cfg.mu_inf - cfg.rhoR * V0 * (r1 - p.r0) * p.r0 / (cfg.M_inner * r1);
    } else {
        require_solvable(p);
        pr = profiles_of(solve(p), p, cfg.M_outer);
    }
    const ShellGeometry geom{pr.r0, pr.r1};
    const double G = p.energy.stress_scale();
    const auto samples = stress_profile(geom, p.energy, cfg.grid_n);

    ProfileTable t;
    t.r1 = pr.r1;
    t.h_below = pr.flux(pr.r1, Side::below);
    t.h_above = pr.flux(pr.r1, Side::above);
    for (const auto& s : samples) {
        ProfileRow row;
        row.r = s.r;
        row.sigma_r_over_G = s.sigma_r / G;
        row.sigma_theta_over_G = s.sigma_theta / G;
        row.lambda_r = s.lambda_r;
        row.lambda_theta = s.lambda_theta;
        row.v_over_V0 = velocity(s.r, 1.0, pr.r0);
        row.h = pr.flux(s.r, Side::below);
        row.mu = pr.chemical_potential(s.r);
        t.rows.push_back(row);
    }
    return t;
}

inline int cmd_profiles(const RunConfig& cfg, Format fmt, std::ostream& out, std::ostream& err) {
    return run_guarded(err, [&] {
        const ProfileTable t = profile_table(cfg);
        if (fmt == Format::json) {
            json rows = json::array();
            for (const auto& r : t.rows) {
                rows.push_back({{"r", r.r},
                                {"sigma_r_over_G", r.sigma_r_over_G},
                                {"sigma_theta_over_G", r.sigma_theta_over_G},
                                {"lambda_r", r.lambda_r},
                                {"lambda_theta", r.lambda_theta},
                                {"v_over_V0", r.v_over_V0},
                                {"h", r.h},
                                {"mu", r.mu}});
            }
            json j = {{"params", params_json(cfg)},
                      {"interface", {{"r1", t.r1}, {"h_below", t.h_below}, {"h_above", t.h_above}}},
                      {"rows", rows}};
            out << j.dump(2) << '\n';
        } else {
            out << "# r1=" << csv_number(t.r1) << '\n';
            out << "# h_below=" << csv_number(t.h_below) << '\n';
            out << "# h_above=" << csv_number(t.h_above) << '\n';
            out << "r,sigma_r_over_G,sigma_theta_over_G,lambda_r,lambda_theta,v_over_V0,h,mu\n";
            for (const auto& r : t.rows) {
                out << csv_number(r.r) << ',' << csv_number(r.sigma_r_over_G) << ','
                    << csv_number(r.sigma_theta_over_G) << ',' << csv_number(r.lambda_r) << ','
                    << csv_number(r.lambda_theta) << ',' << csv_number(r.v_over_V0) << ',' << csv_number(r.h)
                    << ',' << csv_number(r.mu) << '\n';
            }
        }
        return int{exit_ok};
    });
}

/// Energy-assumption checks plus the brute-force uniqueness scan. Always
/// emits JSON; exits with exit_check_failed if anything fails.
inline int cmd_validate(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                        std::size_t oracle_points = 10000) {
    return run_guarded(err, [&] {
        cfg.check();
        const ModelParams p = cfg.model();
        const auto report = validate(p.energy, 0.1, 10.0, 100);

        json checks = json::array();
        for (const auto& c : report.checks) {
            checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        }
        bool passed = report.passed();
        json oracle = nullptr;

        const Solvability ok = solvable(p);
        checks.push_back({{"name", "solvability"}, {"passed", ok.ok()}, {"detail", ok.ok() ? "" : ok.reason()}});
        passed = passed && ok.ok();
        // The scan presumes W grows without bound; skip it for energies that
        // already failed the structural checks.
        if (ok && report.passed()) {
            const double lam_max = oracle_upper_stretch(p);
            const OracleReport rep = grid_scan_oracle(p, lam_max, oracle_points);
            const TreadmillState st = solve(p);
            const bool contains = rep.consistent() && rep.brackets.front().contains(st.nu);
            oracle = {{"lam_max", lam_max},
                      {"points", rep.points},
                      {"brackets", rep.brackets.size()},
                      {"nu", st.nu},
                      {"contains_solution", contains}};
            checks.push_back({{"name", "uniqueness"},
                              {"passed", contains},
                              {"detail", contains ? "" : std::to_string(rep.brackets.size()) + " sign changes"}});
            passed = passed && contains;
        }
        json j = {{"passed", passed}, {"checks", checks}, {"oracle", oracle}};
        out << j.dump(2) << '\n';
        if (!passed) {
            for (const auto& c : j["checks"]) {
                if (!c["passed"].get<bool>()) err << "check failed: " << c["name"].get<std::string>() << '\n';
            }
        }
        return passed ? int{exit_ok} : int{exit_check_failed};
    });
}

}  // namespace treadmill::cli
