#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "json.hpp"
#include "treadmill/cli/commands.hpp"

using namespace treadmill;
using namespace treadmill::cli;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run_cli(const std::string& args) {
    const std::string cmd = std::string(TREADMILL_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string config(const std::string& name) { return std::string(TREADMILL_CONFIG_DIR) + "/" + name; }

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

}  // namespace

TEST(Config, ParsesKeysAndComments) {
    RunConfig cfg;
    apply_config_text(cfg,
                      "# comment\n"
                      "energy.kind = mooney_rivlin\n"
                      "energy.C1=0.25   # trailing\n"
                      "energy.C2 = 0.5\n"
                      "\n"
                      "kinetics.b0 = 2\n"
                      "chem.mu_inf = -1.5e-1\n"
                      "transport.M_outer = 4\n"
                      "geom.r0 = 3\n");
    EXPECT_EQ(cfg.energy_kind, "mooney_rivlin");
    EXPECT_EQ(cfg.C1, 0.25);
    EXPECT_EQ(cfg.C2, 0.5);
    EXPECT_EQ(cfg.b0, 2.0);
    EXPECT_EQ(cfg.mu_inf, -0.15);
    EXPECT_EQ(cfg.M_outer, 4.0);
    EXPECT_EQ(cfg.r0, 3.0);
    EXPECT_EQ(cfg.energy().stress_scale(), 1.5);
    EXPECT_NO_THROW(cfg.check());
}

TEST(Config, ReportsErrorsWithLineNumbers) {
    RunConfig cfg;
    try {
        apply_config_text(cfg, "chem.muR0 = 1\nchem.bogus = 2\n");
        FAIL();
    } catch (const InputError& e) {
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
        EXPECT_NE(std::string(e.what()).find("chem.bogus"), std::string::npos);
    }
    EXPECT_THROW(apply_config_text(cfg, "chem.muR0 = 1x\n"), InputError);
    EXPECT_THROW(apply_config_text(cfg, "chem.muR0\n"), InputError);
    EXPECT_THROW(apply_config_text(cfg, "= 3\n"), InputError);
    EXPECT_THROW(apply_config_file(cfg, "/nonexistent/file.cfg"), InputError);
}

TEST(Config, CheckRejectsNonPhysicalValues) {
    RunConfig cfg;
    cfg.M_outer = 0.0;
    EXPECT_THROW(cfg.check(), InputError);
    cfg = RunConfig{};
    cfg.G = -1.0;
    EXPECT_THROW(cfg.check(), InputError);
    cfg = RunConfig{};
    cfg.energy_kind = "ogden";
    EXPECT_THROW(cfg.check(), InputError);
    cfg = RunConfig{};
    cfg.r1_override = 2.0;
    EXPECT_THROW(cfg.check(), InputError);
    cfg.V0_override = 1.0;
    EXPECT_NO_THROW(cfg.check());
    cfg.r1_override = 0.5;
    EXPECT_THROW(cfg.check(), InputError);
    cfg = RunConfig{};
    cfg.eta_min = 10.0;
    cfg.eta_max = 1.0;
    EXPECT_THROW(cfg.check(), InputError);
}

TEST(Commands, SolveJsonRoundTripsExactly) {
    RunConfig cfg;
    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(cmd_solve(cfg, Format::json, out, err), exit_ok);
    const auto j = nlohmann::json::parse(out.str());
    const auto st = solve(cfg.model());
    EXPECT_EQ(j["state"]["nu"].get<double>(), st.nu);
    EXPECT_EQ(j["state"]["V0"].get<double>(), st.V0);
    EXPECT_EQ(j["state"]["mu0"].get<double>(), st.mu0);
    EXPECT_EQ(j["scales"]["eta"].get<double>(), 0.5);
    EXPECT_EQ(j["params"]["chem"]["mu_inf"].get<double>(), 2.0);
}

TEST(Commands, SolveCsv) {
    RunConfig cfg;
    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(cmd_solve(cfg, Format::csv, out, err), exit_ok);
    std::istringstream in(out.str());
    std::string header;
    std::string row;
    std::getline(in, header);
    std::getline(in, row);
    const auto h = split(header, ',');
    const auto v = split(row, ',');
    ASSERT_EQ(h.size(), v.size());
    const auto nu = std::find(h.begin(), h.end(), "nu") - h.begin();
    EXPECT_EQ(std::stod(v[nu]), solve(cfg.model()).nu);
}

TEST(Commands, ExitCodes) {
    std::ostringstream out;
    std::ostringstream err;
    RunConfig cfg;
    cfg.muR1 = cfg.muR0;
    EXPECT_EQ(cmd_solve(cfg, Format::json, out, err), exit_no_treadmilling);
    EXPECT_NE(err.str().find("V*"), std::string::npos);
    EXPECT_EQ(cmd_sweep(cfg, Format::csv, out, err), exit_no_treadmilling);
    EXPECT_EQ(cmd_profiles(cfg, Format::csv, out, err), exit_no_treadmilling);

    cfg = RunConfig{};
    cfg.b0 = -1.0;
    EXPECT_EQ(cmd_solve(cfg, Format::json, out, err), exit_input_error);
    EXPECT_EQ(cmd_validate(cfg, out, err), exit_input_error);
}

TEST(Commands, SweepRows) {
    RunConfig cfg;
    cfg.points = 31;
    const auto rows = sweep_rows(cfg);
    ASSERT_EQ(rows.size(), 31u);
    EXPECT_EQ(rows.front().eta, 1e-6);
    EXPECT_EQ(rows.back().eta, 1e6);
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(rows[i].d_over_r0, rows[i - 1].d_over_r0);
    const double nu_star = small_bead_asymptote(cfg.model()).nu_star;
    EXPECT_NEAR(rows.front().nu, nu_star, 1e-6 * nu_star);
    EXPECT_NEAR(*rows.back().d_diffusion_limited_est, rows.back().d_over_r0, 1e-3 * rows.back().d_over_r0);

    cfg.mu_inf = 4.0;  // V** < 0: no diffusion-limited column
    cfg.points = 3;
    const auto neg = sweep_rows(cfg);
    EXPECT_FALSE(neg.back().d_diffusion_limited_est.has_value());
    std::ostringstream csv;
    write_sweep_csv(neg, csv);
    EXPECT_NE(csv.str().find(",NA\n"), std::string::npos);
}

TEST(Commands, SweepLinearGrid) {
    RunConfig cfg;
    cfg.linear = true;
    cfg.eta_min = 1.0;
    cfg.eta_max = 3.0;
    cfg.points = 5;
    const auto g = eta_grid(cfg);
    ASSERT_EQ(g.size(), 5u);
    EXPECT_DOUBLE_EQ(g[1], 1.5);
    EXPECT_EQ(g.back(), 3.0);
}

TEST(Commands, ProfilesOfSolvedState) {
    RunConfig cfg;
    const auto t = profile_table(cfg);
    ASSERT_EQ(t.rows.size(), cfg.grid_n);
    EXPECT_EQ(t.rows.back().sigma_r_over_G, 0.0);
    EXPECT_EQ(t.rows.back().r, t.r1);
    EXPECT_EQ(t.h_above, 0.0);
    EXPECT_LT(t.h_below, 0.0);
    int changes = 0;
    for (std::size_t i = 1; i < t.rows.size(); ++i) {
        if ((t.rows[i].sigma_theta_over_G < 0) != (t.rows[i - 1].sigma_theta_over_G < 0)) ++changes;
        EXPECT_GE(t.rows[i].mu, t.rows[i - 1].mu);
    }
    EXPECT_EQ(changes, 1);
    EXPECT_NEAR(t.rows.back().mu, cfg.mu_inf, 1e-12);
}

TEST(Commands, ProfilesWithPrescribedShell) {
    RunConfig cfg;
    cfg.r1_override = 2.0;
    cfg.V0_override = 0.5;
    cfg.grid_n = 11;
    const auto t = profile_table(cfg);
    EXPECT_EQ(t.r1, 2.0);
    EXPECT_DOUBLE_EQ(t.rows.front().sigma_r_over_G, -2.53125);
    EXPECT_DOUBLE_EQ(t.rows.back().sigma_theta_over_G, 3.9375);
    EXPECT_DOUBLE_EQ(t.rows.front().h, -0.5);
    EXPECT_NEAR(t.rows.back().mu, cfg.mu_inf, 1e-14);

    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(cmd_profiles(cfg, Format::csv, out, err), exit_ok);
    EXPECT_EQ(out.str().rfind("# r1=2\n", 0), 0u);
    EXPECT_NE(out.str().find("r,sigma_r_over_G,sigma_theta_over_G,lambda_r,lambda_theta,v_over_V0,h,mu\n"),
              std::string::npos);
}

TEST(Commands, ValidatePasses) {
    RunConfig cfg;
    std::ostringstream out;
    std::ostringstream err;
    ASSERT_EQ(cmd_validate(cfg, out, err, 2000), exit_ok) << err.str();
    const auto j = nlohmann::json::parse(out.str());
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_TRUE(j["oracle"]["contains_solution"].get<bool>());
}

TEST(Commands, ValidateFlagsBrokenDerivative) {
    RunConfig cfg;
    const NeoHookean nh{1.0};
    cfg.energy_override = ReducedEnergy(
        "broken", [nh](double l) { return nh.w(l); }, [nh](double l) { return nh.dw(l) + 0.05; },
        [nh](double l) { return nh.d2w(l); }, 1.0);
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(cmd_validate(cfg, out, err, 2000), exit_check_failed);
    EXPECT_NE(err.str().find("derivative_consistency"), std::string::npos);
    const auto j = nlohmann::json::parse(out.str());
    EXPECT_FALSE(j["passed"].get<bool>());
}

TEST(Commands, ValidateReportsUnsolvable) {
    RunConfig cfg;
    cfg.mu_inf = 1.0;
    std::ostringstream out;
    std::ostringstream err;
    EXPECT_EQ(cmd_validate(cfg, out, err, 2000), exit_check_failed);
    EXPECT_NE(err.str().find("solvability"), std::string::npos);
}

TEST(Executable, BundledConfigs) {
    auto r = run_cli("solve --config " + config("diffusion_limited.cfg"));
    ASSERT_EQ(r.code, 0);
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_GT(j["state"]["nu"].get<double>(), 1.0);

    r = run_cli("solve --config " + config("finite_thickness.cfg") + " --format csv");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("Vstar,", 0), 0u);

    EXPECT_EQ(run_cli("solve --config " + config("no_treadmilling.cfg")).code, 3);
    EXPECT_EQ(run_cli("validate --config " + config("diffusion_limited.cfg")).code, 0);
    EXPECT_EQ(run_cli("profiles --config " + config("diffusion_limited.cfg") + " --grid-n 5").code, 0);
}

TEST(Executable, InputErrors) {
    EXPECT_EQ(run_cli("solve --config /nonexistent.cfg").code, 2);
    EXPECT_EQ(run_cli("solve --set chem.nope=1").code, 2);
    EXPECT_EQ(run_cli("solve --set kinetics.b0=-1").code, 2);
    EXPECT_EQ(run_cli("solve --format xml").code, 2);
    EXPECT_EQ(run_cli("frobnicate").code, 2);
    EXPECT_EQ(run_cli("sweep --eta-min 5 --eta-max 1").code, 2);
}

TEST(Executable, SweepIsDeterministic) {
    const std::string args = "sweep --config " + config("diffusion_limited.cfg") + " --points 41";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_FALSE(a.out.empty());
    EXPECT_EQ(a.out, b.out);
}
