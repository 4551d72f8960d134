#pragma once

// Run configuration for the command-line front end. Parameters come from a
// flat `key = value` file; later assignments (including --set overrides)
// replace earlier ones.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include "treadmill/treadmill.hpp"

namespace treadmill::cli {

/// Malformed configuration or command-line input.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_input_error = 2,
    exit_no_treadmilling = 3,
    exit_numeric_failure = 4,
};

enum class Format { csv, json };

struct RunConfig {
    std::string energy_kind = "neo_hookean";
    double G = 1.0;
    double C1 = 0.5;
    double C2 = 0.0;

    double b0 = 1.0;
    double b1 = 1.0;
    double muR0 = 0.0;
    double muR1 = 3.0;
    double mu_inf = 2.0;
    double rhoR = 1.0;
    double M_inner = 1.0;
    double M_outer = 1.0;
    double r0 = 1.0;

    double eta_min = 1e-6;
    double eta_max = 1e6;
    std::size_t points = 121;
    bool linear = false;
    std::size_t grid_n = 101;

    // Mechanics-only profile: prescribe the outer radius and accretion speed.
    std::optional<double> r1_override;
    std::optional<double> V0_override;

    // Library callers may inject an energy directly; it takes precedence
    // over energy_kind.
    std::optional<ReducedEnergy> energy_override;

    ReducedEnergy energy() const {
        if (energy_override) return *energy_override;
        if (energy_kind == "neo_hookean") return neo_hookean(G);
        if (energy_kind == "mooney_rivlin") return mooney_rivlin(C1, C2);
        throw InputError("unknown energy.kind '" + energy_kind + "'");
    }

    ModelParams model() const {
        ModelParams p;
        p.energy = energy();
        p.b0 = b0;
        p.b1 = b1;
        p.muR0 = muR0;
        p.muR1 = muR1;
        p.mu_inf = mu_inf;
        p.rhoR = rhoR;
        p.M = M_inner;
        p.r0 = r0;
        return p;
    }

    void check() const {
        for (double v : {G, C1, C2, b0, b1, muR0, muR1, mu_inf, rhoR, M_inner, M_outer, r0, eta_min, eta_max}) {
            if (!std::isfinite(v)) throw InputError("all physical parameters must be finite");
        }
        if (!(b0 > 0.0 && b1 > 0.0 && rhoR > 0.0 && M_inner > 0.0 && M_outer > 0.0 && r0 > 0.0)) {
            throw InputError("b0, b1, rhoR, M_inner, M_outer and r0 must be positive");
        }
        if (energy_kind == "neo_hookean" && !(G > 0.0)) throw InputError("energy.G must be positive");
        if (energy_kind == "mooney_rivlin" && !(C1 >= 0.0 && C2 >= 0.0 && C1 + C2 > 0.0)) {
            throw InputError("energy.C1, energy.C2 must be non-negative and not both zero");
        }
        if (points < 2 || grid_n < 2) throw InputError("point counts must be at least 2");
        if (!(eta_min > 0.0 && eta_min < eta_max)) throw InputError("need 0 < eta-min < eta-max");
        if (r1_override.has_value() != V0_override.has_value()) {
            throw InputError("r1 and V0 overrides must be given together");
        }
        if (r1_override && !(*r1_override > r0)) throw InputError("r1 override must exceed r0");
        (void)energy();
    }
};

inline double parse_number(const std::string& key, const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw InputError("bad numeric value for '" + key + "': '" + text + "'");
    }
    return value;
}

inline void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
    static const std::map<std::string, double RunConfig::*> numeric = {
        {"energy.G", &RunConfig::G},
        {"energy.C1", &RunConfig::C1},
        {"energy.C2", &RunConfig::C2},
        {"kinetics.b0", &RunConfig::b0},
        {"kinetics.b1", &RunConfig::b1},
        {"chem.muR0", &RunConfig::muR0},
        {"chem.muR1", &RunConfig::muR1},
        {"chem.mu_inf", &RunConfig::mu_inf},
        {"chem.rhoR", &RunConfig::rhoR},
        {"transport.M_inner", &RunConfig::M_inner},
        {"transport.M_outer", &RunConfig::M_outer},
        {"geom.r0", &RunConfig::r0},
    };
    if (key == "energy.kind") {
        cfg.energy_kind = value;
        return;
    }
    const auto it = numeric.find(key);
    if (it == numeric.end()) throw InputError("unknown config key '" + key + "'");
    cfg.*(it->second) = parse_number(key, value);
}

namespace detail {
inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}
}  // namespace detail

/// Splits "key=value" (whitespace around either side allowed).
inline std::pair<std::string, std::string> split_assignment(const std::string& line) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw InputError("expected key = value, got '" + line + "'");
    auto key = detail::trim(line.substr(0, eq));
    auto value = detail::trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw InputError("expected key = value, got '" + line + "'");
    return {key, value};
}

/// Applies a config text: one `key = value` per line, '#' starts a comment.
inline void apply_config_text(RunConfig& cfg, const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        try {
            const auto [key, value] = split_assignment(line);
            apply_setting(cfg, key, value);
        } catch (const InputError& e) {
            throw InputError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
}

inline void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    apply_config_text(cfg, buf.str());
}

}  // namespace treadmill::cli
