#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "suhub/model.hpp"

namespace suhub {

enum class Campaign {
    ed,
    mc_z,
    fk_check,
    loops,
    fit_main1,
    sweep_main2,
    allowed_perms,
    finite_u,
};

inline const std::map<std::string, Campaign>& campaign_names() {
    static const std::map<std::string, Campaign> names = {
        {"ed", Campaign::ed},
        {"mc-z", Campaign::mc_z},
        {"fk-check", Campaign::fk_check},
        {"loops", Campaign::loops},
        {"fit-main1", Campaign::fit_main1},
        {"sweep-main2", Campaign::sweep_main2},
        {"allowed-perms", Campaign::allowed_perms},
        {"finite-u", Campaign::finite_u},
    };
    return names;
}

inline std::string campaign_name(Campaign c) {
    for (const auto& [name, value] : campaign_names())
        if (value == c) return name;
    return "?";
}

struct ConfigError : std::runtime_error {
    int line;
    int column;
    ConfigError(int line_, int column_, const std::string& message)
        : std::runtime_error("config error at line " + std::to_string(line_) +
                             ", column " + std::to_string(column_) + ": " +
                             message),
          line(line_),
          column(column_) {}
};

/// Validated experiment description. Defaults describe the smallest
/// interesting system: 2x2 box, n = 2, t = 1, mu = 0, no off-site Coulomb.
struct RunConfig {
    Campaign campaign = Campaign::ed;
    std::vector<int> sides = {2, 2};
    int n_flavors = 2;
    double hop = 1.0;
    double mu = 0.0;
    double beta = 1.0;
    std::vector<std::vector<double>> fields;  // empty -> single zero field
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
    int workers = 1;
    std::string output_dir = ".";
    std::vector<double> u_values = {10.0, 100.0, 1000.0};

    ModelSpec make_spec() const {
        ModelSpec spec(Lattice(sides), n_flavors, hop);
        if (mu != 0.0) spec.set_uniform_onsite(mu);
        return spec;
    }

    std::vector<FieldVector> field_vectors() const {
        std::vector<FieldVector> out;
        if (fields.empty()) {
            out.push_back(FieldVector::zero(n_flavors));
            return out;
        }
        for (const auto& f : fields) out.emplace_back(f);
        return out;
    }
};

namespace detail {

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream ss(s);
    while (std::getline(ss, cur, sep)) out.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) out.push_back("");
    return out;
}

inline double parse_real(const std::string& v, int line, int col) {
    try {
        std::size_t used = 0;
        const double x = std::stod(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(line, col, "expected a real number, got '" + v + "'");
    }
}

inline long long parse_int(const std::string& v, int line, int col) {
    try {
        std::size_t used = 0;
        const long long x = std::stoll(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(line, col, "expected an integer, got '" + v + "'");
    }
}

inline std::uint64_t parse_u64(const std::string& v, int line, int col) {
    try {
        std::size_t used = 0;
        const unsigned long long x = std::stoull(v, &used);
        if (used != v.size()) throw std::invalid_argument("trailing characters");
        return x;
    } catch (const std::exception&) {
        throw ConfigError(line, col, "expected an unsigned integer, got '" + v + "'");
    }
}

/// "2x2", "2x3x2" or "2,3" forms.
inline std::vector<int> parse_sides(const std::string& v, int line, int col) {
    const char sep = v.find('x') != std::string::npos ? 'x' : ',';
    std::vector<int> sides;
    for (const auto& tok : split(v, sep)) {
        const long long s = parse_int(tok, line, col);
        if (s < 1 || s > 1024)
            throw ConfigError(line, col, "side length out of range [1, 1024]");
        sides.push_back(static_cast<int>(s));
    }
    if (sides.empty())
        throw ConfigError(line, col, "empty side list");
    return sides;
}

}  // namespace detail

/// Parses the flat key-value experiment format. Keys: campaign, sides,
/// n_flavors, t, mu, beta, b, samples, seed, workers, out, u_values.
/// `b` holds one or more comma-separated field vectors joined by ';'.
/// Unknown keys are rejected; every numeric value is range-checked.
inline RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    bool campaign_seen = false;

    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = raw;
        if (const auto hash = line.find('#'); hash != std::string::npos)
            line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(lineno, 1, "expected 'key = value'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        const int vcol = static_cast<int>(raw.find('=') + 2);
        if (key.empty())
            throw ConfigError(lineno, 1, "empty key");
        if (value.empty())
            throw ConfigError(lineno, vcol, "empty value for key '" + key + "'");

        if (key == "campaign") {
            const auto it = campaign_names().find(value);
            if (it == campaign_names().end())
                throw ConfigError(lineno, vcol, "unknown campaign '" + value + "'");
            cfg.campaign = it->second;
            campaign_seen = true;
        } else if (key == "sides") {
            cfg.sides = detail::parse_sides(value, lineno, vcol);
        } else if (key == "n_flavors") {
            const long long n = detail::parse_int(value, lineno, vcol);
            if (n < 2 || n > 64)
                throw ConfigError(lineno, vcol, "n_flavors must be in [2, 64]");
            cfg.n_flavors = static_cast<int>(n);
        } else if (key == "t") {
            cfg.hop = detail::parse_real(value, lineno, vcol);
            if (!(cfg.hop > 0.0))
                throw ConfigError(lineno, vcol, "t must be positive");
        } else if (key == "mu") {
            cfg.mu = detail::parse_real(value, lineno, vcol);
        } else if (key == "beta") {
            cfg.beta = detail::parse_real(value, lineno, vcol);
            if (cfg.beta < 0.0)
                throw ConfigError(lineno, vcol, "beta must be >= 0");
        } else if (key == "b") {
            cfg.fields.clear();
            for (const auto& vec : detail::split(value, ';')) {
                std::vector<double> comps;
                for (const auto& tok : detail::split(vec, ','))
                    comps.push_back(detail::parse_real(tok, lineno, vcol));
                cfg.fields.push_back(std::move(comps));
            }
        } else if (key == "samples") {
            cfg.samples = detail::parse_u64(value, lineno, vcol);
            if (cfg.samples < 1)
                throw ConfigError(lineno, vcol, "samples must be >= 1");
        } else if (key == "seed") {
            cfg.seed = detail::parse_u64(value, lineno, vcol);
        } else if (key == "workers") {
            const long long w = detail::parse_int(value, lineno, vcol);
            if (w < 1 || w > 1024)
                throw ConfigError(lineno, vcol, "workers must be in [1, 1024]");
            cfg.workers = static_cast<int>(w);
        } else if (key == "out") {
            cfg.output_dir = value;
        } else if (key == "u_values") {
            cfg.u_values.clear();
            for (const auto& tok : detail::split(value, ',')) {
                const double u = detail::parse_real(tok, lineno, vcol);
                if (u < 0.0)
                    throw ConfigError(lineno, vcol, "u_values must be >= 0");
                cfg.u_values.push_back(u);
            }
            if (cfg.u_values.empty())
                throw ConfigError(lineno, vcol, "empty u_values");
        } else {
            throw ConfigError(lineno, 1, "unknown key '" + key + "'");
        }
    }

    if (!campaign_seen)
        throw ConfigError(lineno + 1, 1, "missing required key 'campaign'");

    // Cross-field validation.
    for (const auto& f : cfg.fields)
        if (static_cast<int>(f.size()) != cfg.n_flavors - 1)
            throw ConfigError(0, 0,
                              "field vector length must equal n_flavors - 1");
    return cfg;
}

}  // namespace suhub
