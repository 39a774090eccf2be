#include "fairbasis/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fb {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

struct KeyTable {
    std::map<std::string, std::string> kv;
    std::set<std::string> used;

    bool section_present(const std::string& name) const {
        auto it = kv.lower_bound(name + ".");
        return it != kv.end() && it->first.compare(0, name.size() + 1, name + ".") == 0;
    }
    const std::string& get(const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) throw std::invalid_argument("config: missing key '" + key + "'");
        used.insert(key);
        return it->second;
    }
    const std::string* get_opt(const std::string& key) {
        auto it = kv.find(key);
        if (it == kv.end()) return nullptr;
        used.insert(key);
        return &it->second;
    }
};

KeyTable lex(const std::string& text) {
    KeyTable t;
    std::stringstream ss(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || key.find('.') == std::string::npos)
            throw std::invalid_argument("config: line " + std::to_string(lineno) +
                                        ": bad key '" + key + "'");
        if (!t.kv.emplace(key, value).second)
            throw std::invalid_argument("config: duplicate key '" + key + "'");
    }
    return t;
}

double to_double(const std::string& v, const std::string& key) {
    const char* b = v.c_str();
    char* e = nullptr;
    double x = std::strtod(b, &e);
    if (v.empty() || e != b + v.size() || !std::isfinite(x))
        throw std::invalid_argument("config: bad number for '" + key + "'");
    return x;
}

std::uint64_t to_uint(const std::string& v, const std::string& key) {
    const char* b = v.c_str();
    char* e = nullptr;
    unsigned long long x = std::strtoull(b, &e, 10);
    if (v.empty() || e != b + v.size() || v[0] == '-')
        throw std::invalid_argument("config: bad integer for '" + key + "'");
    return x;
}

bool to_bool(const std::string& v, const std::string& key) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw std::invalid_argument("config: bad boolean for '" + key + "' (use true/false)");
}

std::vector<double> to_list(const std::string& v, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(to_double(trim(cell), key));
    if (out.empty()) throw std::invalid_argument("config: empty list for '" + key + "'");
    return out;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ",";
        out += fmt(v[i]);
    }
    return out;
}

}  // namespace

void ScenarioConfig::require(const char* section) const {
    std::string s = section;
    bool ok = s == "model"     ? has_model
              : s == "market"  ? has_market
              : s == "bond"    ? has_bond
              : s == "cds"     ? has_cds
              : s == "capital" ? has_capital
                               : false;
    if (!ok) throw std::invalid_argument("config: missing section '" + s + "'");
}

ScenarioConfig parse_config_text(const std::string& text) {
    KeyTable t = lex(text);
    ScenarioConfig cfg;

    if (t.section_present("model")) {
        cfg.has_model = true;
        const std::string& kind = t.get("model.kind");
        if (kind == "constant") {
            cfg.model = IntensityModel::constant(to_double(t.get("model.lambda0"), "model.lambda0"));
        } else if (kind == "curve") {
            cfg.model = IntensityModel::curve(
                to_list(t.get("model.curve_times"), "model.curve_times"),
                to_list(t.get("model.curve_values"), "model.curve_values"));
        } else if (kind == "arithmetic") {
            cfg.model = IntensityModel::arithmetic(
                to_double(t.get("model.lambda0"), "model.lambda0"),
                to_double(t.get("model.a"), "model.a"), to_double(t.get("model.b"), "model.b"));
        } else if (kind == "square_root") {
            cfg.model = IntensityModel::square_root(
                to_double(t.get("model.lambda0"), "model.lambda0"),
                to_double(t.get("model.kappa"), "model.kappa"),
                to_double(t.get("model.theta"), "model.theta"),
                to_double(t.get("model.sigma"), "model.sigma"));
        } else {
            throw std::invalid_argument(
                "config: bad value for 'model.kind' (constant, curve, arithmetic, square_root)");
        }
        cfg.model.validate();
    }

    if (t.section_present("market")) {
        cfg.has_market = true;
        MarketEnv& e = cfg.market;
        e.r = to_double(t.get("market.r"), "market.r");
        const std::string* rl = t.get_opt("market.r_l");
        e.r_L = rl ? to_double(*rl, "market.r_l") : e.r;
        e.r_p = to_double(t.get("market.r_p"), "market.r_p");
        e.r_1 = to_double(t.get("market.r_1"), "market.r_1");
        e.r_b = to_double(t.get("market.r_b"), "market.r_b");
        e.r_k = to_double(t.get("market.r_k"), "market.r_k");
        const std::string* z = t.get_opt("market.z");
        e.z = z ? to_double(*z, "market.z") : e.r;
        e.h = to_double(t.get("market.h"), "market.h");
        e.epsilon = to_double(t.get("market.epsilon"), "market.epsilon");
        e.validate();
    }

    if (t.section_present("bond")) {
        cfg.has_bond = true;
        cfg.bond.coupon = to_double(t.get("bond.coupon"), "bond.coupon");
        cfg.bond.maturity = to_double(t.get("bond.maturity"), "bond.maturity");
        cfg.bond.recovery = to_double(t.get("bond.recovery"), "bond.recovery");
        cfg.bond.validate();
    }

    if (t.section_present("cds")) {
        cfg.has_cds = true;
        cfg.cds.premium = to_double(t.get("cds.premium"), "cds.premium");
        cfg.cds.maturity = to_double(t.get("cds.maturity"), "cds.maturity");
        cfg.cds.recovery = to_double(t.get("cds.recovery"), "cds.recovery");
        cfg.cds.validate();
    }

    if (t.section_present("capital")) {
        cfg.has_capital = true;
        const std::string& mode = t.get("capital.mode");
        if (mode == "fixed_exposure")
            cfg.capital.mode = CapitalMode::fixed_exposure;
        else if (mode == "variable_exposure")
            cfg.capital.mode = CapitalMode::variable_exposure;
        else if (mode == "mc_var")
            cfg.capital.mode = CapitalMode::mc_var;
        else
            throw std::invalid_argument(
                "config: bad value for 'capital.mode' (fixed_exposure, variable_exposure, mc_var)");
        if (const std::string* v = t.get_opt("capital.fixed_exposure"))
            cfg.capital.fixed_exposure = to_double(*v, "capital.fixed_exposure");
        if (const std::string* v = t.get_opt("capital.lgd"))
            cfg.capital.lgd = to_double(*v, "capital.lgd");
        if (const std::string* v = t.get_opt("capital.avc"))
            cfg.capital.avc = to_double(*v, "capital.avc");
        if (const std::string* v = t.get_opt("capital.confidence"))
            cfg.capital.confidence = to_double(*v, "capital.confidence");
        if (const std::string* v = t.get_opt("capital.maturity_m"))
            cfg.capital.maturity_M = to_double(*v, "capital.maturity_m");
        cfg.capital.validate();
    }

    if (const std::string* v = t.get_opt("numerics.n_lambda"))
        cfg.grid.n_lambda = static_cast<std::size_t>(to_uint(*v, "numerics.n_lambda"));
    if (const std::string* v = t.get_opt("numerics.width_sigmas"))
        cfg.grid.width_sigmas = to_double(*v, "numerics.width_sigmas");
    if (const std::string* v = t.get_opt("numerics.n_steps"))
        cfg.grid.n_steps = static_cast<std::size_t>(to_uint(*v, "numerics.n_steps"));
    if (const std::string* v = t.get_opt("numerics.mc_paths"))
        cfg.mc.n_paths = static_cast<std::size_t>(to_uint(*v, "numerics.mc_paths"));
    if (const std::string* v = t.get_opt("numerics.mc_steps_per_year"))
        cfg.mc.n_steps_per_year = static_cast<std::size_t>(to_uint(*v, "numerics.mc_steps_per_year"));
    if (const std::string* v = t.get_opt("numerics.seed")) cfg.mc.seed = to_uint(*v, "numerics.seed");
    if (const std::string* v = t.get_opt("numerics.antithetic"))
        cfg.mc.antithetic = to_bool(*v, "numerics.antithetic");
    cfg.mc.validate();

    if (const std::string* v = t.get_opt("output.dir")) cfg.out_dir = *v;
    if (const std::string* v = t.get_opt("output.prefix")) cfg.prefix = *v;

    for (const auto& [key, value] : t.kv)
        if (t.used.find(key) == t.used.end())
            throw std::invalid_argument("config: unrecognized or unused key '" + key + "'");
    return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string serialize_config(const ScenarioConfig& cfg) {
    std::string out;
    auto line = [&out](const std::string& k, const std::string& v) {
        out += k + " = " + v + "\n";
    };

    if (cfg.has_model) {
        switch (cfg.model.kind) {
            case ModelKind::constant:
                line("model.kind", "constant");
                line("model.lambda0", fmt(cfg.model.lambda0));
                break;
            case ModelKind::curve:
                line("model.kind", "curve");
                line("model.curve_times", fmt_list(cfg.model.curve_times));
                line("model.curve_values", fmt_list(cfg.model.curve_values));
                break;
            case ModelKind::arithmetic:
                line("model.kind", "arithmetic");
                line("model.lambda0", fmt(cfg.model.lambda0));
                line("model.a", fmt(cfg.model.a));
                line("model.b", fmt(cfg.model.b));
                break;
            case ModelKind::square_root:
                line("model.kind", "square_root");
                line("model.lambda0", fmt(cfg.model.lambda0));
                line("model.kappa", fmt(cfg.model.kappa));
                line("model.theta", fmt(cfg.model.theta));
                line("model.sigma", fmt(cfg.model.sigma));
                break;
        }
    }
    if (cfg.has_market) {
        line("market.r", fmt(cfg.market.r));
        line("market.r_l", fmt(cfg.market.r_L));
        line("market.r_p", fmt(cfg.market.r_p));
        line("market.r_1", fmt(cfg.market.r_1));
        line("market.r_b", fmt(cfg.market.r_b));
        line("market.r_k", fmt(cfg.market.r_k));
        line("market.z", fmt(cfg.market.z));
        line("market.h", fmt(cfg.market.h));
        line("market.epsilon", fmt(cfg.market.epsilon));
    }
    if (cfg.has_bond) {
        line("bond.coupon", fmt(cfg.bond.coupon));
        line("bond.maturity", fmt(cfg.bond.maturity));
        line("bond.recovery", fmt(cfg.bond.recovery));
    }
    if (cfg.has_cds) {
        line("cds.premium", fmt(cfg.cds.premium));
        line("cds.maturity", fmt(cfg.cds.maturity));
        line("cds.recovery", fmt(cfg.cds.recovery));
    }
    if (cfg.has_capital) {
        const char* mode = cfg.capital.mode == CapitalMode::fixed_exposure ? "fixed_exposure"
                           : cfg.capital.mode == CapitalMode::variable_exposure
                               ? "variable_exposure"
                               : "mc_var";
        line("capital.mode", mode);
        line("capital.fixed_exposure", fmt(cfg.capital.fixed_exposure));
        line("capital.lgd", fmt(cfg.capital.lgd));
        line("capital.avc", fmt(cfg.capital.avc));
        line("capital.confidence", fmt(cfg.capital.confidence));
        line("capital.maturity_m", fmt(cfg.capital.maturity_M));
    }
    line("numerics.n_lambda", std::to_string(cfg.grid.n_lambda));
    line("numerics.width_sigmas", fmt(cfg.grid.width_sigmas));
    line("numerics.n_steps", std::to_string(cfg.grid.n_steps));
    line("numerics.mc_paths", std::to_string(cfg.mc.n_paths));
    line("numerics.mc_steps_per_year", std::to_string(cfg.mc.n_steps_per_year));
    line("numerics.seed", std::to_string(cfg.mc.seed));
    line("numerics.antithetic", cfg.mc.antithetic ? "true" : "false");
    line("output.dir", cfg.out_dir);
    line("output.prefix", cfg.prefix);
    return out;
}

}  // namespace fb
