#include "fairbasis/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "fairbasis/analytics.hpp"
#include "fairbasis/basis.hpp"
#include "fairbasis/mc.hpp"
#include "fairbasis/rn_pricing.hpp"

namespace fb {

namespace {

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Buffers whole files, then writes <name>.tmp and renames in one pass.
class OutputSet {
  public:
    explicit OutputSet(std::string dir) : dir_(std::move(dir)) {}

    std::string& add(const std::string& name) {
        files_.emplace_back(name, std::string());
        return files_.back().second;
    }

    std::vector<std::string> commit() {
        namespace fs = std::filesystem;
        std::error_code ec;
        fs::create_directories(dir_, ec);
        std::vector<fs::path> temps;
        auto cleanup = [&temps]() {
            std::error_code ignore;
            for (const auto& t : temps) fs::remove(t, ignore);
        };
        for (const auto& [name, content] : files_) {
            fs::path tmp = fs::path(dir_) / (name + ".tmp");
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            out << content;
            out.flush();
            if (!out) {
                cleanup();
                throw std::runtime_error("cannot write " + tmp.string());
            }
            temps.push_back(tmp);
        }
        std::vector<std::string> written;
        for (std::size_t i = 0; i < files_.size(); ++i) {
            fs::path final_path = fs::path(dir_) / files_[i].first;
            fs::rename(temps[i], final_path, ec);
            if (ec) {
                cleanup();
                throw std::runtime_error("cannot rename " + temps[i].string() + ": " +
                                         ec.message());
            }
            written.push_back(final_path.string());
        }
        return written;
    }

  private:
    std::string dir_;
    std::vector<std::pair<std::string, std::string>> files_;
};

void append_profile(std::string& out, const char* abscissa, const Profile& p) {
    out += abscissa;
    out += ",value\n";
    for (std::size_t i = 0; i < p.lambda.size(); ++i)
        out += num(p.lambda[i]) + "," + num(p.value[i]) + "\n";
}

}  // namespace

std::vector<std::string> cmd_price(const ScenarioConfig& cfg, const std::string& instrument) {
    cfg.require("model");
    cfg.require("market");

    std::string content = "metric,value\n";
    if (instrument == "bond") {
        cfg.require("bond");
        PricingResult pr = bond_value_rn(cfg.model, cfg.market, cfg.bond, 0.0, cfg.grid);
        content += "value," + num(pr.value) + "\ndelta," + num(pr.delta) + "\ngamma," +
                   num(pr.gamma) + "\n";
    } else if (instrument == "cds") {
        cfg.require("cds");
        PricingResult pr = cds_value(cfg.model, cfg.market, cfg.cds, 0.0, cfg.grid);
        content += "value," + num(pr.value) + "\ndelta," + num(pr.delta) + "\ngamma," +
                   num(pr.gamma) + "\n";
    } else if (instrument == "survival") {
        double T;
        if (cfg.has_bond)
            T = cfg.bond.maturity;
        else if (cfg.has_cds)
            T = cfg.cds.maturity;
        else
            throw std::invalid_argument("survival pricing needs a bond or cds section for the horizon");
        PricingResult pr = survival_fd(cfg.model, 0.0, T, cfg.grid);
        content += "value," + num(pr.value) + "\ndelta," + num(pr.delta) + "\ngamma," +
                   num(pr.gamma) + "\n";
    } else if (instrument == "floating-bond") {
        cfg.require("bond");
        double v = floating_bond_value(cfg.model, cfg.market, cfg.bond.coupon,
                                       cfg.bond.recovery, cfg.bond.maturity, cfg.grid);
        content += "value," + num(v) + "\n";
    } else {
        throw std::invalid_argument("unknown instrument '" + instrument +
                                    "' (bond, cds, floating-bond, survival)");
    }

    OutputSet files(cfg.out_dir);
    files.add(cfg.prefix + "_price_" + instrument + ".csv") = content;
    return files.commit();
}

std::vector<std::string> cmd_fair_basis(const ScenarioConfig& cfg) {
    cfg.require("model");
    cfg.require("market");
    cfg.require("bond");
    cfg.require("cds");
    CapitalSpec cap = cfg.has_capital ? cfg.capital : CapitalSpec{};

    double reserve = 0.0;
    if (cap.mode == CapitalMode::mc_var) {
        WealthStats stats = simulate_hedged_economy(cfg.model, cfg.market, cfg.bond, cfg.cds,
                                                    HedgeMode::diffusion_hedge, cfg.mc, 0.0,
                                                    cfg.grid);
        reserve = std::max(var_estimate(stats, cap.confidence).value, 0.0);
    }
    BasisReport rep = solve_basis_pde(cfg.model, cfg.market, cfg.bond, cfg.cds, cap, cfg.grid,
                                      MbarGrid{}, reserve);

    std::string report = "metric,value\n";
    report += "b_star," + num(rep.b_star) + "\n";
    report += "b_fair," + num(rep.b_fair) + "\n";
    report += "xva," + num(rep.xva) + "\n";
    report += "apv," + num(rep.apv) + "\n";
    report += "fair_basis_bp," + num(rep.fair_basis_bp) + "\n";
    report += "package_value," + num(rep.package_value) + "\n";
    if (cap.mode == CapitalMode::mc_var) report += "mc_var_reserve," + num(reserve) + "\n";

    OutputSet files(cfg.out_dir);
    files.add(cfg.prefix + "_report.csv") = report;
    append_profile(files.add(cfg.prefix + "_hedge_ratio.csv"), "lambda", rep.hedge_ratio_profile);
    append_profile(files.add(cfg.prefix + "_jtd_profile.csv"), "lambda", rep.jtd_profile);
    append_profile(files.add(cfg.prefix + "_capital_profile.csv"), "lambda", rep.capital_profile);
    append_profile(files.add(cfg.prefix + "_mbar_slice.csv"), "mbar", rep.mbar_slice);
    return files.commit();
}

std::vector<std::string> cmd_jtd_profile(const ScenarioConfig& cfg) {
    cfg.require("model");
    cfg.require("market");
    cfg.require("bond");
    cfg.require("cds");
    Profile p = jtd_profile(cfg.model, cfg.market, cfg.bond, cfg.cds.premium, 0.001, 0.25,
                            cfg.grid);
    OutputSet files(cfg.out_dir);
    append_profile(files.add(cfg.prefix + "_jtd_profile.csv"), "lambda", p);
    return files.commit();
}

std::vector<std::string> cmd_mc_verify(const ScenarioConfig& cfg) {
    cfg.require("model");
    cfg.require("market");
    cfg.require("bond");
    cfg.require("cds");

    PricingResult fd_bond = bond_value_rn(cfg.model, cfg.market, cfg.bond, 0.0, cfg.grid);
    PricingResult fd_cds = cds_value(cfg.model, cfg.market, cfg.cds, 0.0, cfg.grid);
    McEstimate mc_bond = price_bond_mc(cfg.model, cfg.market, cfg.bond, cfg.mc);
    McEstimate mc_cds = price_cds_mc(cfg.model, cfg.market, cfg.cds, cfg.mc);

    auto row = [](const char* name, double fd, const McEstimate& mc) {
        double diff = std::abs(fd - mc.value);
        double ratio = mc.std_error > 0.0 ? diff / mc.std_error
                                          : (diff == 0.0 ? 0.0 : INFINITY);
        std::string s = name;
        s += "," + num(fd) + "," + num(mc.value) + "," + num(mc.std_error) + "," + num(ratio) +
             "," + (ratio > 3.0 ? "CHECK" : "ok") + "\n";
        return s;
    };

    std::string content = "instrument,fd_value,mc_value,mc_std_error,deviation_ratio,flag\n";
    content += row("bond", fd_bond.value, mc_bond);
    content += row("cds", fd_cds.value, mc_cds);

    OutputSet files(cfg.out_dir);
    files.add(cfg.prefix + "_mc_verify.csv") = content;
    return files.commit();
}

std::vector<std::string> cmd_capital(const ScenarioConfig& cfg) {
    cfg.require("capital");
    const CapitalSpec& cap = cfg.capital;
    double remaining = cfg.has_bond ? cfg.bond.maturity : 1.0;
    double M = cap.basel_maturity(remaining);

    std::string content = "pd,correlation,maturity_adjustment,capital_ratio\n";
    const int n = 25;
    double lo = std::log(1e-4), hi = std::log(0.5);
    for (int i = 0; i < n; ++i) {
        double pd = std::exp(lo + (hi - lo) * static_cast<double>(i) / (n - 1));
        content += num(pd) + "," + num(correlation(pd, cap.avc)) + "," +
                   num(maturity_adjustment(pd, M)) + "," +
                   num(capital_ratio(pd, cap.lgd, M, cap.avc)) + "\n";
    }

    OutputSet files(cfg.out_dir);
    files.add(cfg.prefix + "_capital.csv") = content;
    return files.commit();
}

std::vector<std::string> cmd_regress(const ScenarioConfig& cfg, const std::string& input_csv) {
    TimeSeriesTable table = load_basis_csv(input_csv);
    RegressionResult res = regress_basis(table);

    std::string content = "term,coefficient,std_error\n";
    for (std::size_t i = 0; i < res.terms.size(); ++i)
        content += res.terms[i] + "," + num(res.coefficients[i]) + "," +
                   num(res.std_errors[i]) + "\n";
    content += "r_squared," + num(res.r_squared) + "\n";
    content += "n_obs," + std::to_string(res.n_obs) + "\n";

    OutputSet files(cfg.out_dir);
    files.add(cfg.prefix + "_regression.csv") = content;
    return files.commit();
}

}  // namespace fb
