#include <cstdint>
#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "fairbasis/commands.hpp"
#include "fairbasis/config.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool has_seed = false;
    bool has_out = false;
};

void attach_common(CLI::App* sub, CommonArgs& args, bool config_required) {
    auto* c = sub->add_option("--config", args.config_path, "scenario config file");
    if (config_required) c->required();
    sub->add_option("--seed", args.seed, "override numerics.seed")
        ->each([&args](const std::string&) { args.has_seed = true; });
    sub->add_option("--out", args.out_dir, "override output.dir")
        ->each([&args](const std::string&) { args.has_out = true; });
}

fb::ScenarioConfig load(const CommonArgs& args) {
    fb::ScenarioConfig cfg;
    if (!args.config_path.empty()) cfg = fb::parse_config_file(args.config_path);
    if (args.has_seed) cfg.mc.seed = args.seed;
    if (args.has_out) cfg.out_dir = args.out_dir;
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"bond-cds basis and credit pricing engine"};
    app.require_subcommand(1);

    CommonArgs price_args, basis_args, jtd_args, mc_args, cap_args, reg_args;
    std::string instrument, input_csv;

    CLI::App* price = app.add_subcommand("price", "price one instrument risk-neutrally");
    attach_common(price, price_args, true);
    price->add_option("--instrument", instrument, "bond, cds, floating-bond or survival")
        ->required();

    CLI::App* basis = app.add_subcommand("fair-basis", "funding/capital-adjusted basis report");
    attach_common(basis, basis_args, true);

    CLI::App* jtd = app.add_subcommand("jtd-profile", "jump-to-default loss across lambda");
    attach_common(jtd, jtd_args, true);

    CLI::App* mcv = app.add_subcommand("mc-verify", "finite-difference vs Monte Carlo check");
    attach_common(mcv, mc_args, true);

    CLI::App* cap = app.add_subcommand("capital", "regulatory capital ratio sweep");
    attach_common(cap, cap_args, true);

    CLI::App* reg = app.add_subcommand("regress", "basis regression on lois and vix");
    attach_common(reg, reg_args, false);
    reg->add_option("--input", input_csv, "csv with date,basis,lois,vix")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        std::vector<std::string> written;
        if (price->parsed()) written = fb::cmd_price(load(price_args), instrument);
        if (basis->parsed()) written = fb::cmd_fair_basis(load(basis_args));
        if (jtd->parsed()) written = fb::cmd_jtd_profile(load(jtd_args));
        if (mcv->parsed()) written = fb::cmd_mc_verify(load(mc_args));
        if (cap->parsed()) written = fb::cmd_capital(load(cap_args));
        if (reg->parsed()) written = fb::cmd_regress(load(reg_args), input_csv);
        for (const auto& path : written) std::printf("wrote %s\n", path.c_str());
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
