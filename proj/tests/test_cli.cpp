#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

const char* kScenario =
    "model.kind = constant\n"
    "model.lambda0 = 0.03\n"
    "market.r = 0.02\n"
    "market.r_p = 0.0215\n"
    "market.r_1 = 0.034\n"
    "market.r_b = 0.034\n"
    "market.r_k = 0.12\n"
    "market.h = 0.1\n"
    "market.epsilon = 0.05\n"
    "bond.coupon = 0.05\n"
    "bond.maturity = 5\n"
    "bond.recovery = 0.4\n"
    "cds.premium = 0.018\n"
    "cds.maturity = 5\n"
    "cds.recovery = 0.4\n"
    "capital.mode = fixed_exposure\n"
    "capital.fixed_exposure = 0.25\n"
    "numerics.n_lambda = 41\n"
    "numerics.n_steps = 200\n"
    "numerics.mc_paths = 2000\n"
    "numerics.mc_steps_per_year = 100\n"
    "numerics.seed = 1\n";

int run(const std::string& args) {
    std::string cmd = std::string("\"") + FAIRBASIS_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path fresh_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / "fairbasis_cli_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_scenario(const fs::path& dir, const std::string& extra = "") {
    fs::path p = dir / "scenario.cfg";
    std::ofstream out(p);
    out << kScenario << extra;
    return p;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// value of the `key,...` row's second cell, NaN when absent
double csv_value(const std::string& content, const std::string& key) {
    std::stringstream ss(content);
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind(key + ",", 0) == 0) {
            std::string cell = line.substr(key.size() + 1);
            std::size_t comma = cell.find(',');
            if (comma != std::string::npos) cell = cell.substr(0, comma);
            return std::strtod(cell.c_str(), nullptr);
        }
    }
    return std::nan("");
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

TEST_CASE("cli rejects malformed invocations") {
    CHECK(run("") != 0);
    CHECK(run("price") != 0);
    fs::path dir = fresh_dir("badargs");
    fs::path cfg = write_scenario(dir);
    CHECK(run("price --config \"" + cfg.string() + "\" --instrument swaption") != 0);
}

TEST_CASE("price command writes the closed-form bond value") {
    fs::path dir = fresh_dir("price");
    fs::path cfg = write_scenario(dir);
    CHECK(run("price --config \"" + cfg.string() + "\" --instrument bond --out \"" +
              dir.string() + "\"") == 0);
    std::string content = read_file(dir / "fairbasis_price_bond.csv");
    REQUIRE(!content.empty());
    double rho = 0.02 + 0.03;
    double ann = -std::expm1(-rho * 5.0) / rho;
    double cf = std::exp(-rho * 5.0) + (0.05 + 0.03 * 0.4) * ann;
    CHECK(std::abs(csv_value(content, "value") - cf) < 5e-6);
    CHECK(std::isfinite(csv_value(content, "delta")));
    CHECK(std::isfinite(csv_value(content, "gamma")));
}

TEST_CASE("price command reports survival to bond maturity") {
    fs::path dir = fresh_dir("survival");
    fs::path cfg = write_scenario(dir);
    CHECK(run("price --config \"" + cfg.string() + "\" --instrument survival --out \"" +
              dir.string() + "\"") == 0);
    std::string content = read_file(dir / "fairbasis_price_survival.csv");
    CHECK(std::abs(csv_value(content, "value") - std::exp(-0.15)) < 1e-4);
}

TEST_CASE("fair-basis output is byte-stable across reruns") {
    fs::path a = fresh_dir("basis_a");
    fs::path b = fresh_dir("basis_b");
    fs::path cfg = write_scenario(a);
    std::string base = "fair-basis --config \"" + cfg.string() + "\" --out \"";
    CHECK(run(base + a.string() + "\"") == 0);
    CHECK(run(base + b.string() + "\"") == 0);
    for (const char* name :
         {"fairbasis_report.csv", "fairbasis_hedge_ratio.csv", "fairbasis_jtd_profile.csv",
          "fairbasis_capital_profile.csv", "fairbasis_mbar_slice.csv"}) {
        REQUIRE(fs::exists(a / name));
        CHECK(read_file(a / name) == read_file(b / name));
    }
    CHECK(run(base + a.string() + "\"") == 0);  // overwrite in place
    CHECK(read_file(a / "fairbasis_report.csv") == read_file(b / "fairbasis_report.csv"));

    std::string report = read_file(a / "fairbasis_report.csv");
    double b_star = csv_value(report, "b_star");
    double b_fair = csv_value(report, "b_fair");
    double xva = csv_value(report, "xva");
    CHECK(std::abs(xva - (b_star - b_fair)) < 1e-7);
}

TEST_CASE("mc-verify honors the seed override") {
    fs::path a = fresh_dir("mcv_a");
    fs::path b = fresh_dir("mcv_b");
    fs::path c = fresh_dir("mcv_c");
    fs::path cfg = write_scenario(a);
    std::string base = "mc-verify --config \"" + cfg.string() + "\"";
    CHECK(run(base + " --seed 1 --out \"" + a.string() + "\"") == 0);
    CHECK(run(base + " --seed 1 --out \"" + b.string() + "\"") == 0);
    CHECK(run(base + " --seed 2 --out \"" + c.string() + "\"") == 0);
    std::string ra = read_file(a / "fairbasis_mc_verify.csv");
    std::string rb = read_file(b / "fairbasis_mc_verify.csv");
    std::string rc = read_file(c / "fairbasis_mc_verify.csv");
    CHECK(ra == rb);
    CHECK(ra != rc);

    std::stringstream sa(ra), sc(rc);
    std::string ha, la_bond, hc, lc_bond;
    std::getline(sa, ha);
    std::getline(sa, la_bond);
    std::getline(sc, hc);
    std::getline(sc, lc_bond);
    auto ca = split(la_bond), cc = split(lc_bond);
    REQUIRE(ca.size() == 6);
    REQUIRE(cc.size() == 6);
    CHECK(ca[1] == cc[1]);  // fd value is seed-independent
    CHECK(ca[2] != cc[2]);  // mc value moves with the seed
    CHECK(ca[5] == "ok");
}

TEST_CASE("failed runs leave no partial outputs") {
    fs::path dir = fresh_dir("fail");
    fs::path cfg = dir / "broken.cfg";
    std::ofstream(cfg) << kScenario << "market.bogus = 1\n";
    fs::path out = dir / "out";
    CHECK(run("fair-basis --config \"" + cfg.string() + "\" --out \"" + out.string() + "\"") != 0);
    bool any_csv = false;
    if (fs::exists(out))
        for (const auto& e : fs::directory_iterator(out))
            any_csv = any_csv || e.path().extension() == ".csv";
    CHECK(!any_csv);
}

TEST_CASE("jtd-profile command writes a decreasing curve") {
    fs::path dir = fresh_dir("jtd");
    fs::path cfg = write_scenario(dir);
    CHECK(run("jtd-profile --config \"" + cfg.string() + "\" --out \"" + dir.string() + "\"") == 0);
    std::string content = read_file(dir / "fairbasis_jtd_profile.csv");
    std::stringstream ss(content);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "lambda,value");
    double prev_lam = -1.0, prev_val = 1e300;
    std::size_t rows = 0;
    while (std::getline(ss, line)) {
        auto cells = split(line);
        REQUIRE(cells.size() == 2);
        double lam = std::strtod(cells[0].c_str(), nullptr);
        double val = std::strtod(cells[1].c_str(), nullptr);
        CHECK(lam > prev_lam);
        CHECK(val < prev_val);
        prev_lam = lam;
        prev_val = val;
        ++rows;
    }
    CHECK(rows == 41);
}

TEST_CASE("capital command sweeps the pd grid") {
    fs::path dir = fresh_dir("capital");
    fs::path cfg = write_scenario(dir);
    CHECK(run("capital --config \"" + cfg.string() + "\" --out \"" + dir.string() + "\"") == 0);
    std::string content = read_file(dir / "fairbasis_capital.csv");
    std::stringstream ss(content);
    std::string line;
    std::getline(ss, line);
    CHECK(line == "pd,correlation,maturity_adjustment,capital_ratio");
    double prev_pd = 0.0;
    std::size_t rows = 0;
    while (std::getline(ss, line)) {
        auto cells = split(line);
        REQUIRE(cells.size() == 4);
        double pd = std::strtod(cells[0].c_str(), nullptr);
        double k = std::strtod(cells[3].c_str(), nullptr);
        CHECK(pd > prev_pd);
        CHECK(k >= 0.0);
        prev_pd = pd;
        ++rows;
    }
    CHECK(rows == 25);
}

TEST_CASE("regress command fits the packaged series") {
    fs::path dir = fresh_dir("regress");
    fs::path input = fs::path(FAIRBASIS_DATA_DIR) / "synthetic_basis.csv";
    REQUIRE(fs::exists(input));
    CHECK(run("regress --input \"" + input.string() + "\" --out \"" + dir.string() + "\"") == 0);
    std::string content = read_file(dir / "fairbasis_regression.csv");
    REQUIRE(!content.empty());
    CHECK(content.rfind("term,coefficient,std_error\n", 0) == 0);
    CHECK(std::isfinite(csv_value(content, "intercept")));
    CHECK(std::isfinite(csv_value(content, "lois")));
    CHECK(std::isfinite(csv_value(content, "vix")));
    double r2 = csv_value(content, "r_squared");
    CHECK(r2 > 0.0);
    CHECK(r2 <= 1.0);
    CHECK(csv_value(content, "n_obs") == 3000.0);
}
