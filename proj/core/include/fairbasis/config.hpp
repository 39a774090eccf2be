#pragma once

#include <string>

#include "fairbasis/capital.hpp"
#include "fairbasis/grid.hpp"
#include "fairbasis/intensity.hpp"
#include "fairbasis/mc.hpp"
#include "fairbasis/types.hpp"

namespace fb {

// A scenario file is flat `section.key = value` text; `#` starts a comment.
// Sections mirror the pricing inputs; numerics and output fall back to the
// defaults below when absent. Parsing reports the offending key on error.
struct ScenarioConfig {
    IntensityModel model;
    MarketEnv market;
    BondSpec bond;
    CdsSpec cds;
    CapitalSpec capital;
    GridSpec grid;
    McConfig mc;
    std::string out_dir = ".";
    std::string prefix = "fairbasis";

    bool has_model = false;
    bool has_market = false;
    bool has_bond = false;
    bool has_cds = false;
    bool has_capital = false;

    // Presence checks for a command's needs; throws naming the section.
    void require(const char* section) const;
};

ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

// Emits a file parse_config_text maps back to the identical struct.
std::string serialize_config(const ScenarioConfig& cfg);

}  // namespace fb
