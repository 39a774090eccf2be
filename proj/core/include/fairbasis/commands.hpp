#pragma once

#include <string>
#include <vector>

#include "fairbasis/config.hpp"

namespace fb {

// Commands compute everything first, then write their files in one
// temp-and-rename pass, so a failure leaves no partial outputs. Each returns
// the paths written.
std::vector<std::string> cmd_price(const ScenarioConfig& cfg, const std::string& instrument);
std::vector<std::string> cmd_fair_basis(const ScenarioConfig& cfg);
std::vector<std::string> cmd_jtd_profile(const ScenarioConfig& cfg);
std::vector<std::string> cmd_mc_verify(const ScenarioConfig& cfg);
std::vector<std::string> cmd_capital(const ScenarioConfig& cfg);
std::vector<std::string> cmd_regress(const ScenarioConfig& cfg, const std::string& input_csv);

}  // namespace fb
