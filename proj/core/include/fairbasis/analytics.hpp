#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace fb {

// Daily observations of the cash-synthetic basis and the two stress proxies.
// Units pass through as loaded; the reference schema carries basis and lois in
// percent and vix in index points.
struct TimeSeriesTable {
    std::vector<std::string> dates;  // ISO-8601, strictly increasing
    std::vector<double> basis, lois, vix;

    std::size_t size() const { return dates.size(); }
};

// Loads the `date,basis,lois,vix` schema; malformed cells and out-of-order
// dates are reported with their data row number.
TimeSeriesTable load_basis_csv(const std::string& path);

struct RegressionResult {
    std::vector<std::string> terms;
    std::vector<double> coefficients, std_errors;
    double r_squared = 0.0;
    std::size_t n_obs = 0;
    bool degenerate = false;  // constant response, R^2 pinned to 0
};

// Classical OLS through the normal equations (Cholesky), SE from
// sigma^2 (X'X)^-1 with sigma^2 = RSS/(n-k). Rows of x must carry an
// explicit intercept column where one is wanted.
RegressionResult ols(const std::vector<double>& y,
                     const std::vector<std::vector<double>>& x,
                     const std::vector<std::string>& terms);

// basis ~ intercept + lois + vix.
RegressionResult regress_basis(const TimeSeriesTable& table);

}  // namespace fb
