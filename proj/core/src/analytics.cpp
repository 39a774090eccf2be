#include "fairbasis/analytics.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
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

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parse_cell(const std::string& cell, std::size_t row, const char* column) {
    const char* begin = cell.c_str();
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (cell.empty() || end != begin + cell.size() || !std::isfinite(v))
        throw std::runtime_error("csv row " + std::to_string(row) + ": bad " + column +
                                 " value '" + cell + "'");
    return v;
}

// Solves the k x k normal equations in place. a is row-major symmetric
// positive definite; returns the Cholesky factor for reuse.
std::vector<double> cholesky(std::vector<double> a, std::size_t k) {
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i * k + j];
            for (std::size_t p = 0; p < j; ++p) s -= a[i * k + p] * a[j * k + p];
            if (i == j) {
                if (!(s > 0.0) || !std::isfinite(s))
                    throw std::runtime_error("singular design matrix");
                a[i * k + i] = std::sqrt(s);
            } else {
                a[i * k + j] = s / a[j * k + j];
            }
        }
    }
    return a;
}

std::vector<double> chol_solve(const std::vector<double>& L, std::size_t k,
                               std::vector<double> b) {
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < i; ++j) b[i] -= L[i * k + j] * b[j];
        b[i] /= L[i * k + i];
    }
    for (std::size_t i = k; i-- > 0;) {
        for (std::size_t j = i + 1; j < k; ++j) b[i] -= L[j * k + i] * b[j];
        b[i] /= L[i * k + i];
    }
    return b;
}

}  // namespace

TimeSeriesTable load_basis_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error(path + ": empty file");
    {
        std::vector<std::string> header = split_csv(line);
        const char* expected[] = {"date", "basis", "lois", "vix"};
        if (header.size() != 4)
            throw std::runtime_error(path + ": header must be date,basis,lois,vix");
        for (std::size_t c = 0; c < 4; ++c)
            if (header[c] != expected[c])
                throw std::runtime_error(path + ": missing or misplaced column '" +
                                         expected[c] + "'");
    }

    TimeSeriesTable t;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        std::vector<std::string> cells = split_csv(line);
        if (cells.size() != 4)
            throw std::runtime_error("csv row " + std::to_string(row) + ": expected 4 cells, got " +
                                     std::to_string(cells.size()));
        if (cells[0].empty())
            throw std::runtime_error("csv row " + std::to_string(row) + ": empty date");
        if (!t.dates.empty() && cells[0] <= t.dates.back())
            throw std::runtime_error("csv row " + std::to_string(row) +
                                     ": dates must be strictly increasing");
        t.dates.push_back(cells[0]);
        t.basis.push_back(parse_cell(cells[1], row, "basis"));
        t.lois.push_back(parse_cell(cells[2], row, "lois"));
        t.vix.push_back(parse_cell(cells[3], row, "vix"));
    }
    return t;
}

RegressionResult ols(const std::vector<double>& y,
                     const std::vector<std::vector<double>>& x,
                     const std::vector<std::string>& terms) {
    std::size_t n = y.size();
    if (n == 0 || x.size() != n) throw std::invalid_argument("ols: y and x row counts differ");
    std::size_t k = x[0].size();
    if (k == 0 || k > n) throw std::invalid_argument("ols: need 1 <= k <= n regressors");
    if (terms.size() != k) throw std::invalid_argument("ols: one term name per column");
    for (const auto& row : x)
        if (row.size() != k) throw std::invalid_argument("ols: ragged design matrix");

    std::vector<double> xtx(k * k, 0.0), xty(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t p = 0; p < k; ++p) {
            xty[p] += x[i][p] * y[i];
            for (std::size_t q = 0; q <= p; ++q) xtx[p * k + q] += x[i][p] * x[i][q];
        }
    }
    for (std::size_t p = 0; p < k; ++p)
        for (std::size_t q = p + 1; q < k; ++q) xtx[p * k + q] = xtx[q * k + p];

    std::vector<double> L = cholesky(xtx, k);
    std::vector<double> beta = chol_solve(L, k, xty);

    double rss = 0.0, mean = 0.0;
    for (double v : y) mean += v;
    mean /= static_cast<double>(n);
    double tss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = 0.0;
        for (std::size_t p = 0; p < k; ++p) fit += x[i][p] * beta[p];
        rss += (y[i] - fit) * (y[i] - fit);
        tss += (y[i] - mean) * (y[i] - mean);
    }

    RegressionResult res;
    res.terms = terms;
    res.coefficients = beta;
    res.n_obs = n;
    res.degenerate = tss <= 0.0;
    res.r_squared = res.degenerate ? 0.0 : std::max(0.0, 1.0 - rss / tss);

    double sigma2 = n > k ? rss / static_cast<double>(n - k) : 0.0;
    res.std_errors.resize(k);
    std::vector<double> e(k, 0.0);
    for (std::size_t p = 0; p < k; ++p) {
        e.assign(k, 0.0);
        e[p] = 1.0;
        std::vector<double> col = chol_solve(L, k, e);
        res.std_errors[p] = std::sqrt(std::max(sigma2 * col[p], 0.0));
    }
    return res;
}

RegressionResult regress_basis(const TimeSeriesTable& table) {
    if (table.size() < 10)
        throw std::invalid_argument("regression needs at least 10 observations");
    std::vector<std::vector<double>> x(table.size());
    for (std::size_t i = 0; i < table.size(); ++i)
        x[i] = {1.0, table.lois[i], table.vix[i]};
    return ols(table.basis, x, {"intercept", "lois", "vix"});
}

}  // namespace fb
