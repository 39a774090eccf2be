#include "fairbasis/tridiagonal.hpp"

#include <cmath>
#include <stdexcept>

namespace fb {

void Tridiagonal::multiply(const std::vector<double>& x, std::vector<double>& y) const {
    std::size_t n = size();
    if (x.size() != n) throw std::invalid_argument("Tridiagonal::multiply: size mismatch");
    y.resize(n);
    if (n == 1) {
        y[0] = diag[0] * x[0];
        return;
    }
    y[0] = diag[0] * x[0] + upper[0] * x[1];
    for (std::size_t i = 1; i + 1 < n; ++i)
        y[i] = lower[i] * x[i - 1] + diag[i] * x[i] + upper[i] * x[i + 1];
    y[n - 1] = lower[n - 1] * x[n - 2] + diag[n - 1] * x[n - 1];
}

void Tridiagonal::solve(std::vector<double>& rhs, std::vector<double>& scratch) const {
    std::size_t n = size();
    if (rhs.size() != n || scratch.size() != n)
        throw std::invalid_argument("Tridiagonal::solve: size mismatch");
    double piv = diag[0];
    if (piv == 0.0) throw std::runtime_error("Tridiagonal::solve: zero pivot");
    scratch[0] = upper[0] / piv;
    rhs[0] /= piv;
    for (std::size_t i = 1; i < n; ++i) {
        piv = diag[i] - lower[i] * scratch[i - 1];
        if (piv == 0.0 || !std::isfinite(piv))
            throw std::runtime_error("Tridiagonal::solve: zero pivot");
        scratch[i] = upper[i] / piv;
        rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / piv;
    }
    for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch[i] * rhs[i + 1];
}

}  // namespace fb
