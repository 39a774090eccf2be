#pragma once

#include <cstddef>
#include <vector>

namespace fb {

// Tridiagonal system with rows (lower[i], diag[i], upper[i]); lower[0] and
// upper[n-1] are ignored. Solved in place with the Thomas algorithm, no
// pivoting; callers are responsible for diagonal dominance.
struct Tridiagonal {
    std::vector<double> lower, diag, upper;

    explicit Tridiagonal(std::size_t n) : lower(n), diag(n), upper(n) {}
    std::size_t size() const { return diag.size(); }

    // y = M x
    void multiply(const std::vector<double>& x, std::vector<double>& y) const;
    // Solves M x = rhs, overwriting rhs with x. scratch must have size() entries.
    void solve(std::vector<double>& rhs, std::vector<double>& scratch) const;
};

}  // namespace fb
