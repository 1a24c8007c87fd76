#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "asianpde/errors.hpp"

namespace asianpde {

/// Thomas algorithm for lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
/// lower[0] and upper[n-1] are ignored. The solution overwrites rhs.
///
/// Only weakly diagonally dominant systems are accepted; that is the
/// condition under which no pivoting is needed and the elimination is stable.
class TridiagonalSolver {
public:
    explicit TridiagonalSolver(std::size_t n) : scratch_(n) {}

    void solve(std::span<const double> lower, std::span<const double> diag,
               std::span<const double> upper, std::span<double> rhs) {
        const std::size_t n = diag.size();
        if (n == 0) return;
        if (scratch_.size() < n) scratch_.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double off = (i > 0 ? std::fabs(lower[i]) : 0.0) + (i + 1 < n ? std::fabs(upper[i]) : 0.0);
            if (!(std::fabs(diag[i]) >= off) || diag[i] == 0.0)
                throw NumericalError("tridiagonal system is not diagonally dominant");
        }
        double denom = diag[0];
        scratch_[0] = n > 1 ? upper[0] / denom : 0.0;
        rhs[0] /= denom;
        for (std::size_t i = 1; i < n; ++i) {
            denom = diag[i] - lower[i] * scratch_[i - 1];
            if (denom == 0.0) throw NumericalError("singular tridiagonal pivot");
            scratch_[i] = i + 1 < n ? upper[i] / denom : 0.0;
            rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
        }
        for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= scratch_[i] * rhs[i + 1];
    }

private:
    std::vector<double> scratch_;
};

}  // namespace asianpde
