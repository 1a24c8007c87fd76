#include "asianpde/pde.hpp"

#include <algorithm>
#include <cmath>

#include "asianpde/errors.hpp"
#include "asianpde/tridiagonal.hpp"

namespace asianpde {

Grid default_u2_grid(const DriftCurve& drift, std::size_t n_x, std::size_t n_t) {
    const double ell = drift.ell();
    Grid g;
    g.x_min = -std::max(4.0, 4.0 * ell);
    g.x_max = ell + std::max(2.0, 2.0 * ell);
    g.n_x = n_x;
    g.n_t = n_t;
    g.t_min = 0.0;
    g.t_max = drift.maturity();
    return g;
}

GridSolution solve_u2(const DriftCurve& drift, const Grid& grid, double sigma) {
    grid.validate();
    const double T = drift.maturity();
    if (grid.t_min != 0.0 || std::fabs(grid.t_max - T) > 1e-12 * T)
        throw ConfigError("u2 grid must span reversed time [0, T]");
    if (!(grid.x_min < 0.0 && drift.ell() < grid.x_max))
        throw ConfigError("u2 grid must bracket the degeneracy curve: x_min < 0 < b(0) < x_max");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be positive");

    GridSolution sol(grid, SolutionComponent::u2, drift.id());
    const std::size_t nx = grid.n_x;
    const double h = grid.h();
    const double dt = grid.dt();
    const double left = -grid.x_min;

    for (std::size_t j = 0; j < nx; ++j) sol.at(0, j) = std::max(-grid.x(j), 0.0);
    sol.at(0, nx - 1) = 0.0;
    sol.data_min = 0.0;
    sol.data_max = left;

    std::vector<double> lower(nx), diag(nx), upper(nx), rhs(nx);
    TridiagonalSolver thomas(nx);
    const double scale = 0.5 * sigma * sigma * dt / (h * h);
    for (std::size_t n = 1; n < grid.n_t; ++n) {
        const double psi = drift.psi(grid.t(n));
        auto prev = sol.row(n - 1);
        for (std::size_t j = 1; j + 1 < nx; ++j) {
            const double d = grid.x(j) - psi;
            const double lam = scale * d * d;
            lower[j] = -lam;
            upper[j] = -lam;
            diag[j] = 1.0 + 2.0 * lam;
            rhs[j] = prev[j];
        }
        lower[0] = upper[0] = 0.0;
        diag[0] = 1.0;
        rhs[0] = left;
        lower[nx - 1] = upper[nx - 1] = 0.0;
        diag[nx - 1] = 1.0;
        rhs[nx - 1] = 0.0;
        thomas.solve(lower, diag, upper, rhs);
        std::copy(rhs.begin(), rhs.end(), sol.row(n).begin());
    }
    return sol;
}

double price_from_u2(const GridSolution& u2, double t, double x) {
    if (u2.component() != SolutionComponent::u2) throw ConfigError("price needs a u2 solution");
    return x + u2.interpolate(u2.grid().t_max - t, x);
}

double vanishing_region_sup(const GridSolution& u2, const DriftCurve& drift, double offset) {
    const Grid& g = u2.grid();
    double sup = 0.0;
    for (std::size_t n = 0; n < g.n_t; ++n) {
        const double edge = drift.psi(g.t(n)) + offset;
        for (std::size_t j = 0; j < g.n_x; ++j)
            if (g.x(j) >= edge) sup = std::max(sup, std::fabs(u2(n, j)));
    }
    return sup;
}

CoefficientField CoefficientField::constant(double value) {
    if (!(value >= 0.0)) throw ConfigError("coefficient must be nonnegative");
    CoefficientField c;
    c.a = [value](double, double) { return value; };
    c.id = "constant";
    return c;
}

CoefficientField CoefficientField::graph_power(std::function<double(double)> phi, double mu,
                                               double Lambda, double M0) {
    if (!(mu > 0.0) || !(Lambda > 0.0) || !(M0 > 0.0))
        throw ConfigError("graph_power needs mu, Lambda, M0 > 0");
    CoefficientField c;
    c.a = [phi = std::move(phi), mu, Lambda](double t, double x) {
        return Lambda * std::pow(std::fabs(phi(x) - t), mu);
    };
    // |grad a| <= Lambda mu sqrt(1 + M0^2) |phi - t|^{mu - 1}
    c.bounds = GraphDistanceBounds{mu, Lambda, Lambda, M0, Lambda * mu * std::sqrt(1.0 + M0 * M0)};
    c.id = "graph-power";
    return c;
}

GridSolution solve_general(const CoefficientField& coef, const std::optional<GraphSpec>& graph,
                           const BoundaryData& data, const Grid& grid) {
    grid.validate();
    if (!coef.a) throw ConfigError("coefficient field has no evaluator");
    if (!data) throw ConfigError("boundary data missing");
    const std::size_t nx = grid.n_x;
    const double h = grid.h();
    const double dt = grid.dt();

    std::vector<double> phi;
    if (graph) {
        if (!graph->phi) throw ConfigError("graph has no evaluator");
        phi.resize(nx);
        for (std::size_t j = 0; j < nx; ++j) phi[j] = graph->phi(grid.x(j));
        double lip = graph->M0;
        if (coef.bounds) lip = std::min(lip, coef.bounds->M0);
        for (std::size_t j = 0; j + 1 < nx; ++j)
            if (std::fabs(phi[j + 1] - phi[j]) > lip * h * (1.0 + 1e-9) + 1e-15)
                throw ConfigError("graph is not Lipschitz within the declared M0");
    }
    auto active = [&](std::size_t n, std::size_t j) { return phi.empty() || grid.t(n) > phi[j]; };

    GridSolution sol(grid, SolutionComponent::general, coef.id);
    double lo = graph ? 0.0 : std::numeric_limits<double>::infinity();
    double hi = graph ? 0.0 : -std::numeric_limits<double>::infinity();
    auto boundary = [&](std::size_t n, std::size_t j) {
        if (!active(n, j)) return 0.0;
        const double v = data(grid.t(n), grid.x(j));
        if (!std::isfinite(v)) throw ConfigError("boundary data not finite");
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        return v;
    };

    for (std::size_t j = 0; j < nx; ++j) sol.at(0, j) = boundary(0, j);

    std::vector<double> lower(nx), diag(nx), upper(nx), rhs(nx);
    TridiagonalSolver thomas(nx);
    for (std::size_t n = 1; n < grid.n_t; ++n) {
        const double t = grid.t(n);
        auto prev = sol.row(n - 1);
        for (std::size_t j = 0; j < nx; ++j) {
            const bool edge = j == 0 || j + 1 == nx;
            if (edge || !active(n, j)) {
                lower[j] = upper[j] = 0.0;
                diag[j] = 1.0;
                rhs[j] = edge ? boundary(n, j) : 0.0;
                continue;
            }
            const double a = coef.a(t, grid.x(j));
            if (!(a >= 0.0) || !std::isfinite(a))
                throw ConfigError("coefficient must be finite and nonnegative");
            const double lam = a * dt / (h * h);
            lower[j] = -lam;
            upper[j] = -lam;
            diag[j] = 1.0 + 2.0 * lam;
            rhs[j] = prev[j];
        }
        thomas.solve(lower, diag, upper, rhs);
        std::copy(rhs.begin(), rhs.end(), sol.row(n).begin());
    }
    sol.data_min = lo;
    sol.data_max = hi;
    return sol;
}

}  // namespace asianpde
