#include "asianpde/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "asianpde/errors.hpp"

namespace asianpde {

Grid Grid::refined() const {
    Grid g = *this;
    g.n_x = 2 * n_x - 1;
    g.n_t = 2 * n_t - 1;
    return g;
}

void Grid::validate() const {
    if (n_x < 3 || n_t < 3) throw ConfigError("grid needs n_x, n_t >= 3");
    if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max))
        throw ConfigError("grid needs x_min < x_max");
    if (!(t_max > t_min) || !std::isfinite(t_min) || !std::isfinite(t_max))
        throw ConfigError("grid needs t_min < t_max");
}

GridSolution::GridSolution(Grid grid, SolutionComponent component, std::string source_id)
    : grid_(grid), component_(component), source_id_(std::move(source_id)) {
    grid_.validate();
    values_.assign(grid_.n_x * grid_.n_t, 0.0);
}

double GridSolution::interpolate(double t, double x) const {
    const double slack_t = 1e-12 * (grid_.t_max - grid_.t_min);
    const double slack_x = 1e-12 * (grid_.x_max - grid_.x_min);
    if (t < grid_.t_min - slack_t || t > grid_.t_max + slack_t || x < grid_.x_min - slack_x ||
        x > grid_.x_max + slack_x || std::isnan(t) || std::isnan(x))
        throw ConfigError("interpolation point outside the grid");
    const double pt = std::clamp((t - grid_.t_min) / grid_.dt(), 0.0, static_cast<double>(grid_.n_t - 1));
    const double px = std::clamp((x - grid_.x_min) / grid_.h(), 0.0, static_cast<double>(grid_.n_x - 1));
    const auto n = std::min(static_cast<std::size_t>(pt), grid_.n_t - 2);
    const auto j = std::min(static_cast<std::size_t>(px), grid_.n_x - 2);
    const double wt = pt - static_cast<double>(n);
    const double wx = px - static_cast<double>(j);
    const double lo = (1 - wx) * (*this)(n, j) + wx * (*this)(n, j + 1);
    const double hi = (1 - wx) * (*this)(n + 1, j) + wx * (*this)(n + 1, j + 1);
    return (1 - wt) * lo + wt * hi;
}

double GridSolution::maximum_principle_excess() const {
    double excess = 0.0;
    for (double v : values_) excess = std::max({excess, data_min - v, v - data_max});
    return excess;
}

void write_solution_csv(std::ostream& out, const GridSolution& sol) {
    const Grid& g = sol.grid();
    char buf[192];
    out << "# source_id=" << sol.source_id() << '\n';
    out << "# component=" << (sol.component() == SolutionComponent::u2 ? "u2" : "general") << '\n';
    std::snprintf(buf, sizeof buf, "# grid x=[%.17g,%.17g] n_x=%zu t=[%.17g,%.17g] n_t=%zu", g.x_min,
                  g.x_max, g.n_x, g.t_min, g.t_max, g.n_t);
    out << buf << '\n';
    out << "t,x,value\n";
    for (std::size_t n = 0; n < g.n_t; ++n)
        for (std::size_t j = 0; j < g.n_x; ++j) {
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g", g.t(n), g.x(j), sol(n, j));
            out << buf << '\n';
        }
}

}  // namespace asianpde
