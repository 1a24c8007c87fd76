#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>

#include "asianpde/errors.hpp"
#include "asianpde/pde.hpp"
#include "asianpde/rng.hpp"

namespace asianpde {

namespace {

// Cell index of coordinate `value` on a uniform axis, requiring two nodes of
// margin on each side of the cell.
std::size_t interior_cell(double value, double lo, double step, std::size_t count, const char* axis) {
    const double pos = (value - lo) / step;
    if (!std::isfinite(pos)) throw ConfigError(std::string("non-finite ") + axis + " probe");
    const double snapped = std::round(pos);
    const double p = std::fabs(pos - snapped) < 1e-9 ? snapped : pos;
    if (p < 2.0 || p > static_cast<double>(count) - 3.0)
        throw ConfigError(std::string("derivative probe within two nodes of the ") + axis + " edge");
    return static_cast<std::size_t>(p);
}

Derivatives nodal(const GridSolution& s, std::size_t n, std::size_t j) {
    const Grid& g = s.grid();
    const double h = g.h();
    const double dt = g.dt();
    Derivatives d;
    d.v_t = (s(n + 1, j) - s(n - 1, j)) / (2.0 * dt);
    d.v_x = (s(n, j + 1) - s(n, j - 1)) / (2.0 * h);
    d.v_xx = (s(n, j + 1) - 2.0 * s(n, j) + s(n, j - 1)) / (h * h);
    return d;
}

}  // namespace

Derivatives derivatives_at(const GridSolution& sol, double t, double x) {
    const Grid& g = sol.grid();
    const std::size_t n = interior_cell(t, g.t_min, g.dt(), g.n_t, "time");
    const std::size_t j = interior_cell(x, g.x_min, g.h(), g.n_x, "space");
    const double wt = std::clamp((t - g.t(n)) / g.dt(), 0.0, 1.0);
    const double wx = std::clamp((x - g.x(j)) / g.h(), 0.0, 1.0);

    Derivatives out;
    const std::pair<std::size_t, std::size_t> corners[] = {{n, j}, {n, j + 1}, {n + 1, j}, {n + 1, j + 1}};
    const double weights[] = {(1 - wt) * (1 - wx), (1 - wt) * wx, wt * (1 - wx), wt * wx};
    for (int c = 0; c < 4; ++c) {
        if (weights[c] == 0.0) continue;
        const auto d = nodal(sol, corners[c].first, corners[c].second);
        out.v_t += weights[c] * d.v_t;
        out.v_x += weights[c] * d.v_x;
        out.v_xx += weights[c] * d.v_xx;
    }
    return out;
}

double holder_seminorm(const GridSolution& sol, const Box& box, double alpha, std::size_t n_pairs,
                       std::uint64_t seed) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("Hoelder exponent must lie in (0, 1)");
    if (n_pairs == 0) throw ConfigError("n_pairs must be positive");
    const Grid& g = sol.grid();
    const double eps_t = 1e-9 * g.dt();
    const double eps_x = 1e-9 * g.h();
    std::vector<std::size_t> rows, cols;
    for (std::size_t n = 0; n < g.n_t; ++n)
        if (g.t(n) >= box.t_min - eps_t && g.t(n) <= box.t_max + eps_t) rows.push_back(n);
    for (std::size_t j = 0; j < g.n_x; ++j)
        if (g.x(j) >= box.x_min - eps_x && g.x(j) <= box.x_max + eps_x) cols.push_back(j);
    if (!(box.t_max >= box.t_min) || !(box.x_max > box.x_min) || cols.size() < 2 || rows.empty())
        throw ConfigError("degenerate subbox for Hoelder seminorm");

    SplitMix64 rng(mix64(seed));
    auto pick = [&](std::size_t count) {
        return static_cast<std::size_t>(rng.uniform() * static_cast<double>(count)) % count;
    };
    // Offset of magnitude 2^(U log2 count) in a random direction, clipped.
    auto local = [&](std::size_t base, std::size_t count) {
        if (count < 2) return base;
        const double mag = std::exp2(rng.uniform() * std::log2(static_cast<double>(count)));
        const auto step = static_cast<long long>(std::max(1.0, std::floor(mag)));
        long long k = static_cast<long long>(base) + (rng.uniform() < 0.5 ? -step : step);
        k = std::clamp<long long>(k, 0, static_cast<long long>(count) - 1);
        return static_cast<std::size_t>(k);
    };

    double best = 0.0;
    for (std::size_t p = 0; p < n_pairs; ++p) {
        const std::size_t a_r = pick(rows.size());
        const std::size_t a_c = pick(cols.size());
        std::size_t b_r, b_c;
        if (rng.uniform() < 0.5) {
            b_r = pick(rows.size());
            b_c = pick(cols.size());
        } else {
            b_c = local(a_c, cols.size());
            b_r = rng.uniform() < 0.5 ? a_r : local(a_r, rows.size());
        }
        if (a_r == b_r && a_c == b_c) continue;
        const double t1 = g.t(rows[a_r]), t2 = g.t(rows[b_r]);
        const double x1 = g.x(cols[a_c]), x2 = g.x(cols[b_c]);
        const double dist = std::max(std::sqrt(std::fabs(t1 - t2)), std::fabs(x1 - x2));
        const double diff = std::fabs(sol(rows[a_r], cols[a_c]) - sol(rows[b_r], cols[b_c]));
        best = std::max(best, diff / std::pow(dist, alpha));
    }
    return best;
}

ConvergenceResult convergence_order(const ConvergenceProblem& problem,
                                    const std::vector<RefinementLevel>& levels) {
    if (levels.size() < 3) throw ConfigError("convergence study needs >= 3 refinement levels");
    std::set<std::size_t> seen;
    for (const auto& l : levels)
        if (!seen.insert(l.n_x).second) throw ConfigError("duplicated refinement level");
    if (problem.probes.empty()) throw ConfigError("convergence study needs probe points");

    auto sorted = levels;
    std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.n_x < b.n_x; });

    ConvergenceResult result;
    std::vector<std::vector<double>> probe_values;
    for (const auto& l : sorted) {
        Grid g{problem.box.x_min, problem.box.x_max, l.n_x, l.n_t, problem.box.t_min, problem.box.t_max};
        const auto sol = solve_general(problem.coef, problem.graph, problem.data, g);
        result.max_principle_excess = std::max(result.max_principle_excess, sol.maximum_principle_excess());
        std::vector<double> vals;
        for (const auto& [t, x] : problem.probes) vals.push_back(sol.interpolate(t, x));
        probe_values.push_back(std::move(vals));
        result.h.push_back(g.h());
    }

    double scale = 0.0;
    const auto& finest = probe_values.back();
    for (double v : finest) scale = std::max(scale, std::fabs(v));
    const std::size_t fitted = problem.exact ? sorted.size() : sorted.size() - 1;
    for (std::size_t l = 0; l < fitted; ++l) {
        double err = 0.0;
        for (std::size_t p = 0; p < problem.probes.size(); ++p) {
            const double ref = problem.exact ? problem.exact(problem.probes[p].first, problem.probes[p].second)
                                             : finest[p];
            err = std::max(err, std::fabs(probe_values[l][p] - ref));
        }
        result.errors.push_back(err);
    }
    result.h.resize(fitted);

    const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
    if (std::all_of(result.errors.begin(), result.errors.end(), [&](double e) { return e <= floor; })) {
        result.exact = true;
        result.order = std::numeric_limits<double>::infinity();
        return result;
    }
    for (std::size_t l = 1; l < result.errors.size(); ++l)
        if (!(result.errors[l] < result.errors[l - 1])) result.monotone = false;
    if (!result.monotone || std::any_of(result.errors.begin(), result.errors.end(), [](double e) { return e <= 0.0; })) {
        result.monotone = false;
        return result;
    }

    // Least-squares slope of log(error) against log(h).
    double mx = 0, my = 0;
    const double m = static_cast<double>(result.errors.size());
    for (std::size_t l = 0; l < result.errors.size(); ++l) {
        mx += std::log(result.h[l]);
        my += std::log(result.errors[l]);
    }
    mx /= m;
    my /= m;
    double sxy = 0, sxx = 0;
    for (std::size_t l = 0; l < result.errors.size(); ++l) {
        const double dx = std::log(result.h[l]) - mx;
        sxy += dx * (std::log(result.errors[l]) - my);
        sxx += dx * dx;
    }
    result.order = sxy / sxx;
    return result;
}

}  // namespace asianpde
