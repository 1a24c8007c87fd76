#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "asianpde/grid.hpp"
#include "asianpde/strategy.hpp"

namespace asianpde {

// ---------------------------------------------------------------------------
// Pricing problem
// ---------------------------------------------------------------------------

/// Default truncation for the pricing solve: x_min = -max(4, 4 b(0)),
/// x_max = b(0) + max(2, 2 b(0)), reversed time over [0, T].
Grid default_u2_grid(const DriftCurve& drift, std::size_t n_x, std::size_t n_t);

/// Backward-Euler solve of v_tau = (sigma^2 / 2) (x - psi(tau))^2 v_xx,
/// v(0, x) = (-x)_+, v(tau, x_min) = -x_min, v(tau, x_max) = 0,
/// where v(tau, x) = u2(T - tau, x) and psi(tau) = b(T - tau).
GridSolution solve_u2(const DriftCurve& drift, const Grid& grid, double sigma = 1.0);

/// u(t, x) = x + u2(t, x) read off a solve_u2 result.
double price_from_u2(const GridSolution& u2, double t, double x);

/// sup |v| over nodes with x >= psi(tau) + offset.
double vanishing_region_sup(const GridSolution& u2, const DriftCurve& drift, double offset);

// ---------------------------------------------------------------------------
// Model problems u_t = a(t, x) u_xx above a graph t = phi(x)
// ---------------------------------------------------------------------------

/// lambda |phi(x) - t|^mu <= a(t, x) <= Lambda |phi(x) - t|^mu with |phi'| <= M0.
struct GraphDistanceBounds {
    double mu = 2.0;
    double lambda = 1.0;
    double Lambda = 1.0;
    double M0 = 1.0;
    double M1 = 0.0;
};

struct CoefficientField {
    std::function<double(double t, double x)> a;
    std::optional<GraphDistanceBounds> bounds;
    std::string id = "coefficient";

    static CoefficientField constant(double value);
    /// a(t, x) = Lambda |phi(x) - t|^mu, declared with lambda = Lambda.
    static CoefficientField graph_power(std::function<double(double)> phi, double mu, double Lambda,
                                        double M0);
};

/// Lipschitz graph t = phi(x); nodes with t <= phi(x) carry u = 0.
struct GraphSpec {
    std::function<double(double)> phi;
    double M0 = 1.0;
};

/// Values on the parabolic boundary (initial row and both lateral columns).
using BoundaryData = std::function<double(double t, double x)>;

/// Backward-Euler solve on the grid's box. Without a graph this is a plain
/// initial-boundary value problem; with one, the solve is restricted to
/// {t > phi(x)} and every other node is held at 0.
GridSolution solve_general(const CoefficientField& coef, const std::optional<GraphSpec>& graph,
                           const BoundaryData& data, const Grid& grid);

// ---------------------------------------------------------------------------
// Diagnostics
// ---------------------------------------------------------------------------

struct Derivatives {
    double v_t = 0.0;
    double v_x = 0.0;
    double v_xx = 0.0;
};

/// Second-order centred differences, bilinearly interpolated between the
/// four surrounding nodes. The point must sit at least two nodes inside.
Derivatives derivatives_at(const GridSolution& sol, double t, double x);

struct Box {
    double t_min = 0.0;
    double t_max = 0.0;
    double x_min = 0.0;
    double x_max = 0.0;
};

/// Sampled lower estimate of [u]_{alpha/2, alpha} over node pairs in the
/// box, with parabolic distance max(sqrt|dt|, |dx|). Pairs are drawn from a
/// deterministic stream: half uniformly, half at log-uniform separations.
double holder_seminorm(const GridSolution& sol, const Box& box, double alpha, std::size_t n_pairs,
                       std::uint64_t seed = 0x5eed);

struct RefinementLevel {
    std::size_t n_x = 0;
    std::size_t n_t = 0;
};

struct ConvergenceProblem {
    CoefficientField coef;
    std::optional<GraphSpec> graph;
    BoundaryData data;
    Box box;
    std::vector<std::pair<double, double>> probes;  ///< (t, x)
    /// Closed-form solution; when absent the finest level is the reference.
    std::function<double(double t, double x)> exact;
};

struct ConvergenceResult {
    std::vector<double> h;
    std::vector<double> errors;
    double order = std::numeric_limits<double>::quiet_NaN();
    bool exact = false;      ///< every error at roundoff level
    bool monotone = true;    ///< errors strictly decrease with h
    double max_principle_excess = 0.0;
};

ConvergenceResult convergence_order(const ConvergenceProblem& problem,
                                    const std::vector<RefinementLevel>& levels);

}  // namespace asianpde
