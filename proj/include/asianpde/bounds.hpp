#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "asianpde/grid.hpp"
#include "asianpde/pde.hpp"
#include "asianpde/strategy.hpp"

namespace asianpde {

/// Point in (time, space); for the pricing problem time is reversed.
struct SpaceTimePoint {
    double t = 0.0;
    double x = 0.0;
};

/// Rescaling frame at a point z0 = (t0, psi(t0)) of the degeneracy curve.
///
/// Box family around z0, with w = (m1 / 2) r:
///   C_r   = { |t - t0| < r, |x - x0| < w }
///   U_r   = C_r intersected with { x < psi(t) }
///   U'_r  = U_r intersected with { |x - x0| < w / 2 }
/// Constants: c = (m1 + 2 m2) / sqrt(8), N0 = 8 (m1 + 2 m2) / (sqrt(pi) m1),
/// k0 = m1^2 / (16 (m1 + 2 m2)^2).
struct RescaleFrame {
    SpaceTimePoint z0;
    double r = 0.0;
    double c = 0.0;
    double N0 = 0.0;
    double k0 = 0.0;
    double m1 = 0.0;
    double m2 = 0.0;

    /// N0 r^{1/2} e^{-k0 / r}.
    double envelope() const;
};

/// The open box D = (0, T) x (0, ell) the closed C_r must fit into.
struct CurveDomain {
    double T = 1.0;
    double ell = 1.0;
};

RescaleFrame key_frame(double m1, double m2, SpaceTimePoint z0, double r, const CurveDomain& domain);

/// Frame at reversed time t0 on the curve of `drift`, with its slope bounds.
RescaleFrame key_frame(const DriftCurve& drift, double t0, double r);

/// (x0 + c r^{3/2} x - psi(t0 + r t))^2 / (2 (c r)^2): the coefficient seen
/// after mapping C_r onto Q_r = { |t| < 1, |x| < (m1 / 2c) r^{-1/2} }.
double rescaled_coefficient(const RescaleFrame& frame, const DriftCurve& drift, double t, double x);

/// Node masks over a grid (row-major, index n * n_x + j).
struct NodeSets {
    std::vector<char> C;
    std::vector<char> U;
    std::vector<char> U_inner;
    std::vector<char> Gamma;

    static std::size_t count(const std::vector<char>& mask);
};

/// Requires the spatial width m1 r of C_r to span at least 8 mesh widths.
NodeSets geometry(const RescaleFrame& frame, const DriftCurve& drift, const Grid& grid);

struct BoundReport {
    double r = 0.0;
    double lhs = 0.0;          ///< sup |v| over the inner set
    double rhs = 0.0;          ///< envelope times the reference sup norm
    double ratio = 0.0;        ///< lhs / rhs
    double noise_floor = 0.0;  ///< |lhs - lhs on the 2x refined grid|
    double reference_sup = 0.0;

    /// ratio <= 1 + max(0.05, noise_floor / rhs).
    bool conforms() const;
    double tolerance() const;
};

/// Reference sup norm over grid nodes inside D = (0, T) x (0, ell).
double sup_over_curve_domain(const GridSolution& sol, const DriftCurve& drift);

/// Compares sup over U'_r with N0 r^{1/2} e^{-k0/r} sup_D |v|. When a solve
/// on the 2x refined grid is supplied it provides the noise floor.
BoundReport check_key_lemma(const GridSolution& sol, const RescaleFrame& frame, const DriftCurve& drift,
                            const GridSolution* refined = nullptr);

struct DecaySample {
    double r = 0.0;
    double q = 0.0;         ///< r^{3/2}|v_x| + r^3|v_xx| + r|v_t| at (t0 + r, x0)
    double envelope = 0.0;  ///< r^{1/2} e^{-k0 / r}
    Derivatives derivatives;
};

std::vector<DecaySample> check_derivative_decay(const GridSolution& sol,
                                                const std::vector<RescaleFrame>& frames);

/// Frame constants for coefficients bounded by Lambda |phi(x) - t|^mu with
/// |grad phi| <= M0 in n space dimensions:
///   c = Lambda^{1/2} (3/2)^{mu/2}, N0 = 32 n c M0 / sqrt(2 pi),
///   k0 = 1 / (128 c^2 M0^2).
struct GeneralFrame {
    int n = 1;
    double mu = 2.0;
    double lambda = 1.0;
    double Lambda = 1.0;
    double M0 = 1.0;
    double M1 = 0.0;
    double c = 0.0;
    double N0 = 0.0;
    double k0 = 0.0;

    /// N0 r^{(mu - 1)/2} e^{-k0 r^{1 - mu}}.
    double envelope(double r) const;
    /// R = (1 / (2 c M0)) r^{(1 - mu)/2}, the barrier half-width after rescaling.
    double barrier_halfwidth(double r) const;
};

GeneralFrame general_frame(int n, double mu, double lambda, double Lambda, double M0, double M1);

/// Box family of the generalized estimate around z0 on t = phi(x):
///   C_r = { |t - t0| < r, |x - x0| < r / (2 M0) }, U_r = C_r with t > phi(x),
///   U'_r = U_r with |x - x0| < r / (4 M0).
/// lhs = sup |u| over U'_r, rhs = envelope(r) * sup |u| over U_r.
BoundReport check_general_bound(const GridSolution& sol, const CoefficientField& coef,
                                const GraphSpec& graph, const GeneralFrame& gframe, SpaceTimePoint z0,
                                double r, const GridSolution* refined = nullptr);

struct DecayFit {
    double k_fit = 0.0;
    double intercept = 0.0;
    double r_min = 0.0;  ///< window actually used
    double r_max = 0.0;
    std::size_t used = 0;
};

/// Least-squares slope of log s against -r^{1 - mu} over samples with
/// s > noise_floor. Needs at least four such samples.
DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& samples, double mu = 2.0,
                        double noise_floor = 0.0);

}  // namespace asianpde
