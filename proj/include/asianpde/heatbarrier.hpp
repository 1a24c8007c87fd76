#pragma once

#include <span>

namespace asianpde {

/// Half-width R of the strip |x| < R and the series cap for
///   v(t, x) = 2 * integral over E of Phi(t, x - y) dy,
///   E = union over j of ((4j + 1) R, (4j + 3) R).
/// The cutoff actually used is chosen per (t, x) from a Gaussian tail bound;
/// exceeding `truncation_J` is reported as a NumericalError.
struct BarrierSpec {
    double R = 1.0;
    int truncation_J = 256;
    int dim_n = 1;
};

/// Neglected tail of the interval series allowed per evaluation.
inline constexpr double kBarrierTailTolerance = 1e-12;

/// Heat kernel e^{-x^2 / 4t} / sqrt(4 pi t) for u_t = u_xx.
double heat_kernel(double t, double x);

/// Mass of Phi(t, .) on the interval (a, b), computed from erfc so that both
/// tails keep full relative accuracy.
double heat_mass(double t, double a, double b);

/// Smallest J with the tail beyond |j| > J below kBarrierTailTolerance.
int barrier_truncation(const BarrierSpec& spec, double t, double x);

/// The one-dimensional barrier. Values lie in [0, 1] on |x| <= R and in
/// [0, 2] elsewhere; roundoff overshoot below 1e-12 is clamped.
double barrier_1d(const BarrierSpec& spec, double t, double x);

/// V(t, x) = sum_k v(t + 1, x_k), for t > -1 and x.size() == spec.dim_n.
double barrier_nd(const BarrierSpec& spec, double t, std::span<const double> x);

/// (16 / sqrt(2 pi)) R^{-1} e^{-R^2 / 32}: bound on v(2, x) for |x| <= R / 2.
double barrier_bound(double R);

}  // namespace asianpde
