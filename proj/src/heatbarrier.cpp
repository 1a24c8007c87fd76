#include "asianpde/heatbarrier.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "asianpde/errors.hpp"

namespace asianpde {

namespace {

void require_positive_time(double t) {
    if (!(t > 0.0) || !std::isfinite(t)) throw ConfigError("heat kernel needs t > 0");
}

// Upper bound on 2 * sum_{|j| > J} mass of interval j: the nearest excluded
// interval is at distance (4J + 1) R - |x| on either side.
double tail_bound(double R, int J, double t, double x) {
    const double d = (4.0 * J + 1.0) * R - std::fabs(x);
    if (d <= 0.0) return 2.0;
    return 2.0 * std::erfc(d / (2.0 * std::sqrt(t)));
}

}  // namespace

double heat_kernel(double t, double x) {
    require_positive_time(t);
    return std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
}

double heat_mass(double t, double a, double b) {
    require_positive_time(t);
    if (!(b > a)) return 0.0;
    const double s = 2.0 * std::sqrt(t);
    const double za = a / s;
    const double zb = b / s;
    if (za >= 0.0) return 0.5 * (std::erfc(za) - std::erfc(zb));
    if (zb <= 0.0) return 0.5 * (std::erfc(-zb) - std::erfc(-za));
    return 1.0 - 0.5 * std::erfc(zb) - 0.5 * std::erfc(-za);
}

int barrier_truncation(const BarrierSpec& spec, double t, double x) {
    require_positive_time(t);
    if (!(spec.R > 0.0)) throw ConfigError("barrier half-width R must be positive");
    if (!std::isfinite(x)) throw ConfigError("barrier evaluated at non-finite x");
    for (int J = 0; J <= spec.truncation_J; ++J)
        if (tail_bound(spec.R, J, t, x) < kBarrierTailTolerance) return J;
    throw NumericalError("barrier series needs more than " + std::to_string(spec.truncation_J) +
                         " terms at t=" + std::to_string(t) + ", x=" + std::to_string(x));
}

double barrier_1d(const BarrierSpec& spec, double t, double x) {
    const int J = barrier_truncation(spec, t, x);
    const double R = spec.R;
    double sum = 0.0;
    for (int j = -J; j <= J; ++j)
        sum += heat_mass(t, (4.0 * j + 1.0) * R - x, (4.0 * j + 3.0) * R - x);
    double v = 2.0 * sum;

    const double upper = std::fabs(x) <= R ? 1.0 : 2.0;
    constexpr double overshoot = 1e-12;
    if (v < -overshoot || v > upper + overshoot)
        throw NumericalError("barrier value " + std::to_string(v) + " outside its range");
    if (v < 0.0) v = 0.0;
    if (v > upper) v = upper;
    return v;
}

double barrier_nd(const BarrierSpec& spec, double t, std::span<const double> x) {
    if (spec.dim_n < 1) throw ConfigError("barrier dimension must be >= 1");
    if (x.size() != static_cast<std::size_t>(spec.dim_n))
        throw ConfigError("barrier point has wrong dimension");
    if (!(t + 1.0 > 0.0)) throw ConfigError("barrier_nd needs t > -1");
    double sum = 0.0;
    for (double xk : x) sum += barrier_1d(spec, t + 1.0, xk);
    return sum;
}

double barrier_bound(double R) {
    if (!(R > 0.0)) throw ConfigError("barrier_bound needs R > 0");
    return 16.0 / std::sqrt(2.0 * std::numbers::pi) / R * std::exp(-R * R / 32.0);
}

}  // namespace asianpde
