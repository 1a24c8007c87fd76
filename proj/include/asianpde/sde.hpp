#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "asianpde/strategy.hpp"

namespace asianpde {

enum class Scheme {
    euler_x,  ///< Euler-Maruyama on X directly.
    exact_y,  ///< Exponential update of Y = X - b, pathwise positivity preserving.
};

std::string_view to_string(Scheme s);
Scheme parse_scheme(std::string_view text);

struct SimulationRequest {
    double t = 0.0;
    double x = 0.0;
    std::size_t n_paths = 10000;
    std::size_t n_steps = 1000;
    Scheme scheme = Scheme::exact_y;
    std::uint64_t seed = 0;
    double sigma = 1.0;
};

/// Terminal values X_T(t, x) of dX = sigma (b - X) dW with their provenance.
struct PathEnsemble {
    double t = 0.0;
    double x = 0.0;
    std::vector<double> endpoints;
    Scheme scheme = Scheme::exact_y;
    std::size_t n_steps = 0;
    std::uint64_t seed = 0;
    double sigma = 1.0;
    std::string drift_id;
};

/// Terminal payoff f. The tagged forms cover the splitting
/// f(x) = x_+ = x + (-x)_+; `table` is continuous piecewise linear,
/// extended linearly past its end knots.
class Payoff {
public:
    enum class Kind { call_xplus, linear, neg_part, table };

    static Payoff call() { return Payoff(Kind::call_xplus); }
    static Payoff linear() { return Payoff(Kind::linear); }
    static Payoff neg_part() { return Payoff(Kind::neg_part); }
    static Payoff table(std::vector<double> xs, std::vector<double> ys);

    Kind kind() const { return kind_; }
    double operator()(double x) const;

private:
    explicit Payoff(Kind k) : kind_(k) {}

    Kind kind_;
    std::vector<double> xs_;
    std::vector<double> ys_;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
};

/// Simulates every path from the stream SplitMix64::for_stream(seed, path).
/// Paths fan out over worker threads; results do not depend on the count.
PathEnsemble simulate_endpoints(const DriftCurve& drift, const SimulationRequest& request);

/// Sample mean and standard error of f over the endpoints.
Estimate estimate_u(const PathEnsemble& ensemble, const Payoff& payoff);

/// Fraction of endpoints that are >= 0.
double positivity_fraction(const PathEnsemble& ensemble);

/// CSV: `#`-prefixed metadata lines, then an `endpoint` column.
void write_ensemble_csv(std::ostream& out, const PathEnsemble& ensemble);

}  // namespace asianpde
