#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace asianpde {

/// Right-continuous piecewise-constant density on [0, T].
///
/// Piece k holds `value` on [start_k, start_{k+1}); the last piece extends
/// to T. The first start must be 0 and starts must be strictly increasing.
class PiecewiseConstant {
public:
    struct Piece {
        double start;
        double value;
    };

    PiecewiseConstant() = default;
    PiecewiseConstant(std::vector<Piece> pieces, double horizon);

    static PiecewiseConstant constant(double value, double horizon);

    double operator()(double t) const;
    /// Exact integral over [a, b], 0 <= a <= b <= T.
    double integral(double a, double b) const;

    double min_value() const;
    double max_value() const;
    double horizon() const { return horizon_; }
    const std::vector<Piece>& pieces() const { return pieces_; }
    /// Interior breakpoints, i.e. every start except the leading 0.
    std::vector<double> breakpoints() const;

    PiecewiseConstant scaled(double factor) const;

private:
    std::size_t piece_index(double t) const;

    std::vector<Piece> pieces_;
    double horizon_ = 0.0;
};

struct MarketSpec {
    double rate = 0.0;
    double maturity = 1.0;
    double volatility = 1.0;
    PiecewiseConstant dividend_density;
    PiecewiseConstant weighting_density;
    double strike = 0.0;

    /// r = 0, no dividends, unit weighting: b(t) = T - t.
    static MarketSpec reference(double maturity = 1.0);

    /// Throws ConfigError on any violated invariant.
    void validate() const;
};

/// Discounted trading strategy b(t) as a dense piecewise-linear table on a
/// uniform knot grid, carrying certified slope bounds m1 <= -b'(t) <= m2.
///
/// The analytic source is retained so that -b'(t) can be evaluated exactly.
class DriftCurve {
public:
    DriftCurve(MarketSpec market, std::vector<double> knots, std::vector<double> values,
               double m1, double m2);

    double maturity() const { return knots_.back(); }
    double m1() const { return m1_; }
    double m2() const { return m2_; }
    /// b(0), which becomes psi(T) after time reversal.
    double ell() const { return values_.front(); }

    const std::vector<double>& knots() const { return knots_; }
    const std::vector<double>& values() const { return values_; }
    const MarketSpec& market() const { return market_; }

    /// Piecewise-linear interpolation; throws ConfigError outside [0, T].
    double operator()(double t) const;
    /// psi(tau) = b(T - tau).
    double psi(double tau) const { return (*this)(maturity() - tau); }

    /// Closed-form -b'(t); at a density breakpoint the right limit is used.
    double neg_slope(double t) const;

    /// Stable identifier derived from the market and knot table.
    const std::string& id() const { return id_; }

private:
    MarketSpec market_;
    std::vector<double> knots_;
    std::vector<double> values_;
    double m1_;
    double m2_;
    double spacing_;
    std::string id_;
};

inline constexpr std::size_t kDefaultKnots = 1025;

/// Closed-form b(t) at a single time.
double drift_value(const MarketSpec& market, double t);

/// Closed-form -b'(t).
double drift_neg_slope(const MarketSpec& market, double t);

DriftCurve build_drift(const MarketSpec& market, std::size_t n_knots = kDefaultKnots);

/// Exact min and max of -b' over [0, T]. Throws ConfigError if m1 <= 0.
std::pair<double, double> slope_bounds(const MarketSpec& market);

double eval_drift(const DriftCurve& drift, double t);

}  // namespace asianpde
