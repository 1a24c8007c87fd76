#include "asianpde/strategy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <limits>

#include "asianpde/errors.hpp"

namespace asianpde {

namespace {

// Roundoff slack when callers pass t computed as T - tau.
constexpr double kTimeSlack = 1e-12;

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t hash_double(std::uint64_t h, double v) { return fnv1a(h, &v, sizeof v); }

// (1 - exp(-k L)) / k, continuous at k = 0.
double exp_segment(double k, double length) {
    const double kl = k * length;
    if (kl == 0.0) return length;
    return -std::expm1(-kl) / k;
}

std::vector<double> merged_breaks(const MarketSpec& m) {
    std::vector<double> br{0.0, m.maturity};
    for (double b : m.dividend_density.breakpoints()) br.push_back(b);
    for (double b : m.weighting_density.breakpoints()) br.push_back(b);
    std::sort(br.begin(), br.end());
    br.erase(std::unique(br.begin(), br.end()), br.end());
    return br;
}

// g(s) = -r (T - s) + int_s^T nu'.
double exponent(const MarketSpec& m, double s) {
    return -m.rate * (m.maturity - s) + m.dividend_density.integral(s, m.maturity);
}

}  // namespace

PiecewiseConstant::PiecewiseConstant(std::vector<Piece> pieces, double horizon)
    : pieces_(std::move(pieces)), horizon_(horizon) {
    if (!(horizon_ > 0.0) || !std::isfinite(horizon_))
        throw ConfigError("density horizon must be positive and finite");
    if (pieces_.empty()) throw ConfigError("density needs at least one piece");
    if (pieces_.front().start != 0.0) throw ConfigError("density must start at t = 0");
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        if (!std::isfinite(pieces_[k].value)) throw ConfigError("density value not finite");
        if (pieces_[k].start >= horizon_) throw ConfigError("density piece starts at or after T");
        if (k > 0 && !(pieces_[k].start > pieces_[k - 1].start))
            throw ConfigError("density piece starts must be strictly increasing");
    }
}

PiecewiseConstant PiecewiseConstant::constant(double value, double horizon) {
    return PiecewiseConstant({{0.0, value}}, horizon);
}

std::size_t PiecewiseConstant::piece_index(double t) const {
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](double v, const Piece& p) { return v < p.start; });
    return it == pieces_.begin() ? 0 : static_cast<std::size_t>(it - pieces_.begin()) - 1;
}

double PiecewiseConstant::operator()(double t) const { return pieces_[piece_index(t)].value; }

double PiecewiseConstant::integral(double a, double b) const {
    if (b <= a) return 0.0;
    double sum = 0.0;
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const double lo = std::max(a, pieces_[k].start);
        const double hi = std::min(b, k + 1 < pieces_.size() ? pieces_[k + 1].start : horizon_);
        if (hi > lo) sum += pieces_[k].value * (hi - lo);
    }
    return sum;
}

double PiecewiseConstant::min_value() const {
    double v = std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) v = std::min(v, p.value);
    return v;
}

double PiecewiseConstant::max_value() const {
    double v = -std::numeric_limits<double>::infinity();
    for (const auto& p : pieces_) v = std::max(v, p.value);
    return v;
}

std::vector<double> PiecewiseConstant::breakpoints() const {
    std::vector<double> out;
    for (std::size_t k = 1; k < pieces_.size(); ++k) out.push_back(pieces_[k].start);
    return out;
}

PiecewiseConstant PiecewiseConstant::scaled(double factor) const {
    auto p = pieces_;
    for (auto& piece : p) piece.value *= factor;
    return PiecewiseConstant(std::move(p), horizon_);
}

MarketSpec MarketSpec::reference(double maturity) {
    MarketSpec m;
    m.rate = 0.0;
    m.maturity = maturity;
    m.volatility = 1.0;
    m.dividend_density = PiecewiseConstant::constant(0.0, maturity);
    m.weighting_density = PiecewiseConstant::constant(1.0, maturity);
    m.strike = 0.0;
    return m;
}

void MarketSpec::validate() const {
    if (!(rate >= 0.0) || !std::isfinite(rate)) throw ConfigError("rate must be finite and >= 0");
    if (!(maturity > 0.0) || !std::isfinite(maturity))
        throw ConfigError("maturity must be finite and > 0");
    if (!(volatility > 0.0) || !std::isfinite(volatility))
        throw ConfigError("volatility must be finite and > 0");
    if (dividend_density.pieces().empty() || weighting_density.pieces().empty())
        throw ConfigError("dividend and weighting densities must be given");
    if (dividend_density.horizon() != maturity || weighting_density.horizon() != maturity)
        throw ConfigError("densities must be defined on exactly [0, maturity]");
    if (dividend_density.min_value() < 0.0) throw ConfigError("dividend density must be >= 0");
    if (!(weighting_density.min_value() > 0.0))
        throw ConfigError("weighting density must be bounded below by a positive constant");
    if (strike != 0.0) throw ConfigError("only the fixed-strike call (strike = 0) is supported");
}

double drift_value(const MarketSpec& m, double t) {
    const double T = m.maturity;
    if (t < -kTimeSlack * T || t > T * (1 + kTimeSlack))
        throw ConfigError("drift evaluated outside [0, T]");
    t = std::clamp(t, 0.0, T);
    const double scale = std::exp(-m.dividend_density.integral(0.0, T));
    const auto br = merged_breaks(m);
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        const double s0 = std::max(br[k], t);
        const double s1 = br[k + 1];
        if (s1 <= s0) continue;
        const double mid = 0.5 * (br[k] + br[k + 1]);
        const double nu = m.dividend_density(mid);
        const double rho = m.weighting_density(mid);
        sum += rho * std::exp(exponent(m, s1)) * exp_segment(m.rate - nu, s1 - s0);
    }
    return scale * sum;
}

double drift_neg_slope(const MarketSpec& m, double t) {
    const double T = m.maturity;
    if (t < -kTimeSlack * T || t > T * (1 + kTimeSlack))
        throw ConfigError("drift slope evaluated outside [0, T]");
    t = std::clamp(t, 0.0, T);
    const double scale = std::exp(-m.dividend_density.integral(0.0, T));
    return scale * std::exp(exponent(m, t)) * m.weighting_density(t);
}

std::pair<double, double> slope_bounds(const MarketSpec& m) {
    const double scale = std::exp(-m.dividend_density.integral(0.0, m.maturity));
    const auto br = merged_breaks(m);
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t k = 0; k + 1 < br.size(); ++k) {
        // exp(g) is monotone on a segment, so the extremes sit at its ends.
        const double rho = m.weighting_density(0.5 * (br[k] + br[k + 1]));
        for (double s : {br[k], br[k + 1]}) {
            const double v = scale * std::exp(exponent(m, s)) * rho;
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(lo > 0.0)) throw ConfigError("slope bound m1 <= 0: weighting density must be positive");
    return {lo, hi};
}

DriftCurve::DriftCurve(MarketSpec market, std::vector<double> knots, std::vector<double> values,
                       double m1, double m2)
    : market_(std::move(market)),
      knots_(std::move(knots)),
      values_(std::move(values)),
      m1_(m1),
      m2_(m2) {
    if (knots_.size() < 2 || knots_.size() != values_.size())
        throw ConfigError("drift table needs at least two knots");
    spacing_ = (knots_.back() - knots_.front()) / static_cast<double>(knots_.size() - 1);

    std::uint64_t h = 0xcbf29ce484222325ULL;
    h = hash_double(h, market_.rate);
    h = hash_double(h, market_.maturity);
    h = hash_double(h, market_.volatility);
    for (const auto* d : {&market_.dividend_density, &market_.weighting_density})
        for (const auto& p : d->pieces()) {
            h = hash_double(h, p.start);
            h = hash_double(h, p.value);
        }
    const auto n = static_cast<std::uint64_t>(knots_.size());
    h = fnv1a(h, &n, sizeof n);
    char buf[32];
    std::snprintf(buf, sizeof buf, "drift-%016llx", static_cast<unsigned long long>(h));
    id_ = buf;
}

double DriftCurve::operator()(double t) const {
    const double T = maturity();
    if (t < -kTimeSlack * T || t > T * (1 + kTimeSlack) || std::isnan(t))
        throw ConfigError("drift evaluated outside [0, T]");
    if (t <= 0.0) return values_.front();
    if (t >= T) return values_.back();
    const double pos = t / spacing_;
    auto i = static_cast<std::size_t>(pos);
    if (i >= knots_.size() - 1) i = knots_.size() - 2;
    const double w = (t - knots_[i]) / (knots_[i + 1] - knots_[i]);
    if (w == 0.0) return values_[i];
    return values_[i] + w * (values_[i + 1] - values_[i]);
}

double DriftCurve::neg_slope(double t) const { return drift_neg_slope(market_, t); }

DriftCurve build_drift(const MarketSpec& market, std::size_t n_knots) {
    market.validate();
    if (n_knots < 2) throw ConfigError("n_knots must be >= 2");
    const auto [m1, m2] = slope_bounds(market);
    const double T = market.maturity;
    std::vector<double> knots(n_knots), values(n_knots);
    for (std::size_t i = 0; i < n_knots; ++i) {
        knots[i] = i + 1 == n_knots ? T : T * static_cast<double>(i) / static_cast<double>(n_knots - 1);
        values[i] = drift_value(market, knots[i]);
    }
    values.back() = 0.0;
    return DriftCurve(market, std::move(knots), std::move(values), m1, m2);
}

double eval_drift(const DriftCurve& drift, double t) { return drift(t); }

}  // namespace asianpde
