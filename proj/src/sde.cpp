#include "asianpde/sde.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "asianpde/errors.hpp"
#include "asianpde/parallel.hpp"
#include "asianpde/rng.hpp"

namespace asianpde {

std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::euler_x: return "euler-x";
        case Scheme::exact_y: return "exact-y";
    }
    return "unknown";
}

Scheme parse_scheme(std::string_view text) {
    if (text == "euler-x") return Scheme::euler_x;
    if (text == "exact-y") return Scheme::exact_y;
    throw ConfigError("unknown scheme '" + std::string(text) + "' (expected euler-x or exact-y)");
}

Payoff Payoff::table(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() < 2 || xs.size() != ys.size())
        throw ConfigError("payoff table needs >= 2 matching knots");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1])) throw ConfigError("payoff table knots must increase");
    Payoff p(Kind::table);
    p.xs_ = std::move(xs);
    p.ys_ = std::move(ys);
    return p;
}

double Payoff::operator()(double x) const {
    switch (kind_) {
        case Kind::call_xplus: return x > 0.0 ? x : 0.0;
        case Kind::linear: return x;
        case Kind::neg_part: return x < 0.0 ? -x : 0.0;
        case Kind::table: break;
    }
    auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
    std::size_t i = it == xs_.begin() ? 0 : static_cast<std::size_t>(it - xs_.begin()) - 1;
    i = std::min(i, xs_.size() - 2);
    const double slope = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    return ys_[i] + slope * (x - xs_[i]);
}

PathEnsemble simulate_endpoints(const DriftCurve& drift, const SimulationRequest& req) {
    const double T = drift.maturity();
    if (!(req.t >= 0.0) || !(req.t < T)) throw ConfigError("simulation start t must satisfy 0 <= t < T");
    if (req.n_steps == 0) throw ConfigError("n_steps must be positive");
    if (req.n_paths == 0) throw ConfigError("n_paths must be positive");
    if (!(req.sigma > 0.0) || !std::isfinite(req.sigma)) throw ConfigError("sigma must be positive");
    if (!std::isfinite(req.x)) throw ConfigError("start x must be finite");

    const std::size_t n = req.n_steps;
    const double ds = (T - req.t) / static_cast<double>(n);
    std::vector<double> b(n + 1);
    for (std::size_t k = 0; k <= n; ++k)
        b[k] = k == n ? drift(T) : drift(req.t + (T - req.t) * static_cast<double>(k) / static_cast<double>(n));

    // Per-step integral of -b' over [s_k, s_{k+1}]; the exponential weight
    // is frozen at the left endpoint so every increment is nonnegative.
    std::vector<double> drop(n);
    for (std::size_t k = 0; k < n; ++k) {
        drop[k] = b[k] - b[k + 1];
        if (drop[k] < 0.0) throw NumericalError("drift table is not nonincreasing");
    }

    const double vol = req.sigma * std::sqrt(ds);
    const double compensator = 0.5 * req.sigma * req.sigma * ds;

    PathEnsemble ens;
    ens.t = req.t;
    ens.x = req.x;
    ens.scheme = req.scheme;
    ens.n_steps = n;
    ens.seed = req.seed;
    ens.sigma = req.sigma;
    ens.drift_id = drift.id();
    ens.endpoints.resize(req.n_paths);

    parallel_for(req.n_paths, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t p = lo; p < hi; ++p) {
            NormalStream normal(SplitMix64::for_stream(req.seed, p));
            if (req.scheme == Scheme::exact_y) {
                double y = req.x - b[0];
                for (std::size_t k = 0; k < n; ++k)
                    y = (y + drop[k]) * std::exp(-vol * normal() - compensator);
                ens.endpoints[p] = y + b[n];
            } else {
                double x = req.x;
                for (std::size_t k = 0; k < n; ++k) x += (b[k] - x) * vol * normal();
                ens.endpoints[p] = x;
            }
        }
    });
    return ens;
}

Estimate estimate_u(const PathEnsemble& ens, const Payoff& payoff) {
    const auto& e = ens.endpoints;
    if (e.empty()) throw ConfigError("cannot estimate from an empty ensemble");
    double sum = 0.0;
    for (double v : e) sum += payoff(v);
    const double n = static_cast<double>(e.size());
    const double mean = sum / n;
    if (e.size() == 1) return {mean, 0.0};
    double ss = 0.0;
    for (double v : e) {
        const double d = payoff(v) - mean;
        ss += d * d;
    }
    return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

double positivity_fraction(const PathEnsemble& ens) {
    if (ens.endpoints.empty()) return 0.0;
    const auto count = std::count_if(ens.endpoints.begin(), ens.endpoints.end(),
                                     [](double v) { return v >= 0.0; });
    return static_cast<double>(count) / static_cast<double>(ens.endpoints.size());
}

void write_ensemble_csv(std::ostream& out, const PathEnsemble& ens) {
    char buf[64];
    out << "# drift_id=" << ens.drift_id << '\n';
    out << "# scheme=" << to_string(ens.scheme) << '\n';
    out << "# seed=" << ens.seed << '\n';
    out << "# n_steps=" << ens.n_steps << '\n';
    out << "# n_paths=" << ens.endpoints.size() << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", ens.t);
    out << "# t=" << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", ens.x);
    out << "# x=" << buf << '\n';
    std::snprintf(buf, sizeof buf, "%.17g", ens.sigma);
    out << "# sigma=" << buf << '\n';
    out << "endpoint\n";
    for (double v : ens.endpoints) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out << buf << '\n';
    }
}

}  // namespace asianpde
