#include "asianpde/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "asianpde/errors.hpp"

namespace asianpde {

namespace {

double safe_ratio(double lhs, double rhs) {
    if (rhs > 0.0) return lhs / rhs;
    return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

double masked_sup(const GridSolution& sol, const std::vector<char>& mask) {
    double sup = 0.0;
    const auto v = sol.values();
    for (std::size_t i = 0; i < mask.size(); ++i)
        if (mask[i]) sup = std::max(sup, std::fabs(v[i]));
    return sup;
}

// Node masks for the generalized box family in forward time.
struct GeneralSets {
    std::vector<char> U;
    std::vector<char> U_inner;
};

GeneralSets general_sets(const Grid& g, const GraphSpec& graph, double M0, SpaceTimePoint z0, double r) {
    const double half = r / (2.0 * M0);
    if (half * 2.0 < 8.0 * g.h() || 2.0 * r < 8.0 * g.dt())
        throw ConfigError("grid does not resolve the frame radius (needs >= 8 nodes across)");
    GeneralSets s;
    s.U.assign(g.n_t * g.n_x, 0);
    s.U_inner.assign(g.n_t * g.n_x, 0);
    for (std::size_t j = 0; j < g.n_x; ++j) {
        const double x = g.x(j);
        const double dx = std::fabs(x - z0.x);
        if (!(dx < half)) continue;
        const double phi = graph.phi(x);
        for (std::size_t n = 0; n < g.n_t; ++n) {
            const double t = g.t(n);
            if (!(std::fabs(t - z0.t) < r) || !(t > phi)) continue;
            s.U[n * g.n_x + j] = 1;
            if (dx < 0.5 * half) s.U_inner[n * g.n_x + j] = 1;
        }
    }
    return s;
}

}  // namespace

double RescaleFrame::envelope() const { return N0 * std::sqrt(r) * std::exp(-k0 / r); }

RescaleFrame key_frame(double m1, double m2, SpaceTimePoint z0, double r, const CurveDomain& domain) {
    if (!(m1 > 0.0) || !(m2 >= m1)) throw ConfigError("key frame needs 0 < m1 <= m2");
    if (!(r > 0.0 && r < 1.0)) throw ConfigError("key frame radius must lie in (0, 1)");
    const double w = 0.5 * m1 * r;
    if (!(z0.t - r > 0.0 && z0.t + r < domain.T && z0.x - w > 0.0 && z0.x + w < domain.ell))
        throw ConfigError("closed box C_r(z0) is not contained in (0, T) x (0, ell)");
    RescaleFrame f;
    f.z0 = z0;
    f.r = r;
    f.m1 = m1;
    f.m2 = m2;
    f.c = (m1 + 2.0 * m2) / std::sqrt(8.0);
    f.N0 = 8.0 * (m1 + 2.0 * m2) / (std::sqrt(std::numbers::pi) * m1);
    f.k0 = m1 * m1 / (16.0 * (m1 + 2.0 * m2) * (m1 + 2.0 * m2));
    return f;
}

RescaleFrame key_frame(const DriftCurve& drift, double t0, double r) {
    return key_frame(drift.m1(), drift.m2(), {t0, drift.psi(t0)}, r, {drift.maturity(), drift.ell()});
}

double rescaled_coefficient(const RescaleFrame& f, const DriftCurve& drift, double t, double x) {
    const double cr = f.c * f.r;
    const double d = f.z0.x + f.c * std::pow(f.r, 1.5) * x - drift.psi(f.z0.t + f.r * t);
    return d * d / (2.0 * cr * cr);
}

std::size_t NodeSets::count(const std::vector<char>& mask) {
    return static_cast<std::size_t>(std::count(mask.begin(), mask.end(), 1));
}

NodeSets geometry(const RescaleFrame& f, const DriftCurve& drift, const Grid& g) {
    const double w = 0.5 * f.m1 * f.r;
    if (f.m1 * f.r < 8.0 * g.h() || 2.0 * f.r < 8.0 * g.dt())
        throw ConfigError("grid does not resolve the frame radius (needs >= 8 nodes across)");
    if (f.z0.t - f.r < g.t_min || f.z0.t + f.r > g.t_max || f.z0.x - w < g.x_min || f.z0.x + w > g.x_max)
        throw ConfigError("frame box extends past the grid");

    NodeSets s;
    const std::size_t size = g.n_t * g.n_x;
    s.C.assign(size, 0);
    s.U.assign(size, 0);
    s.U_inner.assign(size, 0);
    s.Gamma.assign(size, 0);
    for (std::size_t n = 0; n < g.n_t; ++n) {
        const double t = g.t(n);
        if (!(std::fabs(t - f.z0.t) < f.r)) continue;
        const double psi = drift.psi(t);
        for (std::size_t j = 0; j < g.n_x; ++j) {
            const double dx = std::fabs(g.x(j) - f.z0.x);
            if (!(dx < w)) continue;
            const std::size_t i = n * g.n_x + j;
            s.C[i] = 1;
            if (g.x(j) < psi) {
                s.U[i] = 1;
                if (dx < 0.5 * w) s.U_inner[i] = 1;
            }
        }
        const double pos = std::round((psi - g.x_min) / g.h());
        if (pos >= 0.0 && pos <= static_cast<double>(g.n_x - 1)) {
            const auto j = static_cast<std::size_t>(pos);
            if (std::fabs(g.x(j) - f.z0.x) < w) s.Gamma[n * g.n_x + j] = 1;
        }
    }
    return s;
}

double BoundReport::tolerance() const {
    const double noise = rhs > 0.0 ? noise_floor / rhs : std::numeric_limits<double>::infinity();
    return 1.0 + std::max(0.05, noise);
}

bool BoundReport::conforms() const { return ratio <= tolerance(); }

double sup_over_curve_domain(const GridSolution& sol, const DriftCurve& drift) {
    const Grid& g = sol.grid();
    const double T = drift.maturity();
    const double ell = drift.ell();
    double sup = 0.0;
    for (std::size_t n = 0; n < g.n_t; ++n) {
        const double t = g.t(n);
        if (!(t > 0.0 && t < T)) continue;
        for (std::size_t j = 0; j < g.n_x; ++j)
            if (g.x(j) > 0.0 && g.x(j) < ell) sup = std::max(sup, std::fabs(sol(n, j)));
    }
    return sup;
}

BoundReport check_key_lemma(const GridSolution& sol, const RescaleFrame& frame, const DriftCurve& drift,
                            const GridSolution* refined) {
    BoundReport rep;
    rep.r = frame.r;
    rep.lhs = masked_sup(sol, geometry(frame, drift, sol.grid()).U_inner);
    rep.reference_sup = sup_over_curve_domain(sol, drift);
    rep.rhs = frame.envelope() * rep.reference_sup;
    rep.ratio = safe_ratio(rep.lhs, rep.rhs);
    if (refined) {
        const double fine = masked_sup(*refined, geometry(frame, drift, refined->grid()).U_inner);
        rep.noise_floor = std::fabs(fine - rep.lhs);
    }
    return rep;
}

std::vector<DecaySample> check_derivative_decay(const GridSolution& sol,
                                                const std::vector<RescaleFrame>& frames) {
    std::vector<DecaySample> out;
    out.reserve(frames.size());
    for (const auto& f : frames) {
        DecaySample s;
        s.r = f.r;
        s.derivatives = derivatives_at(sol, f.z0.t + f.r, f.z0.x);
        const auto& d = s.derivatives;
        s.q = std::pow(f.r, 1.5) * std::fabs(d.v_x) + std::pow(f.r, 3.0) * std::fabs(d.v_xx) +
              f.r * std::fabs(d.v_t);
        s.envelope = std::sqrt(f.r) * std::exp(-f.k0 / f.r);
        out.push_back(s);
    }
    return out;
}

double GeneralFrame::envelope(double r) const {
    return N0 * std::pow(r, 0.5 * (mu - 1.0)) * std::exp(-k0 * std::pow(r, 1.0 - mu));
}

double GeneralFrame::barrier_halfwidth(double r) const {
    return std::pow(r, 0.5 * (1.0 - mu)) / (2.0 * c * M0);
}

GeneralFrame general_frame(int n, double mu, double lambda, double Lambda, double M0, double M1) {
    if (n < 1) throw ConfigError("dimension n must be >= 1");
    if (!(mu > 1.0)) throw ConfigError("exponent mu must exceed 1");
    if (!(lambda > 0.0) || !(Lambda >= lambda)) throw ConfigError("need 0 < lambda <= Lambda");
    if (!(M0 > 0.0)) throw ConfigError("M0 must be positive");
    if (!(M1 >= 0.0)) throw ConfigError("M1 must be nonnegative");
    GeneralFrame g;
    g.n = n;
    g.mu = mu;
    g.lambda = lambda;
    g.Lambda = Lambda;
    g.M0 = M0;
    g.M1 = M1;
    g.c = std::sqrt(Lambda) * std::pow(1.5, 0.5 * mu);
    g.N0 = 32.0 * n * g.c * M0 / std::sqrt(2.0 * std::numbers::pi);
    g.k0 = 1.0 / (128.0 * g.c * g.c * M0 * M0);
    return g;
}

BoundReport check_general_bound(const GridSolution& sol, const CoefficientField& coef, const GraphSpec& graph,
                                const GeneralFrame& gf, SpaceTimePoint z0, double r,
                                const GridSolution* refined) {
    if (!coef.bounds) throw ConfigError("coefficient carries no graph-distance metadata");
    if (gf.n != 1) throw ConfigError("generalized bound checks are implemented for n = 1");
    if (!(r > 0.0)) throw ConfigError("frame radius must be positive");
    const auto& b = *coef.bounds;
    if (b.mu != gf.mu || b.Lambda > gf.Lambda * (1 + 1e-12) || b.M0 > gf.M0 * (1 + 1e-12))
        throw ConfigError("coefficient metadata does not match the frame");

    const Grid& g = sol.grid();
    const double half = r / (2.0 * gf.M0);
    if (z0.t - r < g.t_min || z0.t + r > g.t_max || z0.x - half < g.x_min || z0.x + half > g.x_max)
        throw ConfigError("frame box extends past the grid");
    const auto sets = general_sets(g, graph, gf.M0, z0, r);

    // Upper coefficient bound on the sampled nodes of U_r.
    for (std::size_t n = 0; n < g.n_t; ++n)
        for (std::size_t j = 0; j < g.n_x; ++j) {
            if (!sets.U[n * g.n_x + j]) continue;
            const double t = g.t(n), x = g.x(j);
            const double cap = gf.Lambda * std::pow(std::fabs(graph.phi(x) - t), gf.mu);
            if (coef.a(t, x) > cap * (1.0 + 1e-12) + 1e-300)
                throw ConfigError("coefficient exceeds Lambda |phi - t|^mu inside the frame");
        }

    BoundReport rep;
    rep.r = r;
    rep.lhs = masked_sup(sol, sets.U_inner);
    rep.reference_sup = masked_sup(sol, sets.U);
    rep.rhs = gf.envelope(r) * rep.reference_sup;
    rep.ratio = safe_ratio(rep.lhs, rep.rhs);
    if (refined) {
        const auto fine_sets = general_sets(refined->grid(), graph, gf.M0, z0, r);
        rep.noise_floor = std::fabs(masked_sup(*refined, fine_sets.U_inner) - rep.lhs);
    }
    return rep;
}

DecayFit fit_decay_rate(const std::vector<std::pair<double, double>>& samples, double mu, double noise_floor) {
    std::vector<std::pair<double, double>> used;
    for (const auto& [r, s] : samples)
        if (r > 0.0 && std::isfinite(s) && s > noise_floor && s > 0.0) used.emplace_back(r, s);
    if (used.size() < 4) throw NumericalError("decay fit needs >= 4 samples above the noise floor");

    double mx = 0, my = 0;
    for (const auto& [r, s] : used) {
        mx += -std::pow(r, 1.0 - mu);
        my += std::log(s);
    }
    const double m = static_cast<double>(used.size());
    mx /= m;
    my /= m;
    double sxy = 0, sxx = 0;
    for (const auto& [r, s] : used) {
        const double dx = -std::pow(r, 1.0 - mu) - mx;
        sxy += dx * (std::log(s) - my);
        sxx += dx * dx;
    }
    if (!(sxx > 0.0)) throw NumericalError("decay fit needs distinct radii");
    DecayFit fit;
    fit.k_fit = sxy / sxx;
    fit.intercept = my - fit.k_fit * mx;
    fit.used = used.size();
    fit.r_min = std::numeric_limits<double>::infinity();
    fit.r_max = 0.0;
    for (const auto& [r, s] : used) {
        fit.r_min = std::min(fit.r_min, r);
        fit.r_max = std::max(fit.r_max, r);
    }
    return fit;
}

}  // namespace asianpde
