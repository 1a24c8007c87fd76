// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "asianpde/bounds.hpp"
#include "asianpde/heatbarrier.hpp"
#include "asianpde/pde.hpp"
#include "asianpde/sde.hpp"
#include "asianpde/studies.hpp"
#include "oracles.hpp"

using namespace asianpde;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
    bool pass = true;
    std::string detail;
    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + std::string("FAILED ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Running maximum of discrete maximum-principle excess over every solve in the suite.
double g_max_principle = 0.0;

const DriftCurve& reference_drift() {
    static const DriftCurve d = build_drift(MarketSpec::reference());
    return d;
}

const GridSolution& reference_u2() {
    static const GridSolution s = [] {
        auto sol = solve_u2(reference_drift(), default_u2_grid(reference_drift(), 1025, 1025));
        g_max_principle = std::max(g_max_principle, sol.maximum_principle_excess());
        return sol;
    }();
    return s;
}

std::vector<CrossValidationRow> g_rows;

Outcome criterion1() {
    Outcome o;
    double worst = 0.0;
    for (double R : {4.0, 6.0, 8.0}) {
        const BarrierSpec spec{R};
        double vmax = 0.0;
        for (int i = 0; i <= 100; ++i) {
            const double x = -R + 2.0 * R * i / 100.0;
            const double v = barrier_1d(spec, 2.0, x);
            worst = std::max(worst, std::fabs(v - oracle::barrier_by_quadrature(R, 2.0, x)));
            if (std::fabs(x) <= R / 2) vmax = std::max(vmax, v);
        }
        for (int i = 0; i <= 1000; ++i) vmax = std::max(vmax, barrier_1d(spec, 2.0, -R / 2 + R * i / 1000.0));
        o.require(vmax <= barrier_bound(R), "max v(2,x) <= bound at R=" + num(R));
        o.note("R=" + num(R) + " max v=" + num(vmax) + " bound=" + num(barrier_bound(R)));
    }
    o.require(worst <= 1e-9, "quadrature agreement");
    o.note("max |v - quadrature| = " + num(worst));
    return o;
}

Outcome criterion2() {
    Outcome o;
    double residual = 0.0, mono = 0.0, convex = 0.0, edge = 0.0, even = 0.0;
    for (double R : {4.0, 6.0, 8.0}) {
        const BarrierSpec spec{R};
        auto f = [&](double t, double x) { return barrier_1d(spec, t, x); };
        for (double t : {0.1, 0.5, 1.0, 2.0, 5.0}) {
            const double hx = 0.02 * std::sqrt(t), ht = 0.01 * t;
            edge = std::max({edge, std::fabs(f(t, R) - 1.0), std::fabs(f(t, -R) - 1.0)});
            for (int i = 2; i <= 98; ++i) {
                const double x = -R + 2.0 * R * i / 100.0;
                const double v = f(t, x);
                const double vt = (-f(t + 2 * ht, x) + 8 * f(t + ht, x) - 8 * f(t - ht, x) + f(t - 2 * ht, x)) / (12 * ht);
                const double vxx =
                    (-f(t, x + 2 * hx) + 16 * f(t, x + hx) - 30 * v + 16 * f(t, x - hx) - f(t, x - 2 * hx)) / (12 * hx * hx);
                residual = std::max(residual, std::fabs(vt - vxx));
                mono = std::max(mono, v - f(t + 0.05, x));
                convex = std::min(convex, f(t, x + hx) - 2 * v + f(t, x - hx));
                even = std::max(even, std::fabs(v - f(t, -x)));
            }
        }
    }
    o.require(residual <= 1e-6, "heat residual");
    o.require(mono <= 0.0, "monotone in t");
    o.require(convex >= -1e-10, "convex in x");
    o.require(edge <= 1e-10, "v(t, +-R) = 1");
    o.require(even <= 1e-12, "evenness");
    o.note("residual=" + num(residual) + " min second diff=" + num(convex) + " |v(R)-1|=" + num(edge));
    return o;
}

Outcome criterion3() {
    Outcome o;
    g_rows = cross_validate(reference_drift(), reference_u2(), reference_probes(reference_drift()),
                            {100000, 1000, Scheme::exact_y, kSeed});
    double worst = 0.0;
    for (const auto& r : g_rows) {
        o.require(r.discrepancy() <= r.tolerance(), "probe (" + num(r.probe.t) + "," + num(r.probe.x) + ")");
        worst = std::max(worst, r.discrepancy() / r.tolerance());
    }
    o.require(g_rows.size() == 9, "nine probes");
    o.note("9 probes, max discrepancy/tolerance = " + num(worst));
    return o;
}

Outcome criterion4() {
    Outcome o;
    const auto& u2 = reference_u2();
    const double sup = vanishing_region_sup(u2, reference_drift(), u2.grid().h());
    o.require(sup <= 1e-4, "right-region sup");
    const auto& drift = reference_drift();
    double worst = 1.0;
    for (double t : {0.0, 0.25, 0.5, 0.75, 0.99})
        for (double above : {0.0, 0.1, 1.0}) {
            SimulationRequest req;
            req.t = t;
            req.x = drift(t) + above;
            req.n_paths = 20000;
            req.n_steps = 1000;
            req.scheme = Scheme::exact_y;
            req.seed = kSeed + 100;
            worst = std::min(worst, positivity_fraction(simulate_endpoints(drift, req)));
        }
    o.require(worst == 1.0, "positivity fraction");
    o.note("sup |u2| on x >= b(t)+h = " + num(sup) + ", min positivity fraction = " + num(worst));
    return o;
}

Outcome criterion5() {
    Outcome o;
    if (g_rows.empty()) {
        o.require(false, "cross-validation rows unavailable");
        return o;
    }
    double worst = 0.0;
    for (const auto& r : g_rows) {
        const double z = std::fabs(r.mean_x - r.probe.x) / r.mean_x_error;
        worst = std::max(worst, z);
        o.require(z <= 4.0, "martingale at (" + num(r.probe.t) + "," + num(r.probe.x) + ")");
    }
    const auto& u2 = reference_u2();
    const auto& g = u2.grid();
    double convex = 0.0;
    for (std::size_t n = 0; n < g.n_t; ++n)
        for (std::size_t j = 1; j + 1 < g.n_x; ++j) convex = std::min(convex, u2(n, j + 1) - 2 * u2(n, j) + u2(n, j - 1));
    o.require(convex >= -1e-10, "convexity");
    o.note("max |mean X_T - x|/stderr = " + num(worst) + ", min second diff = " + num(convex));
    return o;
}

Outcome criterion6() {
    Outcome o;
    const auto& drift = reference_drift();
    const auto study = run_key_lemma_study(drift, reference_u2().grid(), 0.5, {0.1, 0.15, 0.2, 0.3, 0.4});
    g_max_principle = std::max(g_max_principle, study.max_principle_excess);
    double worst = 0.0;
    for (const auto& r : study.reports) {
        o.require(r.conforms(), "ratio at r=" + num(r.r));
        worst = std::max(worst, r.ratio);
    }
    const auto& f = study.frames.front();
    o.require(f.z0.x == drift(0.5), "z0 on the curve");
    o.require(std::fabs(f.c - 3.0 / std::sqrt(8.0)) <= 1e-15, "c = 3/sqrt(8)");
    o.require(std::fabs(f.N0 - 24.0 / std::sqrt(std::numbers::pi)) <= 1e-14, "N0 = 24/sqrt(pi)");
    o.require(std::fabs(f.k0 - 1.0 / 144.0) <= 1e-17, "k0 = 1/144");
    o.note("max ratio = " + num(worst) + ", c=" + num(f.c) + " N0=" + num(f.N0) + " k0=" + num(f.k0));
    return o;
}

Outcome criterion7() {
    Outcome o;
    const auto& drift = reference_drift();
    const std::vector<double> window{0.06, 0.08, 0.1, 0.12, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45};
    const auto study = run_key_lemma_study(drift, reference_u2().grid(), 0.5, window);
    g_max_principle = std::max(g_max_principle, study.max_principle_excess);
    o.require(study.fit.has_value(), "at least 4 noise-resolvable radii");
    if (study.fit) {
        o.require(study.fit->k_fit >= 1.0 / 144.0, "k_fit >= k0");
        o.note("k_fit = " + num(study.fit->k_fit) + " over r in [" + num(study.fit->r_min) + ", " +
               num(study.fit->r_max) + "] (" + std::to_string(study.fit->used) + " radii), k0 = " + num(1.0 / 144.0));
        for (std::size_t i = 1; i < study.derivative_decay.size(); ++i) {
            const auto& lo = study.derivative_decay[i - 1];
            const auto& hi = study.derivative_decay[i];
            if (lo.r < study.fit->r_min || hi.r > study.fit->r_max) continue;
            o.require(lo.q < hi.q, "q decreasing between r=" + num(lo.r) + " and r=" + num(hi.r));
        }
    }
    return o;
}

Outcome criterion8() {
    Outcome o;
    const std::vector<double> radii{0.001, 0.01, 0.05, 0.1, 0.5, 1.0};
    for (double mu : {1.5, 2.0, 3.0}) {
        const auto model = linear_graph_model(mu, 1.0, 1.0);
        const auto study = run_general_study(model, radii, 1025, 1025);
        g_max_principle = std::max(g_max_principle, study.max_principle_excess);
        double worst = 0.0;
        for (const auto& r : study.reports) {
            o.require(r.conforms(), "mu=" + num(mu) + " r=" + num(r.r));
            worst = std::max(worst, r.ratio);
        }
        o.note("mu=" + num(mu) + " max ratio " + num(worst));
    }
    const auto g = general_frame(1, 2.0, 1.0, 1.0, 1.0, 0.0);
    o.require(std::fabs(g.c - 1.5) <= 1e-15 && std::fabs(g.N0 - 48.0 / std::sqrt(2.0 * std::numbers::pi)) <= 1e-14 &&
                  std::fabs(g.k0 - 1.0 / 288.0) <= 1e-17,
              "general constants");
    return o;
}

Outcome criterion9() {
    Outcome o;
    const auto res = convergence_order(manufactured_heat_problem(), default_refinements(3));
    g_max_principle = std::max(g_max_principle, res.max_principle_excess);
    o.require(res.monotone, "errors decrease");
    o.require(res.order >= 1.8, "order >= 1.8");
    o.require(g_max_principle <= 1e-12, "maximum principle on every solve");
    o.note("order = " + num(res.order) + ", max principle excess over suite = " + num(g_max_principle));
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        int id;
        const char* name;
        double limit_s;
        std::function<Outcome()> body;
    };
    const std::vector<Criterion> criteria = {
        {1, "barrier correctness", 5, criterion1},
        {2, "barrier PDE and shape", 5, criterion2},
        {3, "MC/PDE cross-validation", 120, criterion3},
        {4, "vanishing region", 60, criterion4},
        {5, "martingale and convexity", 60, criterion5},
        {6, "Key Lemma conformance", 120, criterion6},
        {7, "decay rate", 120, criterion7},
        {8, "generalized bound", 180, criterion8},
        {9, "solver convergence", 120, criterion9},
    };
    // The shared reference solve is timed separately so no criterion absorbs it.
    const auto s0 = std::chrono::steady_clock::now();
    reference_u2();
    const double setup = std::chrono::duration<double>(std::chrono::steady_clock::now() - s0).count();
    std::printf("setup: reference 1025x1025 solve %.2fs\n", setup);

    int failed = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.body();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        o.require(secs < c.limit_s, "runtime limit " + num(c.limit_s) + "s");
        failed += !o.pass;
        std::printf("criterion %d [%s]: %s (%.2fs) %s\n", c.id, c.name, o.pass ? "PASS" : "FAIL", secs,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
