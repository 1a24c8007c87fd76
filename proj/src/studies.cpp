#include "asianpde/studies.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "asianpde/errors.hpp"

namespace asianpde {

std::vector<ProbePoint> reference_probes(const DriftCurve& drift) {
    const double T = drift.maturity();
    std::vector<ProbePoint> out;
    for (double frac : {0.25, 0.5, 0.75}) {
        const double t = frac * T;
        const double b = drift(t);
        for (double offset : {-0.5, 0.0, 0.25}) out.push_back({t, b + offset});
    }
    return out;
}

double CrossValidationRow::discrepancy() const { return std::fabs(u2_pde - u2_mc); }

double CrossValidationRow::tolerance(double scale) const { return 3.0 * std_error + 5e-3 * scale; }

std::vector<CrossValidationRow> cross_validate(const DriftCurve& drift, const GridSolution& u2,
                                               const std::vector<ProbePoint>& probes,
                                               const MonteCarloSettings& settings, double sigma) {
    std::vector<CrossValidationRow> rows;
    const double T = drift.maturity();
    for (std::size_t k = 0; k < probes.size(); ++k) {
        const auto& p = probes[k];
        SimulationRequest req;
        req.t = p.t;
        req.x = p.x;
        req.n_paths = settings.n_paths;
        req.n_steps = settings.n_steps;
        req.scheme = settings.scheme;
        req.seed = settings.seed + k;
        req.sigma = sigma;
        const auto ens = simulate_endpoints(drift, req);
        const auto u2_est = estimate_u(ens, Payoff::neg_part());
        const auto lin = estimate_u(ens, Payoff::linear());

        CrossValidationRow row;
        row.probe = p;
        row.u2_pde = u2.interpolate(T - p.t, p.x);
        row.u2_mc = u2_est.mean;
        row.std_error = u2_est.std_error;
        row.mean_x = lin.mean;
        row.mean_x_error = lin.std_error;
        row.positivity = positivity_fraction(ens);
        rows.push_back(row);
    }
    return rows;
}

KeyLemmaStudy run_key_lemma_study(const DriftCurve& drift, const Grid& grid, double t0,
                                  const std::vector<double>& radii) {
    if (drift.market().volatility != 1.0)
        throw ConfigError("the rescaling frame assumes the coefficient (x - psi)^2 / 2, i.e. volatility 1");
    const auto coarse = solve_u2(drift, grid, 1.0);
    const auto fine = solve_u2(drift, grid.refined(), 1.0);

    KeyLemmaStudy study;
    study.max_principle_excess = std::max(coarse.maximum_principle_excess(), fine.maximum_principle_excess());
    std::vector<std::pair<double, double>> samples;
    for (double r : radii) {
        const auto frame = key_frame(drift, t0, r);
        study.frames.push_back(frame);
        const auto rep = check_key_lemma(coarse, frame, drift, &fine);
        study.reports.push_back(rep);
        if (rep.lhs > 10.0 * rep.noise_floor) samples.emplace_back(r, rep.lhs);
    }
    study.derivative_decay = check_derivative_decay(coarse, study.frames);
    if (samples.size() >= 4) study.fit = fit_decay_rate(samples, 2.0, 0.0);
    return study;
}

GeneralModel linear_graph_model(double mu, double Lambda, double M0) {
    GeneralModel m;
    auto phi = [M0](double x) { return M0 * x; };
    m.coef = CoefficientField::graph_power(phi, mu, Lambda, M0);
    m.graph = GraphSpec{phi, M0};
    m.frame = general_frame(1, mu, Lambda, Lambda, M0, m.coef.bounds->M1);
    m.z0 = {0.0, 0.0};
    return m;
}

GeneralStudy run_general_study(const GeneralModel& model, const std::vector<double>& radii, std::size_t n_x,
                               std::size_t n_t) {
    GeneralStudy study;
    std::vector<std::pair<double, double>> samples;
    for (double r : radii) {
        const double half = r / (2.0 * model.frame.M0);
        Grid g{model.z0.x - half, model.z0.x + half, n_x, n_t, model.z0.t - r, model.z0.t + r};
        const BoundaryData data = [](double, double) { return 1.0; };
        const auto coarse = solve_general(model.coef, model.graph, data, g);
        const auto fine = solve_general(model.coef, model.graph, data, g.refined());
        study.max_principle_excess = std::max(
            {study.max_principle_excess, coarse.maximum_principle_excess(), fine.maximum_principle_excess()});
        const auto rep = check_general_bound(coarse, model.coef, model.graph, model.frame, model.z0, r, &fine);
        study.reports.push_back(rep);
        if (rep.reference_sup > 0.0 && rep.lhs > 10.0 * rep.noise_floor)
            samples.emplace_back(r, rep.lhs / rep.reference_sup);
    }
    if (samples.size() >= 4) study.fit = fit_decay_rate(samples, model.frame.mu, 0.0);
    return study;
}

ConvergenceProblem manufactured_heat_problem() {
    const double pi = std::numbers::pi;
    ConvergenceProblem p;
    p.coef = CoefficientField::constant(1.0 / (pi * pi));
    p.coef.id = "manufactured-heat";
    p.exact = [pi](double t, double x) { return std::exp(-t) * std::sin(pi * x); };
    p.data = p.exact;
    p.box = {0.0, 1.0, 0.0, 1.0};
    p.probes = {{0.5, 0.25}, {0.5, 0.5}, {1.0, 0.75}};
    return p;
}

std::vector<RefinementLevel> default_refinements(std::size_t count) {
    std::vector<RefinementLevel> out;
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t cells = std::size_t{16} << k;
        out.push_back({cells + 1, cells * cells + 1});
    }
    return out;
}

}  // namespace asianpde
