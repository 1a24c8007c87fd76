#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "asianpde/bounds.hpp"
#include "asianpde/pde.hpp"
#include "asianpde/sde.hpp"
#include "asianpde/strategy.hpp"

namespace asianpde {

// Composite runs shared by the CLI and the acceptance suite.

struct ProbePoint {
    double t = 0.0;  ///< calendar time
    double x = 0.0;
};

/// t in {T/4, T/2, 3T/4}; x at b(t) - 0.5, b(t), b(t) + 0.25.
std::vector<ProbePoint> reference_probes(const DriftCurve& drift);

struct MonteCarloSettings {
    std::size_t n_paths = 100000;
    std::size_t n_steps = 1000;
    Scheme scheme = Scheme::exact_y;
    std::uint64_t seed = 0;
};

struct CrossValidationRow {
    ProbePoint probe;
    double u2_pde = 0.0;
    double u2_mc = 0.0;
    double std_error = 0.0;
    double mean_x = 0.0;        ///< MC mean of X_T
    double mean_x_error = 0.0;  ///< its standard error
    double positivity = 0.0;    ///< fraction of X_T >= 0
    double discrepancy() const;
    /// 3 stderr + 5e-3 * scale
    double tolerance(double scale = 1.0) const;
};

/// PDE value and MC estimate of u2 at each probe. Probe k is simulated with
/// seed settings.seed + k.
std::vector<CrossValidationRow> cross_validate(const DriftCurve& drift, const GridSolution& u2,
                                               const std::vector<ProbePoint>& probes,
                                               const MonteCarloSettings& settings, double sigma = 1.0);

struct KeyLemmaStudy {
    std::vector<RescaleFrame> frames;
    std::vector<BoundReport> reports;
    std::vector<DecaySample> derivative_decay;
    std::optional<DecayFit> fit;  ///< over samples with lhs > 10 noise_floor
    double max_principle_excess = 0.0;
};

/// Solves u2 on `grid` and on its 2x refinement and checks every radius at
/// z0 = (t0, psi(t0)).
KeyLemmaStudy run_key_lemma_study(const DriftCurve& drift, const Grid& grid, double t0,
                                  const std::vector<double>& radii);

struct GeneralModel {
    CoefficientField coef;
    GraphSpec graph;
    GeneralFrame frame;
    SpaceTimePoint z0;
};

/// a(t, x) = Lambda |phi(x) - t|^mu with phi(x) = M0 x through z0 = (0, 0).
GeneralModel linear_graph_model(double mu, double Lambda, double M0);

struct GeneralStudy {
    std::vector<BoundReport> reports;
    std::optional<DecayFit> fit;
    double max_principle_excess = 0.0;
};

/// For each r, solves on the closed box C_r(z0) (lateral data 1, zero on the
/// graph) at n_x x n_t and at the 2x refinement.
GeneralStudy run_general_study(const GeneralModel& model, const std::vector<double>& radii,
                               std::size_t n_x, std::size_t n_t);

/// u = e^{-t} sin(pi x) for u_t = u_xx / pi^2 on [0, 1] x [0, 1].
ConvergenceProblem manufactured_heat_problem();

/// Levels n_x = 16 2^k + 1 with n_t - 1 proportional to (n_x - 1)^2.
std::vector<RefinementLevel> default_refinements(std::size_t count = 3);

}  // namespace asianpde
