#include "asianpde/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "asianpde/bounds.hpp"
#include "asianpde/config.hpp"
#include "asianpde/errors.hpp"
#include "asianpde/heatbarrier.hpp"
#include "asianpde/pde.hpp"
#include "asianpde/studies.hpp"

namespace asianpde {

namespace {

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_list(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + fmt_real(v[i]);
    return out;
}

const std::map<std::string, std::set<std::string>>& run_sections() {
    static const std::map<std::string, std::set<std::string>> s = {
        {"market", {"rate", "maturity", "volatility", "strike"}},
        {"dividend_density", {"pieces"}},
        {"weighting_density", {"pieces"}},
        {"grid", {"nx", "nt"}},
        {"monte_carlo", {"paths", "steps", "seed", "scheme"}},
        {"price", {"t", "x"}},
        {"frame", {"r_list", "t0", "mu", "lambda", "Lambda", "M0"}},
        {"barrier", {"R", "t_list", "n_x"}},
        {"convergence", {"levels"}},
        {"output", {"dir"}},
    };
    return s;
}

bool needs_market(Command c) {
    return c == Command::price || c == Command::verify_key_lemma || c == Command::sweep;
}

// CSV preamble shared by every artifact.
std::string csv_header(const RunConfig& cfg, const std::string& extra = {}) {
    char hash[32];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(cfg.hash()));
    std::string out = "# asianpde " + to_string(cfg.command) + "\n# config_hash=" + hash + "\n";
    out += "# grid n_x=" + std::to_string(cfg.grid_nx) + " n_t=" + std::to_string(cfg.grid_nt) + "\n";
    out += "# seed=" + std::to_string(cfg.seed) + "\n";
    if (!extra.empty()) out += extra;
    return out;
}

double effective_t0(const RunConfig& cfg, const DriftCurve& drift) {
    return cfg.t0 < 0.0 ? 0.5 * drift.maturity() : cfg.t0;
}

RunResult run_price(const RunConfig& cfg) {
    const auto drift = build_drift(*cfg.market);
    const double sigma = cfg.market->volatility;
    if (!(cfg.t >= 0.0 && cfg.t < drift.maturity())) throw ConfigError("price point needs 0 <= t < T");
    const auto grid = default_u2_grid(drift, cfg.grid_nx, cfg.grid_nt);
    if (!(cfg.x >= grid.x_min && cfg.x <= grid.x_max)) throw ConfigError("price point x lies outside the grid");
    const auto u2 = solve_u2(drift, grid, sigma);
    const double u2_pde = u2.interpolate(drift.maturity() - cfg.t, cfg.x);

    SimulationRequest req{cfg.t, cfg.x, cfg.paths, cfg.steps, cfg.scheme, cfg.seed, sigma};
    const auto ens = simulate_endpoints(drift, req);
    const auto u_mc = estimate_u(ens, Payoff::call());
    const auto u2_mc = estimate_u(ens, Payoff::neg_part());

    RunResult res;
    std::ostringstream con;
    con << "u(t=" << fmt_real(cfg.t) << ", x=" << fmt_real(cfg.x) << ") = x + u2\n"
        << "  PDE: u = " << fmt_real(cfg.x + u2_pde) << "  (u2 = " << fmt_real(u2_pde) << ")\n"
        << "  MC : u = " << fmt_real(u_mc.mean) << " +/- " << fmt_real(u_mc.std_error)
        << "  (u2 = " << fmt_real(u2_mc.mean) << " +/- " << fmt_real(u2_mc.std_error) << ")\n"
        << "  discrepancy |PDE - MC| = " << fmt_real(std::fabs(cfg.x + u2_pde - u_mc.mean)) << "\n"
        << "  grid " << grid.n_x << " x " << grid.n_t << " on x in [" << fmt_real(grid.x_min) << ", "
        << fmt_real(grid.x_max) << "], " << cfg.paths << " paths, " << cfg.steps << " steps, "
        << to_string(cfg.scheme) << ", seed " << cfg.seed << "\n";
    res.console = con.str();

    std::string csv = csv_header(cfg, "# drift_id=" + drift.id() + "\n");
    csv += "t,x,u_pde,u2_pde,u_mc,u_mc_stderr,u2_mc,u2_mc_stderr,discrepancy\n";
    csv += fmt_real(cfg.t) + "," + fmt_real(cfg.x) + "," + fmt_real(cfg.x + u2_pde) + "," + fmt_real(u2_pde) +
           "," + fmt_real(u_mc.mean) + "," + fmt_real(u_mc.std_error) + "," + fmt_real(u2_mc.mean) + "," +
           fmt_real(u2_mc.std_error) + "," + fmt_real(std::fabs(cfg.x + u2_pde - u_mc.mean)) + "\n";
    res.files["price.csv"] = csv;
    return res;
}

RunResult run_sweep(const RunConfig& cfg) {
    const auto drift = build_drift(*cfg.market);
    const double sigma = cfg.market->volatility;
    const auto u2 = solve_u2(drift, default_u2_grid(drift, cfg.grid_nx, cfg.grid_nt), sigma);
    const auto rows = cross_validate(drift, u2, reference_probes(drift),
                                     {cfg.paths, cfg.steps, cfg.scheme, cfg.seed}, sigma);
    RunResult res;
    std::string csv = csv_header(cfg, "# drift_id=" + drift.id() + "\n");
    csv += "t,x,u2_pde,u2_mc,stderr,discrepancy,tolerance,mean_x,mean_x_stderr,pass\n";
    std::size_t failed = 0;
    for (const auto& r : rows) {
        const bool pass = r.discrepancy() <= r.tolerance();
        failed += !pass;
        csv += fmt_real(r.probe.t) + "," + fmt_real(r.probe.x) + "," + fmt_real(r.u2_pde) + "," +
               fmt_real(r.u2_mc) + "," + fmt_real(r.std_error) + "," + fmt_real(r.discrepancy()) + "," +
               fmt_real(r.tolerance()) + "," + fmt_real(r.mean_x) + "," + fmt_real(r.mean_x_error) + "," +
               (pass ? "1" : "0") + "\n";
    }
    res.files["sweep.csv"] = csv;
    res.console = "sweep: " + std::to_string(rows.size() - failed) + "/" + std::to_string(rows.size()) +
                  " probes within 3 stderr + 5e-3\n";
    if (failed) res.exit_code = kExitBoundViolation;
    return res;
}

std::string report_rows(const std::vector<BoundReport>& reports, const std::optional<DecayFit>& fit) {
    std::string csv = "r,lhs,rhs,ratio,noise_floor,k_fit\n";
    const std::string k = fit ? fmt_real(fit->k_fit) : "nan";
    for (const auto& r : reports)
        csv += fmt_real(r.r) + "," + fmt_real(r.lhs) + "," + fmt_real(r.rhs) + "," + fmt_real(r.ratio) + "," +
               fmt_real(r.noise_floor) + "," + k + "\n";
    return csv;
}

RunResult run_key_lemma(const RunConfig& cfg) {
    const auto drift = build_drift(*cfg.market);
    const std::vector<double> radii = cfg.r_list.empty() ? std::vector<double>{0.1, 0.15, 0.2, 0.3, 0.4}
                                                         : cfg.r_list;
    const double t0 = effective_t0(cfg, drift);
    const auto grid = default_u2_grid(drift, cfg.grid_nx, cfg.grid_nt);
    const auto study = run_key_lemma_study(drift, grid, t0, radii);
    const auto& f = study.frames.front();

    RunResult res;
    std::string extra = "# drift_id=" + drift.id() + "\n# z0=(" + fmt_real(f.z0.t) + "," + fmt_real(f.z0.x) +
                        ")\n# m1=" + fmt_real(f.m1) + " m2=" + fmt_real(f.m2) + " c=" + fmt_real(f.c) +
                        " N0=" + fmt_real(f.N0) + " k0=" + fmt_real(f.k0) + "\n";
    res.files["key_lemma.csv"] = csv_header(cfg, extra) + report_rows(study.reports, study.fit);

    std::string dd = csv_header(cfg, extra) + "r,q,envelope,v_x,v_xx,v_t\n";
    for (const auto& s : study.derivative_decay)
        dd += fmt_real(s.r) + "," + fmt_real(s.q) + "," + fmt_real(s.envelope) + "," +
              fmt_real(s.derivatives.v_x) + "," + fmt_real(s.derivatives.v_xx) + "," +
              fmt_real(s.derivatives.v_t) + "\n";
    res.files["derivative_decay.csv"] = dd;

    std::size_t violations = 0;
    for (const auto& r : study.reports) violations += !r.conforms();
    std::ostringstream con;
    con << "key lemma: " << study.reports.size() - violations << "/" << study.reports.size()
        << " radii conform; k0 = " << fmt_real(f.k0);
    if (study.fit) con << ", k_fit = " << fmt_real(study.fit->k_fit);
    con << "\n";
    res.console = con.str();
    if (violations) res.exit_code = kExitBoundViolation;
    return res;
}

RunResult run_general(const RunConfig& cfg) {
    const std::vector<double> radii =
        cfg.r_list.empty() ? std::vector<double>{0.001, 0.01, 0.05, 0.1, 0.5, 1.0} : cfg.r_list;
    auto model = linear_graph_model(cfg.mu, cfg.Lambda, cfg.M0);
    model.frame = general_frame(1, cfg.mu, cfg.lambda, cfg.Lambda, cfg.M0, model.coef.bounds->M1);
    const auto study = run_general_study(model, radii, cfg.grid_nx, cfg.grid_nt);

    RunResult res;
    const auto& g = model.frame;
    const std::string extra = "# mu=" + fmt_real(g.mu) + " lambda=" + fmt_real(g.lambda) +
                              " Lambda=" + fmt_real(g.Lambda) + " M0=" + fmt_real(g.M0) + " c=" + fmt_real(g.c) +
                              " N0=" + fmt_real(g.N0) + " k0=" + fmt_real(g.k0) + "\n";
    res.files["general_bound.csv"] = csv_header(cfg, extra) + report_rows(study.reports, study.fit);
    std::size_t violations = 0;
    for (const auto& r : study.reports) violations += !r.conforms();
    res.console = "generalized bound (mu=" + fmt_real(cfg.mu) + "): " +
                  std::to_string(study.reports.size() - violations) + "/" + std::to_string(study.reports.size()) +
                  " radii conform\n";
    if (violations) res.exit_code = kExitBoundViolation;
    return res;
}

RunResult run_barrier_table(const RunConfig& cfg) {
    BarrierSpec spec{cfg.barrier_R, 256, 1};
    const double bound = barrier_bound(cfg.barrier_R);
    std::string csv = csv_header(cfg, "# R=" + fmt_real(cfg.barrier_R) + "\n") + "t,x,v,bound\n";
    for (double t : cfg.barrier_times)
        for (std::size_t j = 0; j < cfg.barrier_nx; ++j) {
            const double x = -cfg.barrier_R + 2.0 * cfg.barrier_R * static_cast<double>(j) /
                                                  static_cast<double>(cfg.barrier_nx - 1);
            csv += fmt_real(t) + "," + fmt_real(x) + "," + fmt_real(barrier_1d(spec, t, x)) + "," +
                   fmt_real(bound) + "\n";
        }
    RunResult res;
    res.files["barrier_table.csv"] = csv;
    res.console = "barrier table: R = " + fmt_real(cfg.barrier_R) + ", bound = " + fmt_real(bound) + "\n";
    return res;
}

RunResult run_convergence(const RunConfig& cfg) {
    const auto levels = default_refinements(cfg.convergence_levels);
    const auto result = convergence_order(manufactured_heat_problem(), levels);
    std::string csv = csv_header(cfg, "# problem=manufactured-heat u=exp(-t)sin(pi x)\n");
    csv += "level,n_x,n_t,h,error,order\n";
    for (std::size_t l = 0; l < result.errors.size(); ++l)
        csv += std::to_string(l) + "," + std::to_string(levels[l].n_x) + "," + std::to_string(levels[l].n_t) + "," +
               fmt_real(result.h[l]) + "," + fmt_real(result.errors[l]) + "," +
               (result.exact ? "exact" : fmt_real(result.order)) + "\n";
    RunResult res;
    res.files["convergence.csv"] = csv;
    res.console = "convergence order: " + (result.exact ? std::string("exact") : fmt_real(result.order)) +
                  (result.monotone ? "" : " (errors not monotone)") + "\n";
    if (!result.monotone) res.exit_code = kExitNumerical;
    return res;
}

}  // namespace

Command parse_command(const std::string& name) {
    if (name == "price") return Command::price;
    if (name == "verify-key-lemma") return Command::verify_key_lemma;
    if (name == "verify-general") return Command::verify_general;
    if (name == "barrier-table") return Command::barrier_table;
    if (name == "convergence") return Command::convergence;
    if (name == "sweep") return Command::sweep;
    throw ConfigError("unknown command '" + name + "'");
}

std::string to_string(Command c) {
    switch (c) {
        case Command::price: return "price";
        case Command::verify_key_lemma: return "verify-key-lemma";
        case Command::verify_general: return "verify-general";
        case Command::barrier_table: return "barrier-table";
        case Command::convergence: return "convergence";
        case Command::sweep: return "sweep";
    }
    return "unknown";
}

void RunConfig::validate() const {
    if (needs_market(command) && !market) throw ConfigError(to_string(command) + " needs a market (--config)");
    if (market) market->validate();
    if (grid_nx < 3 || grid_nt < 3) throw ConfigError("grid sizes must be >= 3");
    if (grid_nx > 20001 || grid_nt > 20001) throw ConfigError("grid sizes above 20001 are not supported");
    if (paths == 0 || steps == 0) throw ConfigError("paths and steps must be positive");
    for (double r : r_list)
        if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("r_list entries must be positive");
    if (!std::isfinite(t) || !std::isfinite(x)) throw ConfigError("price point must be finite");
    if (!(mu > 1.0)) throw ConfigError("mu must exceed 1");
    if (!(lambda > 0.0) || !(Lambda >= lambda)) throw ConfigError("need 0 < lambda <= Lambda");
    if (!(M0 > 0.0)) throw ConfigError("M0 must be positive");
    if (!(barrier_R > 0.0)) throw ConfigError("barrier R must be positive");
    if (barrier_nx < 2) throw ConfigError("barrier n_x must be >= 2");
    for (double bt : barrier_times)
        if (!(bt > 0.0)) throw ConfigError("barrier times must be positive");
    if (convergence_levels < 3 || convergence_levels > 6) throw ConfigError("convergence levels must lie in [3, 6]");
}

std::string RunConfig::canonical() const {
    std::ostringstream s;
    s << "command=" << to_string(command) << "\n";
    if (market) {
        s << "market.rate=" << fmt_real(market->rate) << "\nmarket.maturity=" << fmt_real(market->maturity)
          << "\nmarket.volatility=" << fmt_real(market->volatility) << "\nmarket.strike=" << fmt_real(market->strike)
          << "\n";
        for (const auto& p : market->dividend_density.pieces())
            s << "dividend=" << fmt_real(p.start) << ":" << fmt_real(p.value) << "\n";
        for (const auto& p : market->weighting_density.pieces())
            s << "weighting=" << fmt_real(p.start) << ":" << fmt_real(p.value) << "\n";
    }
    s << "grid=" << grid_nx << "x" << grid_nt << "\nmc=" << paths << "," << steps << "," << seed << ","
      << to_string(scheme) << "\nprice=" << fmt_real(t) << "," << fmt_real(x) << "\nr_list=" << fmt_list(r_list)
      << "\nframe=" << fmt_real(t0) << "," << fmt_real(mu) << "," << fmt_real(lambda) << "," << fmt_real(Lambda)
      << "," << fmt_real(M0) << "\nbarrier=" << fmt_real(barrier_R) << ";" << fmt_list(barrier_times) << ";"
      << barrier_nx << "\nconvergence=" << convergence_levels << "\n";
    return s.str();
}

std::uint64_t RunConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : canonical()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

RunConfig resolve_config(Command command, const CliOverrides& ov) {
    RunConfig cfg;
    cfg.command = command;
    if (ov.config_path) {
        const auto doc = load_config(*ov.config_path);
        const auto& allowed = run_sections();
        for (const auto& [section, keys] : doc.sections) {
            auto it = allowed.find(section);
            if (it == allowed.end()) throw ConfigError("unknown section [" + section + "]");
            for (const auto& [key, value] : keys)
                if (!it->second.count(key)) throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
        }
        if (doc.sections.count("market")) cfg.market = market_from_config(doc);
        auto real = [&](const char* sec, const char* key, double& dst) {
            if (doc.has(sec, key)) dst = parse_real(doc.get(sec, key), std::string(sec) + "." + key);
        };
        auto count = [&](const char* sec, const char* key, std::size_t& dst) {
            if (doc.has(sec, key)) dst = parse_count(doc.get(sec, key), std::string(sec) + "." + key);
        };
        count("grid", "nx", cfg.grid_nx);
        count("grid", "nt", cfg.grid_nt);
        count("monte_carlo", "paths", cfg.paths);
        count("monte_carlo", "steps", cfg.steps);
        if (doc.has("monte_carlo", "seed")) {
            cfg.seed = parse_u64(doc.get("monte_carlo", "seed"), "monte_carlo.seed");
            cfg.seed_explicit = true;
        }
        if (doc.has("monte_carlo", "scheme")) cfg.scheme = parse_scheme(doc.get("monte_carlo", "scheme"));
        real("price", "t", cfg.t);
        real("price", "x", cfg.x);
        if (doc.has("frame", "r_list")) cfg.r_list = parse_real_list(doc.get("frame", "r_list"), "frame.r_list");
        real("frame", "t0", cfg.t0);
        real("frame", "mu", cfg.mu);
        real("frame", "lambda", cfg.lambda);
        real("frame", "Lambda", cfg.Lambda);
        real("frame", "M0", cfg.M0);
        real("barrier", "R", cfg.barrier_R);
        if (doc.has("barrier", "t_list"))
            cfg.barrier_times = parse_real_list(doc.get("barrier", "t_list"), "barrier.t_list");
        count("barrier", "n_x", cfg.barrier_nx);
        count("convergence", "levels", cfg.convergence_levels);
        if (doc.has("output", "dir")) cfg.out_dir = doc.get("output", "dir");
    }
    if (ov.out_dir) cfg.out_dir = *ov.out_dir;
    if (ov.seed) {
        cfg.seed = *ov.seed;
        cfg.seed_explicit = true;
    }
    if (ov.paths) cfg.paths = *ov.paths;
    if (ov.steps) cfg.steps = *ov.steps;
    if (ov.grid_nx) cfg.grid_nx = *ov.grid_nx;
    if (ov.grid_nt) cfg.grid_nt = *ov.grid_nt;
    if (ov.r_list) cfg.r_list = parse_real_list(*ov.r_list, "--r-list");
    if (ov.mu) cfg.mu = *ov.mu;
    if (ov.t) cfg.t = *ov.t;
    if (ov.x) cfg.x = *ov.x;
    if (ov.scheme) cfg.scheme = parse_scheme(*ov.scheme);
    cfg.validate();
    return cfg;
}

RunResult run(const RunConfig& cfg) {
    cfg.validate();
    try {
        switch (cfg.command) {
            case Command::price: return run_price(cfg);
            case Command::sweep: return run_sweep(cfg);
            case Command::verify_key_lemma: return run_key_lemma(cfg);
            case Command::verify_general: return run_general(cfg);
            case Command::barrier_table: return run_barrier_table(cfg);
            case Command::convergence: return run_convergence(cfg);
        }
    } catch (const NumericalError& e) {
        RunResult res;
        res.exit_code = kExitNumerical;
        res.console = std::string("numerical failure: ") + e.what() + "\n";
        return res;
    } catch (const BoundViolation& e) {
        RunResult res;
        res.exit_code = kExitBoundViolation;
        res.console = std::string("bound violation: ") + e.what() + "\n";
        return res;
    }
    throw ConfigError("unhandled command");
}

void write_artifacts(const RunResult& result, const std::string& dir) {
    if (result.files.empty()) return;
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const auto& [name, content] : result.files) {
        const fs::path final_path = fs::path(dir) / name;
        const fs::path tmp = fs::path(dir) / (name + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw ConfigError("cannot write " + tmp.string());
            out << content;
            if (!out) throw ConfigError("short write to " + tmp.string());
        }
        fs::rename(tmp, final_path);
    }
}

}  // namespace asianpde
