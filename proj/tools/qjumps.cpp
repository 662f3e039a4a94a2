// qjumps — command-line front end: simulate quantum-jump trajectories of the
// two-atom/cavity system (or its toy and effective reductions), predict the
// closed-form telegraph observables, analyze click records, sweep parameter
// perturbations, and compare simulation against prediction.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qjumps/evolve.hpp"
#include "qjumps/hilbert.hpp"
#include "qjumps/markov.hpp"
#include "qjumps/models.hpp"
#include "qjumps/telegraph.hpp"
#include "qjumps/trajectory.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace qjumps;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCompareFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitInsufficientData = 4;

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::string model = "full";  // toy | full | effective
    models::ToyParams toy;
    models::ModelParams params;
    // simulation
    double t_max = 1e6;
    double dt = 2.0;
    int n_traj = 20;
    std::uint64_t master_seed = 1;
    int workers = 1;
    double snapshot_interval = 0;  // 0 = no snapshots
    std::string initial_state = "";  // default per model
    // analysis
    std::optional<double> tau_thresh;
    std::vector<double> t_wait;
    double fidelity_bin = 0;  // 0 = snapshot_interval
    std::vector<double> t_grid;
    // sweep
    std::string sweep_param;  // dg_over_g | eta | domega_m_over_omega_m
    std::vector<double> sweep_values;
    // compare tolerances (relative)
    double tol_t_dark = 0.15;
    double tol_t_light = 0.25;
    double tol_interclick = 0.15;

    json raw;  // config as parsed, embedded into outputs
};

double require_number(const json& j, const std::string& field, std::vector<std::string>& errors,
                      double fallback) {
    if (!j.contains(field)) return fallback;
    if (!j[field].is_number()) {
        errors.push_back("field '" + field + "': expected a number");
        return fallback;
    }
    return j[field].get<double>();
}

RunConfig preset_config(const std::string& name) {
    RunConfig c;
    if (name == "toy") {
        c.model = "toy";
        c.toy = {1.0, 1.0, 1e-3};  // omega_L = gamma_L, gamma_D = 1e-3 gamma_L
        c.t_max = 2e4;
        c.dt = 0.5;
        c.n_traj = 200;
    } else if (name == "fig5a") {
        c.model = "full";
        c.params = models::ModelParams{};  // delta=50g, omega_L=kappa=g, omega_M=0.05g,
        c.params.gamma0 = c.params.gamma1 = 0.05;  // Gamma=0.1g -> C=10
        c.t_max = 1e6;
        c.dt = 2.0;
        c.n_traj = 100;
    } else if (name == "fig5b") {
        c = preset_config("fig5a");
        c.params.gamma0 = c.params.gamma1 = 0.5;  // Gamma=g -> C=1
    } else if (name == "fig6") {
        c = preset_config("fig5a");
        c.model = "effective";
        c.params.gamma0 = c.params.gamma1 = 0.025;  // Gamma = omega_M = 0.05g -> C=20
        c.dt = 10.0;
        c.snapshot_interval = 200.0;
    } else {
        throw ValidationError("unknown preset '" + name + "' (use toy, fig5a, fig5b, fig6)");
    }
    return c;
}

void apply_json(RunConfig& c, const json& j) {
    std::vector<std::string> errors;

    if (j.contains("preset")) {
        if (!j["preset"].is_string())
            errors.push_back("field 'preset': expected a string");
        else
            c = preset_config(j["preset"].get<std::string>());
    }
    if (j.contains("model")) {
        if (!j["model"].is_string())
            errors.push_back("field 'model': expected a string");
        else {
            c.model = j["model"].get<std::string>();
            if (c.model != "toy" && c.model != "full" && c.model != "effective")
                errors.push_back("field 'model': must be toy, full or effective");
        }
    }
    if (j.contains("params")) {
        const json& p = j["params"];
        if (!p.is_object()) {
            errors.push_back("field 'params': expected an object");
        } else if (c.model == "toy") {
            c.toy.omega_L = require_number(p, "omega_L", errors, c.toy.omega_L);
            c.toy.gamma_L = require_number(p, "gamma_L", errors, c.toy.gamma_L);
            c.toy.gamma_D = require_number(p, "gamma_D", errors, c.toy.gamma_D);
        } else {
            auto& m = c.params;
            if (p.contains("g")) m.g1 = m.g2 = require_number(p, "g", errors, m.g_mean());
            m.g1 = require_number(p, "g1", errors, m.g1);
            m.g2 = require_number(p, "g2", errors, m.g2);
            if (p.contains("omega_M"))
                m.omega_M1 = m.omega_M2 = require_number(p, "omega_M", errors, m.omega_M1);
            m.omega_M1 = require_number(p, "omega_M1", errors, m.omega_M1);
            m.omega_M2 = require_number(p, "omega_M2", errors, m.omega_M2);
            m.kappa = require_number(p, "kappa", errors, m.kappa);
            m.gamma0 = require_number(p, "gamma0", errors, m.gamma0);
            m.gamma1 = require_number(p, "gamma1", errors, m.gamma1);
            m.omega_L = require_number(p, "omega_L", errors, m.omega_L);
            m.delta = require_number(p, "delta", errors, m.delta);
            m.eta = require_number(p, "eta", errors, m.eta);
            if (p.contains("n_max")) {
                if (!p["n_max"].is_number_integer())
                    errors.push_back("field 'n_max': expected an integer");
                else
                    m.n_max = p["n_max"].get<int>();
            }
        }
    }
    if (j.contains("simulation")) {
        const json& s = j["simulation"];
        c.t_max = require_number(s, "t_max", errors, c.t_max);
        c.dt = require_number(s, "dt", errors, c.dt);
        c.n_traj = static_cast<int>(require_number(s, "n_traj", errors, c.n_traj));
        if (s.contains("master_seed")) {
            if (!s["master_seed"].is_number_unsigned() && !s["master_seed"].is_number_integer())
                errors.push_back("field 'master_seed': expected an integer");
            else
                c.master_seed = s["master_seed"].get<std::uint64_t>();
        }
        c.snapshot_interval = require_number(s, "snapshot_interval", errors, c.snapshot_interval);
        if (s.contains("initial_state")) c.initial_state = s["initial_state"].get<std::string>();
    }
    if (j.contains("analysis")) {
        const json& a = j["analysis"];
        if (a.contains("tau_thresh")) c.tau_thresh = require_number(a, "tau_thresh", errors, 0);
        c.fidelity_bin = require_number(a, "fidelity_bin", errors, c.fidelity_bin);
        if (a.contains("t_wait")) c.t_wait = a["t_wait"].get<std::vector<double>>();
        if (a.contains("t_grid")) c.t_grid = a["t_grid"].get<std::vector<double>>();
    }
    if (j.contains("sweep")) {
        const json& s = j["sweep"];
        if (s.contains("param")) c.sweep_param = s["param"].get<std::string>();
        if (s.contains("values")) c.sweep_values = s["values"].get<std::vector<double>>();
        if (!c.sweep_param.empty() && c.sweep_param != "dg_over_g" && c.sweep_param != "eta" &&
            c.sweep_param != "domega_m_over_omega_m")
            errors.push_back(
                "field 'sweep.param': must be dg_over_g, eta or domega_m_over_omega_m");
    }
    if (j.contains("compare")) {
        const json& t = j["compare"];
        c.tol_t_dark = require_number(t, "tol_t_dark", errors, c.tol_t_dark);
        c.tol_t_light = require_number(t, "tol_t_light", errors, c.tol_t_light);
        c.tol_interclick = require_number(t, "tol_interclick", errors, c.tol_interclick);
    }

    // preconditions, collected rather than thrown one at a time
    try {
        if (c.model == "toy")
            c.toy.validate();
        else
            c.params.validate();
    } catch (const std::exception& e) {
        errors.push_back(e.what());
    }
    if (c.t_max <= 0) errors.push_back("field 'simulation.t_max': must be > 0");
    if (c.dt <= 0) errors.push_back("field 'simulation.dt': must be > 0");
    if (c.n_traj < 1) errors.push_back("field 'simulation.n_traj': must be >= 1");
    if (c.tau_thresh && *c.tau_thresh <= 0)
        errors.push_back("field 'analysis.tau_thresh': must be > 0");

    if (!errors.empty()) {
        std::string all = "configuration invalid:";
        for (const auto& e : errors) all += "\n  " + e;
        throw ValidationError(all);
    }
    c.raw = j;
}

RunConfig load_config(const std::string& preset, const std::string& config_path,
                      std::optional<std::uint64_t> seed_override, int workers) {
    RunConfig c;
    if (!preset.empty()) c = preset_config(preset);
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw ValidationError("cannot open config file '" + config_path + "'");
        json j;
        try {
            j = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ValidationError(std::string("config parse error: ") + e.what());
        }
        apply_json(c, j);
    }
    if (preset.empty() && config_path.empty())
        throw ValidationError("either --preset or --config is required");
    if (seed_override) c.master_seed = *seed_override;
    c.workers = workers;
    return c;
}

json config_snapshot(const RunConfig& c) {
    json j;
    j["model"] = c.model;
    if (c.model == "toy") {
        j["params"] = {{"omega_L", c.toy.omega_L},
                       {"gamma_L", c.toy.gamma_L},
                       {"gamma_D", c.toy.gamma_D}};
    } else {
        const auto& m = c.params;
        j["params"] = {{"g1", m.g1},         {"g2", m.g2},       {"kappa", m.kappa},
                       {"gamma0", m.gamma0}, {"gamma1", m.gamma1}, {"omega_L", m.omega_L},
                       {"omega_M1", m.omega_M1}, {"omega_M2", m.omega_M2}, {"delta", m.delta},
                       {"eta", m.eta},       {"n_max", m.n_max}};
    }
    j["simulation"] = {{"t_max", c.t_max},
                       {"dt", c.dt},
                       {"n_traj", c.n_traj},
                       {"master_seed", c.master_seed},
                       {"snapshot_interval", c.snapshot_interval}};
    if (!c.initial_state.empty()) j["simulation"]["initial_state"] = c.initial_state;
    json a;
    if (c.tau_thresh) a["tau_thresh"] = *c.tau_thresh;
    if (!c.t_wait.empty()) a["t_wait"] = c.t_wait;
    if (!c.t_grid.empty()) a["t_grid"] = c.t_grid;
    if (c.fidelity_bin > 0) a["fidelity_bin"] = c.fidelity_bin;
    if (!a.is_null()) j["analysis"] = a;
    if (!c.sweep_param.empty()) j["sweep"] = {{"param", c.sweep_param}, {"values", c.sweep_values}};
    return j;
}

struct BuiltModel {
    models::ModelBundle bundle;
    Eigen::VectorXcd psi0;
    Eigen::VectorXcd target;  // heralded entangled state
    markov::Timescales timescales;
};

models::ModelParams perturbed_params(const RunConfig& c, double value) {
    models::ModelParams p = c.params;
    if (c.sweep_param == "dg_over_g") {
        const double g = p.g_mean();
        p.g1 = g * (1.0 + 0.5 * value);
        p.g2 = g * (1.0 - 0.5 * value);
    } else if (c.sweep_param == "eta") {
        p.eta = value;
    } else if (c.sweep_param == "domega_m_over_omega_m") {
        const double om = 0.5 * (p.omega_M1 + p.omega_M2);
        p.omega_M1 = om * (1.0 + 0.5 * value);
        p.omega_M2 = om * (1.0 - 0.5 * value);
    }
    return p;
}

BuiltModel build_model(const RunConfig& c, const models::ModelParams* override_params = nullptr) {
    BuiltModel b;
    if (c.model == "toy") {
        b.bundle = models::build_toy(c.toy);
        b.psi0 = Eigen::VectorXcd::Zero(4);
        b.psi0(models::kToyG) = 1.0;
        b.target = Eigen::VectorXcd::Zero(4);
        b.target(models::kToyD) = 1.0;
        const double x = c.toy.gamma_L > 0 ? c.toy.omega_L / c.toy.gamma_L : 0.0;
        b.timescales = markov::toy_timescales(x, c.toy.gamma_L, c.toy.gamma_D);
        return b;
    }
    const models::ModelParams& p = override_params ? *override_params : c.params;
    if (c.model == "full") {
        b.bundle = models::build_full(p);
        const auto& spec = b.bundle.space;
        b.psi0 = hilbert::state_vector(c.initial_state.empty() ? "00" : c.initial_state, spec);
        b.target = hilbert::state_vector("a01", spec);
    } else {
        b.bundle = models::build_effective(p);
        b.psi0 = Eigen::VectorXcd::Zero(4);
        b.psi0(models::kEff00) = 1.0;
        b.target = Eigen::VectorXcd::Zero(4);
        b.target(models::kEffA01) = 1.0;
    }
    b.timescales = markov::cavity_timescales(p);
    return b;
}

double default_tau(const RunConfig& c, const BuiltModel& b) {
    if (c.tau_thresh) return *c.tau_thresh;
    const double eta = c.model == "toy" ? 1.0 : c.params.eta;
    return 10.0 * b.timescales.t_click / eta;
}

std::vector<trajectory::TrajectoryRecord> simulate_records(const RunConfig& c,
                                                           const BuiltModel& b) {
    trajectory::RunOptions opt;
    opt.t_max = c.t_max;
    opt.dt = c.dt;
    opt.policy = trajectory::DetectionPolicy::default_for(
        b.bundle, c.model == "toy" ? 1.0 : c.params.eta);
    if (c.snapshot_interval > 0)
        for (double t = c.snapshot_interval; t < c.t_max; t += c.snapshot_interval)
            opt.snapshot_times.push_back(t);
    auto ens = trajectory::run_ensemble(b.bundle, b.psi0, opt, c.n_traj, c.master_seed,
                                        c.workers);
    return std::move(ens.records);
}

void write_header(std::ostream& os, const RunConfig& c) {
    os << "# config=" << config_snapshot(c).dump() << "\n";
    os << "# master_seed=" << c.master_seed << "\n";
}

// ---------------------------------------------------------------------------
// commands

int cmd_simulate(const RunConfig& c, const fs::path& out) {
    auto b = build_model(c);
    auto records = simulate_records(c, b);
    fs::create_directories(out);
    const std::string params_line = config_snapshot(c).dump();
    for (size_t i = 0; i < records.size(); ++i) {
        std::ofstream f(out / ("traj_" + std::to_string(i) + ".txt"));
        trajectory::write_record(f, records[i], params_line);
    }
    std::ofstream sum(out / "summary.csv");
    write_header(sum, c);
    sum << "trajectory,seed,n_events,n_detected\n";
    for (size_t i = 0; i < records.size(); ++i) {
        long nd = 0;
        for (const auto& e : records[i].events) nd += e.detected;
        sum << i << ',' << records[i].seed << ',' << records[i].events.size() << ',' << nd
            << '\n';
    }
    std::cout << "wrote " << records.size() << " trajectory records to " << out << "\n";
    return kExitOk;
}

int cmd_predict(const RunConfig& c, const fs::path& out) {
    auto b = build_model(c);
    fs::create_directories(out);
    std::ofstream f(out / "predictions.csv");
    f.precision(12);
    write_header(f, c);
    f << "quantity,value,unit\n";
    f << "t_dark," << b.timescales.t_dark << ",time\n";
    f << "t_light," << b.timescales.t_light << ",time\n";
    f << "t_click," << b.timescales.t_click << ",time\n";
    if (c.model != "toy") {
        auto r = markov::rates(c.params);
        auto d = models::derived_rates(c.params);
        f << "gamma_L," << r.gamma_L << ",rate\n";
        f << "gamma_D," << r.gamma_D << ",rate\n";
        f << "gamma_C," << r.gamma_C << ",rate\n";
        f << "detected_click_rate," << r.detected_click_rate() << ",rate\n";
        f << "cooperativity," << d.C << ",dimensionless\n";
        f << "asymptotic_fidelity," << markov::asymptotic_fidelity(d.C, c.params.eta)
          << ",dimensionless\n";

        std::ofstream fc(out / "fidelity_curve.csv");
        fc.precision(12);
        write_header(fc, c);
        fc << "t,P0D,P0L,F\n";
        std::vector<double> grid = c.t_grid;
        if (grid.empty())
            for (int i = 0; i <= 100; ++i) grid.push_back(0.05 * i * b.timescales.t_click);
        for (double t : grid) {
            auto p = markov::no_click_probabilities(r, t);
            fc << t << ',' << p.p_dark << ',' << p.p_light << ',' << markov::fidelity_curve(r, t)
               << '\n';
        }
    }
    std::cout << "wrote predictions to " << out << "\n";
    return kExitOk;
}

struct AnalysisResult {
    telegraph::PeriodStats stats;
    telegraph::SurvivalCurve survival;
    std::vector<double> t_wait;
    std::vector<telegraph::FidelityEstimate> fidelity;  // empty entries skipped
    std::vector<bool> fidelity_ok;
};

AnalysisResult analyze_records_set(const RunConfig& c, const BuiltModel& b,
                                   const std::vector<trajectory::TrajectoryRecord>& records) {
    AnalysisResult res;
    const double tau = default_tau(c, b);
    res.stats = telegraph::analyze_records(records, tau);

    std::vector<double> grid = c.t_grid;
    if (grid.empty())
        for (int i = 0; i <= 40; ++i) grid.push_back(0.25 * i * b.timescales.t_click);
    res.survival = telegraph::survival_probability(records, grid);

    res.t_wait = c.t_wait;
    const double bin = c.fidelity_bin > 0
                           ? c.fidelity_bin
                           : (c.snapshot_interval > 0 ? c.snapshot_interval : 0);
    for (double tw : res.t_wait) {
        try {
            res.fidelity.push_back(telegraph::conditional_fidelity(records, tw, b.target, bin));
            res.fidelity_ok.push_back(true);
        } catch (const telegraph::InsufficientDataError&) {
            res.fidelity.push_back({});
            res.fidelity_ok.push_back(false);
        }
    }
    return res;
}

void write_analysis(const RunConfig& c, const AnalysisResult& res, const fs::path& out,
                    const std::string& suffix = "") {
    fs::create_directories(out);
    {
        std::ofstream f(out / ("period_stats" + suffix + ".csv"));
        f.precision(12);
        write_header(f, c);
        f << "quantity,value,stderr,count,unit\n";
        auto row = [&](const char* name, const std::optional<double>& v,
                       const std::optional<double>& e, long n, const char* unit) {
            f << name << ',';
            if (v) f << *v;
            f << ',';
            if (e) f << *e;
            f << ',' << n << ',' << unit << '\n';
        };
        const auto& s = res.stats;
        row("mean_dark", s.mean_dark, s.stderr_dark, s.n_dark, "time");
        row("mean_light", s.mean_light, s.stderr_light, s.n_light, "time");
        row("mean_interclick", s.mean_interclick, s.stderr_interclick, s.n_interclick, "time");
        row("dwell_dark", s.dwell_dark, std::nullopt, s.n_dark, "time");
        row("dwell_light", s.dwell_light, std::nullopt, s.n_light, "time");
    }
    {
        std::ofstream f(out / ("survival" + suffix + ".csv"));
        f.precision(12);
        write_header(f, c);
        f << "t,survival,stderr\n";
        for (size_t i = 0; i < res.survival.t.size(); ++i)
            f << res.survival.t[i] << ',' << res.survival.p[i] << ',' << res.survival.err[i]
              << '\n';
    }
    if (!res.t_wait.empty()) {
        std::ofstream f(out / ("fidelity" + suffix + ".csv"));
        f.precision(12);
        write_header(f, c);
        f << "t_wait,fidelity,stderr,n_events\n";
        for (size_t i = 0; i < res.t_wait.size(); ++i) {
            f << res.t_wait[i] << ',';
            if (res.fidelity_ok[i])
                f << res.fidelity[i].value << ',' << res.fidelity[i].stderr_value << ','
                  << res.fidelity[i].n_events;
            else
                f << ",,0";
            f << '\n';
        }
    }
}

int cmd_analyze(const RunConfig& c, const fs::path& out) {
    auto b = build_model(c);
    auto records = simulate_records(c, b);
    auto res = analyze_records_set(c, b, records);
    write_analysis(c, res, out);
    std::cout << "wrote analysis to " << out << "\n";
    return kExitOk;
}

int cmd_sweep(const RunConfig& c, const fs::path& out) {
    if (c.sweep_param.empty() || c.sweep_values.empty())
        throw ValidationError("sweep requires sweep.param and sweep.values in the config");
    if (c.model == "toy")
        throw ValidationError("sweep applies to the full and effective models only");
    fs::create_directories(out);
    std::ofstream merged(out / "sweep.csv");
    merged.precision(12);
    write_header(merged, c);
    merged << "sweep_value,t,survival,stderr\n";
    std::ofstream mstats(out / "sweep_stats.csv");
    mstats.precision(12);
    write_header(mstats, c);
    mstats << "sweep_value,n_dark,dwell_dark,mean_interclick\n";
    for (size_t k = 0; k < c.sweep_values.size(); ++k) {
        const double v = c.sweep_values[k];
        models::ModelParams p = perturbed_params(c, v);
        RunConfig cv = c;
        cv.params = p;
        auto b = build_model(cv, &p);
        auto records = simulate_records(cv, b);
        auto res = analyze_records_set(cv, b, records);
        write_analysis(cv, res, out, "_" + std::to_string(k));
        for (size_t i = 0; i < res.survival.t.size(); ++i)
            merged << v << ',' << res.survival.t[i] << ',' << res.survival.p[i] << ','
                   << res.survival.err[i] << '\n';
        mstats << v << ',' << res.stats.n_dark << ',' << res.stats.dwell_dark.value_or(0) << ','
               << res.stats.mean_interclick.value_or(0) << '\n';
    }
    std::cout << "wrote sweep results to " << out << "\n";
    return kExitOk;
}

int cmd_compare(const RunConfig& c, const fs::path& out) {
    auto b = build_model(c);
    auto records = simulate_records(c, b);
    auto res = analyze_records_set(c, b, records);
    fs::create_directories(out);
    std::ofstream f(out / "compare.csv");
    f.precision(12);
    write_header(f, c);
    f << "quantity,simulated,predicted,relative_deviation,tolerance,pass\n";
    bool all_pass = true;
    auto row = [&](const char* name, std::optional<double> sim, double pred, double tol) {
        f << name << ',';
        if (sim) f << *sim;
        f << ',' << pred << ',';
        bool ok = false;
        if (sim && pred != 0) {
            const double dev = std::abs(*sim - pred) / std::abs(pred);
            ok = dev <= tol;
            f << dev;
        }
        f << ',' << tol << ',' << (ok ? 1 : 0) << '\n';
        all_pass = all_pass && ok;
    };
    row("t_dark", res.stats.dwell_dark, b.timescales.t_dark, c.tol_t_dark);
    row("t_light", res.stats.dwell_light, b.timescales.t_light, c.tol_t_light);
    row("t_click", res.stats.mean_interclick, b.timescales.t_click, c.tol_interclick);
    std::cout << "wrote comparison to " << out << (all_pass ? " (all pass)" : " (FAILURES)")
              << "\n";
    return all_pass ? kExitOk : kExitCompareFailure;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum-jump telegraph simulator and analytic predictor"};
    app.require_subcommand(1);
    app.fallthrough();  // allow the shared options below after the subcommand

    std::string config_path, preset, out_dir = "out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int workers = 1;
    if (const char* env = std::getenv("QJUMPS_WORKERS")) workers = std::atoi(env);

    app.add_option("--config", config_path, "JSON configuration file");
    app.add_option("--preset", preset, "named preset: toy, fig5a, fig5b, fig6");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "master seed override")->each([&](const std::string&) {
        seed_set = true;
    });
    app.add_option("--workers", workers, "worker thread count");

    auto* sim = app.add_subcommand("simulate", "run a trajectory ensemble");
    auto* pre = app.add_subcommand("predict", "emit closed-form prediction tables");
    auto* ana = app.add_subcommand("analyze", "simulate and extract telegraph observables");
    auto* swp = app.add_subcommand("sweep", "one analysis per sweep value");
    auto* cmp = app.add_subcommand("compare", "simulated vs predicted observables");

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig c = load_config(preset, config_path,
                                  seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt,
                                  std::max(workers, 1));
        const fs::path out(out_dir);
        if (sim->parsed()) return cmd_simulate(c, out);
        if (pre->parsed()) return cmd_predict(c, out);
        if (ana->parsed()) return cmd_analyze(c, out);
        if (swp->parsed()) return cmd_sweep(c, out);
        if (cmp->parsed()) return cmd_compare(c, out);
        std::cerr << "error: no command\n";
        return kExitValidation;
    } catch (const ValidationError& e) {
        std::cerr << "error: validation: " << e.what() << "\n";
        return kExitValidation;
    } catch (const telegraph::InsufficientDataError& e) {
        std::cerr << "error: insufficient-data: " << e.what() << "\n";
        return kExitInsufficientData;
    } catch (const std::exception& e) {
        std::cerr << "error: numerical: " << e.what() << "\n";
        return kExitNumerical;
    }
}
