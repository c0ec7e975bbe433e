#include "ncheat/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#include "ncheat/analytic.hpp"
#include "ncheat/controller.hpp"
#include "ncheat/stability.hpp"

namespace ncheat {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct RawConfig {
    // section.key -> (value, line)
    std::map<std::string, std::pair<std::string, int>> entries;
    std::string origin;

    bool has(const std::string& key) const { return entries.count(key) != 0; }

    const std::string& get(const std::string& key) const {
        auto it = entries.find(key);
        if (it == entries.end())
            throw config_error(origin + ": missing key '" + key + "'");
        return it->second.first;
    }

    double get_double(const std::string& key) const {
        const std::string& v = get(key);
        try {
            std::size_t pos = 0;
            const double d = std::stod(v, &pos);
            if (pos != v.size())
                throw std::invalid_argument("trailing characters");
            return d;
        } catch (const std::exception&) {
            throw config_error(origin + ": line " + std::to_string(entries.at(key).second)
                               + ": key '" + key + "' is not a number: '" + v + "'");
        }
    }

    int get_int(const std::string& key) const {
        const double d = get_double(key);
        if (d != std::floor(d))
            throw config_error(origin + ": key '" + key + "' must be an integer");
        return static_cast<int>(d);
    }

    bool get_bool(const std::string& key) const {
        const std::string& v = get(key);
        if (v == "true" || v == "1")
            return true;
        if (v == "false" || v == "0")
            return false;
        throw config_error(origin + ": key '" + key + "' must be true/false");
    }
};

const std::set<std::string> kKnownKeys = {
    "run.mode",
    "curve.kind", "curve.alpha", "curve.k",
    "scheme.n_grid", "scheme.dt", "scheme.theta", "scheme.advection", "scheme.t_final",
    "controller.enabled", "controller.lambda", "controller.tol", "controller.max_terms",
    "initial.type", "initial.file",
    "output.trace", "output.summary", "output.samples",
};

RawConfig tokenize(std::istream& in, const std::string& origin) {
    RawConfig raw;
    raw.origin = origin;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw config_error(origin + ": line " + std::to_string(lineno)
                                   + ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw config_error(origin + ": line " + std::to_string(lineno)
                               + ": expected key = value");
        const std::string key = section + "." + trim(line.substr(0, eq));
        if (!kKnownKeys.count(key))
            throw config_error(origin + ": line " + std::to_string(lineno)
                               + ": unknown key '" + key + "'");
        raw.entries[key] = {trim(line.substr(eq + 1)), lineno};
    }
    return raw;
}

RunConfig from_raw(const RawConfig& raw) {
    RunConfig cfg;
    if (raw.has("run.mode")) {
        const std::string& m = raw.get("run.mode");
        if (m == "simulate")
            cfg.mode = RunMode::Simulate;
        else if (m == "kernelcheck")
            cfg.mode = RunMode::KernelCheck;
        else
            throw config_error(raw.origin + ": run.mode must be simulate or kernelcheck");
    }
    const std::string kind = raw.has("curve.kind") ? raw.get("curve.kind") : "powerlaw";
    if (kind == "powerlaw") {
        cfg.curve = BoundaryCurve::power_law(raw.get_double("curve.alpha"),
                                             raw.get_double("curve.k"));
    } else if (kind == "log") {
        cfg.curve = BoundaryCurve::log_growth();
    } else if (kind == "sin") {
        cfg.curve = BoundaryCurve::sinusoidal();
    } else {
        throw config_error(raw.origin + ": curve.kind must be powerlaw, log or sin");
    }
    cfg.scheme.n_grid = raw.get_int("scheme.n_grid");
    cfg.scheme.dt = raw.get_double("scheme.dt");
    cfg.scheme.theta = raw.get_double("scheme.theta");
    cfg.scheme.t_final = raw.get_double("scheme.t_final");
    if (raw.has("scheme.advection")) {
        const std::string& a = raw.get("scheme.advection");
        if (a == "centered")
            cfg.scheme.advection = AdvectionScheme::Centered;
        else if (a == "upwind")
            cfg.scheme.advection = AdvectionScheme::Upwind;
        else
            throw config_error(raw.origin + ": scheme.advection must be centered or upwind");
    }
    if (raw.has("controller.enabled"))
        cfg.controller_enabled = raw.get_bool("controller.enabled");
    if (cfg.controller_enabled)
        cfg.kernel.lambda = raw.get_double("controller.lambda");  // required when enabled
    else if (raw.has("controller.lambda"))
        cfg.kernel.lambda = raw.get_double("controller.lambda");
    if (raw.has("controller.tol"))
        cfg.kernel.tol = raw.get_double("controller.tol");
    if (raw.has("controller.max_terms"))
        cfg.kernel.max_terms = raw.get_int("controller.max_terms");
    if (raw.has("initial.type")) {
        const std::string& t = raw.get("initial.type");
        if (t == "analytic")
            cfg.initial = InitialKind::Analytic;
        else if (t == "sine")
            cfg.initial = InitialKind::Sine;
        else if (t == "custom")
            cfg.initial = InitialKind::Custom;
        else
            throw config_error(raw.origin + ": initial.type must be analytic, sine or custom");
    }
    if (raw.has("initial.file"))
        cfg.initial_file = raw.get("initial.file");
    if (raw.has("output.trace"))
        cfg.trace_path = raw.get("output.trace");
    if (raw.has("output.summary"))
        cfg.summary_path = raw.get("output.summary");
    if (raw.has("output.samples"))
        cfg.sample_count = raw.get_int("output.samples");
    cfg.validate();
    return cfg;
}

} // namespace

void RunConfig::validate() const {
    try {
        scheme.validate();
        kernel.validate();
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    if (initial == InitialKind::Custom && initial_file.empty())
        throw config_error("initial.type=custom requires initial.file");
    if (initial == InitialKind::Analytic && curve.kind != CurveKind::PowerLaw)
        throw config_error("initial.type=analytic requires a power-law curve");
    if (sample_count < 2)
        throw config_error("output.samples must be >= 2");
    if (trace_path.empty() || summary_path.empty())
        throw config_error("output paths must not be empty");
}

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    return from_raw(tokenize(in, origin));
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file: " + path);
    return from_raw(tokenize(in, path));
}

std::string serialize_config(const RunConfig& cfg) {
    std::ostringstream out;
    out << "[run]\n";
    out << "mode = " << (cfg.mode == RunMode::Simulate ? "simulate" : "kernelcheck") << "\n\n";
    out << "[curve]\n";
    switch (cfg.curve.kind) {
    case CurveKind::PowerLaw:
        out << "kind = powerlaw\n";
        out << "alpha = " << fmt(cfg.curve.alpha) << "\n";
        out << "k = " << fmt(cfg.curve.k) << "\n";
        break;
    case CurveKind::LogGrowth:
        out << "kind = log\n";
        break;
    case CurveKind::Sinusoidal:
        out << "kind = sin\n";
        break;
    }
    out << "\n[scheme]\n";
    out << "n_grid = " << cfg.scheme.n_grid << "\n";
    out << "dt = " << fmt(cfg.scheme.dt) << "\n";
    out << "theta = " << fmt(cfg.scheme.theta) << "\n";
    out << "advection = "
        << (cfg.scheme.advection == AdvectionScheme::Centered ? "centered" : "upwind") << "\n";
    out << "t_final = " << fmt(cfg.scheme.t_final) << "\n";
    out << "\n[controller]\n";
    out << "enabled = " << (cfg.controller_enabled ? "true" : "false") << "\n";
    out << "lambda = " << fmt(cfg.kernel.lambda) << "\n";
    out << "tol = " << fmt(cfg.kernel.tol) << "\n";
    out << "max_terms = " << cfg.kernel.max_terms << "\n";
    out << "\n[initial]\n";
    out << "type = "
        << (cfg.initial == InitialKind::Analytic ? "analytic"
            : cfg.initial == InitialKind::Sine   ? "sine"
                                                 : "custom")
        << "\n";
    if (!cfg.initial_file.empty())
        out << "file = " << cfg.initial_file << "\n";
    out << "\n[output]\n";
    out << "trace = " << cfg.trace_path << "\n";
    out << "summary = " << cfg.summary_path << "\n";
    out << "samples = " << cfg.sample_count << "\n";
    return out.str();
}

RunConfig preset(const std::string& name) {
    RunConfig cfg;
    if (name == "thm11") {
        cfg.curve = BoundaryCurve::power_law(1.0, 0.5);
        cfg.scheme = SchemeConfig{400, 0.0025, 0.5, AdvectionScheme::Centered, 100.0};
        cfg.controller_enabled = false;
        cfg.initial = InitialKind::Analytic;
        cfg.trace_path = "thm11_trace.csv";
        cfg.summary_path = "thm11_summary.txt";
    } else if (name == "thm12") {
        // dt = h: trapezoidal damping of roundoff-seeded high modes then
        // outruns the physical decay at every time, which a coarser step
        // does not (see README notes)
        cfg.curve = BoundaryCurve::power_law(0.25, 1.0);
        cfg.scheme = SchemeConfig{400, 0.0025, 0.5, AdvectionScheme::Centered, 200.0};
        cfg.controller_enabled = false;
        cfg.initial = InitialKind::Analytic;
        cfg.trace_path = "thm12_trace.csv";
        cfg.summary_path = "thm12_summary.txt";
    } else if (name == "closedloop") {
        cfg.curve = BoundaryCurve::power_law(1.0, 0.5);
        cfg.scheme = SchemeConfig{400, 0.00025, 0.5, AdvectionScheme::Centered, 10.0};
        cfg.controller_enabled = true;
        cfg.kernel = KernelParams{6.5, 1e-10, 64};
        cfg.initial = InitialKind::Analytic;
        cfg.trace_path = "closedloop_trace.csv";
        cfg.summary_path = "closedloop_summary.txt";
    } else if (name == "kernelcheck") {
        cfg.mode = RunMode::KernelCheck;
        cfg.kernel = KernelParams{6.5, 1e-10, 64};
        cfg.trace_path = "kernelcheck_trace.csv";
        cfg.summary_path = "kernelcheck_summary.txt";
    } else {
        throw config_error("unknown preset '" + name
                           + "'; available: thm11, thm12, closedloop, kernelcheck");
    }
    return cfg;
}

namespace {

std::vector<double> build_datum(const RunConfig& cfg) {
    const int n = cfg.scheme.n_grid;
    std::vector<double> w(n + 1);
    switch (cfg.initial) {
    case InitialKind::Analytic: {
        const AnalyticSolution sol(cfg.curve.alpha, cfg.curve.k);
        for (int i = 0; i <= n; ++i)
            w[i] = initial_datum(sol, static_cast<double>(i) / n);
        break;
    }
    case InitialKind::Sine:
        for (int i = 0; i <= n; ++i)
            w[i] = std::sin(std::numbers::pi * static_cast<double>(i) / n);
        break;
    case InitialKind::Custom: {
        std::ifstream in(cfg.initial_file);
        if (!in)
            throw config_error("cannot open initial.file: " + cfg.initial_file);
        for (int i = 0; i <= n; ++i)
            if (!(in >> w[i]))
                throw config_error("initial.file must tabulate n_grid + 1 values");
        break;
    }
    }
    w[0] = 0.0;
    return w;
}

std::vector<double> sample_grid(const RunConfig& cfg) {
    std::vector<double> ts(cfg.sample_count + 1);
    for (int i = 0; i <= cfg.sample_count; ++i)
        ts[i] = cfg.scheme.t_final * i / cfg.sample_count;
    return ts;
}

void write_trace_csv(const std::string& path, const DecayTrace& trace) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw config_error("cannot write trace file: " + path);
    out << "t,l_t,norm_u_phys,energy_ref,control_U\n";
    for (const TraceSample& s : trace.samples) {
        out << fmt(s.t) << ',' << fmt(s.boundary_length) << ',' << fmt(s.norm_phys) << ','
            << fmt(s.energy_ref) << ',';
        if (trace.controlled)
            out << fmt(s.control);
        out << '\n';
    }
}

const char* regime_name(Regime r) {
    switch (r) {
    case Regime::Exponential:
        return "Exponential";
    case Regime::AnalogousExponential:
        return "AnalogousExponential";
    case Regime::Polynomial:
        return "Polynomial";
    case Regime::Undetermined:
        return "Undetermined";
    }
    return "Undetermined";
}

struct ScenarioOutcome {
    DecayFit fit;
};

ScenarioOutcome execute_simulation(const RunConfig& cfg, std::ostream* summary) {
    const std::vector<double> ts = sample_grid(cfg);
    DecayTrace trace;
    RegularitySummary reg{};
    bool have_reg = false;
    if (cfg.controller_enabled) {
        ClosedLoopResult loop =
            run_closed_loop(build_datum(cfg), cfg.curve, cfg.scheme, cfg.kernel, ts);
        trace = std::move(loop.trace);
        if (loop.controls.size() >= 3) {
            reg = control_regularity_diagnostics(loop.controls, cfg.curve);
            have_reg = true;
        }
    } else {
        trace = simulate(build_datum(cfg), cfg.curve, cfg.scheme, [](double) { return 0.0; }, ts);
    }
    write_trace_csv(cfg.trace_path, trace);

    const double fit_k = cfg.curve.kind == CurveKind::PowerLaw ? cfg.curve.k : 1.0;
    DecayFit fit;
    try {
        fit = classify(trace, fit_k, cfg.curve.alpha);
    } catch (const std::invalid_argument&) {
        fit.regime = Regime::Undetermined;  // e.g. identically zero run
    }
    if (summary) {
        *summary << "regime=" << regime_name(fit.regime) << "\n";
        *summary << "rate=" << fmt(fit.rate) << "\n";
        *summary << "beta=" << fmt(fit.stretch_exponent) << "\n";
        *summary << "r_squared=" << fmt(fit.r_squared) << "\n";
        *summary << "window_start=" << fmt(fit.window.t_begin) << "\n";
        *summary << "window_end=" << fmt(fit.window.t_end) << "\n";
        *summary << "monotone=" << (cfg.curve.monotone() ? 1 : 0) << "\n";
        *summary << "controlled=" << (cfg.controller_enabled ? 1 : 0) << "\n";
        if (have_reg) {
            *summary << "l2_U=" << fmt(reg.l2_u) << "\n";
            *summary << "l2_dU=" << fmt(reg.l2_du) << "\n";
            *summary << "l2_sqrtl_dU=" << fmt(reg.l2_weighted_du) << "\n";
        }
        for (const std::string& w : trace.warnings)
            *summary << "warning=" << w << "\n";
    }
    return ScenarioOutcome{fit};
}

void execute_kernel_check(const RunConfig& cfg, std::ostream& summary) {
    const KernelResidual r64 = kernel_pde_residual(cfg.kernel, 64);
    const KernelResidual r128 = kernel_pde_residual(cfg.kernel, 128);
    summary << "lambda=" << fmt(cfg.kernel.lambda) << "\n";
    summary << "residual_p_64=" << fmt(r64.p_residual) << "\n";
    summary << "residual_p_128=" << fmt(r128.p_residual) << "\n";
    summary << "residual_q_64=" << fmt(r64.q_residual) << "\n";
    summary << "residual_q_128=" << fmt(r128.q_residual) << "\n";
    bool all_ok = true;
    for (double lam : {1.0, 6.5, 25.0}) {
        for (double l : {1.0, 2.0, 5.0}) {
            const KernelBoundCheck chk = kernel_bound_check(KernelParams{lam, cfg.kernel.tol,
                                                                         cfg.kernel.max_terms}, l);
            std::ostringstream key;
            key << "bound_lambda" << lam << "_l" << l;
            summary << key.str() << "_max=" << fmt(chk.empirical_max) << "\n";
            summary << key.str() << "=" << fmt(chk.bound) << "\n";
            all_ok = all_ok && chk.empirical_max <= chk.bound;
        }
    }
    summary << "bound_ok=" << (all_ok ? 1 : 0) << "\n";
}

} // namespace

void run_scenario(const RunConfig& cfg) {
    cfg.validate();
    std::ofstream summary(cfg.summary_path, std::ios::binary);
    if (!summary)
        throw config_error("cannot write summary file: " + cfg.summary_path);
    if (cfg.mode == RunMode::KernelCheck) {
        execute_kernel_check(cfg, summary);
        return;
    }
    execute_simulation(cfg, &summary);
}

SweepGrid parse_grid_spec(const std::string& spec) {
    SweepGrid grid;
    std::istringstream in(spec);
    std::string part;
    while (std::getline(in, part, ';')) {
        part = trim(part);
        if (part.empty())
            continue;
        const auto eq = part.find('=');
        if (eq == std::string::npos)
            throw config_error("grid spec entry lacks '=': " + part);
        const std::string key = trim(part.substr(0, eq));
        std::vector<double>* target = nullptr;
        if (key == "alpha")
            target = &grid.alpha;
        else if (key == "k")
            target = &grid.k;
        else if (key == "lambda")
            target = &grid.lambda;
        else
            throw config_error("grid spec key must be alpha, k or lambda: " + key);
        std::istringstream values(part.substr(eq + 1));
        std::string v;
        while (std::getline(values, v, ',')) {
            v = trim(v);
            try {
                target->push_back(std::stod(v));
            } catch (const std::exception&) {
                throw config_error("grid spec value is not a number: " + v);
            }
        }
    }
    return grid;
}

void sweep(const RunConfig& base, const SweepGrid& grid, const std::string& out_path) {
    base.validate();
    const std::vector<double> alphas = grid.alpha.empty()
                                           ? std::vector<double>{base.curve.alpha}
                                           : grid.alpha;
    const std::vector<double> ks = grid.k.empty() ? std::vector<double>{base.curve.k} : grid.k;
    const std::vector<double> lambdas =
        grid.lambda.empty() ? std::vector<double>{base.kernel.lambda} : grid.lambda;
    const std::size_t total = alphas.size() * ks.size() * lambdas.size();
    if (total > 10000)
        throw config_error("sweep grid exceeds 10^4 combinations");

    struct Combo {
        double alpha, k, lambda;
    };
    std::vector<Combo> combos;
    combos.reserve(total);
    for (double a : alphas)
        for (double k : ks)
            for (double lam : lambdas)
                combos.push_back({a, k, lam});

    auto run_one = [&base](const Combo& c) -> std::string {
        RunConfig cfg = base;
        if (cfg.curve.kind == CurveKind::PowerLaw)
            cfg.curve = BoundaryCurve::power_law(c.alpha, c.k);
        cfg.kernel.lambda = c.lambda;
        const std::vector<double> ts = sample_grid(cfg);
        DecayTrace trace;
        if (cfg.controller_enabled) {
            trace = run_closed_loop(build_datum(cfg), cfg.curve, cfg.scheme, cfg.kernel, ts).trace;
        } else {
            trace =
                simulate(build_datum(cfg), cfg.curve, cfg.scheme, [](double) { return 0.0; }, ts);
        }
        const double fit_k = cfg.curve.kind == CurveKind::PowerLaw ? cfg.curve.k : 1.0;
        DecayFit fit;
        try {
            fit = classify(trace, fit_k, c.alpha);
        } catch (const std::invalid_argument&) {
            fit.regime = Regime::Undetermined;
        }
        std::ostringstream row;
        row << fmt(c.alpha) << ',' << fmt(c.k) << ',' << fmt(c.lambda) << ','
            << regime_name(fit.regime) << ',' << fmt(fit.rate) << ','
            << fmt(fit.stretch_exponent) << ',' << fmt(fit.r_squared);
        return row.str();
    };

    // combinations run concurrently in bounded waves; rows land in grid order
    std::vector<std::string> rows(combos.size());
    const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t start = 0; start < combos.size(); start += workers) {
        const std::size_t stop = std::min(combos.size(), start + workers);
        std::vector<std::future<std::string>> batch;
        for (std::size_t i = start; i < stop; ++i)
            batch.push_back(std::async(std::launch::async, run_one, combos[i]));
        for (std::size_t i = start; i < stop; ++i)
            rows[i] = batch[i - start].get();
    }

    std::ofstream out(out_path, std::ios::binary);
    if (!out)
        throw config_error("cannot write sweep table: " + out_path);
    out << "alpha,k,lambda,regime,rate,beta,r_squared\n";
    for (const std::string& r : rows)
        out << r << '\n';
}

} // namespace ncheat
