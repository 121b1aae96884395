#include "pfscale/cli.hpp"

#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <ostream>

#include "pfscale/constants.hpp"
#include "pfscale/io.hpp"
#include "pfscale/lifting.hpp"
#include "pfscale/samples.hpp"
#include "pfscale/scaling.hpp"
#include "pfscale/suites.hpp"

namespace pfscale {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json echo(const RunConfig& cfg) {
    json params = json::object();
    for (const auto& [k, v] : cfg.params) params[k] = v;
    return {{"command", to_string(cfg.command)},
            {"params", params},
            {"seed", cfg.seed},
            {"threads", cfg.threads}};
}

void emit(const RunConfig& cfg, const std::string& name, const std::string& text, std::ostream& out) {
    const fs::path p = fs::path(cfg.output_dir) / name;
    write_file(p, text);
    out << "wrote " << p.string() << "\n";
}

int run_constant(const RunConfig& cfg, std::ostream& out) {
    const std::string which = get_string(cfg, "which");
    const ConstantKind kind = parse_constant_kind(which);
    const auto [lo, hi] = get_pair(cfg, "wells");
    const double scale = get_real(cfg, "scale");
    const DoubleWell W = quartic_well(lo, hi, scale);
    const double R0 = get_real(cfg, "R");
    const int n0 = get_int(cfg, "n");
    EstimateOptions opt;
    opt.extrapolate = get_bool(cfg, "extrapolate");
    const double z = find_real(cfg, "z").value_or(lo);
    const double xi = find_real(cfg, "xi").value_or(hi);
    const double delta = get_real(cfg, "delta");

    auto at = [&](double R) {
        // Keep the spacing of (R0, n0) when R grows.
        int n = static_cast<int>(std::lround(n0 * R / R0));
        n += n % 2;
        switch (kind) {
            case ConstantKind::M: return compute_m(W, R, n, opt);
            case ConstantKind::Sigma: return compute_sigma(W, z, xi, R, n, opt);
            case ConstantKind::CUnder: return compute_c_under(W, R, n, opt);
            case ConstantKind::COver: return compute_c_over(W, R, n, opt);
            case ConstantKind::CDelta: return compute_c_delta(W, delta, R, n, opt);
        }
        return compute_m(W, R, n, opt);
    };

    json doc{{"run", echo(cfg)}, {"wells", {lo, hi}}, {"scale", scale}};
    ConstantEstimate est;
    if (get_bool(cfg, "select_R")) {
        RSelection sel;
        if (kind == ConstantKind::CUnder || kind == ConstantKind::CDelta) {
            sel = select_R_scale(at, W, 1.0 / 8.0, R0);
        } else {
            sel = select_R_doubling(at, R0);
        }
        doc["R_selection"] = {{"R", sel.R_history}, {"value", sel.value_history}, {"settled", sel.settled}};
        est = std::move(sel.estimate);
    } else {
        est = at(R0);
    }
    const std::string profile_name = which + "_profile.csv";
    doc["result"] = to_json(est);
    doc["result"]["profile_path"] = profile_name;
    emit(cfg, which + ".json", dump_document(doc), out);
    emit(cfg, profile_name, profile_csv(est.profile), out);
    out << which << " = " << format_real(est.value) << " (R " << format_real(est.R) << ", n " << est.n
        << (est.converged ? ", converged" : ", NOT converged") << ")\n";
    return est.converged ? kExitOk : kExitFailed;
}

int run_lift(const RunConfig& cfg, std::ostream& out) {
    const int n = get_int(cfg, "n");
    const double R = get_real(cfg, "R");
    const Grid1D g(0.0, R, n);
    const std::string trace_kind = get_string(cfg, "trace");
    ScalarField1D trace = smoothstep_trace(g);
    if (trace_kind == "quadratic") {
        trace = sample([](double x) { return x * x; }, g);
    } else if (trace_kind == "random") {
        trace = SampleSource(cfg.seed).smooth_trace(g);
    }
    const std::string method = get_string(cfg, "method");
    const double lo = 0.125 - 0.03;
    const double hi = 0.4375 + 0.03;

    json doc{{"run", echo(cfg)}};
    json checks = json::array();
    bool ok = true;
    std::optional<LiftReport> ex, zeta;
    const Grid2D tri = make_triangle_grid(R, n);
    if (method != "zeta") {
        ScalarField2D field(tri, std::vector<double>(tri.node_count(), 0.0));
        ex = lifting_ratio_explicit(trace, &field);
        doc["explicit"] = to_json(*ex);
        const bool in = lo <= ex->ratio && ex->ratio <= hi;
        checks.push_back({{"check", "explicit ratio in bracket"}, {"pass", in}});
        ok = ok && in;
        if (get_bool(cfg, "write_field")) emit(cfg, "lift_field.csv", field2d_csv(field), out);
    }
    if (method != "explicit") {
        zeta = estimate_zeta(trace, tri, get_real(cfg, "tol"));
        doc["zeta"] = to_json(*zeta);
        const bool in = lo <= zeta->ratio && zeta->ratio <= hi;
        checks.push_back({{"check", "zeta in bracket"}, {"pass", in}});
        ok = ok && in;
    }
    if (ex && zeta) {
        const bool below = zeta->ratio <= ex->ratio + 1e-9;
        checks.push_back({{"check", "zeta <= explicit ratio"}, {"pass", below}});
        ok = ok && below;
    }
    doc["checks"] = checks;
    doc["pass"] = ok;
    emit(cfg, "lift.json", dump_document(doc), out);
    if (ex) out << "explicit ratio = " << format_real(ex->ratio) << "\n";
    if (zeta) out << "zeta = " << format_real(zeta->ratio) << "\n";
    return ok ? kExitOk : kExitFailed;
}

int run_sweep(const RunConfig& cfg, std::ostream& out) {
    SweepConfig sc;
    sc.L = get_real(cfg, "L");
    sc.eps_list = get_reals(cfg, "eps");
    const auto [a, b] = get_pair(cfg, "wells");
    const auto [alpha, beta] = get_pair(cfg, "bwells");
    sc.W = quartic_well(a, b);
    sc.V = quartic_well(alpha, beta);
    sc.n = get_int(cfg, "n");
    sc.max_n = get_int(cfg, "max_n");
    sc.cells_per_layer = get_int(cfg, "cells_per_layer");
    sc.width = get_real(cfg, "width");
    sc.height = get_real(cfg, "height");
    sc.mass_constraint = get_bool(cfg, "mass");
    sc.boundary_mass_constraint = get_bool(cfg, "bmass");
    const std::string init = get_string(cfg, "init");
    sc.init = init == "linear" ? InitKind::LinearInterp
                               : (init == "boundary" ? InitKind::BoundaryLayerAnsatz : InitKind::ProfileAnsatz);
    const std::string kind = get_string(cfg, "kind");
    const auto records = kind == "f1d" ? sweep_f1d(sc) : (kind == "g1d" ? sweep_g1d(sc) : sweep_full2d(sc));

    json doc{{"run", echo(cfg)}, {"kind", kind}};
    json recs = json::array();
    for (const auto& r : records) recs.push_back(to_json(r));
    doc["records"] = recs;
    if (records.size() >= 4) doc["plateau"] = to_json(plateau(records));
    emit(cfg, "sweep.csv", sweep_csv(records), out);
    emit(cfg, "sweep.json", dump_document(doc), out);
    for (const auto& r : records) {
        out << "eps " << format_real(r.eps) << ": " << format_real(r.min_energy)
            << (r.converged ? "" : " (not converged)") << (r.under_resolved ? " (under-resolved layer)" : "")
            << "\n";
    }
    return kExitOk;
}

int run_check(const RunConfig& cfg, std::ostream& out) {
    const std::string suite = get_string(cfg, "suite");
    const int count = get_int(cfg, "count");
    const int n = get_int(cfg, "n");
    std::vector<SuiteResult> results;
    if (suite == "hardy" || suite == "inequalities") results.push_back(hardy_suite(cfg.seed, count, n));
    if (suite == "seminorm" || suite == "inequalities") {
        results.push_back(seminorm_suite(cfg.seed + 1, count, n));
    }
    if (suite == "lifting" || suite == "inequalities") {
        results.push_back(lifting_suite(cfg.seed + 2, get_int(cfg, "lift_count"), get_int(cfg, "lift_n")));
    }
    json doc{{"run", echo(cfg)}};
    json suites = json::array();
    bool ok = true;
    for (const auto& s : results) {
        json cases = json::array();
        for (const auto& c : s.cases) {
            cases.push_back({{"case", c.label}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"pass", c.pass}});
        }
        suites.push_back({{"suite", s.name}, {"failures", s.failures()}, {"pass", s.pass()}, {"cases", cases}});
        out << s.name << ": " << (s.cases.size() - static_cast<std::size_t>(s.failures())) << "/"
            << s.cases.size() << " passed\n";
        ok = ok && s.pass();
    }
    doc["suites"] = suites;
    doc["pass"] = ok;
    emit(cfg, "check.json", dump_document(doc), out);
    return ok ? kExitOk : kExitFailed;
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        std::error_code ec;
        fs::create_directories(cfg.output_dir, ec);
        if (!fs::is_directory(cfg.output_dir)) {
            err << "error: output directory " << cfg.output_dir << " is not usable\n";
            return kExitFailed;
        }
        omp_set_num_threads(cfg.threads);
        switch (cfg.command) {
            case Command::Constant: return run_constant(cfg, out);
            case Command::Lift: return run_lift(cfg, out);
            case Command::Sweep: return run_sweep(cfg, out);
            case Command::Check: return run_check(cfg, out);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    } catch (const std::exception& e) {
        err << "error (" << to_string(cfg.command) << "): " << e.what() << "\n";
        return kExitFailed;
    }
    return kExitFailed;
}

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Discretized phase-transition energies: constants, lifting ratios, eps sweeps."};
    app.require_subcommand(1);
    app.footer("Config file keys and defaults:\n" + config_reference() +
               "Flags override values from --config. Exit status: 0 ok, 1 failed check or "
               "numerical failure, 2 invalid configuration.");

    std::string config_path;
    bool dry_run = false;
    std::map<std::string, std::string> flags;
    std::vector<std::string> sets;

    auto add_common = [&](CLI::App* sub, const std::vector<std::string>& keys) {
        sub->add_option("--config", config_path, "key = value config file");
        sub->add_flag("--dry-run", dry_run, "print the parsed config and exit");
        sub->add_option("--set", sets, "extra key=value parameter (repeatable)");
        for (const auto& k : std::vector<std::string>{"seed", "threads", "out"}) {
            sub->add_option_function<std::string>("--" + k, [&flags, k](const std::string& v) { flags[k] = v; });
        }
        for (const auto& k : keys) {
            sub->add_option_function<std::string>("--" + k, [&flags, k](const std::string& v) { flags[k] = v; });
        }
    };
    CLI::App* constant = app.add_subcommand("constant", "estimate m, sigma, c_under, c_over or c_delta");
    add_common(constant, {"which", "wells", "scale", "R", "n", "z", "xi", "delta"});
    CLI::App* lift = app.add_subcommand("lift", "lifting ratio of a boundary trace");
    add_common(lift, {"trace", "n", "R", "method"});
    CLI::App* sweep = app.add_subcommand("sweep", "minimum energy along eps lambda^{2/3} = L");
    add_common(sweep, {"kind", "L", "eps", "wells", "n"});
    CLI::App* check = app.add_subcommand("check", "randomized inequality suites");
    add_common(check, {"suite", "n"});

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }

    Command cmd = Command::Constant;
    for (auto* sub : app.get_subcommands()) cmd = *parse_command(sub->get_name());

    RunConfig cfg;
    try {
        if (!config_path.empty()) {
            std::string text;
            try {
                text = read_file(config_path);
            } catch (const std::exception& e) {
                throw ConfigError(0, e.what());
            }
            try {
                cfg = parse_config(text, {cmd, false});
            } catch (const ConfigError& e) {
                throw ConfigError(e.line(), config_path + ": " + e.what());
            }
        } else {
            cfg.command = cmd;
        }
        for (const auto& [k, v] : flags) set_value(cfg, k, v, "--" + k);
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError(0, "--set: expected key=value, got '" + s + "'");
            set_value(cfg, s.substr(0, eq), s.substr(eq + 1), "--set " + s.substr(0, eq));
        }
        check_required(cfg);
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    if (dry_run) {
        out << echo_config(cfg);
        return kExitOk;
    }
    return run(cfg, out, err);
}

}  // namespace pfscale
