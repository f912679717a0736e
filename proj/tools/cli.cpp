#include "cli.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "ricci/analysis.hpp"
#include "ricci/checks.hpp"
#include "ricci/portrait.hpp"
#include "ricci/report_io.hpp"
#include "ricci/trajectory.hpp"

namespace ricci::cli {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string config_token(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_number(v.get<double>());
    throw UsageError("config: unsupported value " + v.dump());
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
        return a == flag || a.rfind(flag + "=", 0) == 0;
    });
}

// Splices the keys of a --config JSON object in front of the explicit flags of
// the subcommand, skipping any key the command line already sets.
std::vector<std::string> apply_config(const std::vector<std::string>& args) {
    std::optional<std::string> path;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size()) throw UsageError("--config needs a path");
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!path || rest.size() < 2) return rest;

    std::ifstream in(*path);
    if (!in) throw UsageError("cannot read config file " + *path);
    json cfg;
    try {
        in >> cfg;
    } catch (const json::exception& e) {
        throw UsageError("config " + *path + ": " + e.what());
    }
    if (!cfg.is_object()) throw UsageError("config " + *path + ": expected a JSON object");

    std::vector<std::string> injected;
    for (const auto& [key, value] : cfg.items()) {
        std::string flag = "--" + key;
        std::replace(flag.begin() + 2, flag.end(), '_', '-');
        if (has_flag(rest, flag)) continue;
        const auto push = [&](const json& v) { injected.push_back(flag + "=" + config_token(v)); };
        if (value.is_array()) {
            for (const auto& v : value) push(v);
        } else {
            push(value);
        }
    }
    std::vector<std::string> out{rest[0], rest[1]};
    out.insert(out.end(), injected.begin(), injected.end());
    out.insert(out.end(), rest.begin() + 2, rest.end());
    return out;
}

// Glues "--flag -2:2" into "--flag=-2:2" so negative values never look like options.
std::vector<std::string> glue_negative_values(const std::vector<std::string>& args) {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        const bool is_long = a.size() > 2 && a.rfind("--", 0) == 0 && a.find('=') == std::string::npos;
        if (is_long && i + 1 < args.size()) {
            const std::string& v = args[i + 1];
            if (v.size() > 1 && v[0] == '-' && (std::isdigit(static_cast<unsigned char>(v[1])) || v[1] == '.')) {
                out.push_back(a + "=" + v);
                ++i;
                continue;
            }
        }
        out.push_back(a);
    }
    return out;
}

std::pair<double, double> parse_pair(const std::string& text, const std::string& what) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw UsageError(what + ": expected a:b, got '" + text + "'");
    try {
        std::size_t used_a = 0, used_b = 0;
        const std::string sa = text.substr(0, colon);
        const std::string sb = text.substr(colon + 1);
        const double a = std::stod(sa, &used_a);
        const double b = std::stod(sb, &used_b);
        if (used_a != sa.size() || used_b != sb.size()) throw std::invalid_argument(text);
        return {a, b};
    } catch (const std::logic_error&) {
        throw UsageError(what + ": cannot parse '" + text + "'");
    }
}

// Opens `path` for writing, or returns `fallback` for "-".
class Output {
public:
    Output(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw UsageError("cannot open " + path + " for writing");
            stream_ = &file_;
        }
    }
    std::ostream& get() { return *stream_; }

private:
    std::ofstream file_;
    std::ostream* stream_;
};

struct FlowArgs {
    int n = 2;
    std::string system;
    std::optional<double> x1, x2, x3, phi, psi;
    IntegratorConfig integrator;
    std::string out = "-";
};

struct ExperimentArgs {
    ExperimentConfig config;
    std::optional<double> N;
    std::string out = "-";
    std::string trajectory;
};

struct PortraitArgs {
    PortraitConfig config;
    std::string phi_range = "1:8";
    std::string psi_range = "-2:2";
    std::vector<std::string> starts;
    std::string out = "-";
};

struct CheckArgs {
    int n_max = 6;
    int grid = 20;
};

void add_integrator_options(CLI::App* app, IntegratorConfig& cfg) {
    app->add_option("--t-max", cfg.t_max, "Integration horizon")->capture_default_str();
    app->add_option("--rel-tol", cfg.rel_tol, "Relative tolerance")->capture_default_str();
    app->add_option("--abs-tol", cfg.abs_tol, "Absolute tolerance")->capture_default_str();
    app->add_option("--initial-step", cfg.initial_step, "First trial step")->capture_default_str();
    app->add_option("--max-step", cfg.max_step, "Largest allowed step");
    app->add_option("--max-steps", cfg.max_steps, "Accepted step budget")->capture_default_str();
    app->add_option("--event-tol", cfg.event_tol, "Event bracket width")->capture_default_str();
}

std::vector<double> flow_initial_state(const FlowArgs& a, SystemKind kind) {
    const auto need = [&](const std::optional<double>& v, const char* name) {
        if (!v) throw UsageError("--" + std::string(name) + " is required for --system " + to_string(kind));
        return *v;
    };
    switch (kind) {
        case SystemKind::Full: {
            const double x1 = need(a.x1, "x1");
            const double x2 = need(a.x2, "x2");
            const double x3 = a.x3 ? *a.x3 : x3_from_volume_one(a.n, x1, x2);
            return {x1, x2, x3};
        }
        case SystemKind::Reduced:
            return {need(a.x1, "x1"), need(a.x2, "x2")};
        case SystemKind::Phase:
        case SystemKind::Reparam: {
            const double phi = need(a.phi, "phi");
            const double psi = a.psi.value_or(0.0);
            (void)PhasePoint(phi, psi, a.n);  // admissibility
            return {phi, psi};
        }
        case SystemKind::Submersion: {
            if (a.psi && *a.psi != 0.0) throw UsageError("--system submersion requires psi = 0");
            const double phi = need(a.phi, "phi");
            (void)PhasePoint(phi, 0.0, a.n);
            return {phi};
        }
    }
    throw UsageError("unknown system");
}

int cmd_flow(const FlowArgs& a, std::ostream& out, std::ostream& err) {
    const auto kind = parse_system(a.system);
    if (!kind) throw UsageError("unknown --system '" + a.system + "'");
    if (a.n < 2) throw UsageError("--n must be >= 2");
    std::vector<double> y0;
    try {
        a.integrator.validate();
        y0 = flow_initial_state(a, *kind);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }

    Trajectory traj;
    try {
        traj = simulate(*kind, a.n, y0, a.integrator);
    } catch (const DomainError& e) {
        err << "integrator error: " << e.what() << '\n';
        return kExitIntegrator;
    }
    Output sink(a.out, out);
    write_trajectory_csv(sink.get(), traj);
    if (traj.termination != Termination::ReachedTmax && traj.termination != Termination::EventStop) {
        err << "integrator error: " << to_string(traj.termination) << ": " << traj.message << '\n';
        return kExitIntegrator;
    }
    return kExitOk;
}

int cmd_experiment(ExperimentArgs a, std::ostream& out, std::ostream& err) {
    a.config.N = a.N;
    try {
        a.config.validate();
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }

    ExperimentRun run;
    try {
        run = run_theorem_experiment(a.config);
    } catch (const BadInitialData& e) {
        err << "bad initial data: " << e.what() << '\n';
        return kExitBadInitialData;
    } catch (const DomainError& e) {
        err << "integrator error: " << e.what() << '\n';
        return kExitIntegrator;
    }

    {
        Output sink(a.out, out);
        sink.get() << report_to_json(run.report).dump(2) << '\n';
    }
    if (!a.trajectory.empty()) {
        Output sink(a.trajectory, out);
        write_trajectory_csv(sink.get(), run.trajectory);
    }

    const auto& rep = run.report;
    if (rep.termination != Termination::ReachedTmax && rep.termination != Termination::EventStop) {
        err << "integrator error: " << to_string(rep.termination) << ": " << run.trajectory.message << '\n';
        return kExitIntegrator;
    }
    if (rep.final_negative_count != rep.expected_negative_count) {
        err << "final negative count " << rep.final_negative_count << " differs from expected "
            << rep.expected_negative_count << '\n';
        return kExitFailed;
    }
    return kExitOk;
}

int cmd_portrait(PortraitArgs a, std::ostream& out, std::ostream&) {
    auto& cfg = a.config;
    std::tie(cfg.phi_min, cfg.phi_max) = parse_pair(a.phi_range, "--phi-range");
    std::tie(cfg.psi_min, cfg.psi_max) = parse_pair(a.psi_range, "--psi-range");
    for (const auto& s : a.starts) cfg.starts.push_back(parse_pair(s, "--start"));
    std::string svg;
    try {
        svg = render_portrait(cfg);
    } catch (const DomainError& e) {
        throw UsageError(e.what());
    }
    Output sink(a.out, out);
    sink.get() << svg;
    return kExitOk;
}

int cmd_check(const CheckArgs& a, std::ostream& out) {
    if (a.n_max < 2) throw UsageError("--n-max must be >= 2");
    if (a.grid < 2) throw UsageError("--grid must be >= 2");
    CheckOptions opt;
    opt.n_max = a.n_max;
    opt.grid = a.grid;
    const auto results = run_invariant_checks(opt);

    bool all = true;
    out << std::left << std::setw(24) << "check" << std::setw(8) << "result" << std::setw(14) << "worst"
        << std::setw(12) << "tolerance" << "detail\n";
    for (const auto& r : results) {
        all = all && r.passed;
        char worst[32], tol[32];
        std::snprintf(worst, sizeof worst, "%.3e", r.worst);
        std::snprintf(tol, sizeof tol, "%.1e", r.tolerance);
        out << std::left << std::setw(24) << r.name << std::setw(8) << (r.passed ? "PASS" : "FAIL") << std::setw(14)
            << worst << std::setw(12) << tol << r.detail << '\n';
    }
    out << (all ? "all checks passed\n" : "some checks FAILED\n");
    return all ? kExitOk : kExitFailed;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Homogeneous Ricci flow on the generalized Wallach spaces P_n", "ricciflow"};
    app.require_subcommand(1);

    FlowArgs flow;
    auto* flow_cmd = app.add_subcommand("flow", "Integrate one flow system and write a CSV trajectory");
    flow_cmd->add_option("--n", flow.n, "Space index n >= 2")->required();
    flow_cmd->add_option("--system", flow.system, "full | reduced | phase | reparam | submersion")->required();
    flow_cmd->add_option("--x1", flow.x1);
    flow_cmd->add_option("--x2", flow.x2);
    flow_cmd->add_option("--x3", flow.x3, "Defaults to the unit-volume completion");
    flow_cmd->add_option("--phi", flow.phi);
    flow_cmd->add_option("--psi", flow.psi, "Defaults to 0");
    add_integrator_options(flow_cmd, flow.integrator);
    flow_cmd->add_option("--out", flow.out, "CSV path, - for stdout")->capture_default_str();

    ExperimentArgs exp;
    auto* exp_cmd = app.add_subcommand("experiment", "Perturbed-submersion run with a JSON report");
    exp_cmd->add_option("--n", exp.config.n, "Space index n >= 2")->required();
    exp_cmd->add_option("--N", exp.N, "Initial phi (chosen automatically when omitted)");
    exp_cmd->add_option("--epsilon", exp.config.epsilon, "psi(0) = -epsilon")->capture_default_str();
    exp_cmd->add_option("--t-max", exp.config.t_max, "Reparametrized horizon")->capture_default_str();
    exp_cmd->add_option("--psi-phi-threshold", exp.config.thresholds.psi_phi)->capture_default_str();
    exp_cmd->add_option("--r1-phi-threshold", exp.config.thresholds.r1_phi)->capture_default_str();
    exp_cmd->add_option("--rel-tol", exp.config.rel_tol)->capture_default_str();
    exp_cmd->add_option("--out", exp.out, "JSON path, - for stdout")->capture_default_str();
    exp_cmd->add_option("--trajectory", exp.trajectory, "Also write the trajectory CSV here");

    PortraitArgs portrait;
    auto* por_cmd = app.add_subcommand("portrait", "Render the (phi, psi) phase portrait as SVG");
    por_cmd->add_option("--n", portrait.config.n)->capture_default_str();
    por_cmd->add_option("--phi-range", portrait.phi_range, "a:b")->capture_default_str()->allow_extra_args(false);
    por_cmd->add_option("--psi-range", portrait.psi_range, "c:d")->capture_default_str()->allow_extra_args(false);
    por_cmd->add_option("--cols", portrait.config.cols)->capture_default_str();
    por_cmd->add_option("--rows", portrait.config.rows)->capture_default_str();
    por_cmd->add_option("--start", portrait.starts, "phi:psi, repeatable")->allow_extra_args(false);
    por_cmd->add_option("--t-max", portrait.config.t_max)->capture_default_str();
    por_cmd->add_option("--out", portrait.out, "SVG path, - for stdout")->capture_default_str();

    CheckArgs check;
    auto* chk_cmd = app.add_subcommand("check", "Run the invariant grid and print a pass/fail table");
    chk_cmd->add_option("--n-max", check.n_max)->capture_default_str();
    chk_cmd->add_option("--grid", check.grid)->capture_default_str();

    try {
        std::vector<std::string> args = apply_config(glue_negative_values(raw_args));
        // CLI11 reads the reversed token list (program name excluded).
        std::vector<std::string> tokens(args.rbegin(), args.rend());
        if (!tokens.empty()) tokens.pop_back();
        try {
            app.parse(tokens);
        } catch (const CLI::CallForHelp& e) {
            return app.exit(e, out, err);
        } catch (const CLI::ParseError& e) {
            app.exit(e, out, err);
            return kExitUsage;
        }

        if (*flow_cmd) return cmd_flow(flow, out, err);
        if (*exp_cmd) return cmd_experiment(exp, out, err);
        if (*por_cmd) return cmd_portrait(portrait, out, err);
        if (*chk_cmd) return cmd_check(check, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace ricci::cli
