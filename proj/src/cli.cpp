#include "lambda_memory/cli.hpp"

#include <cmath>
#include <filesystem>
#include <optional>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"

#include "lambda_memory/adiabatic.hpp"
#include "lambda_memory/analysis.hpp"
#include "lambda_memory/errors.hpp"
#include "lambda_memory/io.hpp"
#include "lambda_memory/materials.hpp"
#include "lambda_memory/parallel.hpp"

namespace lambda_memory::cli {

namespace {

using ojson = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Grid {
    std::string spec;
    std::string spacing;
    std::vector<double> points;
};

/// "min:max:n" or a single value.
Grid parse_grid(const std::string& spec, bool log_spacing, const std::string& flag)
{
    Grid grid{spec, log_spacing ? "log" : "linear", {}};
    try {
        const auto a = spec.find(':');
        if (a == std::string::npos) {
            grid.points = {std::stod(spec)};
            grid.spacing = "single";
            return grid;
        }
        const auto b = spec.find(':', a + 1);
        if (b == std::string::npos) {
            throw UsageError("");
        }
        const double lo = std::stod(spec.substr(0, a));
        const double hi = std::stod(spec.substr(a + 1, b - a - 1));
        std::size_t used = 0;
        const std::string ns = spec.substr(b + 1);
        const int n = std::stoi(ns, &used);
        if (used != ns.size()) {
            throw UsageError("");
        }
        grid.points = log_spacing ? log_grid(lo, hi, n) : linear_grid(lo, hi, n);
    } catch (const ArgumentError& e) {
        throw UsageError(flag + ": " + e.what());
    } catch (const std::logic_error&) {
        throw UsageError(flag + ": expected min:max:points or a number, got '" + spec + "'");
    } catch (const UsageError&) {
        throw UsageError(flag + ": expected min:max:points or a number, got '" + spec + "'");
    }
    return grid;
}

ojson grid_json(const Grid& g)
{
    return ojson{{"spec", g.spec}, {"spacing", g.spacing}, {"points", g.points}};
}

struct ModelFlags {
    std::string config;
    std::vector<std::string> gammas;
    std::optional<double> kappa;
    std::optional<double> Delta;
    std::optional<double> delta;
    bool include_vacuum = false;
};

void add_model_flags(CLI::App* app, ModelFlags& f)
{
    app->add_option("--config", f.config, "Model config JSON")->check(CLI::ExistingFile);
    app->add_option("--gamma", f.gammas, "Decay channel ij=rate, e.g. gg=0.1 or ge=0.05 (repeatable)")
        ->take_all();
    app->add_option("--kappa", f.kappa, "Cavity decay rate");
    app->add_option("--Delta", f.Delta, "One-photon detuning");
    app->add_option("--delta", f.delta, "Two-photon detuning");
    app->add_flag("--include-vacuum", f.include_vacuum, "Always include |g,0>");
}

struct ResolvedModel {
    ModelParams params;
    bool pulse_from_config = false;
    ojson inputs = ojson::object();
};

ResolvedModel resolve_model(const ModelFlags& f)
{
    ResolvedModel r;
    if (!f.config.empty()) {
        const std::string text = io::read_file(f.config);
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config '" + f.config + "' is not valid JSON: " + e.what());
        }
        r.params = io::parse_model_config(doc);
        r.pulse_from_config = doc.is_object() && doc.contains("pulse");
        r.inputs["config"] = ojson{{"path", f.config}, {"sha256", io::sha256_hex(text)}};
    }
    for (const auto& spec : f.gammas) {
        const auto eq = spec.find('=');
        if (eq != 2) {
            throw UsageError("--gamma: expected ij=rate, got '" + spec + "'");
        }
        double rate = 0.0;
        try {
            std::size_t used = 0;
            rate = std::stod(spec.substr(3), &used);
            if (used != spec.size() - 3) {
                throw std::invalid_argument("trailing");
            }
        } catch (const std::logic_error&) {
            throw UsageError("--gamma: bad rate in '" + spec + "'");
        }
        try {
            r.params.decay.set(parse_level(spec[0]), parse_level(spec[1]), rate);
        } catch (const ArgumentError& e) {
            throw UsageError(std::string("--gamma: ") + e.what());
        }
    }
    if (f.kappa) {
        r.params.decay.set_kappa(*f.kappa);
    }
    if (f.Delta) {
        r.params.Delta = *f.Delta;
    }
    if (f.delta) {
        r.params.delta = *f.delta;
    }
    if (f.include_vacuum) {
        r.params.include_vacuum = true;
    }
    return r;
}

ojson pulse_json(const PulseShape& p)
{
    return std::visit(
        [](const auto& s) -> ojson {
            using S = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<S, SigmoidPulse>) {
                return {{"shape", "sigmoid"}, {"omega0", s.omega0}, {"T", s.T}, {"reversed", s.reversed}};
            } else if constexpr (std::is_same_v<S, GaussianPulse>) {
                return {{"shape", "gaussian"}, {"omega0", s.omega0}, {"center", s.center}, {"width", s.width}};
            } else {
                return {{"shape", "constant"}, {"omega", s.omega}};
            }
        },
        p.shape());
}

ojson model_json(const LambdaModel& m)
{
    ojson gamma = ojson::object();
    for (const char* ch : {"gg", "ss", "ee", "ge", "se", "gs"}) {
        gamma[ch] = m.decay().gamma(parse_level(ch[0]), parse_level(ch[1]));
    }
    return ojson{{"Delta", m.Delta()},
                 {"delta", m.delta()},
                 {"pulse", pulse_json(m.pulse())},
                 {"decay", {{"gamma", gamma}, {"kappa", m.decay().kappa()}}},
                 {"include_vacuum", m.include_vacuum()}};
}

int resolve_workers(const std::optional<int>& flag)
{
    if (!flag) {
        return default_workers();
    }
    if (*flag < 1) {
        throw UsageError("--workers must be >= 1");
    }
    return *flag;
}

struct Artifact {
    std::string path;
    std::string content;
};

/// Writes the artifacts and <first>.manifest.json next to them.
void emit(const std::string& command, const std::vector<std::string>& argv, ojson inputs, ojson grids,
          const std::vector<Artifact>& artifacts, const std::vector<std::string>& warnings)
{
    ojson outputs = ojson::array();
    for (const auto& a : artifacts) {
        io::write_file(a.path, a.content);
        outputs.push_back({{"path", a.path}, {"sha256", io::sha256_hex(a.content)}});
    }
    ojson manifest{{"tool", "lambda-mem"},
                   {"command", command},
                   {"argv", argv},
                   {"inputs", std::move(inputs)},
                   {"grids", std::move(grids)},
                   {"outputs", std::move(outputs)},
                   {"warnings", warnings}};
    io::write_file(artifacts.front().path + ".manifest.json", manifest.dump(2) + "\n");
}

std::string sidecar_path(const std::string& out)
{
    std::filesystem::path p(out);
    auto side = p;
    side.replace_extension(".json");
    if (side == p) {
        side = std::filesystem::path(out + ".summary.json");
    }
    return side.string();
}

// subcommands

struct SimulateFlags {
    ModelFlags model;
    std::optional<double> omega0;
    std::optional<double> T;
    std::string kind = "writing";
    std::optional<double> dt;
    int samples = 1000;
    std::string out = "simulate.csv";
};

int cmd_simulate(const SimulateFlags& f, const std::vector<std::string>& argv, std::ostream& out)
{
    auto r = resolve_model(f.model);
    if (f.omega0.has_value() != f.T.has_value()) {
        throw UsageError("--omega0 and --T must be given together");
    }
    if (f.omega0) {
        r.params.pulse = PulseShape::sigmoid(*f.omega0, *f.T);
    } else if (!r.pulse_from_config) {
        throw UsageError("--omega0 and --T are required unless --config sets a pulse");
    }
    if (f.samples < 2) {
        throw UsageError("--samples must be >= 2");
    }
    const LambdaModel m(r.params);
    const auto kind = parse_efficiency_kind(f.kind);

    EfficiencyOptions opts;
    opts.keep_trajectory = true;
    opts.propagation.samples = f.samples;
    if (f.dt) {
        LambdaModel windowed = m;
        if (kind == EfficiencyKind::reading) {
            if (const auto* s = std::get_if<SigmoidPulse>(&m.pulse().shape()); s && !s->reversed) {
                windowed = m.with_pulse(m.pulse().time_reversed());
            }
        }
        opts.window = memory_window(windowed, kind).with_dt(*f.dt);
    }
    const auto res = efficiency(m, kind, opts);
    const auto& traj = *res.trajectory;

    ojson inputs = std::move(r.inputs);
    inputs["model"] = model_json(m);
    inputs["kind"] = f.kind;
    inputs["samples"] = f.samples;
    if (f.dt) {
        inputs["dt"] = *f.dt;
    }
    ojson grids{{"time", {{"t_start", traj.times.front()}, {"t_end", traj.times.back()}, {"samples", f.samples}}}};
    emit("simulate", argv, inputs, grids, {{f.out, io::trajectory_csv(traj)}}, {});

    ojson line{{"kind", f.kind},
               {"eta", io::round_significant(res.eta, 12)},
               {"trace_error", io::round_significant(traj.trace_error, 12)},
               {"out", f.out}};
    out << line.dump() << '\n';
    return kExitOk;
}

struct SweepFlags {
    ModelFlags model;
    std::string kind = "writing";
    std::string omega0 = "0.1:1000:25";
    std::string T = "0.01:100:25";
    std::optional<int> workers;
    std::string out = "sweep.csv";
};

int cmd_sweep(const SweepFlags& f, const std::vector<std::string>& argv, std::ostream& out, std::ostream& err)
{
    auto r = resolve_model(f.model);
    const auto og = parse_grid(f.omega0, true, "--omega0");
    const auto tg = parse_grid(f.T, true, "--T");
    const auto kind = parse_efficiency_kind(f.kind);
    const int workers = resolve_workers(f.workers);
    if (!std::holds_alternative<SigmoidPulse>(r.params.pulse.shape())) {
        throw ConfigError("sweep needs a sigmoid pulse");
    }
    const LambdaModel base(r.params);
    const auto res = efficiency_sweep(base, og.points, tg.points, kind, workers);
    for (const auto& w : res.warnings) {
        err << "warning: " << w << '\n';
    }

    ojson inputs = std::move(r.inputs);
    inputs["model"] = model_json(base);
    inputs["kind"] = f.kind;
    emit("sweep", argv, inputs, {{"omega0", grid_json(og)}, {"T", grid_json(tg)}}, {{f.out, io::sweep_csv(res)}},
         res.warnings);

    double lo = INFINITY;
    for (Eigen::Index i = 0; i < res.values.size(); ++i) {
        if (!std::isnan(res.values.data()[i])) {
            lo = std::min(lo, res.values.data()[i]);
        }
    }
    out << ojson{{"kind", f.kind},
                 {"cells", res.values.size()},
                 {"failed", res.warnings.size()},
                 {"min_efficiency", io::round_significant(lo, 12)},
                 {"out", f.out}}
               .dump()
        << '\n';
    return kExitOk;
}

struct DetuningFlags {
    ModelFlags model;
    std::string Delta = "-60:60:121";
    double omega0 = 100.0;
    double T = 10.0;
    std::string pulse = "gaussian";
    std::optional<int> workers;
    std::string out = "detuning.csv";
};

int cmd_detuning(const DetuningFlags& f, const std::vector<std::string>& argv, std::ostream& out)
{
    if (f.model.Delta) {
        throw UsageError("--Delta takes the scan grid here");
    }
    auto r = resolve_model(f.model);
    const auto grid = parse_grid(f.Delta, false, "--Delta");
    const int workers = resolve_workers(f.workers);
    if (!r.pulse_from_config) {
        r.params.pulse =
            f.pulse == "gaussian" ? PulseShape::gaussian_std(f.omega0, 0.0, f.T) : PulseShape::sigmoid(f.omega0, f.T);
    }
    const LambdaModel base(r.params);
    const auto curve = detuning_scan(base, grid.points, workers);

    const std::string side = sidecar_path(f.out);
    const auto summary = io::absorption_summary(curve);
    ojson inputs = std::move(r.inputs);
    inputs["model"] = model_json(base);
    emit("detuning-scan", argv, inputs, {{"Delta", grid_json(grid)}},
         {{f.out, io::absorption_csv(curve)}, {side, summary.dump(2) + "\n"}}, {});

    out << ojson{{"hwhm", summary["hwhm"]}, {"peak", summary["peak"]}, {"out", f.out}, {"summary", side}}.dump()
        << '\n';
    return kExitOk;
}

struct DecayFlags {
    std::vector<double> kappa{0.0, 0.01, 0.1};
    double omega0 = 100.0;
    std::string T = "1:100:41";
    std::string out = "decay.csv";
};

int cmd_decay(const DecayFlags& f, const std::vector<std::string>& argv, std::ostream& out)
{
    const auto tg = parse_grid(f.T, true, "--T");
    std::vector<io::DecayRow> rows;
    for (double k : f.kappa) {
        for (double T : tg.points) {
            rows.push_back({T, k, f.omega0, asymptotic_dark_population(k, f.omega0, T)});
        }
    }
    ojson inputs{{"kappa", f.kappa}, {"omega0", f.omega0}, {"d0", 0.999}};
    emit("analytic-decay", argv, inputs, {{"T", grid_json(tg)}}, {{f.out, io::decay_csv(rows)}}, {});
    ojson summary = ojson::array();
    for (const auto& row : rows) {
        if (tg.points.size() == 1) {
            summary.push_back({{"kappa", row.kappa}, {"final_population", io::round_significant(row.final_population, 12)}});
        }
    }
    out << ojson{{"rows", rows.size()}, {"out", f.out}, {"single_T", summary}}.dump() << '\n';
    return kExitOk;
}

struct MaterialFlags {
    std::string defects;
    double n = 2.0;
    std::optional<double> kappa_rel;
    std::optional<double> Q;
    double omega0_rel = 100.0;
    double T_rel = 10.0;
    double sigma = 10.0;
    std::string out = "material.json";
};

int cmd_material(const MaterialFlags& f, const std::vector<std::string>& argv, std::ostream& out)
{
    if (f.kappa_rel.has_value() == f.Q.has_value()) {
        throw UsageError("exactly one of --kappa-rel or --Q is required");
    }
    const std::string text = io::read_file(f.defects);
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("defects file '" + f.defects + "' is not valid JSON: " + e.what());
    }
    const auto defects = materials::parse_defects(doc);
    const materials::CavitySpec cavity{f.n, f.Q, f.kappa_rel};

    nlohmann::json reports = nlohmann::json::array();
    for (const auto& d : defects) {
        try {
            const auto rep = materials::design_report(d, cavity, f.omega0_rel, f.T_rel, f.sigma);
            reports.push_back(materials::to_json(rep));
            out << rep.name << ": g = " << io::format_number(rep.g_phys, 4) << " rad/s, V = "
                << io::format_number(rep.volume, 4) << " m^3, Q = " << io::format_number(rep.Q_required, 4) << '\n';
        } catch (const ArgumentError& e) {
            throw ConfigError(e.what());
        }
    }
    ojson inputs{{"defects", {{"path", f.defects}, {"sha256", io::sha256_hex(text)}}},
                 {"n", f.n},
                 {"omega0_rel", f.omega0_rel},
                 {"T_rel", f.T_rel},
                 {"sigma", f.sigma}};
    if (f.Q) {
        inputs["Q"] = *f.Q;
    } else {
        inputs["kappa_rel"] = *f.kappa_rel;
    }
    emit("material", argv, inputs, ojson::object(), {{f.out, reports.dump(2) + "\n"}}, {});
    return kExitOk;
}

struct StirapFlags {
    std::string omega0 = "0:40:81";
    std::string tau = "0:2:5";
    std::optional<int> workers;
    std::string out = "stirap.csv";
};

int cmd_stirap(const StirapFlags& f, const std::vector<std::string>& argv, std::ostream& out)
{
    const auto og = parse_grid(f.omega0, false, "--omega0");
    const auto tg = parse_grid(f.tau, false, "--tau");
    const auto res = stirap_benchmark(og.points, tg.points, resolve_workers(f.workers));
    emit("benchmark-stirap", argv, ojson::object(), {{"omega0", grid_json(og)}, {"tau", grid_json(tg)}},
         {{f.out, io::sweep_csv(res)}}, res.warnings);
    out << ojson{{"cells", res.values.size()}, {"out", f.out}}.dump() << '\n';
    return kExitOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Single-atom Lambda-system quantum memory simulator", "lambda-mem"};
    app.require_subcommand(1);

    SimulateFlags sim;
    auto* c_sim = app.add_subcommand("simulate", "Write or read one photon and dump the population trajectory");
    add_model_flags(c_sim, sim.model);
    c_sim->add_option("--omega0", sim.omega0, "Peak control Rabi frequency (units of g)");
    c_sim->add_option("--T", sim.T, "Sigmoid characteristic time (units of 1/g)");
    c_sim->add_option("--kind", sim.kind)->check(CLI::IsMember({"writing", "reading"}))->capture_default_str();
    c_sim->add_option("--dt", sim.dt, "Override the RK4 step");
    c_sim->add_option("--samples", sim.samples)->capture_default_str();
    c_sim->add_option("--out", sim.out)->capture_default_str();

    SweepFlags sw;
    auto* c_sw = app.add_subcommand("sweep", "Efficiency over a log (omega0, T) grid");
    add_model_flags(c_sw, sw.model);
    c_sw->add_option("--kind", sw.kind)->check(CLI::IsMember({"writing", "reading"}))->capture_default_str();
    c_sw->add_option("--omega0", sw.omega0, "min:max:points, log spaced")->capture_default_str();
    c_sw->add_option("--T", sw.T, "min:max:points, log spaced")->capture_default_str();
    c_sw->add_option("--workers", sw.workers);
    c_sw->add_option("--out", sw.out)->capture_default_str();

    DetuningFlags dt;
    auto* c_dt = app.add_subcommand("detuning-scan", "Writing efficiency against one-photon detuning");
    c_dt->add_option("--config", dt.model.config, "Model config JSON")->check(CLI::ExistingFile);
    c_dt->add_option("--gamma", dt.model.gammas, "Decay channel ij=rate (repeatable)")->take_all();
    c_dt->add_option("--kappa", dt.model.kappa);
    c_dt->add_option("--delta", dt.model.delta, "Two-photon detuning");
    c_dt->add_option("--Delta", dt.Delta, "min:max:points, linear")->capture_default_str();
    c_dt->add_option("--omega0", dt.omega0)->capture_default_str();
    c_dt->add_option("--T", dt.T, "Sigmoid T, or Gaussian standard deviation")->capture_default_str();
    c_dt->add_option("--pulse", dt.pulse)->check(CLI::IsMember({"gaussian", "sigmoid"}))->capture_default_str();
    c_dt->add_option("--workers", dt.workers);
    c_dt->add_option("--out", dt.out)->capture_default_str();

    DecayFlags dc;
    auto* c_dc = app.add_subcommand("analytic-decay", "Closed-form dark-state population under cavity decay");
    c_dc->add_option("--kappa", dc.kappa, "Comma separated list")->delimiter(',')->capture_default_str();
    c_dc->add_option("--omega0", dc.omega0)->capture_default_str();
    c_dc->add_option("--T", dc.T, "Value or min:max:points, log spaced")->capture_default_str();
    c_dc->add_option("--out", dc.out)->capture_default_str();

    MaterialFlags mat;
    auto* c_mat = app.add_subcommand("material", "Physical design numbers for defect emitters in a cavity");
    c_mat->add_option("--defects", mat.defects, "defects.json")->required()->check(CLI::ExistingFile);
    c_mat->add_option("--n", mat.n, "Cavity volume in units of lambda^3")->capture_default_str();
    auto* o_k = c_mat->add_option("--kappa-rel", mat.kappa_rel, "kappa / g");
    auto* o_q = c_mat->add_option("--Q", mat.Q, "Quality factor");
    o_k->excludes(o_q);
    c_mat->add_option("--omega0-rel", mat.omega0_rel)->capture_default_str();
    c_mat->add_option("--T-rel", mat.T_rel)->capture_default_str();
    c_mat->add_option("--sigma", mat.sigma, "Dimensionless HWHM")->capture_default_str();
    c_mat->add_option("--out", mat.out)->capture_default_str();

    StirapFlags st;
    auto* c_st = app.add_subcommand("benchmark-stirap", "Semi-classical STIRAP transfer over (omega0, tau)");
    c_st->add_option("--omega0", st.omega0, "min:max:points, linear")->capture_default_str();
    c_st->add_option("--tau", st.tau, "min:max:points, linear")->capture_default_str();
    c_st->add_option("--workers", st.workers);
    c_st->add_option("--out", st.out)->capture_default_str();

    auto usage = [&]() -> std::string {
        for (auto* sub : app.get_subcommands()) {
            return sub->help();
        }
        return app.help();
    };

    std::vector<std::string> argv{"lambda-mem"};
    argv.insert(argv.end(), args.begin(), args.end());
    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
        if (c_sim->parsed()) {
            return cmd_simulate(sim, argv, out);
        }
        if (c_sw->parsed()) {
            return cmd_sweep(sw, argv, out, err);
        }
        if (c_dt->parsed()) {
            return cmd_detuning(dt, argv, out);
        }
        if (c_dc->parsed()) {
            return cmd_decay(dc, argv, out);
        }
        if (c_mat->parsed()) {
            return cmd_material(mat, argv, out);
        }
        return cmd_stirap(st, argv, out);
    } catch (const CLI::CallForHelp&) {
        out << usage();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n" << usage();
        return kExitUsage;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n\n" << usage();
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ArgumentError& e) {
        err << "invalid argument: " << e.what() << '\n';
        return kExitUsage;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
}

} // namespace lambda_memory::cli
