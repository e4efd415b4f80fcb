#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qspeed/io.hpp"
#include "qspeed/params.hpp"
#include "qspeed/sweep.hpp"

namespace qspeed::cli {

enum class Command { BoundState, Dynamics, Qsl, Sweep, Validate };
enum class Format { Csv, Json };

inline const char* command_name(Command c)
{
    switch (c) {
    case Command::BoundState: return "bound-state";
    case Command::Dynamics: return "dynamics";
    case Command::Qsl: return "qsl";
    case Command::Sweep: return "sweep";
    case Command::Validate: return "validate";
    }
    return "";
}

/// Everything one invocation needs. Frequencies in units of omega0.
struct RunConfig
{
    Command command = Command::Qsl;
    ModelParams model;
    double tau = 5.0;
    int steps = 4096;
    std::optional<int> figure;
    sweep::SweepConfig sweep;
    std::string output;
    Format format = Format::Csv;
    std::string svg;
    bool force = false;
    bool quick = false;
    double inject_g_bias = 0.0;  ///< negative-control hook for `validate`

    bool operator==(const RunConfig&) const = default;
};

/// Raised for malformed command lines; the message is a one-line diagnostic.
class UsageError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string join_outputs(const sweep::Outputs& o)
{
    std::vector<std::string> parts;
    if (o.ratio)
        parts.push_back("ratio");
    if (o.nonmarkov)
        parts.push_back("nonmarkov");
    if (o.bound_energy)
        parts.push_back("bound_energy");
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i)
        s += (i ? "," : "") + parts[i];
    return s;
}

inline sweep::Outputs parse_outputs(const std::vector<std::string>& names)
{
    sweep::Outputs o{false, false, false};
    for (const auto& n : names) {
        if (n == "ratio")
            o.ratio = true;
        else if (n == "nonmarkov")
            o.nonmarkov = true;
        else if (n == "bound_energy")
            o.bound_energy = true;
        else
            throw UsageError("unknown output column '" + n + "'");
    }
    return o;
}

} // namespace detail

/// Builds the CLI11 parser bound to `cfg`.
inline void build_app(CLI::App& app, RunConfig& cfg, std::string& kind_text, std::vector<std::string>& outputs_text)
{
    app.require_subcommand(1, 1);

    const auto model_flags = [&](CLI::App* sub) {
        sub->add_option("--kind", kind_text, "two-level | three-level");
        sub->add_option("--n", cfg.model.n_atoms, "number of atoms N (main atom included)");
        sub->add_option("--theta", cfg.model.theta, "SGI parameter in [0, 1] (three-level only)");
        sub->add_option("--gamma0", cfg.model.gamma0, "coupling strength");
        sub->add_option("--lambda", cfg.model.lambda, "spectral width");
        sub->add_option("--omega0", cfg.model.omega0, "transition frequency");
    };
    const auto output_flags = [&](CLI::App* sub) {
        sub->add_option("--output", cfg.output, "output path (stdout when omitted)");
        sub->add_option("--format", cfg.format, "csv | json")
            ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{{"csv", Format::Csv}, {"json", Format::Json}}));
        sub->add_flag("--force", cfg.force, "overwrite an existing output file");
    };

    auto* bs = app.add_subcommand("bound-state", "solve K(E) = E for the bound-state energy");
    model_flags(bs);
    bs->callback([&] { cfg.command = Command::BoundState; });

    auto* dyn = app.add_subcommand("dynamics", "closed-form main-atom trajectory");
    model_flags(dyn);
    dyn->add_option("--tau", cfg.tau, "final time");
    dyn->add_option("--steps", cfg.steps, "grid intervals");
    output_flags(dyn);
    dyn->callback([&] { cfg.command = Command::Dynamics; });

    auto* qsl = app.add_subcommand("qsl", "QSL time, ratio and non-Markovianity at one point");
    model_flags(qsl);
    qsl->add_option("--tau", cfg.tau, "driving time");
    output_flags(qsl);
    qsl->callback([&] { cfg.command = Command::Qsl; });

    auto* sw = app.add_subcommand("sweep", "gamma0 sweep (figure presets 2-5)");
    sw->add_option("--figure", cfg.figure, "preset: 2, 3, 4 or 5")->check(CLI::IsMember({2, 3, 4, 5}));
    sw->add_option("--kind", kind_text, "two-level | three-level");
    sw->add_option("--n-list", cfg.sweep.n_atoms_list, "atom numbers")->delimiter(',');
    sw->add_option("--theta-list", cfg.sweep.theta_list, "SGI parameters")->delimiter(',');
    sw->add_option("--gamma-min", cfg.sweep.gamma0_grid.min, "grid start");
    sw->add_option("--gamma-max", cfg.sweep.gamma0_grid.max, "grid end");
    sw->add_option("--points", cfg.sweep.gamma0_grid.points, "grid points");
    sw->add_option("--lambda", cfg.sweep.lambda, "spectral width");
    sw->add_option("--omega0", cfg.sweep.omega0, "transition frequency");
    sw->add_option("--tau", cfg.sweep.tau, "driving time");
    sw->add_option("--outputs", outputs_text, "ratio,nonmarkov,bound_energy")->delimiter(',');
    sw->add_option("--threads", cfg.sweep.threads, "worker threads (0 = all cores)");
    sw->add_option("--svg", cfg.svg, "also write a line chart");
    output_flags(sw);
    sw->callback([&] { cfg.command = Command::Sweep; });

    auto* val = app.add_subcommand("validate", "oracle and identity checks");
    val->add_flag("--quick", cfg.quick, "reduced grid");
    val->add_option("--inject-g-bias", cfg.inject_g_bias, "perturb the closed form (negative control)")
        ->group("");
    val->callback([&] { cfg.command = Command::Validate; });
}

/// Parses argv-style arguments (without the program name). Throws UsageError
/// on malformed flags or violated parameter invariants.
inline RunConfig parse(const std::vector<std::string>& args)
{
    RunConfig cfg;
    std::string kind_text;
    std::vector<std::string> outputs_text;
    CLI::App app{"quantum speedup in collective non-Markovian dynamics", "qspeed"};
    build_app(app, cfg, kind_text, outputs_text);

    // sweep presets must be applied before explicit flags override them
    const auto figure_it = std::find(args.begin(), args.end(), "--figure");
    if (!args.empty() && args.front() == "sweep" && figure_it != args.end() && figure_it + 1 != args.end()) {
        try {
            cfg.sweep = sweep::figure_config(std::stoi(*(figure_it + 1)));
        } catch (const std::exception&) {
            throw UsageError("--figure must be 2, 3, 4 or 5");
        }
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        throw;
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    try {
        if (!kind_text.empty()) {
            const AtomKind k = parse_atom_kind(kind_text);
            (cfg.command == Command::Sweep ? cfg.sweep.kind : cfg.model.kind) = k;
        }
        if (!outputs_text.empty())
            cfg.sweep.outputs = detail::parse_outputs(outputs_text);
        if (cfg.command == Command::Sweep)
            sweep::validate(cfg.sweep);
        else if (cfg.command != Command::Validate)
            validate(cfg.model);
        if (cfg.command == Command::Dynamics && cfg.steps < 1)
            throw std::invalid_argument("steps must be >= 1");
        if ((cfg.command == Command::Dynamics || cfg.command == Command::Qsl) && !(cfg.tau > 0.0))
            throw std::invalid_argument("tau must be > 0");
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

/// Inverse of `parse`: parse(render(c)) == c for every valid configuration.
inline std::vector<std::string> render(const RunConfig& c)
{
    const auto d = [](double v) { return io::format_double(v); };
    std::vector<std::string> a{command_name(c.command)};
    const auto model = [&] {
        a.insert(a.end(), {"--kind", std::string(to_string(c.model.kind)), "--n", std::to_string(c.model.n_atoms),
                           "--theta", d(c.model.theta), "--gamma0", d(c.model.gamma0), "--lambda", d(c.model.lambda),
                           "--omega0", d(c.model.omega0)});
    };
    const auto out = [&] {
        if (!c.output.empty())
            a.insert(a.end(), {"--output", c.output});
        a.insert(a.end(), {"--format", c.format == Format::Csv ? "csv" : "json"});
        if (c.force)
            a.push_back("--force");
    };
    switch (c.command) {
    case Command::BoundState:
        model();
        break;
    case Command::Dynamics:
        model();
        a.insert(a.end(), {"--tau", d(c.tau), "--steps", std::to_string(c.steps)});
        out();
        break;
    case Command::Qsl:
        model();
        a.insert(a.end(), {"--tau", d(c.tau)});
        out();
        break;
    case Command::Sweep: {
        const auto& s = c.sweep;
        if (c.figure)
            a.insert(a.end(), {"--figure", std::to_string(*c.figure)});
        std::string ns, ts;
        for (std::size_t i = 0; i < s.n_atoms_list.size(); ++i)
            ns += (i ? "," : "") + std::to_string(s.n_atoms_list[i]);
        for (std::size_t i = 0; i < s.theta_list.size(); ++i)
            ts += (i ? "," : "") + d(s.theta_list[i]);
        a.insert(a.end(), {"--kind", std::string(to_string(s.kind)), "--n-list", ns, "--theta-list", ts,
                           "--gamma-min", d(s.gamma0_grid.min), "--gamma-max", d(s.gamma0_grid.max), "--points",
                           std::to_string(s.gamma0_grid.points), "--lambda", d(s.lambda), "--omega0", d(s.omega0),
                           "--tau", d(s.tau), "--threads", std::to_string(s.threads)});
        const std::string outs = detail::join_outputs(s.outputs);
        if (!outs.empty())
            a.insert(a.end(), {"--outputs", outs});
        if (!c.svg.empty())
            a.insert(a.end(), {"--svg", c.svg});
        out();
        break;
    }
    case Command::Validate:
        if (c.quick)
            a.push_back("--quick");
        if (c.inject_g_bias != 0.0)
            a.insert(a.end(), {"--inject-g-bias", d(c.inject_g_bias)});
        break;
    }
    return a;
}

} // namespace qspeed::cli
