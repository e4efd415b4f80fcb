#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "qspeed/qspeed.hpp"
#include "qspeed/run_config.hpp"

namespace {

using namespace qspeed;
using cli::Format;
using cli::RunConfig;

enum Exit { ok = 0, usage = 1, bracket = 2, validation = 3 };

std::string sig12(double v)
{
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

// Opens the destination, or stdout when no path is given.
int emit(const RunConfig& cfg, const std::string& text)
{
    if (cfg.output.empty()) {
        std::cout << text;
        return ok;
    }
    if (std::filesystem::exists(cfg.output) && !cfg.force) {
        std::cerr << "qspeed: refusing to overwrite '" << cfg.output << "' (use --force)\n";
        return usage;
    }
    std::ofstream f(cfg.output, std::ios::binary | std::ios::trunc);
    if (!(f << text)) {
        std::cerr << "qspeed: cannot write '" << cfg.output << "'\n";
        return usage;
    }
    return ok;
}

int cmd_bound_state(const RunConfig& cfg)
{
    const auto& p = cfg.model;
    if (p.gamma0 == 0.0) {
        std::cout << "no bound state (zero coupling)\n";
        return ok;
    }
    try {
        const auto b = bound_state::find_bound_state(p);
        std::cout << "energy     " << sig12(*b.energy) << '\n'
                  << "residual   " << io::format_double(b.residual) << '\n'
                  << "iterations " << b.iterations << '\n'
                  << "bracket    [" << io::format_double(b.lo) << ", " << io::format_double(b.hi) << "]\n";
    } catch (const BracketFailure& e) {
        std::cerr << "qspeed: " << e.what() << '\n';
        return bracket;
    }
    return ok;
}

int cmd_dynamics(const RunConfig& cfg)
{
    const auto tr = dynamics::make_trajectory(cfg.model, cfg.tau, cfg.steps);
    std::ostringstream os;
    if (cfg.format == Format::Csv) {
        os << "t,amplitude,population,population_rate\n";
        for (std::size_t i = 0; i < tr.times.size(); ++i)
            os << io::format_double(tr.times[i]) << ',' << io::format_double(tr.amplitude[i].real()) << ','
               << io::format_double(tr.population[i]) << ',' << io::format_double(tr.population_rate[i]) << '\n';
    } else {
        nlohmann::ordered_json j;
        j["schema"] = 1;
        j["kind"] = std::string(to_string(cfg.model.kind));
        j["n_atoms"] = cfg.model.n_atoms;
        j["theta"] = cfg.model.theta;
        j["gamma0"] = cfg.model.gamma0;
        j["lambda"] = cfg.model.lambda;
        j["omega0"] = cfg.model.omega0;
        j["t"] = tr.times;
        std::vector<double> amp;
        for (const auto& a : tr.amplitude)
            amp.push_back(a.real());
        j["amplitude"] = amp;
        j["population"] = tr.population;
        j["population_rate"] = tr.population_rate;
        os << j.dump(2) << '\n';
    }
    return emit(cfg, os.str());
}

int cmd_qsl(const RunConfig& cfg)
{
    const auto r = measures::speedup_report(cfg.model, cfg.tau);
    std::ostringstream os;
    if (cfg.format == Format::Csv) {
        os << "tau,tau_qsl,ratio,nonmarkov,final_population,status\n"
           << io::format_double(r.tau) << ',' << io::format_double(r.tau_qsl) << ',' << io::format_double(r.ratio)
           << ',' << io::format_double(r.nonmarkov) << ',' << io::format_double(r.final_population) << ','
           << measures::to_string(r.status) << '\n';
    } else {
        nlohmann::ordered_json j{{"schema", 1},
                                 {"tau", r.tau},
                                 {"tau_qsl", r.tau_qsl},
                                 {"ratio", r.ratio},
                                 {"nonmarkov", r.nonmarkov},
                                 {"final_population", r.final_population},
                                 {"status", std::string(measures::to_string(r.status))}};
        os << j.dump(2) << '\n';
    }
    return emit(cfg, os.str());
}

// Speedup onset for each curve and the bound-state depth there.
void onset_summary(const sweep::SweepConfig& s)
{
    for (int n : s.n_atoms_list)
        for (double theta : s.theta_list) {
            std::cerr << "onset N=" << n << " theta=" << io::format_double(theta) << ": ";
            try {
                const double g = sweep::find_critical_coupling(s.kind, n, theta, s.lambda, s.tau,
                                                               sweep::Criterion::SpeedupOnset,
                                                               s.gamma0_grid.max, s.omega0);
                std::cerr << "gamma0=" << sig12(g);
                try {
                    const auto b = bound_state::find_bound_state(sweep::point_params(s, n, theta, g));
                    std::cerr << " |E_b|=" << sig12(std::abs(*b.energy));
                } catch (const BracketFailure&) {
                    std::cerr << " |E_b| unresolved";
                }
                std::cerr << '\n';
            } catch (const sweep::NoTransition& e) {
                std::cerr << e.what() << '\n';
            }
        }
}

int cmd_sweep(const RunConfig& cfg)
{
    for (const auto* path : {&cfg.output, &cfg.svg})
        if (!path->empty() && std::filesystem::exists(*path) && !cfg.force) {
            std::cerr << "qspeed: refusing to overwrite '" << *path << "' (use --force)\n";
            return usage;
        }

    const auto rows = sweep::run_sweep(cfg.sweep);
    std::ostringstream os;
    if (cfg.format == Format::Csv)
        io::write_csv(os, rows);
    else
        os << io::sweep_json(cfg.sweep, rows).dump(2) << '\n';
    if (const int rc = emit(cfg, os.str()); rc != ok)
        return rc;

    if (!cfg.svg.empty()) {
        std::ofstream f(cfg.svg, std::ios::binary | std::ios::trunc);
        f << io::render_svg(io::sweep_panels(cfg.sweep, rows), "γ₀/ω₀");
        if (!f) {
            std::cerr << "qspeed: cannot write '" << cfg.svg << "'\n";
            return usage;
        }
    }

    const auto bad = sweep::failures(rows);
    for (const auto* r : bad)
        std::cerr << "bracket failure at gamma0=" << io::format_double(r->gamma0) << " N=" << r->n_atoms
                  << " theta=" << io::format_double(r->theta) << ": " << r->message << '\n';
    if (cfg.sweep.outputs.ratio && !cfg.output.empty())
        onset_summary(cfg.sweep);
    // failed points are recorded in the status column; the sweep itself succeeded
    return ok;
}

int cmd_validate(const RunConfig& cfg)
{
    validation::Options opt;
    opt.quick = cfg.quick;
    if (cfg.inject_g_bias != 0.0) {
        const double bias = cfg.inject_g_bias;
        opt.amplitude = [bias](double t, const ModelParams& p) {
            // shifts g by `bias` inside the closed form
            const double n = p.n_atoms;
            const cplx a = dynamics::main_amplitude(t, p);
            return a + bias / n;
        };
    }
    const auto checks = validation::run(opt);
    for (const auto& c : checks)
        std::cout << (c.pass ? "PASS " : "FAIL ") << std::left << std::setw(66) << c.name
                  << " max=" << std::setprecision(3) << std::scientific << c.max_residual << " tol=" << c.tolerance
                  << std::defaultfloat << '\n';
    return validation::all_pass(checks) ? ok : validation;
}

} // namespace

int main(int argc, char** argv)
{
    RunConfig cfg;
    try {
        cfg = cli::parse(std::vector<std::string>(argv + 1, argv + argc));
    } catch (const CLI::CallForHelp&) {
        CLI::App app{"quantum speedup in collective non-Markovian dynamics", "qspeed"};
        RunConfig dummy;
        std::string k;
        std::vector<std::string> o;
        cli::build_app(app, dummy, k, o);
        std::cout << app.help();
        return ok;
    } catch (const cli::UsageError& e) {
        std::string msg = e.what();
        std::replace(msg.begin(), msg.end(), '\n', ' ');
        std::cerr << "qspeed: " << msg << '\n';
        return usage;
    }

    try {
        switch (cfg.command) {
        case cli::Command::BoundState: return cmd_bound_state(cfg);
        case cli::Command::Dynamics: return cmd_dynamics(cfg);
        case cli::Command::Qsl: return cmd_qsl(cfg);
        case cli::Command::Sweep: return cmd_sweep(cfg);
        case cli::Command::Validate: return cmd_validate(cfg);
        }
    } catch (const BracketFailure& e) {
        std::cerr << "qspeed: " << e.what() << '\n';
        return bracket;
    } catch (const std::invalid_argument& e) {
        std::cerr << "qspeed: " << e.what() << '\n';
        return usage;
    }
    return ok;
}
