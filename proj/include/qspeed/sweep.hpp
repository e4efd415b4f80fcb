#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "qspeed/bound_state.hpp"
#include "qspeed/measures.hpp"
#include "qspeed/params.hpp"

namespace qspeed::sweep {

struct GammaGrid
{
    double min = 0.0;
    double max = 4.0;
    int points = 401;

    /// i-th grid value; endpoints are hit exactly.
    double at(int i) const
    {
        if (i == points - 1)
            return max;
        return min + (max - min) * double(i) / double(points - 1);
    }

    bool operator==(const GammaGrid&) const = default;
};

struct Outputs
{
    bool ratio = true;
    bool nonmarkov = true;
    bool bound_energy = true;

    bool operator==(const Outputs&) const = default;
};

struct SweepConfig
{
    AtomKind kind = AtomKind::TwoLevel;
    std::vector<int> n_atoms_list{1, 3, 8, 30};
    std::vector<double> theta_list{0.0};
    GammaGrid gamma0_grid;
    double lambda = 2.0;
    double omega0 = 1.0;
    double tau = 5.0;
    Outputs outputs;
    unsigned threads = 0;  ///< 0 = hardware concurrency

    bool operator==(const SweepConfig&) const = default;
};

inline void validate(const SweepConfig& c)
{
    if (c.gamma0_grid.min < 0.0)
        throw std::invalid_argument("gamma0 grid min must be >= 0");
    if (c.gamma0_grid.points < 2)
        throw std::invalid_argument("gamma0 grid needs at least 2 points");
    if (!(c.gamma0_grid.max > c.gamma0_grid.min))
        throw std::invalid_argument("gamma0 grid max must exceed min");
    if (c.n_atoms_list.empty() || c.theta_list.empty())
        throw std::invalid_argument("sweep needs at least one N and one theta");
    if (!(c.tau > 0.0))
        throw std::invalid_argument("tau must be > 0");
    if (!c.outputs.ratio && !c.outputs.nonmarkov && !c.outputs.bound_energy)
        throw std::invalid_argument("sweep needs at least one output column");
    for (double theta : c.theta_list) {
        ModelParams p{c.omega0, c.lambda, c.gamma0_grid.min, 1, theta, c.kind};
        qspeed::validate(p);
    }
    for (int n : c.n_atoms_list)
        if (n < 1)
            throw std::invalid_argument("n_atoms must be >= 1");
}

enum class RowStatus { Normal, StationaryTrajectory, BracketFailure };

inline std::string_view to_string(RowStatus s)
{
    switch (s) {
    case RowStatus::Normal: return "normal";
    case RowStatus::StationaryTrajectory: return "stationary";
    case RowStatus::BracketFailure: return "bracket_failure";
    }
    return "unknown";
}

/// One grid point. Optional columns are empty when not requested or undefined
/// (no bound state at zero coupling, or an unresolved bracket).
struct SweepRow
{
    double gamma0 = 0.0;
    int n_atoms = 1;
    double theta = 0.0;
    std::optional<double> ratio;
    std::optional<double> nonmarkov;
    std::optional<double> bound_energy;
    RowStatus status = RowStatus::Normal;
    std::string message;

    bool operator==(const SweepRow&) const = default;
};

inline ModelParams point_params(const SweepConfig& c, int n, double theta, double gamma0)
{
    return ModelParams{c.omega0, c.lambda, gamma0, n, theta, c.kind};
}

/// Evaluates a single grid point; this is also what `run_sweep` calls.
inline SweepRow compute_row(const SweepConfig& c, int n, double theta, double gamma0)
{
    const ModelParams p = point_params(c, n, theta, gamma0);
    SweepRow row;
    row.gamma0 = gamma0;
    row.n_atoms = n;
    row.theta = theta;
    if (c.outputs.ratio || c.outputs.nonmarkov) {
        const measures::SpeedupReport rep = measures::speedup_report(p, c.tau);
        if (c.outputs.ratio)
            row.ratio = rep.ratio;
        if (c.outputs.nonmarkov)
            row.nonmarkov = rep.nonmarkov;
        if (rep.status == measures::Status::StationaryTrajectory)
            row.status = RowStatus::StationaryTrajectory;
    } else if (gamma0 == 0.0) {
        row.status = RowStatus::StationaryTrajectory;
    }
    if (c.outputs.bound_energy) {
        try {
            const auto b = bound_state::find_bound_state(p);
            if (b.exists)
                row.bound_energy = b.energy;
        } catch (const BracketFailure& e) {
            row.status = RowStatus::BracketFailure;
            row.message = e.what();
        }
    }
    return row;
}

/// Rows ordered by (N, theta, gamma0). Points are evaluated in parallel and
/// written into preassigned slots, so the result does not depend on scheduling.
inline std::vector<SweepRow> run_sweep(const SweepConfig& c)
{
    validate(c);
    struct Task
    {
        int n;
        double theta;
        double gamma0;
    };
    std::vector<Task> tasks;
    for (int n : c.n_atoms_list)
        for (double theta : c.theta_list)
            for (int i = 0; i < c.gamma0_grid.points; ++i)
                tasks.push_back({n, theta, c.gamma0_grid.at(i)});

    std::vector<SweepRow> rows(tasks.size());
    std::atomic<std::size_t> next{0};
    const auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            const Task& t = tasks[i];
            try {
                rows[i] = compute_row(c, t.n, t.theta, t.gamma0);
            } catch (const std::exception& e) {
                rows[i].gamma0 = t.gamma0;
                rows[i].n_atoms = t.n;
                rows[i].theta = t.theta;
                rows[i].status = RowStatus::BracketFailure;
                rows[i].message = e.what();
            }
        }
    };
    unsigned threads = c.threads ? c.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = unsigned(std::min<std::size_t>(threads, tasks.size()));
    std::vector<std::jthread> pool;
    for (unsigned k = 1; k < threads; ++k)
        pool.emplace_back(worker);
    worker();
    pool.clear();
    return rows;
}

/// Per-point failures collected from a finished sweep.
inline std::vector<const SweepRow*> failures(const std::vector<SweepRow>& rows)
{
    std::vector<const SweepRow*> out;
    for (const auto& r : rows)
        if (r.status == RowStatus::BracketFailure)
            out.push_back(&r);
    return out;
}

enum class Criterion { SpeedupOnset, NonMarkovOnset };

inline constexpr double speedup_threshold = 1e-6;
inline constexpr double nonmarkov_threshold = 1e-10;
inline constexpr double onset_width = 1e-6;

inline bool indicator(const ModelParams& p, double tau, Criterion criterion)
{
    if (p.gamma0 == 0.0)
        return false;
    if (criterion == Criterion::SpeedupOnset) {
        const auto q = p.kind == AtomKind::TwoLevel ? measures::qsl_two_level(p, tau) : measures::qsl_three_level(p, tau);
        return q.status == measures::Status::Normal && q.tau_qsl / tau < 1.0 - speedup_threshold;
    }
    const double r = p.kind == AtomKind::TwoLevel ? measures::nonmarkov_two_level(p, tau)
                                                  : measures::nonmarkov_three_level(p, tau);
    return r > nonmarkov_threshold;
}

class NoTransition : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Smallest coupling where the criterion switches on, by bisection on
/// [0, gamma_max] down to `onset_width`.
inline double find_critical_coupling(AtomKind kind, int n_atoms, double theta, double lambda, double tau,
                                     Criterion criterion, double gamma_max = 4.0, double omega0 = 1.0)
{
    ModelParams p{omega0, lambda, 0.0, n_atoms, theta, kind};
    qspeed::validate(p);
    const auto on = [&](double g) {
        p.gamma0 = g;
        return indicator(p, tau, criterion);
    };
    if (on(0.0) || !on(gamma_max))
        throw NoTransition("no transition in range [0, " + std::to_string(gamma_max) + "]");
    double lo = 0.0, hi = gamma_max;
    while (hi - lo > onset_width) {
        const double mid = 0.5 * (lo + hi);
        (on(mid) ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

/// Preset grids for the four figures.
inline SweepConfig figure_config(int figure)
{
    SweepConfig c;
    switch (figure) {
    case 2:
        c.kind = AtomKind::TwoLevel;
        c.outputs = {true, true, false};
        break;
    case 3:
        c.kind = AtomKind::TwoLevel;
        c.outputs = {true, false, true};
        break;
    case 4:
        c.kind = AtomKind::ThreeLevelV;
        c.theta_list = {0.0, 1.0};
        c.outputs = {true, true, false};
        break;
    case 5:
        c.kind = AtomKind::ThreeLevelV;
        c.theta_list = {0.0, 1.0};
        c.outputs = {true, false, true};
        break;
    default:
        throw std::invalid_argument("figure must be 2, 3, 4 or 5");
    }
    return c;
}

} // namespace qspeed::sweep
