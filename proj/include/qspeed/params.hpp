#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qspeed {

/// Atom model sharing the reservoir.
enum class AtomKind { TwoLevel, ThreeLevelV };

inline std::string_view to_string(AtomKind kind)
{
    return kind == AtomKind::TwoLevel ? "two-level" : "three-level";
}

inline AtomKind parse_atom_kind(std::string_view text)
{
    if (text == "two-level" || text == "two_level" || text == "2")
        return AtomKind::TwoLevel;
    if (text == "three-level" || text == "three_level" || text == "v" || text == "3")
        return AtomKind::ThreeLevelV;
    throw std::invalid_argument("unknown atom kind '" + std::string(text) + "'");
}

/// Reservoir and atom-ensemble parameters. Frequencies are in units of omega0.
struct ModelParams
{
    double omega0 = 1.0;  ///< atomic transition / reservoir centre frequency
    double lambda = 2.0;  ///< Lorentzian width
    double gamma0 = 0.0;  ///< coupling strength
    int n_atoms = 1;      ///< main atom plus n_atoms-1 spectators
    double theta = 0.0;   ///< SGI parameter, V-type atoms only
    AtomKind kind = AtomKind::TwoLevel;

    /// Number multiplying the reservoir integral in the collective channel:
    /// N for two-level atoms, N(1+theta) for V-type atoms.
    double channel_weight() const
    {
        return kind == AtomKind::TwoLevel ? double(n_atoms) : n_atoms * (1.0 + theta);
    }

    bool operator==(const ModelParams&) const = default;
};

/// Throws std::invalid_argument naming the first violated invariant.
inline void validate(const ModelParams& p)
{
    if (!(p.omega0 > 0.0))
        throw std::invalid_argument("omega0 must be > 0");
    if (!(p.lambda > 0.0))
        throw std::invalid_argument("lambda must be > 0");
    if (!(p.gamma0 >= 0.0))
        throw std::invalid_argument("gamma0 must be >= 0");
    if (p.n_atoms < 1)
        throw std::invalid_argument("n_atoms must be >= 1");
    if (!(p.theta >= 0.0 && p.theta <= 1.0))
        throw std::invalid_argument("theta must lie in [0, 1]");
    if (p.kind == AtomKind::TwoLevel && p.theta != 0.0)
        throw std::invalid_argument("theta must be 0 for two-level atoms");
}

/// Raised when a bracketing search cannot straddle a sign change.
class BracketFailure : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

} // namespace qspeed
