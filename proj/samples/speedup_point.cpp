// Speedup and non-Markovianity at one coupling, for a few atom numbers.
#include <cstdio>

#include "qspeed/qspeed.hpp"

int main()
{
    using namespace qspeed;
    for (int n : {1, 3, 8, 30}) {
        const ModelParams p{1.0, 2.0, 2.0, n, 0.0, AtomKind::TwoLevel};
        const auto r = measures::speedup_report(p, 5.0);
        const auto b = bound_state::find_bound_state(p);
        std::printf("N=%2d  tau_QSL/tau=%.6f  R=%.6f  E_b=%.6f\n", n, r.ratio, r.nonmarkov, *b.energy);
    }
}
