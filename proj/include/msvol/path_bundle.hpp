#pragma once

#include <cmath>
#include <vector>

#include "msvol/map_process.hpp"

namespace msvol {

// Event as applied to the model pair (V, G); v_before is the left limit.
struct PathEvent {
    double time = 0.0;
    MapEventKind kind = MapEventKind::Driver;
    int from = 0;
    int to = 0;
    double y = 0.0;
    double dxi = 0.0;
    double deta = 0.0;
    double v_before = 0.0;
    double dv = 0.0;
    double dg = 0.0;
};

struct PathBundle {
    double horizon = 0.0;
    Vector grid;           // sample times, grid.front() == 0, grid.back() == horizon
    Vector v;              // squared volatility at grid times (cadlag values)
    Vector g;              // log price at grid times, g.front() == 0
    std::vector<int> j;    // regime at grid times
    std::vector<PathEvent> events;
    RegimePath regimes;
    double integral_v = 0.0;     // exact per-segment integrals of V and V^2
    double integral_v_sq = 0.0;
};

// Between events both models solve dV = a V dt + b dt with a < 0; the solution
// relaxes toward v_inf = -b/a.  All integrals below are closed-form.
struct OuSegment {
    double a;
    double v_inf;

    double value(double v, double dt) const { return v + (v - v_inf) * std::expm1(a * dt); }

    double integral(double v, double dt) const {
        return v_inf * dt + (v - v_inf) * std::expm1(a * dt) / a;
    }

    double integral_sq(double v, double dt) const {
        const double d = v - v_inf;
        return v_inf * v_inf * dt + 2.0 * v_inf * d * std::expm1(a * dt) / a +
               d * d * std::expm1(2.0 * a * dt) / (2.0 * a);
    }
};

inline Vector make_grid(double horizon, double grid_dt) {
    Vector grid;
    grid.push_back(0.0);
    const double cutoff = horizon * (1.0 - 1e-12);
    for (long k = 1; static_cast<double>(k) * grid_dt < cutoff; ++k)
        grid.push_back(static_cast<double>(k) * grid_dt);
    grid.push_back(horizon);
    return grid;
}

}  // namespace msvol
