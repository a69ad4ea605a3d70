#pragma once

#include <string>
#include <vector>

#include "msvol/linalg.hpp"

namespace msvol {

// Initial condition for the squared volatility.
struct InitialLaw {
    enum class Kind { Point, StationaryBurnIn };
    Kind kind = Kind::Point;
    double value = 1.0;

    static InitialLaw point(double v) { return {Kind::Point, v}; }
    static InitialLaw stationary() { return {Kind::StationaryBurnIn, 0.0}; }
};

// Verdicts for the moment conditions backing the stationary k-th moment.
struct ConditionReport {
    int k = 0;
    bool exponent_dominated = false;  // psi_j(-k) < |q_jj| for every state
    bool contraction = false;         // the max condition stays below 1
    double contraction_max = 0.0;
    double spectral_abscissa = 0.0;   // largest across Psi_xi(-1..-k)
    bool spectral_negative = false;
    bool jump_moments_finite = false;
    std::vector<std::string> failures;

    bool all_ok() const { return failures.empty(); }

    std::string summary() const {
        if (failures.empty()) return "all conditions hold";
        std::string s = failures.front();
        for (std::size_t i = 1; i < failures.size(); ++i) s += "; " + failures[i];
        return s;
    }
};

struct StationaryMoment {
    double value = 0.0;
    Vector joint;  // E_pi[V^k e_J], sums to value
    ConditionReport conditions;
};

// Mixed covariances at the earlier time s; the closed forms propagate them to
// t but do not determine them, so they arrive as inputs (typically MC).
struct AutocovInputs {
    double e_v0 = 0.0;  // E_j[V_0]
    Vector cov_ev_v;    // Cov_j(e_{J_s} V_s, V_s)
    Vector cov_e_v;     // Cov_j(e_{J_s}, V_s)
};

struct AutocovResult {
    double mean = 0.0;  // E_j[V_t]
    Vector cov_vector;  // Cov_j(e_{J_t}, V_s)
    double cov = 0.0;   // Cov_j(V_t, V_s)
};

// Stationary inner expectations over the first return window, MC-supplied.
struct LogReturnInputs {
    Vector g2v_e;  // E_pi[G_r^2 V_r e_{J_r}]
    Vector g2_e;   // E_pi[G_r^2 e_{J_r}]
};

struct LogReturnMoments {
    double mean = 0.0;
    double second_moment = 0.0;
    double cov_disjoint = 0.0;
    double cov_squared = 0.0;
};

}  // namespace msvol
