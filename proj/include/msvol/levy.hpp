#pragma once

#include <utility>
#include <vector>

#include "msvol/rng.hpp"

namespace msvol {

enum class JumpKind { Point, Exponential, Normal };

// Jump-size law of a compound Poisson part, and of the marginal switch
// jumps. Three families cover every scenario in the models: point
// masses (incl. the zero law), exponentials, Gaussians.
struct JumpLaw {
    JumpKind kind = JumpKind::Point;
    double a = 0.0;  // point: value | exponential: rate | normal: mean
    double b = 0.0;  // normal: sd

    static JumpLaw zero() { return {JumpKind::Point, 0.0, 0.0}; }
    static JumpLaw point(double value) { return {JumpKind::Point, value, 0.0}; }
    static JumpLaw exponential(double rate);
    static JumpLaw normal(double mean, double sd);

    double moment(int n) const;  // E[Y^n]
    double mean() const { return moment(1); }
    // E[Y^n 1_{Y>1}]; closed form except for the normal law.
    double moment_above_one(int n) const;
    bool mgf_finite(double w) const;
    double mgf(double w) const;  // E[e^{wY}]; throws when infinite
    double sample(RandomStream& rng) const;

    bool is_zero() const { return kind == JumpKind::Point && a == 0.0; }
    bool nonnegative() const;       // P(Y >= 0) = 1
    bool strictly_positive() const; // P(Y > 0) = 1
};

// Levy process L_t = drift*t + brownian_sd*W_t + compound Poisson with
// jump intensity cp_intensity and i.i.d. JumpLaw sizes. Levy measure
// nu = cp_intensity * law(Y).
struct LevyDriverSpec {
    double drift = 0.0;
    double brownian_sd = 0.0;
    double cp_intensity = 0.0;
    JumpLaw jump_law = JumpLaw::zero();

    void validate() const;
    bool is_subordinator() const;
    bool pure_jump() const { return drift == 0.0 && brownian_sd == 0.0; }
};

// integral y^n nu(dy) = cp_intensity * E[Y^n].
double levy_measure_moment(const LevyDriverSpec& spec, int n);
// integral over (1,inf) of y^n nu(dy); the truncated-variant source of
// the MSBNS moment recursion.
double levy_measure_moment_above_one(const LevyDriverSpec& spec, int n);

// E[L_1^n] for n <= 4 via the cumulant expansion.
double driver_moment(const LevyDriverSpec& spec, int n);

struct LogMoment {
    bool finite = true;
    double value = 0.0;
};
// integral over (1,inf) of log(y) nu(dy); closed form through the
// exponential integral for the exponential law.
LogMoment log_moment(const LevyDriverSpec& spec);

// psi_j(w) of the MSCOGARCH regime piece:
//   psi(w) = -w log(delta) + integral ((1+(lambda/delta) y^2)^{-w} - 1) nu(dy)
// Closed form for integer w <= 0, quadrature otherwise. Exact 0 at w=0.
double cogarch_laplace_exponent(double delta, double lambda, const LevyDriverSpec& spec,
                                double w);

// integral log(1 + a y^2) nu(dy); the jump part of kappa_xi.
double log1p_sq_moment(double a, const LevyDriverSpec& spec);

// Jump times and sizes of the compound Poisson part on (t0, t1],
// sorted by time (exponential interarrival clocks).
std::vector<std::pair<double, double>> sample_jumps(const LevyDriverSpec& spec, double t0,
                                                    double t1, RandomStream& rng);

// E1(x) for x > 0: series for small x, continued fraction above 1.
double exp_integral_e1(double x);

}  // namespace msvol
