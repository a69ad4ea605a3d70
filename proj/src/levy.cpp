#include "msvol/levy.hpp"

#include <cmath>
#include <stdexcept>

#include "msvol/quadrature.hpp"

namespace msvol {

namespace {

double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r *= static_cast<double>(n - k + i) / i;
    return r;
}

double normal_pdf(double y, double mean, double sd) {
    constexpr double kSqrt2Pi = 2.50662827463100050;
    const double z = (y - mean) / sd;
    return std::exp(-0.5 * z * z) / (sd * kSqrt2Pi);
}

// integral f(y) dLaw(y) for laws with a density; point masses are
// handled at the call sites.
double law_integral(const JumpLaw& law, const std::function<double(double)>& f) {
    QuadratureResult r;
    switch (law.kind) {
        case JumpKind::Exponential:
            r = integrate_upper([&](double y) { return f(y) * law.a * std::exp(-law.a * y); }, 0.0);
            break;
        case JumpKind::Normal:
            r = integrate_line([&](double y) { return f(y) * normal_pdf(y, law.a, law.b); });
            break;
        case JumpKind::Point:
            return f(law.a);
    }
    if (!r.converged) throw std::runtime_error("jump-law integral did not converge");
    return r.value;
}

}  // namespace

JumpLaw JumpLaw::exponential(double rate) {
    if (!(rate > 0.0)) throw std::invalid_argument("exponential jump law: rate must be > 0");
    return {JumpKind::Exponential, rate, 0.0};
}

JumpLaw JumpLaw::normal(double mean, double sd) {
    if (!(sd > 0.0)) throw std::invalid_argument("normal jump law: sd must be > 0");
    return {JumpKind::Normal, mean, sd};
}

double JumpLaw::moment(int n) const {
    if (n < 0) throw std::invalid_argument("jump moment: n >= 0 required");
    if (n == 0) return 1.0;
    switch (kind) {
        case JumpKind::Point:
            return std::pow(a, n);
        case JumpKind::Exponential:
            return factorial(n) / std::pow(a, n);
        case JumpKind::Normal: {
            // M_n = mean M_{n-1} + (n-1) sd^2 M_{n-2}
            double m_prev = 1.0, m_cur = a;
            for (int k = 2; k <= n; ++k) {
                double m_next = a * m_cur + (k - 1) * b * b * m_prev;
                m_prev = m_cur;
                m_cur = m_next;
            }
            return m_cur;
        }
    }
    return 0.0;
}

double JumpLaw::moment_above_one(int n) const {
    switch (kind) {
        case JumpKind::Point:
            return a > 1.0 ? std::pow(a, n) : 0.0;
        case JumpKind::Exponential: {
            // I_n = e^{-rate} + (n/rate) I_{n-1}, I_0 = e^{-rate}
            double in = std::exp(-a);
            for (int k = 1; k <= n; ++k) in = std::exp(-a) + (k / a) * in;
            return in;
        }
        case JumpKind::Normal: {
            auto f = [this, n](double y) {
                return y <= 1.0 ? 0.0 : std::pow(y, n) * normal_pdf(y, a, b);
            };
            QuadratureResult r = integrate_upper(f, 1.0);
            if (!r.converged) throw std::runtime_error("moment_above_one: quadrature failed");
            return r.value;
        }
    }
    return 0.0;
}

bool JumpLaw::mgf_finite(double w) const {
    return kind != JumpKind::Exponential || w < a;
}

double JumpLaw::mgf(double w) const {
    if (w == 0.0) return 1.0;
    switch (kind) {
        case JumpKind::Point:
            return std::exp(w * a);
        case JumpKind::Exponential:
            if (w >= a)
                throw std::runtime_error("exponential law: E[e^{wY}] infinite for w >= rate");
            return a / (a - w);
        case JumpKind::Normal:
            return std::exp(w * a + 0.5 * w * w * b * b);
    }
    return 0.0;
}

double JumpLaw::sample(RandomStream& rng) const {
    switch (kind) {
        case JumpKind::Point:
            return a;
        case JumpKind::Exponential:
            return rng.exponential(a);
        case JumpKind::Normal:
            return rng.normal(a, b);
    }
    return 0.0;
}

bool JumpLaw::nonnegative() const {
    switch (kind) {
        case JumpKind::Point:
            return a >= 0.0;
        case JumpKind::Exponential:
            return true;
        case JumpKind::Normal:
            return false;
    }
    return false;
}

bool JumpLaw::strictly_positive() const {
    return (kind == JumpKind::Point && a > 0.0) || kind == JumpKind::Exponential;
}

void LevyDriverSpec::validate() const {
    if (brownian_sd < 0.0) throw std::invalid_argument("driver: brownian_sd must be >= 0");
    if (cp_intensity < 0.0) throw std::invalid_argument("driver: cp_intensity must be >= 0");
    if (!std::isfinite(drift)) throw std::invalid_argument("driver: drift must be finite");
}

bool LevyDriverSpec::is_subordinator() const {
    return drift >= 0.0 && brownian_sd == 0.0 &&
           (cp_intensity == 0.0 || jump_law.strictly_positive());
}

double levy_measure_moment(const LevyDriverSpec& spec, int n) {
    if (n < 1) throw std::invalid_argument("levy_measure_moment: n >= 1 required");
    return spec.cp_intensity * spec.jump_law.moment(n);
}

double levy_measure_moment_above_one(const LevyDriverSpec& spec, int n) {
    if (n < 1) throw std::invalid_argument("levy_measure_moment_above_one: n >= 1 required");
    return spec.cp_intensity * spec.jump_law.moment_above_one(n);
}

double driver_moment(const LevyDriverSpec& spec, int n) {
    if (n < 1 || n > 4) throw std::invalid_argument("driver_moment: 1 <= n <= 4 supported");
    const double c = spec.cp_intensity;
    const JumpLaw& y = spec.jump_law;
    const double k1 = spec.drift + c * y.moment(1);
    if (n == 1) return k1;
    const double k2 = spec.brownian_sd * spec.brownian_sd + c * y.moment(2);
    if (n == 2) return k2 + k1 * k1;
    const double k3 = c * y.moment(3);
    if (n == 3) return k3 + 3.0 * k2 * k1 + k1 * k1 * k1;
    const double k4 = c * y.moment(4);
    return k4 + 4.0 * k3 * k1 + 3.0 * k2 * k2 + 6.0 * k2 * k1 * k1 + k1 * k1 * k1 * k1;
}

LogMoment log_moment(const LevyDriverSpec& spec) {
    const double c = spec.cp_intensity;
    if (c == 0.0) return {true, 0.0};
    const JumpLaw& law = spec.jump_law;
    switch (law.kind) {
        case JumpKind::Point:
            return {true, law.a > 1.0 ? c * std::log(law.a) : 0.0};
        case JumpKind::Exponential:
            // by parts: integral_1^inf log(y) rate e^{-rate y} dy = E1(rate)
            return {true, c * exp_integral_e1(law.a)};
        case JumpKind::Normal: {
            auto f = [&law](double y) {
                return y <= 1.0 ? 0.0 : std::log(y) * normal_pdf(y, law.a, law.b);
            };
            QuadratureResult r = integrate_upper(f, 1.0);
            if (!r.converged) return {false, 0.0};
            return {true, c * r.value};
        }
    }
    return {true, 0.0};
}

double cogarch_laplace_exponent(double delta, double lambda, const LevyDriverSpec& spec,
                                double w) {
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("cogarch_laplace_exponent: delta in (0,1) required");
    if (lambda < 0.0) throw std::invalid_argument("cogarch_laplace_exponent: lambda >= 0");
    if (w == 0.0) return 0.0;
    const double a = lambda / delta;
    const double c = spec.cp_intensity;
    double jump_part = 0.0;
    if (c > 0.0 && lambda > 0.0) {
        const double k = -w;
        if (k > 0.0 && k == std::floor(k) && k <= 16.0) {
            // E[(1+aY^2)^k - 1] by the binomial theorem
            const int ki = static_cast<int>(k);
            double s = 0.0;
            for (int m = 1; m <= ki; ++m)
                s += binom(ki, m) * std::pow(a, m) * spec.jump_law.moment(2 * m);
            jump_part = c * s;
        } else {
            auto f = [a, w](double y) { return std::pow(1.0 + a * y * y, -w) - 1.0; };
            jump_part = c * law_integral(spec.jump_law, f);
        }
        if (!std::isfinite(jump_part))
            throw std::runtime_error("cogarch_laplace_exponent: divergent jump integral");
    }
    return -w * std::log(delta) + jump_part;
}

double log1p_sq_moment(double a, const LevyDriverSpec& spec) {
    if (a < 0.0) throw std::invalid_argument("log1p_sq_moment: a >= 0 required");
    if (spec.cp_intensity == 0.0 || a == 0.0) return 0.0;
    auto f = [a](double y) { return std::log1p(a * y * y); };
    return spec.cp_intensity * law_integral(spec.jump_law, f);
}

std::vector<std::pair<double, double>> sample_jumps(const LevyDriverSpec& spec, double t0,
                                                    double t1, RandomStream& rng) {
    std::vector<std::pair<double, double>> jumps;
    if (spec.cp_intensity <= 0.0 || t1 <= t0) return jumps;
    double t = t0;
    for (;;) {
        t += rng.exponential(spec.cp_intensity);
        if (t > t1) break;
        jumps.emplace_back(t, spec.jump_law.sample(rng));
    }
    return jumps;
}

double exp_integral_e1(double x) {
    if (!(x > 0.0)) throw std::invalid_argument("exp_integral_e1: x > 0 required");
    const double euler_gamma = 0.5772156649015328606;
    if (x <= 1.0) {
        double sum = 0.0, term = 1.0;
        for (int k = 1; k <= 60; ++k) {
            term *= -x / k;
            const double add = -term / k;
            sum += add;
            if (std::abs(add) < 1e-17 * std::abs(sum)) break;
        }
        return -euler_gamma - std::log(x) + sum;
    }
    // modified Lentz continued fraction, a_i = -i^2, b_i = x + 1 + 2i
    const double tiny = 1e-300;
    double b = x + 1.0;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 200; ++i) {
        const double ai = -static_cast<double>(i) * i;
        b += 2.0;
        d = ai * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + ai / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x);
}

}  // namespace msvol
