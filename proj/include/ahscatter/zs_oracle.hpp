#pragma once

#include <functional>
#include <vector>

#include "ahscatter/scattering.hpp"
#include "ahscatter/initial_data.hpp"

namespace ahs {

using ldouble = long double;

// q(x) = A(x) exp(i S(x) / eps), evaluated in extended precision.
struct ZsPotential {
    std::function<ldouble(ldouble)> amplitude;
    std::function<ldouble(ldouble)> phase;
    // |x| beyond which A(x) <= bound, for truncation
    std::function<double(double bound)> support;
};

// A = Im alpha, S = -2 int_0^x Re alpha (closed forms for the built-in families).
ZsPotential zs_potential(const InitialDataSpec& spec);
ZsPotential zero_potential();

struct ScatteringCoefficients {
    double z = 0.0;
    double epsilon = 0.0;
    cplx a_coef;
    cplx b_coef;
    cplx r;
    ldouble log_abs_r = 0.0L;  // ln|b| - ln|a| without under/overflow
    double domain_truncation = 0.0;
    double unitarity_defect = 0.0;  // | |a|^2 + |b|^2 - 1 |
    double coefficient_noise = 0.0;  // |da| + |db| between the last two truncations
    long steps = 0;
};

struct ZsSettings {
    double ode_tol = 1e-18;
    double x_truncation = 0.0;  // <= 0: chosen from the decay of A
    int max_doublings = 3;
    long max_steps = 20000000;
};

// Left Jost solution from (exp(-izx/eps), 0) at -X; at +X it is (a exp(-izx/eps), b exp(izx/eps)).
ScatteringCoefficients integrate_zs(const ZsPotential& q, double z, double epsilon,
                                    const ZsSettings& zs = {});
ScatteringCoefficients integrate_zs(const InitialDataSpec& spec, double z, double epsilon,
                                    const ZsSettings& zs = {});

struct SemiclassicalEstimate {
    double epsilon;
    cplx value;  // (i eps / 2) ln r on the unwrapped branch
    double uncertainty = 0.0;  // in Im value, propagated from the coefficient noise
};
struct SemiclassicalCheck {
    double z = 0.0;
    std::vector<SemiclassicalEstimate> estimates;
    cplx extrapolated;
    cplx f0;                         // f0(z + i0)
    double w = 0.0;
    // Imaginary parts only; the real part carries a free constant. For f0 the closer of the two
    // boundary values f0(z +- i0) is used.
    double deviation_from_f0 = 0.0;
    double deviation_from_w = 0.0;
    double real_offset = 0.0;        // Re extrapolated - Re f0(z + i0)
    // |Im estimate - w| decreases as eps decreases; an estimate within 3 uncertainties of w
    // counts as having reached it.
    bool monotone = false;
};

// Throws ReflectionUnderflow when |r| is below 1e-280 or a, b sits at the integration noise floor.
SemiclassicalCheck semiclassical_limit_check(const InitialDataSpec& spec, const ScatteringData& sd,
                                             double z, const std::vector<double>& epsilon_list,
                                             const ZsSettings& zs = {});

// Independent (z, eps) tasks on up to `threads` workers; results in input order.
std::vector<ScatteringCoefficients> zs_sweep(const InitialDataSpec& spec, const std::vector<double>& zs,
                                             const std::vector<double>& epsilons, int threads,
                                             const ZsSettings& settings = {});

}  // namespace ahs
