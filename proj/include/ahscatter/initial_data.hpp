#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ahscatter/numerics.hpp"

namespace ahs {

// Branch cut of x(z) attached to a log point: a vertical segment from z_star down to the real
// axis (log point inside E) or a vertical ray from z_star up to i*infinity (outside E).
struct LogCut {
    cplx z_star;
    bool upward = true;
    bool crosses(cplx p, cplx q) const;
    double distance(cplx z) const;
    ContourPath polyline(double top) const;
};

struct InitialDataSpec {
    std::string family_tag;
    double parameter = 0.0;
    std::function<cplx(cplx)> alpha;
    std::function<cplx(cplx)> alpha_prime;
    double mu_minus = 0.0;
    double mu_plus = 0.0;
    double decay_exponent = 2.0;
    double strip_height = 0.0;       // height L of the z-domain strip; <= 0 means default 1.1 max b
    double x_strip_halfwidth = 1.0;  // |Im x| bound of the analyticity strip in the x-plane
    std::function<cplx(cplx)> closed_form_inverse;  // optional
    std::vector<LogCut> cuts;
    bool even = false;  // alpha(-conj x) = -conj alpha(x)
};

struct RamificationPoint {
    enum class Kind { log_point_in_upper_halfplane, real_axis_limit, lower_halfplane };
    cplx x_star;
    cplx z_star;
    Kind kind;
};
const char* ramification_kind_name(RamificationPoint::Kind k);

cplx alpha_tilde(const InitialDataSpec& spec, cplx x);

// Evaluates alpha with a domain check.
cplx alpha_checked(const InitialDataSpec& spec, cplx x);

// x(z) on the sheet reached by continuation from the boundary arc. Real z is read as the limit
// from the upper half-plane.
cplx inverse_map(const InitialDataSpec& spec, cplx z, std::optional<cplx> seed = std::nullopt);

std::vector<RamificationPoint> ramification_points(const InitialDataSpec& spec, const Rect& region,
                                                   int grid = 64, double tol = 1e-10);

struct AssumptionCheck {
    std::string name;
    bool passed;
    double value;
    std::string detail;
};
struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    bool all_passed() const;
};
AssumptionReport validate_assumptions(const InitialDataSpec& spec, const std::vector<double>& x_grid);

InitialDataSpec builtin_family(const std::string& name, double parameter);

// Attaches the default log-point cuts (found by ramification_points) to a spec.
void attach_default_cuts(InitialDataSpec& spec);

// Samples of the boundary curve alpha(x), x in [-X, X].
std::vector<cplx> sigma_samples(const InitialDataSpec& spec, double X, int n);
bool inside_E(const InitialDataSpec& spec, cplx z);
double default_strip_height(const InitialDataSpec& spec);

// Bronski family: critical parameter where the two imaginary-axis ramification points collide.
struct CriticalPoint {
    double mu_star;
    cplx x_star;
    cplx z_star;
};
CriticalPoint bronski_critical_point(double tol = 1e-13);

// Real roots of the double-hump cubics u^3 + 4k^2 u + 4k and u^3 + 2k u^2 - 2k.
std::vector<double> double_hump_ramification_cubic_roots(double k);
std::vector<double> double_hump_zero_preimage_cubic_roots(double k);

}  // namespace ahs
