#include "ahscatter/initial_data.hpp"

#include <gsl/gsl_poly.h>

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <numeric>
#include <sstream>

namespace ahs {

const char* ramification_kind_name(RamificationPoint::Kind k) {
    switch (k) {
        case RamificationPoint::Kind::log_point_in_upper_halfplane: return "log_point_in_upper_halfplane";
        case RamificationPoint::Kind::real_axis_limit: return "real_axis_limit";
        case RamificationPoint::Kind::lower_halfplane: return "lower_halfplane";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------------------------
// Cuts

bool LogCut::crosses(cplx p, cplx q) const {
    const double xr = z_star.real();
    if ((p.real() - xr) * (q.real() - xr) > 0) return false;
    if (p.real() == q.real()) {
        if (p.real() != xr) return false;
        const double lo = std::min(p.imag(), q.imag()), hi = std::max(p.imag(), q.imag());
        return upward ? hi >= z_star.imag() : (lo <= z_star.imag() && hi >= 0);
    }
    const double t = (xr - p.real()) / (q.real() - p.real());
    const double y = p.imag() + t * (q.imag() - p.imag());
    return upward ? y >= z_star.imag() : (y <= z_star.imag() && y >= 0);
}

double LogCut::distance(cplx z) const {
    const cplx top = upward ? cplx(z_star.real(), std::max(z.imag(), z_star.imag())) : z_star;
    const cplx bot = upward ? z_star : cplx(z_star.real(), 0.0);
    return distance_to_segment(z, bot, top);
}

ContourPath LogCut::polyline(double top) const {
    ContourPath p;
    if (upward)
        p.nodes = {z_star, cplx(z_star.real(), std::max(top, z_star.imag() + 1.0))};
    else
        p.nodes = {z_star, cplx(z_star.real(), 0.0)};
    return p;
}

// ---------------------------------------------------------------------------------------------

cplx alpha_checked(const InitialDataSpec& spec, cplx x) {
    if (!finite(x) || std::abs(x.imag()) > spec.x_strip_halfwidth * (1 + 1e-12) + 1e-12) {
        std::ostringstream os;
        os << "x = " << x << " outside the analyticity strip";
        throw Error(ErrorKind::OutsideDomain, os.str());
    }
    const cplx a = spec.alpha(x);
    if (!finite(a)) throw Error(ErrorKind::OutsideDomain, "alpha not finite (pole)");
    return a;
}

cplx alpha_tilde(const InitialDataSpec& spec, cplx x) {
    return std::conj(alpha_checked(spec, std::conj(x)));
}

std::vector<cplx> sigma_samples(const InitialDataSpec& spec, double X, int n) {
    std::vector<cplx> s(n);
    for (int k = 0; k < n; ++k) s[k] = spec.alpha(-X + 2 * X * k / double(n - 1));
    return s;
}

bool inside_E(const InitialDataSpec& spec, cplx z) {
    auto up = sigma_samples(spec, 40.0, 4001);
    std::vector<cplx> poly = up;
    for (auto it = up.rbegin(); it != up.rend(); ++it) poly.push_back(std::conj(*it));
    return winding_number(poly, z) != 0;
}

double default_strip_height(const InitialDataSpec& spec) {
    double m = 0;
    for (int k = 0; k <= 4000; ++k) m = std::max(m, spec.alpha(-20.0 + 0.01 * k).imag());
    return 1.1 * m;
}

// ---------------------------------------------------------------------------------------------
// Inverse map

namespace {

bool continue_along(const InitialDataSpec& spec, cplx x0, cplx w0, cplx z, cplx& out) {
    cplx x = x0, w = w0;
    double s = 0, h = 0.05;
    const double lim = spec.x_strip_halfwidth + 1e-9;
    while (s < 1.0) {
        const double sn = std::min(1.0, s + h);
        const cplx wn = w0 + (z - w0) * sn;
        const cplx d0 = spec.alpha_prime(x);
        bool ok = finite(d0) && std::abs(d0) > 1e-14;
        cplx xn = ok ? x + (wn - w) / d0 : x;
        const cplx pred = xn;
        if (ok) {
            ok = false;
            for (int it = 0; it < 20; ++it) {
                const cplx r = spec.alpha(xn) - wn;
                if (!finite(r)) break;
                if (std::abs(r) <= 1e-14 * std::max(1.0, std::abs(wn))) {
                    ok = true;
                    break;
                }
                const cplx d = spec.alpha_prime(xn);
                if (!finite(d) || std::abs(d) < 1e-14) break;
                xn -= r / d;
            }
            ok = ok && std::abs(xn.imag()) <= lim &&
                 std::abs(xn - pred) <= 0.2 * std::abs(xn - x) + 1e-12;
        }
        if (ok) {
            x = xn;
            w = wn;
            s = sn;
            h = std::min(0.25, h * 1.5);
        } else {
            h *= 0.5;
            if (h < 1e-7) return false;
        }
    }
    out = x;
    return true;
}

}  // namespace

cplx inverse_map(const InitialDataSpec& spec, cplx z, std::optional<cplx> seed) {
    if (!finite(z) || z.imag() < 0)
        throw Error(ErrorKind::OutsideDomain, "inverse map is defined on the closed upper half-plane");
    for (const auto& c : spec.cuts)
        if (std::abs(z - c.z_star) < 1e-10) throw Error(ErrorKind::AtLogPoint, "z is a log point");

    // real z: limit from the upper half-plane
    const cplx ze = z.imag() == 0 ? cplx(z.real(), 1e-30 * std::max(1.0, std::abs(z))) : z;
    const double tol = 1e-12 * std::max(1.0, std::abs(z));
    if (seed) {
        try {
            RootSettings rs;
            rs.residual_tol = tol;
            const cplx x = find_root([&](cplx y) { return spec.alpha(y) - z; }, spec.alpha_prime, *seed, rs);
            if (std::abs(x.imag()) <= spec.x_strip_halfwidth + 1e-9) return x;
        } catch (const Error&) {
        }
    }
    if (spec.closed_form_inverse) {
        const cplx x = spec.closed_form_inverse(ze);
        if (finite(x)) return x;
    }

    constexpr int N = 1201;
    constexpr double X = 30.0;
    std::vector<double> xs(N);
    std::vector<cplx> ws(N);
    std::vector<double> dist(N);
    for (int k = 0; k < N; ++k) {
        xs[k] = -X + 2 * X * k / double(N - 1);
        ws[k] = spec.alpha(xs[k]);
        dist[k] = std::abs(ws[k] - z);
    }
    std::vector<int> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist[a] < dist[b]; });

    int tried = 0;
    for (int k : order) {
        const cplx w0 = ws[k];
        bool blocked = false;
        for (const auto& c : spec.cuts)
            if (c.crosses(w0, z)) blocked = true;
        for (double mu : {spec.mu_minus, spec.mu_plus}) {
            const double lim = 0.5 * std::min(std::abs(z - mu), std::abs(w0 - mu));
            if (distance_to_segment(mu, w0, z) < lim) blocked = true;
        }
        if (blocked) continue;
        cplx x;
        if (continue_along(spec, xs[k], w0, z, x)) {
            RootSettings rs;
            rs.residual_tol = tol;
            try {
                x = find_root([&](cplx y) { return spec.alpha(y) - z; }, spec.alpha_prime, x, rs);
            } catch (const Error&) {
            }
            return x;
        }
        if (++tried > 40) break;
    }
    throw Error(ErrorKind::NoConvergence, "continuation of the inverse map failed");
}

// ---------------------------------------------------------------------------------------------
// Ramification points

std::vector<RamificationPoint> ramification_points(const InitialDataSpec& spec, const Rect& region,
                                                   int grid, double tol) {
    if (region.im_min < -spec.x_strip_halfwidth - 1e-12 || region.im_max > spec.x_strip_halfwidth + 1e-12)
        throw Error(ErrorKind::RegionOutsideDomain, "search region leaves the analyticity strip");
    const auto& ap = spec.alpha_prime;
    auto app = [&](cplx x) {
        const double h = 1e-5 * std::max(1.0, std::abs(x));
        return (ap(x + h) - ap(x - h)) / (2 * h);
    };
    const double dx = (region.re_max - region.re_min) / grid;
    const double dy = (region.im_max - region.im_min) / grid;
    std::vector<cplx> seeds;
    // argument principle on each cell boundary
    for (int i = 0; i < grid; ++i)
        for (int j = 0; j < grid; ++j) {
            const cplx c0(region.re_min + i * dx, region.im_min + j * dy);
            const cplx corners[4] = {c0, c0 + dx, c0 + cplx(dx, dy), c0 + cplx(0, dy)};
            double turn = 0;
            bool bad = false;
            cplx prev = ap(corners[0]);
            for (int e = 0; e < 4 && !bad; ++e)
                for (int m = 1; m <= 8; ++m) {
                    const cplx p = corners[e] + (corners[(e + 1) % 4] - corners[e]) * (m / 8.0);
                    const cplx v = ap(p);
                    if (!finite(v) || v == 0.0) {
                        bad = true;
                        break;
                    }
                    turn += std::arg(v / prev);
                    prev = v;
                }
            const cplx centre = c0 + cplx(0.5 * dx, 0.5 * dy);
            if (bad || std::lround(turn / (2 * pi)) > 0) seeds.push_back(centre);
        }
    for (int i = 0; i < 16; ++i)
        for (int j = 0; j < 16; ++j)
            seeds.emplace_back(region.re_min + (i + 0.5) * (region.re_max - region.re_min) / 16,
                               region.im_min + (j + 0.5) * (region.im_max - region.im_min) / 16);

    std::vector<RamificationPoint> out;
    RootSettings rs;
    rs.residual_tol = tol;
    rs.max_iterations = 80;
    for (const cplx s : seeds) {
        cplx x;
        try {
            x = find_root(ap, app, s, rs);
        } catch (const Error&) {
            continue;
        }
        if (!region.contains(x)) continue;
        bool dup = false;
        for (const auto& r : out)
            if (std::abs(r.x_star - x) < 1e-7) dup = true;
        if (dup) continue;
        // polish once more to the tolerance floor of the map
        RamificationPoint rp;
        rp.x_star = x;
        rp.z_star = spec.alpha(x);
        const double yz = rp.z_star.imag();
        rp.kind = yz > 1e-12 ? RamificationPoint::Kind::log_point_in_upper_halfplane
                 : yz >= -1e-12 ? RamificationPoint::Kind::real_axis_limit
                                : RamificationPoint::Kind::lower_halfplane;
        out.push_back(rp);
    }
    std::sort(out.begin(), out.end(), [](const RamificationPoint& a, const RamificationPoint& b) {
        return a.x_star.real() != b.x_star.real() ? a.x_star.real() < b.x_star.real()
                                                  : a.x_star.imag() < b.x_star.imag();
    });
    return out;
}

void attach_default_cuts(InitialDataSpec& spec) {
    spec.cuts.clear();
    const double w = spec.x_strip_halfwidth * (1 - 1e-6);
    auto pts = ramification_points(spec, Rect{-8.0, 8.0, -w, w});
    auto sig = sigma_samples(spec, 40.0, 4001);
    for (const auto& p : pts) {
        if (p.kind != RamificationPoint::Kind::log_point_in_upper_halfplane) continue;
        if (distance_to_polyline(p.z_star, sig) < 1e-8) continue;  // degenerate: on the boundary arc
        LogCut c;
        c.z_star = p.z_star;
        c.upward = !inside_E(spec, p.z_star);
        spec.cuts.push_back(c);
    }
}

// ---------------------------------------------------------------------------------------------
// Assumption checks

bool AssumptionReport::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const AssumptionCheck& c) { return c.passed; });
}

AssumptionReport validate_assumptions(const InitialDataSpec& spec, const std::vector<double>& x_grid) {
    AssumptionReport rep;
    if (x_grid.size() < 4) {
        rep.checks.push_back({"grid", false, double(x_grid.size()), "grid needs at least 4 points"});
        return rep;
    }
    double bmin = INFINITY, apmin = INFINITY;
    for (double x : x_grid) {
        const cplx a = spec.alpha(x);
        bmin = std::min(bmin, a.imag());
        apmin = std::min(apmin, std::abs(spec.alpha_prime(x)));
    }
    rep.checks.push_back({"A1_positive_b", bmin > 0, bmin, "min of b over the grid"});
    rep.checks.push_back({"A2_alpha_prime_nonzero", apmin > 1e-10, apmin, "min |alpha'| over the grid"});

    const double lo = *std::min_element(x_grid.begin(), x_grid.end());
    const double hi = *std::max_element(x_grid.begin(), x_grid.end());
    std::vector<cplx> curve;
    for (int k = 0; k < 2001; ++k) curve.push_back(spec.alpha(lo + (hi - lo) * k / 2000.0));
    const std::size_t n = curve.size();
    for (std::size_t k = n; k-- > 0;) curve.push_back(std::conj(curve[k]));
    int crossings = 0;
    const std::size_t m = curve.size();
    for (std::size_t i = 0; i + 1 < m; ++i)
        for (std::size_t j = i + 2; j + 1 < m; ++j) {
            if (i == 0 && j + 2 == m) continue;
            if (segments_intersect(curve[i], curve[i + 1], curve[j], curve[j + 1])) ++crossings;
        }
    rep.checks.push_back({"A2_no_self_intersection", crossings == 0, double(crossings),
                          "segment crossings of the sampled boundary curve"});

    const double p = spec.decay_exponent;
    auto decay = [&](double x) {
        const cplx a = spec.alpha(x);
        const double mu = x > 0 ? spec.mu_plus : spec.mu_minus;
        return std::pow(std::abs(x), p) * std::max(std::abs(a.real() - mu), std::abs(a.imag()));
    };
    const double d_end = std::max(decay(lo), decay(hi));
    const double d_mid = std::max(decay(0.5 * lo), decay(0.5 * hi));
    rep.checks.push_back({"A4_decay", p > 1 && d_end < 1e-3 && d_end <= d_mid, d_end,
                          "|x|^p max(|a-mu|, b) at the grid ends"});
    const double xl = std::max(std::abs(lo), std::abs(hi));
    const double lim = std::abs((spec.alpha(xl) - spec.mu_plus) * xl);
    rep.checks.push_back({"xliminf", lim < 1e-3, lim, "|(u - mu+) x(u)| at the grid end"});
    return rep;
}

// ---------------------------------------------------------------------------------------------
// Built-in families

namespace {

InitialDataSpec family_evaluators(const std::string& name, double par) {
    InitialDataSpec s;
    s.family_tag = name;
    s.parameter = par;
    if (name == "sech_family" || name == "sech") {
        if (!(par > 0)) throw Error(ErrorKind::ParameterOutOfRange, "sech family needs mu > 0");
        const double h = par / 2;
        s.family_tag = "sech_family";
        s.alpha = [h](cplx x) { return (h * std::sinh(x) + I) / std::cosh(x); };
        s.alpha_prime = [h](cplx x) {
            const cplx c = std::cosh(x);
            return (h - I * std::sinh(x)) / (c * c);
        };
        s.mu_minus = -h;
        s.mu_plus = h;
        s.x_strip_halfwidth = pi / 2;
        s.even = true;
        const double T2 = h * h - 1;
        s.closed_form_inverse = [h, T2](cplx z) {
            const cplx sq = z * std::sqrt(1.0 - T2 / (z * z));
            return std::atanh((z * z + 1.0) / (h * z + sq));
        };
    } else if (name == "bronski") {
        if (!(par >= 0)) throw Error(ErrorKind::ParameterOutOfRange, "bronski family needs mu >= 0");
        const double mu = par;
        s.alpha = [mu](cplx x) {
            const cplx c = std::cosh(2.0 * x);
            return (mu * std::sinh(2.0 * x) + I * c) / (c * c);
        };
        s.alpha_prime = [mu](cplx x) {
            const cplx c = std::cosh(2.0 * x);
            return -(mu * std::cosh(4.0 * x) + I * std::sinh(4.0 * x) - 3.0 * mu) / (c * c * c);
        };
        s.mu_minus = s.mu_plus = 0.0;
        s.x_strip_halfwidth = pi / 4;
        s.even = true;
    } else if (name == "double_hump") {
        if (!(par >= 0 && par <= 1))
            throw Error(ErrorKind::ParameterOutOfRange, "double hump needs k in [0,1]");
        const double k = par;
        s.alpha = [k](cplx x) {
            const cplx sech = 1.0 / std::cosh(x);
            return std::tanh(x) + I * (sech - k * sech * sech);
        };
        s.alpha_prime = [k](cplx x) {
            const cplx c = std::cosh(x);
            return (1.0 - I * std::sinh(x) + 2.0 * I * k * std::tanh(x)) / (c * c);
        };
        s.mu_minus = -1;
        s.mu_plus = 1;
        s.x_strip_halfwidth = pi / 2;
        s.even = true;
    } else {
        throw Error(ErrorKind::ParameterOutOfRange, "unknown family '" + name + "'");
    }
    return s;
}

}  // namespace

InitialDataSpec builtin_family(const std::string& name, double par) {
    InitialDataSpec s = family_evaluators(name, par);
    s.strip_height = default_strip_height(s);
    attach_default_cuts(s);
    return s;
}

// ---------------------------------------------------------------------------------------------
// Bronski critical point

CriticalPoint bronski_critical_point(double tol) {
    // alpha'(i eta) is real for even data; two zeros on (-pi/4, 0) exist while its minimum is < 0.
    auto min_on_axis = [](double mu, double* eta_at) {
        auto spec = family_evaluators("bronski", mu);
        auto phi = [&](double eta) { return spec.alpha_prime(cplx(0, eta)).real(); };
        auto r = boost::math::tools::brent_find_minima(phi, -pi / 4 + 1e-3, 0.0, 60);
        if (eta_at) *eta_at = r.first;
        return r.second;
    };
    double lo = 0.05, hi = 1.0;  // collision inside
    if (!(min_on_axis(lo, nullptr) < 0 && min_on_axis(hi, nullptr) > 0))
        throw Error(ErrorKind::NoConvergence, "critical parameter not bracketed");
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        (min_on_axis(mid, nullptr) < 0 ? lo : hi) = mid;
    }
    CriticalPoint cp;
    cp.mu_star = 0.5 * (lo + hi);
    double eta = 0;
    min_on_axis(cp.mu_star, &eta);
    cp.x_star = cplx(0, eta);
    cp.z_star = family_evaluators("bronski", cp.mu_star).alpha(cp.x_star);
    return cp;
}

// ---------------------------------------------------------------------------------------------
// Double hump cubics

namespace {
std::vector<double> cubic_real_roots(double a, double b, double c) {
    double r[3];
    const int n = gsl_poly_solve_cubic(a, b, c, &r[0], &r[1], &r[2]);
    return std::vector<double>(r, r + n);
}
}  // namespace

std::vector<double> double_hump_ramification_cubic_roots(double k) {
    return cubic_real_roots(0.0, 4 * k * k, 4 * k);
}

std::vector<double> double_hump_zero_preimage_cubic_roots(double k) {
    return cubic_real_roots(2 * k, 0.0, -2 * k);
}

}  // namespace ahs
