#include "ahscatter/sign_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ahs {

namespace {

void check_real_z(const InitialDataSpec& spec, double z) {
    if (!std::isfinite(z)) throw Error(ErrorKind::OutsideDomain, "z must be finite");
    for (const LogCut& c : spec.cuts)
        if (!c.upward && std::abs(z - c.z_star.real()) <= 1e-9 * std::max(1.0, std::abs(z)))
            throw Error(ErrorKind::OnCut, "z is the foot of a log-point cut");
}

// Preimage of real z; when the strip-restricted inverse fails, follows the root down from
// z + 0.01i to decide whether it has left the strip.
cplx preimage_checked(const InitialDataSpec& spec, double z) {
    cplx xz;
    try {
        xz = inverse_map(spec, z);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoConvergence) throw;
        std::optional<cplx> y;
        double eps = 1e-2;
        for (; eps < 2.0 && !y; eps *= 3) {
            try {
                y = inverse_map(spec, cplx(z, eps));
            } catch (const Error&) {
            }
        }
        if (!y) throw;
        try {
            for (eps *= 0.8; eps > 1e-9; eps *= 0.8)
                y = find_root([&](cplx u) { return spec.alpha(u) - cplx(z, eps); }, spec.alpha_prime, *y);
            y = find_root([&](cplx u) { return spec.alpha(u) - z; }, spec.alpha_prime, *y);
        } catch (const Error&) {
            throw e;
        }
        xz = *y;
    }
    if (std::abs(xz.imag()) > spec.x_strip_halfwidth * (1 + 1e-12))
        throw Error(ErrorKind::VerticalSegmentLeavesDomain, "x(z) lies outside the strip");
    return xz;
}

// Im of -int_{xz}^{x1} R dy along the straight segment, with R anchored at the real end x1.
double im_segment(const InitialDataSpec& spec, cplx xz, double x1, double z, const FieldSettings& s) {
    const cplx Rx = radical_R(spec, x1, z, {}, s);
    auto sq = [&spec, z](cplx y) { return radical_square(spec, y, z); };
    TrackedRoot tr(sq, {line_piece_sq_start(xz, cplx(x1, 0.0))}, Rx, true);
    return -tr.integrate([](cplx, cplx R) { return R; }, s.quad).value.imag();
}

double sgn(double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }

}  // namespace

double w_of_z(const InitialDataSpec& spec, double z, const FieldSettings& s, double* path_discrepancy) {
    check_real_z(spec, z);
    if (path_discrepancy) *path_discrepancy = 0.0;
    if (z == spec.mu_plus || z == spec.mu_minus) return 0.0;
    const cplx xz = preimage_checked(spec, z);
    if (std::abs(xz.imag()) <= 1e-14) return 0.0;  // x(z) real: the integrand is real
    const double sign = sgn(spec.mu_plus - z);
    double im_h;
    try {
        im_h = h_field_direct(spec, cplx(xz.real(), 0.0), z, s, xz).imag();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::PathCrossesCut || e.kind() == ErrorKind::OnCut)
            throw Error(ErrorKind::VerticalSegmentLeavesDomain, e.what());
        throw;
    }
    const double w = -sign * im_h;
    if (path_discrepancy) {
        try {
            const double alt = -sign * im_segment(spec, xz, xz.real() + 1.0, z, s);
            *path_discrepancy = std::abs(alt - w);
        } catch (const Error&) {
            *path_discrepancy = std::numeric_limits<double>::infinity();
        }
    }
    return w;
}

SufficientConditions sufficient_conditions(const InitialDataSpec& spec, double z, int samples) {
    if (!(z > spec.mu_plus || z < spec.mu_minus))
        throw Error(ErrorKind::OutsideDomain, "sufficient conditions need z > mu+ or z < mu-");
    check_real_z(spec, z);
    const cplx xz = preimage_checked(spec, z);
    const bool right = z > spec.mu_plus;
    // Angles are measured from the direction pointing away from [mu-, mu+].
    const cplx rot = right ? cplx(1.0) : cplx(-1.0);

    SufficientConditions out;
    double arg_margin = std::numeric_limits<double>::infinity();
    double vl_margin = std::numeric_limits<double>::infinity();
    const double H = std::abs(xz.imag());
    for (int k = 0; k <= samples; ++k) {
        // y runs over [x(z), conj x(z)]; the arg test only needs the upper half
        const double v = xz.imag() * (1.0 - 2.0 * k / double(samples));
        const cplx y(xz.real(), v);
        const cplx ay = spec.alpha(y);
        const double vl = right ? z - ay.real() : ay.real() - z;
        vl_margin = std::min(vl_margin, vl);
        if (2 * k <= samples) {
            const cplx ab = spec.alpha(std::conj(y));
            const double d = std::arg((z - ay) * rot) - std::arg((z - ab) * rot);
            arg_margin = std::min(arg_margin, pi - std::abs(d));
        }
    }
    constexpr double slack = 1e-12;
    out.arg_condition = {arg_margin >= -slack, arg_margin};
    const double inc = spec.x_strip_halfwidth - H;
    out.segment_inclusion = {inc >= -slack, inc};
    out.vertical_line_test = {vl_margin >= -slack, vl_margin};
    return out;
}

double w_separation_threshold(const InitialDataSpec& spec, double z) {
    const double d = z > spec.mu_plus ? z - spec.mu_plus : spec.mu_minus - z;
    return d < 0.5 ? 0.1 * d : 1e-3;
}

bool SignReport::certified() const {
    return w_ok && lambda_reaches_alpha && gamma_m_sign_ok && gamma_c_sign_ok && failures.empty();
}

// ---------------------------------------------------------------------------------------------
// Level curve of Im h

namespace {

struct ImH {
    const InitialDataSpec* spec;
    double x;
    FieldSettings s;
    double operator()(cplx z) const { return h_field(*spec, cplx(x, 0.0), z, s).imag(); }
};

// True when the segment p-q passes through the arc alpha((x, +inf)) (the z-cut of h) or a log cut.
bool crosses_cuts(const InitialDataSpec& spec, const std::vector<cplx>& arc, cplx p, cplx q) {
    for (const LogCut& c : spec.cuts)
        if (c.crosses(p, q)) return true;
    for (std::size_t k = 0; k + 1 < arc.size(); ++k)
        if (segments_intersect(p, q, arc[k], arc[k + 1])) return true;
    return false;
}

std::vector<cplx> arc_polyline(const InitialDataSpec& spec, double x, int n = 600) {
    const ArcParam a = sigma_arc(spec, x);
    std::vector<cplx> out;
    for (int k = 0; k <= n; ++k) out.push_back(a.point(a.y_alpha + (a.y_far - a.y_alpha) * k / double(n)));
    out.push_back(spec.mu_plus);
    return out;
}

}  // namespace

TraceResult trace_lambda(const InitialDataSpec& spec, double x, const CertifySettings& cs) {
    const ImH f{&spec, x, cs.field};
    const cplx alpha = spec.alpha(x);
    const std::vector<cplx> arc = arc_polyline(spec, x);

    // Seed: sign change of Im h on a small semicircle above mu+, away from the arc.
    std::optional<cplx> seed;
    cplx dir;
    for (double r : {0.05, 0.02, 0.1, 0.01}) {
        constexpr int N = 64;
        std::vector<double> th(N + 1), val(N + 1);
        for (int k = 0; k <= N; ++k) {
            th[k] = pi * (0.02 + 0.96 * k / double(N));
            try {
                val[k] = f(spec.mu_plus + r * std::exp(I * th[k]));
            } catch (const Error&) {
                val[k] = std::numeric_limits<double>::quiet_NaN();
            }
        }
        for (int k = 0; k < N && !seed; ++k) {
            if (!(std::isfinite(val[k]) && std::isfinite(val[k + 1])) || val[k] * val[k + 1] > 0) continue;
            const cplx p = spec.mu_plus + r * std::exp(I * th[k]);
            const cplx q = spec.mu_plus + r * std::exp(I * th[k + 1]);
            if (crosses_cuts(spec, arc, p, q)) continue;  // jump across the arc, not a zero
            double lo = th[k], hi = th[k + 1], flo = val[k];
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                const double fm = f(spec.mu_plus + r * std::exp(I * mid));
                if (fm * flo <= 0) hi = mid;
                else lo = mid, flo = fm;
            }
            const double t = 0.5 * (lo + hi);
            seed = spec.mu_plus + r * std::exp(I * t);
            dir = std::exp(I * t);
        }
        if (seed) break;
    }
    if (!seed) throw Error(ErrorKind::TraceStalled, "no zero of Im h found next to mu+");

    TraceSettings ts;
    ts.max_step = cs.trace_step;
    ts.min_step = 1e-5;
    ts.max_nodes = cs.max_nodes;
    ts.corrector_tol = 1e-10;
    ts.gradient_floor = 1e-12;
    ts.attractors = {alpha};
    ts.attractor_radius = std::max(2 * cs.trace_step, 0.02);
    ts.blocked = [&spec, &arc](cplx p, cplx q) { return crosses_cuts(spec, arc, p, q); };
    const double top = std::max(3.0, 3.0 * std::abs(alpha));
    const Rect box{spec.mu_minus - top, spec.mu_plus + top, 1e-9, top};
    TraceResult tr;
    try {
        tr = trace_implicit_curve(f, *seed, dir, 0.25 * cs.trace_step, box, ts);
    } catch (const Error& e) {
        throw Error(ErrorKind::TraceStalled, e.what());
    }
    tr.path.nodes.insert(tr.path.nodes.begin(), cplx(spec.mu_plus, 0.0));
    if (tr.stop == TraceStop::GradientCollapse)
        throw Error(ErrorKind::TraceStalled, "critical point of h on lambda (possible break)");
    return tr;
}

SignReport certify_genus_zero(const InitialDataSpec& spec, double x, const CertifySettings& cs) {
    SignReport rep;
    rep.x = x;
    const cplx alpha = spec.alpha(x);

    // w < 0 off [mu-, mu+]
    rep.w_ok = true;
    rep.w_margin = std::numeric_limits<double>::infinity();
    const int n = std::max(2, cs.w_grid / 2);
    for (int side = 0; side < 2; ++side) {
        for (int k = 1; k <= n; ++k) {
            const double d = cs.w_extent * k / double(n);
            const double z = side == 0 ? spec.mu_plus + d : spec.mu_minus - d;
            try {
                const double w = w_of_z(spec, z, cs.field);
                const double m = -w - w_separation_threshold(spec, z);
                rep.w_margin = std::min(rep.w_margin, m);
                if (m < 0) rep.w_ok = false;
            } catch (const Error& e) {
                if (e.kind() == ErrorKind::OnCut) continue;
                rep.w_ok = false;
                rep.failures.push_back(std::string("w: ") + e.what());
                break;
            }
        }
    }
    if (!rep.w_ok && rep.failures.empty()) rep.failures.push_back("w(z) not separated from zero");
    rep.sufficient_condition_used = "direct evaluation of w on the real grid";
    try {
        const SufficientConditions sc = sufficient_conditions(spec, spec.mu_plus + 0.5 * cs.w_extent);
        if (sc.segment_inclusion.holds) rep.sufficient_condition_used = "segment inclusion";
        else if (sc.vertical_line_test.holds) rep.sufficient_condition_used = "vertical line test";
        else if (sc.arg_condition.holds) rep.sufficient_condition_used = "argument condition";
    } catch (const Error&) {
    }

    // lambda
    try {
        const TraceResult tr = trace_lambda(spec, x, cs);
        rep.lambda_curve = tr.path;
        rep.lambda_reaches_alpha =
            tr.stop == TraceStop::ReachedAttractor && std::abs(tr.path.nodes.back() - alpha) <= 1e-4;
        if (!rep.lambda_reaches_alpha) {
            std::ostringstream os;
            os << "lambda stopped (" << trace_stop_name(tr.stop) << ") at " << tr.path.nodes.back();
            if (tr.stop == TraceStop::Blocked) os << ": intersects a branch cut";
            rep.failures.push_back(os.str());
        }
    } catch (const Error& e) {
        rep.failures.push_back(std::string("lambda: ") + e.what());
    }
    rep.lambda_cut_distance = std::numeric_limits<double>::infinity();
    for (const LogCut& c : spec.cuts)
        for (cplx p : rep.lambda_curve.nodes) rep.lambda_cut_distance = std::min(rep.lambda_cut_distance, c.distance(p));

    const ImH f{&spec, x, cs.field};
    // Sign of Im h next to lambda after moving the cut of h onto lambda: Im h < 0 on both sides.
    if (rep.lambda_reaches_alpha) {
        const std::vector<cplx> arc = arc_polyline(spec, x);
        std::vector<cplx> lens = rep.lambda_curve.nodes;
        for (auto it = arc.begin(); it != arc.end(); ++it) lens.push_back(*it);
        rep.gamma_m_sign_ok = true;
        const auto& nodes = rep.lambda_curve.nodes;
        const std::size_t m = nodes.size();
        for (int k = 1; k <= cs.sign_samples; ++k) {
            const std::size_t i = std::min(m - 2, std::max<std::size_t>(1, k * (m - 1) / (cs.sign_samples + 1)));
            const cplx t = nodes[i + 1] - nodes[i - 1];
            const cplx nrm = I * t / std::abs(t);
            for (double sd : {1.0, -1.0}) {
                const cplx z = nodes[i] + sd * cs.sign_offset * nrm;
                if (z.imag() <= 0) continue;
                try {
                    double v = f(z);
                    if (winding_number(lens, z) != 0) v = -v;  // between lambda and the arc
                    if (!(v < 0)) {
                        rep.gamma_m_sign_ok = false;
                        std::ostringstream os;
                        os << "Im h >= 0 next to lambda at " << z;
                        rep.failures.push_back(os.str());
                    }
                } catch (const Error& e) {
                    rep.gamma_m_sign_ok = false;
                    rep.failures.push_back(std::string("gamma_m sample: ") + e.what());
                }
            }
        }
    }

    // gamma_c: the boundary arc alpha(y), y < x, from alpha(x) to mu-
    bool monotone = true;
    for (int k = 0; k < 400 && monotone; ++k) {
        const double y0 = -12.0 + 24.0 * k / 400.0, y1 = -12.0 + 24.0 * (k + 1) / 400.0;
        if (spec.alpha(y1).real() < spec.alpha(y0).real() - 1e-14) monotone = false;
    }
    rep.gamma_c_certified = monotone;
    rep.gamma_c_sign_ok = true;
    for (int k = 1; k <= cs.sign_samples; ++k) {
        const double y = x - 6.0 * k / double(cs.sign_samples);
        const cplx z0 = spec.alpha(y);
        if (std::abs(z0 - spec.mu_minus) < 0.05 * std::abs(alpha - spec.mu_minus) ||
            std::abs(z0 - spec.mu_minus) < 1e-3)
            break;  // Im h vanishes at mu-
        const cplx t = spec.alpha_prime(y);
        const cplx nrm = I * t / std::abs(t);
        bool any_pos = false;
        for (double sd : {1.0, -1.0}) {
            const cplx z = z0 + sd * cs.sign_offset * std::abs(z0 - spec.mu_minus) * nrm;
            if (z.imag() <= 0) continue;
            try {
                if (f(z) > 0) any_pos = true;
            } catch (const Error&) {
            }
        }
        if (!any_pos) {
            rep.gamma_c_sign_ok = false;
            std::ostringstream os;
            os << "Im h <= 0 on both sides of gamma_c near " << z0;
            rep.failures.push_back(os.str());
            break;
        }
    }
    if (!monotone) rep.failures.push_back("a(x) not monotone: gamma_c sampled, not certified");
    return rep;
}

}  // namespace ahs
