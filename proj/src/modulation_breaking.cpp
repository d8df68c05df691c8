#include "ahscatter/modulation_breaking.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ahs {

namespace {

const InitialDataSpec& spec_of(const ScatteringData& sd) {
    if (!sd.spec) throw Error(ErrorKind::OutsideDomain, "moment loop needs the source initial data");
    return *sd.spec;
}

// Real y with alpha(y) closest to the target (grid scan plus golden refinement).
double nearest_boundary_param(const InitialDataSpec& spec, cplx target) {
    double best = 0.0, bd = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 2400; ++k) {
        const double y = -30.0 + 60.0 * k / 2400.0;
        const double d = std::abs(spec.alpha(y) - target);
        if (d < bd) bd = d, best = y;
    }
    double lo = best - 0.025, hi = best + 0.025;
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    auto f = [&](double y) { return std::abs(spec.alpha(y) - target); };
    for (int it = 0; it < 80; ++it) {
        const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
        if (f(a) < f(b)) hi = b;
        else lo = a;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

LoopContour moment_loop(const ScatteringData& sd, cplx alpha, const MomentSettings& ms) {
    const InitialDataSpec& spec = spec_of(sd);
    if (!(alpha.imag() > 0)) throw Error(ErrorKind::OutsideDomain, "alpha must lie in the upper half-plane");
    const double xr = nearest_boundary_param(spec, alpha);
    const ArcParam arc = bent_sigma_arc(spec, xr, alpha);
    std::vector<LogCut> cuts = sd.cuts;
    if (cuts.empty()) cuts = spec.cuts;
    return stadium_loop(arc, sd.mu_plus, ms.loop_distance, cuts, &spec);
}

std::pair<cplx, cplx> moment_integrals(const ScatteringData& sd, cplx alpha, const MomentSettings& ms) {
    const LoopContour loop = moment_loop(sd, alpha, ms);
    const TrackedRoot tr = loop.radical();
    const double a = alpha.real(), b = alpha.imag();
    const double K = sd.f0_at_mu_plus;
    // Integrated by parts against f0 - K, which vanishes at the pinch mu+:
    //   f0'/R -> (f0-K)(zeta-a)/R^3,  (zeta-a) f0'/R -> -b^2 (f0-K)/R^3.
    auto v = tr.integrate_pieces(
        [&](std::size_t k, double tau, cplx zeta, cplx R, cplx* out) {
            const auto h = loop.hint ? loop.hint(k, tau) : std::nullopt;
            const cplx F = sd.f0(zeta, h) - K;
            const cplx R3 = R * R * R;
            out[0] = F * (zeta - a) / R3;
            out[1] = -b * b * F / R3;
        },
        2, ms.quad);
    // the reflected lower half contributes -conj of the upper half
    const cplx m1 = (v[0] - std::conj(v[0])) / (2.0 * pi * I);
    const cplx m2 = (v[1] - std::conj(v[1])) / (2.0 * pi * I);
    return {m1, m2};
}

std::pair<double, double> moment_residuals(const ScatteringData& sd, cplx alpha, double x, double t,
                                           const MomentSettings& ms) {
    const auto [m1, m2] = moment_integrals(sd, alpha, ms);
    if (std::abs(m1.imag()) > 1e-9 || std::abs(m2.imag()) > 1e-9)
        throw Error(ErrorKind::NoConvergence, "moment integrals are not real");
    const double a = alpha.real(), b = alpha.imag();
    return {m1.real() - (x + 4.0 * t * a), m2.real() + 2.0 * t * b * b};
}

// ---------------------------------------------------------------------------------------------
// Continuation

namespace {

struct Jac {
    double j11, j12, j21, j22;
    double det() const { return j11 * j22 - j12 * j21; }
    double smallest_singular() const {
        const double fro2 = j11 * j11 + j12 * j12 + j21 * j21 + j22 * j22;
        const double d = std::abs(det());
        const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * d * d));
        return std::sqrt(std::max(0.0, 0.5 * (fro2 - disc)));
    }
    std::pair<double, double> solve(double r1, double r2) const {
        const double d = det();
        return {(j22 * r1 - j12 * r2) / d, (-j21 * r1 + j11 * r2) / d};
    }
};

Jac jacobian(const ScatteringData& sd, cplx alpha, double x, double t, std::pair<double, double> r0,
             const MomentSettings& ms) {
    const double h = 1e-6 * std::max(1.0, std::abs(alpha));
    const auto ra = moment_residuals(sd, alpha + h, x, t, ms);
    const auto rb = moment_residuals(sd, alpha + I * h, x, t, ms);
    return {(ra.first - r0.first) / h, (rb.first - r0.first) / h, (ra.second - r0.second) / h,
            (rb.second - r0.second) / h};
}

double rnorm(std::pair<double, double> r) { return std::hypot(r.first, r.second); }

// Chord Newton at fixed (x,t); returns the solved state or nullopt.
std::optional<ModulationState> newton(const ScatteringData& sd, cplx guess, double x, double t,
                                      const ContinuationSettings& cs) {
    cplx al = guess;
    auto r = moment_residuals(sd, al, x, t, cs.moments);
    if (rnorm(r) <= cs.residual_tol) return ModulationState{x, t, al, r};
    const Jac J = jacobian(sd, al, x, t, r, cs.moments);
    if (J.smallest_singular() < cs.jacobian_floor)
        throw Error(ErrorKind::JacobianSingular, "moment Jacobian is singular");
    double prev = rnorm(r);
    for (int it = 0; it < cs.max_newton; ++it) {
        const auto [da, db] = J.solve(r.first, r.second);
        al -= cplx(da, db);
        if (!(al.imag() > 0)) return std::nullopt;
        r = moment_residuals(sd, al, x, t, cs.moments);
        const double n = rnorm(r);
        if (n <= cs.residual_tol) return ModulationState{x, t, al, r};
        if (!(n < 0.9 * prev)) return std::nullopt;
        prev = n;
    }
    return std::nullopt;
}

}  // namespace

cplx alpha_x_implicit(const ScatteringData& sd, const ModulationState& s, const ContinuationSettings& cs) {
    const Jac J = jacobian(sd, s.alpha, s.x, s.t, s.residual, cs.moments);
    // r1 depends on x through -x only
    const auto [ax, bx] = J.solve(1.0, 0.0);
    return {ax, bx};
}

std::vector<ModulationState> continue_alpha(const ScatteringData& sd, double x, double t_target,
                                            cplx seed, double t_step, const ContinuationSettings& cs) {
    if (!(t_target >= 0) || !(t_step > 0)) throw Error(ErrorKind::OutsideDomain, "need t_target >= 0, t_step > 0");
    auto s0 = newton(sd, seed, x, 0.0, cs);
    if (!s0) throw Error(ErrorKind::NoConvergence, "seed does not solve the t = 0 moment conditions");
    return continue_from_state(sd, *s0, t_target, t_step, cs);
}

std::vector<ModulationState> continue_from_state(const ScatteringData& sd, const ModulationState& start,
                                                 double t_target, double t_step,
                                                 const ContinuationSettings& cs) {
    if (!(t_step > 0)) throw Error(ErrorKind::OutsideDomain, "need t_step > 0");
    const double x = start.x;
    std::vector<ModulationState> out{start};
    double h = t_step;
    while (out.back().t < t_target) {
        const ModulationState& cur = out.back();
        const double tn = std::min(t_target, cur.t + h);
        cplx guess = cur.alpha;
        if (out.size() >= 2) {
            const ModulationState& prev = out[out.size() - 2];
            guess += (cur.alpha - prev.alpha) * ((tn - cur.t) / (cur.t - prev.t));
        }
        auto next = newton(sd, guess, x, tn, cs);
        if (!next) {
            h *= 0.5;
            if (h < cs.min_step) {
                std::ostringstream os;
                os << "continuation step below " << cs.min_step << " at t = " << cur.t;
                throw Error(ErrorKind::StepUnderflow, os.str());
            }
            continue;
        }
        out.push_back(*next);
        h = std::min(t_step, 1.5 * h);
    }
    return out;
}

// ---------------------------------------------------------------------------------------------
// Breaking

const char* break_kind_name(BreakReport::Kind k) {
    switch (k) {
        case BreakReport::Kind::double_point: return "double_point";
        case BreakReport::Kind::triple_point: return "triple_point";
        case BreakReport::Kind::singular_break: return "singular_break";
    }
    return "?";
}

cplx leading_coefficient(cplx alpha, cplx alpha_x) {
    return std::sqrt(2.0 * I * alpha.imag()) / (3.0 * alpha_x);
}

namespace {

// Zero of h_z (away from alpha) near the arcs, or nullopt.
std::optional<cplx> find_double_point(const ScatteringData& sd, const ModulationState& st,
                                      const BreakScanSettings& bs) {
    const InitialDataSpec& spec = spec_of(sd);
    const LoopContour loop = moment_loop(sd, st.alpha, bs.continuation.moments);
    auto hz = [&](cplx z) { return plemelj_h_z(sd, loop, st.x, z, st.t, bs.continuation.moments.quad); };
    const ArcParam& arc = loop.arc;
    std::vector<cplx> samples;
    const int n = bs.double_point_samples;
    for (int k = 1; k <= n; ++k) {
        // main arc proxy, offset to both sides
        const double y = arc.y_alpha + (arc.y_far - arc.y_alpha) * std::pow(k / double(n + 1), 2);
        const cplx p = arc.point(y), tg = arc.deriv(y);
        const cplx nrm = I * tg / std::abs(tg);
        const double off = 0.3 * loop.distance;
        samples.push_back(p + off * nrm);
        samples.push_back(p - off * nrm);
        // complementary arc proxy: boundary arc towards mu-
        const double yc = arc.y_alpha - 4.0 * k / double(n);
        samples.push_back(spec.alpha(yc) + cplx(0.0, 0.02));
    }
    double best = std::numeric_limits<double>::infinity();
    cplx best_z;
    for (cplx z : samples) {
        if (std::abs(z - st.alpha) < 2e-2 || z.imag() <= 0) continue;
        try {
            const double v = std::abs(hz(z));
            if (v < best) best = v, best_z = z;
        } catch (const Error&) {
        }
    }
    if (!std::isfinite(best)) return std::nullopt;
    try {
        RootSettings rs;
        rs.residual_tol = bs.double_point_tol;
        rs.max_iterations = 30;
        const cplx zb = find_root(hz, best_z, rs);
        if (std::abs(zb - st.alpha) >= 1e-2 && std::abs(zb - best_z) < 0.1 && std::abs(hz(zb)) <= bs.double_point_tol)
            return zb;
    } catch (const Error&) {
    }
    return std::nullopt;
}

// Marches from a solved state towards a stall at t_fail with shrinking steps, recording the
// implicit alpha_x at the closest state reached. True once both triple-point thresholds hold.
bool approach_stall(const ScatteringData& sd, ModulationState cur, double t_fail, const BreakScanSettings& bs,
                    BreakReport& r) {
    ContinuationSettings fine = bs.continuation;
    double dt = 0.5 * (t_fail - cur.t);
    for (int iter = 0; iter < 400 && dt > 1e-14; ++iter) {
        fine.min_step = 0.25 * dt;
        try {
            cur = continue_from_state(sd, cur, cur.t + dt, dt, fine).back();
        } catch (const Error&) {
            dt *= 0.5;
            continue;
        }
        try {
            const cplx ax = alpha_x_implicit(sd, cur, fine);
            r.t_b = cur.t;
            r.z_b = cur.alpha;
            r.alpha_x_magnitude = std::abs(ax);
            r.leading_coeff = leading_coefficient(cur.alpha, ax);
        } catch (const Error&) {
            return false;
        }
        if (r.alpha_x_magnitude >= bs.alpha_x_threshold && std::abs(r.leading_coeff) <= bs.coeff_threshold)
            return true;
    }
    return false;
}

}  // namespace

std::vector<BreakReport> detect_break(const ScatteringData& sd, const std::vector<double>& x_grid,
                                      const std::vector<double>& t_grid, const BreakScanSettings& bs) {
    const InitialDataSpec& spec = spec_of(sd);
    const std::size_t nx = x_grid.size(), nt = t_grid.size();
    if (nx == 0 || nt == 0) return {};
    std::vector<std::vector<std::optional<ModulationState>>> grid(nx, std::vector<std::optional<ModulationState>>(nt));
    std::vector<std::optional<BreakReport>> first(nx);

    auto consider = [&](std::size_t i, const BreakReport& r) {
        if (!first[i] || r.t_b < first[i]->t_b) first[i] = r;
    };

    for (std::size_t i = 0; i < nx; ++i) {
        const double x = x_grid[i];
        const cplx al = spec.alpha(x);
        std::optional<ModulationState> prev_state;
        for (std::size_t k = 0; k < nt; ++k) {
            const double t = t_grid[k];
            try {
                if (!prev_state) {
                    const auto s0 = continue_alpha(sd, x, 0.0, al, 1.0, bs.continuation);
                    prev_state = s0.back();
                }
                const double span = std::max(t - prev_state->t, 1e-12);
                grid[i][k] = continue_from_state(sd, *prev_state, t, span, bs.continuation).back();
            } catch (const Error& e) {
                BreakReport r;
                r.x_b = x;
                r.t_b = t;
                r.z_b = prev_state ? prev_state->alpha : al;
                if (e.kind() == ErrorKind::JacobianSingular || e.kind() == ErrorKind::StepUnderflow) {
                    r.kind = BreakReport::Kind::singular_break;
                    r.note = std::string("continuation stalled: ") + e.what();
                    if (prev_state && approach_stall(sd, *prev_state, t, bs, r)) {
                        r.kind = BreakReport::Kind::triple_point;
                        r.alpha_x_cell_t = r.coeff_cell_t = int(k);
                    } else {
                        r.note += "; triple-point thresholds not reached";
                    }
                } else {
                    r.kind = BreakReport::Kind::singular_break;
                    r.note = e.what();
                }
                consider(i, r);
                break;
            }
            const ModulationState& st = *grid[i][k];
            for (const LogCut& c : spec.cuts)
                if (std::abs(st.alpha - c.z_star) < 1e-3) {
                    BreakReport r;
                    r.kind = BreakReport::Kind::singular_break;
                    r.x_b = x, r.t_b = t, r.z_b = st.alpha;
                    r.note = "alpha reached a log point";
                    consider(i, r);
                }
            if (bs.monitor_double_points && t > 0) {
                if (auto zb = find_double_point(sd, st, bs)) {
                    BreakReport r;
                    r.kind = BreakReport::Kind::double_point;
                    r.x_b = x, r.t_b = t, r.z_b = *zb;
                    consider(i, r);
                }
            }
            prev_state = st;
        }
    }

    // Grid proxy for alpha_x and the leading coefficient.
    for (std::size_t i = 0; i < nx; ++i) {
        int ax_cell = -1, co_cell = -1;
        double ax_mag = 0.0;
        cplx coeff;
        for (std::size_t k = 0; k < nt; ++k) {
            if (!grid[i][k]) break;
            const std::size_t il = i > 0 && grid[i - 1][k] ? i - 1 : i;
            const std::size_t ir = i + 1 < nx && grid[i + 1][k] ? i + 1 : i;
            if (il == ir) continue;
            const cplx ax = (grid[ir][k]->alpha - grid[il][k]->alpha) / (x_grid[ir] - x_grid[il]);
            const cplx co = leading_coefficient(grid[i][k]->alpha, ax);
            if (ax_cell < 0 && std::abs(ax) >= bs.alpha_x_threshold) ax_cell = int(k), ax_mag = std::abs(ax), coeff = co;
            if (co_cell < 0 && std::abs(co) <= bs.coeff_threshold) co_cell = int(k);
        }
        if (ax_cell >= 0) {
            BreakReport r;
            r.kind = BreakReport::Kind::triple_point;
            r.x_b = x_grid[i];
            r.t_b = t_grid[ax_cell];
            r.z_b = grid[i][ax_cell]->alpha;
            r.alpha_x_magnitude = ax_mag;
            r.leading_coeff = coeff;
            r.alpha_x_cell_t = ax_cell;
            r.coeff_cell_t = co_cell;
            consider(i, r);
        }
    }

    std::vector<BreakReport> out;
    for (auto& r : first)
        if (r) out.push_back(*r);
    return out;
}

}  // namespace ahs
