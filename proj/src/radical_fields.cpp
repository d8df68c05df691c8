#include "ahscatter/radical_fields.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace ahs {

cplx ScatteringData::f0(cplx z, std::optional<cplx> hint) const {
    if (z.imag() < 0) return std::conj(f0_eval(std::conj(z), hint));
    return f0_eval(z, hint);
}

cplx ScatteringData::f0_prime(cplx z, std::optional<cplx> hint) const {
    if (z.imag() < 0) return std::conj(f0_prime_eval(std::conj(z), hint));
    return f0_prime_eval(z, hint);
}

cplx radical_square(const InitialDataSpec& spec, cplx y, cplx z) {
    return (z - spec.alpha(y)) * (z - alpha_tilde(spec, y));
}

namespace {

struct RayGeometry {
    double d;   // +1 right, -1 left
    double mu;  // mu+ or mu-
};

RayGeometry geometry(const InitialDataSpec& spec, Side side) {
    return side == Side::Right ? RayGeometry{1.0, spec.mu_plus} : RayGeometry{-1.0, spec.mu_minus};
}

cplx pick_near(cplx sq, cplx target) {
    const cplx r = std::sqrt(sq);
    return std::abs(r - target) <= std::abs(r + target) ? r : -r;
}

// z - alpha(y) and z - alpha~(y); near a root y0 of z - alpha the first factor is formed from
// the residual at y0 and a midpoint derivative, avoiding cancellation.
struct Factors {
    const InitialDataSpec* spec;
    cplx z;
    std::optional<cplx> y0;
    cplx res0 = 0.0;

    Factors(const InitialDataSpec& s, cplx z_, std::optional<cplx> root = std::nullopt)
        : spec(&s), z(z_), y0(root) {
        if (y0) res0 = z - s.alpha(*y0);
    }
    std::pair<cplx, cplx> operator()(cplx y) const {
        cplx u;
        if (y0 && std::abs(y - *y0) < 1e-4)
            u = res0 - spec->alpha_prime(0.5 * (y + *y0)) * (y - *y0);
        else
            u = z - spec->alpha(y);
        return {u, z - alpha_tilde(*spec, y)};
    }
    cplx square(cplx y) const {
        const auto [u, v] = (*this)(y);
        return u * v;
    }
};

// Integrands [R + d(z-mu), (z-a)/R + d] at a point with known root value.
void ray_integrands(const Factors& F, cplx y, cplx R, const RayGeometry& g, cplx* out) {
    const auto [u, v] = F(y);
    out[0] = R + g.d * (F.z - g.mu);
    out[1] = (R == 0.0) ? cplx(0.0) : 0.5 * (u + v) / R + g.d;
}

// Distance along the ray beyond which the integrands are below round-off relative to |z - mu|.
double far_extent(const InitialDataSpec& spec, cplx y0, cplx z, const RayGeometry& g) {
    const double c = std::abs(z - g.mu);
    const double zs = std::max(1.0, std::abs(z));
    for (double Y = std::max(g.d * y0.real(), 0.0) + 4.0; Y <= 400.0; Y += 2.0) {
        const cplx y(g.d * Y, y0.imag());
        const cplx al = spec.alpha(y), at = alpha_tilde(spec, y);
        if (!finite(al) || !finite(at)) continue;
        const double dev = std::abs(al - g.mu) + std::abs(at - g.mu);
        const cplx R = pick_near((z - al) * (z - at), -g.d * (z - g.mu));
        const double tail = std::abs(R + g.d * (z - g.mu));
        if (dev <= 1e-3 * c && tail <= 1e-13 * zs) return Y;
    }
    throw Error(ErrorKind::TailNotConverged, "integrand does not decay along the ray");
}

// Horizontal pieces from p to q with length at most 2.
void append_line(std::vector<PathPiece>& pieces, cplx p, cplx q) {
    const int n = std::max(1, int(std::ceil(std::abs(q - p) / 2.0)));
    for (int k = 0; k < n; ++k)
        pieces.push_back(line_piece(p + (q - p) * (double(k) / n), p + (q - p) * (double(k + 1) / n)));
}

// Exponential tail beyond the far end of a ray.
std::array<cplx, 2> ray_tail(const Factors& F, cplx yfar, cplx Rfar, const RayGeometry& g) {
    const cplx yb = yfar - g.d;
    std::array<cplx, 2> fa{}, fb{};
    ray_integrands(F, yfar, Rfar, g, fa.data());
    const cplx Rb = pick_near(F.square(yb), Rfar);
    ray_integrands(F, yb, Rb, g, fb.data());
    std::array<cplx, 2> tail{};
    for (int i = 0; i < 2; ++i) {
        if (std::abs(fa[i]) == 0.0) continue;
        double kappa = std::log(std::abs(fb[i]) / std::abs(fa[i]));
        if (!(kappa > 0.05)) {
            if (std::abs(fa[i]) > 1e-14) throw Error(ErrorKind::TailNotConverged, "tail decay too slow");
            kappa = 1.0;
        }
        tail[i] = g.d * fa[i] / kappa;
    }
    return tail;
}

RayIntegrals integrate_to_far(const Factors& F, std::vector<PathPiece> pieces, cplx yfar,
                              const RayGeometry& g, const FieldSettings& s) {
    auto sq = [&F](cplx y) { return F.square(y); };
    const cplx anchor = pick_near(sq(yfar), -g.d * (F.z - g.mu));
    TrackedRoot tr(sq, std::move(pieces), anchor, true);
    // (z - a) loses digits as z approaches mu; the tolerance cannot go below that noise level
    QuadratureSettings q = s.quad;
    const double c = std::max(std::abs(F.z - g.mu), 1e-300);
    const double length = std::abs(yfar - tr.pieces().front().point(0.0));
    q.abs_tol = std::max(q.abs_tol, 1e-15 * (1.0 + std::abs(F.z)) * (1.0 + length) / c);
    auto v = tr.integrate_many(
        [&](cplx y, cplx R, cplx* out) { ray_integrands(F, y, R, g, out); }, 2, q);
    const auto tail = ray_tail(F, yfar, tr.end_value(), g);
    return {v[0] + tail[0], v[1] + tail[1], tr.start_value()};
}

}  // namespace

RayIntegrals ray_integrals(const InitialDataSpec& spec, cplx y0, cplx z, bool singular_start,
                           Side side, const FieldSettings& s) {
    const RayGeometry g = geometry(spec, side);
    const double Y = far_extent(spec, y0, z, g);
    const cplx yfar(g.d * Y, y0.imag());
    std::vector<PathPiece> pieces;
    cplx p = y0;
    if (singular_start) {
        const cplx q = y0 + g.d * std::min(0.5, 0.5 * std::abs(yfar - y0));
        pieces.push_back(line_piece_sq_start(y0, q));
        p = q;
    }
    append_line(pieces, p, yfar);
    const Factors F = singular_start ? Factors(spec, z, y0) : Factors(spec, z);
    return integrate_to_far(F, std::move(pieces), yfar, g, s);
}

cplx radical_R(const InitialDataSpec& spec, cplx x, cplx z, RadicalBranch branch,
               const FieldSettings& s) {
    (void)s;
    const cplx sq0 = radical_square(spec, x, z);
    if (sq0 == 0.0) return 0.0;
    const RayGeometry g = geometry(spec, branch.side);
    const double Y = far_extent(spec, x, z, g);
    const cplx yfar(g.d * Y, x.imag());
    std::vector<PathPiece> pieces;
    append_line(pieces, x, yfar);
    auto sq = [&spec, z](cplx y) { return radical_square(spec, y, z); };
    try {
        TrackedRoot tr(sq, std::move(pieces), pick_near(sq(yfar), -g.d * (z - g.mu)), true);
        return tr.start_value();
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::PathCrossesCut) throw Error(ErrorKind::OnCut, "(x,z) lies on the cut of R");
        throw;
    }
}

namespace {

// Rejects x on the horizontal cut running from x(z) away from the anchored end.
void check_off_cut(cplx x, cplx xz, Side side) {
    const double d = side == Side::Right ? 1.0 : -1.0;
    if (std::abs(x.imag() - xz.imag()) <= 1e-12 * std::max(1.0, std::abs(xz)) &&
        d * (xz.real() - x.real()) > 0)
        throw Error(ErrorKind::OnCut, "x lies on the x-plane cut of R(., z)");
}

}  // namespace

cplx h_field(const InitialDataSpec& spec, cplx x, cplx z, const FieldSettings& s) {
    const cplx xz = inverse_map(spec, z);
    if (std::abs(x - xz) <= 1e-15 * std::max(1.0, std::abs(x))) return 0.0;
    check_off_cut(x, xz, Side::Right);
    const RayIntegrals A = ray_integrals(spec, xz, z, true, Side::Right, s);
    const RayIntegrals B = ray_integrals(spec, x, z, false, Side::Right, s);
    return B.phi - A.phi + (z - spec.mu_plus) * (x - xz);
}

cplx h_z_field(const InitialDataSpec& spec, cplx x, cplx z, const FieldSettings& s) {
    const cplx xz = inverse_map(spec, z);
    if (std::abs(x - xz) <= 1e-15 * std::max(1.0, std::abs(x))) return 0.0;
    check_off_cut(x, xz, Side::Right);
    const RayIntegrals A = ray_integrals(spec, xz, z, true, Side::Right, s);
    const RayIntegrals B = ray_integrals(spec, x, z, false, Side::Right, s);
    return B.psi - A.psi + (x - xz);
}

cplx h_left_field(const InitialDataSpec& spec, cplx x, cplx z, const FieldSettings& s) {
    const cplx xz = inverse_map(spec, z);
    if (std::abs(x - xz) <= 1e-15 * std::max(1.0, std::abs(x))) return 0.0;
    check_off_cut(x, xz, Side::Left);
    const RayIntegrals A = ray_integrals(spec, xz, z, true, Side::Left, s);
    const RayIntegrals B = ray_integrals(spec, x, z, false, Side::Left, s);
    return B.phi - A.phi - (z - spec.mu_minus) * (x - xz);
}

cplx h_field_direct(const InitialDataSpec& spec, cplx x, cplx z, const FieldSettings& s,
                    std::optional<cplx> xz_opt) {
    const cplx xz = xz_opt ? *xz_opt : inverse_map(spec, z);
    if (std::abs(x - xz) <= 1e-15 * std::max(1.0, std::abs(x))) return 0.0;
    const cplx corner(xz.real(), x.imag());
    std::vector<PathPiece> pieces;
    const bool vertical = std::abs(corner - xz) > 1e-14;
    const bool horizontal = std::abs(x - corner) > 1e-14;
    if (vertical) pieces.push_back(line_piece_sq_start(xz, corner));
    if (horizontal) {
        if (vertical) pieces.push_back(line_piece(corner, x));
        else pieces.push_back(line_piece_sq_start(xz, x));
    }
    const cplx Rx = radical_R(spec, x, z, {}, s);
    const Factors F(spec, z, xz);
    auto sq = [&F](cplx y) { return F.square(y); };
    TrackedRoot tr(sq, std::move(pieces), Rx, true);
    return -tr.integrate([](cplx, cplx R) { return R; }, s.quad).value;
}

cplx g_field(const InitialDataSpec& spec, cplx x, cplx z, double f0_at_mu_plus,
             const FieldSettings& s) {
    if (std::abs(z - spec.mu_plus) <= s.mu_plus_exclusion)
        throw Error(ErrorKind::AtMuPlus, "g is not evaluated near z = mu+");
    const RayIntegrals B = ray_integrals(spec, x, z, false, Side::Right, s);
    return 0.5 * B.phi - 0.5 * spec.mu_plus * x + 0.5 * f0_at_mu_plus;
}

cplx g_z_field(const InitialDataSpec& spec, cplx x, cplx z, const FieldSettings& s) {
    if (std::abs(z - spec.mu_plus) <= s.mu_plus_exclusion)
        throw Error(ErrorKind::AtMuPlus, "g is not evaluated near z = mu+");
    return 0.5 * ray_integrals(spec, x, z, false, Side::Right, s).psi;
}

std::pair<cplx, cplx> g_boundary_values(const InitialDataSpec& spec, double x, cplx z,
                                        double f0_at_mu_plus, const FieldSettings& s) {
    if (std::abs(z - spec.mu_plus) <= s.mu_plus_exclusion)
        throw Error(ErrorKind::AtMuPlus, "g is not evaluated near z = mu+");
    const cplx xz = inverse_map(spec, z);
    if (std::abs(xz.imag()) > 1e-8 || xz.real() <= x)
        throw Error(ErrorKind::OutsideDomain, "z is not on the arc alpha((x, +inf))");
    const double ys = xz.real();
    const RayGeometry g = geometry(spec, Side::Right);
    const double Y = std::max(far_extent(spec, cplx(x, 0.0), z, g), ys + 4.0);
    const double rho = std::min(s.detour_radius, 0.5 * (ys - x));
    std::array<cplx, 2> out;
    for (int k = 0; k < 2; ++k) {
        std::vector<PathPiece> pieces;
        append_line(pieces, x, ys - rho);
        pieces.push_back(arc_piece(ys, rho, k == 0 ? pi : -pi, 0.0));
        append_line(pieces, ys + rho, Y);
        const RayIntegrals B = integrate_to_far(Factors(spec, z), std::move(pieces), Y, g, s);
        out[k] = 0.5 * B.phi - 0.5 * spec.mu_plus * x + 0.5 * f0_at_mu_plus;
    }
    return {out[0], out[1]};
}

FieldSample field_sample(const InitialDataSpec& spec, cplx x, cplx z, double f0_at_mu_plus,
                         const FieldSettings& s) {
    FieldSample fs{x, z, 0.0, 0.0, 0.0};
    fs.h = h_field(spec, x, z, s);
    fs.g = g_field(spec, x, z, f0_at_mu_plus, s);
    fs.f = 2.0 * fs.g - fs.h;
    return fs;
}

// ---------------------------------------------------------------------------------------------
// Loops

ArcParam sigma_arc(const InitialDataSpec& spec, double x) {
    double Y = x + 1.0;
    while (std::abs(spec.alpha(Y) - spec.mu_plus) > 1e-10 && Y < x + 400) Y += 0.25;
    return {[&spec](double y) { return spec.alpha(y); },
            [&spec](double y) { return spec.alpha_prime(y); }, x, Y};
}

ArcParam bent_sigma_arc(const InitialDataSpec& spec, double x_ref, cplx alpha) {
    ArcParam base = sigma_arc(spec, x_ref);
    const cplx delta = alpha - spec.alpha(x_ref);
    const double extra = std::max(0.0, std::log(std::max(std::abs(delta), 1e-300)) + 24.0);
    base.y_far = std::max(base.y_far, x_ref + extra);
    base.point = [&spec, x_ref, delta](double y) {
        return spec.alpha(y) + delta * std::exp(-(y - x_ref));
    };
    base.deriv = [&spec, x_ref, delta](double y) {
        return spec.alpha_prime(y) - delta * std::exp(-(y - x_ref));
    };
    return base;
}

namespace {

// Offset curve p(y) + s dist(y) n(y), n the left normal of the arc oriented towards alpha.
struct OffsetCurve {
    ArcParam arc;
    double mu_plus;
    double d;
    double side;  // +1 left (+ side), -1 right

    cplx normal(double y) const {
        const cplx t = -arc.deriv(y);
        return I * t / std::abs(t);
    }
    double dist(double y) const {
        return d * (1.0 - std::exp(-std::abs(arc.point(y) - mu_plus) / d));
    }
    cplx operator()(double y) const { return arc.point(y) + side * dist(y) * normal(y); }
    cplx derivative(double y) const {
        const double h = 1e-4 * std::max(1.0, std::abs(y));
        return (8.0 * ((*this)(y + h) - (*this)(y - h)) - ((*this)(y + 2 * h) - (*this)(y - 2 * h))) /
               (12.0 * h);
    }
};

PathPiece offset_piece(const OffsetCurve& c, double y0, double y1) {
    return {[c, y0, y1](double t) { return c(y0 + (y1 - y0) * t); },
            [c, y0, y1](double t) { return c.derivative(y0 + (y1 - y0) * t) * (y1 - y0); }};
}

}  // namespace

LoopContour stadium_loop(const ArcParam& arc, double mu_plus, double d,
                         const std::vector<LogCut>& cuts, const InitialDataSpec* spec) {
    // Shrink the distance so that the loop stays clear of the cuts.
    std::vector<cplx> arc_pts;
    for (int k = 0; k <= 400; ++k) {
        const double y = arc.y_alpha + (arc.y_far - arc.y_alpha) * (double(k) / 400) * (double(k) / 400);
        arc_pts.push_back(arc.point(y));
    }
    double deff = d;
    for (const LogCut& c : cuts) {
        const ContourPath cp = c.polyline(std::max(10.0, std::abs(arc.point(arc.y_alpha)) + 10));
        double m = 1e300;
        for (cplx p : arc_pts) m = std::min(m, distance_to_polyline(p, cp.nodes));
        for (cplx p : arc_pts) m = std::min(m, distance_to_polyline(std::conj(p), cp.nodes));
        deff = std::min(deff, 0.4 * m);
    }
    if (!(deff > 1e-6)) throw Error(ErrorKind::ContourHitsCut, "arc touches a branch cut");

    LoopContour L;
    L.arc = arc;
    L.alpha = arc.point(arc.y_alpha);
    L.mu_plus = mu_plus;
    L.distance = deff;
    const OffsetCurve plus{arc, mu_plus, deff, 1.0}, minus{arc, mu_plus, deff, -1.0};
    const double ya = arc.y_alpha, yf = arc.y_far;
    const double r = plus.dist(ya);
    const double th = std::arg(plus.normal(ya));
    // short joins between mu+ and the leg ends close the pinch
    L.pieces.push_back(line_piece(mu_plus, plus(yf)));
    L.pieces.push_back(offset_piece(plus, yf, ya));
    L.pieces.push_back(arc_piece(L.alpha, r, th, th - pi));
    L.pieces.push_back(offset_piece(minus, ya, yf));
    L.pieces.push_back(line_piece(minus(yf), mu_plus));
    if (spec) {
        L.hint = [spec, ya, yf, plus, minus, alpha = L.alpha](std::size_t k,
                                                              double t) -> std::optional<cplx> {
            double y;
            cplx zeta;
            if (k == 0 || k == 4) return std::nullopt;
            if (k == 1) {
                y = yf + (ya - yf) * t;
                zeta = plus(y);
            } else if (k == 3) {
                y = ya + (yf - ya) * t;
                zeta = minus(y);
            } else {
                y = ya;
                zeta = alpha + plus.dist(ya) * std::exp(I * (std::arg(plus.normal(ya)) - pi * t));
            }
            const cplx ap = spec->alpha_prime(y);
            return cplx(y) + (zeta - spec->alpha(y)) / ap;
        };
    }
    return L;
}

ContourPath LoopContour::polyline(int per_piece) const {
    ContourPath p;
    std::vector<cplx> upper;
    for (const PathPiece& pc : pieces)
        for (int k = 0; k < per_piece; ++k) {
            const double t = double(k) / per_piece;
            upper.push_back(pc.point(k == 0 ? 0.0 : t * t * (3 - 2 * t)));
        }
    upper.push_back(pieces.back().point(1.0));
    p.nodes = upper;
    // lower half: reflection traversed in reverse
    for (std::size_t k = upper.size(); k-- > 1;) p.nodes.push_back(std::conj(upper[k - 1]));
    p.nodes.pop_back();
    p.closed = true;
    p.orientation = -1;
    return p;
}

bool LoopContour::encloses(cplx z) const { return winding_number(polyline().nodes, z) != 0; }

double LoopContour::distance_to(cplx z) const {
    auto poly = polyline().nodes;
    poly.push_back(poly.front());
    return distance_to_polyline(z, poly);
}

TrackedRoot LoopContour::radical() const {
    const cplx a = alpha;
    auto sq = [a](cplx zeta) { return (zeta - a) * (zeta - std::conj(a)); };
    return TrackedRoot(sq, pieces, cplx(std::abs(mu_plus - a), 0.0), false);
}

cplx loop_radical(const LoopContour& loop, cplx z) {
    const cplx a = loop.alpha;
    auto sq = [a](cplx zeta) { return (zeta - a) * (zeta - std::conj(a)); };
    std::vector<cplx> arc;
    for (int k = 0; k <= 400; ++k) {
        const double y = loop.arc.y_alpha +
                         (loop.arc.y_far - loop.arc.y_alpha) * (double(k) / 400) * (double(k) / 400);
        arc.push_back(loop.arc.point(y));
    }
    if (distance_to_polyline(z, arc) < 1e-12 ||
        distance_to_polyline(std::conj(z), arc) < 1e-12)
        throw Error(ErrorKind::OnCut, "z lies on the arc");
    const double far = 1e3 * std::max({1.0, std::abs(z), std::abs(a)});
    for (int j = 0; j < 16; ++j) {
        const cplx dir = std::exp(I * (pi / 2 + 2 * pi * j / 16.0));
        const cplx w = z + far * dir;
        bool hits = false;
        for (std::size_t k = 0; k + 1 < arc.size() && !hits; ++k)
            hits = segments_intersect(z, w, arc[k], arc[k + 1]) ||
                   segments_intersect(z, w, std::conj(arc[k]), std::conj(arc[k + 1]));
        if (hits) continue;
        std::vector<PathPiece> pieces{line_piece(z, z + dir), line_piece(z + dir, w)};
        TrackedRoot tr(sq, std::move(pieces), -(w - a.real()), true);
        return tr.start_value();
    }
    throw Error(ErrorKind::ContourThroughSingularity, "no ray from z avoids the arc");
}

namespace {

void check_outside(const LoopContour& loop, cplx z) {
    if (loop.distance_to(z) < 1e-3 * loop.distance)
        throw Error(ErrorKind::ContourThroughSingularity, "z lies on the loop");
}

}  // namespace

cplx plemelj_g(const ScatteringData& sd, const LoopContour& loop, double x, cplx z, double t,
               const QuadratureSettings& q) {
    check_outside(loop, z);
    if (loop.encloses(z))
        throw Error(ErrorKind::ContourThroughSingularity, "g loop formula needs z outside the loop");
    const TrackedRoot tr = loop.radical();
    const cplx zb = std::conj(z);
    // I+(w) = int_{L+} f/((zeta - w) R); the lower half contributes -conj(I+(conj z)).
    auto v = tr.integrate_pieces(
        [&](std::size_t k, double tau, cplx zeta, cplx R, cplx* out) {
            const auto h = loop.hint ? loop.hint(k, tau) : std::nullopt;
            const cplx f = sd.f0(zeta, h) - x * zeta - 2.0 * t * zeta * zeta;
            out[0] = f / ((zeta - z) * R);
            out[1] = f / ((zeta - zb) * R);
        },
        2, q);
    const cplx total = v[0] - std::conj(v[1]);
    return loop_radical(loop, z) / (4.0 * pi * I) * total;
}

cplx plemelj_h_z(const ScatteringData& sd, const LoopContour& loop, double x, cplx z, double t,
                 const QuadratureSettings& q) {
    check_outside(loop, z);
    const TrackedRoot tr = loop.radical();
    const cplx zb = std::conj(z);
    auto v = tr.integrate_pieces(
        [&](std::size_t k, double tau, cplx zeta, cplx R, cplx* out) {
            const auto h = loop.hint ? loop.hint(k, tau) : std::nullopt;
            const cplx fp = sd.f0_prime(zeta, h) - x - 4.0 * t * zeta;
            out[0] = fp / ((zeta - z) * R);
            out[1] = fp / ((zeta - zb) * R);
        },
        2, q);
    const cplx total = v[0] - std::conj(v[1]);
    const cplx Rz = loop_radical(loop, z);
    const cplx Q = Rz / (2.0 * pi * I) * total;
    if (loop.encloses(z)) return Q;
    const cplx fp = sd.f0_prime(z) - x - 4.0 * t * z;
    return Q - fp;
}

}  // namespace ahs
