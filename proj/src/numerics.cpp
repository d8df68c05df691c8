#include "ahscatter/numerics.hpp"

#include <algorithm>
#include <array>
#include <queue>
#include <sstream>

namespace ahs {

const char* error_kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::BudgetExceeded: return "BudgetExceeded";
        case ErrorKind::NonFiniteIntegrand: return "NonFiniteIntegrand";
        case ErrorKind::NoConvergence: return "NoConvergence";
        case ErrorKind::DerivativeVanished: return "DerivativeVanished";
        case ErrorKind::SeedNotOnCurve: return "SeedNotOnCurve";
        case ErrorKind::StagnationAtCriticalPoint: return "StagnationAtCriticalPoint";
        case ErrorKind::OutsideDomain: return "OutsideDomain";
        case ErrorKind::AtLogPoint: return "AtLogPoint";
        case ErrorKind::RegionOutsideDomain: return "RegionOutsideDomain";
        case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
        case ErrorKind::OnCut: return "OnCut";
        case ErrorKind::PathCrossesCut: return "PathCrossesCut";
        case ErrorKind::AtMuPlus: return "AtMuPlus";
        case ErrorKind::TailNotConverged: return "TailNotConverged";
        case ErrorKind::ContourThroughSingularity: return "ContourThroughSingularity";
        case ErrorKind::PathNotOnSigma: return "PathNotOnSigma";
        case ErrorKind::SingularityUnresolved: return "SingularityUnresolved";
        case ErrorKind::NoCut: return "NoCut";
        case ErrorKind::AtCutEndpoint: return "AtCutEndpoint";
        case ErrorKind::VerticalSegmentLeavesDomain: return "VerticalSegmentLeavesDomain";
        case ErrorKind::TraceStalled: return "TraceStalled";
        case ErrorKind::ContourHitsCut: return "ContourHitsCut";
        case ErrorKind::JacobianSingular: return "JacobianSingular";
        case ErrorKind::StepUnderflow: return "StepUnderflow";
        case ErrorKind::ClassificationAmbiguous: return "ClassificationAmbiguous";
        case ErrorKind::StiffnessFailure: return "StiffnessFailure";
        case ErrorKind::TruncationNotConverged: return "TruncationNotConverged";
        case ErrorKind::ReflectionUnderflow: return "ReflectionUnderflow";
        case ErrorKind::ConfigInvalid: return "ConfigInvalid";
        case ErrorKind::ComputeFailed: return "ComputeFailed";
    }
    return "Unknown";
}

const char* trace_stop_name(TraceStop s) {
    switch (s) {
        case TraceStop::LeftBounds: return "left_bounds";
        case TraceStop::Closed: return "closed";
        case TraceStop::ReachedAttractor: return "reached_attractor";
        case TraceStop::GradientCollapse: return "gradient_collapse";
        case TraceStop::NodeLimit: return "node_limit";
        case TraceStop::Blocked: return "blocked";
    }
    return "unknown";
}

// ---------------------------------------------------------------------------------------------
// ContourPath

void ContourPath::validate() const {
    const std::size_t need = closed ? 3 : 2;
    if (nodes.size() < need)
        throw Error(ErrorKind::ConfigInvalid, "contour path has too few nodes");
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
        if (nodes[k] == nodes[k + 1])
            throw Error(ErrorKind::ConfigInvalid, "contour path has repeated consecutive nodes");
    for (auto z : nodes)
        if (!finite(z)) throw Error(ErrorKind::ConfigInvalid, "contour path has non-finite node");
}

ContourPath ContourPath::reversed() const {
    ContourPath r = *this;
    std::reverse(r.nodes.begin(), r.nodes.end());
    r.orientation = -orientation;
    return r;
}

std::size_t ContourPath::segment_count() const {
    if (nodes.size() < 2) return 0;
    return closed ? nodes.size() : nodes.size() - 1;
}

double ContourPath::length() const {
    double L = 0;
    for (std::size_t k = 0; k < segment_count(); ++k) L += std::abs(segment_end(k) - segment_start(k));
    return L;
}

// ---------------------------------------------------------------------------------------------
// Gauss-Kronrod 10/21

namespace {

constexpr std::array<double, 11> xgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
constexpr std::array<double, 11> wgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980161925, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
constexpr std::array<double, 5> wg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

using VecFn = std::function<void(double, cplx*)>;

struct Segment {
    double a, b;
    std::vector<cplx> val;
    double err;
    bool operator<(const Segment& o) const { return err < o.err; }
};

void gk21(const VecFn& f, int n, double a, double b, std::vector<cplx>& val, double& err,
          std::vector<cplx>& buf) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    std::vector<cplx> kron(n, 0.0), gauss(n, 0.0);
    buf.assign(2 * n, 0.0);
    f(c, buf.data());
    for (int i = 0; i < n; ++i) kron[i] = wgk[10] * buf[i];
    for (int j = 0; j < 10; ++j) {
        const double dx = h * xgk[j];
        f(c - dx, buf.data());
        f(c + dx, buf.data() + n);
        for (int i = 0; i < n; ++i) {
            const cplx s = buf[i] + buf[n + i];
            kron[i] += wgk[j] * s;
            if (j % 2 == 1) gauss[i] += wg[j / 2] * s;
        }
    }
    err = 0;
    val.resize(n);
    for (int i = 0; i < n; ++i) {
        val[i] = kron[i] * h;
        err = std::max(err, std::abs((kron[i] - gauss[i]) * h));
    }
}

std::vector<cplx> adaptive(const VecFn& f, int n, double a, double b, const QuadratureSettings& s,
                           double* err_out, int* evals) {
    std::vector<cplx> buf;
    std::priority_queue<Segment> heap;
    Segment first{a, b, {}, 0};
    gk21(f, n, a, b, first.val, first.err, buf);
    *evals += 21;
    std::vector<cplx> total = first.val;
    double total_err = first.err;
    heap.push(std::move(first));
    int subdivisions = 1;
    auto norm = [](const std::vector<cplx>& v) {
        double m = 0;
        for (auto& z : v) m = std::max(m, std::abs(z));
        return m;
    };
    while (total_err > std::max(s.abs_tol, s.rel_tol * norm(total))) {
        if (subdivisions >= s.max_subdivisions) {
            std::ostringstream os;
            os << "tolerance not reached after " << subdivisions << " subdivisions (error "
               << total_err << ")";
            throw Error(ErrorKind::BudgetExceeded, os.str());
        }
        Segment top = heap.top();
        heap.pop();
        const double m = 0.5 * (top.a + top.b);
        if (!(m > top.a && m < top.b))
            throw Error(ErrorKind::BudgetExceeded, "interval underflow in adaptive quadrature");
        Segment l{top.a, m, {}, 0}, r{m, top.b, {}, 0};
        gk21(f, n, l.a, l.b, l.val, l.err, buf);
        gk21(f, n, r.a, r.b, r.val, r.err, buf);
        *evals += 42;
        for (int i = 0; i < n; ++i) total[i] += l.val[i] + r.val[i] - top.val[i];
        total_err += l.err + r.err - top.err;
        heap.push(std::move(l));
        heap.push(std::move(r));
        ++subdivisions;
        if (subdivisions % 64 == 0 || total_err <= std::max(s.abs_tol, s.rel_tol * norm(total))) {
            // resum to remove cancellation drift before trusting the stopping test
            total_err = 0;
            auto copy = heap;
            while (!copy.empty()) {
                total_err += copy.top().err;
                copy.pop();
            }
        }
    }
    *err_out = total_err;
    return total;
}

std::vector<cplx> integrate_vec(const VecFn& f, int n, double a, double b,
                                const QuadratureSettings& s, double* err, int* evals) {
    auto checked = [&](double x, cplx* out) {
        f(x, out);
        for (int i = 0; i < n; ++i)
            if (!finite(out[i])) {
                std::ostringstream os;
                os << "integrand not finite at parameter " << x;
                throw Error(ErrorKind::NonFiniteIntegrand, os.str());
            }
    };
    if (!s.singular_start && !s.singular_end) return adaptive(checked, n, a, b, s, err, evals);
    if (s.singular_start && s.singular_end) {
        const double m = 0.5 * (a + b);
        QuadratureSettings l = s, r = s;
        l.singular_end = false;
        r.singular_start = false;
        l.abs_tol = r.abs_tol = 0.5 * s.abs_tol;
        double e1 = 0, e2 = 0;
        auto v1 = integrate_vec(f, n, a, m, l, &e1, evals);
        auto v2 = integrate_vec(f, n, m, b, r, &e2, evals);
        for (int i = 0; i < n; ++i) v1[i] += v2[i];
        *err = e1 + e2;
        return v1;
    }
    // x = e + (o - e) u^2, dx = 2 (o - e) u du
    const double e = s.singular_start ? a : b, o = s.singular_start ? b : a;
    const double sgn = s.singular_start ? 1.0 : -1.0;
    auto g = [&](double u, cplx* out) {
        checked(e + (o - e) * u * u, out);
        const double jac = sgn * 2.0 * (o - e) * u;
        for (int i = 0; i < n; ++i) out[i] *= jac;
    };
    return adaptive(g, n, 0.0, 1.0, s, err, evals);
}

}  // namespace

QuadratureResult integrate_interval(const std::function<cplx(double)>& f, double a, double b,
                                    const QuadratureSettings& s) {
    if (!(s.abs_tol > 0 && s.rel_tol > 0 && s.max_subdivisions >= 1))
        throw Error(ErrorKind::ConfigInvalid, "invalid quadrature settings");
    QuadratureResult res;
    if (a == b) return res;
    auto v = integrate_vec([&](double x, cplx* out) { out[0] = f(x); }, 1, a, b, s,
                           &res.error_estimate, &res.evaluations);
    res.value = v[0];
    return res;
}

QuadratureResult integrate_path(const std::function<cplx(cplx)>& f, const ContourPath& path,
                                const QuadratureSettings& s) {
    path.validate();
    QuadratureResult res;
    const std::size_t n = path.segment_count();
    for (std::size_t k = 0; k < n; ++k) {
        const cplx a = path.segment_start(k), b = path.segment_end(k);
        QuadratureSettings sk = s;
        sk.singular_start = s.singular_start && k == 0 && !path.closed;
        sk.singular_end = s.singular_end && k + 1 == n && !path.closed;
        sk.abs_tol = s.abs_tol / double(n);
        auto r = integrate_interval([&](double t) { return f(a + (b - a) * t) * (b - a); }, 0.0,
                                    1.0, sk);
        res.value += r.value;
        res.error_estimate += r.error_estimate;
        res.evaluations += r.evaluations;
    }
    return res;
}

// ---------------------------------------------------------------------------------------------
// Newton

cplx find_root(const std::function<cplx(cplx)>& map, const std::function<cplx(cplx)>& derivative,
               cplx seed, const RootSettings& s) {
    cplx z = seed;
    cplx fz = map(z);
    if (!finite(fz)) throw Error(ErrorKind::NoConvergence, "map not finite at seed");
    for (int it = 0; it < s.max_iterations; ++it) {
        if (std::abs(fz) <= s.residual_tol) return z;
        const cplx d = derivative(z);
        if (!finite(d) || std::abs(d) < s.derivative_floor)
            throw Error(ErrorKind::DerivativeVanished, "derivative below threshold during Newton");
        cplx step = fz / d;
        double lam = 1.0;
        bool ok = false;
        for (int k = 0; k < 30; ++k) {
            const cplx zn = z - lam * step;
            const cplx fn = map(zn);
            if (finite(fn) && std::abs(fn) < std::abs(fz)) {
                z = zn;
                fz = fn;
                ok = true;
                break;
            }
            lam *= 0.5;
        }
        if (!ok) {
            if (std::abs(fz) <= 10 * s.residual_tol) return z;
            throw Error(ErrorKind::NoConvergence, "Newton line search failed");
        }
    }
    if (std::abs(fz) <= s.residual_tol) return z;
    throw Error(ErrorKind::NoConvergence, "Newton iteration limit reached");
}

cplx find_root(const std::function<cplx(cplx)>& map, cplx seed, const RootSettings& s) {
    auto deriv = [&](cplx z) {
        const double h = s.finite_difference_step * std::max(1.0, std::abs(z));
        return (map(z + h) - map(z - h)) / (2.0 * h);
    };
    return find_root(map, deriv, seed, s);
}

// ---------------------------------------------------------------------------------------------
// Curve tracing

namespace {

cplx gradient(const std::function<double(cplx)>& F, cplx p) {
    const double h = 1e-6 * std::max(1.0, std::abs(p));
    const double gx = (F(p + h) - F(p - h)) / (2 * h);
    const double gy = (F(p + I * h) - F(p - I * h)) / (2 * h);
    return {gx, gy};
}

bool correct(const std::function<double(cplx)>& F, cplx& q, double tol, double floor) {
    for (int it = 0; it < 12; ++it) {
        const double v = F(q);
        if (!std::isfinite(v)) return false;
        if (std::abs(v) <= tol) return true;
        const cplx g = gradient(F, q);
        const double gn = std::norm(g);
        if (!(std::sqrt(gn) > floor)) return false;
        q -= v * g / gn;
    }
    return std::abs(F(q)) <= tol;
}

}  // namespace

TraceResult trace_implicit_curve(const std::function<double(cplx)>& field, cplx seed,
                                 cplx initial_direction, double step, const Rect& bounds,
                                 const TraceSettings& s) {
    cplx p = seed;
    if (!correct(field, p, s.corrector_tol, s.gradient_floor)) {
        if (std::abs(gradient(field, seed)) <= s.gradient_floor)
            throw Error(ErrorKind::StagnationAtCriticalPoint, "gradient vanishes at seed");
        throw Error(ErrorKind::SeedNotOnCurve, "seed could not be corrected onto the level set");
    }
    cplx g = gradient(field, p);
    if (std::abs(g) <= s.gradient_floor)
        throw Error(ErrorKind::StagnationAtCriticalPoint, "gradient vanishes at seed");
    cplx dir = I * g / std::abs(g);
    if ((dir * std::conj(initial_direction)).real() < 0) dir = -dir;

    TraceResult res;
    res.path.nodes.push_back(p);
    double h = std::clamp(step, s.min_step, s.max_step);
    while (true) {
        if (int(res.path.nodes.size()) >= s.max_nodes) {
            res.stop = TraceStop::NodeLimit;
            return res;
        }
        const cplx pred = p + h * dir;
        cplx q = pred;
        bool ok = correct(field, q, s.corrector_tol, s.gradient_floor);
        cplx ndir;
        if (ok) {
            const cplx gq = gradient(field, q);
            if (std::abs(gq) <= s.gradient_floor) {
                res.stop = TraceStop::GradientCollapse;
                return res;
            }
            ndir = I * gq / std::abs(gq);
            if ((ndir * std::conj(dir)).real() < 0) ndir = -ndir;
            const double turn = std::abs(std::arg(ndir * std::conj(dir)));
            ok = std::abs(q - pred) <= 0.5 * h && turn <= 0.5 && std::abs(q - p) > 0.25 * h;
        }
        if (!ok) {
            h *= 0.5;
            if (h < s.min_step) {
                res.stop = TraceStop::GradientCollapse;
                return res;
            }
            continue;
        }
        if (s.blocked && s.blocked(p, q)) {
            res.stop = TraceStop::Blocked;
            return res;
        }
        for (std::size_t k = 0; k < s.attractors.size(); ++k) {
            const double rad = s.attractor_radius > 0 ? s.attractor_radius : h;
            if (std::abs(q - s.attractors[k]) <= rad ||
                distance_to_segment(s.attractors[k], p, q) <= 0.5 * rad) {
                res.path.nodes.push_back(s.attractors[k]);
                res.stop = TraceStop::ReachedAttractor;
                res.attractor_index = int(k);
                return res;
            }
        }
        res.path.nodes.push_back(q);
        if (!bounds.contains(q)) {
            res.stop = TraceStop::LeftBounds;
            return res;
        }
        if (res.path.nodes.size() > 8 && std::abs(q - seed) < h) {
            res.path.nodes.pop_back();
            res.path.closed = true;
            res.stop = TraceStop::Closed;
            return res;
        }
        p = q;
        dir = ndir;
        h = std::min(s.max_step, h * 1.5);
    }
}

// ---------------------------------------------------------------------------------------------
// Pieces and tracked roots

PathPiece line_piece(cplx a, cplx b) {
    return {[a, b](double t) { return a + (b - a) * t; }, [a, b](double) { return b - a; }};
}

PathPiece line_piece_sq_start(cplx a, cplx b) {
    return {[a, b](double t) { return a + (b - a) * (t * t); },
            [a, b](double t) { return 2.0 * t * (b - a); }};
}

PathPiece line_piece_sq_end(cplx a, cplx b) {
    return {[a, b](double t) { return b - (b - a) * ((1 - t) * (1 - t)); },
            [a, b](double t) { return 2.0 * (1 - t) * (b - a); }};
}

PathPiece arc_piece(cplx c, double r, double th0, double th1) {
    return {[=](double t) { return c + r * std::exp(I * (th0 + (th1 - th0) * t)); },
            [=](double t) { return I * (th1 - th0) * r * std::exp(I * (th0 + (th1 - th0) * t)); }};
}

TrackedRoot::TrackedRoot(std::function<cplx(cplx)> square, std::vector<PathPiece> pieces,
                         cplx anchor, bool anchor_at_end)
    : square_(std::move(square)), pieces_(std::move(pieces)) {
    if (pieces_.empty()) throw Error(ErrorKind::ConfigInvalid, "tracked root needs a path");
    skel_.resize(pieces_.size());
    cplx a = anchor;
    if (anchor_at_end) {
        for (std::size_t k = pieces_.size(); k-- > 0;) {
            skel_[k] = build(pieces_[k], a, true);
            a = skel_[k].r.front();
        }
    } else {
        for (std::size_t k = 0; k < pieces_.size(); ++k) {
            skel_[k] = build(pieces_[k], a, false);
            a = skel_[k].r.back();
        }
    }
}

cplx TrackedRoot::pick(cplx sq, cplx predicted) const {
    const cplx r = std::sqrt(sq);
    return std::abs(r - predicted) <= std::abs(r + predicted) ? r : -r;
}

TrackedRoot::Skeleton TrackedRoot::build(const PathPiece& p, cplx anchor, bool from_end) const {
    std::vector<double> ts;
    std::vector<cplx> rs;
    double t = from_end ? 1.0 : 0.0;
    const double dirn = from_end ? -1.0 : 1.0;
    cplx r = pick(square_(p.point(t)), anchor);
    if (!finite(r)) throw Error(ErrorKind::NonFiniteIntegrand, "radicand not finite on path");
    ts.push_back(t);
    rs.push_back(r);
    double h = 1.0 / 32;
    double scale = std::abs(r);
    while (from_end ? t > 0.0 : t < 1.0) {
        double tn = t + dirn * h;
        if (from_end ? tn < 0.0 : tn > 1.0) tn = from_end ? 0.0 : 1.0;
        const cplx sq = square_(p.point(tn));
        if (!finite(sq)) throw Error(ErrorKind::NonFiniteIntegrand, "radicand not finite on path");
        cplx pred = r;
        if (ts.size() >= 2) {
            const double t2 = ts[ts.size() - 2];
            const cplx r2 = rs[rs.size() - 2];
            pred = r + (r - r2) * ((tn - t) / (t - t2));
        }
        const cplx cand = pick(sq, pred);
        const double err = std::abs(cand - pred);
        const bool endpoint = (tn == 0.0 || tn == 1.0);
        bool accept = err <= 0.1 * std::abs(cand);
        if (!accept && endpoint && std::abs(cand) <= 1e-6 * scale) accept = true;  // zero at the end
        if (!accept && scale == 0.0) accept = true;  // identically vanishing radicand
        if (accept) {
            t = tn;
            r = cand;
            scale = std::max(scale, std::abs(r));
            ts.push_back(t);
            rs.push_back(r);
            h = std::min(0.25, h * 1.5);
        } else {
            h *= 0.5;
            if (h < 1e-13)
                throw Error(ErrorKind::PathCrossesCut,
                            "square root vanishes in the interior of an integration path");
        }
    }
    if (from_end) {
        std::reverse(ts.begin(), ts.end());
        std::reverse(rs.begin(), rs.end());
    }
    return {std::move(ts), std::move(rs)};
}

cplx TrackedRoot::at(std::size_t piece, double tau) const {
    const Skeleton& s = skel_[piece];
    auto it = std::upper_bound(s.t.begin(), s.t.end(), tau);
    std::size_t k = (it == s.t.begin()) ? 0 : std::size_t(it - s.t.begin()) - 1;
    if (k + 1 >= s.t.size()) k = s.t.size() - 2;
    const double w = (tau - s.t[k]) / (s.t[k + 1] - s.t[k]);
    const cplx pred = s.r[k] + (s.r[k + 1] - s.r[k]) * w;
    return pick(square_(pieces_[piece].point(tau)), pred);
}

std::vector<cplx> TrackedRoot::integrate_pieces(
    const std::function<void(std::size_t, double, cplx, cplx, cplx*)>& F, int count,
    const QuadratureSettings& s) const {
    std::vector<cplx> total(count, 0.0);
    QuadratureSettings sk = s;
    sk.abs_tol = s.abs_tol / double(pieces_.size());
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const PathPiece& p = pieces_[k];
        auto g = [&](double t, cplx* out) {
            const cplx pt = p.point(t);
            F(k, t, pt, at(k, t), out);
            const cplx d = p.deriv(t);
            for (int i = 0; i < count; ++i) out[i] *= d;
        };
        double err = 0;
        int ev = 0;
        auto v = integrate_vec(g, count, 0.0, 1.0, sk, &err, &ev);
        for (int i = 0; i < count; ++i) total[i] += v[i];
    }
    return total;
}

std::vector<cplx> TrackedRoot::integrate_many(const std::function<void(cplx, cplx, cplx*)>& F,
                                              int count, const QuadratureSettings& s) const {
    return integrate_pieces(
        [&](std::size_t, double, cplx p, cplx r, cplx* out) { F(p, r, out); }, count, s);
}

QuadratureResult TrackedRoot::integrate(const std::function<cplx(cplx, cplx)>& F,
                                        const QuadratureSettings& s) const {
    QuadratureResult res;
    QuadratureSettings sk = s;
    sk.abs_tol = s.abs_tol / double(pieces_.size());
    for (std::size_t k = 0; k < pieces_.size(); ++k) {
        const PathPiece& p = pieces_[k];
        auto g = [&](double t) { return F(p.point(t), at(k, t)) * p.deriv(t); };
        auto r = integrate_interval(g, 0.0, 1.0, sk);
        res.value += r.value;
        res.error_estimate += r.error_estimate;
        res.evaluations += r.evaluations;
    }
    return res;
}

// ---------------------------------------------------------------------------------------------
// Geometry

namespace {
double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }
}  // namespace

bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
    const double d1 = cross(q2 - q1, p1 - q1), d2 = cross(q2 - q1, p2 - q1);
    const double d3 = cross(p2 - p1, q1 - p1), d4 = cross(p2 - p1, q2 - p1);
    return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 &&
           d4 != 0;
}

double distance_to_segment(cplx z, cplx a, cplx b) {
    const cplx d = b - a;
    const double L2 = std::norm(d);
    if (L2 == 0) return std::abs(z - a);
    const double t = std::clamp(((z - a) * std::conj(d)).real() / L2, 0.0, 1.0);
    return std::abs(z - (a + t * d));
}

double distance_to_polyline(cplx z, const std::vector<cplx>& poly) {
    if (poly.size() == 1) return std::abs(z - poly[0]);
    double m = INFINITY;
    for (std::size_t k = 0; k + 1 < poly.size(); ++k)
        m = std::min(m, distance_to_segment(z, poly[k], poly[k + 1]));
    return m;
}

int winding_number(const std::vector<cplx>& poly, cplx z) {
    double total = 0;
    for (std::size_t k = 0; k < poly.size(); ++k) {
        const cplx a = poly[k] - z, b = poly[(k + 1) % poly.size()] - z;
        total += std::arg(b / a);
    }
    return int(std::lround(total / (2 * pi)));
}

}  // namespace ahs
