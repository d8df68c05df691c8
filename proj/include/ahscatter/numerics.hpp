#pragma once

#include <functional>
#include <vector>

#include "ahscatter/core.hpp"

namespace ahs {

// Oriented polyline; closed paths repeat no node (the closing segment is implicit).
struct ContourPath {
    std::vector<cplx> nodes;
    bool closed = false;
    int orientation = 1;

    void validate() const;
    ContourPath reversed() const;
    double length() const;
    std::size_t segment_count() const;
    cplx segment_start(std::size_t k) const { return nodes[k]; }
    cplx segment_end(std::size_t k) const { return nodes[(k + 1) % nodes.size()]; }
};

struct QuadratureSettings {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_subdivisions = 2000;
    bool singular_start = false;  // integrand may blow up like distance^(-1/2)
    bool singular_end = false;
};

struct QuadratureResult {
    cplx value;
    double error_estimate = 0.0;
    int evaluations = 0;
};

// Adaptive Gauss-Kronrod (10/21) over a real interval with complex values.
QuadratureResult integrate_interval(const std::function<cplx(double)>& f, double a, double b,
                                    const QuadratureSettings& s = {});

// Integral of f(zeta) d(zeta) along a polyline. Singular flags refer to the first/last node.
QuadratureResult integrate_path(const std::function<cplx(cplx)>& f, const ContourPath& path,
                                const QuadratureSettings& s = {});

struct RootSettings {
    double residual_tol = 1e-12;
    int max_iterations = 60;
    double finite_difference_step = 1e-7;
    double derivative_floor = 1e-14;
};

cplx find_root(const std::function<cplx(cplx)>& map, cplx seed, const RootSettings& s = {});
cplx find_root(const std::function<cplx(cplx)>& map, const std::function<cplx(cplx)>& derivative,
               cplx seed, const RootSettings& s = {});

struct Rect {
    double re_min, re_max, im_min, im_max;
    bool contains(cplx z) const {
        return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
    }
};

enum class TraceStop { LeftBounds, Closed, ReachedAttractor, GradientCollapse, NodeLimit, Blocked };
const char* trace_stop_name(TraceStop s);

struct TraceSettings {
    double min_step = 1e-4;
    double max_step = 1e-1;
    double corrector_tol = 1e-9;
    int max_nodes = 20000;
    double gradient_floor = 1e-9;
    std::vector<cplx> attractors;
    double attractor_radius = 0.0;  // 0: use the current step
    // Optional veto on a step p -> q (e.g. crossing a branch cut); stops the trace when true.
    std::function<bool(cplx, cplx)> blocked;
};

struct TraceResult {
    ContourPath path;
    TraceStop stop = TraceStop::LeftBounds;
    int attractor_index = -1;
};

// Predictor-corrector tracing of {field = 0}. Throws SeedNotOnCurve when the seed cannot be
// corrected onto the curve, StagnationAtCriticalPoint when the gradient vanishes at the seed.
TraceResult trace_implicit_curve(const std::function<double(cplx)>& field, cplx seed,
                                 cplx initial_direction, double step, const Rect& bounds,
                                 const TraceSettings& s = {});

// ---------------------------------------------------------------------------------------------
// Square roots followed continuously along a parametrized path.

struct PathPiece {
    // tau in [0,1] -> point and d(point)/d(tau)
    std::function<cplx(double)> point;
    std::function<cplx(double)> deriv;
};

PathPiece line_piece(cplx a, cplx b);
// a + (b-a) tau^2 : clusters nodes at a (use when a is a square-root endpoint)
PathPiece line_piece_sq_start(cplx a, cplx b);
// b - (b-a)(1-tau)^2 : clusters nodes at b
PathPiece line_piece_sq_end(cplx a, cplx b);
PathPiece arc_piece(cplx center, double radius, double theta0, double theta1);

class TrackedRoot {
public:
    // square(point) is the radicand; anchor is the root value at the anchored end of the whole
    // chain (end of the last piece when anchor_at_end, else start of the first).
    TrackedRoot(std::function<cplx(cplx)> square, std::vector<PathPiece> pieces, cplx anchor,
                bool anchor_at_end);

    cplx at(std::size_t piece, double tau) const;
    cplx start_value() const { return skel_.front().r.front(); }
    cplx end_value() const { return skel_.back().r.back(); }
    const std::vector<PathPiece>& pieces() const { return pieces_; }

    // Sum over pieces of int_0^1 F(point, root) point'(tau) d tau.
    QuadratureResult integrate(const std::function<cplx(cplx, cplx)>& F,
                               const QuadratureSettings& s) const;
    // Integrates several integrands sharing evaluation nodes; returns one value per integrand.
    std::vector<cplx> integrate_many(const std::function<void(cplx, cplx, cplx*)>& F, int count,
                                     const QuadratureSettings& s) const;
    // As integrate_many, with the piece index and local parameter passed through.
    std::vector<cplx> integrate_pieces(
        const std::function<void(std::size_t, double, cplx, cplx, cplx*)>& F, int count,
        const QuadratureSettings& s) const;

private:
    struct Skeleton {
        std::vector<double> t;
        std::vector<cplx> r;
    };
    Skeleton build(const PathPiece& p, cplx anchor, bool from_end) const;
    cplx pick(cplx sq_point, cplx predicted) const;

    std::function<cplx(cplx)> square_;
    std::vector<PathPiece> pieces_;
    std::vector<Skeleton> skel_;
};

// Utility geometry.
bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2);
double distance_to_segment(cplx z, cplx a, cplx b);
double distance_to_polyline(cplx z, const std::vector<cplx>& poly);
// Winding number of a closed polygon around z.
int winding_number(const std::vector<cplx>& polygon, cplx z);

}  // namespace ahs
