#pragma once

#include <utility>

#include "ahscatter/scattering.hpp"

namespace ahs {

struct FieldSettings {
    QuadratureSettings quad;
    double detour_radius = 1e-2;
    double mu_plus_exclusion = 1e-4;
};

// Right: R/z -> -1 at infinity, cut in z through mu+ (integration rays run to +infinity).
// Left: R_L/z -> +1, cut through mu- (rays run to -infinity).
enum class Side { Right, Left };

struct RadicalBranch {
    Side side = Side::Right;
};

cplx radical_square(const InitialDataSpec& spec, cplx y, cplx z);

// Branch value of R(x,z), continued along the horizontal ray from x.
cplx radical_R(const InitialDataSpec& spec, cplx x, cplx z, RadicalBranch branch = {},
               const FieldSettings& s = {});

// Integrals along the horizontal ray from y0 to (side) infinity:
//   phi = int [R + d (z - mu_d)] dy,  psi = int [1 + (z - a)/R] dy  (d = +1 right, -1 left)
// singular_start marks y0 as a zero of the radicand.
struct RayIntegrals {
    cplx phi;
    cplx psi;
    cplx R_start;
};
RayIntegrals ray_integrals(const InitialDataSpec& spec, cplx y0, cplx z, bool singular_start,
                           Side side, const FieldSettings& s = {});

struct FieldSample {
    cplx x, z, h, g, f;
};

// h(x,z) = -int_{x(z)}^{x} R dy
cplx h_field(const InitialDataSpec& spec, cplx x, cplx z, const FieldSettings& s = {});
// Same integral along the explicit path x(z) -> Re x(z) + i Im x -> x.
cplx h_field_direct(const InitialDataSpec& spec, cplx x, cplx z, const FieldSettings& s = {},
                    std::optional<cplx> xz = std::nullopt);
// Left-normalized h built with R_L.
cplx h_left_field(const InitialDataSpec& spec, cplx x, cplx z, const FieldSettings& s = {});
cplx h_z_field(const InitialDataSpec& spec, cplx x, cplx z, const FieldSettings& s = {});
cplx g_field(const InitialDataSpec& spec, cplx x, cplx z, double f0_at_mu_plus,
             const FieldSettings& s = {});
cplx g_z_field(const InitialDataSpec& spec, cplx x, cplx z, const FieldSettings& s = {});
// Boundary values (g+, g-) at a point of the main arc (z = alpha(y) with real y > x).
std::pair<cplx, cplx> g_boundary_values(const InitialDataSpec& spec, double x, cplx z,
                                        double f0_at_mu_plus, const FieldSettings& s = {});
FieldSample field_sample(const InitialDataSpec& spec, cplx x, cplx z, double f0_at_mu_plus,
                         const FieldSettings& s = {});

// ---------------------------------------------------------------------------------------------
// Loop contour around the main arc, pinched at mu+.

// Arc from alpha (param y_alpha) to mu+ (param y_far); point(y) must tend to mu+ as y grows.
struct ArcParam {
    std::function<cplx(double)> point;
    std::function<cplx(double)> deriv;
    double y_alpha;
    double y_far;
};
ArcParam sigma_arc(const InitialDataSpec& spec, double x);
// Sigma arc from mu+ to alpha(x_ref) bent smoothly to end at alpha.
ArcParam bent_sigma_arc(const InitialDataSpec& spec, double x_ref, cplx alpha);

// Upper half L+ of the clockwise loop: from mu+ along the left side of the arc, around alpha,
// back along the right side. The lower half is the Schwarz reflection.
struct LoopContour {
    std::vector<PathPiece> pieces;
    // approximate preimage of a loop point under alpha, by piece index and parameter
    std::function<std::optional<cplx>(std::size_t, double)> hint;
    ArcParam arc;
    cplx alpha;
    double mu_plus = 0.0;
    double distance = 0.05;

    // Full closed loop (upper and reflected lower half) as a polyline.
    ContourPath polyline(int per_piece = 96) const;
    bool encloses(cplx z) const;
    double distance_to(cplx z) const;
    // Branch of sqrt((zeta-alpha)(zeta-conj alpha)) along L+, starting at +|mu+ - alpha|.
    TrackedRoot radical() const;
};

// Stadium loop at distance d around the arc (shrunk near cuts), pinched at mu+. With spec
// given, hints map loop points to approximate preimages under alpha.
LoopContour stadium_loop(const ArcParam& arc, double mu_plus, double d,
                         const std::vector<LogCut>& cuts,
                         const InitialDataSpec* spec_for_hints = nullptr);

// z-plane radical sqrt((z-alpha)(z-conj alpha)) with R ~ -z, cut along the arc and its mirror.
cplx loop_radical(const LoopContour& loop, cplx z);

// g(z) = R(z)/(4 pi i) * closed-loop integral of f(zeta)/((zeta - z) R(zeta)),
// f = f0 - x zeta - 2 t zeta^2, for z outside the loop.
cplx plemelj_g(const ScatteringData& sd, const LoopContour& loop, double x, cplx z, double t = 0.0,
               const QuadratureSettings& q = {});
// h_z from the loop: (R(z)/2 pi i) loop integral of f'/((zeta-z)R) inside the loop, and 2g' - f'
// outside.
cplx plemelj_h_z(const ScatteringData& sd, const LoopContour& loop, double x, cplx z,
                 double t = 0.0, const QuadratureSettings& q = {});

}  // namespace ahs
