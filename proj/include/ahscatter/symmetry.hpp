#pragma once

#include <vector>

#include "ahscatter/radical_fields.hpp"

namespace ahs {

// max |alpha(-conj x) + conj alpha(x)|
double check_alpha_symmetry(const InitialDataSpec& spec, const std::vector<cplx>& x_samples);
// max |x(-conj z) + conj x(z)|
double check_x_symmetry(const InitialDataSpec& spec, const std::vector<cplx>& z_samples);
// max |R^2(-conj x, -conj z) - conj R^2(x, z)| over the sample product
double check_r2_symmetry(const InitialDataSpec& spec, const std::vector<cplx>& x_samples,
                         const std::vector<cplx>& z_samples);

// Sigma(x): region bounded by gamma(-conj x) and -conj gamma(x), united with its mirror image
// in the imaginary axis, inside the closed upper half-plane.
struct SymmetryRegion {
    cplx x;
    ContourPath boundary;  // closed polygon: image of the line through -conj x, closed along R
    bool contains(cplx z) const;
    double distance_to_boundary(cplx z) const;
};
SymmetryRegion symmetry_region(const InitialDataSpec& spec, cplx x, int nodes = 2000);

struct HSymmetrySample {
    cplx z;
    bool inside = false;
    double deviation = 0.0;     // |h(-x, -conj z) -+ conj h(x, z)| with the sign for its region
    double hl_deviation = 0.0;  // |Im h_L(-x, -conj z) - Im h_R(x, z)|
};
struct HSymmetryReport {
    double x = 0.0;
    std::vector<HSymmetrySample> samples;
    double max_deviation_inside = 0.0;
    double max_deviation_outside = 0.0;
    double max_hl_deviation = 0.0;
};
// Throws ClassificationAmbiguous for samples within ambiguity of the region boundary.
HSymmetryReport check_h_symmetry(const InitialDataSpec& spec, double x,
                                 const std::vector<cplx>& z_samples, double ambiguity = 1e-3,
                                 const FieldSettings& s = {});

struct ParityReport {
    double w_even = 0.0;         // max |w(z) - w(-z)|
    double re_h_parity = 0.0;    // max |Re h(-x,-z) -+ Re h(x,z)| (minus for |z| < mu+)
    int points = 0;
};
// Real-axis parity relations at fixed real x.
ParityReport check_real_parity(const InitialDataSpec& spec, double x, const std::vector<double>& z_samples,
                               const FieldSettings& s = {});

}  // namespace ahs
