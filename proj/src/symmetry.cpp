#include "ahscatter/symmetry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ahscatter/sign_analysis.hpp"

namespace ahs {

namespace {

// The ray form of h is undefined when the ray from x(z) meets the other zero of R^2;
// the straight path from x to x(z) still is.
cplx h_any(const InitialDataSpec& spec, cplx x, cplx z, const FieldSettings& s) {
    try {
        return h_field(spec, x, z, s);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::PathCrossesCut) throw;
        return h_field_direct(spec, x, z, s);
    }
}

}  // namespace

double check_alpha_symmetry(const InitialDataSpec& spec, const std::vector<cplx>& x_samples) {
    double m = 0.0;
    for (cplx x : x_samples)
        m = std::max(m, std::abs(alpha_checked(spec, -std::conj(x)) + std::conj(alpha_checked(spec, x))));
    return m;
}

double check_x_symmetry(const InitialDataSpec& spec, const std::vector<cplx>& z_samples) {
    double m = 0.0;
    for (cplx z : z_samples) {
        const cplx xz = inverse_map(spec, z);
        const cplx xm = inverse_map(spec, -std::conj(z));
        m = std::max(m, std::abs(xm + std::conj(xz)));
    }
    return m;
}

double check_r2_symmetry(const InitialDataSpec& spec, const std::vector<cplx>& x_samples,
                         const std::vector<cplx>& z_samples) {
    double m = 0.0;
    for (cplx x : x_samples)
        for (cplx z : z_samples)
            m = std::max(m, std::abs(radical_square(spec, -std::conj(x), -std::conj(z)) -
                                     std::conj(radical_square(spec, x, z))));
    return m;
}

bool SymmetryRegion::contains(cplx z) const {
    if (z.imag() < 0) return false;
    return winding_number(boundary.nodes, z) != 0 || winding_number(boundary.nodes, -std::conj(z)) != 0;
}

double SymmetryRegion::distance_to_boundary(cplx z) const {
    std::vector<cplx> poly = boundary.nodes;
    poly.push_back(poly.front());
    return std::min(distance_to_polyline(z, poly), distance_to_polyline(-std::conj(z), poly));
}

SymmetryRegion symmetry_region(const InitialDataSpec& spec, cplx x, int nodes) {
    SymmetryRegion r;
    r.x = x;
    const cplx base = -std::conj(x);
    // parameter s on the line base + s, clustered near s = 0
    for (int k = 0; k <= nodes; ++k) {
        const double u = -1.0 + 2.0 * k / double(nodes);
        const double s = 40.0 * std::atanh(0.999999 * u) / std::atanh(0.999999);
        r.boundary.nodes.push_back(alpha_checked(spec, base - s));
    }
    // ends approach mu+ (first) and mu-; pin them and close along the real axis
    r.boundary.nodes.front() = spec.mu_plus;
    r.boundary.nodes.back() = spec.mu_minus;
    r.boundary.closed = true;
    return r;
}

HSymmetryReport check_h_symmetry(const InitialDataSpec& spec, double x,
                                 const std::vector<cplx>& z_samples, double ambiguity,
                                 const FieldSettings& s) {
    HSymmetryReport rep;
    rep.x = x;
    const SymmetryRegion reg = symmetry_region(spec, x);
    for (cplx z : z_samples) {
        if (reg.distance_to_boundary(z) < ambiguity) {
            std::ostringstream os;
            os << "z = " << z << " is within " << ambiguity << " of the boundary of Sigma(x)";
            throw Error(ErrorKind::ClassificationAmbiguous, os.str());
        }
        HSymmetrySample smp;
        smp.z = z;
        smp.inside = reg.contains(z);
        const cplx zm = -std::conj(z);
        const cplx h = h_any(spec, x, z, s);
        const cplx hm = h_any(spec, -x, zm, s);
        smp.deviation = smp.inside ? std::abs(hm + std::conj(h)) : std::abs(hm - std::conj(h));
        const cplx hl = h_left_field(spec, -x, zm, s);
        smp.hl_deviation = std::abs(hl.imag() - h.imag());
        if (smp.inside) rep.max_deviation_inside = std::max(rep.max_deviation_inside, smp.deviation);
        else rep.max_deviation_outside = std::max(rep.max_deviation_outside, smp.deviation);
        rep.max_hl_deviation = std::max(rep.max_hl_deviation, smp.hl_deviation);
        rep.samples.push_back(smp);
    }
    return rep;
}

ParityReport check_real_parity(const InitialDataSpec& spec, double x, const std::vector<double>& z_samples,
                               const FieldSettings& s) {
    ParityReport rep;
    for (double z : z_samples) {
        rep.w_even = std::max(rep.w_even, std::abs(w_of_z(spec, z, s) - w_of_z(spec, -z, s)));
        const double hp = h_any(spec, x, z, s).real();
        const double hm = h_any(spec, -x, -z, s).real();
        const bool interior = std::abs(z) < spec.mu_plus;
        rep.re_h_parity = std::max(rep.re_h_parity, interior ? std::abs(hm + hp) : std::abs(hm - hp));
        ++rep.points;
    }
    return rep;
}

}  // namespace ahs
