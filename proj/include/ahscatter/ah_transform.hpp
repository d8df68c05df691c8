#pragma once

#include <memory>

#include "ahscatter/radical_fields.hpp"

namespace ahs {

// f0(z) = int_{x(z)}^{+inf} [z - mu+ + R(y,z)] dy + (z - mu+) x(z) + f0_at_mu_plus
cplx forward_f0(const InitialDataSpec& spec, cplx z, double f0_at_mu_plus,
                const FieldSettings& s = {}, std::optional<cplx> seed = std::nullopt);
// f0'(z) = int_{x(z)}^{+inf} [1 + (z - a(y))/R(y,z)] dy + x(z)
cplx f0_prime(const InitialDataSpec& spec, cplx z, const FieldSettings& s = {},
              std::optional<cplx> seed = std::nullopt);
// Both at a known preimage xz of z (no inverse map).
std::pair<cplx, cplx> f0_and_prime_at(const InitialDataSpec& spec, cplx xz, cplx z,
                                      double f0_at_mu_plus, const FieldSettings& s = {});
// Same construction anchored at -infinity and mu-.
cplx forward_f0_left(const InitialDataSpec& spec, cplx z, double f0_at_mu_minus,
                     const FieldSettings& s = {});

// Scattering data computed from the initial data by quadrature.
ScatteringData numeric_scattering(std::shared_ptr<const InitialDataSpec> spec,
                                  double f0_at_mu_plus = 0.0, const FieldSettings& s = {});
// Closed form for the sech family alpha = ((mu/2) sinh x + i)/cosh x.
ScatteringData sech_closed_form_scattering(double mu, double f0_at_mu_plus = 0.0);
// The closed-form f0' (principal logs, with the cut [0,T] when mu < 2).
cplx sech_closed_form_f0_prime(double mu, cplx z);

// x(alpha) = (2/pi) Im int_{mu+}^{alpha} f0'(zeta) / R+(zeta) d zeta along a polyline on Sigma.
double inverse_x(const ScatteringData& sd, cplx alpha, const ContourPath& sigma_path,
                 const QuadratureSettings& q = {});
// Same integral along the image of the path x0 -> x0 + i lift -> +inf + i lift under alpha.
// Requires sd.spec.
double inverse_x_sigma(const ScatteringData& sd, double x0, double lift = 0.05,
                       const QuadratureSettings& q = {});
// Polyline on Sigma from mu+ to alpha(x0).
ContourPath sigma_path_to(const InitialDataSpec& spec, double x0, int nodes = 400);

struct RoundtripReport {
    std::vector<double> x;
    std::vector<double> recovered;
    double max_error = 0.0;
};
RoundtripReport roundtrip(const InitialDataSpec& spec, const std::vector<double>& x_samples,
                          const FieldSettings& s = {});
double roundtrip_residual(const InitialDataSpec& spec, const std::vector<double>& x_samples,
                          const FieldSettings& s = {});

// Jump of f across a log-point cut: h(x, z+) - h(x, z-) = -int_{x(z-)}^{x(z+)} R dy.
cplx branch_jump_delta_f(const InitialDataSpec& spec, cplx z_on_cut, double x = 0.0,
                         const FieldSettings& s = {});

}  // namespace ahs
