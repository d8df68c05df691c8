#include "ahscatter/ah_transform.hpp"

#include <cmath>

namespace ahs {

std::pair<cplx, cplx> f0_and_prime_at(const InitialDataSpec& spec, cplx xz, cplx z,
                                      double f0_at_mu_plus, const FieldSettings& s) {
    const RayIntegrals A = ray_integrals(spec, xz, z, true, Side::Right, s);
    return {A.phi + (z - spec.mu_plus) * xz + f0_at_mu_plus, A.psi + xz};
}

namespace {

cplx preimage(const InitialDataSpec& spec, cplx z, std::optional<cplx> seed) {
    if (std::abs(z - spec.mu_plus) <= 1e-14)
        throw Error(ErrorKind::AtMuPlus, "z = mu+ has no finite preimage");
    return inverse_map(spec, z, seed);
}

}  // namespace

cplx forward_f0(const InitialDataSpec& spec, cplx z, double f0_at_mu_plus, const FieldSettings& s,
                std::optional<cplx> seed) {
    if (z.imag() < 0) return std::conj(forward_f0(spec, std::conj(z), f0_at_mu_plus, s, seed));
    if (std::abs(z - spec.mu_plus) <= 1e-14) return f0_at_mu_plus;
    return f0_and_prime_at(spec, preimage(spec, z, seed), z, f0_at_mu_plus, s).first;
}

cplx f0_prime(const InitialDataSpec& spec, cplx z, const FieldSettings& s, std::optional<cplx> seed) {
    if (z.imag() < 0) return std::conj(f0_prime(spec, std::conj(z), s, seed));
    return f0_and_prime_at(spec, preimage(spec, z, seed), z, 0.0, s).second;
}

cplx forward_f0_left(const InitialDataSpec& spec, cplx z, double f0_at_mu_minus,
                     const FieldSettings& s) {
    if (z.imag() < 0) return std::conj(forward_f0_left(spec, std::conj(z), f0_at_mu_minus, s));
    if (std::abs(z - spec.mu_minus) <= 1e-14) return f0_at_mu_minus;
    const cplx xz = inverse_map(spec, z);
    const RayIntegrals A = ray_integrals(spec, xz, z, true, Side::Left, s);
    return -A.phi + (z - spec.mu_minus) * xz + f0_at_mu_minus;
}

ScatteringData numeric_scattering(std::shared_ptr<const InitialDataSpec> spec, double K,
                                  const FieldSettings& s) {
    ScatteringData sd;
    sd.mu_minus = spec->mu_minus;
    sd.mu_plus = spec->mu_plus;
    sd.f0_at_mu_plus = K;
    sd.cuts = spec->cuts;
    sd.spec = spec;
    const InitialDataSpec* sp = spec.get();
    // Long rays (z near mu+) split the tolerance over many pieces; one retry at 10x looser.
    FieldSettings loose = s;
    loose.quad.abs_tol *= 10;
    loose.quad.rel_tol *= 10;
    sd.f0_eval = [sp, K, s, loose](cplx z, std::optional<cplx> hint) {
        // f0 - K = O(|z - mu+| log) below round-off of the quadrature
        if (std::abs(z - sp->mu_plus) < 1e-10) return cplx(K);
        try {
            return forward_f0(*sp, z, K, s, hint);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::BudgetExceeded) throw;
            return forward_f0(*sp, z, K, loose, hint);
        }
    };
    sd.f0_prime_eval = [sp, s, loose](cplx z, std::optional<cplx> hint) {
        try {
            return f0_prime(*sp, z, s, hint);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::BudgetExceeded) throw;
            return f0_prime(*sp, z, loose, hint);
        }
    };
    return sd;
}

// ---------------------------------------------------------------------------------------------
// sech closed form

namespace {

struct SechConsts {
    double h;  // mu/2
    cplx T;    // sqrt(h^2 - 1)
    bool soliton;
};

SechConsts sech_consts(double mu) {
    const double h = 0.5 * mu;
    const double t2 = h * h - 1.0;
    return {h, t2 >= 0 ? cplx(std::sqrt(t2), 0.0) : cplx(0.0, std::sqrt(-t2)), t2 < 0};
}

// Real z is read as z + i0.
cplx upper(cplx z) { return z.imag() == 0.0 ? cplx(z.real(), 0.0) : z; }

cplx log_minus_T(const SechConsts& c, cplx z) {
    const cplx w = z - c.T;
    if (!c.soliton) return std::log(w);
    // cut along T - i s, s >= 0 (the segment [0,T] in the upper half-plane)
    return std::log(-I * w) + I * (pi / 2);
}

cplx log_h_minus_z(const SechConsts& c, cplx z) {
    const cplx u = cplx(c.h, 0.0) - z;
    // z + i0 gives u - i0
    return std::log(cplx(u.real(), z.imag() == 0.0 ? -0.0 : u.imag()));
}

cplx sech_f0_raw(const SechConsts& c, cplx z) {
    z = upper(z);
    const cplx u = cplx(c.h, 0.0) - z;
    auto xlogx = [](cplx w, cplx lw) { return std::abs(w) == 0.0 ? cplx(0.0) : w * lw; };
    return xlogx(u, I * (pi / 2) + log_h_minus_z(c, z)) +
           0.5 * xlogx(z + c.T, std::log(z + c.T)) + 0.5 * xlogx(z - c.T, log_minus_T(c, z));
}

}  // namespace

cplx sech_closed_form_f0_prime(double mu, cplx z) {
    const SechConsts c = sech_consts(mu);
    z = upper(z);
    return -I * (pi / 2) - log_h_minus_z(c, z) + 0.5 * (std::log(z + c.T) + log_minus_T(c, z));
}

ScatteringData sech_closed_form_scattering(double mu, double K) {
    const SechConsts c = sech_consts(mu);
    ScatteringData sd;
    sd.mu_minus = -c.h;
    sd.mu_plus = c.h;
    sd.f0_at_mu_plus = K;
    sd.closed_form = true;
    sd.spec = std::make_shared<const InitialDataSpec>(builtin_family("sech", mu));
    if (c.soliton) sd.cuts.push_back(LogCut{c.T, false});
    const double C = K - sech_f0_raw(c, cplx(c.h, 0.0)).real();
    sd.f0_eval = [c, C](cplx z, std::optional<cplx>) { return sech_f0_raw(c, z) + C; };
    sd.f0_prime_eval = [mu](cplx z, std::optional<cplx>) { return sech_closed_form_f0_prime(mu, z); };
    return sd;
}

// ---------------------------------------------------------------------------------------------
// Inverse transform

ContourPath sigma_path_to(const InitialDataSpec& spec, double x0, int nodes) {
    double Y = x0 + 1.0;
    while (std::abs(spec.alpha(Y) - spec.mu_plus) > 1e-14 && Y < x0 + 400) Y += 1.0;
    ContourPath p;
    p.nodes.push_back(spec.mu_plus);
    for (int k = nodes; k >= 0; --k) {
        const double u = double(k) / nodes;
        p.nodes.push_back(spec.alpha(x0 + (Y - x0) * u * u));
    }
    return p;
}

namespace {

// Below this distance from mu+ the integral is replaced by (f0(zeta0) - K)/R(zeta0).
constexpr double mu_plus_gap = 1e-6;

}  // namespace

double inverse_x(const ScatteringData& sd, cplx alpha, const ContourPath& path,
                 const QuadratureSettings& q) {
    if (std::abs(alpha - sd.mu_plus) <= 1e-14) return 0.0;
    if (path.nodes.size() < 2 || std::abs(path.nodes.front() - sd.mu_plus) > 1e-6 ||
        std::abs(path.nodes.back() - alpha) > 1e-10)
        throw Error(ErrorKind::PathNotOnSigma, "path must run from mu+ to alpha");
    std::size_t first = 0;
    while (first + 2 < path.nodes.size() &&
           std::abs(path.nodes[first] - sd.mu_plus) < mu_plus_gap)
        ++first;
    std::vector<PathPiece> pieces;
    const std::size_t n = path.nodes.size() - 1;
    for (std::size_t k = first; k < n; ++k) {
        const cplx a = path.nodes[k], b = path.nodes[k + 1];
        if (std::abs(b - a) == 0.0) continue;
        if (k + 1 == n) pieces.push_back(line_piece_sq_end(a, b));
        else pieces.push_back(line_piece(a, b));
    }
    auto sq = [alpha](cplx zeta) { return (zeta - alpha) * (zeta - std::conj(alpha)); };
    TrackedRoot tr(sq, std::move(pieces), cplx(std::abs(sd.mu_plus - alpha), 0.0), false);
    cplx v;
    try {
        v = tr.integrate([&](cplx zeta, cplx R) { return sd.f0_prime(zeta) / R; }, q).value;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NonFiniteIntegrand || e.kind() == ErrorKind::BudgetExceeded)
            throw Error(ErrorKind::SingularityUnresolved, e.what());
        throw;
    }
    const cplx z0 = path.nodes[first];
    if (std::abs(z0 - sd.mu_plus) > 0.0) v += (sd.f0(z0) - sd.f0_at_mu_plus) / tr.start_value();
    return 2.0 / pi * v.imag();
}

double inverse_x_sigma(const ScatteringData& sd, double x0, double lift, const QuadratureSettings& q) {
    if (!sd.spec) throw Error(ErrorKind::ConfigInvalid, "lifted inverse needs the source spec");
    const InitialDataSpec& spec = *sd.spec;
    const cplx a0 = spec.alpha(x0);
    if (std::abs(a0 - sd.mu_plus) <= 1e-14) return 0.0;
    double Y = x0 + 1.0;
    const double gap = mu_plus_gap * std::min(1.0, std::abs(a0 - sd.mu_plus));
    while (std::abs(spec.alpha(cplx(Y, lift)) - spec.mu_plus) > gap && Y < x0 + 400) Y += 0.25;
    const cplx top(x0, lift);
    std::vector<PathPiece> pieces;
    const int nh = std::max(1, int(std::ceil((Y - x0) / 2.0)));
    for (int k = 0; k < nh; ++k) {
        const double ya = Y - (Y - x0) * double(k) / nh, yb = Y - (Y - x0) * double(k + 1) / nh;
        pieces.push_back(line_piece(cplx(ya, lift), cplx(yb, lift)));
    }
    // a square-root endpoint unless alpha'(x0) = 0, where R has a simple zero
    if (std::abs(spec.alpha_prime(x0)) > 1e-8) pieces.push_back(line_piece_sq_end(top, cplx(x0, 0.0)));
    else pieces.push_back(line_piece(top, cplx(x0, 0.0)));
    auto sq = [&spec, a0, x0](cplx y) {
        // alpha(y) - alpha(x0) without cancellation near x0
        const cplx d = std::abs(y - x0) < 1e-4 ? spec.alpha_prime(0.5 * (y + x0)) * (y - x0)
                                                : spec.alpha(y) - a0;
        return d * (d + a0 - std::conj(a0));
    };
    TrackedRoot tr(sq, std::move(pieces), cplx(std::abs(sd.mu_plus - a0), 0.0), false);
    FieldSettings inner;
    inner.quad.rel_tol = 1e-10;
    auto F = [&](cplx y, cplx R) {
        const cplx zeta = spec.alpha(y);
        const cplx ap = spec.alpha_prime(y);
        // f0' is weighted by alpha', so its absolute accuracy can be relaxed where alpha' is small
        FieldSettings in = inner;
        in.quad.abs_tol = 1e-12 / std::max(std::abs(ap), 1e-12);
        const cplx fp = sd.closed_form ? sd.f0_prime(zeta)
                                       : f0_and_prime_at(spec, y, zeta, 0.0, in).second;
        return fp / R * ap;
    };
    cplx v;
    try {
        v = tr.integrate(F, q).value;
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::NonFiniteIntegrand || e.kind() == ErrorKind::BudgetExceeded)
            throw Error(ErrorKind::SingularityUnresolved, e.what());
        throw;
    }
    const cplx y0(Y, lift), z0 = spec.alpha(y0);
    FieldSettings small;
    small.quad.abs_tol = 1e-14;
    small.quad.rel_tol = 1e-6;
    const cplx f00 = sd.closed_form ? sd.f0(z0) - sd.f0_at_mu_plus
                                    : f0_and_prime_at(spec, y0, z0, 0.0, small).first;
    v += f00 / tr.start_value();
    return 2.0 / pi * v.imag();
}

RoundtripReport roundtrip(const InitialDataSpec& spec, const std::vector<double>& xs,
                          const FieldSettings& s) {
    auto sp = std::make_shared<InitialDataSpec>(spec);
    const ScatteringData sd = numeric_scattering(sp, 0.0, s);
    RoundtripReport rep;
    for (double x : xs) {
        const double r = inverse_x_sigma(sd, x);
        rep.x.push_back(x);
        rep.recovered.push_back(r);
        rep.max_error = std::max(rep.max_error, std::abs(r - x));
    }
    return rep;
}

double roundtrip_residual(const InitialDataSpec& spec, const std::vector<double>& xs,
                          const FieldSettings& s) {
    return roundtrip(spec, xs, s).max_error;
}

// ---------------------------------------------------------------------------------------------
// Jump across a log-point cut

cplx branch_jump_delta_f(const InitialDataSpec& spec, cplx z, double x, const FieldSettings& s) {
    const LogCut* cut = nullptr;
    for (const LogCut& c : spec.cuts)
        if (c.distance(z) <= 1e-9 * std::max(1.0, std::abs(z))) cut = &c;
    if (!cut) throw Error(ErrorKind::NoCut, "z is not on a log-point cut");
    if (std::abs(z - cut->z_star) <= 1e-8 || (!cut->upward && std::abs(z.imag()) <= 1e-8))
        throw Error(ErrorKind::AtCutEndpoint, "z is at an endpoint of the cut");
    // Preimages reached from the right (+) and left (-) side of the vertical cut.
    const double delta = 1e-6 * std::max(1.0, std::abs(z));
    const cplx xp = inverse_map(spec, z, inverse_map(spec, z + delta));
    const cplx xm = inverse_map(spec, z, inverse_map(spec, z - delta));
    if (std::abs(xp - xm) <= 1e-10) throw Error(ErrorKind::NoCut, "x(z) is continuous across z");
    return h_field_direct(spec, x, z, s, xp) - h_field_direct(spec, x, z, s, xm);
}

}  // namespace ahs
