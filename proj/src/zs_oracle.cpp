#include "ahscatter/zs_oracle.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/numeric/odeint.hpp>

#include "ahscatter/sign_analysis.hpp"

namespace ahs {

namespace {

using lcplx = std::complex<ldouble>;
using State = std::array<lcplx, 2>;
namespace odeint = boost::numeric::odeint;

constexpr ldouble ln2 = 0.693147180559945309417232121458176568L;

ldouble log_cosh(ldouble x) {
    const ldouble ax = std::fabs(x);
    return ax + std::log1p(std::exp(-2 * ax)) - ln2;
}

double outward_support(const std::function<ldouble(ldouble)>& A, double bound) {
    for (double X = 1.0; X < 700.0; X *= 1.25) {
        bool small = true;
        for (double s : {1.0, 1.1, 1.25})
            small = small && std::fabs(A(s * X)) <= bound && std::fabs(A(-s * X)) <= bound;
        if (small) return X;
    }
    throw Error(ErrorKind::TruncationNotConverged, "amplitude does not decay below the bound");
}

// S = -2 int_0^x Re alpha, accumulated between cached nodes at spacing 1/4.
class CachedPhase {
public:
    explicit CachedPhase(std::function<cplx(cplx)> alpha) : alpha_(std::move(alpha)) { nodes_[0] = 0.0L; }
    ldouble operator()(ldouble x) {
        const long k = std::lround(std::floor(x * 4.0L));
        const long k0 = x >= 0 ? k : k + 1;  // node between 0 and x
        const ldouble base = node(k0);
        return base + piece(ldouble(k0) / 4, x);
    }

private:
    ldouble piece(ldouble u, ldouble v) const {
        if (u == v) return 0.0L;
        auto a = [this](ldouble y) { return ldouble(alpha_(cplx(double(y), 0.0)).real()); };
        return -2 * boost::math::quadrature::gauss_kronrod<ldouble, 31>::integrate(a, u, v, 0, 0);
    }
    ldouble node(long k) {
        std::lock_guard<std::mutex> lock(m_);
        auto it = nodes_.find(k);
        if (it != nodes_.end()) return it->second;
        const long step = k > 0 ? 1 : -1;
        long j = 0;
        while (nodes_.count(j + step) && j != k) j += step;
        ldouble s = nodes_[j];
        for (; j != k; j += step) {
            s += piece(ldouble(j) / 4, ldouble(j + step) / 4);
            nodes_[j + step] = s;
        }
        return s;
    }
    std::function<cplx(cplx)> alpha_;
    std::map<long, ldouble> nodes_;
    std::mutex m_;
};

struct Run {
    State u;
    long steps;
};

Run run_once(const ZsPotential& q, ldouble z, ldouble eps, ldouble X, const ZsSettings& zs) {
    auto rhs = [&](const State& u, State& du, ldouble x) {
        const ldouble A = q.amplitude(x);
        const ldouble theta = (q.phase(x) + 2 * z * x) / eps;
        const lcplx Q = A * lcplx(std::cos(theta), std::sin(theta));
        const lcplx m(0.0L, -1.0L / eps);
        du[0] = m * Q * u[1];
        du[1] = m * std::conj(Q) * u[0];
    };
    // Long steps in the tails can straddle oscillations with a deceptively small error estimate.
    ldouble scale = std::fabs(z);
    for (int k = 0; k <= 2000; ++k) {
        const ldouble x = -X + 2 * X * k / 2000, dx = 1e-4L;
        scale = std::max({scale, std::fabs(q.amplitude(x)),
                          std::fabs(q.phase(x + dx) - q.phase(x - dx)) / (4 * dx)});
    }
    const ldouble max_dt = eps / (10 * std::max(scale, 1e-3L));
    using Stepper = odeint::runge_kutta_fehlberg78<State, ldouble, State, ldouble>;
    auto stepper = odeint::make_controlled<Stepper>(ldouble(zs.ode_tol), 0.0L, max_dt);
    Run r{State{lcplx(1.0L), lcplx(0.0L)}, 0};
    struct TooMany {};
    try {
        r.steps = long(odeint::integrate_adaptive(
            stepper, rhs, r.u, -X, X, eps / 100,
            [&](const State&, ldouble) {
                if (++r.steps > zs.max_steps) throw TooMany{};
            }));
    } catch (const TooMany&) {
        throw Error(ErrorKind::StiffnessFailure, "ZS integration exceeded the step budget");
    } catch (const std::exception& e) {
        throw Error(ErrorKind::StiffnessFailure, std::string("ZS step control failed: ") + e.what());
    }
    for (const lcplx& c : r.u)
        if (!std::isfinite(double(c.real())) || !std::isfinite(double(c.imag())))
            throw Error(ErrorKind::StiffnessFailure, "ZS integration produced non-finite values");
    return r;
}

}  // namespace

ZsPotential zero_potential() {
    ZsPotential q;
    q.amplitude = [](ldouble) { return 0.0L; };
    q.phase = [](ldouble) { return 0.0L; };
    q.support = [](double) { return 1.0; };
    return q;
}

ZsPotential zs_potential(const InitialDataSpec& spec) {
    ZsPotential q;
    const ldouble p = spec.parameter;
    if (spec.family_tag == "sech_family") {
        q.amplitude = [](ldouble x) { return 1.0L / std::cosh(x); };
        q.phase = [p](ldouble x) { return -p * log_cosh(x); };
        q.support = [](double bound) { return std::log(2.0 / bound); };
    } else if (spec.family_tag == "bronski") {
        q.amplitude = [](ldouble x) { return 1.0L / std::cosh(2 * x); };
        q.phase = [p](ldouble x) { return p / std::cosh(2 * x); };
        q.support = [](double bound) { return 0.5 * std::log(2.0 / bound); };
    } else if (spec.family_tag == "double_hump") {
        q.amplitude = [p](ldouble x) {
            const ldouble s = 1.0L / std::cosh(x);
            return s - p * s * s;
        };
        q.phase = [](ldouble x) { return -2 * log_cosh(x); };
        q.support = [](double bound) { return std::log(2.0 / bound); };
    } else {
        auto alpha = spec.alpha;
        q.amplitude = [alpha](ldouble x) { return ldouble(alpha(cplx(double(x), 0.0)).imag()); };
        auto phase = std::make_shared<CachedPhase>(alpha);
        q.phase = [phase](ldouble x) { return (*phase)(x); };
        auto A = q.amplitude;
        q.support = [A](double bound) { return outward_support(A, bound); };
    }
    return q;
}

ScatteringCoefficients integrate_zs(const ZsPotential& q, double z, double epsilon, const ZsSettings& zs) {
    if (!(epsilon > 1e-3 && epsilon <= 1.0))
        throw Error(ErrorKind::ParameterOutOfRange, "epsilon must lie in (1e-3, 1]");
    double X = zs.x_truncation > 0 ? zs.x_truncation : std::max(1.0, q.support(zs.ode_tol * epsilon));
    Run prev = run_once(q, z, epsilon, X, zs);
    long steps = prev.steps;
    // Truncation is accepted once doubling X moves (a, b) by less than the integration noise.
    const ldouble accept = 1e3L * zs.ode_tol;
    bool converged = false;
    ldouble noise = 0.0L;
    for (int k = 0; k < zs.max_doublings; ++k) {
        Run next = run_once(q, z, epsilon, 2 * X, zs);
        steps += next.steps;
        const ldouble d = std::abs(next.u[0] - prev.u[0]) + std::abs(next.u[1] - prev.u[1]);
        X *= 2;
        prev = next;
        noise = d;
        if (d <= accept) {
            converged = true;
            break;
        }
    }
    if (!converged && zs.max_doublings > 0)
        throw Error(ErrorKind::TruncationNotConverged, "coefficients still move when the domain is doubled");

    // Undo the gauge at +X: W = (u0 e^{-izX/eps}, u1 e^{izX/eps}) and the boundary normalization at
    // -X, which also carries the plane waves; both phases cancel in the stripped variables.
    ScatteringCoefficients out;
    out.z = z;
    out.epsilon = epsilon;
    out.a_coef = cplx(double(prev.u[0].real()), double(prev.u[0].imag()));
    out.b_coef = cplx(double(prev.u[1].real()), double(prev.u[1].imag()));
    out.r = prev.u[0] == 0.0L ? cplx(INFINITY, 0.0) : out.b_coef / out.a_coef;
    out.log_abs_r = std::log(std::abs(prev.u[1])) - std::log(std::abs(prev.u[0]));
    out.domain_truncation = X;
    out.unitarity_defect = double(std::fabs(std::norm(prev.u[0]) + std::norm(prev.u[1]) - 1.0L));
    out.coefficient_noise = double(noise);
    out.steps = steps;
    return out;
}

ScatteringCoefficients integrate_zs(const InitialDataSpec& spec, double z, double epsilon, const ZsSettings& zs) {
    return integrate_zs(zs_potential(spec), z, epsilon, zs);
}

SemiclassicalCheck semiclassical_limit_check(const InitialDataSpec& spec, const ScatteringData& sd,
                                             double z, const std::vector<double>& epsilon_list,
                                             const ZsSettings& zs) {
    if (epsilon_list.size() < 2)
        throw Error(ErrorKind::ParameterOutOfRange, "need at least two values of epsilon");
    std::vector<double> eps = epsilon_list;
    std::sort(eps.begin(), eps.end(), std::greater<>());
    const ZsPotential q = zs_potential(spec);
    const ldouble floor_ab = 1e3L * zs.ode_tol;

    SemiclassicalCheck out;
    out.z = z;
    for (double e : eps) {
        const ScatteringCoefficients c = integrate_zs(q, z, e, zs);
        const double amin = std::min(std::abs(c.a_coef), std::abs(c.b_coef));
        if (c.log_abs_r < std::log(1e-280L) || amin < floor_ab)
            throw Error(ErrorKind::ReflectionUnderflow,
                        "reflection coefficient at the noise floor for z = " + std::to_string(z) +
                            ", eps = " + std::to_string(e));
        const double im = 0.5 * e * double(c.log_abs_r);
        double re = -0.5 * e * std::arg(c.r);
        // branch of ln r: follow the real part from the previous estimates
        const size_t n = out.estimates.size();
        if (n > 0) {
            double pred = out.estimates[n - 1].value.real();
            if (n > 1) {
                const auto& p1 = out.estimates[n - 1];
                const auto& p0 = out.estimates[n - 2];
                pred += (e - p1.epsilon) * (p1.value.real() - p0.value.real()) / (p1.epsilon - p0.epsilon);
            }
            const double k = std::round((pred - re) / (pi * e));
            re += k * pi * e;
        }
        const double sigma = 0.5 * e * c.coefficient_noise * (1 / std::abs(c.a_coef) + 1 / std::abs(c.b_coef));
        out.estimates.push_back({e, cplx(re, im), sigma});
    }
    // least-squares line in eps; the intercept is the limit
    const double n = double(out.estimates.size());
    double se = 0, see = 0;
    cplx sv = 0, sev = 0;
    for (const auto& s : out.estimates) {
        se += s.epsilon;
        see += s.epsilon * s.epsilon;
        sv += s.value;
        sev += s.epsilon * s.value;
    }
    const double det = n * see - se * se;
    out.extrapolated = (see * sv - se * sev) / det;
    out.f0 = sd.f0(cplx(z, 1e-12));
    const double im = out.extrapolated.imag();
    out.deviation_from_f0 = std::min(std::abs(im - out.f0.imag()), std::abs(im + out.f0.imag()));
    out.real_offset = out.extrapolated.real() - out.f0.real();
    out.w = w_of_z(spec, z);
    out.deviation_from_w = std::abs(im - out.w);
    out.monotone = true;
    for (size_t k = 1; k < out.estimates.size(); ++k) {
        const auto& cur = out.estimates[k];
        const double dk = std::abs(cur.value.imag() - out.w);
        const double dp = std::abs(out.estimates[k - 1].value.imag() - out.w);
        out.monotone = out.monotone && (dk < dp || dk <= 3 * cur.uncertainty);
    }
    return out;
}

std::vector<ScatteringCoefficients> zs_sweep(const InitialDataSpec& spec, const std::vector<double>& zs,
                                             const std::vector<double>& epsilons, int threads,
                                             const ZsSettings& settings) {
    const ZsPotential q = zs_potential(spec);
    const size_t total = zs.size() * epsilons.size();
    std::vector<ScatteringCoefficients> out(total);
    std::vector<std::exception_ptr> errs(total);
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i; (i = next++) < total;) {
            try {
                out[i] = integrate_zs(q, zs[i / epsilons.size()], epsilons[i % epsilons.size()], settings);
            } catch (...) {
                errs[i] = std::current_exception();
            }
        }
    };
    const int nt = std::max(1, std::min<int>(threads, int(total)));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace ahs
