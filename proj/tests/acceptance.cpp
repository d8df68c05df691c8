// Acceptance suite: one PASS/FAIL line per criterion.
#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "ahscatter/ah_transform.hpp"
#include "ahscatter/modulation_breaking.hpp"
#include "ahscatter/sign_analysis.hpp"
#include "ahscatter/symmetry.hpp"
#include "ahscatter/zs_oracle.hpp"

using namespace ahs;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool pass;
    std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Verdict()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
        v = check();
    } catch (const std::exception& e) {
        v = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!v.pass) ++failures;
    std::printf("criterion %2d %s: %s (%s) [%.1fs]\n", id, v.pass ? "PASS" : "FAIL", name.c_str(),
                v.detail.c_str(), dt);
    std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

std::vector<double> x_samples() { return {-3, -2, -1, 0, 1, 2, 3}; }

// --- 1 ----------------------------------------------------------------------------------------
Verdict inversion() {
    struct Fam {
        const char* name;
        double p;
    };
    const Fam fams[] = {{"sech", 1}, {"sech", 2}, {"sech", 3}, {"bronski", 0},
                        {"bronski", 1}, {"double_hump", 0}, {"double_hump", 0.75}};
    double worst = 0, slowest = 0;
    std::ostringstream os;
    for (const auto& f : fams) {
        const auto t0 = std::chrono::steady_clock::now();
        const double e = roundtrip(builtin_family(f.name, f.p), x_samples()).max_error;
        const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        worst = std::max(worst, e);
        slowest = std::max(slowest, dt);
        os << f.name << "(" << f.p << ")=" << fmt("%.1e", e) << " ";
    }
    os << "max " << fmt("%.2e", worst) << ", slowest family " << fmt("%.1fs", slowest);
    return {worst <= 1e-5 && slowest < 120, os.str()};
}

// --- 2 ----------------------------------------------------------------------------------------
Verdict closed_form_f0_prime() {
    double worst = 0;
    int n = 0;
    for (double mu : {2.0, 3.0}) {
        const InitialDataSpec s = builtin_family("sech", mu);
        for (double y : {-2.0, -1.0, 0.0, 1.0, 2.0})
            for (double lift : {0.1, 0.3, 0.6, 0.9}) {
                const cplx z = s.alpha(cplx(y, lift));
                const cplx num = f0_prime(s, z);
                const cplx ex = sech_closed_form_f0_prime(mu, z);
                worst = std::max(worst, std::abs(num - ex));
                ++n;
            }
    }
    return {worst <= 1e-6, std::to_string(n) + " points, max |numeric - closed form| " + fmt("%.2e", worst)};
}

// --- 3 ----------------------------------------------------------------------------------------
Verdict w_closed_form() {
    double worst = 0, edge = 0;
    int n = 0;
    for (double mu : {2.0, 3.0}) {
        const InitialDataSpec s = builtin_family("sech", mu);
        const double T = std::sqrt(std::max(0.0, mu * mu / 4 - 1));
        for (int k = 0; k < 50; ++k) {
            // 50 points on [-4, 4] avoiding [-T, T] and the edge points themselves
            const double u = -4.0 + 8.0 * (k + 0.5) / 50.0;
            const double z = u >= 0 ? T + 0.02 + (4.0 - T - 0.02) * u / 4.0 : -T - 0.02 + (4.0 - T - 0.02) * u / 4.0;
            if (std::abs(std::abs(z) - mu / 2) < 1e-9) continue;
            worst = std::max(worst, std::abs(w_of_z(s, z) - pi / 2 * (mu / 2 - std::abs(z))));
            ++n;
        }
        edge = std::max({edge, std::abs(w_of_z(s, mu / 2)), std::abs(w_of_z(s, -mu / 2))});
    }
    return {worst <= 1e-6 && edge <= 1e-8 && n >= 100,
            std::to_string(n) + " points, max |w - pi/2 (mu/2 - |z|)| " + fmt("%.2e", worst) +
                ", |w(+-mu/2)| " + fmt("%.1e", edge)};
}

// --- 4 ----------------------------------------------------------------------------------------
Verdict cut_jump() {
    const InitialDataSpec s = builtin_family("sech", 1.0);
    const cplx T(0.0, std::sqrt(3.0) / 2);
    double worst = 0, xdep = 0;
    for (int k = 1; k <= 10; ++k) {
        const cplx z = T * (k / 11.0);
        const cplx d0 = branch_jump_delta_f(s, z, 0.0);
        worst = std::max(worst, std::abs(d0 - I * pi * (z - T)));
        for (double x : {-1.0, 1.0}) xdep = std::max(xdep, std::abs(branch_jump_delta_f(s, z, x) - d0));
    }
    return {worst <= 1e-6 && xdep <= 1e-7,
            "max |df - i pi (z - T)| " + fmt("%.2e", worst) + ", x-dependence " + fmt("%.2e", xdep)};
}

// --- 5 ----------------------------------------------------------------------------------------
cplx bronski_log_point_formula(double mu) {
    // tip of the accumulation curve, plus sign, principal branches
    const cplx r = std::sqrt(cplx(1 - 8 * mu * mu, 0.0));
    const cplx den = 4 * mu * mu + 1 + r;
    return (-mu * std::sqrt(2 * mu * mu - 1 + r) + I * std::sqrt(4 * mu * mu + 1 + r)) / den *
           std::sqrt(2 * (mu * mu + 1));
}

std::vector<cplx> upper_log_points(double mu) {
    std::vector<cplx> out;
    for (const auto& r : ramification_points(builtin_family("bronski", mu), Rect{-3, 3, -pi / 4 + 1e-6, pi / 4 - 1e-6}))
        if (r.kind == RamificationPoint::Kind::log_point_in_upper_halfplane) out.push_back(r.z_star);
    return out;
}

Verdict bronski_critical() {
    const CriticalPoint cp = bronski_critical_point();
    const double mu_err = std::abs(cp.mu_star - std::pow(2.0, -1.5));
    const double z_err = std::abs(cp.z_star - I * (3 * std::sqrt(3.0) / (4 * std::sqrt(2.0))));
    double mu0 = INFINITY;
    for (cplx z : upper_log_points(0.0)) mu0 = std::min(mu0, std::abs(z - I));
    double gen = 0;
    for (double mu : {0.5, 1.0}) {
        const cplx f = bronski_log_point_formula(mu);
        const std::vector<cplx> pts = upper_log_points(mu);
        if (pts.empty()) gen = INFINITY;
        for (cplx target : {f, -std::conj(f)}) {
            double best = INFINITY;
            for (cplx z : pts) best = std::min(best, std::abs(z - target));
            gen = std::max(gen, best);
        }
    }
    return {mu_err <= 1e-8 && z_err <= 1e-8 && mu0 <= 1e-10 && gen <= 1e-8,
            "|mu* - 2^-1.5| " + fmt("%.1e", mu_err) + ", |z* - exact| " + fmt("%.1e", z_err) + ", mu=0 |z* - i| " +
                fmt("%.1e", mu0) + ", endpoints at mu=0.5,1 " + fmt("%.1e", gen)};
}

// --- 6 ----------------------------------------------------------------------------------------
Verdict double_hump() {
    const InitialDataSpec s = builtin_family("double_hump", 0.5);
    const auto rp = ramification_points(s, Rect{-4, 4, -pi / 2 + 1e-6, pi / 2 - 1e-6});
    const double xr = std::acosh(1 + 1 / std::sqrt(2.0));
    double worst = 0;
    for (cplx target : {cplx(xr, -pi / 4), cplx(-xr, -pi / 4)}) {
        double best = INFINITY;
        for (const auto& r : rp) best = std::min(best, std::abs(r.x_star - target));
        worst = std::max(worst, best);
    }
    bool unique = true;
    for (int k = 1; k <= 10; ++k)
        unique = unique && double_hump_ramification_cubic_roots(k / 10.0).size() == 1 &&
                 double_hump_zero_preimage_cubic_roots(k / 10.0).size() == 1;
    return {worst <= 1e-8 && unique, "k=1/2 ramification points " + fmt("%.1e", worst) +
                                         (unique ? ", cubic roots unique" : ", cubic roots not unique")};
}

// --- 7 ----------------------------------------------------------------------------------------
Verdict rhp() {
    const auto sp = std::make_shared<const InitialDataSpec>(builtin_family("sech", 2.0));
    const InitialDataSpec& s = *sp;
    const ScatteringData cf = sech_closed_form_scattering(2.0);
    double jump = 0;
    for (double x : {-1.0, 0.0, 1.0})
        for (int k = 1; k <= 10; ++k) {
            const cplx z = s.alpha(x + 0.3 * k);
            const auto [gp, gm] = g_boundary_values(s, x, z, 0.0);
            jump = std::max(jump, std::abs(gp + gm - (cf.f0(z) - x * z)));
        }
    // Plemelj form against the x-plane form, with f0 from quadrature
    const ScatteringData nd = numeric_scattering(sp);
    const LoopContour L = stadium_loop(sigma_arc(s, 0.0), s.mu_plus, 0.05, s.cuts, &s);
    double pl = 0;
    const cplx pts[] = {{0.3, 0.8}, {-0.5, 0.4}, {2.0, 1.0}, {0.5, -0.5}, {0.3, 1.5},
                        {-1.5, 0.6}, {1.2, -0.3}, {-0.2, 1.1}, {2.5, -0.8}, {-2.0, 0.2}};
    for (cplx z : pts) pl = std::max(pl, std::abs(plemelj_g(nd, L, 0.0, z) - g_field(s, 0.0, z, 0.0)));
    return {jump <= 1e-8 && pl <= 1e-6,
            "max |g+ + g- - f| " + fmt("%.2e", jump) + ", Plemelj vs x-plane " + fmt("%.2e", pl)};
}

// --- 8 ----------------------------------------------------------------------------------------
Verdict endpoint_exponent() {
    const InitialDataSpec s = builtin_family("sech", 2.0);
    double worst_exp = 0, worst_coeff = 0;
    cplx ratio_seen;
    for (double x : {0.0, 1.0}) {
        const cplx a = s.alpha(x), ap = s.alpha_prime(x);
        const cplx lead = leading_coefficient(a, ap);
        std::vector<double> lr, lh;
        for (double r : {1e-2, 3e-3, 1e-3, 3e-4, 1e-4}) {
            const cplx z = a + r * std::exp(I * 0.7);
            const cplx h = h_field(s, x, z);
            lr.push_back(std::log(r));
            lh.push_back(std::log(std::abs(h)));
            if (r == 1e-4) {
                const cplx ratio = h / (lead * std::pow(z - a, 1.5));
                ratio_seen = ratio;
                worst_coeff = std::max(worst_coeff, std::abs(ratio - 1.0));
            }
        }
        const double n = double(lr.size());
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (size_t k = 0; k < lr.size(); ++k) {
            sx += lr[k];
            sy += lh[k];
            sxx += lr[k] * lr[k];
            sxy += lr[k] * lh[k];
        }
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        worst_exp = std::max(worst_exp, std::abs(slope - 1.5));
    }
    return {worst_exp <= 0.05 && worst_coeff <= 0.01,
            "exponent off by " + fmt("%.1e", worst_exp) + ", h / (sqrt(2ib)/(3 alpha') (z-alpha)^1.5) = " +
                fmt("%.4f", ratio_seen.real()) + fmt("%+.4fi", ratio_seen.imag())};
}

// --- 9 ----------------------------------------------------------------------------------------
Verdict symmetry_suite() {
    const InitialDataSpec s = builtin_family("bronski", 1.0);
    std::vector<cplx> xs, zs{{0.2, 0.9}, {0.7, 0.3}, {-0.4, 1.2}, {2.0, 0.5}, {0.1, 0.2}, {-1.1, 0.4}};
    for (int k = -4; k <= 4; ++k) xs.emplace_back(0.5 * k, 0.1 * (k % 3));
    const double da = check_alpha_symmetry(s, xs);
    const double dx = check_x_symmetry(s, zs);
    const double dr = check_r2_symmetry(s, xs, zs);
    const HSymmetryReport h = check_h_symmetry(s, 0.5, zs);
    std::vector<double> rz;
    for (int k = 0; k < 40; ++k) rz.push_back(0.1 + 3.9 * k / 39.0);
    const ParityReport p = check_real_parity(s, 0.5, rz);
    const double chain = std::max({da, dx, dr, h.max_deviation_inside, h.max_deviation_outside, h.max_hl_deviation});
    const double par = std::max(p.w_even, p.re_h_parity);
    return {chain <= 1e-7 && par <= 1e-7 && p.points == 40,
            "equivalence chain " + fmt("%.1e", chain) + ", parity on 40 real points " + fmt("%.1e", par)};
}

// --- 10 ---------------------------------------------------------------------------------------
Verdict zs_oracle() {
    const InitialDataSpec s = builtin_family("sech", 2.0);
    const ScatteringData sd = sech_closed_form_scattering(2.0);
    bool ok = true;
    std::ostringstream os;
    for (double z : {0.5, 1.3}) {
        const SemiclassicalCheck c = semiclassical_limit_check(s, sd, z, {0.2, 0.1, 0.05});
        const double final_dev = std::abs(c.estimates.back().value.imag() - c.w);
        const bool pass = c.monotone && final_dev <= 0.05 * std::abs(c.w);
        ok = ok && pass;
        os << "z=" << z << ": final rel. deviation " << fmt("%.1e", final_dev / std::abs(c.w))
           << (c.monotone ? " monotone" : " not monotone") << "; ";
    }
    os << "empirical probe";
    return {ok, os.str()};
}

// --- 11 ---------------------------------------------------------------------------------------
Verdict breaking() {
    const ScatteringData sd = sech_closed_form_scattering(2.0);
    std::vector<double> xs, ts;
    for (int k = -2; k <= 2; ++k) xs.push_back(0.25 * k);
    for (int k = 0; k <= 5; ++k) ts.push_back(0.01 * k);
    const auto early = detect_break(sd, xs, ts);
    // a scan that runs into the fold at x = 0
    std::vector<double> xf{-0.02, -0.01, 0.0, 0.01, 0.02}, tf;
    for (int k = 0; k <= 14; ++k) tf.push_back(0.01 * k);
    const auto late = detect_break(sd, xf, tf);
    int triple = 0;
    bool props = true;
    for (const auto& e : late) {
        if (e.kind != BreakReport::Kind::triple_point) continue;
        ++triple;
        props = props && e.alpha_x_magnitude >= 1e4 && std::abs(e.leading_coeff) <= 1e-3 &&
                e.alpha_x_cell_t == e.coeff_cell_t && e.alpha_x_cell_t >= 0;
    }
    return {early.empty() && props,
            std::to_string(early.size()) + " events on t in [0, 0.05]; " + std::to_string(triple) +
                " triple points up to t = 0.14, criteria " + (props ? "agree" : "disagree")};
}

// --- 12 ---------------------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), {});
}

Verdict determinism() {
    const fs::path base = fs::temp_directory_path() / "ahscatter_acceptance";
    fs::remove_all(base);
    struct Run {
        std::string command, config;
    };
    const Run runs[] = {{"w-scan", "wscan_sech3.json"}, {"zs-check", "zs_sech2.json"}, {"roundtrip", "roundtrip_sech2.json"}};
    int compared = 0;
    for (const auto& r : runs) {
        std::vector<fs::path> dirs;
        for (const char* threads : {"1", "4", "4"}) {
            const fs::path out = base / (r.command + "_" + std::to_string(dirs.size()));
            const std::string cmd = std::string(AHSCATTER_CLI) + " " + r.command + " --config " +
                                    (fs::path(AHSCATTER_CONFIG_DIR) / r.config).string() + " --out " + out.string() +
                                    " --threads " + threads + " > /dev/null";
            if (std::system(cmd.c_str()) != 0) return {false, "CLI run failed: " + cmd};
            dirs.push_back(out);
        }
        for (const auto& entry : fs::directory_iterator(dirs[0])) {
            const std::string ref = slurp(entry.path());
            for (size_t k = 1; k < dirs.size(); ++k) {
                if (slurp(dirs[k] / entry.path().filename()) != ref)
                    return {false, entry.path().filename().string() + " differs between runs of " + r.command};
                ++compared;
            }
        }
    }
    fs::remove_all(base);
    return {compared > 0, std::to_string(compared) + " file pairs byte-identical across runs and thread counts"};
}

}  // namespace

int main() {
    report(1, "inversion", inversion);
    report(2, "closed-form f0'", closed_form_f0_prime);
    report(3, "w(z) closed form", w_closed_form);
    report(4, "jump on the cut", cut_jump);
    report(5, "Bronski critical data", bronski_critical);
    report(6, "double hump", double_hump);
    report(7, "RHP verification", rhp);
    report(8, "endpoint exponent and coefficient", endpoint_exponent);
    report(9, "symmetry suite", symmetry_suite);
    report(10, "ZS oracle", zs_oracle);
    report(11, "breaking detection", breaking);
    report(12, "determinism", determinism);
    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
