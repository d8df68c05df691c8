// ahscatter: batch front end for the scattering toolkit.
#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ahscatter/ah_transform.hpp"
#include "ahscatter/initial_data.hpp"
#include "ahscatter/modulation_breaking.hpp"
#include "ahscatter/sign_analysis.hpp"
#include "ahscatter/symmetry.hpp"
#include "ahscatter/zs_oracle.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace ahs;

namespace {

constexpr int schema_version = 1;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------------------------------------
// number formatting and output

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

class Csv {
public:
    explicit Csv(const std::vector<std::string>& header) { row(header); }
    void row(const std::vector<std::string>& cells) {
        for (size_t k = 0; k < cells.size(); ++k) os_ << (k ? "," : "") << cells[k];
        os_ << '\n';
    }
    std::string str() const { return os_.str(); }

private:
    std::ostringstream os_;
};

void write_atomic(const fs::path& path, const std::string& content) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string());
        f << content;
        if (!f.flush()) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, path);
}

struct Outputs {
    fs::path dir;
    std::vector<std::pair<std::string, std::string>> files;  // name, content
    void add(std::string name, std::string content) { files.emplace_back(std::move(name), std::move(content)); }
    void flush(bool partial) const {
        fs::create_directories(dir);
        for (const auto& [name, content] : files)
            write_atomic(dir / (partial ? name + ".partial" : name), content);
    }
};

// Raised by a command after it has stored whatever it finished.
struct ComputeFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ------------------------------------------------------------------------------------------
// config access

double as_number(const json& v, const std::string& what) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        double out = 0;
        auto res = std::from_chars(s.data(), s.data() + s.size(), out);
        if (res.ec == std::errc() && res.ptr == s.data() + s.size()) return out;
    }
    throw ConfigError(what + ": expected a number or a decimal string");
}

std::vector<double> real_grid(const json& cfg, const std::string& key, bool required = true) {
    if (!cfg.contains(key)) {
        if (required) throw ConfigError("missing required field '" + key + "'");
        return {};
    }
    const json& g = cfg[key];
    std::vector<double> out;
    if (g.is_array()) {
        for (const auto& v : g) out.push_back(as_number(v, key));
    } else if (g.is_object()) {
        if (!g.contains("start") || !g.contains("stop") || !g.contains("count"))
            throw ConfigError(key + ": range needs start, stop and count");
        const double a = as_number(g["start"], key + ".start");
        const double b = as_number(g["stop"], key + ".stop");
        const json& c = g["count"];
        if (!c.is_number_integer() || c.get<long>() < 1) throw ConfigError(key + ".count must be a positive integer");
        const long n = c.get<long>();
        for (long k = 0; k < n; ++k) out.push_back(n == 1 ? a : a + (b - a) * double(k) / double(n - 1));
    } else {
        throw ConfigError(key + ": expected an array or a {start, stop, count} range");
    }
    if (out.empty()) throw ConfigError(key + " is empty");
    return out;
}

std::vector<cplx> complex_points(const json& cfg, const std::string& key) {
    if (!cfg.contains(key)) throw ConfigError("missing required field '" + key + "'");
    const json& g = cfg[key];
    if (!g.is_array() || g.empty()) throw ConfigError(key + ": expected a nonempty array of [re, im] pairs");
    std::vector<cplx> out;
    for (const auto& p : g) {
        if (!p.is_array() || p.size() != 2) throw ConfigError(key + ": entries must be [re, im]");
        out.emplace_back(as_number(p[0], key), as_number(p[1], key));
    }
    return out;
}

double number_or(const json& cfg, const std::string& key, double fallback) {
    return cfg.contains(key) ? as_number(cfg[key], key) : fallback;
}

double positive(const json& cfg, const std::string& key, double fallback) {
    const double v = number_or(cfg, key, fallback);
    if (!(v > 0)) throw ConfigError(key + " must be positive");
    return v;
}

InitialDataSpec family_spec(const json& cfg) {
    if (!cfg.contains("family") || !cfg["family"].is_object())
        throw ConfigError("missing required object 'family' {name, parameter}");
    const json& f = cfg["family"];
    if (!f.contains("name") || !f["name"].is_string()) throw ConfigError("family.name must be a string");
    if (!f.contains("parameter")) throw ConfigError("family.parameter is required");
    try {
        return builtin_family(f["name"].get<std::string>(), as_number(f["parameter"], "family.parameter"));
    } catch (const Error& e) {
        if (e.kind() == ErrorKind::ParameterOutOfRange) throw ConfigError(e.what());
        throw;
    }
}

struct Tolerances {
    FieldSettings field;
    double ode = 1e-18;
};

Tolerances tolerances(const json& cfg) {
    Tolerances t;
    if (!cfg.contains("tolerances")) return t;
    const json& j = cfg["tolerances"];
    if (!j.is_object()) throw ConfigError("tolerances must be an object");
    t.field.quad.abs_tol = positive(j, "quad_abs", t.field.quad.abs_tol);
    t.field.quad.rel_tol = positive(j, "quad_rel", t.field.quad.rel_tol);
    t.ode = positive(j, "ode", t.ode);
    return t;
}

ScatteringData scattering_for(const json& cfg, const InitialDataSpec& spec, const FieldSettings& fs_) {
    const std::string mode = cfg.value("scattering", std::string("auto"));
    const double f0mu = number_or(cfg, "f0_at_mu_plus", 0.0);
    const bool sech = spec.family_tag == "sech_family";
    if (mode == "closed_form" || (mode == "auto" && sech)) {
        if (!sech) throw ConfigError("closed_form scattering exists only for the sech family");
        return sech_closed_form_scattering(spec.parameter, f0mu);
    }
    if (mode != "numeric" && mode != "auto") throw ConfigError("scattering must be auto, numeric or closed_form");
    return numeric_scattering(std::make_shared<const InitialDataSpec>(spec), f0mu, fs_);
}

// ------------------------------------------------------------------------------------------
// worker pool

bool is_domain_error(ErrorKind k) {
    switch (k) {
        case ErrorKind::OutsideDomain:
        case ErrorKind::OnCut:
        case ErrorKind::AtLogPoint:
        case ErrorKind::AtMuPlus:
        case ErrorKind::AtCutEndpoint:
        case ErrorKind::VerticalSegmentLeavesDomain:
        case ErrorKind::ReflectionUnderflow:
        case ErrorKind::ClassificationAmbiguous:
        case ErrorKind::RegionOutsideDomain:
            return true;
        default:
            return false;
    }
}

template <class T>
struct Slot {
    std::optional<T> value;
    std::string status = "ok";  // error kind name for domain errors
    std::exception_ptr failure;
};

// Evaluates f(k) for k < n on a pool; results stay in index order.
template <class T>
std::vector<Slot<T>> parallel_map(size_t n, int threads, const std::function<T(size_t)>& f) {
    std::vector<Slot<T>> out(n);
    std::atomic<size_t> next{0};
    auto work = [&] {
        for (size_t i; (i = next++) < n;) {
            try {
                out[i].value = f(i);
            } catch (const Error& e) {
                if (is_domain_error(e.kind())) out[i].status = error_kind_name(e.kind());
                else out[i].failure = std::current_exception();
            } catch (...) {
                out[i].failure = std::current_exception();
            }
        }
    };
    const int nt = std::max(1, std::min<int>(threads, int(n)));
    std::vector<std::thread> pool;
    for (int t = 1; t < nt; ++t) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    return out;
}

std::string describe(const std::exception_ptr& p) {
    try {
        std::rethrow_exception(p);
    } catch (const std::exception& e) {
        return e.what();
    } catch (...) {
        return "unknown failure";
    }
}

// Writes rows before the first failure; returns the failure message if any.
template <class T>
std::optional<std::string> emit_rows(Csv& csv, const std::vector<Slot<T>>& slots,
                                     const std::function<std::vector<std::string>(size_t, const Slot<T>&)>& row) {
    for (size_t k = 0; k < slots.size(); ++k) {
        if (slots[k].failure) return "point " + std::to_string(k) + ": " + describe(slots[k].failure);
        csv.row(row(k, slots[k]));
    }
    return std::nullopt;
}

std::vector<std::string> blanks(size_t n) { return std::vector<std::string>(n, ""); }

// ------------------------------------------------------------------------------------------
// commands

struct Context {
    json config;
    json report;  // command-specific payload
    Outputs out;
    int threads = 1;
};

void cmd_validate(Context& c) {
    const InitialDataSpec spec = family_spec(c.config);
    const std::vector<double> xs = real_grid(c.config, "x_grid");
    const AssumptionReport rep = validate_assumptions(spec, xs);
    json checks = json::array();
    for (const auto& ch : rep.checks)
        checks.push_back({{"name", ch.name}, {"passed", ch.passed}, {"value", ch.value}, {"detail", ch.detail}});
    c.report["all_passed"] = rep.all_passed();
    c.report["checks"] = checks;
    c.report["mu_minus"] = spec.mu_minus;
    c.report["mu_plus"] = spec.mu_plus;
    json cuts = json::array();
    for (const auto& cut : spec.cuts)
        cuts.push_back({{"re_z", cut.z_star.real()}, {"im_z", cut.z_star.imag()}, {"upward", cut.upward}});
    c.report["log_point_cuts"] = cuts;
}

void cmd_forward(Context& c) {
    const InitialDataSpec spec = family_spec(c.config);
    const Tolerances tol = tolerances(c.config);
    const ScatteringData sd = scattering_for(c.config, spec, tol.field);
    const std::vector<cplx> zs = complex_points(c.config, "z_points");
    auto slots = parallel_map<std::pair<cplx, cplx>>(zs.size(), c.threads, [&](size_t k) {
        return std::make_pair(sd.f0(zs[k]), sd.f0_prime(zs[k]));
    });
    Csv csv({"re_z", "im_z", "re_f0", "im_f0", "re_f0_prime", "im_f0_prime", "status"});
    auto fail = emit_rows<std::pair<cplx, cplx>>(csv, slots, [&](size_t k, const auto& s) {
        std::vector<std::string> r{num(zs[k].real()), num(zs[k].imag())};
        if (s.value) {
            for (double v : {s.value->first.real(), s.value->first.imag(), s.value->second.real(), s.value->second.imag()})
                r.push_back(num(v));
        } else {
            for (auto& b : blanks(4)) r.push_back(b);
        }
        r.push_back(s.status);
        return r;
    });
    c.out.add("forward.csv", csv.str());
    c.report["points"] = zs.size();
    c.report["closed_form"] = sd.closed_form;
    if (fail) throw ComputeFailed(*fail);
}

void cmd_inverse(Context& c) {
    const InitialDataSpec spec = family_spec(c.config);
    const Tolerances tol = tolerances(c.config);
    const ScatteringData sd = scattering_for(c.config, spec, tol.field);
    const std::vector<double> xs = real_grid(c.config, "x_grid");
    const double lift = positive(c.config, "lift", 0.05);
    auto slots = parallel_map<double>(xs.size(), c.threads,
                                      [&](size_t k) { return inverse_x_sigma(sd, xs[k], lift, tol.field.quad); });
    Csv csv({"x", "re_alpha", "im_alpha", "x_recovered", "error", "status"});
    double max_err = 0;
    auto fail = emit_rows<double>(csv, slots, [&](size_t k, const auto& s) {
        const cplx a = spec.alpha(xs[k]);
        std::vector<std::string> r{num(xs[k]), num(a.real()), num(a.imag())};
        if (s.value) {
            max_err = std::max(max_err, std::abs(*s.value - xs[k]));
            r.push_back(num(*s.value));
            r.push_back(num(*s.value - xs[k]));
        } else {
            r.push_back("");
            r.push_back("");
        }
        r.push_back(s.status);
        return r;
    });
    c.out.add("inverse.csv", csv.str());
    c.report["max_error"] = max_err;
    if (fail) throw ComputeFailed(*fail);
}

void cmd_roundtrip(Context& c) {
    const InitialDataSpec spec = family_spec(c.config);
    const Tolerances tol = tolerances(c.config);
    const std::vector<double> xs = real_grid(c.config, "x_grid");
    // one point per task; roundtrip() on a singleton grid is the per-point pipeline
    auto slots = parallel_map<double>(xs.size(), c.threads, [&](size_t k) {
        return roundtrip(spec, {xs[k]}, tol.field).recovered.at(0);
    });
    Csv csv({"x", "x_recovered", "error", "status"});
    double max_err = 0;
    auto fail = emit_rows<double>(csv, slots, [&](size_t k, const auto& s) {
        if (!s.value) return std::vector<std::string>{num(xs[k]), "", "", s.status};
        max_err = std::max(max_err, std::abs(*s.value - xs[k]));
        return std::vector<std::string>{num(xs[k]), num(*s.value), num(*s.value - xs[k]), s.status};
    });
    c.out.add("roundtrip.csv", csv.str());
    c.report["max_error"] = max_err;
    if (fail) throw ComputeFailed(*fail);
}

void cmd_wscan(Context& c) {
    const InitialDataSpec spec = family_spec(c.config);
    const Tolerances tol = tolerances(c.config);
    const std::vector<double> zs = real_grid(c.config, "z_grid");
    auto slots = parallel_map<double>(zs.size(), c.threads, [&](size_t k) { return w_of_z(spec, zs[k], tol.field); });
    Csv csv({"z", "w", "status"});
    auto fail = emit_rows<double>(csv, slots, [&](size_t k, const auto& s) {
        return std::vector<std::string>{num(zs[k]), s.value ? num(*s.value) : "", s.status};
    });
    c.out.add("w_scan.csv", csv.str());
    c.report["points"] = zs.size();
    if (fail) throw ComputeFailed(*fail);
}

void cmd_certify(Context& c) {
    const InitialDataSpec spec = family_spec(c.config);
    const Tolerances tol = tolerances(c.config);
    const std::vector<double> xs = real_grid(c.config, "x_grid");
    CertifySettings cs;
    cs.field = tol.field;
    auto slots = parallel_map<SignReport>(xs.size(), c.threads, [&](size_t k) { return certify_genus_zero(spec, xs[k], cs); });
    Csv csv({"x", "certified", "w_ok", "w_margin", "lambda_reaches_alpha", "lambda_cut_distance", "gamma_m_sign_ok",
             "gamma_c_sign_ok", "gamma_c_certified", "status"});
    json details = json::array();
    auto fail = emit_rows<SignReport>(csv, slots, [&](size_t k, const auto& s) {
        if (!s.value) {
            std::vector<std::string> r{num(xs[k])};
            for (auto& b : blanks(8)) r.push_back(b);
            r.push_back(s.status);
            return r;
        }
        const SignReport& r = *s.value;
        details.push_back({{"x", r.x},
                           {"certified", r.certified()},
                           {"sufficient_condition_used", r.sufficient_condition_used},
                           {"failures", r.failures}});
        return std::vector<std::string>{num(xs[k]), r.certified() ? "1" : "0", r.w_ok ? "1" : "0", num(r.w_margin),
                                        r.lambda_reaches_alpha ? "1" : "0", num(r.lambda_cut_distance),
                                        r.gamma_m_sign_ok ? "1" : "0", r.gamma_c_sign_ok ? "1" : "0",
                                        r.gamma_c_certified ? "1" : "0", s.status};
    });
    c.out.add("certify.csv", csv.str());
    c.report["points"] = details;
    if (fail) throw ComputeFailed(*fail);
}

void cmd_break_scan(Context& c) {
    const InitialDataSpec spec = family_spec(c.config);
    const Tolerances tol = tolerances(c.config);
    const ScatteringData sd = scattering_for(c.config, spec, tol.field);
    const std::vector<double> xs = real_grid(c.config, "x_grid");
    const std::vector<double> ts = real_grid(c.config, "t_grid");
    for (size_t k = 1; k < ts.size(); ++k)
        if (!(ts[k] > ts[k - 1])) throw ConfigError("t_grid must be increasing");
    BreakScanSettings bs;
    bs.alpha_x_threshold = positive(c.config, "alpha_x_threshold", bs.alpha_x_threshold);
    bs.coeff_threshold = positive(c.config, "coeff_threshold", bs.coeff_threshold);
    // The x-grid finite differences couple neighbouring columns, so the scan is one task.
    std::vector<BreakReport> events;
    std::string failure;
    try {
        events = detect_break(sd, xs, ts, bs);
    } catch (const std::exception& e) {
        failure = e.what();
    }
    Csv csv({"x", "t_event", "kind", "re_z_b", "im_z_b"});
    json list = json::array();
    for (const auto& e : events) {
        csv.row({num(e.x_b), num(e.t_b), break_kind_name(e.kind), num(e.z_b.real()), num(e.z_b.imag())});
        list.push_back({{"x", e.x_b},
                        {"t", e.t_b},
                        {"kind", break_kind_name(e.kind)},
                        {"re_z_b", e.z_b.real()},
                        {"im_z_b", e.z_b.imag()},
                        {"alpha_x_magnitude", e.alpha_x_magnitude},
                        {"re_leading_coeff", e.leading_coeff.real()},
                        {"im_leading_coeff", e.leading_coeff.imag()},
                        {"alpha_x_cell_t", e.alpha_x_cell_t},
                        {"coeff_cell_t", e.coeff_cell_t},
                        {"note", e.note}});
    }
    c.out.add("breaks.csv", csv.str());
    c.report["events"] = list;
    if (!failure.empty()) throw ComputeFailed(failure);
}

void cmd_symmetry(Context& c) {
    const InitialDataSpec spec = family_spec(c.config);
    const Tolerances tol = tolerances(c.config);
    const std::vector<double> xs = real_grid(c.config, "x_grid");
    const std::vector<cplx> zs = complex_points(c.config, "z_points");
    const std::vector<double> rz = real_grid(c.config, "real_z_grid");
    const double x = number_or(c.config, "x", 0.5);
    const double ambiguity = positive(c.config, "ambiguity", 1e-3);
    std::vector<cplx> xc(xs.begin(), xs.end());
    c.report["alpha_deviation"] = check_alpha_symmetry(spec, xc);
    c.report["x_deviation"] = check_x_symmetry(spec, zs);
    c.report["r2_deviation"] = check_r2_symmetry(spec, xc, zs);

    auto slots = parallel_map<HSymmetrySample>(zs.size(), c.threads, [&](size_t k) {
        return check_h_symmetry(spec, x, {zs[k]}, ambiguity, tol.field).samples.at(0);
    });
    Csv csv({"re_z", "im_z", "inside", "deviation", "hl_deviation", "status"});
    double din = 0, dout = 0, dhl = 0;
    auto fail = emit_rows<HSymmetrySample>(csv, slots, [&](size_t k, const auto& s) {
        if (!s.value) return std::vector<std::string>{num(zs[k].real()), num(zs[k].imag()), "", "", "", s.status};
        const HSymmetrySample& h = *s.value;
        (h.inside ? din : dout) = std::max(h.inside ? din : dout, h.deviation);
        dhl = std::max(dhl, h.hl_deviation);
        return std::vector<std::string>{num(zs[k].real()), num(zs[k].imag()), h.inside ? "1" : "0", num(h.deviation),
                                        num(h.hl_deviation), s.status};
    });
    c.out.add("h_symmetry.csv", csv.str());
    c.report["x"] = x;
    c.report["h_deviation_inside"] = din;
    c.report["h_deviation_outside"] = dout;
    c.report["hl_deviation"] = dhl;
    if (fail) throw ComputeFailed(*fail);
    const ParityReport par = check_real_parity(spec, x, rz, tol.field);
    c.report["parity"] = {{"w_even", par.w_even}, {"re_h_parity", par.re_h_parity}, {"points", par.points}};
}

void cmd_zs_check(Context& c) {
    const InitialDataSpec spec = family_spec(c.config);
    const Tolerances tol = tolerances(c.config);
    const std::vector<double> zs = real_grid(c.config, "z_grid");
    const std::vector<double> eps = real_grid(c.config, "epsilons");
    for (double e : eps)
        if (!(e > 1e-3 && e <= 1.0)) throw ConfigError("epsilons must lie in (1e-3, 1]");
    ZsSettings settings;
    settings.ode_tol = tol.ode;
    const ZsPotential q = zs_potential(spec);
    const size_t ne = eps.size();
    auto slots = parallel_map<ScatteringCoefficients>(zs.size() * ne, c.threads, [&](size_t k) {
        return integrate_zs(q, zs[k / ne], eps[k % ne], settings);
    });
    Csv csv({"z", "epsilon", "re_r", "im_r", "re_est", "im_est", "status"});
    auto fail = emit_rows<ScatteringCoefficients>(csv, slots, [&](size_t k, const auto& s) {
        const double z = zs[k / ne], e = eps[k % ne];
        if (!s.value) return std::vector<std::string>{num(z), num(e), "", "", "", "", s.status};
        const ScatteringCoefficients& sc = *s.value;
        // principal branch of (i eps / 2) ln r
        const double re = -0.5 * e * std::arg(sc.r), im = 0.5 * e * double(sc.log_abs_r);
        return std::vector<std::string>{num(z), num(e), num(sc.r.real()), num(sc.r.imag()), num(re), num(im), s.status};
    });
    c.out.add("zs.csv", csv.str());
    if (fail) throw ComputeFailed(*fail);

    if (eps.size() >= 2) {
        const ScatteringData sd = scattering_for(c.config, spec, tol.field);
        auto checks = parallel_map<SemiclassicalCheck>(zs.size(), c.threads, [&](size_t k) {
            return semiclassical_limit_check(spec, sd, zs[k], eps, settings);
        });
        json list = json::array();
        for (size_t k = 0; k < zs.size(); ++k) {
            const auto& s = checks[k];
            if (s.failure) throw ComputeFailed("semiclassical check at z = " + num(zs[k]) + ": " + describe(s.failure));
            if (!s.value) {
                list.push_back({{"z", zs[k]}, {"status", s.status}});
                continue;
            }
            const SemiclassicalCheck& r = *s.value;
            json est = json::array();
            for (const auto& e : r.estimates)
                est.push_back({{"epsilon", e.epsilon}, {"re", e.value.real()}, {"im", e.value.imag()},
                               {"uncertainty", e.uncertainty}});
            list.push_back({{"z", r.z},
                            {"status", "ok"},
                            {"estimates", est},
                            {"re_extrapolated", r.extrapolated.real()},
                            {"im_extrapolated", r.extrapolated.imag()},
                            {"w", r.w},
                            {"deviation_from_w", r.deviation_from_w},
                            {"deviation_from_f0", r.deviation_from_f0},
                            {"real_offset", r.real_offset},
                            {"monotone", r.monotone}});
        }
        c.report["semiclassical"] = list;
    }
}

void cmd_example(Context& c) {
    if (!c.config.contains("name") || !c.config["name"].is_string())
        throw ConfigError("example needs a string field 'name'");
    const std::string name = c.config["name"].get<std::string>();
    if (name == "bronski-critical") {
        const CriticalPoint cp = bronski_critical_point();
        c.report["mu_star"] = cp.mu_star;
        c.report["re_x_star"] = cp.x_star.real();
        c.report["im_x_star"] = cp.x_star.imag();
        c.report["re_z_star"] = cp.z_star.real();
        c.report["im_z_star"] = cp.z_star.imag();
    } else if (name == "double-hump-ramification") {
        const double k = number_or(c.config, "k", 0.5);
        const InitialDataSpec spec = builtin_family("double_hump", k);
        json pts = json::array();
        for (const auto& r : ramification_points(spec, Rect{-4.0, 4.0, -1.55, 1.55}))
            pts.push_back({{"re_x", r.x_star.real()},
                           {"im_x", r.x_star.imag()},
                           {"re_z", r.z_star.real()},
                           {"im_z", r.z_star.imag()},
                           {"kind", ramification_kind_name(r.kind)}});
        c.report["k"] = k;
        c.report["ramification_points"] = pts;
    } else if (name == "sech-w") {
        const double mu = number_or(c.config, "mu", 2.0);
        const InitialDataSpec spec = builtin_family("sech", mu);
        Csv csv({"z", "w", "w_closed_form", "status"});
        for (int k = 0; k <= 40; ++k) {
            const double z = -4.0 + 0.2 * k;
            const double wc = std::abs(z) >= std::sqrt(std::max(0.0, mu * mu / 4 - 1)) ? pi / 2 * (mu / 2 - std::abs(z))
                                                                                       : std::nan("");
            try {
                csv.row({num(z), num(w_of_z(spec, z)), num(wc), "ok"});
            } catch (const Error& e) {
                csv.row({num(z), "", num(wc), error_kind_name(e.kind())});
            }
        }
        c.out.add("sech_w.csv", csv.str());
        c.report["mu"] = mu;
    } else {
        throw ConfigError("unknown example '" + name + "' (bronski-critical, double-hump-ramification, sech-w)");
    }
}

const std::map<std::string, std::function<void(Context&)>>& commands() {
    static const std::map<std::string, std::function<void(Context&)>> table{
        {"validate", cmd_validate}, {"forward", cmd_forward},     {"inverse", cmd_inverse},
        {"roundtrip", cmd_roundtrip}, {"w-scan", cmd_wscan},     {"certify", cmd_certify},
        {"break-scan", cmd_break_scan}, {"symmetry", cmd_symmetry}, {"zs-check", cmd_zs_check},
        {"example", cmd_example}};
    return table;
}

int resolve_threads(int cli_threads) {
    if (cli_threads > 0) return cli_threads;
    if (const char* env = std::getenv("AHSCATTER_THREADS")) {
        int v = 0;
        auto res = std::from_chars(env, env + std::strlen(env), v);
        if (res.ec != std::errc() || v < 1) throw ConfigError("AHSCATTER_THREADS must be a positive integer");
        return v;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semiclassical scattering toolkit"};
    std::string command, config_path, out_dir = "ahscatter_out";
    int threads = 0;
    std::vector<std::string> names;
    for (const auto& [n, f] : commands()) names.push_back(n);
    app.add_option("command", command, "Command to run")->required()->check(CLI::IsMember(names));
    app.add_option("--config", config_path, "JSON configuration file")->required();
    app.add_option("--out", out_dir, "Output directory");
    app.add_option("--threads", threads, "Worker threads (default: AHSCATTER_THREADS or 1)")->check(CLI::PositiveNumber);
    app.set_version_flag("--version", toolkit_version);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    Context c;
    c.out.dir = out_dir;
    try {
        std::ifstream f(config_path);
        if (!f) throw ConfigError("cannot read config file " + config_path);
        try {
            c.config = json::parse(f);
        } catch (const json::parse_error& e) {
            throw ConfigError(std::string("config is not valid JSON: ") + e.what());
        }
        if (!c.config.is_object()) throw ConfigError("config must be a JSON object");
        if (c.config.contains("command") && c.config["command"] != command)
            throw ConfigError("config is for command '" + c.config["command"].get<std::string>() + "'");
        c.threads = resolve_threads(threads);
    } catch (const ConfigError& e) {
        std::cerr << "ConfigInvalid: " << e.what() << '\n';
        return 2;
    }

    json doc;
    doc["schema_version"] = schema_version;
    doc["toolkit_version"] = toolkit_version;
    doc["command"] = command;
    doc["config"] = c.config;
    int rc = 0;
    try {
        commands().at(command)(c);
        doc["status"] = "ok";
    } catch (const ConfigError& e) {
        std::cerr << "ConfigInvalid: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        doc["status"] = "ComputeFailed";
        doc["error"] = e.what();
        std::cerr << "ComputeFailed: " << e.what() << '\n';
        rc = 1;
    }
    doc["result"] = c.report;
    c.out.add("report.json", doc.dump(2) + "\n");
    try {
        c.out.flush(rc != 0);
    } catch (const std::exception& e) {
        std::cerr << "ComputeFailed: cannot write outputs: " << e.what() << '\n';
        return 1;
    }
    return rc;
}
