#pragma once

#include <string>
#include <vector>

#include "ahscatter/radical_fields.hpp"

namespace ahs {

// w(z) = sign(mu+ - z) Im int_{x(z)}^{Re x(z)} R(y,z) dy along the vertical segment.
// A second (diagonal) path to a different real endpoint is integrated as a consistency check;
// the discrepancy is returned through path_discrepancy when requested.
double w_of_z(const InitialDataSpec& spec, double z, const FieldSettings& s = {},
              double* path_discrepancy = nullptr);

struct ConditionResult {
    bool holds = false;
    double margin = 0.0;  // worst slack; negative when violated
};

struct SufficientConditions {
    ConditionResult arg_condition;
    ConditionResult segment_inclusion;
    ConditionResult vertical_line_test;
};

// Checks along y in [x(z), conj x(z)] (requires z > mu+ or z < mu-).
SufficientConditions sufficient_conditions(const InitialDataSpec& spec, double z, int samples = 200);

// Required separation of w from zero: 0.1 |z - mu| near the edges, 1e-3 beyond distance 0.5.
double w_separation_threshold(const InitialDataSpec& spec, double z);

struct SignReport {
    double x = 0.0;
    bool w_ok = false;
    double w_margin = 0.0;
    ContourPath lambda_curve;
    bool lambda_reaches_alpha = false;
    double lambda_cut_distance = 0.0;  // closest approach of lambda to a log-point cut
    bool gamma_m_sign_ok = false;
    bool gamma_c_sign_ok = false;
    bool gamma_c_certified = false;  // false when a(x) is not monotone (sampling only)
    std::string sufficient_condition_used;
    std::vector<std::string> failures;
    bool certified() const;
};

struct CertifySettings {
    FieldSettings field;
    int w_grid = 50;
    double w_extent = 4.0;  // real z grid reaches this far past mu+/mu-
    double trace_step = 0.02;
    int max_nodes = 4000;
    double sign_offset = 5e-3;
    int sign_samples = 12;
};

// Genus-zero certificate at fixed x: traces lambda = {Im h = 0} from mu+ to alpha(x), checks the
// sign of Im h next to lambda and on the complementary arc, and checks w < 0 off [mu-, mu+].
SignReport certify_genus_zero(const InitialDataSpec& spec, double x, const CertifySettings& cs = {});

// The zero level curve of Im h(x, .) traced from mu+; throws TraceStalled on a critical point.
TraceResult trace_lambda(const InitialDataSpec& spec, double x, const CertifySettings& cs = {});

}  // namespace ahs
