#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ahscatter/radical_fields.hpp"

namespace ahs {

struct ModulationState {
    double x = 0.0;
    double t = 0.0;
    cplx alpha;
    std::pair<double, double> residual{0.0, 0.0};
};

struct MomentSettings {
    double loop_distance = 0.05;
    QuadratureSettings quad{1e-12, 1e-10, 4000, false, false};
};

// Loop around an arc from alpha to mu+ (the boundary arc, bent to end at alpha when alpha is off
// it), inside the analyticity domain of f0.
LoopContour moment_loop(const ScatteringData& sd, cplx alpha, const MomentSettings& ms = {});

// r1 = (1/2 pi i) loop int f0'/R - (x + 4ta),  r2 = (1/2 pi i) loop int (zeta - a) f0'/R + 2tb^2.
std::pair<double, double> moment_residuals(const ScatteringData& sd, cplx alpha, double x, double t,
                                           const MomentSettings& ms = {});
// The loop integrals themselves (imaginary residues included), before subtracting the right side.
std::pair<cplx, cplx> moment_integrals(const ScatteringData& sd, cplx alpha,
                                       const MomentSettings& ms = {});

struct ContinuationSettings {
    MomentSettings moments;
    double residual_tol = 1e-9;
    double min_step = 1e-6;
    double jacobian_floor = 1e-8;  // smallest singular value of d(r1,r2)/d(a,b)
    int max_newton = 12;
};

// d(alpha)/dx from the implicit function theorem at a solved state.
cplx alpha_x_implicit(const ScatteringData& sd, const ModulationState& s,
                      const ContinuationSettings& cs = {});

// Newton continuation in t from a t = 0 seed; the last state is at t_target.
std::vector<ModulationState> continue_alpha(const ScatteringData& sd, double x, double t_target,
                                            cplx seed, double t_step,
                                            const ContinuationSettings& cs = {});

// Same, from an already solved state.
std::vector<ModulationState> continue_from_state(const ScatteringData& sd, const ModulationState& start,
                                                 double t_target, double t_step,
                                                 const ContinuationSettings& cs = {});

struct BreakReport {
    enum class Kind { double_point, triple_point, singular_break };
    Kind kind;
    double x_b = 0.0;
    double t_b = 0.0;
    cplx z_b;
    double alpha_x_magnitude = 0.0;
    cplx leading_coeff;
    // grid cell (x index, t index) where each triple-point criterion first fired; -1 when not
    int alpha_x_cell_t = -1;
    int coeff_cell_t = -1;
    std::string note;
};
const char* break_kind_name(BreakReport::Kind k);

struct BreakScanSettings {
    ContinuationSettings continuation;
    double alpha_x_threshold = 1e4;
    double coeff_threshold = 1e-3;
    bool monitor_double_points = true;
    int double_point_samples = 16;
    double double_point_tol = 1e-8;
};

// Leading coefficient sqrt(2ib)/(3 alpha_x) of h near alpha.
cplx leading_coefficient(cplx alpha, cplx alpha_x);

// Scans x_grid x t_grid; reports the earliest event per x.
std::vector<BreakReport> detect_break(const ScatteringData& sd, const std::vector<double>& x_grid,
                                      const std::vector<double>& t_grid,
                                      const BreakScanSettings& bs = {});

}  // namespace ahs
