#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ahscatter/initial_data.hpp"

namespace ahs {

// Scattering function f0 with derivative on the closed upper half-plane; values below the real
// axis follow from Schwarz symmetry.
struct ScatteringData {
    double mu_minus = 0.0;
    double mu_plus = 0.0;
    double f0_at_mu_plus = 0.0;
    // Evaluators taking an optional preimage hint (a point near x(z)); closed forms ignore it.
    std::function<cplx(cplx, std::optional<cplx>)> f0_eval;
    std::function<cplx(cplx, std::optional<cplx>)> f0_prime_eval;
    std::vector<LogCut> cuts;
    std::vector<std::pair<double, double>> w_samples;
    std::shared_ptr<const InitialDataSpec> spec;  // source data, when known
    bool closed_form = false;

    cplx f0(cplx z, std::optional<cplx> hint = std::nullopt) const;
    cplx f0_prime(cplx z, std::optional<cplx> hint = std::nullopt) const;
};

}  // namespace ahs
