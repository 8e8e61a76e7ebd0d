// analytic.hpp: closed-form currents, characteristic dephasing rates and
// interference visibility of the effective (four-state) model.
//
// Each formula is written term by term in its standard form; the engine
// cross-checks in the tests are what validate them.

#pragma once

#include "dqi/model.hpp"

#include <optional>

namespace dqi {

struct DerivedRates {
    double delta;        // eps1 - eps2
    double gamma_tilde;  // Gamma1 + Gamma2 + gamma
    double k;            // gamma_tilde^2 + 4 delta^2
    double b;            // 4|Omega|^2 (Gamma1 + Gamma2) + Gamma1 Gamma2 gamma_tilde
    double omega_sq;     // |Omega|^2
};

DerivedRates derived_rates(const ModelParams& p);

/// Steady current with dephasing gamma:
///   I = 4|Omega|^2 G1 G2 (G1 + G2 + gamma) / [B (G1 + G2 + gamma) + 4 G1 G2 delta^2]
/// which at gamma = 0 is the dephasing-free result.
double current_closed_form(const ModelParams& p);

/// Current without dephasing, written in its own form
///   I = 4 G1 G2 (G1+G2) |Omega|^2 / [(4|Omega|^2 + G1 G2)(G1+G2)^2 + 4 G1 G2 delta^2].
/// Ignores p.dephasing.
double current_coherent(const ModelParams& p);

/// Current averaged over eps1' uniform on [eps1 - Delta, eps1 + Delta] (two-arctan
/// form). Delta = p.spread; Delta = 0 returns current_coherent(p).
double averaged_current(const ModelParams& p);

/// dI/dgamma = 4|Omega|^2 G1^2 G2^2 [4 delta^2 - (G1+G2+gamma)^2] / D^2,
/// D = B (G1+G2+gamma) + 4 G1 G2 delta^2.
double dcurrent_dgamma(const ModelParams& p);

struct CharacteristicRate {
    double value;   // formula value, possibly <= 0
    bool interior;  // true when value > 0, i.e. the feature lies at positive gamma
};

/// gamma* = 2|delta| - (G1 + G2), the maximiser of I(gamma).
/// Throws std::invalid_argument unless Gamma1 == Gamma2.
CharacteristicRate gamma_star(const ModelParams& p);

/// gamma_0 = [4 delta^2 - (G1 + G2)^2] / (G1 + G2), where I(gamma_0) = I(0).
CharacteristicRate gamma_zero(const ModelParams& p);

/// lambda_tilde appearing in the visibility: |z lambda_tilde| or the override.
double interference_partner(const ModelParams& p);

/// V = 2 G1 G2 K |l0 lt| / [4 (G1+G2) Gt (l0^2 - lt^2)^2 + G1 G2 K (l0^2 + lt^2)].
/// Returns 0 when l0 lt = 0.
double visibility_closed_form(const ModelParams& p);

/// (I_max - I_min) / (I_max + I_min) of current_closed_form over a uniform
/// phi grid on [0, 2 pi] with `points` samples.
double visibility_from_sweep(const ModelParams& p, int points = 1001);

/// gamma = 2|delta| - G1 - G2, where V(gamma) has its minimum.
/// Throws std::invalid_argument unless Gamma1 == Gamma2.
CharacteristicRate visibility_turnover(const ModelParams& p);

}  // namespace dqi
