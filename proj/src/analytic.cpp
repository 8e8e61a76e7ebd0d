#include "dqi/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dqi {

namespace {

void require_equal_rates(const ModelParams& p, const char* who) {
    if (p.gamma1 != p.gamma2) {
        throw std::invalid_argument(std::string(who) + ": requires Gamma1 == Gamma2");
    }
}

}  // namespace

DerivedRates derived_rates(const ModelParams& p) {
    p.validate();
    DerivedRates r;
    r.delta = p.detuning();
    r.gamma_tilde = p.gamma1 + p.gamma2 + p.dephasing;
    r.k = r.gamma_tilde * r.gamma_tilde + 4.0 * r.delta * r.delta;
    r.omega_sq = std::norm(effective_coupling(p).omega);
    r.b = 4.0 * r.omega_sq * (p.gamma1 + p.gamma2) + p.gamma1 * p.gamma2 * r.gamma_tilde;
    return r;
}

double current_closed_form(const ModelParams& p) {
    const DerivedRates r = derived_rates(p);
    const double g1 = p.gamma1, g2 = p.gamma2;
    const double num = 4.0 * r.omega_sq * g1 * g2 * (g1 + g2 + p.dephasing);
    const double den = r.b * (g1 + g2 + p.dephasing) + 4.0 * g1 * g2 * r.delta * r.delta;
    return num / den;
}

double current_coherent(const ModelParams& p) {
    const DerivedRates r = derived_rates(p);
    const double g1 = p.gamma1, g2 = p.gamma2, s = g1 + g2;
    const double num = 4.0 * g1 * g2 * s * r.omega_sq;
    const double den = (4.0 * r.omega_sq + g1 * g2) * s * s + 4.0 * g1 * g2 * r.delta * r.delta;
    return num / den;
}

double averaged_current(const ModelParams& p) {
    if (p.spread == 0.0) return current_coherent(p);
    const DerivedRates r = derived_rates(p);
    const double g1 = p.gamma1, g2 = p.gamma2, s = g1 + g2;
    const double spread = p.spread;
    const double w = 4.0 * r.omega_sq + g1 * g2;
    const double pre = g1 * g2 * r.omega_sq / (spread * std::sqrt(g1 * g2 * w));
    const double scale = 2.0 * std::sqrt(g1 * g2 / w);
    return pre * (std::atan(scale * (r.delta + spread) / s) - std::atan(scale * (r.delta - spread) / s));
}

double dcurrent_dgamma(const ModelParams& p) {
    const DerivedRates r = derived_rates(p);
    const double g1 = p.gamma1, g2 = p.gamma2;
    const double gt = g1 + g2 + p.dephasing;
    const double d = r.b * gt + 4.0 * g1 * g2 * r.delta * r.delta;
    return 4.0 * r.omega_sq * g1 * g1 * g2 * g2 * (4.0 * r.delta * r.delta - gt * gt) / (d * d);
}

CharacteristicRate gamma_star(const ModelParams& p) {
    p.validate();
    require_equal_rates(p, "gamma_star");
    const double v = 2.0 * std::abs(p.detuning()) - (p.gamma1 + p.gamma2);
    return {v, v > 0};
}

CharacteristicRate gamma_zero(const ModelParams& p) {
    p.validate();
    const double s = p.gamma1 + p.gamma2;
    const double delta = p.detuning();
    const double v = (4.0 * delta * delta - s * s) / s;
    return {v, v > 0};
}

double interference_partner(const ModelParams& p) {
    return std::abs(effective_coupling(p).island_term);
}

double visibility_closed_form(const ModelParams& p) {
    const DerivedRates r = derived_rates(p);
    const double l0 = p.lambda0;
    const double lt = interference_partner(p);
    if (l0 * lt == 0.0) return 0.0;
    const double g1 = p.gamma1, g2 = p.gamma2;
    const double diff = l0 * l0 - lt * lt;
    const double num = 2.0 * g1 * g2 * r.k * std::abs(l0 * lt);
    const double den = 4.0 * (g1 + g2) * r.gamma_tilde * diff * diff + g1 * g2 * r.k * (l0 * l0 + lt * lt);
    return num / den;
}

double visibility_from_sweep(const ModelParams& p, int points) {
    if (points < 2) throw std::invalid_argument("visibility_from_sweep: need at least 2 points");
    ModelParams q = p;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (int k = 0; k < points; ++k) {
        q.phi = 2.0 * std::numbers::pi * k / (points - 1);
        const double i = current_closed_form(q);
        lo = std::min(lo, i);
        hi = std::max(hi, i);
    }
    return hi + lo == 0.0 ? 0.0 : (hi - lo) / (hi + lo);
}

CharacteristicRate visibility_turnover(const ModelParams& p) {
    p.validate();
    require_equal_rates(p, "visibility_turnover");
    const double v = 2.0 * std::abs(p.detuning()) - p.gamma1 - p.gamma2;
    return {v, v > 0};
}

}  // namespace dqi
