#include "dqi/harness.hpp"

#include "dqi/analytic.hpp"
#include "dqi/format.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <thread>

#ifndef DQI_VERSION
#define DQI_VERSION "unknown"
#endif

namespace dqi {

namespace {

// Runs task(i) for i in [0, n) on a pool of workers; the first exception in
// index order is rethrown after all workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& task) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                task(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

double relative_deviation(double a, double reference) {
    if (a == reference) return 0.0;
    return std::abs(a - reference) / std::abs(reference);
}

}  // namespace

std::string to_string(SweepSymbol s) {
    switch (s) {
        case SweepSymbol::Phi: return "phi";
        case SweepSymbol::Detuning: return "delta";
        case SweepSymbol::Dephasing: return "gamma";
        case SweepSymbol::Spread: return "Delta";
        case SweepSymbol::Lambda0: return "lambda0";
    }
    return "?";
}

std::string to_string(ModelTag m) {
    switch (m) {
        case ModelTag::Analytic: return "analytic";
        case ModelTag::EffectiveNumeric: return "effective-numeric";
        case ModelTag::FullNumeric: return "full-numeric";
    }
    return "?";
}

SweepSymbol sweep_symbol_from_string(const std::string& s) {
    for (auto sym : {SweepSymbol::Phi, SweepSymbol::Detuning, SweepSymbol::Dephasing, SweepSymbol::Spread,
                     SweepSymbol::Lambda0}) {
        if (to_string(sym) == s) return sym;
    }
    throw std::invalid_argument("unknown sweep symbol '" + s + "' (phi, delta, gamma, Delta, lambda0)");
}

ModelTag model_tag_from_string(const std::string& s) {
    for (auto m : {ModelTag::Analytic, ModelTag::EffectiveNumeric, ModelTag::FullNumeric}) {
        if (to_string(m) == s) return m;
    }
    throw std::invalid_argument("unknown model '" + s + "' (analytic, effective-numeric, full-numeric)");
}

ModelParams with_value(ModelParams p, SweepSymbol symbol, double value) {
    switch (symbol) {
        case SweepSymbol::Phi: p.phi = value; break;
        case SweepSymbol::Detuning: p.eps1 = p.eps2 + value; break;
        case SweepSymbol::Dephasing: p.dephasing = value; break;
        case SweepSymbol::Spread: p.spread = value; break;
        case SweepSymbol::Lambda0: p.lambda0 = value; break;
    }
    return p;
}

void SweepSpec::validate() const {
    if (count < 2) throw std::invalid_argument("sweep: --count must be at least 2");
    if (!std::isfinite(start) || !std::isfinite(stop)) throw std::invalid_argument("sweep: range must be finite");
    if (models.empty()) throw std::invalid_argument("sweep: at least one model is required");
    if (sectors.empty()) throw std::invalid_argument("sweep: at least one z sector is required");
    const bool numeric = std::any_of(models.begin(), models.end(), [](ModelTag m) { return m != ModelTag::Analytic; });
    const bool spread = fixed.spread > 0 || (symbol == SweepSymbol::Spread && (start != 0 || stop != 0));
    if (numeric && spread) {
        throw std::invalid_argument("sweep: a level spread (Delta) is only defined for the analytic model");
    }
    if (spread && (fixed.dephasing > 0 || symbol == SweepSymbol::Dephasing)) {
        throw std::invalid_argument("sweep: level spread and dephasing cannot be combined");
    }
    for (int i : {0, count - 1}) with_value(fixed, symbol, value(i)).validate();
}

double SweepSpec::value(int i) const { return start + (stop - start) * double(i) / double(count - 1); }

double model_current(const ModelParams& p, ModelTag model) {
    switch (model) {
        case ModelTag::Analytic:
            return p.spread > 0 ? averaged_current(p) : current_closed_form(p);
        case ModelTag::EffectiveNumeric:
            return solve_transport(build_effective_model(p), large_bias_leads(p), p.dephasing).current;
        case ModelTag::FullNumeric: {
            HamiltonianModel full = build_full_model(p);
            const auto keep = reachable_states(full);
            if (std::ssize(keep) < full.dim()) full = full.restricted(keep);
            return solve_transport(full, gap_window_leads(p), p.dephasing).current;
        }
    }
    throw std::logic_error("model_current: unknown model");
}

std::vector<ResultRow> run_sweep(const SweepSpec& spec, unsigned threads) {
    spec.validate();
    const std::size_t per_value = spec.sectors.size() * spec.models.size();
    std::vector<ResultRow> rows(std::size_t(spec.count) * per_value);
    parallel_for(rows.size(), threads, [&](std::size_t k) {
        const int i = int(k / per_value);
        const Z z = spec.sectors[(k % per_value) / spec.models.size()];
        const ModelTag m = spec.models[k % spec.models.size()];
        ModelParams p = with_value(spec.fixed, spec.symbol, spec.value(i));
        p.z = z;
        rows[k] = {spec.value(i), z, m, model_current(p, m)};
    });
    return rows;
}

void write_metadata(std::ostream& os, const std::string& command, const ModelParams& p) {
    os << "# dqi " << DQI_VERSION << "\n";
    os << "# command," << command << "\n";
    os << "# units,hbar = 1; energies and rates share one unit; phi in rad\n";
    os << "# Gamma1," << format_real(p.gamma1) << "\n";
    os << "# Gamma2," << format_real(p.gamma2) << "\n";
    os << "# lambda0," << format_real(p.lambda0) << "\n";
    os << "# lambda1," << format_real(p.lambda1) << "\n";
    os << "# lambda2," << format_real(p.lambda2) << "\n";
    os << "# E_C," << format_real(p.charging_energy) << "\n";
    os << "# eps1," << format_real(p.eps1) << "\n";
    os << "# eps2," << format_real(p.eps2) << "\n";
    os << "# phi," << format_real(p.phi) << "\n";
    os << "# gamma," << format_real(p.dephasing) << "\n";
    os << "# Delta," << format_real(p.spread) << "\n";
    os << "# validity_ratio," << format_real(p.validity_ratio()) << "\n";
}

void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<ResultRow>& rows) {
    write_metadata(os, "sweep", spec.fixed);
    os << "# swept," << to_string(spec.symbol) << "\n";
    os << to_string(spec.symbol) << ",z,model,current\n";
    for (const auto& r : rows) {
        os << format_real(r.value) << "," << (r.z == Z::Plus ? "+1" : "-1") << "," << to_string(r.model) << ","
           << format_real(r.current) << "\n";
    }
}

void VisibilitySpec::validate() const {
    if (gamma_count < 2) throw std::invalid_argument("visibility: --count must be at least 2");
    if (!std::isfinite(gamma_start) || !std::isfinite(gamma_stop) || gamma_start < 0 || gamma_stop < 0) {
        throw std::invalid_argument("visibility: gamma range must be finite and non-negative");
    }
    if (detunings.empty()) throw std::invalid_argument("visibility: at least one delta is required");
    if (phi_points < 2) throw std::invalid_argument("visibility: need at least 2 phi points");
    fixed.validate();
}

std::vector<VisibilityRow> run_visibility(const VisibilitySpec& spec, unsigned threads) {
    spec.validate();
    const std::size_t ng = std::size_t(spec.gamma_count);
    std::vector<VisibilityRow> rows(spec.detunings.size() * ng);
    parallel_for(rows.size(), threads, [&](std::size_t k) {
        const double delta = spec.detunings[k / ng];
        const double gamma = spec.gamma_start + (spec.gamma_stop - spec.gamma_start) * double(k % ng) / double(ng - 1);
        ModelParams p = with_value(spec.fixed, SweepSymbol::Detuning, delta);
        p.dephasing = gamma;
        rows[k] = {gamma, delta, visibility_closed_form(p), visibility_from_sweep(p, spec.phi_points)};
    });
    return rows;
}

void write_visibility_csv(std::ostream& os, const VisibilitySpec& spec, const std::vector<VisibilityRow>& rows) {
    write_metadata(os, "visibility", spec.fixed);
    os << "# phi_points," << spec.phi_points << "\n";
    os << "gamma,delta,V_closed_form,V_swept\n";
    for (const auto& r : rows) {
        os << format_real(r.gamma) << "," << format_real(r.delta) << "," << format_real(r.closed_form) << ","
           << format_real(r.swept) << "\n";
    }
}

bool ComparisonReport::pass() const {
    return std::all_of(deviations.begin(), deviations.end(), [](const Deviation& d) { return d.pass(); });
}

ComparisonReport compare_models(const ModelParams& p, int phi_points, unsigned threads) {
    SweepSpec spec;
    spec.symbol = SweepSymbol::Phi;
    spec.start = 0.0;
    spec.stop = 2.0 * std::numbers::pi;
    spec.count = phi_points;
    spec.fixed = p;
    spec.models = {ModelTag::Analytic, ModelTag::EffectiveNumeric, ModelTag::FullNumeric};
    spec.sectors = {Z::Plus, Z::Minus};
    const auto rows = run_sweep(spec, threads);

    ComparisonReport report;
    report.warnings = p.warnings();
    for (std::size_t s = 0; s < spec.sectors.size(); ++s) {
        Deviation ae{"analytic-vs-effective", spec.sectors[s], 0, 0, 0, kAnalyticVsEffectiveTolerance};
        Deviation fe{"full-vs-effective", spec.sectors[s], 0, 0, 0, kFullVsEffectiveTolerance};
        for (int i = 0; i < phi_points; ++i) {
            const std::size_t base = (std::size_t(i) * spec.sectors.size() + s) * 3;
            const double analytic = rows[base].current;
            const double effective = rows[base + 1].current;
            const double full = rows[base + 2].current;
            for (auto [dev, value] : {std::pair{&ae, analytic}, std::pair{&fe, full}}) {
                const double r = relative_deviation(value, effective);
                dev->mean_relative += r / phi_points;
                if (r > dev->max_relative || i == 0) {
                    dev->max_relative = r;
                    dev->worst_phi = rows[base].value;
                }
            }
        }
        report.deviations.push_back(ae);
        report.deviations.push_back(fe);
    }
    return report;
}

void write_comparison(std::ostream& os, const ModelParams& p, const ComparisonReport& report) {
    write_metadata(os, "compare-models", p);
    for (const auto& w : report.warnings) os << "# warning," << w << "\n";
    os << "z,comparison,max_relative,mean_relative,worst_phi,threshold,status\n";
    for (const auto& d : report.deviations) {
        os << (d.z == Z::Plus ? "+1" : "-1") << "," << d.comparison << "," << format_real(d.max_relative) << ","
           << format_real(d.mean_relative) << "," << format_real(d.worst_phi) << "," << format_real(d.threshold)
           << "," << (d.pass() ? "PASS" : "FAIL") << "\n";
    }
    os << "# overall," << (report.pass() ? "PASS" : "FAIL") << "\n";
}

}  // namespace dqi
