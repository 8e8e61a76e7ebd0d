// harness.hpp: parameter sweeps, model comparison and CSV output behind the
// `dqi` command-line tool.

#pragma once

#include "dqi/model.hpp"
#include "dqi/redfield.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace dqi {

enum class SweepSymbol { Phi, Detuning, Dephasing, Spread, Lambda0 };
enum class ModelTag { Analytic, EffectiveNumeric, FullNumeric };

std::string to_string(SweepSymbol s);
std::string to_string(ModelTag m);
SweepSymbol sweep_symbol_from_string(const std::string& s);
ModelTag model_tag_from_string(const std::string& s);

/// `p` with the swept quantity set to `value`. Detuning moves eps1 with eps2 fixed.
ModelParams with_value(ModelParams p, SweepSymbol symbol, double value);

struct SweepSpec {
    SweepSymbol symbol = SweepSymbol::Phi;
    double start = 0.0;
    double stop = 0.0;
    int count = 2;
    ModelParams fixed;
    std::vector<ModelTag> models{ModelTag::Analytic};
    std::vector<Z> sectors{Z::Plus};

    /// Throws std::invalid_argument on an unusable combination (count < 2,
    /// empty model/sector list, numeric model with a level spread, ...).
    void validate() const;
    double value(int i) const;
};

struct ResultRow {
    double value;
    Z z;
    ModelTag model;
    double current;
};

/// Effective numerics use large-bias leads; the 12-state model uses zero-temperature
/// leads with chemical potentials +-E_C/2, restricted to the states reachable
/// from the empty ground state. The analytic model uses the averaged form when
/// p.spread > 0.
double model_current(const ModelParams& p, ModelTag model);

/// Rows ordered by (value index, sector, model) regardless of worker scheduling.
std::vector<ResultRow> run_sweep(const SweepSpec& spec, unsigned threads = 0);

void write_metadata(std::ostream& os, const std::string& command, const ModelParams& p);
void write_sweep_csv(std::ostream& os, const SweepSpec& spec, const std::vector<ResultRow>& rows);

struct VisibilitySpec {
    double gamma_start = 0.0;
    double gamma_stop = 0.2;
    int gamma_count = 101;
    std::vector<double> detunings{0.0};
    int phi_points = 1001;
    ModelParams fixed;

    void validate() const;
};

struct VisibilityRow {
    double gamma;
    double delta;
    double closed_form;
    double swept;
};

std::vector<VisibilityRow> run_visibility(const VisibilitySpec& spec, unsigned threads = 0);
void write_visibility_csv(std::ostream& os, const VisibilitySpec& spec, const std::vector<VisibilityRow>& rows);

inline constexpr double kAnalyticVsEffectiveTolerance = 1e-8;
inline constexpr double kFullVsEffectiveTolerance = 5e-2;

struct Deviation {
    std::string comparison;  // "analytic-vs-effective" or "full-vs-effective"
    Z z;
    double max_relative;
    double mean_relative;
    double worst_phi;
    double threshold;
    bool pass() const { return max_relative <= threshold; }
};

struct ComparisonReport {
    std::vector<Deviation> deviations;
    std::vector<std::string> warnings;
    bool pass() const;
};

/// Relative deviations over a uniform phi grid on [0, 2 pi] for both sectors.
ComparisonReport compare_models(const ModelParams& p, int phi_points = 129, unsigned threads = 0);
void write_comparison(std::ostream& os, const ModelParams& p, const ComparisonReport& report);

}  // namespace dqi
