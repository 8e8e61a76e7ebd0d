// dqi: sweeps, visibility curves, sequence tables and model comparison.
//
// Exit codes: 0 success, 1 threshold failure, 2 usage error, 3 solver failure.

#include "dqi/analytic.hpp"
#include "dqi/format.hpp"
#include "dqi/harness.hpp"
#include "dqi/perturbation.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

namespace {

constexpr int kThresholdFail = 1;
constexpr int kUsage = 2;
constexpr int kSolverFailure = 3;

struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParamFlags {
    dqi::ModelParams p = dqi::ModelParams::reference();
    std::optional<double> gamma_both;
    std::optional<double> delta;
    std::vector<std::string> sectors{"+1"};

    void add_to(CLI::App* app, bool with_sectors) {
        app->add_option("--Gamma", gamma_both, "lead rate for both leads (sets Gamma1 = Gamma2)");
        app->add_option("--Gamma1", p.gamma1, "source lead rate")->capture_default_str();
        app->add_option("--Gamma2", p.gamma2, "drain lead rate")->capture_default_str();
        app->add_option("--lambda0", p.lambda0, "direct dot-dot amplitude")->capture_default_str();
        app->add_option("--lambda1", p.lambda1, "dot 1 - Majorana amplitude")->capture_default_str();
        app->add_option("--lambda2", p.lambda2, "dot 2 - Majorana amplitude")->capture_default_str();
        app->add_option("--ec", p.charging_energy, "island charging energy E_C")->capture_default_str();
        app->add_option("--eps1", p.eps1, "dot 1 level")->capture_default_str();
        app->add_option("--eps2", p.eps2, "dot 2 level")->capture_default_str();
        app->add_option("--delta", delta, "detuning eps1 - eps2 (moves eps1)");
        app->add_option("--phi", p.phi, "flux phase in rad")->capture_default_str();
        app->add_option("--gamma", p.dephasing, "dephasing rate of dot 1")->capture_default_str();
        app->add_option("--Delta", p.spread, "half-width of the eps1 distribution")->capture_default_str();
        if (with_sectors) {
            app->add_option("--z", sectors, "qubit sectors, e.g. +1,-1")->delimiter(',')->capture_default_str();
        }
    }

    dqi::ModelParams params() const {
        dqi::ModelParams q = p;
        if (gamma_both) q.gamma1 = q.gamma2 = *gamma_both;
        if (delta) q.eps1 = q.eps2 + *delta;
        try {
            q.validate();
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
        return q;
    }

    std::vector<dqi::Z> zs() const {
        std::vector<dqi::Z> out;
        for (const auto& s : sectors) {
            if (s == "+1" || s == "1") out.push_back(dqi::Z::Plus);
            else if (s == "-1") out.push_back(dqi::Z::Minus);
            else throw UsageError("--z expects +1 and/or -1, got '" + s + "'");
        }
        return out;
    }
};

// Writes to --out when given, stdout otherwise; file output is committed only
// once the command has produced all of it.
class Output {
public:
    explicit Output(const std::string& path) : path_(path) {}
    std::ostream& stream() { return path_.empty() ? std::cout : buffer_; }
    void commit() {
        if (path_.empty()) return;
        std::ofstream f(path_, std::ios::binary);
        if (!f) throw UsageError("cannot open output file '" + path_ + "'");
        f << buffer_.str();
    }

private:
    std::string path_;
    std::ostringstream buffer_;
};

void report_warnings(const dqi::ModelParams& p) {
    for (const auto& w : p.warnings()) std::cerr << "warning: " << w << "\n";
}

std::vector<dqi::ModelTag> parse_models(const std::vector<std::string>& names) {
    std::vector<dqi::ModelTag> out;
    for (const auto& n : names) {
        try {
            out.push_back(dqi::model_tag_from_string(n));
        } catch (const std::invalid_argument& e) {
            throw UsageError(e.what());
        }
    }
    return out;
}

template <typename F>
auto as_usage(F&& f) {
    try {
        return f();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transport through a double quantum dot coupled via a Majorana island"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(DQI_VERSION));
    unsigned threads = 0;
    app.add_option("--threads", threads, "worker threads (0: hardware concurrency)");

    std::function<int()> action;

    // sweep
    auto* sweep = app.add_subcommand("sweep", "steady-state current along one parameter");
    ParamFlags sweep_flags;
    sweep_flags.add_to(sweep, true);
    std::string symbol = "phi";
    double from = 0.0, to = 2.0 * M_PI;
    int count = 129;
    std::vector<std::string> models{"analytic"};
    std::string sweep_out;
    sweep->add_option("--symbol", symbol, "phi, delta, gamma, Delta or lambda0")->capture_default_str();
    sweep->add_option("--from", from, "first value")->capture_default_str();
    sweep->add_option("--to", to, "last value")->capture_default_str();
    sweep->add_option("--count", count, "number of points (>= 2)")->capture_default_str();
    sweep->add_option("--models", models, "analytic, effective-numeric, full-numeric")
        ->delimiter(',')
        ->capture_default_str();
    sweep->add_option("--out", sweep_out, "output file (default stdout)");
    sweep->callback([&] {
        action = [&] {
            dqi::SweepSpec spec;
            spec.symbol = as_usage([&] { return dqi::sweep_symbol_from_string(symbol); });
            spec.start = from;
            spec.stop = to;
            spec.count = count;
            spec.fixed = sweep_flags.params();
            spec.models = parse_models(models);
            spec.sectors = sweep_flags.zs();
            as_usage([&] { spec.validate(); return 0; });
            report_warnings(spec.fixed);
            const auto rows = dqi::run_sweep(spec, threads);
            Output out(sweep_out);
            dqi::write_sweep_csv(out.stream(), spec, rows);
            out.commit();
            return 0;
        };
    });

    // visibility
    auto* vis = app.add_subcommand("visibility", "interference visibility against dephasing");
    ParamFlags vis_flags;
    vis_flags.add_to(vis, false);
    dqi::VisibilitySpec vspec;
    std::vector<double> deltas{0.0};
    std::string vis_out;
    vis->add_option("--from", vspec.gamma_start, "first gamma")->capture_default_str();
    vis->add_option("--to", vspec.gamma_stop, "last gamma")->capture_default_str();
    vis->add_option("--count", vspec.gamma_count, "number of gamma points")->capture_default_str();
    vis->add_option("--deltas", deltas, "detunings eps1 - eps2")->delimiter(',')->capture_default_str();
    vis->add_option("--phi-points", vspec.phi_points, "phi grid for the swept visibility")->capture_default_str();
    vis->add_option("--out", vis_out, "output file (default stdout)");
    vis->callback([&] {
        action = [&] {
            vspec.fixed = vis_flags.params();
            vspec.detunings = deltas;
            as_usage([&] { vspec.validate(); return 0; });
            report_warnings(vspec.fixed);
            const auto rows = dqi::run_visibility(vspec, threads);
            Output out(vis_out);
            dqi::write_visibility_csv(out.stream(), vspec, rows);
            out.commit();
            return 0;
        };
    });

    // enumerate
    auto* en = app.add_subcommand("enumerate", "tunnelling sequences and energy denominators");
    std::string target;
    std::vector<double> dng;
    double ec = 1.0;
    double l1 = 1.0, l2 = 1.0, t12 = 1.0, t34 = 1.0, t56 = 1.0, t78 = 1.0;
    std::string en_out;
    en->add_option("--target", target, "qubit, shortcut, code or stabilizer")->required();
    en->add_option("--dng", dng, "gate offsets Delta n_g per island (default all 0)")->delimiter(',');
    en->add_option("--ec", ec, "charging energy")->capture_default_str();
    en->add_option("--lambda1", l1, "dot 1 amplitude")->capture_default_str();
    en->add_option("--lambda2", l2, "dot 2 amplitude")->capture_default_str();
    en->add_option("--t12", t12, "link amplitude t12")->capture_default_str();
    en->add_option("--t34", t34, "link amplitude t34")->capture_default_str();
    en->add_option("--t56", t56, "link amplitude t56")->capture_default_str();
    en->add_option("--t78", t78, "link amplitude t78")->capture_default_str();
    en->add_option("--out", en_out, "output file (default stdout)");
    en->callback([&] {
        action = [&] {
            const auto kind = as_usage([&] { return dqi::target_from_string(target); });
            const std::size_t islands = kind == dqi::EnumerationTarget::Qubit      ? 1
                                        : kind == dqi::EnumerationTarget::Shortcut ? 2
                                                                                   : 4;
            if (dng.empty()) dng.assign(islands, 0.0);
            if (dng.size() != islands) {
                throw UsageError("--dng needs " + std::to_string(islands) + " values for target " + target);
            }
            const dqi::IslandChargeConfig cfg{ec, dng};
            const dqi::StabilizerAmplitudes amps{l1, l2, t12, t34, t56, t78};
            const dqi::Enumeration e = as_usage([&] {
                switch (kind) {
                    case dqi::EnumerationTarget::Qubit: return dqi::enumerate_qubit_2nd_order(l1, l2, ec, dng[0]);
                    case dqi::EnumerationTarget::Shortcut: return dqi::enumerate_shortcut(cfg, amps);
                    case dqi::EnumerationTarget::CodeLoop: return dqi::enumerate_code_loop(cfg, amps);
                    case dqi::EnumerationTarget::StabilizerLoop: break;
                }
                return dqi::enumerate_stabilizer_loop(cfg, amps);
            });
            const auto check = dqi::check_closed_form(e);
            Output out(en_out);
            std::ostream& os = out.stream();
            os << "# dqi " << DQI_VERSION << "\n# command,enumerate\n";
            dqi::emit_sequence_table(os, e);
            const auto amp = e.amplitude();
            os << "# amplitude," << dqi::format_real(amp.real()) << "," << dqi::format_real(amp.imag()) << "\n";
            if (kind == dqi::EnumerationTarget::CodeLoop) {
                const auto c = dqi::code_coefficient_from(e);
                os << "# c," << dqi::format_real(c.real()) << "," << dqi::format_real(c.imag()) << "\n";
            }
            if (!check.available) {
                os << "# closed_form,n/a (" << check.description << ")\n# check,n/a\n";
                out.commit();
                return 0;
            }
            os << "# closed_form," << dqi::format_real(check.expected.convert_to<double>()) << "," << check.description
               << "\n";
            if (kind == dqi::EnumerationTarget::Shortcut) {
                const dqi::Rational eta_form = dqi::shortcut_eta_form(cfg);
                os << "# eta_form," << dqi::format_real(eta_form.convert_to<double>()) << ",(4/E_C^2) eta";
                if (eta_form != 0) os << "; sum/eta_form = " << dqi::format_real((e.sum / eta_form).convert_to<double>());
                os << "\n";
            }
            os << "# check," << (check.pass ? "PASS" : "FAIL") << "\n";
            out.commit();
            return check.pass ? 0 : kThresholdFail;
        };
    });

    // compare-models
    auto* cmp = app.add_subcommand("compare-models", "analytic vs effective vs 12-state currents over phi");
    ParamFlags cmp_flags;
    cmp_flags.add_to(cmp, false);
    int cmp_count = 129;
    std::string cmp_out;
    cmp->add_option("--count", cmp_count, "phi grid points")->capture_default_str();
    cmp->add_option("--out", cmp_out, "output file (default stdout)");
    cmp->callback([&] {
        action = [&] {
            const auto p = cmp_flags.params();
            if (p.spread > 0) throw UsageError("compare-models: numeric models do not support --Delta");
            if (cmp_count < 2) throw UsageError("compare-models: --count must be at least 2");
            report_warnings(p);
            const auto report = dqi::compare_models(p, cmp_count, threads);
            Output out(cmp_out);
            dqi::write_comparison(out.stream(), p, report);
            out.commit();
            if (!report.pass()) {
                for (const auto& d : report.deviations) {
                    if (!d.pass()) {
                        std::cerr << "threshold exceeded: " << d.comparison << " z=" << dqi::sign_of(d.z)
                                  << " max relative deviation " << d.max_relative << " at phi=" << d.worst_phi
                                  << " (threshold " << d.threshold << ")\n";
                    }
                }
                return kThresholdFail;
            }
            return 0;
        };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    try {
        return action();
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return kSolverFailure;
    }
}
