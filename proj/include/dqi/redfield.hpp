// redfield.hpp: Born-Markov-Redfield transport engine.
//
//   drho/dt = -i[H, rho]
//             - 1/2 sum_j { [d_j^dag, D_j^- rho - rho D_j^+] + h.c. }
//             + gamma (s rho s^dag - 1/2 {s^dag s, rho})
//
// with (D_j^{+/-})_{nm} = Gamma_j f_j^{+/-}(E_m - E_n) (d_j)_{nm} in the
// eigenbasis of H, f^+ = f and f^- = 1 - f. Lead 1 couples to dot 1, lead 2 to
// dot 2; the current is the one flowing into lead 2.

#pragma once

#include "dqi/linalg.hpp"
#include "dqi/model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace dqi {

enum class LeadMode { GeneralFermi, LargeBiasSource, LargeBiasDrain };

struct LeadSpec {
    double rate = 0.01;
    double chemical_potential = 0.0;
    double temperature = 0.0;
    LeadMode mode = LeadMode::GeneralFermi;

    void validate() const;
    /// Fermi occupation at `energy`; 1 / 0 in the large-bias modes.
    /// At zero temperature the step takes the value 1/2 at the chemical potential.
    double occupation(double energy) const;

    static LeadSpec source(double rate) { return {rate, 0.0, 0.0, LeadMode::LargeBiasSource}; }
    static LeadSpec drain(double rate) { return {rate, 0.0, 0.0, LeadMode::LargeBiasDrain}; }
    static LeadSpec fermi(double rate, double mu, double temperature) {
        return {rate, mu, temperature, LeadMode::GeneralFermi};
    }
};

struct LeadPair {
    LeadSpec lead1;
    LeadSpec lead2;
};

/// Large-bias leads: lead 1 always injects, lead 2 always absorbs.
LeadPair large_bias_leads(const ModelParams& p);

/// Zero-temperature leads with the bias window (-E_C/2, +E_C/2): it holds the
/// low-energy levels of the 12-state model but none of the charged-island ones.
LeadPair gap_window_leads(const ModelParams& p);

struct LeadDissipator {
    ComplexMatrix plus;   // D^(+)
    ComplexMatrix minus;  // D^(-)
};

struct Dissipators {
    LeadDissipator lead1;
    LeadDissipator lead2;
};

Dissipators build_dissipator_operators(const HamiltonianModel& model, const LeadPair& leads);

struct Liouvillian {
    Eigen::Index dim = 0;  // Hilbert-space dimension; matrices are dim^2 x dim^2
    ComplexMatrix coherent;
    ComplexMatrix lead1;
    ComplexMatrix lead2;
    ComplexMatrix dephasing;
    ComplexMatrix total;

    ComplexMatrix apply(const ComplexMatrix& rho) const;
};

Liouvillian build_liouvillian(const HamiltonianModel& model, const Dissipators& dissipators,
                              double dephasing_rate, const ComplexMatrix& dephasing_operator);
/// Dephasing operator defaults to d1^dagger d1.
Liouvillian build_liouvillian(const HamiltonianModel& model, const LeadPair& leads,
                              double dephasing_rate = 0.0);

/// Hermitian, unit-trace state. Positivity is recorded rather than enforced:
/// Redfield dynamics may produce small negative eigenvalues.
class DensityMatrix {
public:
    explicit DensityMatrix(ComplexMatrix rho);
    static DensityMatrix pure(Eigen::Index dim, Eigen::Index state);

    const ComplexMatrix& matrix() const { return rho_; }
    Eigen::Index dim() const { return rho_.rows(); }
    double min_eigenvalue() const { return min_eigenvalue_; }
    bool positive() const { return min_eigenvalue_ >= -tol::positivity; }
    double population(Eigen::Index i) const { return rho_(i, i).real(); }

private:
    ComplexMatrix rho_;
    double min_eigenvalue_;
};

struct SteadyState {
    DensityMatrix state;
    double residual;                    // max|L vec(rho)|
    std::vector<std::string> warnings;  // e.g. positivity violations
};

/// Null-space solve with the trace condition replacing the first population row.
/// Throws std::runtime_error naming the degeneracy when the null space of L is
/// not one-dimensional.
SteadyState steady_state(const Liouvillian& liouvillian);

struct Trajectory {
    std::vector<double> times;
    std::vector<ComplexMatrix> states;
};

/// Fixed-step RK4; records every `record_stride`-th step plus the final state.
/// Requires dt * max|L| <= 0.1.
Trajectory evolve(const Liouvillian& liouvillian, const ComplexMatrix& rho0, double t_final,
                  double dt, int record_stride = 1);

/// Final state of the same fixed-step RK4 scheme, computed by raising the
/// one-step propagator to the number of steps (binary powering).
ComplexMatrix propagate(const Liouvillian& liouvillian, const ComplexMatrix& rho0, double t_final,
                        double dt);

/// I = 1/2 Tr[(d2^dag D2^- - D2^+ d2^dag) rho + h.c.]
double current(const HamiltonianModel& model, const Dissipators& dissipators, const ComplexMatrix& rho);
double current(const HamiltonianModel& model, const LeadPair& leads, const ComplexMatrix& rho);

struct TransportSolution {
    SteadyState steady;
    double current;
};

TransportSolution solve_transport(const HamiltonianModel& model, const LeadPair& leads,
                                  double dephasing_rate);

}  // namespace dqi
