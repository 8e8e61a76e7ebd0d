// model.hpp: Hamiltonians and dot operators of the double-dot interferometer.
//
// Two constructions share one HamiltonianModel record:
//   Effective4: the dots alone, coupled by the island-mediated amplitude Omega.
//   Full12:     dots (x) the three charge states of the Majorana island in one
//               qubit sector.
//
// Sign convention (locked by tests): modes are ordered (dot 1, dot 2, f_R) with
// Jordan-Wigner strings, d1 = a (x) 1, d2 = sz (x) a. Dot basis index is
// 2 n1 + n2, i.e. |00>, |01>, |10>, |11>.

#pragma once

#include "dqi/linalg.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dqi {

/// Eigenvalue of the qubit operator z = i g2 g1 (or of the stabilizer).
enum class Z : int { Plus = 1, Minus = -1 };

inline int sign_of(Z z) { return static_cast<int>(z); }
Z z_from_int(int value);

struct ModelParams {
    double gamma1 = 0.01;           // lead 1 (source) rate
    double gamma2 = 0.01;           // lead 2 (drain) rate
    double lambda0 = 0.01;          // direct dot-dot amplitude
    double lambda1 = 0.1;           // dot 1 - Majorana amplitude
    double lambda2 = 0.1;           // dot 2 - Majorana amplitude
    double charging_energy = 1.0;   // E_C
    double eps1 = 0.0;
    double eps2 = 0.0;
    double phi = 0.0;               // flux phase (rad)
    Z z = Z::Plus;
    double dephasing = 0.0;         // gamma, rate of D[d1^dagger d1]
    double spread = 0.0;            // Delta, half-width of the eps1 distribution
    // d2^dagger d1 coefficient replacing z * lambda_tilde (stabilizer readout).
    std::optional<Complex> island_coupling;

    double detuning() const { return eps1 - eps2; }
    double validity_ratio() const;
    void validate() const;
    std::vector<std::string> warnings() const;

    // Gamma = 0.01, E_C = 100 Gamma, lambda0 = Gamma, lambda1 = lambda2 = 10 Gamma.
    static ModelParams reference();
};

inline constexpr double kValidityWarnRatio = 0.2;

struct EffectiveCoupling {
    Complex omega;          // coefficient of d2^dagger d1
    Complex lambda_tilde;   // 2 lambda1 lambda2^* / E_C
    Complex island_term;    // z * lambda_tilde, or the override
};

EffectiveCoupling effective_coupling(const ModelParams& p);

enum class ModelKind { Effective4, Full12 };

struct HamiltonianModel {
    ModelKind kind = ModelKind::Effective4;
    std::vector<std::string> basis_labels;
    ComplexMatrix hamiltonian;
    ComplexMatrix d1;
    ComplexMatrix d2;
    std::vector<int> n1;             // dot 1 occupation per basis state
    std::vector<int> n2;             // dot 2 occupation per basis state
    std::vector<int> island_charge;  // relative to the island ground state
    double validity_ratio = 0.0;
    std::vector<std::string> warnings;

    Eigen::Index dim() const { return hamiltonian.rows(); }
    ComplexMatrix occupation(int dot) const;

    // Sub-model on the listed basis states (order preserved).
    HamiltonianModel restricted(std::span<const Eigen::Index> states) const;
};

HamiltonianModel build_effective_model(const ModelParams& p);

/// Dots (x) {|g>, |e+>, |e->} of the sector `sector`.
/// Island-major basis order: the first four states are the island ground
/// state with the dots in Effective4 order, then e+ (N+1), then e- (N-1).
HamiltonianModel build_full_model(const ModelParams& p, Z sector);
inline HamiltonianModel build_full_model(const ModelParams& p) { return build_full_model(p, p.z); }

/// Basis states connected to `start` through H, d1 or d2 (in either direction).
std::vector<Eigen::Index> reachable_states(const HamiltonianModel& model, Eigen::Index start = 0);

/// Inputs of the stabilizer-mediated dot-dot coupling.
struct StabilizerCouplingInput {
    Complex lambda1{0.1, 0.0};
    Complex lambda2{0.1, 0.0};
    Complex t12{1.0, 0.0};
    Complex t34{1.0, 0.0};
    Complex t56{1.0, 0.0};
    Complex t78{1.0, 0.0};
    double charging_energy = 1.0;
    std::array<double, 4> offsets{0.0, 0.0, 0.0, 0.0};   // Delta n_g per island
    Z stabilizer = Z::Plus;
};

/// eta = dn1 dn2 / ((1 - 4 dn1^2)(1 - 4 dn2^2))
double charge_asymmetry(double dn1, double dn2);

/// c = 5 t12 t34 t56 t78 / (16 E_C^3)
Complex code_coefficient(const StabilizerCouplingInput& in);

/// alpha (xi + c^* Z), the coefficient of d1^dagger d2 with
/// alpha = -32 lambda1 lambda2^* / (5 t12^* E_C), xi = 5 |t12|^2 eta / (16 E_C).
/// Throws std::invalid_argument for t12 = 0, E_C <= 0 or |Delta n_g| >= 1/2.
Complex stabilizer_effective_coupling(const StabilizerCouplingInput& in);

/// `p` with island_coupling set to the d2^dagger d1 coefficient of the stabilizer
/// coupling (the complex conjugate of the d1^dagger d2 coefficient).
ModelParams with_stabilizer(ModelParams p, const StabilizerCouplingInput& in);

}  // namespace dqi
