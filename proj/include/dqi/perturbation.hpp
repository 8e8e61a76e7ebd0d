// perturbation.hpp: enumeration of virtual tunnelling sequences through
// Majorana islands, with exact energy denominators and operator signs.
//
// A sequence is written as an operator product whose rightmost factor acts
// first. After each factor except the last, the islands hold some excess
// charges; the excitation energy of that intermediate state is the sum of
// E_j^+ = (1 - 2 dn_j) E_C over islands with one extra electron and
// E_j^- = (1 + 2 dn_j) E_C over islands with one missing electron.
//
// Each sequence contributes
//     operator_sign * (-1)^k / prod(excitation energies)
// to the coefficient of the canonical operator, where k is the number of
// intermediate states (each free propagator is -1/energy) and operator_sign
// comes from reordering the Majorana / dot operators into the canonical word.
// Tables report every row relative to the first one: `sign` below is that
// relative sign, and Enumeration::global_sign restores the absolute one.

#pragma once

#include "dqi/linalg.hpp"
#include "dqi/model.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dqi {

using Rational = boost::multiprecision::cpp_rational;

/// A single Majorana gamma_1..gamma_8 or dot operator d_j / d_j^dagger.
struct Generator {
    enum class Kind { Majorana, Dot };
    Kind kind;
    int index;
    bool dagger = false;

    static Generator majorana(int i) { return {Kind::Majorana, i, false}; }
    static Generator dot(int j, bool dagger) { return {Kind::Dot, j, dagger}; }

    bool operator==(const Generator&) const = default;
    std::string name() const;  // "g3", "d1", "d2+"
};

using Word = std::vector<Generator>;

/// Sign s with word = s * target, after cancelling repeated Majoranas
/// (gamma^2 = 1) and anticommuting the remaining distinct operators into the
/// target order. Throws std::logic_error if the word does not reduce to target.
int reorder_sign(const Word& word, const Word& target);

/// Island (1-4) hosting Majorana gamma_i: (8,1)->1, (2,3)->2, (4,5)->3, (6,7)->4.
int island_of(int majorana);

struct SegmentOperator {
    std::string name;                  // "L1", "L2†", "A87", ...
    Word word;
    std::array<int, 4> island_delta{};  // change in excess charge of islands 1..4
    Complex amplitude;                 // coefficient in the tunnelling Hamiltonian
};

/// E_j^+ (sign = +1) or E_j^- (sign = -1).
struct ChargeTerm {
    int island;
    int sign;
    bool operator==(const ChargeTerm&) const = default;
};

using ExcitationFactor = std::vector<ChargeTerm>;  // sorted by island

struct IslandChargeConfig {
    double charging_energy = 1.0;
    std::vector<double> offsets;  // Delta n_g per island, |.| < 1/2

    void validate(std::size_t islands_needed) const;
    double energy(const ChargeTerm& term) const;
    Rational energy_exact(const ChargeTerm& term) const;
};

struct TransferSequence {
    std::vector<std::size_t> order;         // indices into Enumeration::segments, left to right
    std::string name;                       // concatenated segment names
    std::vector<ExcitationFactor> factors;  // intermediate states in time order
    int operator_sign = 1;
    int propagator_sign = 1;                // (-1)^k
    int sign = 1;                           // relative to row 1
    Rational value;                         // sign / prod(energies), exact
};

enum class EnumerationTarget { Qubit, Shortcut, CodeLoop, StabilizerLoop };

std::string to_string(EnumerationTarget t);
EnumerationTarget target_from_string(const std::string& s);

struct Enumeration {
    EnumerationTarget target;
    IslandChargeConfig config;
    std::vector<SegmentOperator> segments;
    Word canonical_word;
    Complex canonical_phase{1.0, 0.0};  // canonical operator = phase * canonical_word
    std::string canonical_name;
    std::vector<TransferSequence> sequences;
    int global_sign = 1;                // absolute sign of row 1
    std::size_t reference_rows = 0;         // leading rows in the order of the reference tables
    Rational sum;                       // sum of the relative-sign values

    double sum_value() const { return sum.convert_to<double>(); }
    /// Coefficient of the canonical operator produced by all sequences together.
    Complex amplitude() const;
};

/// Second-order transfer D1 -> D2 through a Majorana qubit island. Segments
/// T1 = lambda1 d1 g1 and T2 = -i lambda2^* g2 d2^dagger; the canonical
/// operator is z d2^dagger d1 with z = i g2 g1, and amplitude() = 2 l1 l2^* / E_C
/// at zero offset.
Enumeration enumerate_qubit_2nd_order(Complex lambda1, Complex lambda2, double charging_energy,
                                      double offset = 0.0);

struct StabilizerAmplitudes {
    Complex lambda1{1.0, 0.0};
    Complex lambda2{1.0, 0.0};
    Complex t12{1.0, 0.0};
    Complex t34{1.0, 0.0};
    Complex t56{1.0, 0.0};
    Complex t78{1.0, 0.0};
};

/// Third-order D2 -> D1 transfer through the gamma1-gamma2 link (six rows,
/// reference order); canonical operator d1^dagger d2.
Enumeration enumerate_shortcut(const IslandChargeConfig& cfg, const StabilizerAmplitudes& amps = {});

/// Fourth-order loop fluctuation A12 A34 A56 A78 (24 rows); canonical operator
/// gamma1 ... gamma8.
Enumeration enumerate_code_loop(const IslandChargeConfig& cfg, const StabilizerAmplitudes& amps = {});

/// c = 5 prod(t) / (16 E_C^3) at zero offset. The loop amplitude of one
/// orientation is -c/2 per Z; its Hermitian conjugate supplies the other half,
/// so c = -2 * amplitude().
Complex code_coefficient_from(const Enumeration& code_loop);

/// Fifth-order D2 -> D1 transfer around the loop (120 rows); canonical
/// operator gamma1 ... gamma8 d1^dagger d2.
Enumeration enumerate_stabilizer_loop(const IslandChargeConfig& cfg, const StabilizerAmplitudes& amps = {});

/// Closed form of the summed (relative-sign) denominators, compared
/// exactly. The code loop has one only at zero offset, where the rows also split
/// into 16 at 1/(8 E_C^3) and 8 at 1/(16 E_C^3).
struct ClosedFormCheck {
    bool available = false;
    Rational expected;
    bool pass = false;
    std::string description;
};

ClosedFormCheck check_closed_form(const Enumeration& e);

/// (4/E_C^2) eta, the simplified form quoted for the shortcut sum. The row sum
/// equals (1/E1+ - 1/E1-)(1/E2+ - 1/E2-) = (16/E_C^2) eta, so the two differ by
/// a factor 4 whenever eta != 0.
Rational shortcut_eta_form(const IslandChargeConfig& cfg);

/// Number of rows per distinct exact value.
std::map<Rational, int> value_partition(const Enumeration& e);

/// Every ordering of `base` in the recursive order used for the loop tables:
/// the last element cycles through base from the back, the prefix recurses.
std::vector<std::vector<std::size_t>> canonical_permutations(std::size_t n);

/// "-1/((E1-+E2+)*E2+)": sign, then the factors latest first.
std::string symbolic_denominator(const TransferSequence& seq);

struct ParsedDenominator {
    int sign;
    std::vector<ExcitationFactor> factors;  // time order
};

ParsedDenominator parse_symbolic_denominator(const std::string& text);
double evaluate_denominator(const ParsedDenominator& d, const IslandChargeConfig& cfg);

/// CSV: `#` metadata lines, then `index,sequence,denominator_symbolic,denominator_value`.
void emit_sequence_table(std::ostream& os, const Enumeration& e);

struct ParsedRow {
    std::size_t index;
    std::string sequence;
    ParsedDenominator denominator;
    double value;
};

std::vector<ParsedRow> parse_sequence_table(std::istream& is);

}  // namespace dqi
