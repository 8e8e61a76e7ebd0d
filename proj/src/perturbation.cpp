#include "dqi/perturbation.hpp"

#include "dqi/format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dqi {

namespace {

const std::string kDagger = "†";

Generator g(int i) { return Generator::majorana(i); }

SegmentOperator link(int m, int n, Complex amplitude) {
    SegmentOperator s;
    s.name = "A" + std::to_string(m) + std::to_string(n);
    s.word = {g(m), g(n)};
    s.island_delta[static_cast<std::size_t>(island_of(m) - 1)] += 1;
    s.island_delta[static_cast<std::size_t>(island_of(n) - 1)] -= 1;
    s.amplitude = amplitude;
    return s;
}

// L1 = d1^dagger g1: the electron leaves island 1 for dot 1.
SegmentOperator lead_in_1(Complex lambda1) {
    SegmentOperator s{"L1", {Generator::dot(1, true), g(1)}, {}, lambda1};
    s.island_delta[0] = -1;
    return s;
}

// L2^dagger = g2 d2: the electron leaves dot 2 for island 2.
SegmentOperator lead_out_2(Complex lambda2) {
    SegmentOperator s{"L2" + kDagger, {g(2), Generator::dot(2, false)}, {}, std::conj(lambda2)};
    s.island_delta[1] = +1;
    return s;
}

Word loop_word() {
    Word w;
    for (int i = 1; i <= 8; ++i) w.push_back(g(i));
    return w;
}

Enumeration run(EnumerationTarget target, const IslandChargeConfig& cfg, std::size_t islands,
                std::vector<SegmentOperator> segments, Word canonical, Complex phase, std::string canonical_name,
                const std::vector<std::vector<std::size_t>>& orders, std::size_t reference_rows) {
    cfg.validate(islands);
    Enumeration e;
    e.target = target;
    e.config = cfg;
    e.segments = std::move(segments);
    e.canonical_word = std::move(canonical);
    e.canonical_phase = phase;
    e.canonical_name = std::move(canonical_name);
    e.reference_rows = reference_rows;

    for (const auto& order : orders) {
        TransferSequence seq;
        seq.order = order;
        Word word;
        for (std::size_t idx : order) {
            seq.name += e.segments[idx].name;
            const Word& w = e.segments[idx].word;
            word.insert(word.end(), w.begin(), w.end());
        }

        std::array<int, 4> charge{};
        for (std::size_t k = order.size(); k-- > 0;) {
            const auto& delta = e.segments[order[k]].island_delta;
            for (std::size_t j = 0; j < 4; ++j) charge[j] += delta[j];
            if (k == 0) break;
            ExcitationFactor factor;
            for (std::size_t j = 0; j < 4; ++j) {
                if (charge[j] == 0) continue;
                if (std::abs(charge[j]) > 1) {
                    throw std::logic_error("enumeration: island with more than one excess charge in " + seq.name);
                }
                factor.push_back({int(j) + 1, charge[j]});
            }
            if (factor.empty()) throw std::logic_error("enumeration: unexcited intermediate state in " + seq.name);
            seq.factors.push_back(std::move(factor));
        }
        if (std::any_of(charge.begin(), charge.end(), [](int c) { return c != 0; })) {
            throw std::logic_error("enumeration: sequence " + seq.name + " does not return the islands to |G>");
        }

        seq.operator_sign = reorder_sign(word, e.canonical_word);
        seq.propagator_sign = seq.factors.size() % 2 == 0 ? 1 : -1;
        e.sequences.push_back(std::move(seq));
    }

    e.global_sign = e.sequences.front().operator_sign * e.sequences.front().propagator_sign;
    e.sum = 0;
    for (auto& seq : e.sequences) {
        seq.sign = seq.operator_sign * seq.propagator_sign * e.global_sign;
        Rational v = seq.sign;
        for (const auto& factor : seq.factors) {
            Rational energy = 0;
            for (const auto& term : factor) energy += cfg.energy_exact(term);
            v /= energy;
        }
        seq.value = v;
        e.sum += v;
    }
    return e;
}

}  // namespace

std::string Generator::name() const {
    if (kind == Kind::Majorana) return "g" + std::to_string(index);
    return "d" + std::to_string(index) + (dagger ? "+" : "");
}

int island_of(int majorana) {
    switch (majorana) {
        case 8: case 1: return 1;
        case 2: case 3: return 2;
        case 4: case 5: return 3;
        case 6: case 7: return 4;
        default: throw std::out_of_range("island_of: Majorana index must be 1..8");
    }
}

int reorder_sign(const Word& word, const Word& target) {
    Word w = word;
    int sign = 1;
    for (bool again = true; again;) {
        again = false;
        for (std::size_t i = 0; i < w.size() && !again; ++i) {
            if (w[i].kind != Generator::Kind::Majorana) continue;
            for (std::size_t j = i + 1; j < w.size(); ++j) {
                if (w[j] == w[i]) {
                    // bring the partner next to w[i], then g^2 = 1
                    if ((j - i - 1) % 2 == 1) sign = -sign;
                    w.erase(w.begin() + std::ptrdiff_t(j));
                    w.erase(w.begin() + std::ptrdiff_t(i));
                    again = true;
                    break;
                }
            }
        }
    }

    auto describe = [](const Word& x) {
        std::string s;
        for (const auto& gen : x) s += gen.name() + " ";
        return s;
    };
    if (w.size() != target.size()) {
        throw std::logic_error("reorder_sign: " + describe(w) + "does not reduce to " + describe(target));
    }
    std::vector<std::size_t> pos;
    std::vector<bool> used(target.size(), false);
    for (const auto& gen : w) {
        auto it = std::find(target.begin(), target.end(), gen);
        const auto p = std::size_t(it - target.begin());
        if (it == target.end() || used[p]) {
            throw std::logic_error("reorder_sign: " + describe(w) + "does not reduce to " + describe(target));
        }
        used[p] = true;
        pos.push_back(p);
    }
    for (std::size_t a = 0; a < pos.size(); ++a)
        for (std::size_t b = a + 1; b < pos.size(); ++b)
            if (pos[a] > pos[b]) sign = -sign;
    return sign;
}

void IslandChargeConfig::validate(std::size_t islands_needed) const {
    if (!(charging_energy > 0) || !std::isfinite(charging_energy)) {
        throw std::invalid_argument("IslandChargeConfig: E_C must be positive");
    }
    if (offsets.size() < islands_needed) {
        throw std::invalid_argument("IslandChargeConfig: need " + std::to_string(islands_needed) +
                                    " gate offsets, got " + std::to_string(offsets.size()));
    }
    for (double dn : offsets) {
        if (!(std::abs(dn) < 0.5)) throw std::invalid_argument("IslandChargeConfig: |Delta n_g| must be < 1/2");
    }
}

double IslandChargeConfig::energy(const ChargeTerm& t) const {
    const double dn = offsets.at(std::size_t(t.island - 1));
    return (1.0 - 2.0 * t.sign * dn) * charging_energy;
}

Rational IslandChargeConfig::energy_exact(const ChargeTerm& t) const {
    const Rational dn(offsets.at(std::size_t(t.island - 1)));
    return (Rational(1) - 2 * t.sign * dn) * Rational(charging_energy);
}

std::string to_string(EnumerationTarget t) {
    switch (t) {
        case EnumerationTarget::Qubit: return "qubit";
        case EnumerationTarget::Shortcut: return "shortcut";
        case EnumerationTarget::CodeLoop: return "code";
        case EnumerationTarget::StabilizerLoop: return "stabilizer";
    }
    return "?";
}

EnumerationTarget target_from_string(const std::string& s) {
    if (s == "qubit") return EnumerationTarget::Qubit;
    if (s == "shortcut") return EnumerationTarget::Shortcut;
    if (s == "code") return EnumerationTarget::CodeLoop;
    if (s == "stabilizer") return EnumerationTarget::StabilizerLoop;
    throw std::invalid_argument("unknown enumeration target '" + s + "' (qubit, shortcut, code, stabilizer)");
}

Complex Enumeration::amplitude() const {
    Complex prefactor = 1.0;
    for (const auto& s : segments) prefactor *= s.amplitude;
    return prefactor / canonical_phase * double(global_sign) * sum.convert_to<double>();
}

std::vector<std::vector<std::size_t>> canonical_permutations(std::size_t n) {
    if (n == 0) return {{}};
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> base(n);
    for (std::size_t i = 0; i < n; ++i) base[i] = i;
    // perm(S) = [p + [last] for last in reversed(S) for p in perm(S \ last)]
    auto rec = [](auto&& self, const std::vector<std::size_t>& s) -> std::vector<std::vector<std::size_t>> {
        if (s.size() == 1) return {s};
        std::vector<std::vector<std::size_t>> res;
        for (std::size_t k = s.size(); k-- > 0;) {
            std::vector<std::size_t> rest = s;
            rest.erase(rest.begin() + std::ptrdiff_t(k));
            for (auto p : self(self, rest)) {
                p.push_back(s[k]);
                res.push_back(std::move(p));
            }
        }
        return res;
    };
    return rec(rec, base);
}

Enumeration enumerate_qubit_2nd_order(Complex lambda1, Complex lambda2, double charging_energy, double offset) {
    SegmentOperator t1{"T1", {Generator::dot(1, false), g(1)}, {1, 0, 0, 0}, lambda1};
    SegmentOperator t2{"T2", {g(2), Generator::dot(2, true)}, {-1, 0, 0, 0}, Complex(0, -1) * std::conj(lambda2)};
    IslandChargeConfig cfg{charging_energy, {offset}};
    // (i) D1 -> g1 first, then g2 -> D2; (ii) the reverse.
    return run(EnumerationTarget::Qubit, cfg, 1, {t1, t2}, {g(2), g(1), Generator::dot(2, true), Generator::dot(1, false)},
               Complex(0, 1), "z d2" + kDagger + " d1", {{1, 0}, {0, 1}}, 2);
}

Enumeration enumerate_shortcut(const IslandChargeConfig& cfg, const StabilizerAmplitudes& amps) {
    std::vector<SegmentOperator> seg{lead_in_1(amps.lambda1), lead_out_2(amps.lambda2), link(1, 2, -0.5 * amps.t12)};
    enum : std::size_t { L1, L2d, A12 };
    const std::vector<std::vector<std::size_t>> reference{
        {L1, A12, L2d}, {A12, L1, L2d}, {L2d, A12, L1}, {A12, L2d, L1}, {L1, L2d, A12}, {L2d, L1, A12}};
    return run(EnumerationTarget::Shortcut, cfg, 2, std::move(seg), {Generator::dot(1, true), Generator::dot(2, false)},
               1.0, "d1" + kDagger + " d2", reference, reference.size());
}

Enumeration enumerate_code_loop(const IslandChargeConfig& cfg, const StabilizerAmplitudes& amps) {
    std::vector<SegmentOperator> seg{link(1, 2, -0.5 * amps.t12), link(3, 4, -0.5 * amps.t34),
                                     link(5, 6, -0.5 * amps.t56), link(7, 8, -0.5 * amps.t78)};
    return run(EnumerationTarget::CodeLoop, cfg, 4, std::move(seg), loop_word(), 1.0, "Z", canonical_permutations(4), 0);
}

Complex code_coefficient_from(const Enumeration& code_loop) {
    if (code_loop.target != EnumerationTarget::CodeLoop) {
        throw std::invalid_argument("code_coefficient_from: not a code-loop enumeration");
    }
    return -2.0 * code_loop.amplitude();
}

Enumeration enumerate_stabilizer_loop(const IslandChargeConfig& cfg, const StabilizerAmplitudes& amps) {
    std::vector<SegmentOperator> seg{lead_in_1(amps.lambda1), link(8, 7, -0.5 * std::conj(amps.t78)),
                                     link(6, 5, -0.5 * std::conj(amps.t56)), link(4, 3, -0.5 * std::conj(amps.t34)),
                                     lead_out_2(amps.lambda2)};
    Word target = loop_word();
    target.push_back(Generator::dot(1, true));
    target.push_back(Generator::dot(2, false));
    return run(EnumerationTarget::StabilizerLoop, cfg, 4, std::move(seg), std::move(target), 1.0,
               "Z d1" + kDagger + " d2", canonical_permutations(5), 24);
}

Rational shortcut_eta_form(const IslandChargeConfig& cfg) {
    cfg.validate(2);
    const Rational ec(cfg.charging_energy);
    const Rational dn1(cfg.offsets[0]), dn2(cfg.offsets[1]);
    const Rational eta = dn1 * dn2 / ((1 - 4 * dn1 * dn1) * (1 - 4 * dn2 * dn2));
    return 4 * eta / (ec * ec);
}

std::map<Rational, int> value_partition(const Enumeration& e) {
    std::map<Rational, int> out;
    for (const auto& seq : e.sequences) ++out[seq.value];
    return out;
}

ClosedFormCheck check_closed_form(const Enumeration& e) {
    const IslandChargeConfig& cfg = e.config;
    const Rational ec(cfg.charging_energy);
    auto dn = [&](std::size_t j) { return Rational(cfg.offsets.at(j)); };
    auto suppression = [&](std::size_t j) { return Rational(1) - 4 * dn(j) * dn(j); };

    ClosedFormCheck c;
    switch (e.target) {
        case EnumerationTarget::Qubit:
            c.available = true;
            c.expected = 2 / (ec * suppression(0));
            c.description = "1/E+ + 1/E- = 2/(E_C (1 - 4 dn^2))";
            break;
        case EnumerationTarget::Shortcut: {
            c.available = true;
            auto e = [&](int island, int sign) { return cfg.energy_exact({island, sign}); };
            c.expected = (e(1, 1) - e(1, -1)) * (e(2, 1) - e(2, -1)) / (e(1, 1) * e(1, -1) * e(2, 1) * e(2, -1));
            c.description = "(E1+ - E1-)(E2+ - E2-)/(E1+ E1- E2+ E2-)";
            break;
        }
        case EnumerationTarget::CodeLoop: {
            const bool zero = std::all_of(cfg.offsets.begin(), cfg.offsets.end(), [](double x) { return x == 0.0; });
            if (!zero) {
                c.description = "closed form only at zero offset";
                return c;
            }
            c.available = true;
            c.expected = Rational(5) / (2 * ec * ec * ec);
            const std::map<Rational, int> expected_partition{{Rational(1) / (8 * ec * ec * ec), 16},
                                                             {Rational(1) / (16 * ec * ec * ec), 8}};
            c.description = "5/(2 E_C^3) with rows {16 x 1/(8 E_C^3), 8 x 1/(16 E_C^3)}";
            c.pass = e.sum == c.expected && value_partition(e) == expected_partition;
            return c;
        }
        case EnumerationTarget::StabilizerLoop: {
            c.available = true;
            Rational v = 16 / (ec * ec * ec * ec);
            for (std::size_t j = 0; j < 4; ++j) v /= suppression(j);
            c.expected = v;
            c.description = "(16/E_C^4) prod_j 1/(1 - 4 dn_j^2)";
            break;
        }
    }
    c.pass = e.sum == c.expected;
    return c;
}

namespace {

std::string factor_string(const ExcitationFactor& f) {
    std::string s;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) s += "+";
        s += "E" + std::to_string(f[i].island) + (f[i].sign > 0 ? "+" : "-");
    }
    return f.size() == 1 ? s : "(" + s + ")";
}

class DenominatorParser {
public:
    explicit DenominatorParser(const std::string& text) : s_(text) {}

    ParsedDenominator parse() {
        ParsedDenominator d;
        d.sign = 1;
        if (peek() == '-') {
            d.sign = -1;
            ++i_;
        }
        expect("1/(");
        std::vector<ExcitationFactor> latest_first;
        latest_first.push_back(factor());
        while (peek() == '*') {
            ++i_;
            latest_first.push_back(factor());
        }
        expect(")");
        if (i_ != s_.size()) fail("trailing characters");
        d.factors.assign(latest_first.rbegin(), latest_first.rend());
        return d;
    }

private:
    char peek() const { return i_ < s_.size() ? s_[i_] : '\0'; }

    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("parse_symbolic_denominator: " + why + " at offset " + std::to_string(i_) +
                                    " in '" + s_ + "'");
    }

    void expect(const std::string& token) {
        if (s_.compare(i_, token.size(), token) != 0) fail("expected '" + token + "'");
        i_ += token.size();
    }

    ChargeTerm term() {
        expect("E");
        int island = 0;
        if (!std::isdigit(static_cast<unsigned char>(peek()))) fail("expected island number");
        while (std::isdigit(static_cast<unsigned char>(peek()))) island = island * 10 + (s_[i_++] - '0');
        const char c = peek();
        if (c != '+' && c != '-') fail("expected + or -");
        ++i_;
        return {island, c == '+' ? 1 : -1};
    }

    ExcitationFactor factor() {
        ExcitationFactor f;
        if (peek() != '(') {
            f.push_back(term());
            return f;
        }
        ++i_;
        f.push_back(term());
        while (peek() == '+') {
            ++i_;
            f.push_back(term());
        }
        expect(")");
        return f;
    }

    const std::string& s_;
    std::size_t i_ = 0;
};

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    return out;
}

}  // namespace

std::string symbolic_denominator(const TransferSequence& seq) {
    std::string s = seq.sign < 0 ? "-1/(" : "1/(";
    for (std::size_t k = seq.factors.size(); k-- > 0;) {
        s += factor_string(seq.factors[k]);
        if (k) s += "*";
    }
    return s + ")";
}

ParsedDenominator parse_symbolic_denominator(const std::string& text) { return DenominatorParser(text).parse(); }

double evaluate_denominator(const ParsedDenominator& d, const IslandChargeConfig& cfg) {
    double v = d.sign;
    for (const auto& f : d.factors) {
        double e = 0;
        for (const auto& t : f) e += cfg.energy(t);
        v /= e;
    }
    return v;
}

void emit_sequence_table(std::ostream& os, const Enumeration& e) {
    os << "# target," << to_string(e.target) << "\n";
    os << "# canonical_operator," << e.canonical_name << "\n";
    os << "# charging_energy," << format_real(e.config.charging_energy) << "\n";
    os << "# offsets";
    for (double dn : e.config.offsets) os << "," << format_real(dn);
    os << "\n";
    os << "# global_sign," << e.global_sign << "\n";
    os << "# signs,relative to row 1; the product of all rows' amplitudes carries global_sign\n";
    if (e.reference_rows >= e.sequences.size()) {
        os << "# row_order,reference order\n";
    } else if (e.reference_rows > 0) {
        os << "# row_order,rows 1-" << e.reference_rows << " reference order; rows " << e.reference_rows + 1 << "-"
           << e.sequences.size() << " recursive canonical order (convention)\n";
    } else {
        os << "# row_order,recursive canonical order (convention)\n";
    }
    os << "index,sequence,denominator_symbolic,denominator_value\n";
    for (std::size_t i = 0; i < e.sequences.size(); ++i) {
        const auto& seq = e.sequences[i];
        os << i + 1 << "," << seq.name << "," << symbolic_denominator(seq) << ","
           << format_real(seq.value.convert_to<double>()) << "\n";
    }
    os << "# sum," << format_real(e.sum_value()) << "\n";
}

std::vector<ParsedRow> parse_sequence_table(std::istream& is) {
    std::vector<ParsedRow> rows;
    std::string line;
    bool header = false;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != "index,sequence,denominator_symbolic,denominator_value") {
                throw std::invalid_argument("parse_sequence_table: unexpected header '" + line + "'");
            }
            header = true;
            continue;
        }
        const auto cells = split_csv(line);
        if (cells.size() != 4) throw std::invalid_argument("parse_sequence_table: malformed row '" + line + "'");
        rows.push_back({std::stoul(cells[0]), cells[1], parse_symbolic_denominator(cells[2]), std::stod(cells[3])});
    }
    if (!header) throw std::invalid_argument("parse_sequence_table: missing header");
    return rows;
}

}  // namespace dqi
