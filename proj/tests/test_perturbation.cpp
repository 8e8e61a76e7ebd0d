#include "dqi/perturbation.hpp"
#include "support/charge_oracle.hpp"
#include "support/fock_oracle.hpp"
#include "support/reference_tables.hpp"

#include <doctest.h>

#include <algorithm>
#include <random>
#include <regex>
#include <set>
#include <sstream>

using namespace dqi;

namespace {

// "-1/((E1-+E2+)*E2+)" -> sign and factors (latest first) with sorted terms.
std::pair<int, std::vector<std::vector<std::string>>> normalise(const std::string& text) {
    int sign = text.rfind("-", 0) == 0 ? -1 : 1;
    std::string body = text.substr(text.find("1/(") + 3);
    body.pop_back();
    std::vector<std::vector<std::string>> factors;
    int depth = 0;
    std::string current;
    auto flush = [&] {
        static const std::regex term(R"(E\d[+-])");
        std::vector<std::string> terms;
        for (auto it = std::sregex_iterator(current.begin(), current.end(), term); it != std::sregex_iterator(); ++it)
            terms.push_back(it->str());
        std::sort(terms.begin(), terms.end());
        factors.push_back(terms);
        current.clear();
    };
    for (char c : body) {
        if (c == '(') ++depth;
        if (c == ')') --depth;
        if (c == '*' && depth == 0) {
            flush();
        } else {
            current += c;
        }
    }
    flush();
    return {sign, factors};
}

testing::ChargeState charges_of(const ExcitationFactor& f) {
    testing::ChargeState s;
    for (const auto& t : f) s.insert({t.island, t.sign});
    return s;
}

IslandChargeConfig config(std::vector<double> offsets, double ec = 1.0) { return {ec, std::move(offsets)}; }

std::vector<Enumeration> all_targets(const std::vector<double>& offsets) {
    return {enumerate_qubit_2nd_order(1.0, 1.0, 1.0, offsets[0]),
            enumerate_shortcut(config({offsets[0], offsets[1]})), enumerate_code_loop(config(offsets)),
            enumerate_stabilizer_loop(config(offsets))};
}

}  // namespace

TEST_CASE("islands and generator names") {
    CHECK(island_of(8) == 1);
    CHECK(island_of(1) == 1);
    CHECK(island_of(3) == 2);
    CHECK(island_of(4) == 3);
    CHECK(island_of(7) == 4);
    CHECK_THROWS_AS(island_of(0), std::out_of_range);
    CHECK_THROWS_AS(island_of(9), std::out_of_range);
    CHECK(Generator::majorana(3).name() == "g3");
    CHECK(Generator::dot(2, true).name() == "d2+");
    CHECK(Generator::dot(1, false).name() == "d1");
}

TEST_CASE("reorder signs") {
    const auto g = Generator::majorana;
    CHECK(reorder_sign({g(1), g(2)}, {g(1), g(2)}) == 1);
    CHECK(reorder_sign({g(2), g(1)}, {g(1), g(2)}) == -1);
    CHECK(reorder_sign({g(1), g(3), g(1), g(2)}, {g(3), g(2)}) == -1);
    CHECK(reorder_sign({g(1), g(1)}, {}) == 1);
    CHECK(reorder_sign({g(3), g(2), g(1)}, {g(1), g(2), g(3)}) == -1);
    CHECK(reorder_sign({Generator::dot(1, true), g(1), g(2)}, {g(1), g(2), Generator::dot(1, true)}) == 1);
    CHECK_THROWS_AS(reorder_sign({g(1), g(2)}, {g(1), g(3)}), std::logic_error);
    CHECK_THROWS_AS(reorder_sign({g(1)}, {}), std::logic_error);

    // against explicit matrices
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(1, 8);
    for (int trial = 0; trial < 50; ++trial) {
        Word w;
        for (int k = 0; k < 6; ++k) w.push_back(g(pick(rng)));
        std::set<int> odd;
        for (const auto& x : w) {
            if (!odd.erase(x.index)) odd.insert(x.index);
        }
        Word target;
        for (int i : odd) target.push_back(g(i));
        const int s = reorder_sign(w, target);
        CHECK(max_abs(ComplexMatrix(testing::fock().of(w) - double(s) * testing::fock().of(target))) < 1e-12);
    }
}

TEST_CASE("canonical permutation order") {
    const auto p3 = canonical_permutations(3);
    REQUIRE(p3.size() == 6);
    CHECK(p3[0] == std::vector<std::size_t>{0, 1, 2});
    CHECK(p3[1] == std::vector<std::size_t>{1, 0, 2});
    CHECK(p3[2] == std::vector<std::size_t>{0, 2, 1});
    CHECK(p3[5] == std::vector<std::size_t>{2, 1, 0});
    for (std::size_t n = 1; n <= 5; ++n) {
        auto p = canonical_permutations(n);
        std::set<std::vector<std::size_t>> unique(p.begin(), p.end());
        std::size_t fact = 1;
        for (std::size_t k = 2; k <= n; ++k) fact *= k;
        CHECK(p.size() == fact);
        CHECK(unique.size() == fact);
    }
}

TEST_CASE("sequence counts") {
    const auto e = all_targets({0.0, 0.0, 0.0, 0.0});
    CHECK(e[0].sequences.size() == 2);
    CHECK(e[1].sequences.size() == 6);
    CHECK(e[2].sequences.size() == 24);
    CHECK(e[3].sequences.size() == 120);
    for (const auto& x : e) {
        std::set<std::string> names;
        for (const auto& s : x.sequences) names.insert(s.name);
        CHECK(names.size() == x.sequences.size());
    }
}

TEST_CASE("three-operator shortcut table") {
    const auto e = enumerate_shortcut(config({0.1, -0.2}));
    REQUIRE(e.sequences.size() == testing::kTableOne.size());
    for (std::size_t i = 0; i < e.sequences.size(); ++i) {
        CAPTURE(i);
        CHECK(e.sequences[i].name == testing::kTableOne[i].sequence);
        CHECK(symbolic_denominator(e.sequences[i]) == testing::kTableOne[i].denominator);
    }
    CHECK(e.global_sign == 1);
}

TEST_CASE("five-operator loop table, first 24 rows") {
    const auto e = enumerate_stabilizer_loop(config({0.0, 0.0, 0.0, 0.0}));
    for (std::size_t i = 0; i < testing::kTableTwo.size(); ++i) {
        CAPTURE(i + 1);
        CHECK(e.sequences[i].name == testing::kTableTwo[i].sequence);
        CHECK(normalise(symbolic_denominator(e.sequences[i])) == normalise(testing::kTableTwo[i].denominator));
    }
    const auto& row6 = e.sequences[testing::kTableTwoMisprintedRow - 1];
    CHECK(normalise(symbolic_denominator(row6)) != normalise(testing::kTableTwoRowSixPrinted));
    CHECK(e.reference_rows == 24);
}

TEST_CASE("intermediate charges agree with an independent tracker") {
    for (const auto& e : all_targets({0.1, -0.2, 0.3, 0.05})) {
        for (const auto& s : e.sequences) {
            CAPTURE(s.name);
            auto expected = testing::track_charges(s.name);
            REQUIRE(expected.size() == s.factors.size());
            for (std::size_t k = 0; k < expected.size(); ++k) CHECK(charges_of(s.factors[k]) == expected[k]);
        }
    }
}

TEST_CASE("every sequence reduces to the canonical operator") {
    for (const auto& e : all_targets({0.0, 0.0, 0.0, 0.0})) {
        const ComplexMatrix canonical = testing::fock().of(e.canonical_word);
        for (const auto& s : e.sequences) {
            CAPTURE(s.name);
            Word w;
            for (std::size_t idx : s.order) w.insert(w.end(), e.segments[idx].word.begin(), e.segments[idx].word.end());
            const ComplexMatrix product = testing::fock().of(w);
            CHECK(max_abs(ComplexMatrix(product - double(s.operator_sign) * canonical)) < 1e-12);
            CHECK(s.propagator_sign == (s.factors.size() % 2 == 0 ? 1 : -1));
            CHECK(s.sign == s.operator_sign * s.propagator_sign * e.global_sign);
        }
    }
}

TEST_CASE("zero-offset sums") {
    const auto e = all_targets({0.0, 0.0, 0.0, 0.0});
    CHECK(e[0].sum == 2);
    CHECK(e[1].sum == 0);
    CHECK(e[2].sum == Rational(5, 2));
    CHECK(e[3].sum == 16);
    const std::map<Rational, int> partition{{Rational(1, 8), 16}, {Rational(1, 16), 8}};
    CHECK(value_partition(e[2]) == partition);
    for (const auto& x : e) CHECK(check_closed_form(x).pass);

    const double ec = 2.5;
    const auto scaled = enumerate_code_loop(config({0, 0, 0, 0}, ec));
    CHECK(scaled.sum_value() == doctest::Approx(5.0 / (2 * ec * ec * ec)).epsilon(1e-15));
    CHECK(check_closed_form(scaled).pass);
    CHECK(enumerate_stabilizer_loop(config({0, 0, 0, 0}, ec)).sum_value() ==
          doctest::Approx(16.0 / std::pow(ec, 4)).epsilon(1e-15));
}

TEST_CASE("stabilizer loop sum at general offsets") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    for (int i = 0; i < 20; ++i) {
        const std::vector<double> dn{u(rng), u(rng), u(rng), u(rng)};
        const auto e = enumerate_stabilizer_loop(config(dn, 1.7));
        const Rational ec(1.7);
        Rational expected = Rational(16) / (ec * ec * ec * ec);
        for (double x : dn) expected /= 1 - 4 * Rational(x) * Rational(x);
        CHECK(e.sum == expected);
        CHECK(check_closed_form(e).pass);
        CHECK_FALSE(check_closed_form(enumerate_code_loop(config(dn))).available);
    }
}

TEST_CASE("shortcut sum at general offsets") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> u(-0.45, 0.45);
    for (int i = 0; i < 20; ++i) {
        const double a = u(rng), b = u(rng);
        const auto e = enumerate_shortcut(config({a, b}));
        const Rational ra(a), rb(b);
        const Rational factored = (1 / (1 - 2 * ra) - 1 / (1 + 2 * ra)) * (1 / (1 - 2 * rb) - 1 / (1 + 2 * rb));
        CHECK(e.sum == factored);
        CHECK(check_closed_form(e).pass);
        // the simplified eta form is a factor 4 smaller than the row sum
        CHECK(e.sum == 4 * shortcut_eta_form(e.config));
    }
    CHECK(enumerate_shortcut(config({0.0, 0.3})).sum == 0);
    CHECK(enumerate_shortcut(config({0.2, 0.0})).sum == 0);
    CHECK(shortcut_eta_form(config({0.0, 0.3})) == 0);
}

TEST_CASE("qubit co-tunnelling amplitude") {
    const Complex l1(0.1, 0.0), l2(0.06, 0.08);
    const auto e = enumerate_qubit_2nd_order(l1, l2, 1.0);
    CHECK(e.sequences[0].value == e.sequences[1].value);
    CHECK(e.global_sign == -1);
    const Complex expected = 2.0 * l1 * std::conj(l2) / 1.0;
    CHECK(std::abs(e.amplitude() - expected) < 1e-15);

    const auto fig = enumerate_qubit_2nd_order(0.1, 0.1, 1.0);
    CHECK(fig.amplitude().real() == doctest::Approx(0.02).epsilon(1e-14));
    CHECK(std::abs(enumerate_qubit_2nd_order(0.0, 0.1, 1.0).amplitude()) == 0.0);

    const auto offset = enumerate_qubit_2nd_order(1.0, 1.0, 1.0, 0.25);
    CHECK(offset.sum == Rational(1) / Rational(1, 2) + Rational(1) / Rational(3, 2));
    CHECK(check_closed_form(offset).pass);
}

TEST_CASE("code coefficient") {
    const auto e = enumerate_code_loop(config({0, 0, 0, 0}, 1.0));
    CHECK(std::abs(code_coefficient_from(e) - Complex(5.0 / 16.0)) < 1e-15);

    StabilizerAmplitudes amps;
    amps.t12 = 0.9;
    amps.t34 = Complex(0.5, 0.5);
    amps.t56 = 1.2;
    amps.t78 = Complex(0.0, -0.7);
    const auto scaled = enumerate_code_loop(config({0, 0, 0, 0}, 2.0), amps);
    StabilizerCouplingInput in;
    in.t12 = amps.t12;
    in.t34 = amps.t34;
    in.t56 = amps.t56;
    in.t78 = amps.t78;
    in.charging_energy = 2.0;
    CHECK(std::abs(code_coefficient_from(scaled) - code_coefficient(in)) < 1e-15);
    CHECK_THROWS_AS(code_coefficient_from(enumerate_shortcut(config({0, 0}))), std::invalid_argument);
}

TEST_CASE("enumerated amplitudes against the stabilizer coupling") {
    StabilizerCouplingInput in;
    in.lambda1 = Complex(0.1, 0.02);
    in.lambda2 = Complex(0.07, -0.03);
    in.t12 = Complex(0.8, 0.1);
    in.t34 = Complex(0.9, 0.0);
    in.t56 = Complex(0.6, 0.3);
    in.t78 = Complex(1.1, -0.2);
    in.charging_energy = 1.3;
    StabilizerAmplitudes amps{in.lambda1, in.lambda2, in.t12, in.t34, in.t56, in.t78};

    // shortcut alone: switch the loop off
    StabilizerCouplingInput shortcut_in = in;
    shortcut_in.offsets = {0.15, -0.1, 0.0, 0.0};
    shortcut_in.t34 = 0.0;
    const auto shortcut = enumerate_shortcut(config({0.15, -0.1}, in.charging_energy), amps);
    const Complex xi_term = stabilizer_effective_coupling(shortcut_in);
    CHECK(std::abs(shortcut.amplitude() - 4.0 * xi_term) < 1e-14 * std::abs(xi_term));

    // loop alone: zero offsets remove the shortcut
    const auto loop = enumerate_stabilizer_loop(config({0, 0, 0, 0}, in.charging_energy), amps);
    const Complex loop_term = stabilizer_effective_coupling(in);
    CHECK(std::abs(loop.amplitude() + loop_term) < 1e-14 * std::abs(loop_term));
}

TEST_CASE("offset validation") {
    CHECK_THROWS_AS(enumerate_shortcut(config({0.5, 0.0})), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_shortcut(config({0.0})), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_stabilizer_loop(config({0, 0, 0, 0}, 0.0)), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_qubit_2nd_order(1.0, 1.0, 1.0, -0.6), std::invalid_argument);
    CHECK(target_from_string("code") == EnumerationTarget::CodeLoop);
    CHECK(to_string(EnumerationTarget::StabilizerLoop) == "stabilizer");
    CHECK_THROWS_AS(target_from_string("loop"), std::invalid_argument);
}

TEST_CASE("symbolic denominators parse and evaluate") {
    const auto cfg = config({0.1, -0.2, 0.3, 0.05}, 1.5);
    const auto e = enumerate_stabilizer_loop(cfg);
    for (const auto& s : e.sequences) {
        const auto parsed = parse_symbolic_denominator(symbolic_denominator(s));
        CHECK(parsed.sign == s.sign);
        CHECK(parsed.factors == s.factors);
        CHECK(evaluate_denominator(parsed, cfg) == doctest::Approx(s.value.convert_to<double>()).epsilon(1e-14));
    }
    CHECK_THROWS_AS(parse_symbolic_denominator("1/(E1+*)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_symbolic_denominator("1/(E1*E2+)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_symbolic_denominator("2/(E1+)"), std::invalid_argument);
    CHECK_THROWS_AS(parse_symbolic_denominator("1/(E1+)x"), std::invalid_argument);
}

TEST_CASE("sequence table round trip") {
    for (const auto& e : all_targets({0.1, -0.2, 0.3, 0.05})) {
        std::stringstream ss;
        emit_sequence_table(ss, e);
        const std::string text = ss.str();
        CHECK(text.find("# global_sign," + std::to_string(e.global_sign)) != std::string::npos);
        const auto rows = parse_sequence_table(ss);
        REQUIRE(rows.size() == e.sequences.size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            CHECK(rows[i].index == i + 1);
            CHECK(rows[i].sequence == e.sequences[i].name);
            CHECK(rows[i].denominator.factors == e.sequences[i].factors);
            CHECK(rows[i].value == e.sequences[i].value.convert_to<double>());
        }
    }
    std::stringstream bad("index,sequence,value\n");
    CHECK_THROWS_AS(parse_sequence_table(bad), std::invalid_argument);
    std::stringstream empty("# only metadata\n");
    CHECK_THROWS_AS(parse_sequence_table(empty), std::invalid_argument);
}
