#include "dqi/model.hpp"

#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace dqi {

namespace {

ComplexMatrix lowering() {
    ComplexMatrix a = ComplexMatrix::Zero(2, 2);
    a(0, 1) = 1.0;
    return a;
}

ComplexMatrix parity_string() {
    ComplexMatrix s = ComplexMatrix::Zero(2, 2);
    s(0, 0) = 1.0;
    s(1, 1) = -1.0;
    return s;
}

ComplexMatrix id2() { return ComplexMatrix::Identity(2, 2); }

template <typename... Ms>
ComplexMatrix tensor(const ComplexMatrix& first, const Ms&... rest) {
    ComplexMatrix out = first;
    ((out = kron(out, rest)), ...);
    return out;
}

const char* dot_label(int index) {
    static constexpr const char* labels[] = {"00", "01", "10", "11"};
    return labels[index];
}

}  // namespace

Z z_from_int(int value) {
    if (value == 1) return Z::Plus;
    if (value == -1) return Z::Minus;
    throw std::invalid_argument("z must be +1 or -1, got " + std::to_string(value));
}

double ModelParams::validity_ratio() const {
    return std::max(std::abs(lambda1), std::abs(lambda2)) / charging_energy;
}

void ModelParams::validate() const {
    auto require = [](bool ok, const char* what) {
        if (!ok) throw std::invalid_argument(std::string("ModelParams: ") + what);
    };
    const double all[] = {gamma1, gamma2, lambda0, lambda1, lambda2, charging_energy,
                          eps1,   eps2,   phi,     dephasing, spread};
    for (double v : all) require(std::isfinite(v), "non-finite parameter");
    require(gamma1 > 0 && gamma2 > 0, "lead rates must be positive");
    require(charging_energy > 0, "charging energy must be positive");
    require(dephasing >= 0, "dephasing rate must be non-negative");
    require(spread >= 0, "level spread must be non-negative");
    require(z == Z::Plus || z == Z::Minus, "z must be +1 or -1");
    if (island_coupling) {
        require(std::isfinite(island_coupling->real()) && std::isfinite(island_coupling->imag()),
                "non-finite island coupling");
    }
}

std::vector<std::string> ModelParams::warnings() const {
    std::vector<std::string> out;
    const double ratio = validity_ratio();
    if (ratio > kValidityWarnRatio) {
        std::ostringstream os;
        os << "max(|lambda1|, |lambda2|) / E_C = " << ratio
           << " exceeds " << kValidityWarnRatio << "; the effective coupling is unreliable";
        out.push_back(os.str());
    }
    return out;
}

ModelParams ModelParams::reference() { return ModelParams{}; }

EffectiveCoupling effective_coupling(const ModelParams& p) {
    p.validate();
    EffectiveCoupling c;
    c.lambda_tilde = 2.0 * p.lambda1 * std::conj(Complex(p.lambda2)) / p.charging_energy;
    c.island_term = p.island_coupling ? *p.island_coupling : double(sign_of(p.z)) * c.lambda_tilde;
    c.omega = -p.lambda0 * std::polar(1.0, p.phi) + c.island_term;
    return c;
}

ComplexMatrix HamiltonianModel::occupation(int dot) const {
    const ComplexMatrix& d = dot == 1 ? d1 : d2;
    return d.adjoint() * d;
}

HamiltonianModel HamiltonianModel::restricted(std::span<const Eigen::Index> states) const {
    const auto n = static_cast<Eigen::Index>(states.size());
    HamiltonianModel out;
    out.kind = kind;
    out.validity_ratio = validity_ratio;
    out.warnings = warnings;
    out.hamiltonian.resize(n, n);
    out.d1.resize(n, n);
    out.d2.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto si = states[static_cast<std::size_t>(i)];
        if (si < 0 || si >= dim()) throw std::out_of_range("restricted: basis index out of range");
        out.basis_labels.push_back(basis_labels[static_cast<std::size_t>(si)]);
        out.n1.push_back(n1[static_cast<std::size_t>(si)]);
        out.n2.push_back(n2[static_cast<std::size_t>(si)]);
        out.island_charge.push_back(island_charge[static_cast<std::size_t>(si)]);
        for (Eigen::Index j = 0; j < n; ++j) {
            const auto sj = states[static_cast<std::size_t>(j)];
            out.hamiltonian(i, j) = hamiltonian(si, sj);
            out.d1(i, j) = d1(si, sj);
            out.d2(i, j) = d2(si, sj);
        }
    }
    return out;
}

HamiltonianModel build_effective_model(const ModelParams& p) {
    const EffectiveCoupling coupling = effective_coupling(p);

    HamiltonianModel m;
    m.kind = ModelKind::Effective4;
    m.d1 = tensor(lowering(), id2());
    m.d2 = tensor(parity_string(), lowering());
    const ComplexMatrix hop = coupling.omega * m.d2.adjoint() * m.d1;
    m.hamiltonian = hop + hop.adjoint();
    for (int k = 0; k < 4; ++k) {
        const int o1 = k >> 1, o2 = k & 1;
        m.hamiltonian(k, k) = p.eps1 * o1 + p.eps2 * o2;
        m.basis_labels.push_back(std::string("|") + dot_label(k) + ">");
        m.n1.push_back(o1);
        m.n2.push_back(o2);
        m.island_charge.push_back(0);
    }
    m.validity_ratio = p.validity_ratio();
    m.warnings = p.warnings();
    return m;
}

HamiltonianModel build_full_model(const ModelParams& p, Z sector) {
    p.validate();
    if (p.island_coupling) {
        throw std::invalid_argument(
            "build_full_model: the 12-state model describes a Majorana qubit; "
            "an island coupling override has no full-model counterpart");
    }

    // Fock space of (dot 1, dot 2, f_R).
    const ComplexMatrix d1f = tensor(lowering(), id2(), id2());
    const ComplexMatrix d2f = tensor(parity_string(), lowering(), id2());
    const ComplexMatrix fr = tensor(parity_string(), parity_string(), lowering());
    const ComplexMatrix g1 = fr + fr.adjoint();
    const ComplexMatrix g2 = Complex(0, 1) * (fr.adjoint() - fr);

    ComplexMatrix direct = -p.lambda0 * std::polar(1.0, p.phi) * d2f.adjoint() * d1f;
    direct += direct.adjoint().eval();
    // Moves one electron from the dots onto the island.
    const ComplexMatrix onto_island = p.lambda1 * d1f * g1 + Complex(0, p.lambda2) * d2f * g2;

    // Ground-state f_R occupation: z = i g2 g1 = 1 - 2 n_R.
    const int ground_nr = sector == Z::Plus ? 0 : 1;
    constexpr std::array<int, 3> charges{0, +1, -1};
    auto slot = [](int charge) { return charge == 0 ? 0 : (charge > 0 ? 1 : 2); };
    auto index = [&](int charge, int dots) { return Eigen::Index(slot(charge) * 4 + dots); };
    auto fock = [&](int charge, int dots) {
        const int nr = ground_nr ^ (charge != 0 ? 1 : 0);
        return Eigen::Index((dots << 1) | nr);
    };

    HamiltonianModel m;
    m.kind = ModelKind::Full12;
    m.hamiltonian = ComplexMatrix::Zero(12, 12);
    m.d1 = ComplexMatrix::Zero(12, 12);
    m.d2 = ComplexMatrix::Zero(12, 12);
    m.basis_labels.resize(12);
    m.n1.resize(12);
    m.n2.resize(12);
    m.island_charge.resize(12);

    static constexpr const char* island_labels[] = {"g", "e+", "e-"};
    for (int charge : charges) {
        for (int dots = 0; dots < 4; ++dots) {
            const auto i = index(charge, dots);
            const auto ui = static_cast<std::size_t>(i);
            m.basis_labels[ui] =
                std::string("|") + dot_label(dots) + "," + island_labels[slot(charge)] + ">";
            m.n1[ui] = dots >> 1;
            m.n2[ui] = dots & 1;
            m.island_charge[ui] = charge;
            m.hamiltonian(i, i) =
                p.eps1 * (dots >> 1) + p.eps2 * (dots & 1) + (charge != 0 ? p.charging_energy : 0.0);

            for (int target = 0; target < 4; ++target) {
                const auto j = index(charge, target);
                if (j != i) m.hamiltonian(j, i) += direct(fock(charge, target), fock(charge, dots));
                m.d1(j, i) = d1f(fock(charge, target), fock(charge, dots));
                m.d2(j, i) = d2f(fock(charge, target), fock(charge, dots));
                if (charge + 1 <= 1) {
                    const auto up = index(charge + 1, target);
                    const Complex amp = onto_island(fock(charge + 1, target), fock(charge, dots));
                    m.hamiltonian(up, i) += amp;
                    m.hamiltonian(i, up) += std::conj(amp);
                }
            }
        }
    }
    m.validity_ratio = p.validity_ratio();
    m.warnings = p.warnings();
    return m;
}

std::vector<Eigen::Index> reachable_states(const HamiltonianModel& model, Eigen::Index start) {
    const Eigen::Index n = model.dim();
    if (start < 0 || start >= n) throw std::out_of_range("reachable_states: start out of range");
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::queue<Eigen::Index> frontier;
    seen[static_cast<std::size_t>(start)] = true;
    frontier.push(start);
    auto linked = [&](Eigen::Index i, Eigen::Index j) {
        return model.hamiltonian(i, j) != Complex(0) || model.hamiltonian(j, i) != Complex(0) ||
               model.d1(i, j) != Complex(0) || model.d1(j, i) != Complex(0) ||
               model.d2(i, j) != Complex(0) || model.d2(j, i) != Complex(0);
    };
    while (!frontier.empty()) {
        const auto i = frontier.front();
        frontier.pop();
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!seen[static_cast<std::size_t>(j)] && linked(i, j)) {
                seen[static_cast<std::size_t>(j)] = true;
                frontier.push(j);
            }
        }
    }
    std::vector<Eigen::Index> out;
    for (Eigen::Index i = 0; i < n; ++i)
        if (seen[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

double charge_asymmetry(double dn1, double dn2) {
    return dn1 * dn2 / ((1.0 - 4.0 * dn1 * dn1) * (1.0 - 4.0 * dn2 * dn2));
}

Complex code_coefficient(const StabilizerCouplingInput& in) {
    const double ec = in.charging_energy;
    return 5.0 * in.t12 * in.t34 * in.t56 * in.t78 / (16.0 * ec * ec * ec);
}

Complex stabilizer_effective_coupling(const StabilizerCouplingInput& in) {
    if (!(in.charging_energy > 0)) throw std::invalid_argument("stabilizer coupling: E_C must be positive");
    if (in.t12 == Complex(0)) throw std::invalid_argument("stabilizer coupling: t12 = 0 leaves alpha undefined");
    for (double dn : in.offsets) {
        if (!(std::abs(dn) < 0.5)) throw std::invalid_argument("stabilizer coupling: |Delta n_g| must be < 1/2");
    }
    const double ec = in.charging_energy;
    const Complex alpha = -32.0 * in.lambda1 * std::conj(in.lambda2) / (5.0 * std::conj(in.t12) * ec);
    const double eta = charge_asymmetry(in.offsets[0], in.offsets[1]);
    const double xi = 5.0 * std::norm(in.t12) / (16.0 * ec) * eta;
    return alpha * (xi + std::conj(code_coefficient(in)) * double(sign_of(in.stabilizer)));
}

ModelParams with_stabilizer(ModelParams p, const StabilizerCouplingInput& in) {
    p.island_coupling = std::conj(stabilizer_effective_coupling(in));
    return p;
}

}  // namespace dqi
