#include "dqi/redfield.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace dqi {

void LeadSpec::validate() const {
    if (!(rate > 0) || !std::isfinite(rate)) throw std::invalid_argument("LeadSpec: rate must be positive");
    if (!(temperature >= 0) || !std::isfinite(temperature)) {
        throw std::invalid_argument("LeadSpec: temperature must be non-negative");
    }
    if (!std::isfinite(chemical_potential)) throw std::invalid_argument("LeadSpec: non-finite chemical potential");
}

double LeadSpec::occupation(double energy) const {
    switch (mode) {
        case LeadMode::LargeBiasSource: return 1.0;
        case LeadMode::LargeBiasDrain: return 0.0;
        case LeadMode::GeneralFermi: break;
    }
    const double x = energy - chemical_potential;
    if (temperature == 0.0) return x < 0 ? 1.0 : (x > 0 ? 0.0 : 0.5);
    const double u = x / temperature;
    // 1 / (1 + e^u), evaluated without overflow on either side.
    return u > 0 ? std::exp(-u) / (1.0 + std::exp(-u)) : 1.0 / (1.0 + std::exp(u));
}

LeadPair large_bias_leads(const ModelParams& p) {
    return {LeadSpec::source(p.gamma1), LeadSpec::drain(p.gamma2)};
}

LeadPair gap_window_leads(const ModelParams& p) {
    const double half = 0.5 * p.charging_energy;
    return {LeadSpec::fermi(p.gamma1, +half, 0.0), LeadSpec::fermi(p.gamma2, -half, 0.0)};
}

namespace {

LeadDissipator lead_dissipator(const ComplexMatrix& d, const LeadSpec& lead,
                               const EigenSystem<double>* eig) {
    LeadDissipator out;
    if (lead.mode != LeadMode::GeneralFermi) {
        const double f = lead.occupation(0.0);
        out.plus = lead.rate * f * d;
        out.minus = lead.rate * (1.0 - f) * d;
        return out;
    }
    const ComplexMatrix& v = eig->vectors;
    const ComplexMatrix de = v.adjoint() * d * v;
    const Eigen::Index n = d.rows();
    ComplexMatrix plus(n, n), minus(n, n);
    for (Eigen::Index m = 0; m < n; ++m) {
        for (Eigen::Index k = 0; k < n; ++k) {
            // (D)_{km} uses omega_{mk} = E_m - E_k
            const double f = lead.occupation(eig->values(m) - eig->values(k));
            plus(k, m) = lead.rate * f * de(k, m);
            minus(k, m) = lead.rate * (1.0 - f) * de(k, m);
        }
    }
    out.plus = v * plus * v.adjoint();
    out.minus = v * minus * v.adjoint();
    return out;
}

ComplexMatrix lead_superoperator(const ComplexMatrix& d, const LeadDissipator& dis) {
    const Eigen::Index n = d.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix dd = d.adjoint();
    const ComplexMatrix& dp = dis.plus;
    const ComplexMatrix& dm = dis.minus;
    const ComplexMatrix dp_adj = dp.adjoint();
    const ComplexMatrix dm_adj = dm.adjoint();

    // [d^dag, D^- X - X D^+] and its adjoint counterpart, term by term.
    ComplexMatrix s = sandwich(ComplexMatrix(dd * dm), id);
    s -= sandwich(dd, dp);
    s -= sandwich(dm, dd);
    s += sandwich(id, ComplexMatrix(dp * dd));
    s += sandwich(id, ComplexMatrix(dm_adj * d));
    s -= sandwich(dp_adj, d);
    s -= sandwich(d, dm_adj);
    s += sandwich(ComplexMatrix(d * dp_adj), id);
    return -0.5 * s;
}

}  // namespace

Dissipators build_dissipator_operators(const HamiltonianModel& model, const LeadPair& leads) {
    leads.lead1.validate();
    leads.lead2.validate();
    std::optional<EigenSystem<double>> eig;
    if (leads.lead1.mode == LeadMode::GeneralFermi || leads.lead2.mode == LeadMode::GeneralFermi) {
        eig = hermitian_eigendecompose<double>(model.hamiltonian);
    }
    const EigenSystem<double>* e = eig ? &*eig : nullptr;
    return {lead_dissipator(model.d1, leads.lead1, e), lead_dissipator(model.d2, leads.lead2, e)};
}

ComplexMatrix Liouvillian::apply(const ComplexMatrix& rho) const {
    return devectorize(ComplexVector(total * vectorize(rho)));
}

Liouvillian build_liouvillian(const HamiltonianModel& model, const Dissipators& dissipators,
                              double dephasing_rate, const ComplexMatrix& dephasing_operator) {
    if (!(dephasing_rate >= 0)) throw std::invalid_argument("build_liouvillian: dephasing rate must be >= 0");
    const Eigen::Index n = model.dim();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix& h = model.hamiltonian;

    Liouvillian l;
    l.dim = n;
    l.coherent = Complex(0, -1) * (sandwich(h, id) - sandwich(id, h));
    l.lead1 = lead_superoperator(model.d1, dissipators.lead1);
    l.lead2 = lead_superoperator(model.d2, dissipators.lead2);

    const ComplexMatrix& s = dephasing_operator;
    const ComplexMatrix sds = s.adjoint() * s;
    l.dephasing = dephasing_rate *
                  (sandwich(s, ComplexMatrix(s.adjoint())) - 0.5 * sandwich(sds, id) - 0.5 * sandwich(id, sds));
    l.total = l.coherent + l.lead1 + l.lead2 + l.dephasing;
    return l;
}

Liouvillian build_liouvillian(const HamiltonianModel& model, const LeadPair& leads, double dephasing_rate) {
    return build_liouvillian(model, build_dissipator_operators(model, leads), dephasing_rate,
                             model.occupation(1));
}

DensityMatrix::DensityMatrix(ComplexMatrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() == 0) {
        throw std::invalid_argument("DensityMatrix: must be a non-empty square matrix");
    }
    if (!rho_.allFinite()) throw std::invalid_argument("DensityMatrix: non-finite entries");
    const double asym = max_asymmetry(rho_);
    if (asym > tol::density_hermiticity) {
        std::ostringstream os;
        os << "DensityMatrix: not Hermitian (max|rho - rho^dag| = " << asym << ")";
        throw std::invalid_argument(os.str());
    }
    const double trace = rho_.trace().real();
    if (std::abs(trace - 1.0) > tol::density_trace) {
        std::ostringstream os;
        os << "DensityMatrix: trace " << trace << " differs from 1";
        throw std::invalid_argument(os.str());
    }
    rho_ = (0.5 * (rho_ + rho_.adjoint())).eval();
    min_eigenvalue_ = hermitian_eigendecompose<double>(rho_).values.minCoeff();
}

DensityMatrix DensityMatrix::pure(Eigen::Index dim, Eigen::Index state) {
    ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
    rho(state, state) = 1.0;
    return DensityMatrix(std::move(rho));
}

SteadyState steady_state(const Liouvillian& liouvillian) {
    const Eigen::Index n = liouvillian.dim;
    const Eigen::Index nn = n * n;
    ComplexMatrix a = liouvillian.total;
    a.row(0).setZero();
    for (Eigen::Index i = 0; i < n; ++i) a(0, i * n + i) = 1.0;
    ComplexVector b = ComplexVector::Zero(nn);
    b(0) = 1.0;

    ComplexVector x;
    try {
        x = solve_linear<double>(a, b);
    } catch (const SingularSystemError& e) {
        std::ostringstream os;
        os << "steady_state: non-unique stationary state (null space of L has dimension "
           << (nn - e.rank() + 1) << "); the state space is disconnected";
        throw std::runtime_error(os.str());
    }

    ComplexMatrix rho = devectorize(x);
    rho = (0.5 * (rho + rho.adjoint())).eval();
    rho /= rho.trace().real();

    const double residual = (liouvillian.total * vectorize(rho)).cwiseAbs().maxCoeff();
    const double bound = tol::relative * max_abs(liouvillian.total);
    if (residual > bound) {
        std::ostringstream os;
        os << "steady_state: residual " << residual << " exceeds " << bound;
        throw std::runtime_error(os.str());
    }

    SteadyState out{DensityMatrix(std::move(rho)), residual, {}};
    if (!out.state.positive()) {
        std::ostringstream os;
        os << "steady_state: negative eigenvalue " << out.state.min_eigenvalue() << " below -"
           << tol::positivity;
        out.warnings.push_back(os.str());
    }
    return out;
}

namespace {

struct StepPlan {
    long long steps;
    double h;
};

StepPlan plan_steps(const Liouvillian& l, double t_final, double dt) {
    if (!(t_final >= 0) || !(dt > 0)) throw std::invalid_argument("evolve: need t_final >= 0 and dt > 0");
    const double scale = max_abs(l.total);
    if (dt * scale > tol::stability_step) {
        std::ostringstream os;
        os << "evolve: dt * max|L| = " << dt * scale << " exceeds " << tol::stability_step
           << "; use dt <= " << tol::stability_step / scale;
        throw std::invalid_argument(os.str());
    }
    const auto steps = static_cast<long long>(std::ceil(t_final / dt - 1e-9));
    return {steps, steps > 0 ? t_final / double(steps) : 0.0};
}

ComplexVector rk4_step(const ComplexMatrix& l, const ComplexVector& y, double h) {
    const ComplexVector k1 = l * y;
    const ComplexVector k2 = l * (y + 0.5 * h * k1);
    const ComplexVector k3 = l * (y + 0.5 * h * k2);
    const ComplexVector k4 = l * (y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

Trajectory evolve(const Liouvillian& liouvillian, const ComplexMatrix& rho0, double t_final, double dt,
                  int record_stride) {
    if (rho0.rows() != liouvillian.dim || rho0.cols() != liouvillian.dim) {
        throw std::invalid_argument("evolve: initial state dimension mismatch");
    }
    if (record_stride < 1) throw std::invalid_argument("evolve: record_stride must be >= 1");
    const StepPlan plan = plan_steps(liouvillian, t_final, dt);

    Trajectory out;
    ComplexVector y = vectorize(rho0);
    out.times.push_back(0.0);
    out.states.push_back(rho0);
    for (long long k = 1; k <= plan.steps; ++k) {
        y = rk4_step(liouvillian.total, y, plan.h);
        if (k % record_stride == 0 || k == plan.steps) {
            out.times.push_back(double(k) * plan.h);
            out.states.push_back(devectorize(y));
        }
    }
    return out;
}

ComplexMatrix propagate(const Liouvillian& liouvillian, const ComplexMatrix& rho0, double t_final, double dt) {
    if (rho0.rows() != liouvillian.dim || rho0.cols() != liouvillian.dim) {
        throw std::invalid_argument("propagate: initial state dimension mismatch");
    }
    const StepPlan plan = plan_steps(liouvillian, t_final, dt);
    const ComplexMatrix& l = liouvillian.total;
    const Eigen::Index nn = l.rows();
    const double h = plan.h;

    // One RK4 step is the degree-4 Taylor polynomial of exp(hL).
    const ComplexMatrix id = ComplexMatrix::Identity(nn, nn);
    const ComplexMatrix hl = h * l;
    ComplexMatrix step = id + hl / 4.0;
    step = id + hl * step / 3.0;
    step = id + hl * step / 2.0;
    step = id + hl * step;

    ComplexVector y = vectorize(rho0);
    for (long long remaining = plan.steps; remaining > 0; remaining >>= 1) {
        if (remaining & 1) y = step * y;
        if (remaining > 1) step = (step * step).eval();
    }
    return devectorize(y);
}

double current(const HamiltonianModel& model, const Dissipators& dissipators, const ComplexMatrix& rho) {
    const ComplexMatrix dd = model.d2.adjoint();
    const ComplexMatrix op = dd * dissipators.lead2.minus - dissipators.lead2.plus * dd;
    return (op * rho).trace().real();
}

double current(const HamiltonianModel& model, const LeadPair& leads, const ComplexMatrix& rho) {
    return current(model, build_dissipator_operators(model, leads), rho);
}

TransportSolution solve_transport(const HamiltonianModel& model, const LeadPair& leads, double dephasing_rate) {
    const Dissipators dis = build_dissipator_operators(model, leads);
    const Liouvillian l = build_liouvillian(model, dis, dephasing_rate, model.occupation(1));
    SteadyState ss = steady_state(l);
    const double i = current(model, dis, ss.state.matrix());
    return {std::move(ss), i};
}

}  // namespace dqi
