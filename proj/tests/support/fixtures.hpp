#pragma once

#include "dqi/linalg.hpp"
#include "dqi/model.hpp"

#include <random>

namespace dqi::testing {

inline constexpr double kGamma = 0.01;

// Gamma = 0.01, E_C = 100 Gamma, lambda0 = Gamma, lambda1 = lambda2 = 10 Gamma.
inline ModelParams fig2(double phi = 0.0, Z z = Z::Plus) {
    ModelParams p;
    p.gamma1 = p.gamma2 = kGamma;
    p.charging_energy = 100 * kGamma;
    p.lambda0 = kGamma;
    p.lambda1 = p.lambda2 = 10 * kGamma;
    p.phi = phi;
    p.z = z;
    return p;
}

inline ComplexMatrix random_matrix(std::mt19937_64& rng, Eigen::Index n) {
    std::normal_distribution<double> g;
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Eigen::Index n) {
    const ComplexMatrix m = random_matrix(rng, n);
    return 0.5 * (m + m.adjoint());
}

inline ComplexMatrix random_density(std::mt19937_64& rng, Eigen::Index n) {
    const ComplexMatrix m = random_matrix(rng, n);
    ComplexMatrix rho = m * m.adjoint();
    return rho / rho.trace().real();
}

}  // namespace dqi::testing
