// Explicit fermionic matrices for Majorana and dot words, an oracle for
// operator reordering signs.
#pragma once

#include "dqi/perturbation.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <vector>

namespace dqi::testing {

// Jordan-Wigner matrices on six modes: four for the Majorana pairs, then d1, d2.
class FockOracle {
public:
    FockOracle() {
        ComplexMatrix a = ComplexMatrix::Zero(2, 2);
        a(0, 1) = 1.0;
        ComplexMatrix sz = ComplexMatrix::Identity(2, 2);
        sz(1, 1) = -1.0;
        for (int mode = 0; mode < kModes; ++mode) {
            ComplexMatrix m = ComplexMatrix::Identity(1, 1);
            for (int k = 0; k < kModes; ++k) {
                const ComplexMatrix& f = k < mode ? sz : (k == mode ? a : ComplexMatrix::Identity(2, 2));
                m = ComplexMatrix(Eigen::kroneckerProduct(m, f));
            }
            annihilators_.push_back(m);
        }
    }

    ComplexMatrix of(const Generator& gen) const {
        if (gen.kind == Generator::Kind::Dot) {
            const ComplexMatrix& d = annihilators_[std::size_t(3 + gen.index)];
            return gen.dagger ? ComplexMatrix(d.adjoint()) : d;
        }
        const ComplexMatrix& c = annihilators_[std::size_t((gen.index - 1) / 2)];
        if (gen.index % 2 == 1) return c + c.adjoint();
        return Complex(0, 1) * (c.adjoint() - c);
    }

    ComplexMatrix of(const Word& w) const {
        ComplexMatrix m = ComplexMatrix::Identity(kDim, kDim);
        for (const auto& gen : w) m = m * of(gen);
        return m;
    }

private:
    static constexpr int kModes = 6;
    static constexpr int kDim = 64;
    std::vector<ComplexMatrix> annihilators_;
};

inline const FockOracle& fock() {
    static const FockOracle oracle;
    return oracle;
}

}  // namespace dqi::testing
