// linalg.hpp: dense complex matrix layer: Hermitian Jacobi eigensolver,
// checked linear solves, and column-stacking vectorization.
//
// Everything is templated on the real scalar type; the `double` aliases at the
// bottom are what the rest of the library uses.

#pragma once

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dqi {

template <typename Real>
using ComplexMatrixT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVectorT = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealVectorT = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using ComplexMatrix = ComplexMatrixT<double>;
using ComplexVector = ComplexVectorT<double>;
using RealVector = RealVectorT<double>;
using Complex = std::complex<double>;

// All numerical tolerances of the library live here.
namespace tol {
inline constexpr double hermiticity = 1e-12;      // relative, for Hermitian-flagged input
inline constexpr double relative = 1e-10;         // reconstruction / residual contracts
inline constexpr double orthonormality = 1e-10;
inline constexpr double density_hermiticity = 1e-10;
inline constexpr double density_trace = 1e-10;
inline constexpr double positivity = 1e-8;        // smallest admissible eigenvalue of rho
inline constexpr double stability_step = 0.1;     // dt * max|L| bound for RK4
}  // namespace tol

template <typename Derived>
typename Derived::RealScalar max_abs(const Eigen::MatrixBase<Derived>& m) {
    return m.size() == 0 ? typename Derived::RealScalar(0) : m.cwiseAbs().maxCoeff();
}

template <typename Derived>
typename Derived::RealScalar max_asymmetry(const Eigen::MatrixBase<Derived>& m) {
    return max_abs(m - m.adjoint());
}

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
    return m.allFinite();
}

// max|A - A^dagger| <= rel_tol * max|A|
template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m, double rel_tol = tol::hermiticity) {
    if (m.rows() != m.cols()) return false;
    return max_asymmetry(m) <= rel_tol * max_abs(m);
}

template <typename Real>
struct EigenSystem {
    RealVectorT<Real> values;      // ascending
    ComplexMatrixT<Real> vectors;  // columns are eigenvectors

    ComplexMatrixT<Real> reconstruct() const {
        return vectors * values.template cast<std::complex<Real>>().asDiagonal() * vectors.adjoint();
    }
};

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of the pivot element and then applies
/// the real symmetric Jacobi rotation, so the accumulated transform stays
/// unitary. Throws std::invalid_argument for non-square, non-finite, or
/// non-Hermitian input (the message carries the measured asymmetry).
template <typename Real>
EigenSystem<Real> hermitian_eigendecompose(const ComplexMatrixT<Real>& input) {
    using Cx = std::complex<Real>;
    if (input.rows() != input.cols()) {
        throw std::invalid_argument("hermitian_eigendecompose: matrix must be square");
    }
    if (!input.allFinite()) {
        throw std::invalid_argument("hermitian_eigendecompose: non-finite entries");
    }
    const Real asym = max_asymmetry(input);
    const Real scale = max_abs(input);
    if (asym > Real(tol::hermiticity) * scale) {
        std::ostringstream os;
        os << "hermitian_eigendecompose: matrix is not Hermitian (max|A - A^dagger| = " << asym
           << ", max|A| = " << scale << ")";
        throw std::invalid_argument(os.str());
    }

    const Eigen::Index n = input.rows();
    ComplexMatrixT<Real> a = (input + input.adjoint()) / Real(2);
    ComplexMatrixT<Real> v = ComplexMatrixT<Real>::Identity(n, n);

    const Real eps = std::numeric_limits<Real>::epsilon();
    const Real norm = a.norm();
    constexpr int kMaxSweeps = 100;

    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        Real off = 0;
        for (Eigen::Index q = 0; q < n; ++q)
            for (Eigen::Index p = 0; p < q; ++p) off += std::norm(a(p, q));
        if (std::sqrt(off) <= eps * norm) break;

        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                const Cx apq = a(p, q);
                const Real mag = std::abs(apq);
                if (mag <= eps * eps * norm) continue;

                const Real app = std::real(a(p, p));
                const Real aqq = std::real(a(q, q));
                const Real theta = (aqq - app) / (Real(2) * mag);
                const Real t = (theta >= 0 ? Real(1) : Real(-1)) /
                               (std::abs(theta) + std::sqrt(Real(1) + theta * theta));
                const Real c = Real(1) / std::sqrt(Real(1) + t * t);
                const Real s = t * c;
                const Cx phase = std::conj(apq / mag);

                // U = diag(1, phase) * [[c, s], [-s, c]] on the (p, q) plane.
                const Cx u_pp = c, u_pq = s, u_qp = -s * phase, u_qq = c * phase;

                for (Eigen::Index k = 0; k < n; ++k) {
                    const Cx akp = a(k, p), akq = a(k, q);
                    a(k, p) = akp * u_pp + akq * u_qp;
                    a(k, q) = akp * u_pq + akq * u_qq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Cx apk = a(p, k), aqk = a(q, k);
                    a(p, k) = std::conj(u_pp) * apk + std::conj(u_qp) * aqk;
                    a(q, k) = std::conj(u_pq) * apk + std::conj(u_qq) * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const Cx vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = vkp * u_pp + vkq * u_qp;
                    v(k, q) = vkp * u_pq + vkq * u_qq;
                }
                a(p, q) = a(q, p) = Cx(0);
                a(p, p) = Cx(std::real(a(p, p)));
                a(q, q) = Cx(std::real(a(q, q)));
            }
        }
    }

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
        return std::real(a(i, i)) < std::real(a(j, j));
    });

    EigenSystem<Real> out;
    out.values.resize(n);
    out.vectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto src = order[static_cast<std::size_t>(k)];
        out.values(k) = std::real(a(src, src));
        out.vectors.col(k) = v.col(src);
    }
    return out;
}

enum class SolveMode { Exact, LeastSquares };

class SingularSystemError : public std::runtime_error {
public:
    SingularSystemError(Eigen::Index rank, Eigen::Index dim)
        : std::runtime_error("solve_linear: numerically singular system (estimated rank " +
                             std::to_string(rank) + " of " + std::to_string(dim) + ")"),
          rank_(rank),
          dim_(dim) {}
    Eigen::Index rank() const noexcept { return rank_; }
    Eigen::Index dim() const noexcept { return dim_; }

private:
    Eigen::Index rank_;
    Eigen::Index dim_;
};

template <typename Real>
Real linear_residual_bound(const ComplexMatrixT<Real>& a, const ComplexVectorT<Real>& x,
                           const ComplexVectorT<Real>& b) {
    return Real(tol::relative) *
           (a.cwiseAbs().rowwise().sum().maxCoeff() * x.cwiseAbs().maxCoeff() +
            b.cwiseAbs().maxCoeff());
}

/// Solve A x = b with full-pivot LU.
///
/// Rank deficiency throws SingularSystemError (carrying the estimated rank)
/// unless LeastSquares is requested, in which case the minimum-norm solution
/// is returned. Exact solves are checked against the residual contract
/// max|Ax - b| <= 1e-10 (||A|| ||x|| + ||b||).
template <typename Real>
ComplexVectorT<Real> solve_linear(const ComplexMatrixT<Real>& a, const ComplexVectorT<Real>& b,
                                  SolveMode mode = SolveMode::Exact) {
    if (a.rows() != a.cols()) throw std::invalid_argument("solve_linear: matrix must be square");
    if (b.size() != a.rows()) {
        throw std::invalid_argument("solve_linear: dimension mismatch (" + std::to_string(a.rows()) +
                                    " vs " + std::to_string(b.size()) + ")");
    }
    Eigen::FullPivLU<ComplexMatrixT<Real>> lu(a);
    if (lu.rank() < a.rows()) {
        if (mode == SolveMode::Exact) throw SingularSystemError(lu.rank(), a.rows());
        return a.completeOrthogonalDecomposition().solve(b);
    }
    ComplexVectorT<Real> x = lu.solve(b);
    const Real residual = (a * x - b).cwiseAbs().maxCoeff();
    if (residual > linear_residual_bound(a, x, b)) {
        std::ostringstream os;
        os << "solve_linear: residual " << residual << " exceeds contract (ill-conditioned system)";
        throw std::runtime_error(os.str());
    }
    return x;
}

/// Column-stacking vectorization: vec([[a, b], [c, d]]) = (a, c, b, d).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vectorize(
    const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor> dense = m;
    return Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(dense.data(), dense.size());
}

template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> devectorize(
    const Eigen::MatrixBase<Derived>& v) {
    using Scalar = typename Derived::Scalar;
    const auto len = v.size();
    const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(len))));
    if (n * n != len) {
        throw std::invalid_argument("devectorize: length " + std::to_string(len) +
                                    " is not a perfect square");
    }
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> dense = v;
    return Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>(dense.data(), n, n);
}

template <typename A, typename B>
auto kron(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
    using Scalar = typename A::Scalar;
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out = Eigen::kroneckerProduct(a.eval(), b.eval());
    return out;
}

// Superoperator of X -> A X B in the column-stacking convention: B^T (x) A.
template <typename A, typename B>
auto sandwich(const Eigen::MatrixBase<A>& left, const Eigen::MatrixBase<B>& right) {
    return kron(right.transpose(), left);
}

}  // namespace dqi
