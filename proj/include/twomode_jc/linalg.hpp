#pragma once

// Dense Hermitian eigenproblems and exponentials of sector-sized matrices.

#include "core.hpp"
#include "fock.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>

namespace twomode_jc {

struct HermitianEig {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXcd vectors;  // columns
};

inline HermitianEig hermitian_eig(const Eigen::MatrixXcd& h, bool with_vectors = true) {
    if (h.rows() != h.cols()) throw DimensionMismatchError("eigenproblem matrix must be square");
    if (h.rows() == 0) return {};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, with_vectors ? Eigen::ComputeEigenvectors
                                                                        : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceError("Hermitian eigensolver did not converge");
    HermitianEig out{es.eigenvalues(), {}};
    if (with_vectors) out.vectors = es.eigenvectors();
    return out;
}

inline Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& h) { return hermitian_eig(h, false).values; }

/// exp(G) for anti-Hermitian G via the eigendecomposition of the Hermitian iG.
/// The result is unitary by construction; the decomposition is checked against
/// its own reconstruction error.
inline Eigen::MatrixXcd expm_antihermitian(const Eigen::MatrixXcd& g, double tol = 1e-10) {
    const Eigen::Index n = g.rows();
    if (n != g.cols()) throw DimensionMismatchError("generator must be square");
    if (n == 0) return {};
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g + g.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw DomainError("generator is not anti-Hermitian");
    const Eigen::MatrixXcd h = kI * g;
    const auto eig = hermitian_eig(h);
    const double recon = (h * eig.vectors - eig.vectors * eig.values.asDiagonal()).cwiseAbs().maxCoeff();
    if (recon > tol * scale)
        throw ConvergenceError("matrix exponential exceeded its error bound: " + std::to_string(recon));
    // G = -i H  =>  exp(G) = V exp(-i lambda) V^dagger
    Eigen::VectorXcd phases(n);
    for (Eigen::Index i = 0; i < n; ++i) phases(i) = std::exp(-kI * eig.values(i));
    return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

/// exp(M) for a nilpotent matrix; the series terminates after at most dim terms.
inline Eigen::MatrixXcd expm_nilpotent(const OperatorMatrix& m) {
    const Eigen::Index n = m.dim();
    const auto sp = m.to_sparse();
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    for (Eigen::Index k = 1; k <= n; ++k) {
        term = (sp * term) / static_cast<double>(k);
        if (term.cwiseAbs().maxCoeff() == 0.0) return out;
        out += term;
    }
    if (term.cwiseAbs().maxCoeff() != 0.0) throw DomainError("matrix is not nilpotent");
    return out;
}

}  // namespace twomode_jc
