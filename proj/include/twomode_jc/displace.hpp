#pragma once

// Displacement operators of SU(1,1) and SU(2), their normal-ordered forms,
// similarity transforms of the generators, and number coherent states.

#include "core.hpp"
#include "fock.hpp"
#include "liealg.hpp"
#include "linalg.hpp"

#include <array>
#include <cmath>
#include <span>
#include <vector>

namespace twomode_jc {

/// xi = -(theta/2) e^{-i phi}; zeta and eta are the normal-form parameters.
/// For SU(2) at |xi| = pi/2 the normal form does not exist and zeta is unbounded.
struct TiltingParams {
    Algebra algebra = Algebra::SU11;
    double theta = 0.0;
    double phi = 0.0;
    cplx xi{};
    cplx zeta{};
    double eta = 0.0;

    static TiltingParams from_xi(Algebra alg, cplx xi) {
        TiltingParams p;
        p.algebra = alg;
        p.xi = xi;
        const double r = std::abs(xi);
        p.theta = 2.0 * r;
        p.phi = r == 0.0 ? 0.0 : -std::arg(-xi);
        const cplx unit = r == 0.0 ? cplx{1.0} : xi / r;
        if (alg == Algebra::SU11) {
            p.zeta = std::tanh(r) * unit;
            p.eta = std::log1p(-std::norm(p.zeta));
        } else {
            p.zeta = std::tan(r) * unit;
            p.eta = std::log1p(std::norm(p.zeta));
        }
        return p;
    }

    static TiltingParams from_angles(Algebra alg, double theta, double phi) {
        return from_xi(alg, -0.5 * theta * std::exp(-kI * phi));
    }

    static TiltingParams from_zeta(Algebra alg, cplx zeta) {
        const double z = std::abs(zeta);
        if (alg == Algebra::SU11 && z >= 1.0) throw DomainError("SU(1,1) coherent states need |zeta| < 1");
        const cplx unit = z == 0.0 ? cplx{1.0} : zeta / z;
        const double r = alg == Algebra::SU11 ? std::atanh(z) : std::atan(z);
        return from_xi(alg, r * unit);
    }

    double alpha() const { return std::sinh(2.0 * std::abs(xi)); }
    double beta() const { return 0.5 * (std::cosh(2.0 * std::abs(xi)) - 1.0); }
    double delta() const { return std::sin(2.0 * std::abs(xi)); }
    double epsilon() const { return 0.5 * (std::cos(2.0 * std::abs(xi)) - 1.0); }
};

inline Eigen::MatrixXcd displacement_direct(const GeneratorSet& g, cplx xi) {
    if (xi == cplx{}) return Eigen::MatrixXcd::Identity(g.zero.dim(), g.zero.dim());
    const OperatorMatrix gen = xi * g.plus - std::conj(xi) * g.minus;
    return expm_antihermitian(gen.to_dense());
}

template <FockSpace S>
Eigen::MatrixXcd displacement_direct(Algebra alg, cplx xi, const S& space) {
    return displacement_direct(generators(alg, space), xi);
}

/// exp(zeta G+) exp(eta G0) exp(-zeta* G-).
inline Eigen::MatrixXcd displacement_normal(const GeneratorSet& g, const TiltingParams& p) {
    if (g.algebra != p.algebra) throw DomainError("tilting parameters belong to a different algebra");
    const Eigen::MatrixXcd up = expm_nilpotent(p.zeta * g.plus);
    const Eigen::MatrixXcd down = expm_nilpotent(-std::conj(p.zeta) * g.minus);
    const Eigen::MatrixXcd g0 = g.zero.to_dense();
    Eigen::VectorXcd mid(g0.rows());
    for (Eigen::Index i = 0; i < g0.rows(); ++i) {
        if (std::abs(g0(i, i).imag()) > 0.0) throw DomainError("G0 must be real diagonal");
        mid(i) = std::exp(p.eta * g0(i, i).real());
    }
    return up * mid.asDiagonal() * down;
}

// ---------------------------------------------------------------------------
// Similarity transforms

enum class GenIndex : std::uint8_t { Zero = 0, Plus = 1, Minus = 2 };

/// c[i][j]: coefficient of G_j in D^dagger G_i D, indices ordered (G0, G+, G-).
struct SimilarityCoefficients {
    Algebra algebra;
    std::array<std::array<cplx, 3>, 3> c{};

    cplx operator()(GenIndex i, GenIndex j) const { return c[static_cast<int>(i)][static_cast<int>(j)]; }
};

inline SimilarityCoefficients similarity_coefficients(Algebra alg, cplx xi) {
    SimilarityCoefficients s{alg, {}};
    for (int i = 0; i < 3; ++i) s.c[i][i] = 1.0;
    const double r = std::abs(xi);
    if (r == 0.0) return s;
    const auto p = TiltingParams::from_xi(alg, xi);
    const cplx u = xi / r;            // xi/|xi|
    const cplx uc = std::conj(u);     // xi*/|xi|
    const cplx ratio = uc / u;        // xi*/xi
    constexpr int Z = 0, P = 1, M = 2;
    if (alg == Algebra::SU11) {
        const double a = p.alpha(), b = p.beta();
        s.c[P] = {uc * a, 1.0 + b, b * ratio};
        s.c[M] = {u * a, b / ratio, 1.0 + b};
        s.c[Z] = {2.0 * b + 1.0, 0.5 * a * u, 0.5 * a * uc};
    } else {
        const double d = p.delta(), e = p.epsilon();
        s.c[P] = {-uc * d, 1.0 + e, e * ratio};
        s.c[M] = {-u * d, e / ratio, 1.0 + e};
        s.c[Z] = {2.0 * e + 1.0, 0.5 * d * u, 0.5 * d * uc};
    }
    return s;
}

struct SimilarityReport {
    std::array<double, 3> residual{};  // per transformed generator G0, G+, G-
    double max() const { return std::max({residual[0], residual[1], residual[2]}); }
};

/// Compares D^dagger G_i D with the predicted combination on the first `low_states`
/// states of a sector (all states when low_states is 0).
template <FockSpace S>
SimilarityReport verify_similarity(Algebra alg, cplx xi, const S& space, std::size_t low_states = 0) {
    const auto g = generators(alg, space);
    const Eigen::MatrixXcd d = displacement_direct(g, xi);
    const auto coef = similarity_coefficients(alg, xi);
    const std::array<Eigen::MatrixXcd, 3> gen{g.zero.to_dense(), g.plus.to_dense(), g.minus.to_dense()};
    const Eigen::Index n = low_states == 0 ? d.rows() : std::min<Eigen::Index>(d.rows(), low_states);
    SimilarityReport rep;
    for (int i = 0; i < 3; ++i) {
        const Eigen::MatrixXcd lhs = d.adjoint() * gen[i] * d;
        Eigen::MatrixXcd rhs = Eigen::MatrixXcd::Zero(d.rows(), d.cols());
        for (int j = 0; j < 3; ++j) rhs += coef.c[i][j] * gen[j];
        rep.residual[i] = n == 0 ? 0.0 : (lhs - rhs).topLeftCorner(n, n).cwiseAbs().maxCoeff();
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Number coherent states

struct CoherentStateCoeffs {
    Algebra algebra = Algebra::SU11;
    Su11Labels su11;
    Su2Labels su2;
    cplx zeta{};
    /// SU(1,1): index = final excitation n'. SU(2): index = j + mu'.
    Eigen::VectorXcd coeffs;
    double tail_bound = 0.0;

    double norm2() const { return coeffs.squaredNorm(); }
};

namespace detail {
inline double lgam(double x) { return std::lgamma(x); }
inline double lfact(int n) { return std::lgamma(n + 1.0); }
}  // namespace detail

/// Coefficients of D(xi)|k, n> in the |k, n'> basis, summed in the log domain.
/// The series is cut once a geometric bound on the remaining mass drops below tail_tol.
inline CoherentStateCoeffs su11_ncs_coefficients(HalfInt k, int n, cplx zeta, double tail_tol = 1e-12,
                                                 int max_index = 20000) {
    if (k.twice() < 1) throw DomainError("Bargmann index must be at least 1/2");
    if (n < 0) throw DomainError("excitation number must be nonnegative");
    const double z = std::abs(zeta);
    if (z >= 1.0) throw DomainError("SU(1,1) coherent states need |zeta| < 1");

    CoherentStateCoeffs out;
    out.algebra = Algebra::SU11;
    out.su11 = {k, n};
    out.zeta = zeta;
    if (z == 0.0) {
        out.coeffs = Eigen::VectorXcd::Zero(n + 1);
        out.coeffs(n) = 1.0;
        return out;
    }
    const double kk = k.value();
    const double eta = std::log1p(-z * z);
    const double lz = std::log(z);
    const double az = std::arg(zeta);

    auto coefficient = [&](int m) {
        cplx sum{};
        for (int j = std::max(0, n - m); j <= n; ++j) {
            const int s = m - n + j;
            const int nj = n - j;
            const double lmag = (s + j) * lz - detail::lfact(s) - detail::lfact(j) + eta * (kk + nj) +
                                0.5 * (detail::lgam(2 * kk + n) + detail::lgam(2 * kk + nj + s)) -
                                detail::lgam(2 * kk + nj) + 0.5 * (detail::lfact(n) + detail::lfact(nj + s)) -
                                detail::lfact(nj);
            const double phase = s * az + j * (kPi - az);
            sum += std::polar(std::exp(lmag), phase);
        }
        return sum;
    };

    std::vector<cplx> c;
    for (int m = 0;; ++m) {
        if (m > max_index)
            throw TailError("coherent-state tail above " + std::to_string(tail_tol) + " at index " +
                            std::to_string(max_index));
        c.push_back(coefficient(m));
        if (m <= n + 1) continue;
        const double cm = std::abs(c[m]), cp = std::abs(c[m - 1]), cpp = std::abs(c[m - 2]);
        if (cm == 0.0) {
            out.tail_bound = 0.0;
            break;
        }
        // ratios approach |zeta| from above; bound the rest by a geometric series
        const double rho = std::max({cp > 0 ? cm / cp : 1.0, cpp > 0 ? cp / cpp : 1.0, z});
        if (rho >= 1.0) continue;
        const double rho_safe = std::min(0.5 * (1.0 + rho), rho * (1.0 + 1.0 / m));
        const double tail = cm * cm * rho_safe * rho_safe / (1.0 - rho_safe * rho_safe);
        if (tail < tail_tol) {
            out.tail_bound = tail;
            break;
        }
    }
    out.coeffs = Eigen::Map<Eigen::VectorXcd>(c.data(), static_cast<Eigen::Index>(c.size()));
    return out;
}

namespace detail {

inline Eigen::VectorXcd su2_ncs_sum(HalfInt j, HalfInt mu, cplx zeta) {
    const int jm = (j - mu).as_integer();  // j - mu
    const int jp = (j + mu).as_integer();  // j + mu
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(j.twice() + 1);
    const double z = std::abs(zeta);
    if (z == 0.0) {
        c(jp) = 1.0;
        return c;
    }
    const double eta = std::log1p(z * z);
    const double lz = std::log(z);
    const double az = std::arg(zeta);
    const double muv = mu.value();
    for (int n = 0; n <= jp; ++n)
        for (int s = 0; s <= jm + n; ++s) {
            const double lmag = (s + n) * lz - detail::lfact(s) - detail::lfact(n) + eta * (muv - n) +
                                detail::lfact(jm + n) - detail::lfact(jp - n) +
                                0.5 * (detail::lfact(jp) + detail::lfact(jp - n + s) - detail::lfact(jm) -
                                       detail::lfact(jm + n - s));
            const double phase = s * az + n * (kPi - az);
            c(jp - n + s) += std::polar(std::exp(lmag), phase);
        }
    return c;
}

}  // namespace detail

/// Coefficients of D(xi)|j, mu> over mu' = -j..j (index j + mu').
/// For |zeta| > 1 the sum cancels badly, so D(xi) is split into a half turn, which maps
/// |j, mu> to (-1)^(j+mu) e^{-2i mu arg zeta} |j, -mu>, and the remainder at -1/zeta*.
inline CoherentStateCoeffs su2_ncs_coefficients(HalfInt j, HalfInt mu, cplx zeta) {
    if (j.twice() < 0 || mu > j || mu < -j || !(j - mu).is_integer())
        throw DomainError("invalid SU(2) labels");
    CoherentStateCoeffs out;
    out.algebra = Algebra::SU2;
    out.su2 = {j, mu};
    out.zeta = zeta;
    if (std::abs(zeta) <= 1.0) {
        out.coeffs = detail::su2_ncs_sum(j, mu, zeta);
        return out;
    }
    const double sign = (j + mu).as_integer() % 2 == 0 ? 1.0 : -1.0;
    out.coeffs = sign * std::exp(-kI * (mu.value() * 2.0 * std::arg(zeta))) *
                 detail::su2_ncs_sum(j, -mu, -1.0 / std::conj(zeta));
    return out;
}

}  // namespace twomode_jc
