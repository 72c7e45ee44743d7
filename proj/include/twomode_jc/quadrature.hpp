#pragma once

// Gauss rules on the plane: Legendre in the angle, Laguerre in x = rho².
// Laguerre weights underflow for large node counts, so they are kept as logarithms.

#include "core.hpp"
#include "parallel.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <string>
#include <vector>

namespace twomode_jc {

struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;  // Legendre: plain weights; Laguerre: log of the weights
};

namespace detail {

/// Golub-Welsch eigenvalues of a symmetric tridiagonal Jacobi matrix, with eigenvectors.
inline Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> jacobi_eig(const Eigen::VectorXd& diag, const Eigen::VectorXd& off) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
    return es;
}

/// L_{n-1}(x), L_n(x) of the plain Laguerre family, both scaled by exp(-log_scale).
struct ScaledLaguerre {
    double prev = 0.0, cur = 0.0, log_scale = 0.0;
};

inline ScaledLaguerre laguerre_pair_scaled(int n, double x) {
    ScaledLaguerre r{0.0, 1.0, 0.0};
    for (int k = 0; k < n; ++k) {
        const double next = ((2.0 * k + 1.0 - x) * r.cur - k * r.prev) / (k + 1.0);
        r.prev = r.cur;
        r.cur = next;
        const double m = std::max(std::abs(r.cur), std::abs(r.prev));
        if (m > 1e100) {
            r.prev /= m;
            r.cur /= m;
            r.log_scale += std::log(m);
        }
    }
    return r;
}

}  // namespace detail

inline GaussRule gauss_legendre(int n) {
    if (n < 1) throw DomainError("quadrature needs at least one node");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(n), e(std::max(n - 1, 0));
    for (int k = 1; k < n; ++k) e(k - 1) = k / std::sqrt(4.0 * k * k - 1.0);
    const auto es = detail::jacobi_eig(d, e);
    GaussRule r;
    for (int i = 0; i < n; ++i) {
        r.nodes.push_back(es.eigenvalues()(i));
        r.weights.push_back(2.0 * es.eigenvectors()(0, i) * es.eigenvectors()(0, i));
    }
    return r;
}

/// Gauss-Laguerre rule for weight e^{-x}; weights returned as logarithms.
inline GaussRule gauss_laguerre_log(int n) {
    if (n < 1) throw DomainError("quadrature needs at least one node");
    Eigen::VectorXd d(n), e(std::max(n - 1, 0));
    for (int k = 0; k < n; ++k) d(k) = 2.0 * k + 1.0;
    for (int k = 1; k < n; ++k) e(k - 1) = k;
    const auto es = detail::jacobi_eig(d, e);
    GaussRule r;
    for (int i = 0; i < n; ++i) {
        const double x = es.eigenvalues()(i);
        const double v = es.eigenvectors()(0, i);
        r.nodes.push_back(x);
        if (v * v > 1e-20) {
            r.weights.push_back(std::log(v * v));
            continue;
        }
        // eigenvector components lose relative accuracy once tiny:
        // w = x / ((n+1) L_{n+1}(x))², with (n+1) L_{n+1} = -n L_{n-1} at a root
        const auto l = detail::laguerre_pair_scaled(n, x);
        r.weights.push_back(std::log(x) - 2.0 * (std::log(n * std::abs(l.prev)) + l.log_scale));
    }
    return r;
}

namespace detail {

inline const GaussRule& cached_rule(bool laguerre, int n) {
    static std::mutex mu;
    static std::map<std::pair<bool, int>, GaussRule> cache;
    std::lock_guard lock(mu);
    auto it = cache.find({laguerre, n});
    if (it == cache.end()) it = cache.emplace(std::pair{laguerre, n}, laguerre ? gauss_laguerre_log(n) : gauss_legendre(n)).first;
    return it->second;
}

}  // namespace detail

struct RadialPoint {
    double rho = 0.0;
    double phi = 0.0;
};

using Wavefunction = std::function<cplx(RadialPoint)>;

struct GridSpec {
    int radial_nodes = 48;
    int angular_nodes = 32;
    double decay = 1.0;   // expected Gaussian rate r in |f g| ~ e^{-r rho²}
    double tol = 1e-11;   // node-doubling acceptance
    int max_radial = 768;
};

struct QuadratureResult {
    cplx value{};
    double error = 0.0;
    int radial_nodes = 0;
    int angular_nodes = 0;
};

/// ∫ f* g rho drho dphi on one fixed grid.
inline cplx integrate_fixed(const Wavefunction& f, const Wavefunction& g, int nr, int nphi, double decay) {
    if (!(decay > 0.0)) throw DomainError("quadrature decay rate must be positive");
    const auto& lr = detail::cached_rule(true, nr);
    const auto& lp = detail::cached_rule(false, nphi);
    std::vector<cplx> rows(static_cast<std::size_t>(nr));
    parallel_for(static_cast<std::size_t>(nr), [&](std::size_t i) {
        const double x = lr.nodes[i] / decay;
        const double rho = std::sqrt(x);
        const double lw = lr.weights[i] + lr.nodes[i];  // weight times e^{+u}
        cplx acc{};
        for (int j = 0; j < nphi; ++j) {
            const RadialPoint pt{rho, kPi * (lp.nodes[j] + 1.0)};
            const cplx fv = f(pt), gv = g(pt);
            if (fv == cplx{} || gv == cplx{}) continue;
            acc += lp.weights[j] * std::conj(fv) * gv;
        }
        rows[i] = acc * std::exp(lw);
    });
    cplx sum{};
    for (const auto& r : rows) sum += r;
    // rho drho = dx/2 = du/(2 decay); dphi = pi dt
    return sum * (kPi / (2.0 * decay));
}

/// Integrates with node doubling until successive grids agree to spec.tol.
inline QuadratureResult quadrature_inner_product(const Wavefunction& f, const Wavefunction& g, const GridSpec& spec = {}) {
    int nr = spec.radial_nodes, np = spec.angular_nodes;
    cplx prev = integrate_fixed(f, g, nr, np, spec.decay);
    while (true) {
        const int nr2 = 2 * nr, np2 = 2 * np;
        if (nr2 > spec.max_radial)
            throw QuadratureError("quadrature did not converge to " + std::to_string(spec.tol) + " within " +
                                  std::to_string(spec.max_radial) + " radial nodes");
        const cplx next = integrate_fixed(f, g, nr2, np2, spec.decay);
        const double err = std::abs(next - prev);
        if (err <= spec.tol * std::max(1.0, std::abs(next))) return {next, err, nr2, np2};
        prev = next;
        nr = nr2;
        np = np2;
    }
}

inline double quadrature_norm2(const Wavefunction& f, const GridSpec& spec = {}) {
    return quadrature_inner_product(f, f, spec).value.real();
}

}  // namespace twomode_jc
