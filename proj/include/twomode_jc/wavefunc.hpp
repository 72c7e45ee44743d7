#pragma once

// Position-space eigenfunctions of the tilted Hamiltonians and the SU(1,1)
// number-coherent-state wavefunction, as a series and in closed form.

#include "core.hpp"
#include "displace.hpp"
#include "liealg.hpp"
#include "quadrature.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace twomode_jc {

/// Associated Laguerre polynomial L_n^alpha(x) by the three-term recurrence.
template <class T>
T laguerre(int n, double alpha, T x) {
    if (n < 0) throw DomainError("Laguerre degree must be nonnegative");
    T prev = T(1.0);
    if (n == 0) return prev;
    T cur = T(1.0 + alpha) - x;
    for (int k = 1; k < n; ++k) {
        const T next = ((T(2.0 * k + 1.0 + alpha) - x) * cur - T(k + alpha) * prev) / T(k + 1.0);
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace detail {

inline void check_labels(int n_l, int m_n) {
    if (n_l < 0 || m_n < 0)
        throw DomainError("wavefunction labels must be nonnegative (n_l=" + std::to_string(n_l) +
                          ", m_n=" + std::to_string(m_n) + ")");
}

/// log of rho^m e^{-rho²/2} sqrt(n!/(n+m)!); -inf at rho = 0 with m > 0.
inline double log_envelope(int n, int m, double rho) {
    const double lr = m == 0 ? 0.0 : m * std::log(rho);
    return lr - 0.5 * rho * rho + 0.5 * (std::lgamma(n + 1.0) - std::lgamma(n + m + 1.0));
}

}  // namespace detail

/// Normalized 2D oscillator eigenfunction (1/√π) e^{imφ} (-1)^n √(n!/(n+m)!) ρ^m L_n^m(ρ²) e^{-ρ²/2}.
inline cplx oscillator_wavefunction(int n_l, int m_n, RadialPoint pt) {
    detail::check_labels(n_l, m_n);
    if (pt.rho < 0.0) throw DomainError("rho must be nonnegative");
    if (pt.rho == 0.0 && m_n > 0) return {};
    const double l = laguerre(n_l, m_n, pt.rho * pt.rho);
    const double mag = std::exp(detail::log_envelope(n_l, m_n, pt.rho)) / std::sqrt(kPi);
    const double sgn = n_l % 2 == 0 ? 1.0 : -1.0;
    return std::polar(sgn * mag * l, m_n * pt.phi);
}

/// The same function with the printed prefactor √(2 n!/(n+m)!), whose norm² is 2.
inline cplx oscillator_wavefunction_as_printed(int n_l, int m_n, RadialPoint pt) {
    return std::sqrt(2.0) * oscillator_wavefunction(n_l, m_n, pt);
}

/// ⟨ρ,φ| D(ξ) |k, n⟩ for k = (m_n+1)/2, expanded over oscillator eigenfunctions.
/// tail_tol bounds the squared norm of the dropped coefficients.
class NcsWavefunction {
public:
    NcsWavefunction(cplx zeta, Su11Labels labels, double tail_tol = 1e-26)
        : coeffs_(su11_ncs_coefficients(labels.k, labels.n, zeta, tail_tol)) {
        m_ = labels.k.twice() - 1;
        n_ = labels.n;
    }

    const CoherentStateCoeffs& coefficients() const { return coeffs_; }
    int m_n() const { return m_; }
    int n_l() const { return n_; }

    /// Gaussian rate of |Ψ|² in ρ², Re((1+ζ)/(1-ζ)), for quadrature scaling.
    double decay() const {
        const cplx z = coeffs_.zeta;
        return (1.0 - std::norm(z)) / std::norm(1.0 - z);
    }

    cplx operator()(RadialPoint pt) const {
        if (pt.rho < 0.0) throw DomainError("rho must be nonnegative");
        if (pt.rho == 0.0 && m_ > 0) return {};
        const double x = pt.rho * pt.rho;
        const auto& c = coeffs_.coeffs;
        // |k,M⟩ ↦ (-1)^M ψ_{M,m}; the sign of ψ cancels, leaving √(M!/(M+m)!) L_M^m
        double a = std::exp(-0.5 * std::lgamma(m_ + 1.0));
        double prev = 0.0, cur = 1.0, log_scale = 0.0;
        cplx sum = c(0) * a * cur;
        for (Eigen::Index M = 1; M < c.size(); ++M) {
            const double k = static_cast<double>(M - 1);
            const double next = ((2.0 * k + 1.0 + m_ - x) * cur - (k + m_) * prev) / (k + 1.0);
            prev = cur;
            cur = next;
            a *= std::sqrt(static_cast<double>(M) / static_cast<double>(M + m_));
            sum += c(M) * a * cur;
            const double big = std::max(std::abs(cur), std::abs(prev));
            if (big > 1e100) {
                prev /= big;
                cur /= big;
                sum /= big;
                log_scale += std::log(big);
            }
        }
        const double lmag = (m_ == 0 ? 0.0 : m_ * std::log(pt.rho)) - 0.5 * x + log_scale;
        const double sgn = n_ % 2 == 0 ? 1.0 : -1.0;
        return sum * std::polar(sgn * std::exp(lmag) / std::sqrt(kPi), m_ * pt.phi);
    }

private:
    CoherentStateCoeffs coeffs_;
    int m_ = 0;
    int n_ = 0;
};

inline cplx ncs_wavefunction_series(cplx zeta, Su11Labels labels, RadialPoint pt, double tail_tol = 1e-26) {
    return NcsWavefunction(zeta, labels, tail_tol)(pt);
}

struct ClosedFormParams {
    cplx zeta{};
    cplx sigma{};
};

/// σ = (1-|ζ|²)/((1-ζ)(-ζ*)); singular at ζ = 0 and ζ = 1.
inline ClosedFormParams closed_form_params(cplx zeta) {
    if (zeta == cplx{} || zeta == cplx{1.0, 0.0}) throw SingularParameterError("sigma is singular at zeta = 0 and zeta = 1");
    if (std::abs(zeta) >= 1.0) throw DomainError("closed form needs |zeta| < 1");
    const cplx sigma = (1.0 - std::norm(zeta)) / ((1.0 - zeta) * (-std::conj(zeta)));
    return {zeta, sigma};
}

enum class ClosedFormVariant : std::uint8_t { Corrected, AsPrinted };

/// Closed-form coherent wavefunction. Corrected: Laguerre argument ρ²σ/((1-ζ)(1+σ)) and unit norm.
/// AsPrinted: argument ρ²σ/((1-ζ)(1-σ)) and the √2 prefactor.
inline cplx ncs_wavefunction_closed(const ClosedFormParams& p, int n_l, int m_n, RadialPoint pt,
                                    ClosedFormVariant v = ClosedFormVariant::Corrected) {
    detail::check_labels(n_l, m_n);
    if (pt.rho < 0.0) throw DomainError("rho must be nonnegative");
    const cplx z = p.zeta, s = p.sigma;
    const cplx den_s = v == ClosedFormVariant::Corrected ? 1.0 + s : 1.0 - s;
    if (std::abs(den_s) < 1e-300) throw SingularParameterError("closed-form Laguerre argument is singular");
    if (pt.rho == 0.0 && m_n > 0) return {};
    const double x = pt.rho * pt.rho;
    const cplx arg = x * s / ((1.0 - z) * den_s);
    const cplx lag = laguerre<cplx>(n_l, m_n, arg);
    const double pref = std::sqrt((v == ClosedFormVariant::AsPrinted ? 2.0 : 1.0) *
                                  std::exp(std::lgamma(n_l + 1.0) - std::lgamma(n_l + m_n + 1.0)) / kPi);
    const double sgn = n_l % 2 == 0 ? 1.0 : -1.0;
    const cplx front = std::pow(-std::conj(z) * (1.0 + s), n_l) *
                       std::pow(1.0 - std::norm(z), 0.5 * m_n + 0.5) / std::pow(1.0 - z, m_n + 1);
    const cplx gauss = std::exp(-x * (z + 1.0) / (2.0 * (1.0 - z)));
    const double rm = m_n == 0 ? 1.0 : std::pow(pt.rho, m_n);
    return sgn * pref * std::polar(1.0, m_n * pt.phi) * front * gauss * rm * lag;
}

/// Sampled deviation between closed form and series.
struct ClosedFormReport {
    int samples = 0;
    double max_dev_corrected = 0.0;
    double max_dev_printed = 0.0;
    double scale = 0.0;  // largest |series| value seen
};

/// Random (ζ, point) samples with |ζ| ≤ zeta_max, ρ ≤ rho_max, seeded for reproducibility.
inline ClosedFormReport compare_closed_form(int n_l, int m_n, int samples, std::uint64_t seed, double zeta_max = 0.5,
                                            double rho_max = 3.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> um(0.05, zeta_max), uph(-kPi, kPi), ur(0.0, rho_max);
    ClosedFormReport r;
    for (int i = 0; i < samples; ++i) {
        const cplx zeta = std::polar(um(rng), uph(rng));
        const RadialPoint pt{ur(rng), uph(rng)};
        const cplx ref = ncs_wavefunction_series(zeta, su11_labels({n_l, m_n}), pt);
        const auto cp = closed_form_params(zeta);
        r.max_dev_corrected = std::max(r.max_dev_corrected, std::abs(ncs_wavefunction_closed(cp, n_l, m_n, pt) - ref));
        r.max_dev_printed = std::max(
            r.max_dev_printed, std::abs(ncs_wavefunction_closed(cp, n_l, m_n, pt, ClosedFormVariant::AsPrinted) - ref));
        r.scale = std::max(r.scale, std::abs(ref));
        ++r.samples;
    }
    return r;
}

}  // namespace twomode_jc
