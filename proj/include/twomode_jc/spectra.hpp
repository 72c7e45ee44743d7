#pragma once

// Analytic spectra, tilting parameters, certified numeric spectra, special-case
// presets and non-relativistic limits.

#include "core.hpp"
#include "displace.hpp"
#include "fock.hpp"
#include "liealg.hpp"
#include "linalg.hpp"
#include "models.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace twomode_jc {

// ---------------------------------------------------------------------------
// Radicals

namespace detail {
/// a + b = s + e exactly.
inline std::pair<double, double> two_sum(double a, double b) {
    const double s = a + b;
    const double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}
/// a * b = p + e exactly.
inline std::pair<double, double> two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}
}  // namespace detail

/// sqrt((a + b)^2 - 4ab) evaluated without cancellation; equals |a - b|.
inline double radical_su11(double a, double b) {
    const auto [s, se] = detail::two_sum(a, b);
    const auto [s2, s2e] = detail::two_prod(s, s);
    const auto [ab, abe] = detail::two_prod(a, b);
    const double d = (s2 - 4.0 * ab) + (s2e - 4.0 * abe) + 2.0 * s * se + se * se;
    return std::sqrt(std::max(0.0, d));
}

/// sqrt((a - b)^2 + 4ab); equals a + b for a, b >= 0.
inline double radical_su2(double a, double b) {
    const auto [d, de] = detail::two_sum(a, -b);
    const auto [d2, d2e] = detail::two_prod(d, d);
    const auto [ab, abe] = detail::two_prod(a, b);
    const double v = (d2 + 4.0 * ab) + (d2e + 4.0 * abe) + 2.0 * d * de + de * de;
    return std::sqrt(std::max(0.0, v));
}

// ---------------------------------------------------------------------------
// Energy levels

struct EnergyLevel {
    double E = 0.0;
    double kg = 0.0;  // E² − m²c⁴
    Branch branch = Branch::Plus;
    InnerSign inner = InnerSign::NA;
    QuantumNumbers qn;
};

/// ±sqrt(m²c⁴ + kg).
inline double energy_from_kg(double kg, const ModelParams& p, Branch b) {
    const double rad = 1.0 + kg / (p.mc2 * p.mc2);
    if (rad < 0.0) throw DomainError("negative radicand: E² − m²c⁴ = " + std::to_string(kg));
    return sign_of(b) * p.mc2 * std::sqrt(rad);
}

/// (E − mc²) on the Plus branch without cancellation.
inline double kinetic_from_kg(double kg, const ModelParams& p) {
    return kg / (p.mc2 * (1.0 + std::sqrt(1.0 + kg / (p.mc2 * p.mc2))));
}

inline void check_quantum_numbers(int n_l, int m_n) {
    if (n_l < 0 || m_n < 0)
        throw DomainError("quantum numbers out of domain: n_l=" + std::to_string(n_l) + ", m_n=" + std::to_string(m_n));
}

/// General JC-AJC form: ħ²(R(n_l + m_n/2 + 1/2) − ½(|f|²−|g|²)(m_n − 1)), R = ||f|²−|g|²|.
inline double kg_su11(const ModelParams& p, int n_l, int m_n) {
    check_quantum_numbers(n_l, m_n);
    const double g2 = std::norm(p.g), f2 = std::norm(p.f);
    const double r = radical_su11(g2, f2);
    return p.hbar * p.hbar * (r * (n_l + 0.5 * m_n + 0.5) - 0.5 * (f2 - g2) * (m_n - 1));
}

/// Reduced form ħ²(Δ(n_l + 1)), valid for |f| > |g|.
inline double simplified_kg_su11(const ModelParams& p, int n_l) {
    if (n_l < 0) throw DomainError("n_l must be nonnegative");
    return p.hbar * p.hbar * (std::norm(p.f) - std::norm(p.g)) * (n_l + 1);
}

/// The printed reduced form, which carries an extra factor 2.
inline double simplified_kg_su11_as_printed(const ModelParams& p, int n_l) { return 2.0 * simplified_kg_su11(p, n_l); }

inline double simplified_energy_su11(const ModelParams& p, int n_l, Branch b) {
    return energy_from_kg(simplified_kg_su11(p, n_l), p, b);
}

/// Tilted-frame eigenvalue of either JC-AJC component in an N_d sector at excitation n.
inline double sector_kg_su11(const ModelParams& p, Component c, int nd, int n) {
    const double g2 = std::norm(p.g), f2 = std::norm(p.f);
    const double k0 = n + 0.5 * (std::abs(nd) + 1);
    const double shift = c == Component::Upper ? nd + 1 : nd - 1;
    return p.hbar * p.hbar * (radical_su11(g2, f2) * k0 + 0.5 * (f2 - g2) * shift);
}

inline EnergyLevel analytic_energy_su11(const ModelParams& p, int n_l, int m_n, Branch b) {
    p.validate();
    EnergyLevel lv;
    lv.kg = kg_su11(p, n_l, m_n);
    lv.E = energy_from_kg(lv.kg, p, b);
    lv.branch = b;
    lv.qn = {n_l, m_n};
    if (std::abs(p.f) > std::abs(p.g)) {
        const double simp = simplified_kg_su11(p, n_l);
        if (std::abs(simp - lv.kg) > 1e-12 * std::max({1.0, std::abs(simp), p.mc2 * p.mc2}))
            throw std::logic_error("general and reduced JC-AJC spectra disagree");
    }
    return lv;
}

/// ħ²((|f|²+|g|²)(n_l + m_n/2) ± ½ R m_n), R = sqrt((|g|²−|f|²)² + 4|g|²|f|²).
inline double kg_su2(const ModelParams& p, int n_l, int m_n, InnerSign inner) {
    check_quantum_numbers(n_l, m_n);
    const double g2 = std::norm(p.g), f2 = std::norm(p.f);
    const double s = inner == InnerSign::Minus ? -1.0 : 1.0;
    if (inner == InnerSign::NA && m_n != 0) throw DomainError("JC-JC levels with m_n > 0 need an inner sign");
    return p.hbar * p.hbar * ((g2 + f2) * (n_l + 0.5 * m_n) + s * 0.5 * radical_su2(g2, f2) * m_n);
}

/// The rewritten form ħ²(|f|²+|g|²)(N ± m_n)/2 with N = 2n_l + m_n.
inline double kg_su2_rewritten(const ModelParams& p, int n_l, int m_n, InnerSign inner) {
    const double s = inner == InnerSign::Minus ? -1.0 : 1.0;
    return 0.5 * p.hbar * p.hbar * (std::norm(p.f) + std::norm(p.g)) * (2 * n_l + m_n + s * m_n);
}

/// Tilted-frame eigenvalue of a JC-JC component for the sector state with n_a = i.
inline double sector_kg_su2(const ModelParams& p, Component c, int i) {
    const double s = std::norm(p.f) + std::norm(p.g);
    return p.hbar * p.hbar * s * (c == Component::Upper ? i : i + 1);
}

inline EnergyLevel analytic_energy_su2(const ModelParams& p, int n_l, int m_n, Branch b, InnerSign inner) {
    p.validate();
    if (m_n == 0) inner = InnerSign::NA;
    EnergyLevel lv;
    lv.kg = kg_su2(p, n_l, m_n, inner);
    const double rw = kg_su2_rewritten(p, n_l, m_n, inner);
    const double terms = p.hbar * p.hbar * (std::norm(p.f) + std::norm(p.g)) * (n_l + m_n);
    if (std::abs(rw - lv.kg) > 1e-12 * std::max({1.0, std::abs(rw), terms}))
        throw std::logic_error("printed JC-JC spectrum forms disagree");
    lv.E = energy_from_kg(lv.kg, p, b);
    lv.branch = b;
    lv.inner = inner;
    lv.qn = {n_l, m_n};
    return lv;
}

inline EnergyLevel analytic_energy(ModelKind k, const ModelParams& p, int n_l, int m_n, Branch b,
                                   InnerSign inner = InnerSign::Plus) {
    return k == ModelKind::JC_AJC ? analytic_energy_su11(p, n_l, m_n, b) : analytic_energy_su2(p, n_l, m_n, b, inner);
}

// ---------------------------------------------------------------------------
// Tilting

/// Displacement that removes the ladder terms from the Klein-Gordon operators.
inline TiltingParams tilting_parameters(ModelKind k, const ModelParams& p) {
    p.validate();
    const double a = std::abs(p.g), b = std::abs(p.f);
    const Algebra alg = algebra_of(k);
    if (a == 0.0 && b == 0.0) return TiltingParams::from_xi(alg, 0.0);
    const double phase = std::arg(std::conj(p.f) * p.g) + kPi;
    double r = 0.0;
    if (alg == Algebra::SU11) {
        if (a == b) throw DegenerateCouplingError("JC-AJC tilting diverges for |f| = |g|");
        if (a == 0.0 || b == 0.0) return TiltingParams::from_xi(alg, 0.0);
        r = 0.5 * std::log((a + b) / std::abs(b - a));  // ½ atanh(2ab/(a²+b²))
    } else {
        r = 0.5 * std::atan2(2.0 * a * b, a * a - b * b);
    }
    return TiltingParams::from_xi(alg, std::polar(r, phase));
}

/// Diagonal of the reduced (tilted) Klein-Gordon operator on a sector.
inline Eigen::VectorXd reduced_diagonal(ModelKind k, Component c, const ModelParams& p, const SectorBasis& s) {
    check_sector_kind(k, s);
    Eigen::VectorXd d(static_cast<Eigen::Index>(s.size()));
    for (std::size_t i = 0; i < s.size(); ++i) {
        const FockState st = s.state(i);
        d(static_cast<Eigen::Index>(i)) = k == ModelKind::JC_AJC
                                              ? sector_kg_su11(p, c, s.charge_value(), std::min(st.na, st.nb))
                                              : sector_kg_su2(p, c, st.na);
    }
    return d;
}

struct TiltingReport {
    double offdiag = 0.0;    // max |off-diagonal| / scale
    double diag_dev = 0.0;   // max |diagonal − reduced form| / scale
    double scale = 1.0;
    std::size_t states = 0;
    double max() const { return std::max(offdiag, diag_dev); }
};

/// Compares D†·KG·D with the reduced diagonal form on the first `low_states` sector states
/// (all when 0). Values are relative to ħ²(|f|²+|g|²).
inline TiltingReport verify_tilting(ModelKind k, const ModelParams& p, const SectorBasis& s, const TiltingParams& t,
                                    Component c = Component::Upper, std::size_t low_states = 0) {
    const Eigen::MatrixXcd kg = build_kg_operator(k, c, p, s).to_dense();
    const Eigen::MatrixXcd d = displacement_direct(algebra_of(k), t.xi, s);
    const Eigen::MatrixXcd h = d.adjoint() * kg * d;
    const Eigen::VectorXd pred = reduced_diagonal(k, c, p, s);
    TiltingReport r;
    r.scale = std::max(p.hbar * p.hbar * (std::norm(p.f) + std::norm(p.g)), 1e-300);
    const Eigen::Index n = low_states == 0 ? h.rows() : std::min<Eigen::Index>(h.rows(), low_states);
    r.states = static_cast<std::size_t>(n);
    for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = 0; i < n; ++i) {
            if (i == j)
                r.diag_dev = std::max(r.diag_dev, std::abs(h(i, i) - pred(i)) / r.scale);
            else
                r.offdiag = std::max(r.offdiag, std::abs(h(i, j)) / r.scale);
        }
    return r;
}

// ---------------------------------------------------------------------------
// Numeric spectra

struct NumericSpectrum {
    std::vector<double> values;  // E² − m²c⁴, ascending
    int cutoff = 0;
    double max_rel_change = 0.0;  // against the doubled cutoff
};

/// Lowest eigenvalues of a sector operator built by `make(cutoff)`, certified by cutoff doubling.
template <class Build>
NumericSpectrum certified_lowest(Build&& make, int cutoff, std::size_t count, double scale, double tol = 1e-9) {
    const Eigen::VectorXd a = hermitian_eigenvalues(make(cutoff));
    if (count > static_cast<std::size_t>(a.size()))
        throw DomainError("requested " + std::to_string(count) + " levels from a sector of dimension " +
                          std::to_string(a.size()));
    const Eigen::VectorXd b = hermitian_eigenvalues(make(2 * cutoff));
    NumericSpectrum out;
    out.cutoff = cutoff;
    for (std::size_t i = 0; i < count; ++i) {
        const auto ii = static_cast<Eigen::Index>(i);
        const double change = std::abs(a(ii) - b(ii)) / std::max({std::abs(b(ii)), scale, 1e-300});
        out.max_rel_change = std::max(out.max_rel_change, change);
        out.values.push_back(a(ii));
    }
    if (out.max_rel_change > tol)
        throw NotConvergedError("cutoff " + std::to_string(cutoff) + " vs " + std::to_string(2 * cutoff) +
                                ": relative change " + std::to_string(out.max_rel_change));
    return out;
}

inline NumericSpectrum numeric_spectrum(ModelKind k, Component c, const ModelParams& p, const SectorBasis& s,
                                        std::size_t count, double tol = 1e-9) {
    check_sector_kind(k, s);
    const double scale = p.hbar * p.hbar * (std::norm(p.f) + std::norm(p.g));
    auto make = [&](int cutoff) {
        return build_kg_operator(k, c, p, SectorBasis(s.charge_kind(), s.charge_value(), cutoff)).to_dense();
    };
    return certified_lowest(make, s.parent_cutoff(), count, scale, tol);
}

// ---------------------------------------------------------------------------
// Special cases

enum class SpecialCaseKind : std::uint8_t { Dirac1p1, Dirac2p1, NDPA, CoupledOscillators };

inline const char* to_string(SpecialCaseKind k) {
    switch (k) {
        case SpecialCaseKind::Dirac1p1: return "dirac1p1";
        case SpecialCaseKind::Dirac2p1: return "dirac2p1";
        case SpecialCaseKind::NDPA: return "ndpa";
        default: return "coupled-osc";
    }
}

struct SpecialCase {
    SpecialCaseKind kind = SpecialCaseKind::Dirac1p1;
    double omega1 = 0.0;  // ω for the Dirac cases
    double omega2 = 0.0;
    double phase = 0.0;

    static SpecialCase dirac1p1(double w) { return {SpecialCaseKind::Dirac1p1, w, 0.0, 0.0}; }
    static SpecialCase dirac2p1(double w) { return {SpecialCaseKind::Dirac2p1, w, 0.0, 0.0}; }
    static SpecialCase ndpa(double w1, double w2, double phase) { return {SpecialCaseKind::NDPA, w1, w2, phase}; }
    static SpecialCase coupled_oscillators(double w1, double w2, double phase) {
        return {SpecialCaseKind::CoupledOscillators, w1, w2, phase};
    }
};

struct Preset {
    ModelKind kind;
    ModelParams params;
};

/// sqrt(2 mc² ω / ħ).
inline double dirac_coupling(double omega, const ModelParams& base) {
    if (omega < 0.0) throw DomainError("frequencies must be nonnegative");
    return std::sqrt(2.0 * base.mc2 * omega / base.hbar);
}

/// The 1+1 coupling as printed for the JC-AJC model, sqrt(ω mc²/ħ).
inline double dirac1p1_f_as_printed(double omega, const ModelParams& base) {
    return std::sqrt(omega * base.mc2 / base.hbar);
}

inline Preset special_case_params(const SpecialCase& c, const ModelParams& base) {
    base.validate();
    Preset out{ModelKind::JC_AJC, base};
    switch (c.kind) {
        case SpecialCaseKind::Dirac1p1:
            out.params.g = 0.0;
            out.params.f = dirac_coupling(c.omega1, base);
            break;
        case SpecialCaseKind::Dirac2p1:
            out.kind = ModelKind::JC_JC;
            out.params.f = out.params.g = dirac_coupling(c.omega1, base);
            break;
        case SpecialCaseKind::NDPA:
            out.params.g = kI * dirac_coupling(c.omega1, base) * std::exp(-kI * c.phase);
            out.params.f = dirac_coupling(c.omega2, base) * std::exp(kI * c.phase);
            break;
        case SpecialCaseKind::CoupledOscillators:
            out.kind = ModelKind::JC_JC;
            out.params.g = dirac_coupling(c.omega1, base) * std::exp(-kI * c.phase);
            out.params.f = dirac_coupling(c.omega2, base) * std::exp(kI * c.phase);
            break;
    }
    return out;
}

/// NDPA spectrum: E² − m²c⁴ = ħmc²(2|ω₂−ω₁|(n_l + m/2 + 1/2) − (ω₂−ω₁)(m − 1)).
inline EnergyLevel ndpa_energy(double w1, double w2, int n_l, int m, Branch b, const ModelParams& base) {
    base.validate();
    check_quantum_numbers(n_l, m);
    EnergyLevel lv;
    lv.kg = base.hbar * base.mc2 * (2.0 * radical_su11(w1, w2) * (n_l + 0.5 * m + 0.5) - (w2 - w1) * (m - 1));
    lv.E = energy_from_kg(lv.kg, base, b);
    lv.branch = b;
    lv.qn = {n_l, m};
    return lv;
}

/// The printed NDPA closed form, with coefficient 4 on the radical.
inline double ndpa_energy_as_printed(double w1, double w2, int n_l, int m, Branch b, const ModelParams& base) {
    const double kg = base.hbar * base.mc2 * (4.0 * radical_su11(w1, w2) * (n_l + 0.5 * m + 0.5) - (w2 - w1) * (m - 1));
    return energy_from_kg(kg, base, b);
}

/// Coupled-oscillator spectrum in group labels, mu signed in [−j, j]:
/// E = ±mc² sqrt(1 + (ħ/mc²)(2(ω₁+ω₂)j + 2R mu)), R = sqrt((ω₁−ω₂)² + 4ω₁ω₂).
inline EnergyLevel coupled_osc_energy(double w1, double w2, HalfInt j, HalfInt mu, Branch b, const ModelParams& base) {
    base.validate();
    if (j.twice() < 0 || mu > j || mu < -j || !(j - mu).is_integer()) throw DomainError("invalid SU(2) labels");
    EnergyLevel lv;
    lv.kg = base.hbar * base.mc2 * (2.0 * (w1 + w2) * j.value() + 2.0 * radical_su2(w1, w2) * mu.value());
    lv.E = energy_from_kg(lv.kg, base, b);
    lv.branch = b;
    lv.inner = mu.twice() >= 0 ? InnerSign::Plus : InnerSign::Minus;
    const int m_n = std::abs(mu.twice());
    lv.qn = {(j.twice() - m_n) / 2, m_n};
    return lv;
}

/// The printed coupled-oscillator closed form, sqrt(ħ(2(ω₁+ω₂)j + R mu) + 1).
inline double coupled_osc_energy_as_printed(double w1, double w2, HalfInt j, HalfInt mu, Branch b,
                                            const ModelParams& base) {
    const double rad = base.hbar * (2.0 * (w1 + w2) * j.value() + radical_su2(w1, w2) * mu.value()) + 1.0;
    if (rad < 0.0) throw DomainError("negative radicand");
    return sign_of(b) * base.mc2 * std::sqrt(rad);
}

// ---------------------------------------------------------------------------
// Non-relativistic limits

struct LimitReport {
    double scale = 0.0;
    double mc2 = 0.0;
    double eps_model = 0.0;     // E − mc²
    double eps_analytic = 0.0;  // exact non-relativistic eigenvalue plus offset
    double offset = 0.0;        // constant separating the two Hamiltonians (ħω₂ for the amplifier)
    double rel_error = 0.0;
};

/// Non-relativistic two-mode Hamiltonians of the amplifier and coupled-oscillator cases.
inline BosonExpr ndpa_hamiltonian(double w1, double w2, double phase, double hbar) {
    using namespace ops;
    const double c = std::sqrt(w1 * w2);
    return hbar * (w1 * num_a() + w2 * num_b() +
                   kI * c * (std::exp(-2.0 * kI * phase) * (adag() * bdag()) - std::exp(2.0 * kI * phase) * (a() * b())));
}

inline BosonExpr coupled_osc_hamiltonian(double w1, double w2, double hbar) {
    using namespace ops;
    return hbar * (w1 * num_a() + w2 * num_b() + std::sqrt(w1 * w2) * (bdag() * a() + adag() * b()));
}

/// Compares E − mc² of the relativistic level (n_l, m_n, inner) with the matching eigenvalue of the
/// non-relativistic Hamiltonian at mc² = scale·ħω̄, ω̄ = (ω₁+ω₂)/2.
inline LimitReport nonrelativistic_limit_check(const SpecialCase& c, QuantumNumbers q, InnerSign inner, double scale,
                                               double hbar = 1.0, int cutoff = 120) {
    if (c.kind != SpecialCaseKind::NDPA && c.kind != SpecialCaseKind::CoupledOscillators)
        throw DomainError("non-relativistic limits exist for the amplifier and coupled-oscillator cases");
    if (c.omega1 < 0.0 || c.omega2 < 0.0) throw DomainError("frequencies must be nonnegative");
    if (!(scale > 0.0)) throw DomainError("scale must be positive");
    check_quantum_numbers(q.n_l, q.m_n);
    const double wbar = 0.5 * (c.omega1 + c.omega2);
    LimitReport r;
    r.scale = scale;
    r.mc2 = wbar > 0.0 ? scale * hbar * wbar : scale;
    ModelParams base;
    base.mc2 = r.mc2;
    base.hbar = hbar;
    const Preset preset = special_case_params(c, base);

    double eps_nr = 0.0;
    if (c.kind == SpecialCaseKind::NDPA) {
        const EnergyLevel lv = analytic_energy_su11(preset.params, q.n_l, q.m_n, Branch::Plus);
        r.eps_model = kinetic_from_kg(lv.kg, preset.params);
        r.offset = hbar * c.omega2;
        const auto h = ndpa_hamiltonian(c.omega1, c.omega2, c.phase, hbar);
        auto make = [&](int cut) {
            return materialize(h, SectorBasis(ChargeKind::DifferenceNd, -q.m_n, cut)).to_dense();
        };
        eps_nr = certified_lowest(make, cutoff, static_cast<std::size_t>(q.n_l + 1), hbar * std::max(wbar, 1e-300),
                                  1e-12).values.back();
    } else {
        const EnergyLevel lv = analytic_energy_su2(preset.params, q.n_l, q.m_n, Branch::Plus, inner);
        r.eps_model = kinetic_from_kg(lv.kg, preset.params);
        const int n = 2 * q.n_l + q.m_n;
        const SectorBasis s(ChargeKind::SumNs, n, n);
        const Eigen::VectorXd ev = hermitian_eigenvalues(materialize(coupled_osc_hamiltonian(c.omega1, c.omega2, hbar), s).to_dense());
        // sorted index = j + mu' with mu' = ±m_n/2
        const int idx = q.n_l + (lv.inner == InnerSign::Minus ? 0 : q.m_n);
        eps_nr = ev(idx);
    }
    r.eps_analytic = eps_nr + r.offset;
    const double denom = std::max(std::abs(r.eps_analytic), hbar * wbar);
    const double diff = std::abs(r.eps_model - r.eps_analytic);
    r.rel_error = denom > 0.0 ? diff / denom : (diff == 0.0 ? 0.0 : INFINITY);
    return r;
}

/// Least-squares slope of log(rel_error) against log(scale).
inline double limit_decay_exponent(const std::vector<LimitReport>& reports) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(reports.size());
    if (reports.size() < 2) throw DomainError("need at least two scales for a fit");
    for (const auto& r : reports) {
        if (!(r.rel_error > 0.0)) throw DomainError("relative error must be positive for a log fit");
        const double x = std::log(r.scale), y = std::log(r.rel_error);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace twomode_jc
