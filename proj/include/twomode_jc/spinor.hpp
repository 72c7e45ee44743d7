#pragma once

// Eigenspinors of the full Hamiltonians: the upper component is a displaced tilted
// eigenstate, the lower one follows from the coupled equations.

#include "core.hpp"
#include "displace.hpp"
#include "models.hpp"
#include "spectra.hpp"

#include <cmath>
#include <string>

namespace twomode_jc {

struct SpinorState {
    Eigen::VectorXcd upper;  // over the full two-mode basis
    Eigen::VectorXcd lower;
    double energy = 0.0;
    Branch branch = Branch::Plus;
    InnerSign inner = InnerSign::NA;
    QuantumNumbers qn;
    bool edge = false;                   // lower component vanishes identically
    bool partner_missing = false;  // shifted partner labels leave the physical domain

    double norm2() const { return upper.squaredNorm() + lower.squaredNorm(); }
};

/// Fock state in the tilted frame that carries the level (n_l, m_n).
inline FockState tilted_state(ModelKind k, QuantumNumbers q, InnerSign inner) {
    if (k == ModelKind::JC_JC && inner == InnerSign::Minus) return {q.n_l, q.n_l + q.m_n};
    return physical_state(q);
}

inline SpinorState build_spinor(ModelKind k, const ModelParams& p, QuantumNumbers q, Branch b, const FockBasis& basis,
                                InnerSign inner = InnerSign::Plus) {
    p.validate();
    check_quantum_numbers(q.n_l, q.m_n);
    if (q.m_n == 0) inner = InnerSign::NA;
    if (k == ModelKind::JC_AJC) inner = InnerSign::NA;
    const EnergyLevel lv = analytic_energy(k, p, q.n_l, q.m_n, b, inner);
    const TiltingParams t = tilting_parameters(k, p);

    const FockState ts = tilted_state(k, q, inner);
    if (ts.na > basis.cutoff() || ts.nb > basis.cutoff())
        throw DomainError("level (n_l=" + std::to_string(q.n_l) + ", m_n=" + std::to_string(q.m_n) +
                          ") does not fit below cutoff " + std::to_string(basis.cutoff()));
    const SectorBasis sector(charge_kind_of(k), charge_of(charge_kind_of(k), ts), basis.cutoff());
    const auto idx = static_cast<Eigen::Index>(*sector.index_of(ts.na, ts.nb));
    const Eigen::VectorXcd col = displacement_direct(algebra_of(k), t.xi, sector).col(idx);

    SpinorState out;
    out.energy = lv.E;
    out.branch = b;
    out.inner = inner;
    out.qn = q;
    out.partner_missing = k == ModelKind::JC_AJC ? q.m_n < 2 : q.n_l == 0;
    out.upper = embed(col, sector);

    const double scale = std::max(1.0, p.hbar * p.hbar * (std::norm(p.f) + std::norm(p.g)));
    if (std::abs(lv.kg) <= 1e-12 * scale) {
        if (b == Branch::Minus)
            throw EdgeStateError("E = -mc2 level has no lower component relation; no eigenspinor is built");
        out.edge = true;
        out.lower = Eigen::VectorXcd::Zero(out.upper.size());
        out.upper.normalize();
        return out;
    }
    out.lower = lower_from_upper(k, p, lv.E, out.upper, basis);
    const double n = std::sqrt(out.norm2());
    out.upper /= n;
    out.lower /= n;
    return out;
}

/// ‖H|Ψ⟩ − E|Ψ⟩‖ with the full Hamiltonian on the same basis.
inline double spinor_residual(const OperatorMatrix& h_full, const SpinorState& s) {
    Eigen::VectorXcd v(s.upper.size() + s.lower.size());
    v << s.upper, s.lower;
    return (h_full.apply(v) - s.energy * v).norm();
}

inline double spinor_residual(ModelKind k, const ModelParams& p, const SpinorState& s, const FockBasis& basis) {
    return spinor_residual(build_full_hamiltonian(k, p, basis), s);
}

}  // namespace twomode_jc
