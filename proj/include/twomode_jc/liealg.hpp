#pragma once

// SU(1,1) and SU(2) generators in the two-mode Jordan-Schwinger realization,
// closure checks and the mapping between group labels and physical quantum numbers.

#include "core.hpp"
#include "fock.hpp"

#include <algorithm>
#include <cmath>

namespace twomode_jc {

namespace ops {
// SU(1,1)
inline BosonExpr k0() { return 0.5 * (num_a() + num_b() + one()); }
inline BosonExpr k_plus() { return adag() * bdag(); }
inline BosonExpr k_minus() { return b() * a(); }
// SU(2)
inline BosonExpr j0() { return 0.5 * (num_a() - num_b()); }
inline BosonExpr j_plus() { return adag() * b(); }
inline BosonExpr j_minus() { return bdag() * a(); }
// charges
inline BosonExpr n_d() { return num_b() - num_a(); }
inline BosonExpr n_s() { return num_a() + num_b(); }
}  // namespace ops

/// G0, G+, G- of one algebra on one space.
struct GeneratorSet {
    Algebra algebra;
    OperatorMatrix zero;
    OperatorMatrix plus;
    OperatorMatrix minus;
};

template <FockSpace S>
GeneratorSet su11_generators(const S& space) {
    return {Algebra::SU11, materialize(ops::k0(), space), materialize(ops::k_plus(), space),
            materialize(ops::k_minus(), space)};
}

template <FockSpace S>
GeneratorSet su2_generators(const S& space) {
    return {Algebra::SU2, materialize(ops::j0(), space), materialize(ops::j_plus(), space),
            materialize(ops::j_minus(), space)};
}

template <FockSpace S>
GeneratorSet generators(Algebra alg, const S& space) {
    return alg == Algebra::SU11 ? su11_generators(space) : su2_generators(space);
}

inline Algebra algebra_of(ChargeKind k) { return k == ChargeKind::DifferenceNd ? Algebra::SU11 : Algebra::SU2; }
inline ChargeKind charge_kind_of(Algebra a) { return a == Algebra::SU11 ? ChargeKind::DifferenceNd : ChargeKind::SumNs; }

/// SU(1,1): K0^2 - (K+K- + K-K+)/2.  SU(2): J0^2 + (J+J- + J-J+)/2.
inline OperatorMatrix casimir(const GeneratorSet& g) {
    const OperatorMatrix sym = g.plus * g.minus + g.minus * g.plus;
    const cplx s = g.algebra == Algebra::SU11 ? -0.5 : 0.5;
    return g.zero * g.zero + s * sym;
}

template <FockSpace S>
OperatorMatrix number_difference(const S& space) { return materialize(ops::n_d(), space); }

template <FockSpace S>
OperatorMatrix number_sum(const S& space) { return materialize(ops::n_s(), space); }

/// N_d + 1, the operator multiplying the non-SU(1,1) part of the JC-AJC Klein-Gordon operator.
template <FockSpace S>
OperatorMatrix number_difference_plus_one(const S& space) {
    return materialize(ops::n_d() + ops::one(), space);
}

/// Largest residual of each defining identity, evaluated on interior states only.
struct AlgebraReport {
    double raise = 0.0;           // [G0, G+] - G+
    double lower = 0.0;           // [G0, G-] + G-
    double ladder = 0.0;          // [G-, G+] - 2K0   or   [J+, J-] - 2J0
    double adjoint = 0.0;         // G+^dagger - G-
    double casimir_commute = 0.0; // max over [C, G0], [C, G+], [C, G-]
    double casimir_scale = 1.0;   // max |C| times max |G| on the interior
    int margin = 0;
    std::size_t interior_states = 0;

    /// Worst defect of the commutation relations themselves.
    double commutation() const { return std::max({raise, lower, ladder, adjoint}); }
    /// Casimir defect relative to the size of the products it cancels.
    double casimir_relative() const { return casimir_commute / casimir_scale; }
    double max() const { return std::max(commutation(), casimir_relative()); }
};

namespace detail {
inline double restricted_max(const OperatorMatrix& m, const std::vector<Eigen::Index>& idx) {
    if (idx.empty()) return 0.0;
    return m.block(idx, idx).cwiseAbs().maxCoeff();
}
}  // namespace detail

/// Checks closure on states at least `margin` quanta below the cutoff. The Casimir
/// identities involve one more ladder step and use margin + 1.
template <FockSpace S>
AlgebraReport verify_algebra(const GeneratorSet& gens, const S& space, int margin) {
    if (margin < 0) throw DomainError("interior margin must be nonnegative");
    // the generators have one entry per column; sparse products keep this cheap
    GeneratorSet g = gens;
    for (OperatorMatrix* m : {&g.zero, &g.plus, &g.minus}) *m = OperatorMatrix(m->to_sparse());
    const auto idx = interior_indices(space, margin);
    const auto idx_c = interior_indices(space, margin + 1);
    AlgebraReport r;
    r.margin = margin;
    r.interior_states = idx.size();
    r.raise = detail::restricted_max(commutator(g.zero, g.plus) - g.plus, idx);
    r.lower = detail::restricted_max(commutator(g.zero, g.minus) + g.minus, idx);
    const OperatorMatrix ladder = g.algebra == Algebra::SU11 ? commutator(g.minus, g.plus) : commutator(g.plus, g.minus);
    r.ladder = detail::restricted_max(ladder - 2.0 * g.zero, idx);
    r.adjoint = detail::restricted_max(g.plus.adjoint() - g.minus, idx);
    const OperatorMatrix c = casimir(g);
    r.casimir_scale = std::max(1.0, detail::restricted_max(c, idx) *
                                        std::max({detail::restricted_max(g.zero, idx), detail::restricted_max(g.plus, idx),
                                                  detail::restricted_max(g.minus, idx)}));
    r.casimir_commute = std::max({detail::restricted_max(commutator(c, g.zero), idx_c),
                                  detail::restricted_max(commutator(c, g.plus), idx_c),
                                  detail::restricted_max(commutator(c, g.minus), idx_c)});
    return r;
}

// ---------------------------------------------------------------------------
// Group labels

/// SU(1,1) Bargmann index k and excitation n, with K0 = k + n.
struct Su11Labels {
    HalfInt k;
    int n = 0;
};

/// SU(2) spin j and projection mu.
struct Su2Labels {
    HalfInt j;
    HalfInt mu;
};

/// Fock state carrying physical quantum numbers: |n_l + m_n, n_l>.
inline FockState physical_state(QuantumNumbers q) { return {q.n_l + q.m_n, q.n_l}; }

inline void check_physical(QuantumNumbers q) {
    if (q.n_l < 0 || q.m_n < 0)
        throw DomainError("quantum numbers must be nonnegative (n_l=" + std::to_string(q.n_l) +
                          ", m_n=" + std::to_string(q.m_n) + ")");
}

/// k = (m_n + 1)/2, n = n_l.
inline Su11Labels su11_labels(QuantumNumbers q) {
    check_physical(q);
    return {HalfInt::from_twice(q.m_n + 1), q.n_l};
}

/// j = n_l + m_n/2, mu = m_n/2.
inline Su2Labels su2_labels(QuantumNumbers q) {
    check_physical(q);
    return {HalfInt::from_twice(2 * q.n_l + q.m_n), HalfInt::from_twice(q.m_n)};
}

inline QuantumNumbers physical_from_su11(Su11Labels l) {
    if (l.k.twice() < 1) throw DomainError("Bargmann index must be at least 1/2");
    if (l.n < 0) throw DomainError("SU(1,1) excitation must be nonnegative");
    return {l.n, l.k.twice() - 1};
}

/// Raises NonIntegerError when j - mu is not an integer.
inline QuantumNumbers physical_from_su2(Su2Labels l) {
    if (l.mu.twice() < 0 || l.mu > l.j) throw DomainError("physical states need 0 <= mu <= j");
    return {(l.j - l.mu).as_integer(), l.mu.twice()};
}

/// Labels of a Fock state within its own charge sector.
inline Su11Labels su11_labels_of(FockState s) {
    return {HalfInt::from_twice(std::abs(s.nb - s.na) + 1), std::min(s.na, s.nb)};
}

inline Su2Labels su2_labels_of(FockState s) {
    return {HalfInt::from_twice(s.na + s.nb), HalfInt::from_twice(s.na - s.nb)};
}

}  // namespace twomode_jc
