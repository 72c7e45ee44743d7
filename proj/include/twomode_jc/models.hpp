#pragma once

// The two-mode JC-AJC and JC-JC Dirac-type Hamiltonians, their uncoupled
// Klein-Gordon operators and the spinor component relation.

#include "core.hpp"
#include "fock.hpp"
#include "liealg.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace twomode_jc {

struct ModelParams {
    cplx g{};
    cplx f{};
    double mc2 = 1.0;
    double hbar = 1.0;

    void validate() const {
        if (!(mc2 > 0.0) || !std::isfinite(mc2)) throw DomainError("mc2 must be positive");
        if (!(hbar > 0.0) || !std::isfinite(hbar)) throw DomainError("hbar must be positive");
        if (!std::isfinite(std::abs(g)) || !std::isfinite(std::abs(f))) throw DomainError("couplings must be finite");
    }
};

enum class ModelKind : std::uint8_t { JC_AJC, JC_JC };
enum class Component : std::uint8_t { Upper, Lower };

inline const char* to_string(ModelKind k) { return k == ModelKind::JC_AJC ? "jc-ajc" : "jc-jc"; }
inline const char* to_string(Component c) { return c == Component::Upper ? "upper" : "lower"; }

inline Algebra algebra_of(ModelKind k) { return k == ModelKind::JC_AJC ? Algebra::SU11 : Algebra::SU2; }
inline ChargeKind charge_kind_of(ModelKind k) {
    return k == ModelKind::JC_AJC ? ChargeKind::DifferenceNd : ChargeKind::SumNs;
}

/// Upper-right block: hbar(g a† + f b) for JC-AJC, hbar(g a† + f b†) for JC-JC.
inline BosonExpr coupling_upper(ModelKind k, const ModelParams& p) {
    using namespace ops;
    return p.hbar * (p.g * adag() + p.f * (k == ModelKind::JC_AJC ? b() : bdag()));
}

/// Lower-left block: hbar(g* a + f* b†) for JC-AJC, hbar(g* a + f* b) for JC-JC.
inline BosonExpr coupling_lower(ModelKind k, const ModelParams& p) {
    using namespace ops;
    return p.hbar * (std::conj(p.g) * a() + std::conj(p.f) * (k == ModelKind::JC_AJC ? bdag() : b()));
}

/// Normal-ordered Klein-Gordon operator of one spinor component; its spectrum is E² − m²c⁴.
inline BosonExpr kg_expr(ModelKind k, Component c, const ModelParams& p) {
    using namespace ops;
    const double g2 = std::norm(p.g), f2 = std::norm(p.f);
    const cplx fgc = p.f * std::conj(p.g);  // f g*
    const cplx fcg = std::conj(fgc);        // f* g
    const double h2 = p.hbar * p.hbar;
    BosonExpr e = g2 * num_a() + f2 * num_b();
    if (k == ModelKind::JC_AJC) {
        e = e + fgc * (a() * b()) + fcg * (adag() * bdag());
        e = e + BosonExpr::scalar(c == Component::Upper ? f2 : g2);
    } else if (c == Component::Upper) {
        e = e + fgc * (bdag() * a()) + fcg * (adag() * b());
    } else {
        e = e + fgc * (bdag() * a()) + fcg * (adag() * b()) + BosonExpr::scalar(g2 + f2);
    }
    return h2 * e;
}

inline void check_sector_kind(ModelKind k, const SectorBasis& s) {
    if (s.charge_kind() != charge_kind_of(k))
        throw SectorMismatchError(std::string(to_string(k)) + " conserves " + to_string(charge_kind_of(k)) +
                                  ", sector is labelled by " + to_string(s.charge_kind()));
}

inline OperatorMatrix build_kg_operator(ModelKind k, Component c, const ModelParams& p, const FockBasis& basis) {
    p.validate();
    return materialize(kg_expr(k, c, p), basis).assert_hermitian();
}

inline OperatorMatrix build_kg_operator(ModelKind k, Component c, const ModelParams& p, const SectorBasis& sector) {
    p.validate();
    check_sector_kind(k, sector);
    return materialize(kg_expr(k, c, p), sector).assert_hermitian();
}

/// Rectangular matrix of an expression mapping `from` into `to`; images outside `to` raise LeakageError.
template <FockSpace From, FockSpace To>
Eigen::SparseMatrix<cplx> materialize_map(const BosonExpr& expr, const From& from, const To& to) {
    std::vector<Eigen::Triplet<cplx>> trips;
    for (std::size_t col = 0; col < from.size(); ++col) {
        const FockState s = from.state(col);
        for (const auto& term : expr.terms()) {
            if (term.coeff == cplx{}) continue;
            const auto img = apply_word(term.word, s, from.max_quanta());
            if (!img) continue;
            const auto row = to.index_of(img->second.na, img->second.nb);
            if (!row) throw LeakageError("operator image lies outside the target space");
            trips.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col), term.coeff * img->first);
        }
    }
    Eigen::SparseMatrix<cplx> m(static_cast<Eigen::Index>(to.size()), static_cast<Eigen::Index>(from.size()));
    m.setFromTriplets(trips.begin(), trips.end());
    return m;
}

/// Full 2·dim Hamiltonian [[mc², U], [L, −mc²]] on the two-mode basis; upper component first.
inline OperatorMatrix build_full_hamiltonian(ModelKind k, const ModelParams& p, const FockBasis& basis) {
    p.validate();
    const auto n = static_cast<Eigen::Index>(basis.size());
    const auto up = materialize(coupling_upper(k, p), basis).to_sparse();
    const auto lo = materialize(coupling_lower(k, p), basis).to_sparse();
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(static_cast<std::size_t>(2 * n + up.nonZeros() + lo.nonZeros()));
    for (Eigen::Index i = 0; i < n; ++i) {
        t.emplace_back(i, i, p.mc2);
        t.emplace_back(n + i, n + i, -p.mc2);
    }
    for (Eigen::Index c = 0; c < n; ++c) {
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(up, c); it; ++it) t.emplace_back(it.row(), n + c, it.value());
        for (Eigen::SparseMatrix<cplx>::InnerIterator it(lo, c); it; ++it) t.emplace_back(n + it.row(), c, it.value());
    }
    return OperatorMatrix::from_triplets(2 * n, t).assert_hermitian();
}

/// Charge of the lower component that couples to an upper-component sector.
inline int partner_charge(ModelKind k, int upper_charge) {
    return k == ModelKind::JC_AJC ? upper_charge + 1 : upper_charge - 1;
}

/// Block of the full Hamiltonian coupling one upper sector to its partner lower sector.
/// Rows and columns list the upper sector's states first, then the lower sector's.
inline Eigen::MatrixXcd build_full_block(ModelKind k, const ModelParams& p, int upper_charge, int cutoff) {
    p.validate();
    const SectorBasis su(charge_kind_of(k), upper_charge, cutoff);
    const SectorBasis sl(charge_kind_of(k), partner_charge(k, upper_charge), cutoff);
    const auto nu = static_cast<Eigen::Index>(su.size()), nl = static_cast<Eigen::Index>(sl.size());
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(nu + nl, nu + nl);
    h.topLeftCorner(nu, nu).diagonal().setConstant(p.mc2);
    h.bottomRightCorner(nl, nl).diagonal().setConstant(-p.mc2);
    if (nu > 0 && nl > 0) {
        h.topRightCorner(nu, nl) = Eigen::MatrixXcd(materialize_map(coupling_upper(k, p), sl, su));
        h.bottomLeftCorner(nl, nu) = Eigen::MatrixXcd(materialize_map(coupling_lower(k, p), su, sl));
    }
    return h;
}

/// |Ψ₂⟩ = L|Ψ₁⟩/(E + mc²), unnormalized, on the full basis.
inline Eigen::VectorXcd lower_from_upper(ModelKind k, const ModelParams& p, double energy,
                                         const Eigen::VectorXcd& upper, const FockBasis& basis) {
    p.validate();
    const double denom = energy + p.mc2;
    if (std::abs(denom) <= 1e-14 * p.mc2)
        throw SingularBranchError("E = -mc2: the lower component cannot be reconstructed from the upper one");
    if (upper.size() != static_cast<Eigen::Index>(basis.size()))
        throw DimensionMismatchError("upper component does not match the basis");
    return materialize(coupling_lower(k, p), basis).apply(upper) / denom;
}

}  // namespace twomode_jc
