#pragma once

// Truncated two-mode bosonic Fock space.
//
// States |n_a, n_b> with 0 <= n_a, n_b <= cutoff, ordered lexicographically.
// Raising past the cutoff maps to zero (hard truncation); this holds at every
// intermediate step of an operator word, so a materialized word equals the
// product of the truncated ladder matrices.

#include "core.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace twomode_jc {

struct FockState {
    int na = 0;
    int nb = 0;
    friend constexpr auto operator<=>(const FockState&, const FockState&) = default;
};

class FockBasis {
public:
    explicit FockBasis(int cutoff) : cutoff_(cutoff) {
        if (cutoff < 0) throw DomainError("cutoff must be nonnegative");
        states_.reserve(static_cast<std::size_t>(cutoff + 1) * (cutoff + 1));
        for (int na = 0; na <= cutoff; ++na)
            for (int nb = 0; nb <= cutoff; ++nb) states_.push_back({na, nb});
    }

    int cutoff() const { return cutoff_; }
    int max_quanta() const { return cutoff_; }
    std::size_t size() const { return states_.size(); }
    const FockState& state(std::size_t i) const { return states_[i]; }
    std::span<const FockState> states() const { return states_; }

    std::optional<std::size_t> index_of(int na, int nb) const {
        if (na < 0 || nb < 0 || na > cutoff_ || nb > cutoff_) return std::nullopt;
        return static_cast<std::size_t>(na) * (cutoff_ + 1) + nb;
    }

private:
    int cutoff_;
    std::vector<FockState> states_;
};

inline FockBasis build_basis(int cutoff) { return FockBasis(cutoff); }

enum class ChargeKind : std::uint8_t { DifferenceNd, SumNs };

inline const char* to_string(ChargeKind k) { return k == ChargeKind::DifferenceNd ? "Nd" : "Ns"; }

/// N_d = n_b - n_a, N_s = n_a + n_b.
inline int charge_of(ChargeKind kind, FockState s) {
    return kind == ChargeKind::DifferenceNd ? s.nb - s.na : s.na + s.nb;
}

/// States of one conserved-charge eigenspace of a truncated basis.
class SectorBasis {
public:
    SectorBasis(ChargeKind kind, int value, int parent_cutoff)
        : kind_(kind), value_(value), cutoff_(parent_cutoff) {
        if (parent_cutoff < 0) throw DomainError("cutoff must be nonnegative");
        for (int na = 0; na <= parent_cutoff; ++na) {
            const int nb = kind == ChargeKind::DifferenceNd ? na + value : value - na;
            if (nb < 0 || nb > parent_cutoff) continue;
            states_.push_back({na, nb});
            parent_indices_.push_back(static_cast<std::size_t>(na) * (parent_cutoff + 1) + nb);
        }
    }

    ChargeKind charge_kind() const { return kind_; }
    int charge_value() const { return value_; }
    int parent_cutoff() const { return cutoff_; }
    int max_quanta() const { return cutoff_; }
    std::size_t size() const { return states_.size(); }
    const FockState& state(std::size_t i) const { return states_[i]; }
    std::span<const FockState> states() const { return states_; }
    std::span<const std::size_t> parent_indices() const { return parent_indices_; }

    std::optional<std::size_t> index_of(int na, int nb) const {
        if (na < 0 || nb < 0 || na > cutoff_ || nb > cutoff_) return std::nullopt;
        if (charge_of(kind_, {na, nb}) != value_) return std::nullopt;
        // states are ordered by n_a and n_a determines n_b within a sector
        const int first = states_.empty() ? 0 : states_.front().na;
        return static_cast<std::size_t>(na - first);
    }

    bool contains_charge(FockState s) const { return charge_of(kind_, s) == value_; }

private:
    ChargeKind kind_;
    int value_;
    int cutoff_;
    std::vector<FockState> states_;
    std::vector<std::size_t> parent_indices_;
};

inline SectorBasis make_sector(ChargeKind kind, int value, int cutoff) { return SectorBasis(kind, value, cutoff); }

/// Sectors partitioning the basis, ordered by increasing charge.
inline std::vector<SectorBasis> sector_decompose(const FockBasis& basis, ChargeKind kind) {
    std::vector<SectorBasis> out;
    const int c = basis.cutoff();
    const int lo = kind == ChargeKind::DifferenceNd ? -c : 0;
    const int hi = kind == ChargeKind::DifferenceNd ? c : 2 * c;
    for (int v = lo; v <= hi; ++v) out.emplace_back(kind, v, c);
    return out;
}

template <class S>
concept FockSpace = requires(const S& s, int a, int b, std::size_t i) {
    { s.size() } -> std::convertible_to<std::size_t>;
    { s.state(i) } -> std::convertible_to<FockState>;
    { s.index_of(a, b) } -> std::same_as<std::optional<std::size_t>>;
    { s.max_quanta() } -> std::convertible_to<int>;
};

/// Indices of states with n_a, n_b <= max_quanta - margin.
template <FockSpace S>
std::vector<Eigen::Index> interior_indices(const S& space, int margin) {
    std::vector<Eigen::Index> out;
    const int top = space.max_quanta() - margin;
    for (std::size_t i = 0; i < space.size(); ++i) {
        const FockState s = space.state(i);
        if (s.na <= top && s.nb <= top) out.push_back(static_cast<Eigen::Index>(i));
    }
    return out;
}

// ---------------------------------------------------------------------------

/// Complex matrix of an operator on a chosen basis; dense below kDenseLimit, sparse above.
class OperatorMatrix {
public:
    using Dense = Eigen::MatrixXcd;
    using Sparse = Eigen::SparseMatrix<cplx>;
    using Index = Eigen::Index;

    static constexpr Index kDenseLimit = 2048;

    OperatorMatrix() = default;
    explicit OperatorMatrix(Dense m) : m_(std::move(m)) {
        if (dense().rows() != dense().cols()) throw DimensionMismatchError("operator matrix must be square");
    }
    explicit OperatorMatrix(Sparse m) : m_(std::move(m)) {
        if (sparse().rows() != sparse().cols()) throw DimensionMismatchError("operator matrix must be square");
    }

    static OperatorMatrix from_triplets(Index dim, const std::vector<Eigen::Triplet<cplx>>& trips) {
        Sparse s(dim, dim);
        s.setFromTriplets(trips.begin(), trips.end());
        if (dim <= kDenseLimit) return OperatorMatrix(Dense(s));
        s.makeCompressed();
        return OperatorMatrix(std::move(s));
    }

    static OperatorMatrix zero(Index dim) { return from_triplets(dim, {}); }

    static OperatorMatrix identity(Index dim) {
        std::vector<Eigen::Triplet<cplx>> t;
        t.reserve(static_cast<std::size_t>(dim));
        for (Index i = 0; i < dim; ++i) t.emplace_back(i, i, 1.0);
        return from_triplets(dim, t);
    }

    Index dim() const {
        return std::visit([](const auto& m) { return m.rows(); }, m_);
    }
    bool is_sparse() const { return std::holds_alternative<Sparse>(m_); }
    const Dense& dense() const { return std::get<Dense>(m_); }
    const Sparse& sparse() const { return std::get<Sparse>(m_); }

    Dense to_dense() const { return is_sparse() ? Dense(sparse()) : dense(); }
    Sparse to_sparse() const { return is_sparse() ? sparse() : Sparse(dense().sparseView()); }

    cplx coeff(Index r, Index c) const { return is_sparse() ? sparse().coeff(r, c) : dense()(r, c); }

    Eigen::VectorXcd apply(const Eigen::Ref<const Eigen::VectorXcd>& v) const {
        if (v.size() != dim()) throw DimensionMismatchError("vector length does not match operator dimension");
        if (is_sparse()) return sparse() * v;
        return dense() * v;
    }

    OperatorMatrix adjoint() const {
        if (is_sparse()) return OperatorMatrix(Sparse(sparse().adjoint()));
        return OperatorMatrix(Dense(dense().adjoint()));
    }

    double max_abs() const {
        if (!is_sparse()) return dim() == 0 ? 0.0 : dense().cwiseAbs().maxCoeff();
        double m = 0.0;
        for (Index k = 0; k < sparse().outerSize(); ++k)
            for (Sparse::InnerIterator it(sparse(), k); it; ++it) m = std::max(m, std::abs(it.value()));
        return m;
    }

    /// max |M - M^dagger| elementwise.
    double hermiticity_residual() const {
        if (!is_sparse()) return dim() == 0 ? 0.0 : (dense() - dense().adjoint()).cwiseAbs().maxCoeff();
        return OperatorMatrix(Sparse(sparse() - Sparse(sparse().adjoint()))).max_abs();
    }

    bool hermitian_flag() const { return hermitian_; }

    /// Verifies Hermiticity relative to the operator's own scale and sets the flag.
    OperatorMatrix& assert_hermitian(double tol = 1e-12) {
        const double res = hermiticity_residual();
        if (res > tol * std::max(1.0, max_abs()))
            throw HermiticityError("operator is not Hermitian: residual " + std::to_string(res));
        hermitian_ = true;
        return *this;
    }

    /// Dense sub-block selected by row and column indices.
    Dense block(std::span<const Index> rows, std::span<const Index> cols) const {
        Dense out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
        if (!is_sparse()) {
            for (std::size_t i = 0; i < rows.size(); ++i)
                for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = dense()(rows[i], cols[j]);
            return out;
        }
        out.setZero();
        std::vector<Index> row_pos(static_cast<std::size_t>(dim()), -1);
        for (std::size_t i = 0; i < rows.size(); ++i) row_pos[rows[i]] = static_cast<Index>(i);
        for (std::size_t j = 0; j < cols.size(); ++j)
            for (Sparse::InnerIterator it(sparse(), cols[j]); it; ++it)
                if (row_pos[it.row()] >= 0) out(row_pos[it.row()], static_cast<Index>(j)) = it.value();
        return out;
    }

    friend OperatorMatrix operator+(const OperatorMatrix& x, const OperatorMatrix& y) {
        check_same(x, y);
        if (x.is_sparse() && y.is_sparse()) return OperatorMatrix(Sparse(x.sparse() + y.sparse()));
        return OperatorMatrix(Dense(x.to_dense() + y.to_dense()));
    }
    friend OperatorMatrix operator-(const OperatorMatrix& x, const OperatorMatrix& y) {
        check_same(x, y);
        if (x.is_sparse() && y.is_sparse()) return OperatorMatrix(Sparse(x.sparse() - y.sparse()));
        return OperatorMatrix(Dense(x.to_dense() - y.to_dense()));
    }
    friend OperatorMatrix operator*(const OperatorMatrix& x, const OperatorMatrix& y) {
        check_same(x, y);
        if (x.is_sparse() && y.is_sparse()) return OperatorMatrix(Sparse((x.sparse() * y.sparse()).pruned()));
        return OperatorMatrix(Dense(x.to_dense() * y.to_dense()));
    }
    friend OperatorMatrix operator*(cplx s, const OperatorMatrix& x) {
        if (x.is_sparse()) return OperatorMatrix(Sparse(s * x.sparse()));
        return OperatorMatrix(Dense(s * x.dense()));
    }

private:
    static void check_same(const OperatorMatrix& x, const OperatorMatrix& y) {
        if (x.dim() != y.dim())
            throw DimensionMismatchError("operator dimensions differ: " + std::to_string(x.dim()) + " vs " +
                                         std::to_string(y.dim()));
    }

    std::variant<Dense, Sparse> m_{Dense()};
    bool hermitian_ = false;
};

/// X Y - Y X.
inline OperatorMatrix commutator(const OperatorMatrix& x, const OperatorMatrix& y) { return x * y - y * x; }

// ---------------------------------------------------------------------------
// Symbolic operator words

enum class Ladder : std::uint8_t { A, Adag, B, Bdag };

/// coeff * word, where word[0] is the leftmost factor (acts last).
struct BosonTerm {
    cplx coeff;
    std::vector<Ladder> word;
};

class BosonExpr {
public:
    BosonExpr() = default;
    static BosonExpr scalar(cplx c) { BosonExpr e; e.terms_.push_back({c, {}}); return e; }
    static BosonExpr ladder(Ladder l) { BosonExpr e; e.terms_.push_back({1.0, {l}}); return e; }

    const std::vector<BosonTerm>& terms() const { return terms_; }

    friend BosonExpr operator+(BosonExpr x, const BosonExpr& y) {
        x.terms_.insert(x.terms_.end(), y.terms_.begin(), y.terms_.end());
        return x;
    }
    friend BosonExpr operator-(BosonExpr x, const BosonExpr& y) { return std::move(x) + (-1.0) * y; }
    friend BosonExpr operator*(cplx s, BosonExpr x) {
        for (auto& t : x.terms_) t.coeff *= s;
        return x;
    }
    friend BosonExpr operator*(const BosonExpr& x, const BosonExpr& y) {
        BosonExpr out;
        for (const auto& tx : x.terms_)
            for (const auto& ty : y.terms_) {
                BosonTerm t{tx.coeff * ty.coeff, tx.word};
                t.word.insert(t.word.end(), ty.word.begin(), ty.word.end());
                out.terms_.push_back(std::move(t));
            }
        return out;
    }

private:
    std::vector<BosonTerm> terms_;
};

namespace ops {
inline BosonExpr one() { return BosonExpr::scalar(1.0); }
inline BosonExpr a() { return BosonExpr::ladder(Ladder::A); }
inline BosonExpr adag() { return BosonExpr::ladder(Ladder::Adag); }
inline BosonExpr b() { return BosonExpr::ladder(Ladder::B); }
inline BosonExpr bdag() { return BosonExpr::ladder(Ladder::Bdag); }
inline BosonExpr num_a() { return adag() * a(); }
inline BosonExpr num_b() { return bdag() * b(); }
}  // namespace ops

/// Applies a word to |na,nb>; nullopt if the image vanishes or any step exceeds max_quanta.
inline std::optional<std::pair<double, FockState>> apply_word(std::span<const Ladder> word, FockState s,
                                                              int max_quanta) {
    // squared amplitude is an integer product, exact for the word lengths used here
    double amp2 = 1.0;
    for (auto it = word.rbegin(); it != word.rend(); ++it) {
        switch (*it) {
            case Ladder::A:
                if (s.na == 0) return std::nullopt;
                amp2 *= s.na;
                --s.na;
                break;
            case Ladder::Adag:
                if (s.na >= max_quanta) return std::nullopt;
                ++s.na;
                amp2 *= s.na;
                break;
            case Ladder::B:
                if (s.nb == 0) return std::nullopt;
                amp2 *= s.nb;
                --s.nb;
                break;
            case Ladder::Bdag:
                if (s.nb >= max_quanta) return std::nullopt;
                ++s.nb;
                amp2 *= s.nb;
                break;
        }
    }
    return std::pair{std::sqrt(amp2), s};
}

/// Matrix of an expression on a basis or sector. On a sector, an image with a
/// different charge raises LeakageError.
template <FockSpace S>
OperatorMatrix materialize(const BosonExpr& expr, const S& space) {
    std::vector<Eigen::Triplet<cplx>> trips;
    for (std::size_t col = 0; col < space.size(); ++col) {
        const FockState s = space.state(col);
        for (const auto& term : expr.terms()) {
            if (term.coeff == cplx{}) continue;
            const auto img = apply_word(term.word, s, space.max_quanta());
            if (!img) continue;
            const auto row = space.index_of(img->second.na, img->second.nb);
            if (!row) throw LeakageError("operator maps a sector state outside its charge sector");
            trips.emplace_back(static_cast<Eigen::Index>(*row), static_cast<Eigen::Index>(col), term.coeff * img->first);
        }
    }
    return OperatorMatrix::from_triplets(static_cast<Eigen::Index>(space.size()), trips);
}

enum class Mode : std::uint8_t { A, B };
enum class LadderKind : std::uint8_t { Lower, Raise };

inline OperatorMatrix ladder_op(Mode mode, LadderKind kind, const FockBasis& basis) {
    const Ladder l = mode == Mode::A ? (kind == LadderKind::Lower ? Ladder::A : Ladder::Adag)
                                     : (kind == LadderKind::Lower ? Ladder::B : Ladder::Bdag);
    return materialize(BosonExpr::ladder(l), basis);
}

/// Largest matrix element coupling the sector to its complement (either direction).
inline double sector_leakage(const OperatorMatrix& op, const SectorBasis& sector) {
    const auto n = op.dim();
    std::vector<char> inside(static_cast<std::size_t>(n), 0);
    for (auto p : sector.parent_indices()) inside[p] = 1;
    double leak = 0.0;
    if (op.is_sparse()) {
        const auto& s = op.sparse();
        for (Eigen::Index k = 0; k < s.outerSize(); ++k)
            for (OperatorMatrix::Sparse::InnerIterator it(s, k); it; ++it)
                if (inside[it.row()] != inside[it.col()]) leak = std::max(leak, std::abs(it.value()));
        return leak;
    }
    const auto& d = op.dense();
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r)
            if (inside[r] != inside[c]) leak = std::max(leak, std::abs(d(r, c)));
    return leak;
}

/// Restriction of a full-basis operator to a sector; the operator must not mix sectors.
inline OperatorMatrix project_operator(const OperatorMatrix& op, const SectorBasis& sector, double tol = 1e-12) {
    const auto parent_dim = static_cast<Eigen::Index>(sector.parent_cutoff() + 1) * (sector.parent_cutoff() + 1);
    if (op.dim() != parent_dim) throw DimensionMismatchError("operator is not defined on the sector's parent basis");
    const double leak = sector_leakage(op, sector);
    if (leak > tol * std::max(1.0, op.max_abs()))
        throw LeakageError("operator mixes charge sectors: leakage " + std::to_string(leak));
    std::vector<Eigen::Index> idx(sector.parent_indices().begin(), sector.parent_indices().end());
    auto blk = op.block(idx, idx);
    if (static_cast<Eigen::Index>(idx.size()) <= OperatorMatrix::kDenseLimit) return OperatorMatrix(std::move(blk));
    return OperatorMatrix(OperatorMatrix::Sparse(blk.sparseView()));
}

/// Embeds sector vectors back into the parent basis.
inline Eigen::VectorXcd embed(const Eigen::VectorXcd& v, const SectorBasis& sector) {
    const auto parent_dim = static_cast<Eigen::Index>(sector.parent_cutoff() + 1) * (sector.parent_cutoff() + 1);
    Eigen::VectorXcd out = Eigen::VectorXcd::Zero(parent_dim);
    const auto idx = sector.parent_indices();
    for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(idx[i])) = v(static_cast<Eigen::Index>(i));
    return out;
}

}  // namespace twomode_jc
