#pragma once

// Shared vocabulary: scalar aliases, error types and small strong types.

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace twomode_jc {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr cplx kI{0.0, 1.0};

/// Base class of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatchError : Error { using Error::Error; };
struct LeakageError : Error { using Error::Error; };
struct HermiticityError : Error { using Error::Error; };
struct ConvergenceError : Error { using Error::Error; };
struct NotConvergedError : Error { using Error::Error; };
struct NonIntegerError : Error { using Error::Error; };
struct DomainError : Error { using Error::Error; };
struct DegenerateCouplingError : Error { using Error::Error; };
struct SectorMismatchError : Error { using Error::Error; };
struct SingularBranchError : Error { using Error::Error; };
struct EdgeStateError : Error { using Error::Error; };
struct TailError : Error { using Error::Error; };
struct SingularParameterError : Error { using Error::Error; };
struct QuadratureError : Error { using Error::Error; };

enum class Algebra : std::uint8_t { SU11, SU2 };

inline const char* to_string(Algebra a) { return a == Algebra::SU11 ? "su11" : "su2"; }

/// Exact half-integer, stored as twice its value.
class HalfInt {
public:
    constexpr HalfInt() = default;
    static constexpr HalfInt from_twice(int twice) { HalfInt h; h.twice_ = twice; return h; }
    static constexpr HalfInt from_int(int v) { return from_twice(2 * v); }

    constexpr int twice() const { return twice_; }
    constexpr double value() const { return 0.5 * twice_; }
    constexpr bool is_integer() const { return twice_ % 2 == 0; }
    int as_integer() const {
        if (!is_integer()) throw NonIntegerError("half-integer " + std::to_string(value()) + " is not integral");
        return twice_ / 2;
    }

    friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return from_twice(a.twice_ + b.twice_); }
    friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return from_twice(a.twice_ - b.twice_); }
    friend constexpr HalfInt operator-(HalfInt a) { return from_twice(-a.twice_); }
    friend constexpr auto operator<=>(HalfInt a, HalfInt b) = default;

private:
    int twice_ = 0;
};

inline std::string to_string(HalfInt h) {
    return h.is_integer() ? std::to_string(h.twice() / 2) : std::to_string(h.twice()) + "/2";
}

enum class Branch : std::uint8_t { Plus, Minus };
enum class InnerSign : std::uint8_t { Plus, Minus, NA };

inline double sign_of(Branch b) { return b == Branch::Plus ? 1.0 : -1.0; }
inline const char* to_string(Branch b) { return b == Branch::Plus ? "+" : "-"; }
inline const char* to_string(InnerSign s) {
    switch (s) {
        case InnerSign::Plus: return "+";
        case InnerSign::Minus: return "-";
        default: return "na";
    }
}

/// Physical quantum numbers (left chiral radial number, angular number).
struct QuantumNumbers {
    int n_l = 0;
    int m_n = 0;
    friend constexpr bool operator==(QuantumNumbers, QuantumNumbers) = default;
};

}  // namespace twomode_jc
