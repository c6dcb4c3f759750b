#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plp/ast.hpp"
#include "plp/listeval.hpp"

namespace plp {

using Amplitude = std::complex<double>;
using Statevector = std::vector<Amplitude>;

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

// Per-variable qubit lengths in program variable order. Wire j of pointer n
// in variable q is j = prefix(q) + n, 1-based; wire 1 is the most significant
// bit of a basis index.
class Lengths {
public:
    Lengths() = default;
    Lengths(const Program& p, const std::map<std::string, std::uint64_t>& sizes);

    std::uint64_t total() const { return total_; }
    std::uint64_t of(const std::string& var) const { return sizes_.at(var); }
    std::uint64_t prefix(const std::string& var) const { return prefix_.at(var); }
    const std::vector<std::string>& order() const { return order_; }

private:
    std::vector<std::string> order_;
    std::map<std::string, std::uint64_t> sizes_;
    std::map<std::string, std::uint64_t> prefix_;
    std::uint64_t total_ = 0;
};

// The context component f: per-variable qubit pointer lists (1-based).
using PtrContext = ListBindings<std::uint64_t>;

PtrContext initialContext(const Lengths& lengths);

long long evalInt(const IntExpr& e, const PtrContext& f);
std::vector<std::uint64_t> evalList(const ListExpr& l, const PtrContext& f);
// 0 is the in-band error pointer.
std::uint64_t evalQubit(const QubitExpr& q, const PtrContext& f);
bool evalBool(const BoolExpr& b, const PtrContext& f);

// Angle functions map integers to [0, 2*pi); nullopt on division by zero or a
// non-finite result.
std::optional<double> evalAngle(const AngleFn& fn, long long arg);

struct Mat2 {
    Amplitude m00, m01, m10, m11;
};

// The 2x2 matrices of the three gates; nullopt when the angle evaluation
// fails.
std::optional<Mat2> gateMatrix(GateName gate, const std::optional<AngleFn>& angle, long long arg);

enum class Status { Top, Bottom };

struct RunResult {
    Status status = Status::Top;
    std::uint64_t steps = 0;
    Statevector state;
};

struct BasisRunResult {
    Status status = Status::Top;
    std::uint64_t steps = 0;
    std::uint64_t basis = 0;
    Amplitude phase{1.0, 0.0};
};

struct MeterResult {
    Status status = Status::Top;
    std::uint64_t steps = 0;
};

// Big-step execution of the whole program from the initial configuration.
// The input dimension must be 2^total.
RunResult runProgram(const Program& p, const Lengths& lengths, Statevector input);

// Fast path for basis-state inputs of programs whose gates preserve basis
// states (NOT and Ph). Throws std::runtime_error if an RY gate is reached.
BasisRunResult runProgramBasis(const Program& p, const Lengths& lengths, std::uint64_t basis);

// Classical execution: no amplitudes, same control flow, same meter and the
// same error verdict (both are amplitude-independent).
MeterResult runProgramMeter(const Program& p, const Lengths& lengths);

// Column k is the program applied to basis state k. Requires total <= 12 and
// error-free execution on every basis state (throws otherwise).
std::vector<Statevector> extractUnitary(const Program& p, const Lengths& lengths);

}  // namespace plp
