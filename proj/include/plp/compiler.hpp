#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "plp/analysis.hpp"
#include "plp/ast.hpp"
#include "plp/circuit.hpp"
#include "plp/interpreter.hpp"

namespace plp {

class CompileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CompileOptions {
    PermMode permMode = PermMode::Compact;
};

struct CompileStats {
    std::uint64_t size = 0;       // gate count
    std::uint32_t depth = 0;
    std::uint32_t ancillas = 0;
    std::uint32_t keychain = 0;   // longest nesting chain of merge keys
    std::uint64_t meter = 0;      // interpreter step meter at the same sizes
};

// Compiles a program at fixed input sizes to an equivalent circuit. Calls to
// procedures outside the caller's recursion class are inlined; (mutually)
// recursive calls are anchored on an ancilla and merged per (procedure,
// argument sizes) key, routing argument wires onto the first site's wires
// with controlled permutations. Fails if the program is ill-formed or would
// reach the error state at these sizes.
Circuit compile(const Program& p, const Lengths& lengths, const CompileOptions& opts = {});

CompileStats stats(const Program& p, const Lengths& lengths, const CompileOptions& opts = {});

}  // namespace plp
