#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "plp/interpreter.hpp"  // Amplitude/Statevector

namespace plp {

enum class GateKind { X, Ph, RY, Swap };

struct ControlBit {
    std::uint32_t wire = 0;
    bool negated = false;

    friend bool operator==(const ControlBit&, const ControlBit&) = default;
};

// One gate: a single-target X/Ph/RY or a two-target SWAP, with any number of
// (positive or negative) controls. Targets and controls are pairwise
// distinct; theta is normalized to [0, 2*pi).
struct Gate {
    GateKind kind = GateKind::X;
    double theta = 0.0;
    std::vector<std::uint32_t> targets;
    std::vector<ControlBit> controls;
};

Gate makeX(std::uint32_t target, std::vector<ControlBit> controls = {});
Gate makePh(std::uint32_t target, double theta, std::vector<ControlBit> controls = {});
Gate makeRY(std::uint32_t target, double theta, std::vector<ControlBit> controls = {});
Gate makeSwap(std::uint32_t a, std::uint32_t b, std::vector<ControlBit> controls = {});

// Wires are 0-based: inputs first (wire 0 is the most significant bit of a
// basis index), then ancillas. Ancillas start and must end in |0>.
struct Circuit {
    std::uint32_t inputWires = 0;
    std::uint32_t ancillaWires = 0;
    std::vector<Gate> gates;
    std::vector<std::string> wireLabels;  // one per wire; may be empty

    std::uint32_t totalWires() const { return inputWires + ancillaWires; }
};

class CircuitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Longest chain under as-soon-as-possible scheduling; a gate occupies its
// target and control wires for one step.
std::uint32_t depth(const Circuit& c);

// Appends |0...0> ancillas, applies the gates, checks every ancilla returns
// to |0> within tolerance, and traces the ancillas out. Throws CircuitError
// if restoration fails.
Statevector simulateCircuit(const Circuit& c, const Statevector& input, double tolerance = 1e-9);

struct BasisSimResult {
    std::uint64_t basis = 0;
    Amplitude phase{1.0, 0.0};
};

// Permutation-plus-phase fast path for X/SWAP/Ph circuits on basis inputs;
// throws CircuitError on an RY gate or when an ancilla ends nonzero.
BasisSimResult simulateCircuitBasis(const Circuit& c, std::uint64_t basis);

// Structured-text (JSON) round trip; the format is documented in the README.
std::string serialize(const Circuit& c);
Circuit deserialize(std::string_view text);

// Wire bookkeeping for scratch qubits: acquire pops a free wire or mints a
// new one, release returns it. highWater() is the total ever minted.
class AncillaPool {
public:
    explicit AncillaPool(std::uint32_t firstWire) : next_(firstWire), first_(firstWire) {}

    std::uint32_t acquire();
    void release(std::uint32_t wire);
    std::uint32_t highWater() const { return next_ - first_; }

private:
    std::uint32_t next_;
    std::uint32_t first_;
    std::vector<std::uint32_t> free_;
};

enum class PermMode { Compact, LogDepth };

// A permutation of the given wires, applied only when `control` matches.
// perm[i] = j sends the content of wires[i] to wires[j]. The permutation is
// decomposed into two rounds of disjoint transpositions. Compact mode emits
// one Fredkin per transposition, all sharing the control. LogDepth mode fans
// the control out to one copy per transposition of the larger round through a
// balanced tree of controlled-X, runs each round as one parallel Fredkin
// layer, and fans back in; the copies are taken from the pool and released.
std::vector<Gate> buildControlledPermutation(const std::vector<std::uint32_t>& wires,
                                             const std::vector<std::uint32_t>& perm,
                                             ControlBit control, PermMode mode,
                                             AncillaPool& pool);

}  // namespace plp
