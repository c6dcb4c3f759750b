#include "plp/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace plp {

namespace {

double normalizeAngle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0) t += kTwoPi;
    if (t >= kTwoPi) t = 0.0;
    return t;
}

void checkDistinct(const Gate& g) {
    std::set<std::uint32_t> seen(g.targets.begin(), g.targets.end());
    if (seen.size() != g.targets.size()) throw CircuitError("gate targets repeat a wire");
    for (const auto& c : g.controls) {
        if (!seen.insert(c.wire).second) {
            throw CircuitError("gate control repeats a target or control wire");
        }
    }
}

}  // namespace

Gate makeX(std::uint32_t target, std::vector<ControlBit> controls) {
    Gate g{GateKind::X, 0.0, {target}, std::move(controls)};
    checkDistinct(g);
    return g;
}

Gate makePh(std::uint32_t target, double theta, std::vector<ControlBit> controls) {
    Gate g{GateKind::Ph, normalizeAngle(theta), {target}, std::move(controls)};
    checkDistinct(g);
    return g;
}

Gate makeRY(std::uint32_t target, double theta, std::vector<ControlBit> controls) {
    Gate g{GateKind::RY, normalizeAngle(theta), {target}, std::move(controls)};
    checkDistinct(g);
    return g;
}

Gate makeSwap(std::uint32_t a, std::uint32_t b, std::vector<ControlBit> controls) {
    Gate g{GateKind::Swap, 0.0, {a, b}, std::move(controls)};
    checkDistinct(g);
    return g;
}

std::uint32_t depth(const Circuit& c) {
    std::vector<std::uint32_t> busyUntil(c.totalWires(), 0);
    std::uint32_t result = 0;
    for (const auto& g : c.gates) {
        std::uint32_t start = 0;
        for (auto w : g.targets) start = std::max(start, busyUntil[w]);
        for (const auto& ctl : g.controls) start = std::max(start, busyUntil[ctl.wire]);
        std::uint32_t end = start + 1;
        for (auto w : g.targets) busyUntil[w] = end;
        for (const auto& ctl : g.controls) busyUntil[ctl.wire] = end;
        result = std::max(result, end);
    }
    return result;
}

namespace {

// Bit of wire w in index i, over W wires total: wire 0 is the MSB.
inline std::uint64_t wireMask(std::uint32_t w, std::uint32_t total) {
    return std::uint64_t{1} << (total - 1 - w);
}

void applyGateDense(Statevector& psi, const Gate& g, std::uint32_t total) {
    std::uint64_t ctrlMask = 0, ctrlWant = 0;
    for (const auto& c : g.controls) {
        std::uint64_t m = wireMask(c.wire, total);
        ctrlMask |= m;
        if (!c.negated) ctrlWant |= m;
    }
    std::uint64_t dim = psi.size();
    switch (g.kind) {
        case GateKind::X: {
            std::uint64_t t = wireMask(g.targets[0], total);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & ctrlMask) != ctrlWant) continue;
                if (i & t) continue;  // handle each pair once, from the 0 side
                std::swap(psi[i], psi[i | t]);
            }
            break;
        }
        case GateKind::Ph: {
            std::uint64_t t = wireMask(g.targets[0], total);
            Amplitude factor = std::polar(1.0, g.theta);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & ctrlMask) != ctrlWant) continue;
                if (i & t) psi[i] *= factor;
            }
            break;
        }
        case GateKind::RY: {
            std::uint64_t t = wireMask(g.targets[0], total);
            double c = std::cos(g.theta), s = std::sin(g.theta);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & ctrlMask) != ctrlWant) continue;
                if (i & t) continue;
                Amplitude a0 = psi[i];
                Amplitude a1 = psi[i | t];
                psi[i] = c * a0 - s * a1;
                psi[i | t] = s * a0 + c * a1;
            }
            break;
        }
        case GateKind::Swap: {
            std::uint64_t ta = wireMask(g.targets[0], total);
            std::uint64_t tb = wireMask(g.targets[1], total);
            for (std::uint64_t i = 0; i < dim; ++i) {
                if ((i & ctrlMask) != ctrlWant) continue;
                bool ba = i & ta, bb = i & tb;
                if (ba == bb) continue;
                if (!ba) std::swap(psi[i], psi[(i ^ ta) ^ tb]);  // visit from the 01 side once
            }
            break;
        }
    }
}

void validate(const Circuit& c) {
    for (const auto& g : c.gates) {
        std::size_t want = g.kind == GateKind::Swap ? 2 : 1;
        if (g.targets.size() != want) throw CircuitError("gate has the wrong number of targets");
        for (auto w : g.targets) {
            if (w >= c.totalWires()) throw CircuitError("gate target wire out of range");
        }
        for (const auto& ctl : g.controls) {
            if (ctl.wire >= c.totalWires()) throw CircuitError("gate control wire out of range");
        }
        checkDistinct(g);
    }
}

}  // namespace

Statevector simulateCircuit(const Circuit& c, const Statevector& input, double tolerance) {
    validate(c);
    std::uint64_t inDim = std::uint64_t{1} << c.inputWires;
    if (input.size() != inDim) throw CircuitError("input dimension mismatch");
    std::uint32_t total = c.totalWires();
    if (total >= 30) throw CircuitError("dense simulation capped at 29 wires");

    Statevector psi(std::uint64_t{1} << total, Amplitude{0, 0});
    std::uint32_t anc = c.ancillaWires;
    for (std::uint64_t i = 0; i < inDim; ++i) psi[i << anc] = input[i];

    for (const auto& g : c.gates) applyGateDense(psi, g, total);

    std::uint64_t ancMask = (std::uint64_t{1} << anc) - 1;
    double leaked = 0;
    Statevector out(inDim, Amplitude{0, 0});
    for (std::uint64_t i = 0; i < psi.size(); ++i) {
        if (i & ancMask) {
            leaked += std::norm(psi[i]);
        } else {
            out[i >> anc] = psi[i];
        }
    }
    if (leaked > tolerance) {
        throw CircuitError("ancillas not restored to |0>: leaked probability " +
                           std::to_string(leaked));
    }
    return out;
}

BasisSimResult simulateCircuitBasis(const Circuit& c, std::uint64_t basis) {
    validate(c);
    std::uint32_t total = c.totalWires();
    if (c.inputWires < 64 && basis >= (std::uint64_t{1} << c.inputWires)) {
        throw CircuitError("basis index out of range");
    }
    std::uint64_t state = basis << c.ancillaWires;
    Amplitude phase{1.0, 0.0};
    for (const auto& g : c.gates) {
        bool active = true;
        for (const auto& ctl : g.controls) {
            bool bit = state & wireMask(ctl.wire, total);
            if (bit == ctl.negated) {
                active = false;
                break;
            }
        }
        if (!active) continue;
        switch (g.kind) {
            case GateKind::X:
                state ^= wireMask(g.targets[0], total);
                break;
            case GateKind::Ph:
                if (state & wireMask(g.targets[0], total)) {
                    phase *= std::polar(1.0, g.theta);
                }
                break;
            case GateKind::RY:
                throw CircuitError("basis simulation cannot apply RY; use simulateCircuit");
            case GateKind::Swap: {
                std::uint64_t ma = wireMask(g.targets[0], total);
                std::uint64_t mb = wireMask(g.targets[1], total);
                bool ba = state & ma, bb = state & mb;
                if (ba != bb) state ^= ma | mb;
                break;
            }
        }
    }
    std::uint64_t ancMask = (std::uint64_t{1} << c.ancillaWires) - 1;
    if (state & ancMask) throw CircuitError("ancillas not restored to |0> on a basis input");
    return BasisSimResult{state >> c.ancillaWires, phase};
}

// --- serialization ---

std::string serialize(const Circuit& c) {
    nlohmann::ordered_json doc;
    doc["format"] = "plp-circuit-v1";
    doc["input_wires"] = c.inputWires;
    doc["ancilla_wires"] = c.ancillaWires;
    doc["wire_labels"] = c.wireLabels;
    nlohmann::ordered_json gates = nlohmann::ordered_json::array();
    for (const auto& g : c.gates) {
        nlohmann::ordered_json rec;
        switch (g.kind) {
            case GateKind::X: rec["kind"] = "x"; break;
            case GateKind::Ph: rec["kind"] = "ph"; break;
            case GateKind::RY: rec["kind"] = "ry"; break;
            case GateKind::Swap: rec["kind"] = "swap"; break;
        }
        if (g.kind == GateKind::Ph || g.kind == GateKind::RY) rec["theta"] = g.theta;
        rec["targets"] = g.targets;
        nlohmann::ordered_json controls = nlohmann::ordered_json::array();
        for (const auto& ctl : g.controls) {
            controls.push_back({{"wire", ctl.wire}, {"neg", ctl.negated}});
        }
        rec["controls"] = std::move(controls);
        gates.push_back(std::move(rec));
    }
    doc["gates"] = std::move(gates);
    return doc.dump(2) + "\n";
}

Circuit deserialize(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw CircuitError(std::string("malformed circuit file: ") + e.what());
    }
    Circuit c;
    try {
        if (doc.value("format", "") != "plp-circuit-v1") {
            throw CircuitError("unknown circuit format (expected plp-circuit-v1)");
        }
        c.inputWires = doc.at("input_wires").get<std::uint32_t>();
        c.ancillaWires = doc.at("ancilla_wires").get<std::uint32_t>();
        if (doc.contains("wire_labels")) {
            c.wireLabels = doc.at("wire_labels").get<std::vector<std::string>>();
        }
        std::size_t idx = 0;
        for (const auto& rec : doc.at("gates")) {
            Gate g;
            std::string kind = rec.at("kind").get<std::string>();
            if (kind == "x") {
                g.kind = GateKind::X;
            } else if (kind == "ph") {
                g.kind = GateKind::Ph;
            } else if (kind == "ry") {
                g.kind = GateKind::RY;
            } else if (kind == "swap") {
                g.kind = GateKind::Swap;
            } else {
                throw CircuitError("gate " + std::to_string(idx) + ": unknown kind '" + kind + "'");
            }
            if (g.kind == GateKind::Ph || g.kind == GateKind::RY) {
                g.theta = rec.at("theta").get<double>();
                if (!(g.theta >= 0.0 && g.theta < kTwoPi)) {
                    throw CircuitError("gate " + std::to_string(idx) +
                                       ": theta outside [0, 2*pi)");
                }
            } else if (rec.contains("theta")) {
                throw CircuitError("gate " + std::to_string(idx) + ": theta not allowed here");
            }
            g.targets = rec.at("targets").get<std::vector<std::uint32_t>>();
            for (const auto& ctl : rec.at("controls")) {
                g.controls.push_back(
                    ControlBit{ctl.at("wire").get<std::uint32_t>(), ctl.at("neg").get<bool>()});
            }
            c.gates.push_back(std::move(g));
            ++idx;
        }
    } catch (const nlohmann::json::exception& e) {
        throw CircuitError(std::string("malformed circuit file: ") + e.what());
    }
    validate(c);
    return c;
}

// --- ancilla pool ---

std::uint32_t AncillaPool::acquire() {
    if (!free_.empty()) {
        std::uint32_t w = free_.back();
        free_.pop_back();
        return w;
    }
    return next_++;
}

void AncillaPool::release(std::uint32_t wire) { free_.push_back(wire); }

// --- controlled permutations ---

namespace {

using Transposition = std::pair<std::uint32_t, std::uint32_t>;

// Any permutation is the product of two involutions: split each cycle
// (c0 c1 ... c_{L-1}) into the reversal i -> -i and the shifted reversal
// i -> 1-i (indices mod L). Applying round 1 then round 2 sends c_i to
// c_{i+1}.
void decomposeToRounds(const std::vector<std::uint32_t>& wires,
                       const std::vector<std::uint32_t>& perm,
                       std::vector<Transposition>& round1, std::vector<Transposition>& round2) {
    std::size_t k = wires.size();
    std::vector<bool> seen(k, false);
    for (std::size_t start = 0; start < k; ++start) {
        if (seen[start]) continue;
        std::vector<std::uint32_t> cycle;
        std::size_t cur = start;
        while (!seen[cur]) {
            seen[cur] = true;
            cycle.push_back(static_cast<std::uint32_t>(cur));
            cur = perm[cur];
        }
        std::size_t len = cycle.size();
        if (len < 2) continue;
        for (std::size_t i = 1; 2 * i < len; ++i) {
            // pairs (i, len - i)
            round1.emplace_back(wires[cycle[i]], wires[cycle[len - i]]);
        }
        for (std::size_t i = 0; i < len; ++i) {
            std::size_t j = (len + 1 - i) % len;
            if (i < j) round2.emplace_back(wires[cycle[i]], wires[cycle[j]]);
        }
    }
}

}  // namespace

std::vector<Gate> buildControlledPermutation(const std::vector<std::uint32_t>& wires,
                                             const std::vector<std::uint32_t>& perm,
                                             ControlBit control, PermMode mode,
                                             AncillaPool& pool) {
    if (perm.size() != wires.size()) throw CircuitError("permutation size mismatch");
    {
        std::vector<bool> hit(perm.size(), false);
        for (auto p : perm) {
            if (p >= perm.size() || hit[p]) throw CircuitError("not a permutation");
            hit[p] = true;
        }
    }

    std::vector<Transposition> round1, round2;
    decomposeToRounds(wires, perm, round1, round2);
    std::vector<Gate> out;
    if (round1.empty() && round2.empty()) return out;

    if (mode == PermMode::Compact) {
        for (const auto& [a, b] : round1) out.push_back(makeSwap(a, b, {control}));
        for (const auto& [a, b] : round2) out.push_back(makeSwap(a, b, {control}));
        return out;
    }

    // LogDepth: fan the control value out to one copy per Fredkin of the
    // larger round, so each round runs in a single layer.
    std::size_t copies = std::max(round1.size(), round2.size());
    std::vector<std::uint32_t> copyWires(copies);
    for (auto& w : copyWires) w = pool.acquire();

    std::vector<Gate> fanout;
    // Balanced doubling: sources are the already-written copies plus the
    // original control; layer widths 1, 2, 4, ...
    std::size_t written = 0;
    while (written < copies) {
        std::size_t sources = written + 1;
        std::size_t layer = std::min(sources, copies - written);
        for (std::size_t i = 0; i < layer; ++i) {
            std::uint32_t src = i == 0 ? control.wire : copyWires[i - 1];
            bool neg = i == 0 ? control.negated : false;
            fanout.push_back(makeX(copyWires[written + i], {ControlBit{src, neg}}));
        }
        written += layer;
    }

    out.insert(out.end(), fanout.begin(), fanout.end());
    for (std::size_t i = 0; i < round1.size(); ++i) {
        out.push_back(makeSwap(round1[i].first, round1[i].second,
                               {ControlBit{copyWires[i], false}}));
    }
    for (std::size_t i = 0; i < round2.size(); ++i) {
        out.push_back(makeSwap(round2[i].first, round2[i].second,
                               {ControlBit{copyWires[i], false}}));
    }
    for (auto it = fanout.rbegin(); it != fanout.rend(); ++it) out.push_back(*it);

    for (auto it = copyWires.rbegin(); it != copyWires.rend(); ++it) pool.release(*it);
    return out;
}

}  // namespace plp
