// Acceptance suite: one pass/fail line per criterion, exit 0 iff all pass.
//
// Quantitative bounds are pinned here, before measurement: scaling fits take
// their constants from the two smallest sweep sizes (integer-granularity
// slopes are rounded up, power-law exponents are clamped to >= 0), and the
// per-level depth budget comes from the controlled-permutation construction.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "plp/analysis.hpp"
#include "plp/compiler.hpp"
#include "plp/interpreter.hpp"
#include "plp/inverse.hpp"
#include "plp/parser.hpp"
#include "support/fuzz.hpp"
#include "support/testutil.hpp"

using namespace plp;

namespace {

int failures = 0;
std::ostringstream detail;

void criterion(int number, const std::string& name, const std::function<bool()>& body) {
    detail.str("");
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    std::string error;
    try {
        ok = body();
    } catch (const std::exception& e) {
        error = e.what();
    }
    auto t1 = std::chrono::steady_clock::now();
    double secs = std::chrono::duration<double>(t1 - t0).count();
    std::printf("[%s] criterion %2d: %s (%.1fs)\n", ok ? "PASS" : "FAIL", number, name.c_str(),
                secs);
    if (!ok) {
        ++failures;
        if (!error.empty()) std::printf("       exception: %s\n", error.c_str());
        if (!detail.str().empty()) std::printf("%s", detail.str().c_str());
    }
    std::fflush(stdout);
}

bool expect(bool cond, const std::string& what) {
    if (!cond) detail << "       failed: " << what << "\n";
    return cond;
}

// --- criterion 1 ---

bool corpusAcceptance() {
    bool ok = true;
    Verdict search = verdict(parseProgram(test::readProgramFile("search.plp")));
    ok &= expect(search.isPLP && search.isHalf && search.width == 1, "search is PLP at width 1");

    Verdict sqlog = verdict(parseProgram(test::readProgramFile("sqlog.plp")));
    ok &= expect(sqlog.isPLP, "sqlog is PLP");
    ok &= expect(sqlog.width == 1, "width(sqlog) = max(0+1+0, max(1,0)) = 1");
    Program sq = desugar(parseProgram(test::readProgramFile("sqlog.plp")));
    WidthResult w = width(sq, buildCallGraph(sq));
    ok &= expect(w.perProc["f"] == 1 && w.perProc["g"] == 1, "per-procedure widths of sqlog");

    Verdict nonhalving = verdict(parseProgram(test::readProgramFile("search_nonhalving.plp")));
    ok &= expect(!nonhalving.isPLP && !nonhalving.isHalf, "non-halving mutant rejected");
    bool halfDiag = false;
    for (const auto& d : nonhalving.diagnostics) {
        halfDiag |= d.message.find("passes no halved argument") != std::string::npos;
    }
    ok &= expect(halfDiag, "non-halving mutant names the violating call");

    Verdict wide = verdict(parseProgram(test::readProgramFile("double_recursion.plp")));
    ok &= expect(!wide.isPLP && wide.width == 2, "width-2 mutant rejected with width 2");
    bool widthDiag = false;
    for (const auto& d : wide.diagnostics) {
        widthDiag |= d.message.find("width 2") != std::string::npos;
    }
    ok &= expect(widthDiag, "width-2 mutant diagnostic reports the width");
    return ok;
}

// --- criterion 2 ---

bool expressionGoldens() {
    PtrContext f;
    f["q"] = {1, 4, 5};
    auto q = mkQVar("q");
    bool ok = true;
    ok &= expect(evalQubit(mkQubit(q, mkIntConst(2)), f) == 4, "q[2] evaluates to 4");
    ok &= expect(evalList(*mkRemove(q, mkIntConst(4)), f).empty(), "q minus [4] is empty");
    ok &= expect(evalQubit(mkQubit(q, mkIntConst(4)), f) == 0, "q[4] evaluates to 0");
    ok &= expect(evalList(*mkRemove(q, mkIntConst(3)), f) == std::vector<std::uint64_t>{1, 4},
                 "q minus [3] is [1,4]");
    return ok;
}

// --- criterion 3 ---

bool searchFunctional() {
    Program p = test::loadCorpus("search.plp");
    bool ok = true;

    auto runSearch = [&](const std::string& x, const Lengths& lens, int& outBit) {
        std::uint64_t basis = 0;
        for (char c : x) {
            basis = basis << 2 | static_cast<std::uint64_t>(c == '1' ? 1 : c == '2' ? 2 : 0);
        }
        basis <<= 1;  // q2 starts at |0>
        BasisRunResult r = runProgramBasis(p, lens, basis);
        if (!expect(r.status == Status::Top, "search terminates on x=" + x)) return false;
        if (!expect((r.basis >> 1) == (basis >> 1), "input register preserved for x=" + x)) {
            return false;
        }
        outBit = static_cast<int>(r.basis & 1);
        return true;
    };

    // brute-force the output polarity at the smallest size, then hold it fixed
    Lengths smallest(p, {{"q1", 2}, {"q2", 1}});
    int bitWithOne = -1, bitWithoutOne = -1;
    if (!runSearch("1", smallest, bitWithOne)) return false;
    if (!runSearch("0", smallest, bitWithoutOne)) return false;
    if (!expect(bitWithOne != bitWithoutOne, "the answer distinguishes the two classes")) {
        return false;
    }
    const int polarity = bitWithOne;  // observed: 1 = "x contains a 1"

    for (int len : {1, 3, 7, 15}) {
        std::vector<std::string> xs;  // all sorted strings over {0,1,2}
        for (int zeros = 0; zeros <= len; ++zeros) {
            for (int ones = 0; zeros + ones <= len; ++ones) {
                xs.push_back(std::string(zeros, '0') + std::string(ones, '1') +
                             std::string(len - zeros - ones, '2'));
            }
        }
        // exhaustive: 3, 10, 36, 136 strings, far below the 10000 cap
        Lengths lens(p, {{"q1", static_cast<std::uint64_t>(2 * len)}, {"q2", 1}});
        for (const auto& x : xs) {
            int outBit = -1;
            if (!runSearch(x, lens, outBit)) return false;
            int oracle = x.find('1') != std::string::npos ? 1 : 0;
            int want = oracle == 1 ? polarity : 1 - polarity;
            ok &= expect(outBit == want, "search answer for x=" + x);
            if (!ok) return false;
        }
    }
    return ok;
}

// --- criterion 4 ---

struct BasisTable {
    std::vector<std::uint64_t> image;
    std::vector<Amplitude> phase;
};

BasisTable tabulate(const Circuit& c) {
    std::uint64_t dim = std::uint64_t{1} << c.inputWires;
    BasisTable t;
    t.image.resize(dim);
    t.phase.resize(dim);
    for (std::uint64_t b = 0; b < dim; ++b) {
        BasisSimResult r = simulateCircuitBasis(c, b);  // checks ancilla restoration
        t.image[b] = r.basis;
        t.phase[b] = r.phase;
    }
    return t;
}

Statevector applyTable(const BasisTable& t, const Statevector& in) {
    Statevector out(in.size(), Amplitude{0, 0});
    for (std::uint64_t i = 0; i < in.size(); ++i) {
        out[t.image[i]] += t.phase[i] * in[i];
    }
    return out;
}

bool interpreterCircuitEquivalence() {
    bool ok = true;
    std::mt19937_64 rng(20250810);
    for (const char* name : {"search.plp", "sqlog.plp"}) {
        Program p = test::loadCorpus(name);
        for (std::uint64_t s1 = 0; s1 <= 10; ++s1) {
            for (std::uint64_t s2 = 0; s1 + s2 <= 10; ++s2) {
                Lengths lens(p, {{"q1", s1}, {"q2", s2}});
                std::uint64_t dim = std::uint64_t{1} << lens.total();
                bool bottoms = runProgramMeter(p, lens).status == Status::Bottom;
                for (PermMode mode : {PermMode::Compact, PermMode::LogDepth}) {
                    std::string where = std::string(name) + " (" + std::to_string(s1) + "," +
                                        std::to_string(s2) + ") " +
                                        (mode == PermMode::Compact ? "compact" : "logdepth");
                    if (bottoms) {
                        // error-reaching sizes: the compiler must refuse them
                        bool threw = false;
                        try {
                            compile(p, lens, {mode});
                        } catch (const CompileError&) {
                            threw = true;
                        }
                        ok &= expect(threw, "compile refuses error-reaching " + where);
                        continue;
                    }
                    Circuit c = compile(p, lens, {mode});
                    BasisTable table = tabulate(c);  // throws if ancillas leak
                    for (std::uint64_t b = 0; b < dim; ++b) {
                        BasisRunResult want = runProgramBasis(p, lens, b);
                        if (table.image[b] != want.basis ||
                            std::abs(table.phase[b] - want.phase) > 1e-9) {
                            return expect(false, "basis state " + std::to_string(b) + " at " + where);
                        }
                    }
                    for (int t = 0; t < 50; ++t) {
                        Statevector in = test::randomUnitState(rng, dim);
                        RunResult want = runProgram(p, lens, in);
                        Statevector got = applyTable(table, in);
                        double err = test::maxAmplitudeError(want.state, got);
                        if (err > 1e-9) {
                            return expect(false, "random state error " + std::to_string(err) +
                                                     " at " + where);
                        }
                    }
                    // dense-simulator cross-check (including its own ancilla
                    // restoration assertion) where the wire count stays small
                    if (c.totalWires() <= 16) {
                        for (int t = 0; t < 3; ++t) {
                            Statevector in = test::randomUnitState(rng, dim);
                            Statevector dense = simulateCircuit(c, in);
                            Statevector viaTable = applyTable(table, in);
                            double err = test::maxAmplitudeError(dense, viaTable);
                            if (err > 1e-9) {
                                return expect(false, "dense/ basis mismatch at " + where);
                            }
                        }
                    }
                }
            }
        }
    }
    return ok;
}

// --- criterion 5 ---

bool reversibility() {
    bool ok = true;
    auto checkOne = [&](const Program& surface, const Lengths& lens, const std::string& what) {
        Program p = desugar(surface);
        Program inv = desugar(invertProgram(surface));
        if (!expect(verdict(inv).isPLP == verdict(surface).isPLP, "verdict preserved: " + what)) {
            return false;
        }
        auto u = extractUnitary(p, lens);
        auto uInv = extractUnitary(inv, lens);
        double dist = test::identityDistance(u, uInv);
        return expect(dist < 1e-9, what + ": inverse composition distance " + std::to_string(dist));
    };

    Program search = parseProgram(test::readProgramFile("search.plp"));
    ok &= checkOne(search, Lengths(search, {{"q1", 7}, {"q2", 1}}), "search (7,1)");
    Program sqlog = parseProgram(test::readProgramFile("sqlog.plp"));
    ok &= checkOne(sqlog, Lengths(sqlog, {{"q1", 6}, {"q2", 2}}), "sqlog (6,2)");
    if (!ok) return false;

    fuzz::Rng rng(5550123);
    int accepted = 0, trials = 0;
    while (accepted < 100 && trials < 4000) {
        ++trials;
        auto gen = fuzz::genPlpProgram(rng);
        Program p = desugar(gen.program);
        Lengths lens(p, gen.sizes);
        if (lens.total() > 8) continue;
        if (!verdict(gen.program).isPLP) continue;
        if (runProgramMeter(p, lens).status != Status::Top) continue;  // error-free only
        if (!checkOne(gen.program, lens, "fuzzed #" + std::to_string(accepted))) {
            detail << prettyPrint(gen.program);
            return false;
        }
        ++accepted;
    }
    ok &= expect(accepted == 100, "generated 100 error-free PLP programs (got " +
                                      std::to_string(accepted) + ")");
    return ok;
}

// --- criteria 6-8 share the sweeps ---

struct SweepRow {
    std::uint64_t n = 0;
    CompileStats stats;
};

std::vector<SweepRow> sweep(const Program& p, const std::vector<std::uint64_t>& sizes,
                            std::uint64_t fixedSecond, PermMode mode) {
    std::vector<SweepRow> rows;
    for (std::uint64_t n : sizes) {
        Lengths lens(p, {{"q1", n}, {"q2", fixedSecond}});
        rows.push_back({n, stats(p, lens, {mode})});
    }
    return rows;
}

const std::vector<std::uint64_t> kSearchSweep = {2, 6, 14, 30, 62, 126, 254, 510, 1022};
const std::vector<std::uint64_t> kSqlogSweep = {4, 8, 16, 32, 64, 128, 256, 512, 1024};

bool depthScaling() {
    bool ok = true;
    Program search = test::loadCorpus("search.plp");
    auto rows = sweep(search, kSearchSweep, 1, PermMode::LogDepth);

    // Per-level additive budget from the construction: one level adds two
    // controlled permutations (fan-out tree + two Fredkin layers + fan-in,
    // depth 2*ceil(log2(ceil(u/2)+1)) + 2 each, u <= n) plus at most eight
    // scaffolding columns (anchor/selector Toffolis, their mirrors, and the
    // branch gate).
    double nMax = static_cast<double>(kSearchSweep.back());
    double C = 4.0 * std::ceil(std::log2(nMax)) + 8.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        double diff = double(rows[i].stats.depth) - double(rows[i - 1].stats.depth);
        ok &= expect(diff <= C, "search depth step " + std::to_string(rows[i].n) + " adds " +
                                    std::to_string(diff) + " <= " + std::to_string(C));
    }
    ok &= expect(double(rows.back().stats.depth) < double(rows.front().stats.depth) + 9 * C,
                 "search depth(1022) < depth(2) + 9C");

    Program sqlog = test::loadCorpus("sqlog.plp");
    auto srows = sweep(sqlog, kSqlogSweep, 2, PermMode::LogDepth);
    // a log^2 fit through the two smallest sizes bounds all larger ones
    double l0 = std::log2(double(srows[0].n)), l1 = std::log2(double(srows[1].n));
    double d0 = srows[0].stats.depth, d1 = srows[1].stats.depth;
    double a = (d1 - d0) / (l1 * l1 - l0 * l0);
    double b = d0 - a * l0 * l0;
    for (const auto& row : srows) {
        double bound = a * std::pow(std::log2(double(row.n)), 2) + b;
        ok &= expect(double(row.stats.depth) <= bound + 1e-9,
                     "sqlog depth(" + std::to_string(row.n) + ") = " +
                         std::to_string(row.stats.depth) + " <= " + std::to_string(bound));
    }
    return ok;
}

bool sizeAndAncillaScaling() {
    bool ok = true;
    for (const char* name : {"search.plp", "sqlog.plp"}) {
        Program p = test::loadCorpus(name);
        const auto& sizes = std::string(name) == "search.plp" ? kSearchSweep : kSqlogSweep;
        std::uint64_t fixedSecond = std::string(name) == "search.plp" ? 1 : 2;
        for (PermMode mode : {PermMode::Compact, PermMode::LogDepth}) {
            auto rows = sweep(p, sizes, fixedSecond, mode);
            std::string tag = std::string(name) + (mode == PermMode::Compact ? " compact" : " logdepth");

            // gate count per input qubit, bounded by c*log2(n)^d fitted at the
            // two smallest sizes with log2(n) >= 2; d clamped to >= 0
            std::vector<SweepRow> fitRows;
            for (const auto& r : rows) {
                if (std::log2(double(r.n)) >= 2.0 && fitRows.size() < 2) fitRows.push_back(r);
            }
            auto ratio = [](const SweepRow& r) { return double(r.stats.size) / double(r.n); };
            double L0 = std::log2(double(fitRows[0].n)), L1 = std::log2(double(fitRows[1].n));
            double d = (std::log(ratio(fitRows[1])) - std::log(ratio(fitRows[0]))) /
                       (std::log(L1) - std::log(L0));
            double c;
            if (d < 0) {
                d = 0;
                c = std::max(ratio(fitRows[0]), ratio(fitRows[1]));
            } else {
                c = ratio(fitRows[0]) / std::pow(L0, d);
            }
            for (const auto& r : rows) {
                if (std::log2(double(r.n)) < 2.0) continue;
                double bound = c * std::pow(std::log2(double(r.n)), d);
                ok &= expect(ratio(r) <= bound + 1e-9, tag + " size/n at n=" + std::to_string(r.n) +
                                                           ": " + std::to_string(ratio(r)) +
                                                           " <= " + std::to_string(bound));
            }

            for (const auto& r : rows) {
                double logn = std::ceil(std::log2(double(r.n)));
                double bound = mode == PermMode::LogDepth ? 2 * logn + double(r.n) : 2 * logn + 4;
                ok &= expect(double(r.stats.ancillas) <= bound,
                             tag + " ancillas at n=" + std::to_string(r.n) + ": " +
                                 std::to_string(r.stats.ancillas) + " <= " + std::to_string(bound));
            }
        }
    }
    return ok;
}

bool mergeKeyBound() {
    bool ok = true;
    Program p = test::loadCorpus("search.plp");
    for (std::uint64_t k = 2; k <= 9; ++k) {
        std::uint64_t n = 2 * ((std::uint64_t{1} << k) - 1);
        Lengths lens(p, {{"q1", n}, {"q2", 1}});
        CompileStats s = stats(p, lens, {PermMode::Compact});
        ok &= expect(s.keychain == k - 1, "keychain at n=" + std::to_string(n) + " is " +
                                              std::to_string(s.keychain) + ", want " +
                                              std::to_string(k - 1));
    }
    return ok;
}

// --- criterion 9 ---

bool controlledPermutationSuite() {
    bool ok = true;
    std::mt19937_64 rng(424243);
    for (int trial = 0; trial < 200 && ok; ++trial) {
        std::uint32_t k = static_cast<std::uint32_t>(rng() % 8 + 1);
        std::vector<std::uint32_t> wires(k);
        std::iota(wires.begin(), wires.end(), 1);
        std::vector<std::uint32_t> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        for (PermMode mode : {PermMode::Compact, PermMode::LogDepth}) {
            AncillaPool pool(k + 1);
            Circuit c;
            c.inputWires = k + 1;
            c.gates =
                buildControlledPermutation(wires, perm, ControlBit{0, false}, mode, pool);
            c.ancillaWires = pool.highWater();
            for (std::uint64_t basis = 0; basis < (std::uint64_t{1} << (k + 1)); ++basis) {
                BasisSimResult r = simulateCircuitBasis(c, basis);
                std::uint64_t want = basis;
                if (basis >> k & 1) {
                    want = basis;
                    for (std::size_t i = 0; i < k; ++i) {
                        std::uint64_t srcMask = std::uint64_t{1} << (k - wires[i]);
                        std::uint64_t dstMask = std::uint64_t{1} << (k - wires[perm[i]]);
                        want &= ~dstMask;
                        if (basis & srcMask) want |= dstMask;
                    }
                }
                if (r.basis != want) {
                    return expect(false, "permutation mismatch at trial " + std::to_string(trial));
                }
            }
        }
    }

    for (std::uint32_t k : {8u, 32u, 128u, 512u, 2048u, 4096u}) {
        std::vector<std::uint32_t> wires(k);
        std::iota(wires.begin(), wires.end(), 1);
        std::vector<std::uint32_t> perm(k);
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), rng);
        AncillaPool pool(k + 1);
        Circuit c;
        c.inputWires = k + 1;
        c.gates = buildControlledPermutation(wires, perm, ControlBit{0, false},
                                             PermMode::LogDepth, pool);
        c.ancillaWires = pool.highWater();
        double bound = 2 * std::log2(double(k)) + 4;
        ok &= expect(double(depth(c)) <= bound, "logdepth permutation depth at k=" +
                                                    std::to_string(k) + ": " +
                                                    std::to_string(depth(c)) + " <= " +
                                                    std::to_string(bound));
    }
    return ok;
}

// --- criterion 10 ---

bool meterPolylogBound() {
    bool ok = true;

    // search: meter <= a*log2(n) + b, constants from the two smallest sizes
    // (slope rounded up to the meter's integer granularity)
    Program search = test::loadCorpus("search.plp");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> searchMeters;
    for (std::uint64_t n : kSearchSweep) {
        Lengths lens(search, {{"q1", n}, {"q2", 1}});
        MeterResult r = runProgramMeter(search, lens);
        if (!expect(r.status == Status::Top, "search terminates at n=" + std::to_string(n))) {
            return false;
        }
        searchMeters.push_back({n, r.steps});
    }
    {
        double l0 = std::log2(double(searchMeters[0].first));
        double l1 = std::log2(double(searchMeters[1].first));
        double a = std::ceil((double(searchMeters[1].second) - double(searchMeters[0].second)) /
                             (l1 - l0));
        double b = double(searchMeters[0].second) - a * l0;
        for (const auto& [n, m] : searchMeters) {
            double bound = a * std::log2(double(n)) + b;
            ok &= expect(double(m) <= bound + 1e-9, "search meter(" + std::to_string(n) + ") = " +
                                                        std::to_string(m) + " <= " +
                                                        std::to_string(bound));
        }
    }

    // sqlog: meter <= a*log2(n)^2 + b
    Program sqlog = test::loadCorpus("sqlog.plp");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> sqlogMeters;
    for (std::uint64_t n : kSqlogSweep) {
        Lengths lens(sqlog, {{"q1", n}, {"q2", 2}});
        MeterResult r = runProgramMeter(sqlog, lens);
        if (!expect(r.status == Status::Top, "sqlog terminates at n=" + std::to_string(n))) {
            return false;
        }
        sqlogMeters.push_back({n, r.steps});
    }
    {
        double l0 = std::log2(double(sqlogMeters[0].first));
        double l1 = std::log2(double(sqlogMeters[1].first));
        double a = std::ceil((double(sqlogMeters[1].second) - double(sqlogMeters[0].second)) /
                             (l1 * l1 - l0 * l0));
        double b = double(sqlogMeters[0].second) - a * l0 * l0;
        for (const auto& [n, m] : sqlogMeters) {
            double bound = a * std::pow(std::log2(double(n)), 2) + b;
            ok &= expect(double(m) <= bound + 1e-9, "sqlog meter(" + std::to_string(n) + ") = " +
                                                        std::to_string(m) + " <= " +
                                                        std::to_string(bound));
        }
    }
    return ok;
}

}  // namespace

int main() {
    criterion(1, "corpus acceptance and mutant rejection", corpusAcceptance);
    criterion(2, "expression semantics goldens", expressionGoldens);
    criterion(3, "search flags sorted strings containing a 1", searchFunctional);
    criterion(4, "interpreter/circuit equivalence over all sizes up to 10 qubits",
              interpreterCircuitEquivalence);
    criterion(5, "reversibility of corpus and 100 fuzzed programs", reversibility);
    criterion(6, "compiled depth scales polylogarithmically", depthScaling);
    criterion(7, "gate count and ancilla scaling", sizeAndAncillaScaling);
    criterion(8, "merge-key chain length equals the halving level count", mergeKeyBound);
    criterion(9, "controlled permutations: exhaustive checks and depth bound",
              controlledPermutationSuite);
    criterion(10, "interpreter step meters stay polylogarithmic", meterPolylogBound);

    if (failures == 0) {
        std::printf("all criteria passed\n");
        return 0;
    }
    std::printf("%d criteria failed\n", failures);
    return 1;
}
