#include <chrono>
#include <cmath>
#include <future>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "plp/analysis.hpp"
#include "plp/compiler.hpp"
#include "plp/interpreter.hpp"
#include "plp/inverse.hpp"
#include "plp/parser.hpp"

namespace {

using namespace plp;

std::string readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void writeFile(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

Program loadProgram(const std::string& path) {
    std::string text = readFile(path);
    try {
        return parseProgram(text);
    } catch (const ParseError& e) {
        std::cerr << path << ":" << e.span.line << ":" << e.span.column << ": error: " << e.what()
                  << "\n";
        throw CLI::RuntimeError(1);
    }
}

std::map<std::string, std::uint64_t> parseSizes(const std::string& arg) {
    std::map<std::string, std::uint64_t> sizes;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw CLI::ValidationError("--size", "expected var=N, got '" + item + "'");
        }
        sizes[item.substr(0, eq)] = std::strtoull(item.c_str() + eq + 1, nullptr, 10);
    }
    return sizes;
}

Lengths makeLengths(const Program& p, const std::map<std::string, std::uint64_t>& sizes) {
    try {
        return Lengths(p, sizes);
    } catch (const std::invalid_argument& e) {
        throw CLI::ValidationError("--size", e.what());
    }
}

std::string bitsOf(std::uint64_t index, std::uint64_t width) {
    std::string s(width, '0');
    for (std::uint64_t i = 0; i < width; ++i) {
        if (index >> (width - 1 - i) & 1) s[i] = '1';
    }
    return s;
}

std::string formatAmplitude(const Amplitude& a) {
    std::ostringstream os;
    os.precision(12);
    os << a.real() << (a.imag() < 0 ? "-" : "+") << std::abs(a.imag()) << "i";
    return os.str();
}

void printState(const Statevector& state, std::uint64_t width) {
    for (std::uint64_t i = 0; i < state.size(); ++i) {
        if (std::abs(state[i]) > 1e-12) {
            std::cout << bitsOf(i, width) << " " << formatAmplitude(state[i]) << "\n";
        }
    }
}

std::string stateFileText(const Statevector& state) {
    std::ostringstream os;
    os.precision(17);
    for (const auto& a : state) os << a.real() << " " << a.imag() << "\n";
    return os.str();
}

Statevector readStateFile(const std::string& path, std::uint64_t dim) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    Statevector state;
    state.reserve(dim);
    double re, im;
    while (in >> re >> im) state.emplace_back(re, im);
    if (state.size() != dim) {
        throw std::runtime_error("state file has " + std::to_string(state.size()) +
                                 " amplitudes, expected " + std::to_string(dim));
    }
    return state;
}

// --input q1=0110,q2=0 -> basis index in wire order.
std::uint64_t parseBasisInput(const std::string& arg, const Lengths& lens) {
    std::map<std::string, std::string> bits;
    std::stringstream ss(arg);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) {
            throw CLI::ValidationError("--input", "expected var=BITS, got '" + item + "'");
        }
        bits[item.substr(0, eq)] = item.substr(eq + 1);
    }
    std::uint64_t index = 0;
    for (const auto& var : lens.order()) {
        auto it = bits.find(var);
        if (it == bits.end()) {
            throw CLI::ValidationError("--input", "no bits given for variable '" + var + "'");
        }
        if (it->second.size() != lens.of(var)) {
            throw CLI::ValidationError("--input", "variable '" + var + "' has " +
                                                      std::to_string(lens.of(var)) +
                                                      " qubits, got " +
                                                      std::to_string(it->second.size()) + " bits");
        }
        for (char c : it->second) {
            if (c != '0' && c != '1') {
                throw CLI::ValidationError("--input", "bits must be 0 or 1");
            }
            index = (index << 1) | static_cast<std::uint64_t>(c == '1');
        }
        bits.erase(it);
    }
    if (!bits.empty()) {
        throw CLI::ValidationError("--input", "unknown variable '" + bits.begin()->first + "'");
    }
    return index;
}

int cmdCheck(const std::string& file) {
    Program p = loadProgram(file);
    Verdict v = verdict(p);
    for (const auto& d : v.diagnostics) {
        std::cerr << formatDiagnostic(file, d) << "\n";
    }
    if (v.isPLP) {
        std::cout << "PLP: yes (HALF ok, width " << v.width << ")\n";
        return 0;
    }
    std::cout << "PLP: no (well-formed " << (v.wellFormed ? "yes" : "no") << ", HALF "
              << (v.isHalf ? "ok" : "violated") << ", width " << v.width << ")\n";
    return 1;
}

int cmdRun(const std::string& file, const std::string& sizeArg, const std::string& inputArg,
           const std::string& stateFile, bool steps, bool meterOnly, const std::string& outFile) {
    Program p = desugar(loadProgram(file));
    Verdict v = verdict(p);
    if (!v.wellFormed) {
        for (const auto& d : v.diagnostics) std::cerr << formatDiagnostic(file, d) << "\n";
        return 1;
    }
    Lengths lens = makeLengths(p, parseSizes(sizeArg));

    if (meterOnly) {
        MeterResult r = runProgramMeter(p, lens);
        std::cout << "status " << (r.status == Status::Top ? "top" : "bottom") << "\n";
        std::cout << "steps " << r.steps << "\n";
        return r.status == Status::Top ? 0 : 1;
    }

    if (lens.total() > 26) {
        std::cerr << "error: " << lens.total()
                  << " qubits is too large for dense simulation (use --meter-only)\n";
        return 1;
    }
    std::uint64_t dim = std::uint64_t{1} << lens.total();
    Statevector input;
    if (!stateFile.empty()) {
        input = readStateFile(stateFile, dim);
    } else if (!inputArg.empty()) {
        input.assign(dim, Amplitude{0, 0});
        input[parseBasisInput(inputArg, lens)] = 1.0;
    } else {
        throw CLI::ValidationError("--input", "give --input or --state (or --meter-only)");
    }

    RunResult r = runProgram(p, lens, std::move(input));
    if (r.status == Status::Bottom) {
        std::cerr << "error: the program reached the error state; the state below is the "
                     "configuration at the failure\n";
    }
    printState(r.state, lens.total());
    if (steps) std::cout << "steps " << r.steps << "\n";
    if (!outFile.empty()) writeFile(outFile, stateFileText(r.state));
    return r.status == Status::Top ? 0 : 1;
}

int cmdCompile(const std::string& file, const std::string& sizeArg, const std::string& permArg,
               const std::string& outFile, bool showStats) {
    Program p = loadProgram(file);
    Lengths lens = makeLengths(p, parseSizes(sizeArg));
    CompileOptions opts;
    opts.permMode = permArg == "logdepth" ? PermMode::LogDepth : PermMode::Compact;
    try {
        Circuit c = compile(p, lens, opts);
        if (!outFile.empty()) writeFile(outFile, serialize(c));
        if (showStats) {
            CompileStats s = stats(p, lens, opts);
            std::cout << lens.total() << "\t" << s.size << "\t" << s.depth << "\t" << s.ancillas
                      << "\t" << s.keychain << "\n";
        } else if (outFile.empty()) {
            std::cout << serialize(c);
        }
        return 0;
    } catch (const CompileError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int cmdInvert(const std::string& file, const std::string& outFile) {
    Program p = loadProgram(file);
    Program inv = invertProgram(p);
    std::string text = prettyPrint(inv);
    if (outFile.empty()) {
        std::cout << text;
    } else {
        writeFile(outFile, text);
    }
    return 0;
}

int cmdSimulateCircuit(const std::string& file, const std::string& inputBits,
                       const std::string& stateFile, const std::string& outFile) {
    Circuit c = deserialize(readFile(file));
    std::uint64_t dim = std::uint64_t{1} << c.inputWires;
    Statevector input;
    if (!stateFile.empty()) {
        input = readStateFile(stateFile, dim);
    } else {
        if (inputBits.size() != c.inputWires) {
            throw CLI::ValidationError("--input", "circuit has " + std::to_string(c.inputWires) +
                                                      " input wires, got " +
                                                      std::to_string(inputBits.size()) + " bits");
        }
        std::uint64_t index = 0;
        for (char b : inputBits) index = (index << 1) | static_cast<std::uint64_t>(b == '1');
        input.assign(dim, Amplitude{0, 0});
        input[index] = 1.0;
    }
    try {
        Statevector out = simulateCircuit(c, input);
        printState(out, c.inputWires);
        if (!outFile.empty()) writeFile(outFile, stateFileText(out));
        return 0;
    } catch (const CircuitError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

// Applies a basis-preserving circuit to an arbitrary state through its basis
// action (a permutation with phases).
Statevector applyViaBasisTable(const Circuit& c, const Statevector& in) {
    Statevector out(in.size(), Amplitude{0, 0});
    for (std::uint64_t i = 0; i < in.size(); ++i) {
        if (in[i] == Amplitude{0, 0}) continue;
        BasisSimResult r = simulateCircuitBasis(c, i);
        out[r.basis] += r.phase * in[i];
    }
    return out;
}

int cmdBench(const std::string& file, const std::string& sizesArg, const std::string& fixedArg,
             const std::string& permArg, bool verify) {
    Program p = desugar(loadProgram(file));
    if (p.vars.empty()) {
        std::cerr << "error: the program has no input variables\n";
        return 1;
    }
    std::map<std::string, std::uint64_t> fixed;
    if (!fixedArg.empty()) fixed = parseSizes(fixedArg);
    CompileOptions opts;
    opts.permMode = permArg == "logdepth" ? PermMode::LogDepth : PermMode::Compact;

    std::uint64_t seed = 12345;
    if (const char* env = std::getenv("PLP_SEED")) seed = std::strtoull(env, nullptr, 10);

    std::vector<std::uint64_t> ns;
    {
        std::stringstream ss(sizesArg);
        std::string item;
        while (std::getline(ss, item, ',')) ns.push_back(std::strtoull(item.c_str(), nullptr, 10));
    }

    auto lengthsAt = [&](std::uint64_t n) {
        auto sizes = fixed;
        sizes[p.vars.front()] = n;
        for (const auto& var : p.vars) {
            if (!sizes.count(var)) sizes[var] = 1;  // unmentioned variables default to one qubit
        }
        return makeLengths(p, sizes);
    };

    // compilations are independent per size; run them concurrently
    struct Row {
        CompileStats stats;
        double ms = 0;
        std::string error;
    };
    std::vector<std::future<Row>> pending;
    for (std::uint64_t n : ns) {
        pending.push_back(std::async(std::launch::async, [&, n]() {
            Row row;
            try {
                Lengths lens = lengthsAt(n);
                auto t0 = std::chrono::steady_clock::now();
                row.stats = stats(p, lens, opts);
                auto t1 = std::chrono::steady_clock::now();
                row.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            } catch (const std::exception& e) {
                row.error = e.what();
            }
            return row;
        }));
    }

    std::cout << "n\tmeter\tsize\tdepth\tancillas\tkeychain\tms\n";
    for (std::size_t i = 0; i < ns.size(); ++i) {
        std::uint64_t n = ns[i];
        Row row = pending[i].get();
        if (!row.error.empty()) {
            std::cerr << "error at n=" << n << ": " << row.error << "\n";
            return 1;
        }
        const CompileStats& s = row.stats;
        std::cout << n << "\t" << s.meter << "\t" << s.size << "\t" << s.depth << "\t" << s.ancillas
                  << "\t" << s.keychain << "\t" << static_cast<std::uint64_t>(row.ms + 0.5) << "\n";

        Lengths lens = lengthsAt(n);
        if (verify && lens.total() <= 10) {
            Circuit c = compile(p, lens, opts);
            std::uint64_t dim = std::uint64_t{1} << lens.total();
            for (std::uint64_t b = 0; b < dim; ++b) {
                BasisRunResult want = runProgramBasis(p, lens, b);
                BasisSimResult got = simulateCircuitBasis(c, b);
                if (want.basis != got.basis || std::abs(want.phase - got.phase) > 1e-9) {
                    std::cerr << "verify failed at n=" << n << ", basis " << b << "\n";
                    return 1;
                }
            }
            std::mt19937_64 rng(seed ^ n);
            std::normal_distribution<double> gauss;
            for (int trial = 0; trial < 10; ++trial) {
                Statevector v(dim);
                double norm = 0;
                for (auto& a : v) {
                    a = Amplitude{gauss(rng), gauss(rng)};
                    norm += std::norm(a);
                }
                norm = std::sqrt(norm);
                for (auto& a : v) a /= norm;
                RunResult want = runProgram(p, lens, v);
                Statevector got = applyViaBasisTable(c, v);
                for (std::uint64_t i = 0; i < dim; ++i) {
                    if (std::abs(want.state[i] - got[i]) > 1e-9) {
                        std::cerr << "verify failed at n=" << n << " on a random state\n";
                        return 1;
                    }
                }
            }
        }
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toolchain for the PLP quantum programming language"};
    app.require_subcommand(1);

    std::string file, sizeArg, inputArg, stateFile, outFile, permArg = "compact";
    std::string sizesArg, fixedArg;
    bool steps = false, meterOnly = false, showStats = false, verify = false;

    auto* check = app.add_subcommand("check", "Parse and verify a program (exit 0 iff PLP)");
    check->add_option("file", file)->required();

    auto* run = app.add_subcommand("run", "Interpret a program on an input state");
    run->add_option("file", file)->required();
    run->add_option("--size", sizeArg, "per-variable qubit counts, e.g. q1=6,q2=1")->required();
    run->add_option("--input", inputArg, "basis input per variable, e.g. q1=010010,q2=0");
    run->add_option("--state", stateFile, "file of 2^N amplitudes, one 're im' pair per line");
    run->add_flag("--steps", steps, "print the step meter");
    run->add_flag("--meter-only", meterOnly, "classical execution: no state, meter and status only");
    run->add_option("-o,--output", outFile, "write the full output state to a file");

    auto* comp = app.add_subcommand("compile", "Compile a program to a quantum circuit");
    comp->add_option("file", file)->required();
    comp->add_option("--size", sizeArg)->required();
    comp->add_option("--perm", permArg, "controlled-permutation mode")
        ->check(CLI::IsMember({"compact", "logdepth"}));
    comp->add_option("-o,--output", outFile, "circuit file to write");
    comp->add_flag("--stats", showStats, "print a TSV stats row: n size depth ancillas keychain");

    auto* inv = app.add_subcommand("invert", "Emit the inverse program");
    inv->add_option("file", file)->required();
    inv->add_option("-o,--output", outFile);

    auto* sim = app.add_subcommand("simulate-circuit", "Simulate a compiled circuit file");
    sim->add_option("file", file)->required();
    sim->add_option("--input", inputArg, "basis input bits over the input wires");
    sim->add_option("--state", stateFile, "file of 2^N amplitudes");
    sim->add_option("-o,--output", outFile);

    auto* bench = app.add_subcommand("bench", "Compile at a sweep of sizes and print a TSV table");
    bench->add_option("file", file)->required();
    bench->add_option("--sizes", sizesArg, "comma list of sizes for the first variable")->required();
    bench->add_option("--fixed", fixedArg, "sizes for the remaining variables, e.g. q2=1");
    bench->add_option("--perm", permArg)->check(CLI::IsMember({"compact", "logdepth"}));
    bench->add_flag("--verify", verify,
                    "cross-check circuits against the interpreter at small sizes");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_name() == "CallForHelp" || e.get_name() == "CallForAllHelp") {
            return app.exit(e);
        }
        app.exit(e);
        return 2;
    }

    try {
        if (app.got_subcommand(check)) return cmdCheck(file);
        if (app.got_subcommand(run))
            return cmdRun(file, sizeArg, inputArg, stateFile, steps, meterOnly, outFile);
        if (app.got_subcommand(comp)) return cmdCompile(file, sizeArg, permArg, outFile, showStats);
        if (app.got_subcommand(inv)) return cmdInvert(file, outFile);
        if (app.got_subcommand(sim)) return cmdSimulateCircuit(file, inputArg, stateFile, outFile);
        if (app.got_subcommand(bench)) return cmdBench(file, sizesArg, fixedArg, permArg, verify);
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const CLI::RuntimeError&) {
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
