#include "doctest.h"

#include <array>
#include <cstdio>
#include <string>

#include "support/testutil.hpp"

// End-to-end checks of the installed command line, run through popen.

namespace {

#ifndef PLP_CLI_PATH
#define PLP_CLI_PATH "plp"
#endif

struct CommandResult {
    int exitCode = -1;
    std::string output;  // stdout only
};

CommandResult runCli(const std::string& args) {
    std::string cmd = std::string(PLP_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CommandResult res;
    std::array<char, 512> buf;
    while (fgets(buf.data(), buf.size(), pipe)) res.output += buf.data();
    int status = pclose(pipe);
    res.exitCode = WEXITSTATUS(status);
    return res;
}

std::string corpus(const std::string& name) {
    return std::string(PLP_PROGRAMS_DIR) + "/" + name;
}

}  // namespace

TEST_CASE("check accepts the corpus and rejects the mutants") {
    auto ok = runCli("check " + corpus("search.plp"));
    CHECK(ok.exitCode == 0);
    CHECK(ok.output == "PLP: yes (HALF ok, width 1)\n");

    auto wide = runCli("check " + corpus("double_recursion.plp"));
    CHECK(wide.exitCode == 1);
    CHECK(wide.output.find("width 2") != std::string::npos);
}

TEST_CASE("run prints nonzero amplitudes and the meter") {
    auto res = runCli("run " + corpus("search.plp") +
                      " --size q1=6,q2=1 --input q1=000110,q2=0 --steps");
    CHECK(res.exitCode == 0);
    CHECK(res.output == "0001101 1+0i\nsteps 3\n");
}

TEST_CASE("compile writes a circuit that simulate-circuit reproduces") {
    std::string circ = "/tmp/plp_cli_test_circuit.json";
    auto comp = runCli("compile " + corpus("search.plp") + " --size q1=6,q2=1 -o " + circ);
    CHECK(comp.exitCode == 0);
    auto sim = runCli("simulate-circuit " + circ + " --input 0001100");
    CHECK(sim.exitCode == 0);
    CHECK(sim.output == "0001101 1+0i\n");
    std::remove(circ.c_str());
}

TEST_CASE("invert then run undoes a run") {
    std::string inv = "/tmp/plp_cli_test_inv.plp";
    std::string mid = "/tmp/plp_cli_test_mid.state";
    auto invert = runCli("invert " + corpus("sqlog.plp") + " -o " + inv);
    CHECK(invert.exitCode == 0);
    auto fwd = runCli("run " + corpus("sqlog.plp") +
                      " --size q1=4,q2=2 --input q1=0110,q2=00 -o " + mid);
    CHECK(fwd.exitCode == 0);
    auto back = runCli("run " + std::string(inv) + " --size q1=4,q2=2 --state " + mid);
    CHECK(back.exitCode == 0);
    CHECK(back.output.substr(0, 7) == "011000 ");
    std::remove(inv.c_str());
    std::remove(mid.c_str());
}

TEST_CASE("bench emits one TSV row per size") {
    auto res = runCli("bench " + corpus("search.plp") + " --sizes 2,6 --fixed q2=1");
    CHECK(res.exitCode == 0);
    CHECK(res.output.find("n\tmeter\tsize\tdepth\tancillas\tkeychain\tms\n") == 0);
    int rows = 0;
    for (char c : res.output) rows += c == '\n';
    CHECK(rows == 3);
}

TEST_CASE("usage errors exit with 2") {
    auto res = runCli("run " + corpus("search.plp") + " --size q1=6,q2=1");
    CHECK(res.exitCode == 2);  // neither --input nor --state
    auto badSize = runCli("run " + corpus("search.plp") + " --size q1=6 --input q1=000000");
    CHECK(badSize.exitCode == 2);
    auto noCmd = runCli("frobnicate");
    CHECK(noCmd.exitCode == 2);
}

TEST_CASE("error-reaching programs exit with 1") {
    std::string bad = "/tmp/plp_cli_test_bad.plp";
    {
        FILE* f = fopen(bad.c_str(), "w");
        REQUIRE(f != nullptr);
        fputs(":: q[4] *= NOT;\n", f);
        fclose(f);
    }
    auto run = runCli("run " + bad + " --size q=2 --input q=00");
    CHECK(run.exitCode == 1);
    auto comp = runCli("compile " + bad + " --size q=2 --stats");
    CHECK(comp.exitCode == 1);
    std::remove(bad.c_str());
}

TEST_CASE("run and compile+simulate-circuit agree on the corpus") {
    struct Case {
        const char* program;
        const char* size;
        const char* input;
        const char* bits;
    };
    for (const Case& c : {Case{"search.plp", "q1=6,q2=1", "q1=000110,q2=0", "0001100"},
                          Case{"sqlog.plp", "q1=8,q2=2", "q1=01000000,q2=00", "0100000000"}}) {
        std::string circ = "/tmp/plp_cli_pipeline.json";
        auto run = runCli("run " + corpus(c.program) + " --size " + c.size + " --input " + c.input);
        REQUIRE(run.exitCode == 0);
        auto comp = runCli("compile " + corpus(c.program) + " --size " + c.size + " -o " + circ);
        REQUIRE(comp.exitCode == 0);
        auto sim = runCli("simulate-circuit " + circ + " --input " + c.bits);
        CHECK(sim.exitCode == 0);
        CHECK(sim.output == run.output);
        std::remove(circ.c_str());
    }
}
