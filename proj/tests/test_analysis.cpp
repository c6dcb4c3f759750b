#include "doctest.h"

#include "plp/analysis.hpp"
#include "plp/parser.hpp"
#include "support/fuzz.hpp"
#include "support/testutil.hpp"

using namespace plp;

TEST_CASE("sqlog call graph: edges, recursion classes, strict order") {
    Program p = test::loadCorpus("sqlog.plp");
    CallGraph cg = buildCallGraph(p);
    CHECK(cg.direct["f"] == std::set<std::string>{"f", "g"});
    CHECK(cg.direct["g"] == std::set<std::string>{"g"});
    CHECK(cg.isRecursive("f"));
    CHECK(cg.isRecursive("g"));
    CHECK(cg.strictlyAbove("f", "g"));
    CHECK(!cg.strictlyAbove("g", "f"));
    CHECK(!cg.mutuallyRecursive("f", "g"));
}

TEST_CASE("call graph of a call-free program is empty") {
    Program p = desugar(parseProgram("decl f(q){ skip; } :: skip;"));
    CallGraph cg = buildCallGraph(p);
    CHECK(cg.direct["f"].empty());
    CHECK(!cg.isRecursive("f"));
    CHECK(!cg.reaches("f", "f"));
}

TEST_CASE("a mutual pair forms one recursion class") {
    Program p = desugar(parseProgram(
        "decl f(q){ call g(q[-]); } decl g(q){ call f(q[+]); } :: call f(q);"));
    CallGraph cg = buildCallGraph(p);
    CHECK(cg.mutuallyRecursive("f", "g"));
    CHECK(cg.isRecursive("f"));
    CHECK(cg.isRecursive("g"));
    CHECK(!cg.strictlyAbove("f", "g"));
}

TEST_CASE("relations: ~ is an equivalence on recursive procs, > is strict") {
    // hand-built chain: a -> b -> c, c -> b (so b ~ c), a not recursive
    Program p = desugar(parseProgram(
        "decl a(q){ call b(q); } decl b(q){ call c(q[-]); } decl c(q){ call b(q[+]); } "
        ":: call a(q);"));
    CallGraph cg = buildCallGraph(p);
    CHECK(!cg.isRecursive("a"));
    CHECK(cg.mutuallyRecursive("b", "c"));
    CHECK(cg.mutuallyRecursive("c", "b"));
    CHECK(cg.strictlyAbove("a", "b"));
    CHECK(cg.strictlyAbove("a", "c"));
    CHECK(!cg.strictlyAbove("b", "c"));
    CHECK(!cg.strictlyAbove("b", "a"));
}

TEST_CASE("well-formedness accepts the corpus") {
    CHECK(checkWellFormed(test::loadCorpus("search.plp")).empty());
    CHECK(checkWellFormed(test::loadCorpus("sqlog.plp")).empty());
}

TEST_CASE("undeclared variables in a body are reported") {
    Program p = desugar(parseProgram("decl f(q){ r[1] *= NOT; } :: call f(q);"));
    auto diags = checkWellFormed(p);
    REQUIRE(!diags.empty());
    CHECK(diags[0].message.find("undeclared qubit variable 'r'") != std::string::npos);
}

TEST_CASE("overlapping call arguments are reported") {
    Program p = desugar(parseProgram("decl f(a, b){ skip; } :: call f(q, q);"));
    auto diags = checkWellFormed(p);
    REQUIRE(!diags.empty());
    CHECK(diags[0].message.find("overlapping call arguments") != std::string::npos);
}

TEST_CASE("unbound integer variables are reported") {
    Program p = desugar(parseProgram("decl f(q){ q[n] *= NOT; } :: call f(q);"));
    auto diags = checkWellFormed(p);
    REQUIRE(!diags.empty());
    CHECK(diags[0].message.find("unbound integer variable 'n'") != std::string::npos);
}

TEST_CASE("arity mismatches and missing angle functions are reported") {
    Program p = desugar(parseProgram("decl f(a, b){ skip; } :: call f(q);"));
    auto diags = checkWellFormed(p);
    REQUIRE(!diags.empty());
    CHECK(diags[0].message.find("expects 2 arguments") != std::string::npos);

    Program ph = desugar(parseProgram(":: q[1] *= Ph;"));
    auto phDiags = checkWellFormed(ph);
    REQUIRE(!phDiags.empty());
    CHECK(phDiags[0].message.find("requires an angle function") != std::string::npos);
}

TEST_CASE("HALF holds for the corpus and fails for the mutant") {
    Program search = test::loadCorpus("search.plp");
    CallGraph cg = buildCallGraph(search);
    CHECK(checkHalf(search, cg).ok);

    Program sqlog = test::loadCorpus("sqlog.plp");
    CHECK(checkHalf(sqlog, buildCallGraph(sqlog)).ok);

    Program mutant = test::loadCorpus("search_nonhalving.plp");
    auto res = checkHalf(mutant, buildCallGraph(mutant));
    CHECK(!res.ok);
    CHECK(res.violations.size() == 1);
}

TEST_CASE("removal alone is not halving, halves anywhere in the argument are") {
    Program removal = desugar(parseProgram("decl f(q){ call f(q \\ [1]); } :: call f(q);"));
    CHECK(!checkHalf(removal, buildCallGraph(removal)).ok);

    Program nested = desugar(parseProgram("decl f(q){ call f(q \\ [1] [-] \\ [1]); } :: call f(q);"));
    CHECK(checkHalf(nested, buildCallGraph(nested)).ok);
}

TEST_CASE("width: sqlog is 1 with the worked per-procedure values") {
    Program p = test::loadCorpus("sqlog.plp");
    WidthResult w = width(p, buildCallGraph(p));
    CHECK(w.perProc["f"] == 1);  // 0 + 1 + 0 over the sequence
    CHECK(w.perProc["g"] == 1);  // max(1, 0) over the qcase
    CHECK(w.width == 1);
}

TEST_CASE("width: sequential double recursion is 2, no recursion is 0") {
    Program two = test::loadCorpus("double_recursion.plp");
    CHECK(width(two, buildCallGraph(two)).width == 2);

    Program zero = desugar(parseProgram("decl f(q){ q[1] *= NOT; } :: call f(q);"));
    CHECK(width(zero, buildCallGraph(zero)).width == 0);

    // non-recursive calls cost nothing even in sequence
    Program calls = desugar(parseProgram(
        "decl h(q){ q[1] *= NOT; } decl f(q){ call h(q); call h(q); } :: call f(q);"));
    CHECK(width(calls, buildCallGraph(calls)).width == 0);
}

TEST_CASE("verdicts for the corpus and the mutants") {
    Verdict search = verdict(parseProgram(test::readProgramFile("search.plp")));
    CHECK(search.isPLP);
    CHECK(search.width == 1);

    Verdict sqlog = verdict(parseProgram(test::readProgramFile("sqlog.plp")));
    CHECK(sqlog.isPLP);
    CHECK(sqlog.width == 1);

    Verdict nonhalving = verdict(parseProgram(test::readProgramFile("search_nonhalving.plp")));
    CHECK(!nonhalving.isPLP);
    CHECK(nonhalving.wellFormed);
    CHECK(!nonhalving.isHalf);

    Verdict wide = verdict(parseProgram(test::readProgramFile("double_recursion.plp")));
    CHECK(!wide.isPLP);
    CHECK(wide.width == 2);
}

TEST_CASE("fuzzed generator output is always PLP") {
    fuzz::Rng rng(424242);
    for (int trial = 0; trial < 100; ++trial) {
        auto gen = fuzz::genPlpProgram(rng);
        Verdict v = verdict(gen.program);
        CAPTURE(prettyPrint(gen.program));
        CHECK(v.isPLP);
    }
}
