#include "doctest.h"

#include "plp/ast.hpp"
#include "plp/parser.hpp"
#include "support/fuzz.hpp"

using namespace plp;

TEST_CASE("varsOf collects the qubit variables of an expression") {
    // q \ [2,3] mentions only q
    auto expr = mkMultiRemove(mkQVar("q"), {2, 3});
    CHECK(varsOf(*expr) == std::set<std::string>{"q"});

    CHECK(varsOf(*mkSkip()).empty());

    auto call = mkCall("search", {mkRemove(mkSecondHalf(mkQVar("q1")), mkIntConst(1)), mkQVar("q2")});
    CHECK(varsOf(*call) == std::set<std::string>{"q1", "q2"});
}

TEST_CASE("varsOf sees variables in index positions") {
    auto expr = mkRemove(mkQVar("a"), mkSizeOf(mkQVar("b")));
    CHECK(varsOf(*expr) == std::set<std::string>{"a", "b"});
}

TEST_CASE("CNOT desugars to a qcase with a NOT branch") {
    auto q1 = mkQubit(mkQVar("a"), mkIntConst(1));
    auto q2 = mkQubit(mkQVar("b"), mkIntConst(1));
    auto sugar = mkGateMacro(GateMacro::Cnot, {q1, q2});
    auto want = mkQCase(q1, mkSkip(), mkApply(q2, GateName::Not));
    CHECK(equal(*desugar(sugar), *want));
}

TEST_CASE("TOF desugars to two nested qcases") {
    auto c1 = mkQubit(mkQVar("a"), mkIntConst(1));
    auto c2 = mkQubit(mkQVar("b"), mkIntConst(1));
    auto t = mkQubit(mkQVar("c"), mkIntConst(1));
    auto sugar = mkGateMacro(GateMacro::Tof, {c1, c2, t});
    auto want = mkQCase(c1, mkSkip(), mkQCase(c2, mkSkip(), mkApply(t, GateName::Not)));
    CHECK(equal(*desugar(sugar), *want));
}

TEST_CASE("SWAP desugars to three alternating CNOTs") {
    auto a = mkQubit(mkQVar("a"), mkIntConst(1));
    auto b = mkQubit(mkQVar("b"), mkIntConst(1));
    auto got = desugar(mkGateMacro(GateMacro::Swap, {a, b}));
    auto cnot = [](const QubitExpr& c, const QubitExpr& t) {
        return mkQCase(c, mkSkip(), mkApply(t, GateName::Not));
    };
    auto want = mkSeq({cnot(a, b), cnot(b, a), cnot(a, b)});
    CHECK(equal(*got, *want));
}

TEST_CASE("negative index sugar becomes |l| - n + 1") {
    // q[-1] -> q[|q| - 1 + 1]
    auto sugar = mkApply(mkQubit(mkQVar("q"), mkIntConst(-1)), GateName::Not);
    auto want = mkApply(
        mkQubit(mkQVar("q"), mkAddConst(mkAddConst(mkSizeOf(mkQVar("q")), -1), 1)), GateName::Not);
    CHECK(equal(*desugar(sugar), *want));
}

TEST_CASE("multi-removal desugars descending against the original list") {
    auto got = desugar(mkMultiRemove(mkQVar("q"), {2, 3}));
    // remove 3 first, then 2: positions stay valid
    auto want = mkRemove(mkRemove(mkQVar("q"), mkIntConst(3)), mkIntConst(2));
    CHECK(equal(*got, *want));

    // duplicates count once
    auto dup = desugar(mkMultiRemove(mkQVar("q"), {2, 2}));
    CHECK(equal(*dup, *mkRemove(mkQVar("q"), mkIntConst(2))));
}

TEST_CASE("multi-qubit qcase expands in binary counting order") {
    auto c1 = mkQubit(mkQVar("a"), mkIntConst(1));
    auto c2 = mkQubit(mkQVar("a"), mkIntConst(2));
    std::vector<StatementPtr> branches;
    for (int i = 0; i < 4; ++i) {
        branches.push_back(i == 2 ? mkApply(mkQubit(mkQVar("b"), mkIntConst(1)), GateName::Not)
                                  : mkSkip());
    }
    auto got = desugar(mkQCaseMulti({c1, c2}, branches));
    auto want = mkQCase(c1, mkQCase(c2, mkSkip(), mkSkip()),
                        mkQCase(c2, mkApply(mkQubit(mkQVar("b"), mkIntConst(1)), GateName::Not),
                                mkSkip()));
    CHECK(equal(*got, *want));
}

TEST_CASE("desugar is idempotent and preserves varsOf") {
    fuzz::Rng rng(20240817);
    for (int trial = 0; trial < 200; ++trial) {
        auto s = fuzz::genCoreStatement(rng, 3);
        auto once = desugar(s);
        CHECK(equal(*once, *desugar(once)));
        CHECK(varsOf(*s) == varsOf(*once));
    }
}

TEST_CASE("desugar of surface sugar preserves varsOf") {
    auto sugar = mkGateMacro(GateMacro::Swap, {mkQubit(mkQVar("a"), mkIntConst(-1)),
                                               mkQubit(mkQVar("b"), mkIntConst(1))});
    CHECK(varsOf(*sugar) == varsOf(*desugar(sugar)));
}

TEST_CASE("calls with overlapping argument variables are rejected") {
    CHECK_THROWS_AS(mkCall("f", {mkQVar("q"), mkQVar("q")}), std::invalid_argument);
    CHECK_THROWS_AS(mkCall("f", {mkFirstHalf(mkQVar("q")), mkRemove(mkQVar("q"), mkIntConst(1))}),
                    std::invalid_argument);
    CHECK_NOTHROW(mkCall("f", {mkQVar("a"), mkQVar("b")}));
}

TEST_CASE("sequences stay flattened") {
    auto inner = mkSeq({mkSkip(), mkSkip()});
    auto outer = mkSeq({inner, mkSkip()});
    const auto* seq = std::get_if<Seq>(&outer->node);
    REQUIRE(seq != nullptr);
    CHECK(seq->items.size() == 3);
}
