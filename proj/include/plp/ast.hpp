#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

// Abstract syntax for PLP programs. Nodes are immutable after construction
// and shared via shared_ptr, so subtrees may be reused freely (the desugarer
// and the inverter rely on this).

namespace plp {

// Byte offsets plus 1-based line/column of the first byte. Nodes built by
// rewrites inherit the span of the construct they replace.
struct SourceSpan {
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::uint32_t line = 0;
    std::uint32_t column = 0;
};

struct IntExpr;
struct BoolExpr;
struct ListExpr;
struct Statement;
struct AngleExpr;

using IntExprPtr = std::shared_ptr<const IntExpr>;
using BoolExprPtr = std::shared_ptr<const BoolExpr>;
using ListExprPtr = std::shared_ptr<const ListExpr>;
using StatementPtr = std::shared_ptr<const Statement>;
using AngleExprPtr = std::shared_ptr<const AngleExpr>;

// --- qubit-list expressions ---

struct QVar {
    std::string name;
};
struct Remove {
    ListExprPtr list;
    IntExprPtr index;
};
// Surface sugar: l \ [i1,...,ik] with k >= 2. Indices are literal and all of
// one sign; all are read against the original list.
struct MultiRemove {
    ListExprPtr list;
    std::vector<long long> indices;
};
struct FirstHalf {
    ListExprPtr list;
};
struct SecondHalf {
    ListExprPtr list;
};

struct ListExpr {
    std::variant<QVar, Remove, MultiRemove, FirstHalf, SecondHalf> node;
    SourceSpan span;
};

// --- integer expressions ---

struct IntVar {
    std::string name;
};
// Negative values only appear as surface index sugar (q[-n]); the desugarer
// rewrites them away.
struct IntConst {
    long long value = 0;
};
// i + k / i - k with a literal k (the grammar has no i + i).
struct AddConst {
    IntExprPtr operand;
    long long delta = 0;
};
// Ceiling division by two.
struct HalfCeil {
    IntExprPtr operand;
};
struct SizeOf {
    ListExprPtr list;
};

struct IntExpr {
    std::variant<IntVar, IntConst, AddConst, HalfCeil, SizeOf> node;
    SourceSpan span;
};

// --- boolean expressions ---

enum class CmpOp { Eq, Ne, Lt, Le, Gt, Ge };

struct Cmp {
    IntExprPtr lhs;
    CmpOp op = CmpOp::Eq;
    IntExprPtr rhs;
};
struct BoolAnd {
    BoolExprPtr lhs, rhs;
};
struct BoolOr {
    BoolExprPtr lhs, rhs;
};
struct BoolNot {
    BoolExprPtr operand;
};
struct BoolLit {
    bool value = false;
};

struct BoolExpr {
    std::variant<Cmp, BoolAnd, BoolOr, BoolNot, BoolLit> node;
    SourceSpan span;
};

// --- qubit expressions ---

struct QubitExpr {
    ListExprPtr list;
    IntExprPtr index;
    SourceSpan span;
};

// --- angle functions ---
//
// A gate may carry an angle function `lam x. e` mapping an integer argument
// to a real angle, taken modulo 2*pi at evaluation time.

struct AngleParam {};
struct AngleIntLit {
    long long value = 0;
};
struct AngleRealLit {
    double value = 0;
};
struct AnglePi {};
enum class AngleBinOp { Add, Sub, Mul, Div };
struct AngleBin {
    AngleBinOp op = AngleBinOp::Add;
    AngleExprPtr lhs, rhs;
};
struct AngleNeg {
    AngleExprPtr operand;
};

struct AngleExpr {
    std::variant<AngleParam, AngleIntLit, AngleRealLit, AnglePi, AngleBin, AngleNeg> node;
    SourceSpan span;
};

struct AngleFn {
    std::string param;
    AngleExprPtr body;
};

enum class GateName { Ph, RY, Not };

const char* gateNameText(GateName g);

// --- statements ---

struct Skip {};
struct Apply {
    QubitExpr target;
    GateName gate = GateName::Not;
    std::optional<AngleFn> angle;  // required for Ph/RY
    IntExprPtr arg;                // may be null; defaults to 0 at evaluation
};
// Sequences are kept flattened: items.size() >= 2 and no item is itself a Seq.
struct Seq {
    std::vector<StatementPtr> items;
};
struct If {
    BoolExprPtr cond;
    StatementPtr thenBranch;
    StatementPtr elseBranch;
};
struct QCase {
    QubitExpr control;
    StatementPtr zeroBranch;
    StatementPtr oneBranch;
};
// Surface sugar: qcase q1,...,qk of { 00..0 -> S, ..., 11..1 -> S } with the
// 2^k branches in binary counting order.
struct QCaseMulti {
    std::vector<QubitExpr> controls;
    std::vector<StatementPtr> branches;
};
struct Call {
    std::string proc;
    std::vector<ListExprPtr> args;
};
// Surface sugar for CNOT/SWAP/TOF.
struct GateMacro {
    enum Kind { Cnot, Swap, Tof } kind = Cnot;
    std::vector<QubitExpr> args;
};

struct Statement {
    std::variant<Skip, Apply, Seq, If, QCase, QCaseMulti, Call, GateMacro> node;
    SourceSpan span;
};

struct ProcDecl {
    std::string name;
    std::vector<std::string> params;
    StatementPtr body;
    SourceSpan span;
};

struct Program {
    std::vector<ProcDecl> decls;
    StatementPtr main;
    // The free qubit-list variables of main, in first-occurrence order. The
    // order fixes the memory layout of the statevector.
    std::vector<std::string> vars;
};

// --- structural queries ---

std::set<std::string> varsOf(const ListExpr& l);
std::set<std::string> varsOf(const IntExpr& e);
std::set<std::string> varsOf(const BoolExpr& b);
std::set<std::string> varsOf(const QubitExpr& q);
std::set<std::string> varsOf(const Statement& s);

// First-occurrence order of the qubit-list variables in a statement.
std::vector<std::string> varOrder(const Statement& s);

// --- desugaring ---
//
// Rewrites every surface construct into the core grammar: gate macros,
// multi-qubit qcase, negative literal indices, and multi-removal. Idempotent.

IntExprPtr desugar(const IntExprPtr& e);
BoolExprPtr desugar(const BoolExprPtr& b);
ListExprPtr desugar(const ListExprPtr& l);
QubitExpr desugar(const QubitExpr& q);
StatementPtr desugar(const StatementPtr& s);
Program desugar(const Program& p);

// --- structural equality, ignoring spans ---

bool equal(const IntExpr& a, const IntExpr& b);
bool equal(const BoolExpr& a, const BoolExpr& b);
bool equal(const ListExpr& a, const ListExpr& b);
bool equal(const QubitExpr& a, const QubitExpr& b);
bool equal(const AngleExpr& a, const AngleExpr& b);
bool equal(const AngleFn& a, const AngleFn& b);
bool equal(const Statement& a, const Statement& b);
bool equal(const Program& a, const Program& b);

// --- construction helpers ---
//
// Thin factories used by tests, the fuzzer and rewrites. makeSeq flattens
// nested sequences; makeCall rejects overlapping argument variables.

IntExprPtr mkIntVar(std::string name);
IntExprPtr mkIntConst(long long value);
IntExprPtr mkAddConst(IntExprPtr operand, long long delta);
IntExprPtr mkHalfCeil(IntExprPtr operand);
IntExprPtr mkSizeOf(ListExprPtr list);

BoolExprPtr mkCmp(IntExprPtr lhs, CmpOp op, IntExprPtr rhs);
BoolExprPtr mkAnd(BoolExprPtr lhs, BoolExprPtr rhs);
BoolExprPtr mkOr(BoolExprPtr lhs, BoolExprPtr rhs);
BoolExprPtr mkNot(BoolExprPtr operand);
BoolExprPtr mkBoolLit(bool value);

ListExprPtr mkQVar(std::string name);
ListExprPtr mkRemove(ListExprPtr list, IntExprPtr index);
ListExprPtr mkMultiRemove(ListExprPtr list, std::vector<long long> indices);
ListExprPtr mkFirstHalf(ListExprPtr list);
ListExprPtr mkSecondHalf(ListExprPtr list);

QubitExpr mkQubit(ListExprPtr list, IntExprPtr index);

AngleExprPtr mkAngleParam();
AngleExprPtr mkAngleInt(long long value);
AngleExprPtr mkAngleReal(double value);
AngleExprPtr mkAnglePi();
AngleExprPtr mkAngleBin(AngleBinOp op, AngleExprPtr lhs, AngleExprPtr rhs);
AngleExprPtr mkAngleNeg(AngleExprPtr operand);

StatementPtr mkSkip();
StatementPtr mkApply(QubitExpr target, GateName gate, std::optional<AngleFn> angle = std::nullopt,
                     IntExprPtr arg = nullptr);
StatementPtr mkSeq(std::vector<StatementPtr> items);
StatementPtr mkIf(BoolExprPtr cond, StatementPtr thenBranch, StatementPtr elseBranch);
StatementPtr mkQCase(QubitExpr control, StatementPtr zeroBranch, StatementPtr oneBranch);
StatementPtr mkQCaseMulti(std::vector<QubitExpr> controls, std::vector<StatementPtr> branches);
// Throws std::invalid_argument when two arguments share a variable.
StatementPtr mkCall(std::string proc, std::vector<ListExprPtr> args);
StatementPtr mkGateMacro(GateMacro::Kind kind, std::vector<QubitExpr> args);

// Substitutes qubit-list expressions for parameter names; used by the
// interpreter's call rule. Names without a mapping are left untouched.
StatementPtr substitute(const StatementPtr& s,
                        const std::vector<std::pair<std::string, ListExprPtr>>& mapping);

}  // namespace plp
