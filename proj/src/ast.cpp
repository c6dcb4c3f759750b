#include "plp/ast.hpp"

#include <algorithm>
#include <stdexcept>

namespace plp {

const char* gateNameText(GateName g) {
    switch (g) {
        case GateName::Ph: return "Ph";
        case GateName::RY: return "RY";
        case GateName::Not: return "NOT";
    }
    return "?";
}

// --- varsOf ---

namespace {

void collectVars(const ListExpr& l, std::set<std::string>& out);

void collectVars(const IntExpr& e, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AddConst> || std::is_same_v<T, HalfCeil>) {
                collectVars(*n.operand, out);
            } else if constexpr (std::is_same_v<T, SizeOf>) {
                collectVars(*n.list, out);
            }
        },
        e.node);
}

void collectVars(const ListExpr& l, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, QVar>) {
                out.insert(n.name);
            } else if constexpr (std::is_same_v<T, Remove>) {
                collectVars(*n.list, out);
                collectVars(*n.index, out);
            } else if constexpr (std::is_same_v<T, MultiRemove>) {
                collectVars(*n.list, out);
            } else {
                collectVars(*n.list, out);
            }
        },
        l.node);
}

void collectVars(const BoolExpr& b, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Cmp>) {
                collectVars(*n.lhs, out);
                collectVars(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, BoolAnd> || std::is_same_v<T, BoolOr>) {
                collectVars(*n.lhs, out);
                collectVars(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, BoolNot>) {
                collectVars(*n.operand, out);
            }
        },
        b.node);
}

void collectVars(const QubitExpr& q, std::set<std::string>& out) {
    collectVars(*q.list, out);
    collectVars(*q.index, out);
}

void collectVars(const Statement& s, std::set<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Apply>) {
                collectVars(n.target, out);
                if (n.arg) collectVars(*n.arg, out);
            } else if constexpr (std::is_same_v<T, Seq>) {
                for (const auto& item : n.items) collectVars(*item, out);
            } else if constexpr (std::is_same_v<T, If>) {
                collectVars(*n.cond, out);
                collectVars(*n.thenBranch, out);
                collectVars(*n.elseBranch, out);
            } else if constexpr (std::is_same_v<T, QCase>) {
                collectVars(n.control, out);
                collectVars(*n.zeroBranch, out);
                collectVars(*n.oneBranch, out);
            } else if constexpr (std::is_same_v<T, QCaseMulti>) {
                for (const auto& c : n.controls) collectVars(c, out);
                for (const auto& br : n.branches) collectVars(*br, out);
            } else if constexpr (std::is_same_v<T, Call>) {
                for (const auto& a : n.args) collectVars(*a, out);
            } else if constexpr (std::is_same_v<T, GateMacro>) {
                for (const auto& a : n.args) collectVars(a, out);
            }
        },
        s.node);
}

void collectOrder(const ListExpr& l, std::vector<std::string>& out);

void collectOrder(const IntExpr& e, std::vector<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AddConst> || std::is_same_v<T, HalfCeil>) {
                collectOrder(*n.operand, out);
            } else if constexpr (std::is_same_v<T, SizeOf>) {
                collectOrder(*n.list, out);
            }
        },
        e.node);
}

void collectOrder(const ListExpr& l, std::vector<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, QVar>) {
                if (std::find(out.begin(), out.end(), n.name) == out.end()) out.push_back(n.name);
            } else if constexpr (std::is_same_v<T, Remove>) {
                collectOrder(*n.list, out);
                collectOrder(*n.index, out);
            } else if constexpr (std::is_same_v<T, MultiRemove>) {
                collectOrder(*n.list, out);
            } else {
                collectOrder(*n.list, out);
            }
        },
        l.node);
}

void collectOrder(const BoolExpr& b, std::vector<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Cmp>) {
                collectOrder(*n.lhs, out);
                collectOrder(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, BoolAnd> || std::is_same_v<T, BoolOr>) {
                collectOrder(*n.lhs, out);
                collectOrder(*n.rhs, out);
            } else if constexpr (std::is_same_v<T, BoolNot>) {
                collectOrder(*n.operand, out);
            }
        },
        b.node);
}

void collectOrder(const QubitExpr& q, std::vector<std::string>& out) {
    collectOrder(*q.list, out);
    collectOrder(*q.index, out);
}

void collectOrder(const Statement& s, std::vector<std::string>& out) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Apply>) {
                collectOrder(n.target, out);
                if (n.arg) collectOrder(*n.arg, out);
            } else if constexpr (std::is_same_v<T, Seq>) {
                for (const auto& item : n.items) collectOrder(*item, out);
            } else if constexpr (std::is_same_v<T, If>) {
                collectOrder(*n.cond, out);
                collectOrder(*n.thenBranch, out);
                collectOrder(*n.elseBranch, out);
            } else if constexpr (std::is_same_v<T, QCase>) {
                collectOrder(n.control, out);
                collectOrder(*n.zeroBranch, out);
                collectOrder(*n.oneBranch, out);
            } else if constexpr (std::is_same_v<T, QCaseMulti>) {
                for (const auto& c : n.controls) collectOrder(c, out);
                for (const auto& br : n.branches) collectOrder(*br, out);
            } else if constexpr (std::is_same_v<T, Call>) {
                for (const auto& a : n.args) collectOrder(*a, out);
            } else if constexpr (std::is_same_v<T, GateMacro>) {
                for (const auto& a : n.args) collectOrder(a, out);
            }
        },
        s.node);
}

}  // namespace

std::set<std::string> varsOf(const ListExpr& l) {
    std::set<std::string> out;
    collectVars(l, out);
    return out;
}
std::set<std::string> varsOf(const IntExpr& e) {
    std::set<std::string> out;
    collectVars(e, out);
    return out;
}
std::set<std::string> varsOf(const BoolExpr& b) {
    std::set<std::string> out;
    collectVars(b, out);
    return out;
}
std::set<std::string> varsOf(const QubitExpr& q) {
    std::set<std::string> out;
    collectVars(q, out);
    return out;
}
std::set<std::string> varsOf(const Statement& s) {
    std::set<std::string> out;
    collectVars(s, out);
    return out;
}

std::vector<std::string> varOrder(const Statement& s) {
    std::vector<std::string> out;
    collectOrder(s, out);
    return out;
}

// --- factories ---

IntExprPtr mkIntVar(std::string name) {
    return std::make_shared<IntExpr>(IntExpr{IntVar{std::move(name)}, {}});
}
IntExprPtr mkIntConst(long long value) {
    return std::make_shared<IntExpr>(IntExpr{IntConst{value}, {}});
}
IntExprPtr mkAddConst(IntExprPtr operand, long long delta) {
    return std::make_shared<IntExpr>(IntExpr{AddConst{std::move(operand), delta}, {}});
}
IntExprPtr mkHalfCeil(IntExprPtr operand) {
    return std::make_shared<IntExpr>(IntExpr{HalfCeil{std::move(operand)}, {}});
}
IntExprPtr mkSizeOf(ListExprPtr list) {
    return std::make_shared<IntExpr>(IntExpr{SizeOf{std::move(list)}, {}});
}

BoolExprPtr mkCmp(IntExprPtr lhs, CmpOp op, IntExprPtr rhs) {
    return std::make_shared<BoolExpr>(BoolExpr{Cmp{std::move(lhs), op, std::move(rhs)}, {}});
}
BoolExprPtr mkAnd(BoolExprPtr lhs, BoolExprPtr rhs) {
    return std::make_shared<BoolExpr>(BoolExpr{BoolAnd{std::move(lhs), std::move(rhs)}, {}});
}
BoolExprPtr mkOr(BoolExprPtr lhs, BoolExprPtr rhs) {
    return std::make_shared<BoolExpr>(BoolExpr{BoolOr{std::move(lhs), std::move(rhs)}, {}});
}
BoolExprPtr mkNot(BoolExprPtr operand) {
    return std::make_shared<BoolExpr>(BoolExpr{BoolNot{std::move(operand)}, {}});
}
BoolExprPtr mkBoolLit(bool value) {
    return std::make_shared<BoolExpr>(BoolExpr{BoolLit{value}, {}});
}

ListExprPtr mkQVar(std::string name) {
    return std::make_shared<ListExpr>(ListExpr{QVar{std::move(name)}, {}});
}
ListExprPtr mkRemove(ListExprPtr list, IntExprPtr index) {
    return std::make_shared<ListExpr>(ListExpr{Remove{std::move(list), std::move(index)}, {}});
}
ListExprPtr mkMultiRemove(ListExprPtr list, std::vector<long long> indices) {
    return std::make_shared<ListExpr>(ListExpr{MultiRemove{std::move(list), std::move(indices)}, {}});
}
ListExprPtr mkFirstHalf(ListExprPtr list) {
    return std::make_shared<ListExpr>(ListExpr{FirstHalf{std::move(list)}, {}});
}
ListExprPtr mkSecondHalf(ListExprPtr list) {
    return std::make_shared<ListExpr>(ListExpr{SecondHalf{std::move(list)}, {}});
}

QubitExpr mkQubit(ListExprPtr list, IntExprPtr index) {
    return QubitExpr{std::move(list), std::move(index), {}};
}

AngleExprPtr mkAngleParam() {
    return std::make_shared<AngleExpr>(AngleExpr{AngleParam{}, {}});
}
AngleExprPtr mkAngleInt(long long value) {
    return std::make_shared<AngleExpr>(AngleExpr{AngleIntLit{value}, {}});
}
AngleExprPtr mkAngleReal(double value) {
    return std::make_shared<AngleExpr>(AngleExpr{AngleRealLit{value}, {}});
}
AngleExprPtr mkAnglePi() {
    return std::make_shared<AngleExpr>(AngleExpr{AnglePi{}, {}});
}
AngleExprPtr mkAngleBin(AngleBinOp op, AngleExprPtr lhs, AngleExprPtr rhs) {
    return std::make_shared<AngleExpr>(AngleExpr{AngleBin{op, std::move(lhs), std::move(rhs)}, {}});
}
AngleExprPtr mkAngleNeg(AngleExprPtr operand) {
    return std::make_shared<AngleExpr>(AngleExpr{AngleNeg{std::move(operand)}, {}});
}

StatementPtr mkSkip() {
    return std::make_shared<Statement>(Statement{Skip{}, {}});
}
StatementPtr mkApply(QubitExpr target, GateName gate, std::optional<AngleFn> angle, IntExprPtr arg) {
    return std::make_shared<Statement>(
        Statement{Apply{std::move(target), gate, std::move(angle), std::move(arg)}, {}});
}

StatementPtr mkSeq(std::vector<StatementPtr> items) {
    std::vector<StatementPtr> flat;
    for (auto& item : items) {
        if (!item) continue;
        if (const auto* sub = std::get_if<Seq>(&item->node)) {
            flat.insert(flat.end(), sub->items.begin(), sub->items.end());
        } else {
            flat.push_back(std::move(item));
        }
    }
    if (flat.empty()) return mkSkip();
    if (flat.size() == 1) return flat.front();
    return std::make_shared<Statement>(Statement{Seq{std::move(flat)}, {}});
}

StatementPtr mkIf(BoolExprPtr cond, StatementPtr thenBranch, StatementPtr elseBranch) {
    return std::make_shared<Statement>(
        Statement{If{std::move(cond), std::move(thenBranch), std::move(elseBranch)}, {}});
}
StatementPtr mkQCase(QubitExpr control, StatementPtr zeroBranch, StatementPtr oneBranch) {
    return std::make_shared<Statement>(
        Statement{QCase{std::move(control), std::move(zeroBranch), std::move(oneBranch)}, {}});
}
StatementPtr mkQCaseMulti(std::vector<QubitExpr> controls, std::vector<StatementPtr> branches) {
    return std::make_shared<Statement>(
        Statement{QCaseMulti{std::move(controls), std::move(branches)}, {}});
}

StatementPtr mkCall(std::string proc, std::vector<ListExprPtr> args) {
    // No-cloning restriction: argument variable sets must be pairwise disjoint.
    for (std::size_t i = 0; i < args.size(); ++i) {
        auto vi = varsOf(*args[i]);
        for (std::size_t j = i + 1; j < args.size(); ++j) {
            for (const auto& v : varsOf(*args[j])) {
                if (vi.count(v)) {
                    throw std::invalid_argument("call to " + proc +
                                                ": overlapping argument variable " + v);
                }
            }
        }
    }
    return std::make_shared<Statement>(Statement{Call{std::move(proc), std::move(args)}, {}});
}

StatementPtr mkGateMacro(GateMacro::Kind kind, std::vector<QubitExpr> args) {
    return std::make_shared<Statement>(Statement{GateMacro{kind, std::move(args)}, {}});
}

// --- desugaring ---

namespace {

// q[-n] reads as q[|q| - n + 1]; likewise for removal indices.
IntExprPtr negIndexRewrite(const ListExprPtr& base, long long negative, SourceSpan span) {
    auto size = std::make_shared<IntExpr>(IntExpr{SizeOf{base}, span});
    auto minus = std::make_shared<IntExpr>(IntExpr{AddConst{size, negative}, span});
    return std::make_shared<IntExpr>(IntExpr{AddConst{minus, 1}, span});
}

IntExprPtr desugarIndex(const IntExprPtr& idx, const ListExprPtr& desugaredBase) {
    if (const auto* c = std::get_if<IntConst>(&idx->node); c && c->value < 0) {
        return negIndexRewrite(desugaredBase, c->value, idx->span);
    }
    return desugar(idx);
}

StatementPtr desugarCnot(const QubitExpr& c, const QubitExpr& t, SourceSpan span) {
    auto target = mkApply(desugar(t), GateName::Not);
    auto stmt = std::make_shared<Statement>(Statement{QCase{desugar(c), mkSkip(), target}, span});
    return stmt;
}

}  // namespace

IntExprPtr desugar(const IntExprPtr& e) {
    return std::visit(
        [&](const auto& n) -> IntExprPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AddConst>) {
                return std::make_shared<IntExpr>(IntExpr{AddConst{desugar(n.operand), n.delta}, e->span});
            } else if constexpr (std::is_same_v<T, HalfCeil>) {
                return std::make_shared<IntExpr>(IntExpr{HalfCeil{desugar(n.operand)}, e->span});
            } else if constexpr (std::is_same_v<T, SizeOf>) {
                return std::make_shared<IntExpr>(IntExpr{SizeOf{desugar(n.list)}, e->span});
            } else {
                return e;
            }
        },
        e->node);
}

BoolExprPtr desugar(const BoolExprPtr& b) {
    return std::visit(
        [&](const auto& n) -> BoolExprPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Cmp>) {
                return std::make_shared<BoolExpr>(
                    BoolExpr{Cmp{desugar(n.lhs), n.op, desugar(n.rhs)}, b->span});
            } else if constexpr (std::is_same_v<T, BoolAnd>) {
                return std::make_shared<BoolExpr>(
                    BoolExpr{BoolAnd{desugar(n.lhs), desugar(n.rhs)}, b->span});
            } else if constexpr (std::is_same_v<T, BoolOr>) {
                return std::make_shared<BoolExpr>(
                    BoolExpr{BoolOr{desugar(n.lhs), desugar(n.rhs)}, b->span});
            } else if constexpr (std::is_same_v<T, BoolNot>) {
                return std::make_shared<BoolExpr>(BoolExpr{BoolNot{desugar(n.operand)}, b->span});
            } else {
                return b;
            }
        },
        b->node);
}

ListExprPtr desugar(const ListExprPtr& l) {
    return std::visit(
        [&](const auto& n) -> ListExprPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, QVar>) {
                return l;
            } else if constexpr (std::is_same_v<T, Remove>) {
                auto base = desugar(n.list);
                return std::make_shared<ListExpr>(
                    ListExpr{Remove{base, desugarIndex(n.index, base)}, l->span});
            } else if constexpr (std::is_same_v<T, MultiRemove>) {
                // All indices are read against the original list; removing in
                // descending position order keeps the remaining ones valid.
                auto base = desugar(n.list);
                std::vector<long long> idx = n.indices;
                std::sort(idx.begin(), idx.end(), std::greater<>());
                idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
                ListExprPtr cur = base;
                for (long long k : idx) {
                    IntExprPtr pos = k < 0 ? negIndexRewrite(base, k, l->span)
                                           : mkIntConst(k);
                    cur = std::make_shared<ListExpr>(ListExpr{Remove{cur, pos}, l->span});
                }
                return cur;
            } else if constexpr (std::is_same_v<T, FirstHalf>) {
                return std::make_shared<ListExpr>(ListExpr{FirstHalf{desugar(n.list)}, l->span});
            } else {
                return std::make_shared<ListExpr>(ListExpr{SecondHalf{desugar(n.list)}, l->span});
            }
        },
        l->node);
}

QubitExpr desugar(const QubitExpr& q) {
    auto base = desugar(q.list);
    return QubitExpr{base, desugarIndex(q.index, base), q.span};
}

StatementPtr desugar(const StatementPtr& s) {
    return std::visit(
        [&](const auto& n) -> StatementPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip>) {
                return s;
            } else if constexpr (std::is_same_v<T, Apply>) {
                return std::make_shared<Statement>(Statement{
                    Apply{desugar(n.target), n.gate, n.angle, n.arg ? desugar(n.arg) : nullptr},
                    s->span});
            } else if constexpr (std::is_same_v<T, Seq>) {
                std::vector<StatementPtr> items;
                items.reserve(n.items.size());
                for (const auto& item : n.items) items.push_back(desugar(item));
                auto flat = mkSeq(std::move(items));
                return flat;
            } else if constexpr (std::is_same_v<T, If>) {
                return std::make_shared<Statement>(Statement{
                    If{desugar(n.cond), desugar(n.thenBranch), desugar(n.elseBranch)}, s->span});
            } else if constexpr (std::is_same_v<T, QCase>) {
                return std::make_shared<Statement>(Statement{
                    QCase{desugar(n.control), desugar(n.zeroBranch), desugar(n.oneBranch)},
                    s->span});
            } else if constexpr (std::is_same_v<T, QCaseMulti>) {
                // Nested expansion, first control outermost; branches are laid
                // out in binary counting order.
                std::vector<StatementPtr> branches;
                branches.reserve(n.branches.size());
                for (const auto& br : n.branches) branches.push_back(desugar(br));
                std::vector<QubitExpr> controls;
                controls.reserve(n.controls.size());
                for (const auto& c : n.controls) controls.push_back(desugar(c));
                // Fold right-to-left: each level halves the branch vector.
                std::vector<StatementPtr> level = std::move(branches);
                for (std::size_t ci = controls.size(); ci-- > 1;) {
                    std::vector<StatementPtr> next;
                    next.reserve(level.size() / 2);
                    for (std::size_t b = 0; b + 1 < level.size(); b += 2) {
                        next.push_back(std::make_shared<Statement>(
                            Statement{QCase{controls[ci], level[b], level[b + 1]}, s->span}));
                    }
                    level = std::move(next);
                }
                return std::make_shared<Statement>(
                    Statement{QCase{controls[0], level[0], level[1]}, s->span});
            } else if constexpr (std::is_same_v<T, Call>) {
                std::vector<ListExprPtr> args;
                args.reserve(n.args.size());
                for (const auto& a : n.args) args.push_back(desugar(a));
                return std::make_shared<Statement>(Statement{Call{n.proc, std::move(args)}, s->span});
            } else {  // GateMacro
                const GateMacro& m = n;
                switch (m.kind) {
                    case GateMacro::Cnot:
                        return desugarCnot(m.args[0], m.args[1], s->span);
                    case GateMacro::Swap: {
                        std::vector<StatementPtr> seq;
                        seq.push_back(desugarCnot(m.args[0], m.args[1], s->span));
                        seq.push_back(desugarCnot(m.args[1], m.args[0], s->span));
                        seq.push_back(desugarCnot(m.args[0], m.args[1], s->span));
                        return std::make_shared<Statement>(Statement{Seq{std::move(seq)}, s->span});
                    }
                    case GateMacro::Tof: {
                        auto inner = desugarCnot(m.args[1], m.args[2], s->span);
                        return std::make_shared<Statement>(
                            Statement{QCase{desugar(m.args[0]), mkSkip(), inner}, s->span});
                    }
                }
                return s;
            }
        },
        s->node);
}

Program desugar(const Program& p) {
    Program out;
    out.vars = p.vars;
    out.decls.reserve(p.decls.size());
    for (const auto& d : p.decls) {
        out.decls.push_back(ProcDecl{d.name, d.params, desugar(d.body), d.span});
    }
    out.main = desugar(p.main);
    return out;
}

// --- equality ---

bool equal(const IntExpr& a, const IntExpr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, IntVar>) {
                return x.name == y.name;
            } else if constexpr (std::is_same_v<T, IntConst>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, AddConst>) {
                return x.delta == y.delta && equal(*x.operand, *y.operand);
            } else if constexpr (std::is_same_v<T, HalfCeil>) {
                return equal(*x.operand, *y.operand);
            } else {
                return equal(*x.list, *y.list);
            }
        },
        a.node);
}

bool equal(const ListExpr& a, const ListExpr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, QVar>) {
                return x.name == y.name;
            } else if constexpr (std::is_same_v<T, Remove>) {
                return equal(*x.list, *y.list) && equal(*x.index, *y.index);
            } else if constexpr (std::is_same_v<T, MultiRemove>) {
                return x.indices == y.indices && equal(*x.list, *y.list);
            } else {
                return equal(*x.list, *y.list);
            }
        },
        a.node);
}

bool equal(const BoolExpr& a, const BoolExpr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Cmp>) {
                return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
            } else if constexpr (std::is_same_v<T, BoolAnd> || std::is_same_v<T, BoolOr>) {
                return equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
            } else if constexpr (std::is_same_v<T, BoolNot>) {
                return equal(*x.operand, *y.operand);
            } else {
                return x.value == y.value;
            }
        },
        a.node);
}

bool equal(const QubitExpr& a, const QubitExpr& b) {
    return equal(*a.list, *b.list) && equal(*a.index, *b.index);
}

bool equal(const AngleExpr& a, const AngleExpr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, AngleIntLit>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, AngleRealLit>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, AngleBin>) {
                return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
            } else if constexpr (std::is_same_v<T, AngleNeg>) {
                return equal(*x.operand, *y.operand);
            } else {
                return true;
            }
        },
        a.node);
}

bool equal(const AngleFn& a, const AngleFn& b) {
    return a.param == b.param && equal(*a.body, *b.body);
}

bool equal(const Statement& a, const Statement& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) -> bool {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, Skip>) {
                return true;
            } else if constexpr (std::is_same_v<T, Apply>) {
                if (x.gate != y.gate || !equal(x.target, y.target)) return false;
                if (x.angle.has_value() != y.angle.has_value()) return false;
                if (x.angle && !equal(*x.angle, *y.angle)) return false;
                if ((x.arg == nullptr) != (y.arg == nullptr)) return false;
                return !x.arg || equal(*x.arg, *y.arg);
            } else if constexpr (std::is_same_v<T, Seq>) {
                if (x.items.size() != y.items.size()) return false;
                for (std::size_t i = 0; i < x.items.size(); ++i) {
                    if (!equal(*x.items[i], *y.items[i])) return false;
                }
                return true;
            } else if constexpr (std::is_same_v<T, If>) {
                return equal(*x.cond, *y.cond) && equal(*x.thenBranch, *y.thenBranch) &&
                       equal(*x.elseBranch, *y.elseBranch);
            } else if constexpr (std::is_same_v<T, QCase>) {
                return equal(x.control, y.control) && equal(*x.zeroBranch, *y.zeroBranch) &&
                       equal(*x.oneBranch, *y.oneBranch);
            } else if constexpr (std::is_same_v<T, QCaseMulti>) {
                if (x.controls.size() != y.controls.size() ||
                    x.branches.size() != y.branches.size()) {
                    return false;
                }
                for (std::size_t i = 0; i < x.controls.size(); ++i) {
                    if (!equal(x.controls[i], y.controls[i])) return false;
                }
                for (std::size_t i = 0; i < x.branches.size(); ++i) {
                    if (!equal(*x.branches[i], *y.branches[i])) return false;
                }
                return true;
            } else if constexpr (std::is_same_v<T, Call>) {
                if (x.proc != y.proc || x.args.size() != y.args.size()) return false;
                for (std::size_t i = 0; i < x.args.size(); ++i) {
                    if (!equal(*x.args[i], *y.args[i])) return false;
                }
                return true;
            } else {  // GateMacro
                if (x.kind != y.kind || x.args.size() != y.args.size()) return false;
                for (std::size_t i = 0; i < x.args.size(); ++i) {
                    if (!equal(x.args[i], y.args[i])) return false;
                }
                return true;
            }
        },
        a.node);
}

bool equal(const Program& a, const Program& b) {
    if (a.vars != b.vars || a.decls.size() != b.decls.size()) return false;
    for (std::size_t i = 0; i < a.decls.size(); ++i) {
        const auto& da = a.decls[i];
        const auto& db = b.decls[i];
        if (da.name != db.name || da.params != db.params || !equal(*da.body, *db.body)) {
            return false;
        }
    }
    return equal(*a.main, *b.main);
}

// --- substitution ---

namespace {

ListExprPtr substituteList(const ListExprPtr& l,
                           const std::vector<std::pair<std::string, ListExprPtr>>& mapping);

IntExprPtr substituteInt(const IntExprPtr& e,
                         const std::vector<std::pair<std::string, ListExprPtr>>& mapping) {
    return std::visit(
        [&](const auto& n) -> IntExprPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AddConst>) {
                return std::make_shared<IntExpr>(
                    IntExpr{AddConst{substituteInt(n.operand, mapping), n.delta}, e->span});
            } else if constexpr (std::is_same_v<T, HalfCeil>) {
                return std::make_shared<IntExpr>(
                    IntExpr{HalfCeil{substituteInt(n.operand, mapping)}, e->span});
            } else if constexpr (std::is_same_v<T, SizeOf>) {
                return std::make_shared<IntExpr>(
                    IntExpr{SizeOf{substituteList(n.list, mapping)}, e->span});
            } else {
                return e;
            }
        },
        e->node);
}

ListExprPtr substituteList(const ListExprPtr& l,
                           const std::vector<std::pair<std::string, ListExprPtr>>& mapping) {
    return std::visit(
        [&](const auto& n) -> ListExprPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, QVar>) {
                for (const auto& [name, repl] : mapping) {
                    if (name == n.name) return repl;
                }
                return l;
            } else if constexpr (std::is_same_v<T, Remove>) {
                return std::make_shared<ListExpr>(ListExpr{
                    Remove{substituteList(n.list, mapping), substituteInt(n.index, mapping)},
                    l->span});
            } else if constexpr (std::is_same_v<T, MultiRemove>) {
                return std::make_shared<ListExpr>(
                    ListExpr{MultiRemove{substituteList(n.list, mapping), n.indices}, l->span});
            } else if constexpr (std::is_same_v<T, FirstHalf>) {
                return std::make_shared<ListExpr>(
                    ListExpr{FirstHalf{substituteList(n.list, mapping)}, l->span});
            } else {
                return std::make_shared<ListExpr>(
                    ListExpr{SecondHalf{substituteList(n.list, mapping)}, l->span});
            }
        },
        l->node);
}

BoolExprPtr substituteBool(const BoolExprPtr& b,
                           const std::vector<std::pair<std::string, ListExprPtr>>& mapping) {
    return std::visit(
        [&](const auto& n) -> BoolExprPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Cmp>) {
                return std::make_shared<BoolExpr>(BoolExpr{
                    Cmp{substituteInt(n.lhs, mapping), n.op, substituteInt(n.rhs, mapping)},
                    b->span});
            } else if constexpr (std::is_same_v<T, BoolAnd>) {
                return std::make_shared<BoolExpr>(BoolExpr{
                    BoolAnd{substituteBool(n.lhs, mapping), substituteBool(n.rhs, mapping)},
                    b->span});
            } else if constexpr (std::is_same_v<T, BoolOr>) {
                return std::make_shared<BoolExpr>(BoolExpr{
                    BoolOr{substituteBool(n.lhs, mapping), substituteBool(n.rhs, mapping)},
                    b->span});
            } else if constexpr (std::is_same_v<T, BoolNot>) {
                return std::make_shared<BoolExpr>(
                    BoolExpr{BoolNot{substituteBool(n.operand, mapping)}, b->span});
            } else {
                return b;
            }
        },
        b->node);
}

QubitExpr substituteQubit(const QubitExpr& q,
                          const std::vector<std::pair<std::string, ListExprPtr>>& mapping) {
    return QubitExpr{substituteList(q.list, mapping), substituteInt(q.index, mapping), q.span};
}

}  // namespace

StatementPtr substitute(const StatementPtr& s,
                        const std::vector<std::pair<std::string, ListExprPtr>>& mapping) {
    return std::visit(
        [&](const auto& n) -> StatementPtr {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip>) {
                return s;
            } else if constexpr (std::is_same_v<T, Apply>) {
                return std::make_shared<Statement>(
                    Statement{Apply{substituteQubit(n.target, mapping), n.gate, n.angle,
                                    n.arg ? substituteInt(n.arg, mapping) : nullptr},
                              s->span});
            } else if constexpr (std::is_same_v<T, Seq>) {
                std::vector<StatementPtr> items;
                items.reserve(n.items.size());
                for (const auto& item : n.items) items.push_back(substitute(item, mapping));
                return std::make_shared<Statement>(Statement{Seq{std::move(items)}, s->span});
            } else if constexpr (std::is_same_v<T, If>) {
                return std::make_shared<Statement>(
                    Statement{If{substituteBool(n.cond, mapping), substitute(n.thenBranch, mapping),
                                 substitute(n.elseBranch, mapping)},
                              s->span});
            } else if constexpr (std::is_same_v<T, QCase>) {
                return std::make_shared<Statement>(
                    Statement{QCase{substituteQubit(n.control, mapping),
                                    substitute(n.zeroBranch, mapping),
                                    substitute(n.oneBranch, mapping)},
                              s->span});
            } else if constexpr (std::is_same_v<T, QCaseMulti>) {
                std::vector<QubitExpr> controls;
                for (const auto& c : n.controls) controls.push_back(substituteQubit(c, mapping));
                std::vector<StatementPtr> branches;
                for (const auto& br : n.branches) branches.push_back(substitute(br, mapping));
                return std::make_shared<Statement>(
                    Statement{QCaseMulti{std::move(controls), std::move(branches)}, s->span});
            } else if constexpr (std::is_same_v<T, Call>) {
                std::vector<ListExprPtr> args;
                args.reserve(n.args.size());
                for (const auto& a : n.args) args.push_back(substituteList(a, mapping));
                return std::make_shared<Statement>(Statement{Call{n.proc, std::move(args)}, s->span});
            } else {  // GateMacro
                std::vector<QubitExpr> args;
                for (const auto& a : n.args) args.push_back(substituteQubit(a, mapping));
                return std::make_shared<Statement>(Statement{GateMacro{n.kind, std::move(args)}, s->span});
            }
        },
        s->node);
}

}  // namespace plp
