#include "plp/analysis.hpp"

#include <algorithm>
#include <functional>

namespace plp {

namespace {

void forEachCall(const Statement& s, const std::function<void(const Call&, SourceSpan)>& fn) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Seq>) {
                for (const auto& item : n.items) forEachCall(*item, fn);
            } else if constexpr (std::is_same_v<T, If>) {
                forEachCall(*n.thenBranch, fn);
                forEachCall(*n.elseBranch, fn);
            } else if constexpr (std::is_same_v<T, QCase>) {
                forEachCall(*n.zeroBranch, fn);
                forEachCall(*n.oneBranch, fn);
            } else if constexpr (std::is_same_v<T, QCaseMulti>) {
                for (const auto& br : n.branches) forEachCall(*br, fn);
            } else if constexpr (std::is_same_v<T, Call>) {
                fn(n, s.span);
            }
        },
        s.node);
}

bool containsHalfNode(const ListExpr& l) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, QVar>) {
                return false;
            } else if constexpr (std::is_same_v<T, FirstHalf> || std::is_same_v<T, SecondHalf>) {
                return true;
            } else {
                return containsHalfNode(*n.list);
            }
        },
        l.node);
}

bool containsIntVar(const IntExpr& e, std::string* name);

bool containsIntVar(const ListExpr& l, std::string* name) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, QVar>) {
                return false;
            } else if constexpr (std::is_same_v<T, Remove>) {
                return containsIntVar(*n.list, name) || containsIntVar(*n.index, name);
            } else if constexpr (std::is_same_v<T, MultiRemove>) {
                return containsIntVar(*n.list, name);
            } else {
                return containsIntVar(*n.list, name);
            }
        },
        l.node);
}

bool containsIntVar(const IntExpr& e, std::string* name) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IntVar>) {
                if (name) *name = n.name;
                return true;
            } else if constexpr (std::is_same_v<T, AddConst> || std::is_same_v<T, HalfCeil>) {
                return containsIntVar(*n.operand, name);
            } else if constexpr (std::is_same_v<T, SizeOf>) {
                return containsIntVar(*n.list, name);
            } else {
                return false;
            }
        },
        e.node);
}

bool containsIntVar(const BoolExpr& b, std::string* name) {
    return std::visit(
        [&](const auto& n) -> bool {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Cmp>) {
                return containsIntVar(*n.lhs, name) || containsIntVar(*n.rhs, name);
            } else if constexpr (std::is_same_v<T, BoolAnd> || std::is_same_v<T, BoolOr>) {
                return containsIntVar(*n.lhs, name) || containsIntVar(*n.rhs, name);
            } else if constexpr (std::is_same_v<T, BoolNot>) {
                return containsIntVar(*n.operand, name);
            } else {
                return false;
            }
        },
        b.node);
}

// Tarjan's algorithm; SCCs come out in reverse topological order and are
// reversed at the end.
struct Tarjan {
    const std::map<std::string, std::set<std::string>>& edges;
    std::map<std::string, int> index, low;
    std::map<std::string, bool> onStack;
    std::vector<std::string> stack;
    int counter = 0;
    std::vector<std::vector<std::string>> sccs;

    void strongconnect(const std::string& v) {
        index[v] = low[v] = counter++;
        stack.push_back(v);
        onStack[v] = true;
        auto it = edges.find(v);
        if (it != edges.end()) {
            for (const auto& w : it->second) {
                if (!index.count(w)) {
                    strongconnect(w);
                    low[v] = std::min(low[v], low[w]);
                } else if (onStack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            }
        }
        if (low[v] == index[v]) {
            std::vector<std::string> scc;
            for (;;) {
                std::string w = stack.back();
                stack.pop_back();
                onStack[w] = false;
                scc.push_back(w);
                if (w == v) break;
            }
            sccs.push_back(std::move(scc));
        }
    }
};

}  // namespace

bool CallGraph::reaches(const std::string& a, const std::string& b) const {
    auto it = reach_.find(a);
    return it != reach_.end() && it->second.count(b) > 0;
}

bool CallGraph::mutuallyRecursive(const std::string& a, const std::string& b) const {
    return reaches(a, b) && reaches(b, a);
}

bool CallGraph::strictlyAbove(const std::string& a, const std::string& b) const {
    return reaches(a, b) && !mutuallyRecursive(a, b);
}

CallGraph buildCallGraph(const Program& p) {
    CallGraph cg;
    std::set<std::string> declared;
    for (const auto& d : p.decls) {
        cg.procs.push_back(d.name);
        declared.insert(d.name);
        cg.direct[d.name];  // ensure a node even without edges
    }
    for (const auto& d : p.decls) {
        forEachCall(*d.body, [&](const Call& c, SourceSpan) {
            if (declared.count(c.proc)) cg.direct[d.name].insert(c.proc);
        });
    }

    Tarjan tarjan{cg.direct, {}, {}, {}, {}, 0, {}};
    for (const auto& name : cg.procs) {
        if (!tarjan.index.count(name)) tarjan.strongconnect(name);
    }
    std::reverse(tarjan.sccs.begin(), tarjan.sccs.end());
    cg.sccs = std::move(tarjan.sccs);

    // Transitive closure of the direct relation, iterated over the SCC
    // condensation (reverse topological order so successors are complete).
    for (auto it = cg.sccs.rbegin(); it != cg.sccs.rend(); ++it) {
        const auto& scc = *it;
        std::set<std::string> reach;
        bool cyclic = scc.size() > 1;
        for (const auto& v : scc) {
            for (const auto& w : cg.direct[v]) {
                reach.insert(w);
                auto sub = cg.reach_.find(w);
                if (sub != cg.reach_.end()) {
                    reach.insert(sub->second.begin(), sub->second.end());
                }
                if (w == v) cyclic = true;
            }
        }
        if (cyclic) {
            for (const auto& v : scc) reach.insert(v);
        }
        for (const auto& v : scc) cg.reach_[v] = reach;
    }
    return cg;
}

std::vector<Diagnostic> checkWellFormed(const Program& p) {
    std::vector<Diagnostic> diags;
    std::map<std::string, const ProcDecl*> byName;

    for (const auto& d : p.decls) {
        if (byName.count(d.name)) {
            diags.push_back({d.span, "duplicate declaration of procedure '" + d.name + "'"});
        } else {
            byName[d.name] = &d;
        }
        std::set<std::string> seen;
        for (const auto& param : d.params) {
            if (!seen.insert(param).second) {
                diags.push_back({d.span, "procedure '" + d.name + "' repeats parameter '" +
                                             param + "'"});
            }
        }
    }

    auto checkStatement = [&](const Statement& body, const std::set<std::string>& scope,
                              const std::string& where) {
        for (const auto& v : varsOf(body)) {
            if (!scope.count(v)) {
                diags.push_back({body.span, "undeclared qubit variable '" + v + "' in " + where});
            }
        }
        forEachCall(body, [&](const Call& c, SourceSpan span) {
            auto it = byName.find(c.proc);
            if (it == byName.end()) {
                diags.push_back({span, "call to unknown procedure '" + c.proc + "'"});
            } else if (it->second->params.size() != c.args.size()) {
                diags.push_back({span, "procedure '" + c.proc + "' expects " +
                                           std::to_string(it->second->params.size()) +
                                           " arguments, got " + std::to_string(c.args.size())});
            }
            for (std::size_t i = 0; i < c.args.size(); ++i) {
                auto vi = varsOf(*c.args[i]);
                for (std::size_t j = i + 1; j < c.args.size(); ++j) {
                    for (const auto& v : varsOf(*c.args[j])) {
                        if (vi.count(v)) {
                            diags.push_back(
                                {span, "overlapping call arguments: variable '" + v +
                                           "' appears in arguments " + std::to_string(i + 1) +
                                           " and " + std::to_string(j + 1)});
                        }
                    }
                }
            }
        });
        // Integer variables have no binder anywhere in the grammar.
        std::function<void(const Statement&)> scanInts = [&](const Statement& s) {
            std::visit(
                [&](const auto& n) {
                    using T = std::decay_t<decltype(n)>;
                    std::string name;
                    if constexpr (std::is_same_v<T, Apply>) {
                        if (containsIntVar(*n.target.list, &name) ||
                            containsIntVar(*n.target.index, &name) ||
                            (n.arg && containsIntVar(*n.arg, &name))) {
                            diags.push_back({s.span, "unbound integer variable '" + name + "'"});
                        }
                        if (n.gate == GateName::Not && n.angle) {
                            diags.push_back({s.span, "gate NOT takes no angle function"});
                        }
                        if (n.gate != GateName::Not && !n.angle) {
                            diags.push_back({s.span, std::string("gate ") + gateNameText(n.gate) +
                                                         " requires an angle function"});
                        }
                    } else if constexpr (std::is_same_v<T, Seq>) {
                        for (const auto& item : n.items) scanInts(*item);
                    } else if constexpr (std::is_same_v<T, If>) {
                        if (containsIntVar(*n.cond, &name)) {
                            diags.push_back({s.span, "unbound integer variable '" + name + "'"});
                        }
                        scanInts(*n.thenBranch);
                        scanInts(*n.elseBranch);
                    } else if constexpr (std::is_same_v<T, QCase>) {
                        if (containsIntVar(*n.control.list, &name) ||
                            containsIntVar(*n.control.index, &name)) {
                            diags.push_back({s.span, "unbound integer variable '" + name + "'"});
                        }
                        scanInts(*n.zeroBranch);
                        scanInts(*n.oneBranch);
                    } else if constexpr (std::is_same_v<T, QCaseMulti>) {
                        for (const auto& c : n.controls) {
                            if (containsIntVar(*c.list, &name) || containsIntVar(*c.index, &name)) {
                                diags.push_back({s.span, "unbound integer variable '" + name + "'"});
                            }
                        }
                        for (const auto& br : n.branches) scanInts(*br);
                    } else if constexpr (std::is_same_v<T, Call>) {
                        for (const auto& a : n.args) {
                            if (containsIntVar(*a, &name)) {
                                diags.push_back({s.span, "unbound integer variable '" + name + "'"});
                            }
                        }
                    }
                },
                s.node);
        };
        scanInts(body);
    };

    for (const auto& d : p.decls) {
        std::set<std::string> scope(d.params.begin(), d.params.end());
        checkStatement(*d.body, scope, "procedure '" + d.name + "'");
    }
    std::set<std::string> mainScope(p.vars.begin(), p.vars.end());
    checkStatement(*p.main, mainScope, "the main statement");

    return diags;
}

HalfResult checkHalf(const Program& p, const CallGraph& cg) {
    HalfResult res;
    res.ok = true;
    for (const auto& d : p.decls) {
        forEachCall(*d.body, [&](const Call& c, SourceSpan span) {
            if (!cg.mutuallyRecursive(d.name, c.proc)) return;
            bool halved = false;
            for (const auto& arg : c.args) {
                if (containsHalfNode(*arg)) {
                    halved = true;
                    break;
                }
            }
            if (!halved) {
                res.ok = false;
                res.violations.push_back(
                    {span, "recursive call to '" + c.proc + "' from '" + d.name +
                               "' passes no halved argument"});
            }
        });
    }
    return res;
}

namespace {

int stmtWidth(const Statement& s, const std::string& proc, const CallGraph& cg) {
    return std::visit(
        [&](const auto& n) -> int {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Seq>) {
                int sum = 0;
                for (const auto& item : n.items) sum += stmtWidth(*item, proc, cg);
                return sum;
            } else if constexpr (std::is_same_v<T, If>) {
                return std::max(stmtWidth(*n.thenBranch, proc, cg),
                                stmtWidth(*n.elseBranch, proc, cg));
            } else if constexpr (std::is_same_v<T, QCase>) {
                return std::max(stmtWidth(*n.zeroBranch, proc, cg),
                                stmtWidth(*n.oneBranch, proc, cg));
            } else if constexpr (std::is_same_v<T, QCaseMulti>) {
                int best = 0;
                for (const auto& br : n.branches) best = std::max(best, stmtWidth(*br, proc, cg));
                return best;
            } else if constexpr (std::is_same_v<T, Call>) {
                return cg.mutuallyRecursive(proc, n.proc) ? 1 : 0;
            } else {
                return 0;
            }
        },
        s.node);
}

}  // namespace

WidthResult width(const Program& p, const CallGraph& cg) {
    WidthResult res;
    for (const auto& d : p.decls) {
        int w = stmtWidth(*d.body, d.name, cg);
        res.perProc[d.name] = w;
        res.width = std::max(res.width, w);
    }
    return res;
}

Verdict verdict(const Program& surface) {
    Program p = desugar(surface);
    Verdict v;
    v.diagnostics = checkWellFormed(p);
    v.wellFormed = v.diagnostics.empty();
    CallGraph cg = buildCallGraph(p);
    HalfResult half = checkHalf(p, cg);
    v.isHalf = half.ok;
    for (const auto& d : half.violations) v.diagnostics.push_back(d);
    WidthResult w = width(p, cg);
    v.width = w.width;
    if (v.width > 1) {
        for (const auto& d : p.decls) {
            if (w.perProc[d.name] > 1) {
                v.diagnostics.push_back({d.span, "procedure '" + d.name + "' has width " +
                                                     std::to_string(w.perProc[d.name]) +
                                                     " (limit 1)"});
            }
        }
    }
    v.isPLP = v.wellFormed && v.isHalf && v.width <= 1;
    return v;
}

std::string formatDiagnostic(const std::string& file, const Diagnostic& d) {
    return file + ":" + std::to_string(d.span.line) + ":" + std::to_string(d.span.column) +
           ": error: " + d.message;
}

}  // namespace plp
