#include "plp/inverse.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace plp {

namespace {

AngleExprPtr twoPiExpr() { return mkAngleBin(AngleBinOp::Mul, mkAngleInt(2), mkAnglePi()); }

// 2*pi - e, unwrapping a previous inversion so the rewrite is an involution.
AngleFn invertPhAngle(const AngleFn& fn) {
    if (const auto* bin = std::get_if<AngleBin>(&fn.body->node)) {
        if (bin->op == AngleBinOp::Sub && equal(*bin->lhs, *twoPiExpr())) {
            return AngleFn{fn.param, bin->rhs};
        }
    }
    return AngleFn{fn.param, mkAngleBin(AngleBinOp::Sub, twoPiExpr(), fn.body)};
}

// -e, likewise an involution.
AngleFn invertRyAngle(const AngleFn& fn) {
    if (const auto* neg = std::get_if<AngleNeg>(&fn.body->node)) {
        return AngleFn{fn.param, neg->operand};
    }
    return AngleFn{fn.param, mkAngleNeg(fn.body)};
}

using NameMap = std::map<std::string, std::string>;

// Inversion under a (possibly partial) procedure-name map; nullopt when a
// call's inverse name is not yet known.
std::optional<StatementPtr> invertStmt(const StatementPtr& s, const NameMap& names) {
    return std::visit(
        [&](const auto& n) -> std::optional<StatementPtr> {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Skip>) {
                return s;
            } else if constexpr (std::is_same_v<T, Apply>) {
                Apply inv = n;
                if (n.gate == GateName::Ph && n.angle) {
                    inv.angle = invertPhAngle(*n.angle);
                } else if (n.gate == GateName::RY && n.angle) {
                    inv.angle = invertRyAngle(*n.angle);
                }
                return std::make_shared<Statement>(Statement{std::move(inv), s->span});
            } else if constexpr (std::is_same_v<T, Seq>) {
                std::vector<StatementPtr> items;
                items.reserve(n.items.size());
                for (auto it = n.items.rbegin(); it != n.items.rend(); ++it) {
                    auto inv = invertStmt(*it, names);
                    if (!inv) return std::nullopt;
                    items.push_back(std::move(*inv));
                }
                return std::make_shared<Statement>(Statement{Seq{std::move(items)}, s->span});
            } else if constexpr (std::is_same_v<T, If>) {
                auto t = invertStmt(n.thenBranch, names);
                auto e = invertStmt(n.elseBranch, names);
                if (!t || !e) return std::nullopt;
                return std::make_shared<Statement>(
                    Statement{If{n.cond, std::move(*t), std::move(*e)}, s->span});
            } else if constexpr (std::is_same_v<T, QCase>) {
                auto z = invertStmt(n.zeroBranch, names);
                auto o = invertStmt(n.oneBranch, names);
                if (!z || !o) return std::nullopt;
                return std::make_shared<Statement>(
                    Statement{QCase{n.control, std::move(*z), std::move(*o)}, s->span});
            } else if constexpr (std::is_same_v<T, QCaseMulti>) {
                std::vector<StatementPtr> branches;
                branches.reserve(n.branches.size());
                for (const auto& br : n.branches) {
                    auto inv = invertStmt(br, names);
                    if (!inv) return std::nullopt;
                    branches.push_back(std::move(*inv));
                }
                return std::make_shared<Statement>(
                    Statement{QCaseMulti{n.controls, std::move(branches)}, s->span});
            } else if constexpr (std::is_same_v<T, Call>) {
                auto it = names.find(n.proc);
                if (it == names.end()) return std::nullopt;
                return std::make_shared<Statement>(Statement{Call{it->second, n.args}, s->span});
            } else {  // GateMacro: CNOT/TOF self-inverse; SWAP likewise
                return s;
            }
        },
        s->node);
}

}  // namespace

Program invertProgram(const Program& p) {
    std::map<std::string, const ProcDecl*> byName;
    std::set<std::string> taken;
    for (const auto& d : p.decls) {
        byName[d.name] = &d;
        taken.insert(d.name);
    }

    NameMap names;

    // Pass 1: self-inverse procedures map to themselves.
    bool progress = true;
    while (progress) {
        progress = false;
        for (const auto& d : p.decls) {
            if (names.count(d.name)) continue;
            NameMap trial = names;
            trial[d.name] = d.name;
            auto inv = invertStmt(d.body, trial);
            if (inv && equal(**inv, *d.body)) {
                names[d.name] = d.name;
                progress = true;
            }
        }
    }

    // Pass 2: recognize existing inverse pairs (X, X_inv) so a second
    // inversion reuses the originals instead of stacking suffixes.
    progress = true;
    while (progress) {
        progress = false;
        for (const auto& d : p.decls) {
            if (names.count(d.name)) continue;
            auto partner = byName.find(d.name + "_inv");
            if (partner == byName.end() || names.count(partner->second->name)) continue;
            if (partner->second->params != d.params) continue;
            NameMap trial = names;
            trial[d.name] = partner->second->name;
            trial[partner->second->name] = d.name;
            auto inv = invertStmt(d.body, trial);
            if (inv && equal(**inv, *partner->second->body)) {
                names[d.name] = partner->second->name;
                names[partner->second->name] = d.name;
                progress = true;
            }
        }
    }

    // Pass 3: everything else gets a fresh inverse declaration.
    std::vector<std::string> fresh;
    for (const auto& d : p.decls) {
        if (names.count(d.name)) continue;
        std::string base = d.name + "_inv";
        std::string candidate = base;
        int suffix = 2;
        while (taken.count(candidate)) candidate = base + std::to_string(suffix++);
        taken.insert(candidate);
        names[d.name] = candidate;
        fresh.push_back(d.name);
    }

    Program out;
    out.vars = p.vars;
    out.decls = p.decls;
    for (const auto& origName : fresh) {
        const ProcDecl& d = *byName.at(origName);
        auto inv = invertStmt(d.body, names);
        if (!inv) throw std::logic_error("inversion failed for procedure '" + d.name + "'");
        out.decls.push_back(ProcDecl{names.at(origName), d.params, std::move(*inv), d.span});
    }
    auto main = invertStmt(p.main, names);
    if (!main) throw std::logic_error("inversion failed for the main statement");
    out.main = std::move(*main);
    return out;
}

}  // namespace plp
