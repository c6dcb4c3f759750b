#include "plp/compiler.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "plp/listeval.hpp"

namespace plp {

namespace {

using WireList = std::vector<std::uint32_t>;
using WireBindings = ListBindings<std::uint32_t>;

struct MergeKey {
    std::string proc;
    std::vector<std::uint64_t> sizes;

    bool operator<(const MergeKey& o) const {
        return std::tie(proc, sizes) < std::tie(o.proc, o.sizes);
    }
};

struct SiteRouting {
    std::uint32_t selector = 0;
    std::vector<std::uint32_t> wires;    // sorted union of moved wires
    std::vector<std::uint32_t> perm;     // perm[i]=j routes wires[i] onto wires[j]
};

struct MergeGroup {
    MergeKey key;
    std::uint32_t anchor = 0;
    std::vector<WireList> canonical;     // argument wires of the first site
    std::vector<ControlBit> canonicalControls;
    std::vector<SiteRouting> routed;     // non-canonical sites that need moving
};

// One dictionary per compiled body instance. Scaffolding records the
// anchor/selector Toffolis in emission order for the mirrored uncompute.
struct MergeEnv {
    int keyDepth = 0;
    std::map<MergeKey, std::size_t> index;
    std::vector<MergeGroup> groups;
    std::vector<Gate> scaffolding;
    std::vector<std::uint32_t> acquired;  // anchors and selectors, in order
};

struct Ctx {
    const std::string* proc = nullptr;    // enclosing procedure, null in main
    WireBindings wires;
    std::vector<ControlBit> controls;     // base controls plus enclosing qcases
};

struct StmtGates {
    std::vector<Gate> pre;
    std::vector<Gate> post;   // gates sequenced after a recursive site
    bool touched = false;     // a recursive site was compiled in here
};

void append(std::vector<Gate>& out, const std::vector<Gate>& gates) {
    out.insert(out.end(), gates.begin(), gates.end());
}

class Compiler {
public:
    Compiler(const Program& p, const Lengths& lengths, const CompileOptions& opts)
        : prog_(p), lens_(lengths), opts_(opts), pool_(static_cast<std::uint32_t>(lengths.total())) {
        for (const auto& d : prog_.decls) decls_[d.name] = &d;
        cg_ = buildCallGraph(p);
    }

    Circuit run() {
        WireBindings wires;
        std::uint32_t base = 0;
        for (const auto& var : lens_.order()) {
            WireList list(lens_.of(var));
            for (std::uint32_t i = 0; i < list.size(); ++i) list[i] = base + i;
            base += static_cast<std::uint32_t>(lens_.of(var));
            wires[var] = std::move(list);
        }

        Circuit c;
        c.inputWires = static_cast<std::uint32_t>(lens_.total());
        c.gates = compileInstance(nullptr, prog_.main, std::move(wires), {}, 0);
        c.ancillaWires = pool_.highWater();
        for (const auto& var : lens_.order()) {
            for (std::uint64_t n = 1; n <= lens_.of(var); ++n) {
                c.wireLabels.push_back(var + "[" + std::to_string(n) + "]");
            }
        }
        for (std::uint32_t a = 0; a < c.ancillaWires; ++a) {
            c.wireLabels.push_back("ancilla " + std::to_string(a));
        }
        return c;
    }

    std::uint32_t keychain() const { return keychain_; }

private:
    const Program& prog_;
    const Lengths& lens_;
    CompileOptions opts_;
    AncillaPool pool_;
    std::map<std::string, const ProcDecl*> decls_;
    CallGraph cg_;
    std::uint32_t keychain_ = 0;
    int depth_ = 0;

    static constexpr int kMaxDepth = 10000;

    [[noreturn]] void bug(const std::string& msg) const {
        throw std::logic_error("compiler invariant violated: " + msg +
                               " (the error pre-check should have rejected this program)");
    }

    // A full body instance: gates of the statement itself, a block per merge
    // group (routing, merged body, unrouting), the mirrored uncompute of the
    // anchor/selector Toffolis, all flushed per top-level sequence element.
    std::vector<Gate> compileInstance(const std::string* procName, const StatementPtr& body,
                                      WireBindings wires, std::vector<ControlBit> baseControls,
                                      int keyDepth) {
        if (++depth_ > kMaxDepth) {
            throw CompileError("compilation recursion limit exceeded; the program does not look "
                               "terminating at these sizes");
        }
        Ctx ctx{procName, std::move(wires), std::move(baseControls)};
        MergeEnv env;
        env.keyDepth = keyDepth;

        std::vector<Gate> out;
        auto handleElement = [&](const StatementPtr& element) {
            StmtGates r = compileStmt(element, ctx, env);
            append(out, r.pre);
            if (!env.groups.empty()) {
                append(out, flush(env));
            }
            append(out, r.post);
        };
        if (const auto* seq = std::get_if<Seq>(&body->node)) {
            for (const auto& item : seq->items) handleElement(item);
        } else {
            handleElement(body);
        }
        --depth_;
        return out;
    }

    StmtGates compileStmt(const StatementPtr& s, Ctx& ctx, MergeEnv& env) {
        return std::visit(
            [&](const auto& n) -> StmtGates {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Skip>) {
                    return {};
                } else if constexpr (std::is_same_v<T, Apply>) {
                    return compileApply(n, ctx);
                } else if constexpr (std::is_same_v<T, Seq>) {
                    return compileSeq(n, ctx, env);
                } else if constexpr (std::is_same_v<T, If>) {
                    bool b = evalBoolT(*n.cond, ctx.wires);
                    return compileStmt(b ? n.thenBranch : n.elseBranch, ctx, env);
                } else if constexpr (std::is_same_v<T, QCase>) {
                    return compileQCase(n, ctx, env);
                } else if constexpr (std::is_same_v<T, Call>) {
                    return compileCall(n, ctx, env);
                } else {
                    throw std::logic_error("compile expects a desugared program");
                }
            },
            s->node);
    }

    StmtGates compileSeq(const Seq& seq, Ctx& ctx, MergeEnv& env) {
        StmtGates res;
        bool sealed = false;
        for (const auto& item : seq.items) {
            StmtGates r = compileStmt(item, ctx, env);
            if (!sealed) {
                append(res.pre, r.pre);
                append(res.post, r.post);
                if (r.touched) {
                    sealed = true;
                    res.touched = true;
                }
            } else {
                if (r.touched) {
                    throw CompileError(
                        "two sequential recursion regions inside a quantum branch are not "
                        "supported (the program has width > 1)");
                }
                append(res.post, r.pre);
            }
        }
        return res;
    }

    StmtGates compileQCase(const QCase& q, Ctx& ctx, MergeEnv& env) {
        auto wire = evalQubitT(q.control, ctx.wires);
        if (!wire) bug("qcase control evaluates to the error pointer");
        for (const auto& c : ctx.controls) {
            if (c.wire == *wire) bug("qcase control is already a control of this scope");
        }
        StmtGates res;
        ctx.controls.push_back(ControlBit{*wire, true});
        StmtGates zero = compileStmt(q.zeroBranch, ctx, env);
        ctx.controls.back().negated = false;
        StmtGates one = compileStmt(q.oneBranch, ctx, env);
        ctx.controls.pop_back();
        append(res.pre, zero.pre);
        append(res.pre, one.pre);
        append(res.post, zero.post);
        append(res.post, one.post);
        res.touched = zero.touched || one.touched;
        return res;
    }

    StmtGates compileCall(const Call& call, Ctx& ctx, MergeEnv& env) {
        auto declIt = decls_.find(call.proc);
        if (declIt == decls_.end()) bug("call to unknown procedure");
        const ProcDecl& callee = *declIt->second;

        std::vector<WireList> args;
        args.reserve(call.args.size());
        for (const auto& a : call.args) {
            args.push_back(evalListT(*a, ctx.wires));
            if (args.back().empty()) return {};  // the semantics' skip rule
        }

        bool mutual = ctx.proc && cg_.mutuallyRecursive(*ctx.proc, call.proc);
        if (!mutual) {
            WireBindings bound;
            for (std::size_t i = 0; i < callee.params.size(); ++i) {
                bound[callee.params[i]] = args[i];
            }
            StmtGates res;
            res.pre = compileInstance(&callee.name, callee.body, std::move(bound), ctx.controls,
                                      env.keyDepth);
            return res;
        }

        MergeKey key{call.proc, {}};
        key.sizes.reserve(args.size());
        for (const auto& a : args) key.sizes.push_back(a.size());

        StmtGates res;
        res.touched = true;
        auto found = env.index.find(key);
        if (found == env.index.end()) {
            // Anchoring: a fresh ancilla records that this site's branch
            // condition holds; the merged body is compiled once at flush time,
            // controlled on it alone.
            MergeGroup group;
            group.key = key;
            group.anchor = pool_.acquire();
            env.acquired.push_back(group.anchor);
            group.canonical = args;
            group.canonicalControls = ctx.controls;
            Gate toffoli = makeX(group.anchor, ctx.controls);
            res.pre.push_back(toffoli);
            env.scaffolding.push_back(toffoli);
            env.index[key] = env.groups.size();
            env.groups.push_back(std::move(group));
            keychain_ = std::max(keychain_, static_cast<std::uint32_t>(env.keyDepth) + 1);
            return res;
        }

        // Merging: same anchor, plus a controlled permutation routing this
        // site's wires onto the canonical ones, selected by its own ancilla.
        MergeGroup& group = env.groups[found->second];
        assertOrthogonal(group, ctx.controls);
        Gate toffoli = makeX(group.anchor, ctx.controls);
        res.pre.push_back(toffoli);
        env.scaffolding.push_back(toffoli);

        SiteRouting routing = planRouting(group.canonical, args);
        if (!routing.wires.empty()) {
            routing.selector = pool_.acquire();
            env.acquired.push_back(routing.selector);
            Gate sel = makeX(routing.selector, ctx.controls);
            res.pre.push_back(sel);
            env.scaffolding.push_back(sel);
            group.routed.push_back(std::move(routing));
        }
        return res;
    }

    // Two sites merged into one group must sit in orthogonal branches: their
    // control contexts contain a complementary pair. Guaranteed by the width
    // restriction; a violation is a compiler bug, not a user error.
    void assertOrthogonal(const MergeGroup& group, const std::vector<ControlBit>& controls) const {
        auto complementary = [](const std::vector<ControlBit>& a, const std::vector<ControlBit>& b) {
            for (const auto& x : a) {
                for (const auto& y : b) {
                    if (x.wire == y.wire && x.negated != y.negated) return true;
                }
            }
            return false;
        };
        if (!complementary(group.canonicalControls, controls)) {
            throw std::logic_error(
                "compiler invariant violated: merged call sites are not in orthogonal branches");
        }
    }

    // Partial map (site wires -> canonical wires), completed to a permutation
    // on the union. Unconstrained wires are paired in sorted order; the body
    // never touches them and the inverse permutation restores them.
    SiteRouting planRouting(const std::vector<WireList>& canonical,
                            const std::vector<WireList>& args) const {
        std::map<std::uint32_t, std::uint32_t> mapping;
        bool identity = true;
        for (std::size_t t = 0; t < args.size(); ++t) {
            for (std::size_t u = 0; u < args[t].size(); ++u) {
                mapping[args[t][u]] = canonical[t][u];
                if (args[t][u] != canonical[t][u]) identity = false;
            }
        }
        SiteRouting routing;
        if (identity) return routing;

        std::set<std::uint32_t> unionSet;
        std::set<std::uint32_t> dests;
        for (const auto& [src, dst] : mapping) {
            unionSet.insert(src);
            unionSet.insert(dst);
            dests.insert(dst);
        }
        std::vector<std::uint32_t> freeSources, freeDests;
        for (auto w : unionSet) {
            if (!mapping.count(w)) freeSources.push_back(w);
            if (!dests.count(w)) freeDests.push_back(w);
        }
        for (std::size_t i = 0; i < freeSources.size(); ++i) {
            mapping[freeSources[i]] = freeDests[i];
        }

        routing.wires.assign(unionSet.begin(), unionSet.end());
        std::map<std::uint32_t, std::uint32_t> indexOf;
        for (std::uint32_t i = 0; i < routing.wires.size(); ++i) indexOf[routing.wires[i]] = i;
        routing.perm.resize(routing.wires.size());
        for (const auto& [src, dst] : mapping) routing.perm[indexOf[src]] = indexOf[dst];
        return routing;
    }

    std::vector<Gate> flush(MergeEnv& env) {
        std::vector<Gate> out;
        for (const auto& group : env.groups) {
            std::vector<std::vector<Gate>> undo;
            for (const auto& site : group.routed) {
                ControlBit sel{site.selector, false};
                append(out, buildControlledPermutation(site.wires, site.perm, sel, opts_.permMode,
                                                       pool_));
                std::vector<std::uint32_t> inverse(site.perm.size());
                for (std::uint32_t i = 0; i < site.perm.size(); ++i) inverse[site.perm[i]] = i;
                undo.push_back(
                    buildControlledPermutation(site.wires, inverse, sel, opts_.permMode, pool_));
            }

            const ProcDecl& callee = *decls_.at(group.key.proc);
            WireBindings bound;
            for (std::size_t i = 0; i < callee.params.size(); ++i) {
                bound[callee.params[i]] = group.canonical[i];
            }
            append(out, compileInstance(&callee.name, callee.body, std::move(bound),
                                        {ControlBit{group.anchor, false}}, env.keyDepth + 1));

            for (auto it = undo.rbegin(); it != undo.rend(); ++it) append(out, *it);
        }
        for (auto it = env.scaffolding.rbegin(); it != env.scaffolding.rend(); ++it) {
            out.push_back(*it);
        }
        for (auto it = env.acquired.rbegin(); it != env.acquired.rend(); ++it) {
            pool_.release(*it);
        }
        env.index.clear();
        env.groups.clear();
        env.scaffolding.clear();
        env.acquired.clear();
        return out;
    }

    StmtGates compileApply(const Apply& a, Ctx& ctx) {
        auto wire = evalQubitT(a.target, ctx.wires);
        if (!wire) bug("gate target evaluates to the error pointer");
        for (const auto& c : ctx.controls) {
            if (c.wire == *wire) bug("gate target is a control of this scope");
        }
        long long arg = a.arg ? evalIntT(*a.arg, ctx.wires) : 0;
        StmtGates res;
        switch (a.gate) {
            case GateName::Not:
                res.pre.push_back(makeX(*wire, ctx.controls));
                break;
            case GateName::Ph: {
                if (!a.angle) bug("Ph without an angle function");
                auto theta = evalAngle(*a.angle, arg);
                if (!theta) bug("angle evaluation failed");
                res.pre.push_back(makePh(*wire, *theta, ctx.controls));
                break;
            }
            case GateName::RY: {
                if (!a.angle) bug("RY without an angle function");
                auto theta = evalAngle(*a.angle, arg);
                if (!theta) bug("angle evaluation failed");
                res.pre.push_back(makeRY(*wire, *theta, ctx.controls));
                break;
            }
        }
        return res;
    }
};

}  // namespace

Circuit compile(const Program& p, const Lengths& lengths, const CompileOptions& opts) {
    Program dp = desugar(p);
    auto diags = checkWellFormed(dp);
    if (!diags.empty()) {
        throw CompileError("program is not well-formed: " + diags.front().message);
    }
    MeterResult pre = runProgramMeter(dp, lengths);
    if (pre.status == Status::Bottom) {
        throw CompileError(
            "the program reaches the error state at these sizes (inaccessible or out-of-range "
            "qubit, or an angle evaluation failure)");
    }
    Compiler compiler(dp, lengths, opts);
    return compiler.run();
}

CompileStats stats(const Program& p, const Lengths& lengths, const CompileOptions& opts) {
    Program dp = desugar(p);
    auto diags = checkWellFormed(dp);
    if (!diags.empty()) {
        throw CompileError("program is not well-formed: " + diags.front().message);
    }
    MeterResult pre = runProgramMeter(dp, lengths);
    if (pre.status == Status::Bottom) {
        throw CompileError("the program reaches the error state at these sizes");
    }
    Compiler compiler(dp, lengths, opts);
    Circuit c = compiler.run();
    CompileStats s;
    s.size = c.gates.size();
    s.depth = depth(c);
    s.ancillas = c.ancillaWires;
    s.keychain = compiler.keychain();
    s.meter = pre.steps;
    return s;
}

}  // namespace plp
