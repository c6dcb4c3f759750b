#include "plp/interpreter.hpp"

#include <cmath>
#include <stdexcept>

namespace plp {

Lengths::Lengths(const Program& p, const std::map<std::string, std::uint64_t>& sizes) {
    order_ = p.vars;
    std::uint64_t acc = 0;
    for (const auto& var : order_) {
        auto it = sizes.find(var);
        if (it == sizes.end()) {
            throw std::invalid_argument("no size given for variable '" + var + "'");
        }
        sizes_[var] = it->second;
        prefix_[var] = acc;
        acc += it->second;
    }
    if (sizes.size() != order_.size()) {
        for (const auto& [var, _] : sizes) {
            if (!sizes_.count(var)) {
                throw std::invalid_argument("size given for unknown variable '" + var + "'");
            }
        }
    }
    total_ = acc;
}

PtrContext initialContext(const Lengths& lengths) {
    PtrContext f;
    for (const auto& var : lengths.order()) {
        std::vector<std::uint64_t> ptrs(lengths.of(var));
        for (std::uint64_t i = 0; i < ptrs.size(); ++i) ptrs[i] = i + 1;
        f[var] = std::move(ptrs);
    }
    return f;
}

long long evalInt(const IntExpr& e, const PtrContext& f) { return evalIntT(e, f); }
std::vector<std::uint64_t> evalList(const ListExpr& l, const PtrContext& f) {
    return evalListT(l, f);
}
std::uint64_t evalQubit(const QubitExpr& q, const PtrContext& f) {
    return evalQubitT(q, f).value_or(0);
}
bool evalBool(const BoolExpr& b, const PtrContext& f) { return evalBoolT(b, f); }

namespace {

double evalAngleExpr(const AngleExpr& a, double x, bool& ok) {
    return std::visit(
        [&](const auto& n) -> double {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AngleParam>) {
                return x;
            } else if constexpr (std::is_same_v<T, AngleIntLit>) {
                return static_cast<double>(n.value);
            } else if constexpr (std::is_same_v<T, AngleRealLit>) {
                return n.value;
            } else if constexpr (std::is_same_v<T, AnglePi>) {
                return kTwoPi / 2.0;
            } else if constexpr (std::is_same_v<T, AngleBin>) {
                double lhs = evalAngleExpr(*n.lhs, x, ok);
                double rhs = evalAngleExpr(*n.rhs, x, ok);
                switch (n.op) {
                    case AngleBinOp::Add: return lhs + rhs;
                    case AngleBinOp::Sub: return lhs - rhs;
                    case AngleBinOp::Mul: return lhs * rhs;
                    case AngleBinOp::Div:
                        if (rhs == 0.0) {
                            ok = false;
                            return 0.0;
                        }
                        return lhs / rhs;
                }
                return 0.0;
            } else {
                return -evalAngleExpr(*n.operand, x, ok);
            }
        },
        a.node);
}

}  // namespace

std::optional<double> evalAngle(const AngleFn& fn, long long arg) {
    bool ok = true;
    double raw = evalAngleExpr(*fn.body, static_cast<double>(arg), ok);
    if (!ok || !std::isfinite(raw)) return std::nullopt;
    double wrapped = std::fmod(raw, kTwoPi);
    if (wrapped < 0) wrapped += kTwoPi;
    if (wrapped >= kTwoPi) wrapped = 0.0;
    return wrapped;
}

std::optional<Mat2> gateMatrix(GateName gate, const std::optional<AngleFn>& angle, long long arg) {
    switch (gate) {
        case GateName::Not:
            return Mat2{{0, 0}, {1, 0}, {1, 0}, {0, 0}};
        case GateName::Ph: {
            if (!angle) return std::nullopt;
            auto theta = evalAngle(*angle, arg);
            if (!theta) return std::nullopt;
            return Mat2{{1, 0}, {0, 0}, {0, 0}, std::polar(1.0, *theta)};
        }
        case GateName::RY: {
            if (!angle) return std::nullopt;
            auto theta = evalAngle(*angle, arg);
            if (!theta) return std::nullopt;
            double c = std::cos(*theta), s = std::sin(*theta);
            return Mat2{{c, 0}, {-s, 0}, {s, 0}, {c, 0}};
        }
    }
    return std::nullopt;
}

namespace {

// The executor walks the big-step rules. The context f never changes (the
// call rule substitutes argument expressions syntactically), and the
// accessible sets shrink only inside qcase branches, tracked here as
// per-variable removed-pointer sets. Whether a run errors, and its meter, are
// amplitude-independent, so the three state modes share all control flow.
class Executor {
public:
    enum class Mode { Dense, Basis, Meter };

    Executor(const Program& p, const Lengths& lengths)
        : prog_(p), lens_(lengths), f_(initialContext(lengths)) {
        for (const auto& d : prog_.decls) decls_[d.name] = &d;
    }

    Mode mode = Mode::Meter;
    Statevector dense;
    std::uint64_t basis = 0;
    Amplitude phase{1.0, 0.0};

    struct Res {
        Status status = Status::Top;
        std::uint64_t meter = 0;
    };

    Res run() { return exec(prog_.main); }

private:
    const Program& prog_;
    const Lengths& lens_;
    PtrContext f_;
    std::map<std::string, const ProcDecl*> decls_;
    std::map<std::string, std::set<std::uint64_t>> removed_;
    int depth_ = 0;

    static constexpr int kMaxDepth = 20000;

    bool accessible(const std::string& var, std::uint64_t n) const {
        if (n == 0 || n > lens_.of(var)) return false;
        auto it = removed_.find(var);
        return it == removed_.end() || it->second.count(n) == 0;
    }

    // The single variable a qubit expression is rooted at.
    static const std::string& rootVar(const ListExpr& l) {
        const ListExpr* cur = &l;
        for (;;) {
            if (const auto* v = std::get_if<QVar>(&cur->node)) return v->name;
            cur = std::visit(
                [](const auto& n) -> const ListExpr* {
                    using T = std::decay_t<decltype(n)>;
                    if constexpr (std::is_same_v<T, QVar>) {
                        return nullptr;
                    } else {
                        return n.list.get();
                    }
                },
                cur->node);
        }
    }

    std::uint64_t globalWire(const std::string& var, std::uint64_t n) const {
        return lens_.prefix(var) + n;  // 1-based
    }

    void applyMatrix(std::uint64_t wire, const Mat2& m) {
        if (mode == Mode::Meter) return;
        std::uint64_t total = lens_.total();
        if (mode == Mode::Basis) {
            std::uint64_t bit = (basis >> (total - wire)) & 1u;
            if (m.m01 == Amplitude{0, 0} && m.m10 == Amplitude{0, 0}) {
                phase *= (bit ? m.m11 : m.m00);  // diagonal (Ph, RY with theta 0 is identity)
            } else if (m.m00 == Amplitude{0, 0} && m.m11 == Amplitude{0, 0}) {
                phase *= (bit ? m.m01 : m.m10);  // anti-diagonal (NOT)
                basis ^= std::uint64_t{1} << (total - wire);
            } else {
                throw std::runtime_error(
                    "basis-state execution hit a superposing gate (RY); use the dense mode");
            }
            return;
        }
        std::uint64_t stride = std::uint64_t{1} << (total - wire);
        std::uint64_t dim = dense.size();
        for (std::uint64_t base = 0; base < dim; base += 2 * stride) {
            for (std::uint64_t off = 0; off < stride; ++off) {
                Amplitude a0 = dense[base + off];
                Amplitude a1 = dense[base + off + stride];
                dense[base + off] = m.m00 * a0 + m.m01 * a1;
                dense[base + off + stride] = m.m10 * a0 + m.m11 * a1;
            }
        }
    }

    Res exec(const StatementPtr& s) { return exec(*s); }

    Res exec(const Statement& s) {
        return std::visit(
            [&](const auto& n) -> Res {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Skip>) {
                    return {Status::Top, 0};
                } else if constexpr (std::is_same_v<T, Apply>) {
                    return execApply(n);
                } else if constexpr (std::is_same_v<T, Seq>) {
                    std::uint64_t meter = 0;
                    for (const auto& item : n.items) {
                        Res r = exec(item);
                        meter += r.meter;
                        if (r.status == Status::Bottom) return {Status::Bottom, meter};
                    }
                    return {Status::Top, meter};
                } else if constexpr (std::is_same_v<T, If>) {
                    bool b = evalBoolT(*n.cond, f_);
                    return exec(b ? n.thenBranch : n.elseBranch);
                } else if constexpr (std::is_same_v<T, QCase>) {
                    return execQCase(n);
                } else if constexpr (std::is_same_v<T, QCaseMulti>) {
                    throw std::logic_error("surface qcase must be desugared before execution");
                } else if constexpr (std::is_same_v<T, Call>) {
                    return execCall(n);
                } else {
                    throw std::logic_error("gate macro must be desugared before execution");
                }
            },
            s.node);
    }

    Res execApply(const Apply& a) {
        const std::string& var = rootVar(*a.target.list);
        auto ptr = evalQubitT(a.target, f_);
        std::uint64_t n = ptr.value_or(0);
        if (!ptr || !accessible(var, n)) return {Status::Bottom, 0};
        long long arg = a.arg ? evalIntT(*a.arg, f_) : 0;
        auto m = gateMatrix(a.gate, a.angle, arg);
        if (!m) return {Status::Bottom, 0};  // angle evaluation failed
        applyMatrix(globalWire(var, n), *m);
        return {Status::Top, 0};
    }

    Res execQCase(const QCase& q) {
        const std::string& var = rootVar(*q.control.list);
        auto ptr = evalQubitT(q.control, f_);
        std::uint64_t n = ptr.value_or(0);
        if (!ptr || !accessible(var, n)) return {Status::Bottom, 0};
        std::uint64_t wire = globalWire(var, n);

        removed_[var].insert(n);
        Res r0, r1;
        if (mode == Mode::Dense) {
            std::uint64_t total = lens_.total();
            std::uint64_t mask = std::uint64_t{1} << (total - wire);
            Statevector original = dense;
            // Project, execute, recombine: branches preserve their control
            // subspace because the control pointer is inaccessible inside.
            for (std::uint64_t i = 0; i < dense.size(); ++i) {
                if (i & mask) dense[i] = 0;
            }
            r0 = exec(q.zeroBranch);
            Statevector zeroPart = std::move(dense);
            dense = original;
            for (std::uint64_t i = 0; i < dense.size(); ++i) {
                if (!(i & mask)) dense[i] = 0;
            }
            r1 = exec(q.oneBranch);
            if (r0.status == Status::Bottom || r1.status == Status::Bottom) {
                dense = std::move(original);  // error rules leave the state unchanged
            } else {
                for (std::uint64_t i = 0; i < dense.size(); ++i) dense[i] += zeroPart[i];
            }
        } else if (mode == Mode::Basis) {
            std::uint64_t total = lens_.total();
            std::uint64_t bit = (basis >> (total - wire)) & 1u;
            std::uint64_t savedBasis = basis;
            Amplitude savedPhase = phase;
            Mode saved = mode;
            if (bit == 0) {
                r0 = exec(q.zeroBranch);
                mode = Mode::Meter;
                r1 = exec(q.oneBranch);
            } else {
                mode = Mode::Meter;
                r0 = exec(q.zeroBranch);
                mode = saved;
                r1 = exec(q.oneBranch);
            }
            mode = saved;
            if (r0.status == Status::Bottom || r1.status == Status::Bottom) {
                basis = savedBasis;
                phase = savedPhase;
            }
        } else {
            r0 = exec(q.zeroBranch);
            r1 = exec(q.oneBranch);
        }
        auto it = removed_.find(var);
        it->second.erase(n);
        if (it->second.empty()) removed_.erase(it);

        std::uint64_t meter = std::max(r0.meter, r1.meter);
        if (r0.status == Status::Bottom || r1.status == Status::Bottom) {
            return {Status::Bottom, meter};
        }
        return {Status::Top, meter};
    }

    Res execCall(const Call& c) {
        auto it = decls_.find(c.proc);
        if (it == decls_.end()) {
            throw std::logic_error("call to unknown procedure '" + c.proc + "'");
        }
        const ProcDecl& decl = *it->second;
        for (const auto& arg : c.args) {
            if (evalListT(*arg, f_).empty()) {
                return {Status::Top, 1};  // empty-argument calls act as skip
            }
        }
        if (++depth_ > kMaxDepth) {
            throw std::runtime_error("recursion depth exceeded (program is unlikely to terminate)");
        }
        std::vector<std::pair<std::string, ListExprPtr>> mapping;
        mapping.reserve(decl.params.size());
        for (std::size_t i = 0; i < decl.params.size(); ++i) {
            mapping.emplace_back(decl.params[i], c.args[i]);
        }
        StatementPtr body = substitute(decl.body, mapping);
        Res r = exec(body);
        --depth_;
        return {r.status, r.meter + 1};
    }
};

Executor::Res checkedRun(Executor& ex) { return ex.run(); }

}  // namespace

RunResult runProgram(const Program& p, const Lengths& lengths, Statevector input) {
    std::uint64_t dim = std::uint64_t{1} << lengths.total();
    if (input.size() != dim) {
        throw std::invalid_argument("input statevector has dimension " +
                                    std::to_string(input.size()) + ", expected 2^" +
                                    std::to_string(lengths.total()));
    }
    Executor ex(p, lengths);
    ex.mode = Executor::Mode::Dense;
    ex.dense = std::move(input);
    auto r = checkedRun(ex);
    return RunResult{r.status, r.meter, std::move(ex.dense)};
}

BasisRunResult runProgramBasis(const Program& p, const Lengths& lengths, std::uint64_t basis) {
    if (lengths.total() < 64 && basis >= (std::uint64_t{1} << lengths.total())) {
        throw std::invalid_argument("basis index out of range");
    }
    Executor ex(p, lengths);
    ex.mode = Executor::Mode::Basis;
    ex.basis = basis;
    auto r = checkedRun(ex);
    return BasisRunResult{r.status, r.meter, ex.basis, ex.phase};
}

MeterResult runProgramMeter(const Program& p, const Lengths& lengths) {
    Executor ex(p, lengths);
    ex.mode = Executor::Mode::Meter;
    auto r = checkedRun(ex);
    return MeterResult{r.status, r.meter};
}

std::vector<Statevector> extractUnitary(const Program& p, const Lengths& lengths) {
    if (lengths.total() > 12) {
        throw std::invalid_argument("extractUnitary supports at most 12 qubits");
    }
    std::uint64_t dim = std::uint64_t{1} << lengths.total();
    std::vector<Statevector> columns(dim);
    for (std::uint64_t k = 0; k < dim; ++k) {
        Statevector e(dim, Amplitude{0, 0});
        e[k] = 1.0;
        RunResult r = runProgram(p, lengths, std::move(e));
        if (r.status == Status::Bottom) {
            throw std::runtime_error("program reaches an error on basis state " +
                                     std::to_string(k));
        }
        columns[k] = std::move(r.state);
    }
    return columns;
}

}  // namespace plp
