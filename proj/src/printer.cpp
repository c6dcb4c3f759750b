#include <sstream>

#include "plp/parser.hpp"

// Canonical source rendering. The printer and parser agree token for token,
// so parseProgram(prettyPrint(p)) == p modulo spans.

namespace plp {

namespace {

void printInt(std::ostringstream& os, const IntExpr& e);
void printList(std::ostringstream& os, const ListExpr& l);

void printList(std::ostringstream& os, const ListExpr& l) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, QVar>) {
                os << n.name;
            } else if constexpr (std::is_same_v<T, Remove>) {
                printList(os, *n.list);
                os << " \\ [";
                printInt(os, *n.index);
                os << "]";
            } else if constexpr (std::is_same_v<T, MultiRemove>) {
                printList(os, *n.list);
                os << " \\ [";
                for (std::size_t i = 0; i < n.indices.size(); ++i) {
                    if (i) os << ",";
                    os << n.indices[i];
                }
                os << "]";
            } else if constexpr (std::is_same_v<T, FirstHalf>) {
                printList(os, *n.list);
                os << "[-]";
            } else {
                printList(os, *n.list);
                os << "[+]";
            }
        },
        l.node);
}

void printInt(std::ostringstream& os, const IntExpr& e) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, IntVar>) {
                os << n.name;
            } else if constexpr (std::is_same_v<T, IntConst>) {
                os << n.value;
            } else if constexpr (std::is_same_v<T, AddConst>) {
                printInt(os, *n.operand);
                if (n.delta < 0) {
                    os << " - " << -n.delta;
                } else {
                    os << " + " << n.delta;
                }
            } else if constexpr (std::is_same_v<T, HalfCeil>) {
                printInt(os, *n.operand);
                os << " / 2";
            } else {
                os << "|";
                printList(os, *n.list);
                os << "|";
            }
        },
        e.node);
}

void printQubit(std::ostringstream& os, const QubitExpr& q) {
    printList(os, *q.list);
    os << "[";
    printInt(os, *q.index);
    os << "]";
}

const char* cmpText(CmpOp op) {
    switch (op) {
        case CmpOp::Eq: return "==";
        case CmpOp::Ne: return "!=";
        case CmpOp::Lt: return "<";
        case CmpOp::Le: return "<=";
        case CmpOp::Gt: return ">";
        case CmpOp::Ge: return ">=";
    }
    return "?";
}

// Precedence: or(1) < and(2) < not(3) < atoms.
void printBool(std::ostringstream& os, const BoolExpr& b, int minPrec) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, Cmp>) {
                printInt(os, *n.lhs);
                os << " " << cmpText(n.op) << " ";
                printInt(os, *n.rhs);
            } else if constexpr (std::is_same_v<T, BoolOr>) {
                bool paren = minPrec > 1;
                if (paren) os << "(";
                printBool(os, *n.lhs, 1);
                os << " || ";
                printBool(os, *n.rhs, 2);
                if (paren) os << ")";
            } else if constexpr (std::is_same_v<T, BoolAnd>) {
                bool paren = minPrec > 2;
                if (paren) os << "(";
                printBool(os, *n.lhs, 2);
                os << " && ";
                printBool(os, *n.rhs, 3);
                if (paren) os << ")";
            } else if constexpr (std::is_same_v<T, BoolNot>) {
                os << "!";
                const bool atomic = std::holds_alternative<BoolNot>(n.operand->node) ||
                                    std::holds_alternative<BoolLit>(n.operand->node);
                if (atomic) {
                    printBool(os, *n.operand, 3);
                } else {
                    os << "(";
                    printBool(os, *n.operand, 1);
                    os << ")";
                }
            } else {
                os << (n.value ? "true" : "false");
            }
        },
        b.node);
}

// Precedence: add/sub(1) < mul/div(2) < neg(3) < atoms(4).
void printAngle(std::ostringstream& os, const AngleExpr& a, const std::string& param, int minPrec) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, AngleParam>) {
                os << param;
            } else if constexpr (std::is_same_v<T, AngleIntLit>) {
                os << n.value;
            } else if constexpr (std::is_same_v<T, AngleRealLit>) {
                std::ostringstream tmp;
                tmp.precision(17);
                tmp << n.value;
                std::string text = tmp.str();
                if (text.find('.') == std::string::npos &&
                    text.find('e') == std::string::npos) {
                    text += ".0";
                }
                os << text;
            } else if constexpr (std::is_same_v<T, AnglePi>) {
                os << "pi";
            } else if constexpr (std::is_same_v<T, AngleBin>) {
                int prec = (n.op == AngleBinOp::Add || n.op == AngleBinOp::Sub) ? 1 : 2;
                bool paren = minPrec > prec;
                if (paren) os << "(";
                printAngle(os, *n.lhs, param, prec);
                switch (n.op) {
                    case AngleBinOp::Add: os << " + "; break;
                    case AngleBinOp::Sub: os << " - "; break;
                    case AngleBinOp::Mul: os << " * "; break;
                    case AngleBinOp::Div: os << " / "; break;
                }
                printAngle(os, *n.rhs, param, prec + 1);
                if (paren) os << ")";
            } else {  // AngleNeg
                bool paren = minPrec > 3;
                if (paren) os << "(";
                os << "-";
                printAngle(os, *n.operand, param, 4);
                if (paren) os << ")";
            }
        },
        a.node);
}

struct StmtPrinter {
    std::ostringstream os;
    int indent = 0;

    void pad() {
        for (int i = 0; i < indent; ++i) os << "  ";
    }

    void line(const std::string& text) {
        pad();
        os << text << "\n";
    }

    void print(const Statement& s) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, Skip>) {
                    line("skip;");
                } else if constexpr (std::is_same_v<T, Apply>) {
                    std::ostringstream one;
                    printQubit(one, n.target);
                    one << " *= " << gateNameText(n.gate);
                    if (n.angle) {
                        one << "[lam " << n.angle->param << ". ";
                        printAngle(one, *n.angle->body, n.angle->param, 1);
                        one << "]";
                    }
                    if (n.arg) {
                        one << "(";
                        printInt(one, *n.arg);
                        one << ")";
                    }
                    one << ";";
                    line(one.str());
                } else if constexpr (std::is_same_v<T, Seq>) {
                    for (const auto& item : n.items) print(*item);
                } else if constexpr (std::is_same_v<T, If>) {
                    std::ostringstream head;
                    head << "if ";
                    printBool(head, *n.cond, 1);
                    head << " then {";
                    line(head.str());
                    ++indent;
                    print(*n.thenBranch);
                    --indent;
                    line("} else {");
                    ++indent;
                    print(*n.elseBranch);
                    --indent;
                    line("}");
                } else if constexpr (std::is_same_v<T, QCase>) {
                    std::ostringstream head;
                    head << "qcase ";
                    printQubit(head, n.control);
                    head << " of {";
                    line(head.str());
                    ++indent;
                    line("0 ->");
                    ++indent;
                    print(*n.zeroBranch);
                    --indent;
                    line(",");
                    line("1 ->");
                    ++indent;
                    print(*n.oneBranch);
                    --indent;
                    --indent;
                    line("}");
                } else if constexpr (std::is_same_v<T, QCaseMulti>) {
                    std::ostringstream head;
                    head << "qcase ";
                    for (std::size_t i = 0; i < n.controls.size(); ++i) {
                        if (i) head << ", ";
                        printQubit(head, n.controls[i]);
                    }
                    head << " of {";
                    line(head.str());
                    ++indent;
                    std::size_t k = n.controls.size();
                    for (std::size_t b = 0; b < n.branches.size(); ++b) {
                        std::string label;
                        for (std::size_t bit = k; bit-- > 0;) {
                            label.push_back((b >> bit) & 1 ? '1' : '0');
                        }
                        line(label + " ->");
                        ++indent;
                        print(*n.branches[b]);
                        --indent;
                        if (b + 1 < n.branches.size()) line(",");
                    }
                    --indent;
                    line("}");
                } else if constexpr (std::is_same_v<T, Call>) {
                    std::ostringstream one;
                    one << "call " << n.proc << "(";
                    for (std::size_t i = 0; i < n.args.size(); ++i) {
                        if (i) one << ", ";
                        printList(one, *n.args[i]);
                    }
                    one << ");";
                    line(one.str());
                } else {  // GateMacro
                    std::ostringstream one;
                    switch (n.kind) {
                        case GateMacro::Cnot: one << "CNOT("; break;
                        case GateMacro::Swap: one << "SWAP("; break;
                        case GateMacro::Tof: one << "TOF("; break;
                    }
                    for (std::size_t i = 0; i < n.args.size(); ++i) {
                        if (i) one << ", ";
                        printQubit(one, n.args[i]);
                    }
                    one << ");";
                    line(one.str());
                }
            },
            s.node);
    }
};

}  // namespace

std::string prettyPrint(const Statement& s) {
    StmtPrinter p;
    p.print(s);
    return p.os.str();
}

std::string prettyPrint(const ListExpr& l) {
    std::ostringstream os;
    printList(os, l);
    return os.str();
}

std::string prettyPrint(const IntExpr& e) {
    std::ostringstream os;
    printInt(os, e);
    return os.str();
}

std::string prettyPrint(const BoolExpr& b) {
    std::ostringstream os;
    printBool(os, b, 1);
    return os.str();
}

std::string prettyPrint(const QubitExpr& q) {
    std::ostringstream os;
    printQubit(os, q);
    return os.str();
}

std::string prettyPrint(const AngleFn& fn) {
    std::ostringstream os;
    os << "lam " << fn.param << ". ";
    printAngle(os, *fn.body, fn.param, 1);
    return os.str();
}

std::string prettyPrint(const Program& p) {
    std::ostringstream os;
    for (const auto& d : p.decls) {
        os << "decl " << d.name << "(";
        for (std::size_t i = 0; i < d.params.size(); ++i) {
            if (i) os << ", ";
            os << d.params[i];
        }
        os << ") {\n";
        StmtPrinter body;
        body.indent = 1;
        body.print(*d.body);
        os << body.os.str();
        os << "}\n";
    }
    os << "::\n";
    os << prettyPrint(*p.main);
    return os.str();
}

}  // namespace plp
