#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "plp/ast.hpp"

// Expression evaluation over pointer lists. The value type is generic so the
// interpreter can evaluate over per-variable qubit pointers and the compiler
// over global wire ids; both follow the same rules:
//   - removal at an out-of-range position yields the empty list,
//   - halves of a list of length <= 1 yield the empty list,
//   - the first half takes ceil(m/2) elements,
//   - indexing out of range is an in-band error (nullopt here, pointer 0 in
//     the interpreter's 1-based view),
//   - /2 rounds up.

namespace plp {

inline long long ceilHalf(long long m) {
    long long q = m / 2;
    return (m > 0 && m % 2 != 0) ? q + 1 : q;
}

template <typename T>
using ListBindings = std::map<std::string, std::vector<T>>;

template <typename T>
std::vector<T> evalListT(const ListExpr& l, const ListBindings<T>& env);

template <typename T>
long long evalIntT(const IntExpr& e, const ListBindings<T>& env) {
    return std::visit(
        [&](const auto& n) -> long long {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, IntVar>) {
                throw std::logic_error("unbound integer variable '" + n.name +
                                       "' reached evaluation");
            } else if constexpr (std::is_same_v<N, IntConst>) {
                return n.value;
            } else if constexpr (std::is_same_v<N, AddConst>) {
                return evalIntT(*n.operand, env) + n.delta;
            } else if constexpr (std::is_same_v<N, HalfCeil>) {
                return ceilHalf(evalIntT(*n.operand, env));
            } else {
                return static_cast<long long>(evalListT(*n.list, env).size());
            }
        },
        e.node);
}

template <typename T>
std::vector<T> evalListT(const ListExpr& l, const ListBindings<T>& env) {
    return std::visit(
        [&](const auto& n) -> std::vector<T> {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, QVar>) {
                auto it = env.find(n.name);
                if (it == env.end()) {
                    throw std::logic_error("unbound qubit variable '" + n.name + "'");
                }
                return it->second;
            } else if constexpr (std::is_same_v<N, Remove>) {
                std::vector<T> base = evalListT(*n.list, env);
                long long k = evalIntT(*n.index, env);
                if (k < 1 || k > static_cast<long long>(base.size())) return {};
                base.erase(base.begin() + static_cast<std::ptrdiff_t>(k - 1));
                return base;
            } else if constexpr (std::is_same_v<N, MultiRemove>) {
                throw std::logic_error("multi-removal must be desugared before evaluation");
            } else if constexpr (std::is_same_v<N, FirstHalf>) {
                std::vector<T> base = evalListT(*n.list, env);
                if (base.size() <= 1) return {};
                base.resize(static_cast<std::size_t>(ceilHalf(static_cast<long long>(base.size()))));
                return base;
            } else {
                std::vector<T> base = evalListT(*n.list, env);
                if (base.size() <= 1) return {};
                auto cut = static_cast<std::size_t>(ceilHalf(static_cast<long long>(base.size())));
                return std::vector<T>(base.begin() + static_cast<std::ptrdiff_t>(cut), base.end());
            }
        },
        l.node);
}

// Index into the evaluated list; nullopt is the in-band error value.
template <typename T>
std::optional<T> evalQubitT(const QubitExpr& q, const ListBindings<T>& env) {
    std::vector<T> base = evalListT(*q.list, env);
    long long k = evalIntT(*q.index, env);
    if (k < 1 || k > static_cast<long long>(base.size())) return std::nullopt;
    return base[static_cast<std::size_t>(k - 1)];
}

template <typename T>
bool evalBoolT(const BoolExpr& b, const ListBindings<T>& env) {
    return std::visit(
        [&](const auto& n) -> bool {
            using N = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<N, Cmp>) {
                long long lhs = evalIntT(*n.lhs, env);
                long long rhs = evalIntT(*n.rhs, env);
                switch (n.op) {
                    case CmpOp::Eq: return lhs == rhs;
                    case CmpOp::Ne: return lhs != rhs;
                    case CmpOp::Lt: return lhs < rhs;
                    case CmpOp::Le: return lhs <= rhs;
                    case CmpOp::Gt: return lhs > rhs;
                    case CmpOp::Ge: return lhs >= rhs;
                }
                return false;
            } else if constexpr (std::is_same_v<N, BoolAnd>) {
                return evalBoolT(*n.lhs, env) && evalBoolT(*n.rhs, env);
            } else if constexpr (std::is_same_v<N, BoolOr>) {
                return evalBoolT(*n.lhs, env) || evalBoolT(*n.rhs, env);
            } else if constexpr (std::is_same_v<N, BoolNot>) {
                return !evalBoolT(*n.operand, env);
            } else {
                return n.value;
            }
        },
        b.node);
}

}  // namespace plp
