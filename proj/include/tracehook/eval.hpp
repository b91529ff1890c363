// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "tracehook/formula.hpp"
#include "tracehook/pretty.hpp"
#include "tracehook/trace.hpp"

namespace tracehook {

/// Registered flashloan entry points: the (contract, selector) pairs the
/// inflashloan predicate tests membership against.
using ProviderSet = std::set<CallStackEntry>;

/// Quantifier binding: a contract or selector value captured from the stack.
struct BoundValue {
    enum class Kind : std::uint8_t { Contract, Selector } kind = Kind::Contract;
    Word value = 0;

    friend bool operator==(const BoundValue&, const BoundValue&) = default;
};

/// Evaluation environment. Closed formulas start with empty bindings; hook
/// checking seeds hook_arg and hook_contract from the hook step. Deposit and
/// withdrawal sums are scoped to hook_contract.
struct Env {
    std::map<std::string, BoundValue> bindings;
    std::optional<Word> hook_arg;
    Address hook_contract;
    const ProviderSet* providers = nullptr;  // absent set behaves as empty
};

/// Outcome of checking one property at one trace position.
struct Violation {
    std::string property;
    std::size_t position = 0;
    std::string formula_text;
};

struct Verdict {
    std::optional<Violation> violation;

    bool pass() const { return !violation.has_value(); }
    static Verdict ok() { return {}; }
    static Verdict fail(Violation v) { return {std::move(v)}; }
};

inline Word eval_arith(const ArithExpr& e, const Trace& trace, std::size_t i, const Env& env);

namespace detail {

inline const BoundValue& lookup_binding(const Env& env, const std::string& name) {
    auto it = env.bindings.find(name);
    if (it == env.bindings.end())
        throw EvalError("unbound variable '" + name + "' during evaluation");
    return it->second;
}

inline bool eval_predicate(const Predicate& p, const Trace& trace, std::size_t i,
                           const Env& env) {
    switch (p.kind) {
    case PredKind::True:
        return true;
    case PredKind::False:
        return false;
    case PredKind::EventIs: {
        const TraceStep& s = trace[i];
        return s.kind == StepKind::Emit && s.as_emit().event == p.event;
    }
    case PredKind::HookId: {
        const TraceStep& s = trace[i];
        return s.kind == StepKind::Hook && s.as_hook().hook_id == p.hook_id;
    }
    case PredKind::InFlashloan: {
        if (env.providers == nullptr)
            return false;
        const BoundValue& c = lookup_binding(env, p.v1);
        const BoundValue& s = lookup_binding(env, p.v2);
        CallStackEntry entry{Address{c.value}, Selector{static_cast<std::uint32_t>(s.value)}};
        return env.providers->count(entry) != 0;
    }
    case PredKind::VarEq:
        return lookup_binding(env, p.v1) == lookup_binding(env, p.v2);
    }
    return false;
}

}  // namespace detail

inline Word eval_arith(const ArithExpr& e, const Trace& trace, std::size_t i, const Env& env) {
    switch (e.kind) {
    case ArithKind::Const:
        return e.value;
    case ArithKind::HookArg:
        if (!env.hook_arg)
            throw EvalError("'arg' used outside a hook context");
        return *env.hook_arg;
    case ArithKind::SumDeposits:
        return sum_events(trace, i, EventKind::deposit(), env.hook_contract);
    case ArithKind::SumWithdrawals:
        return sum_events(trace, i, EventKind::withdrawal(), env.hook_contract);
    case ArithKind::Var:
        return detail::lookup_binding(env, e.var).value;
    case ArithKind::RatioMul:
        return ratio_mul(e.num, e.den, eval_arith(*e.lhs, trace, i, env));
    case ArithKind::Add:
        return saturating_add(eval_arith(*e.lhs, trace, i, env),
                              eval_arith(*e.rhs, trace, i, env));
    case ArithKind::Sub:
        return saturating_sub(eval_arith(*e.lhs, trace, i, env),
                              eval_arith(*e.rhs, trace, i, env));
    }
    return 0;
}

namespace detail {

inline bool eval_compare(CmpOp op, Word a, Word b) {
    switch (op) {
    case CmpOp::Lt: return a < b;
    case CmpOp::Le: return a <= b;
    case CmpOp::Eq: return a == b;
    case CmpOp::Ne: return a != b;
    case CmpOp::Ge: return a >= b;
    case CmpOp::Gt: return a > b;
    }
    return false;
}

// Bottom-up evaluator. Temporal operators are computed with one pass of
// per-position truth vectors per (node, environment); quantified subformulas
// restart the recursion with extended bindings over the stack at each
// position. Finite-trace readings for the future fragment: X is false at the
// last position and U needs an in-trace witness.
class Evaluator {
public:
    Evaluator(const Trace& trace, const Env& env) : trace_(trace), env_(env) {}

    bool run(const Formula& f, std::size_t i) { return values_for(f)[i]; }

private:
    const Trace& trace_;
    const Env& env_;
    std::unordered_map<const Formula*, std::vector<char>> memo_;

    const std::vector<char>& values_for(const Formula& f) {
        auto it = memo_.find(&f);
        if (it != memo_.end())
            return it->second;
        std::vector<char> vals = compute(f);
        return memo_.emplace(&f, std::move(vals)).first->second;
    }

    std::vector<char> compute(const Formula& f) {
        const std::size_t n = trace_.size();
        std::vector<char> out(n, 0);
        switch (f.kind) {
        case FormulaKind::Atom:
            for (std::size_t i = 0; i < n; ++i)
                out[i] = eval_predicate(f.pred, trace_, i, env_);
            break;
        case FormulaKind::Compare:
            for (std::size_t i = 0; i < n; ++i)
                out[i] = eval_compare(f.op, eval_arith(*f.e1, trace_, i, env_),
                                      eval_arith(*f.e2, trace_, i, env_));
            break;
        case FormulaKind::Not: {
            const auto& a = values_for(*f.lhs);
            for (std::size_t i = 0; i < n; ++i)
                out[i] = !a[i];
            break;
        }
        case FormulaKind::And: {
            const auto& a = values_for(*f.lhs);
            const auto& b = values_for(*f.rhs);
            for (std::size_t i = 0; i < n; ++i)
                out[i] = a[i] && b[i];
            break;
        }
        case FormulaKind::Or: {
            const auto& a = values_for(*f.lhs);
            const auto& b = values_for(*f.rhs);
            for (std::size_t i = 0; i < n; ++i)
                out[i] = a[i] || b[i];
            break;
        }
        case FormulaKind::Implies: {
            const auto& a = values_for(*f.lhs);
            const auto& b = values_for(*f.rhs);
            for (std::size_t i = 0; i < n; ++i)
                out[i] = !a[i] || b[i];
            break;
        }
        case FormulaKind::Prev: {
            const auto& a = values_for(*f.lhs);
            for (std::size_t i = 1; i < n; ++i)
                out[i] = a[i - 1];
            break;
        }
        case FormulaKind::Next: {
            const auto& a = values_for(*f.lhs);
            for (std::size_t i = 0; i + 1 < n; ++i)
                out[i] = a[i + 1];
            break;
        }
        case FormulaKind::Since: {
            const auto& a = values_for(*f.lhs);
            const auto& b = values_for(*f.rhs);
            for (std::size_t i = 0; i < n; ++i)
                out[i] = b[i] || (a[i] && i > 0 && out[i - 1]);
            break;
        }
        case FormulaKind::Until: {
            const auto& a = values_for(*f.lhs);
            const auto& b = values_for(*f.rhs);
            for (std::size_t i = n; i-- > 0;)
                out[i] = b[i] || (a[i] && i + 1 < n && out[i + 1]);
            break;
        }
        case FormulaKind::Once: {
            const auto& a = values_for(*f.lhs);
            for (std::size_t i = 0; i < n; ++i)
                out[i] = a[i] || (i > 0 && out[i - 1]);
            break;
        }
        case FormulaKind::Historically: {
            const auto& a = values_for(*f.lhs);
            for (std::size_t i = 0; i < n; ++i)
                out[i] = a[i] && (i == 0 || out[i - 1]);
            break;
        }
        case FormulaKind::Eventually: {
            const auto& a = values_for(*f.lhs);
            for (std::size_t i = n; i-- > 0;)
                out[i] = a[i] || (i + 1 < n && out[i + 1]);
            break;
        }
        case FormulaKind::Always: {
            const auto& a = values_for(*f.lhs);
            for (std::size_t i = n; i-- > 0;)
                out[i] = a[i] && (i + 1 == n || out[i + 1]);
            break;
        }
        case FormulaKind::Forall:
        case FormulaKind::Exists:
            for (std::size_t i = 0; i < n; ++i)
                out[i] = quantify(f, i);
            break;
        case FormulaKind::ExistsPair:
            for (std::size_t i = 0; i < n; ++i)
                out[i] = quantify_pair(f, i);
            break;
        }
        return out;
    }

    bool eval_under(const Formula& body, std::size_t i, Env env) const {
        Evaluator nested(trace_, env);
        return nested.run(body, i);
    }

    bool quantify(const Formula& f, std::size_t i) const {
        const bool universal = f.kind == FormulaKind::Forall;
        for (const CallStackEntry& entry : callstack_at(trace_, i)) {
            Env env = env_;
            env.bindings[f.var_c] = {BoundValue::Kind::Contract, entry.contract.value};
            env.bindings[f.var_s] = {BoundValue::Kind::Selector, entry.selector.value};
            bool v = eval_under(*f.lhs, i, std::move(env));
            if (universal && !v)
                return false;
            if (!universal && v)
                return true;
        }
        return universal;
    }

    // Ordered pairs of distinct stack positions; stacks shorter than two
    // have none.
    bool quantify_pair(const Formula& f, std::size_t i) const {
        std::vector<CallStackEntry> stack = callstack_at(trace_, i);
        for (std::size_t p = 0; p < stack.size(); ++p) {
            for (std::size_t q = 0; q < stack.size(); ++q) {
                if (p == q)
                    continue;
                Env env = env_;
                env.bindings[f.var_c] = {BoundValue::Kind::Contract, stack[p].contract.value};
                env.bindings[f.var_s] = {BoundValue::Kind::Selector, stack[p].selector.value};
                env.bindings[f.var_c2] = {BoundValue::Kind::Contract, stack[q].contract.value};
                env.bindings[f.var_s2] = {BoundValue::Kind::Selector, stack[q].selector.value};
                if (eval_under(*f.lhs, i, std::move(env)))
                    return true;
            }
        }
        return false;
    }
};

}  // namespace detail

/// Truth value of `f` over the trace prefix ending at position i. Past
/// operators follow the definitional semantics; future operators use the
/// finite-trace reading.
inline bool eval(const Formula& f, const Trace& trace, std::size_t i, const Env& env) {
    if (i >= trace.size())
        throw TraceError("eval: position " + std::to_string(i) +
                         " out of range for trace of length " + std::to_string(trace.size()));
    detail::Evaluator ev(trace, env);
    return ev.run(f, i);
}

inline bool eval(const FormulaPtr& f, const Trace& trace, std::size_t i, const Env& env) {
    return eval(*f, trace, i, env);
}

/// Evaluates the named properties at a hook step, in binding order. The
/// environment is seeded with the hook's argument and contract. Properties
/// containing future operators are rejected before anything is evaluated.
inline Verdict check_at_hook(const PropertySet& props, const std::vector<std::string>& bound,
                             const Trace& trace, std::size_t hook_step,
                             const ProviderSet* providers = nullptr) {
    if (hook_step >= trace.size() || trace[hook_step].kind != StepKind::Hook)
        throw InternalError("check_at_hook: position " + std::to_string(hook_step) +
                            " is not a hook step");
    std::vector<const FormulaPtr*> formulas;
    formulas.reserve(bound.size());
    for (const std::string& name : bound) {
        const FormulaPtr* f = props.find(name);
        if (f == nullptr)
            throw EvalError("unknown property '" + name + "'");
        if (contains_future(**f))
            throw EvalError("future operators not evaluable at hooks: property '" + name + "'");
        formulas.push_back(f);
    }

    Env env;
    env.hook_arg = trace[hook_step].as_hook().arg;
    env.hook_contract = trace[hook_step].contract;
    env.providers = providers;

    for (std::size_t k = 0; k < bound.size(); ++k) {
        if (!eval(**formulas[k], trace, hook_step, env))
            return Verdict::fail({bound[k], hook_step, pretty(**formulas[k])});
    }
    return Verdict::ok();
}

/// Quantifier domain at a position: the open call stack.
inline std::vector<CallStackEntry> quantifier_domain(const Trace& trace, std::size_t i) {
    return callstack_at(trace, i);
}

}  // namespace tracehook
