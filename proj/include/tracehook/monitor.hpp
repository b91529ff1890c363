// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tracehook/eval.hpp"
#include "tracehook/formula.hpp"
#include "tracehook/pretty.hpp"

namespace tracehook {

/// Incremental monitor state for the past-time fragment. Holds one truth
/// value per subformula (post-order; quantified subformulas are treated as
/// leaves) from the previously evaluated position.
struct MonitorState {
    FormulaPtr formula;
    std::vector<const Formula*> nodes;  // post-order, quantifier bodies excluded
    std::vector<char> prev;             // one entry per node
    std::ptrdiff_t position = -1;
    const ProviderSet* providers = nullptr;
};

namespace detail {

inline void monitor_collect(const Formula& f, std::vector<const Formula*>& out) {
    switch (f.kind) {
    case FormulaKind::Next:
    case FormulaKind::Until:
    case FormulaKind::Eventually:
    case FormulaKind::Always:
        throw FragmentError("future operator not monitorable online: " + pretty(f));
    case FormulaKind::Forall:
    case FormulaKind::Exists:
    case FormulaKind::ExistsPair:
        if (contains_temporal(*f.lhs))
            throw FragmentError(
                "temporal operator under a quantifier not monitorable online: " + pretty(f));
        out.push_back(&f);
        return;
    default:
        break;
    }
    if (f.lhs)
        monitor_collect(*f.lhs, out);
    if (f.rhs)
        monitor_collect(*f.rhs, out);
    out.push_back(&f);
}

inline std::size_t monitor_index_of(const MonitorState& m, const Formula* node) {
    for (std::size_t k = 0; k < m.nodes.size(); ++k)
        if (m.nodes[k] == node)
            return k;
    throw InternalError("monitor: subformula not indexed");
}

}  // namespace detail

/// Builds monitor state for a past-fragment formula, initialized before the
/// first position. Rejects future operators and quantifiers with temporal
/// bodies, naming the offending subformula.
inline MonitorState monitor_new(FormulaPtr f, const ProviderSet* providers = nullptr) {
    MonitorState m;
    m.formula = std::move(f);
    detail::monitor_collect(*m.formula, m.nodes);
    m.prev.assign(m.nodes.size(), 0);
    m.providers = providers;
    return m;
}

/// Advances the monitor to position i (which must be exactly one past the
/// state's position) and returns the formula's truth value there. Equals the
/// offline evaluation of the formula at i under an empty environment.
inline std::pair<MonitorState, bool> monitor_step(const MonitorState& m, const Trace& trace,
                                                  std::size_t i) {
    if (static_cast<std::ptrdiff_t>(i) != m.position + 1)
        throw InternalError("monitor_step: expected position " +
                            std::to_string(m.position + 1) + ", got " + std::to_string(i));
    if (i >= trace.size())
        throw InternalError("monitor_step: position beyond end of trace");

    Env env;
    env.providers = m.providers;

    MonitorState next = m;
    std::vector<char> cur(m.nodes.size(), 0);

    auto value_of = [&](const Formula* child) -> char {
        return cur[detail::monitor_index_of(m, child)];
    };

    for (std::size_t k = 0; k < m.nodes.size(); ++k) {
        const Formula& f = *m.nodes[k];
        switch (f.kind) {
        case FormulaKind::Atom:
            cur[k] = detail::eval_predicate(f.pred, trace, i, env);
            break;
        case FormulaKind::Compare:
            cur[k] = detail::eval_compare(f.op, eval_arith(*f.e1, trace, i, env),
                                          eval_arith(*f.e2, trace, i, env));
            break;
        case FormulaKind::Not:
            cur[k] = !value_of(f.lhs.get());
            break;
        case FormulaKind::And:
            cur[k] = value_of(f.lhs.get()) && value_of(f.rhs.get());
            break;
        case FormulaKind::Or:
            cur[k] = value_of(f.lhs.get()) || value_of(f.rhs.get());
            break;
        case FormulaKind::Implies:
            cur[k] = !value_of(f.lhs.get()) || value_of(f.rhs.get());
            break;
        case FormulaKind::Prev:
            cur[k] = i > 0 && m.prev[detail::monitor_index_of(m, f.lhs.get())];
            break;
        case FormulaKind::Since:
            cur[k] = value_of(f.rhs.get()) || (value_of(f.lhs.get()) && m.prev[k]);
            break;
        case FormulaKind::Once:
            cur[k] = value_of(f.lhs.get()) || m.prev[k];
            break;
        case FormulaKind::Historically:
            cur[k] = value_of(f.lhs.get()) && (i == 0 || m.prev[k]);
            break;
        case FormulaKind::Forall:
        case FormulaKind::Exists:
        case FormulaKind::ExistsPair:
            cur[k] = eval(f, trace, i, env);
            break;
        default:
            throw InternalError("monitor_step: unexpected operator");
        }
    }

    next.prev = std::move(cur);
    next.position = static_cast<std::ptrdiff_t>(i);
    bool verdict = next.prev.back() != 0;
    return {std::move(next), verdict};
}

}  // namespace tracehook
