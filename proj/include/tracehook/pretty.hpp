// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include "tracehook/formula.hpp"

namespace tracehook {

// Canonical text form: compound formulas are fully parenthesized, atoms and
// arithmetic are printed bare. Parsing the canonical form reproduces the AST
// exactly (arithmetic +/- chains print left-associated, as parsed).

inline std::string pretty(const ArithExpr& e);

inline std::string pretty_arith_operand(const ArithPtr& e) { return pretty(*e); }

inline std::string pretty(const ArithExpr& e) {
    switch (e.kind) {
    case ArithKind::Const:
        return std::to_string(e.value);
    case ArithKind::HookArg:
        return "arg";
    case ArithKind::SumDeposits:
        return "sum(deposits)";
    case ArithKind::SumWithdrawals:
        return "sum(withdrawals)";
    case ArithKind::Var:
        return e.var;
    case ArithKind::RatioMul:
        return "ratio(" + std::to_string(e.num) + "," + std::to_string(e.den) + "," +
               pretty(*e.lhs) + ")";
    case ArithKind::Add:
        return pretty(*e.lhs) + " + " + pretty(*e.rhs);
    case ArithKind::Sub:
        return pretty(*e.lhs) + " - " + pretty(*e.rhs);
    }
    return "?";
}

inline std::string pretty_event_kind(EventKind k) {
    switch (k.code) {
    case EventKind::kTokenTransfer: return "transfer";
    case EventKind::kDeposit: return "deposit";
    case EventKind::kWithdrawal: return "withdrawal";
    default: return std::to_string(k.code);
    }
}

inline std::string pretty(const Predicate& p) {
    switch (p.kind) {
    case PredKind::True:
        return "true";
    case PredKind::False:
        return "false";
    case PredKind::EventIs:
        return "event(" + pretty_event_kind(p.event) + ")";
    case PredKind::InFlashloan:
        return "inflashloan(" + p.v1 + "," + p.v2 + ")";
    case PredKind::VarEq:
        return p.v1 + " == " + p.v2;
    case PredKind::HookId:
        return "hookid(" + std::to_string(p.hook_id) + ")";
    }
    return "?";
}

inline std::string pretty(const Formula& f) {
    switch (f.kind) {
    case FormulaKind::Atom:
        return pretty(f.pred);
    case FormulaKind::Not:
        return "(not " + pretty(*f.lhs) + ")";
    case FormulaKind::Next:
        return "(X " + pretty(*f.lhs) + ")";
    case FormulaKind::Prev:
        return "(Y " + pretty(*f.lhs) + ")";
    case FormulaKind::Eventually:
        return "(F " + pretty(*f.lhs) + ")";
    case FormulaKind::Always:
        return "(G " + pretty(*f.lhs) + ")";
    case FormulaKind::Once:
        return "(O " + pretty(*f.lhs) + ")";
    case FormulaKind::Historically:
        return "(H " + pretty(*f.lhs) + ")";
    case FormulaKind::And:
        return "(" + pretty(*f.lhs) + " and " + pretty(*f.rhs) + ")";
    case FormulaKind::Or:
        return "(" + pretty(*f.lhs) + " or " + pretty(*f.rhs) + ")";
    case FormulaKind::Implies:
        return "(" + pretty(*f.lhs) + " -> " + pretty(*f.rhs) + ")";
    case FormulaKind::Until:
        return "(" + pretty(*f.lhs) + " U " + pretty(*f.rhs) + ")";
    case FormulaKind::Since:
        return "(" + pretty(*f.lhs) + " S " + pretty(*f.rhs) + ")";
    case FormulaKind::Forall:
        return "(forall (" + f.var_c + "," + f.var_s + ") in callstack : " + pretty(*f.lhs) +
               ")";
    case FormulaKind::Exists:
        return "(exists (" + f.var_c + "," + f.var_s + ") in callstack : " + pretty(*f.lhs) +
               ")";
    case FormulaKind::ExistsPair:
        return "(exists_pair ((" + f.var_c + "," + f.var_s + "),(" + f.var_c2 + "," + f.var_s2 +
               ")) in callstack : " + pretty(*f.lhs) + ")";
    case FormulaKind::Compare:
        return "(" + pretty(*f.e1) + " " + cmp_op_text(f.op) + " " + pretty(*f.e2) + ")";
    }
    return "?";
}

inline std::string pretty(const FormulaPtr& f) { return pretty(*f); }

}  // namespace tracehook
