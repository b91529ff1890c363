// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "tracehook/common.hpp"
#include "tracehook/trace.hpp"

namespace tracehook {

enum class CmpOp : std::uint8_t { Lt, Le, Eq, Ne, Ge, Gt };

inline const char* cmp_op_text(CmpOp op) {
    switch (op) {
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Eq: return "==";
    case CmpOp::Ne: return "!=";
    case CmpOp::Ge: return ">=";
    case CmpOp::Gt: return ">";
    }
    return "?";
}

enum class ArithKind : std::uint8_t {
    Const,           // literal word
    HookArg,         // the amount handed to the current hook
    SumDeposits,     // prefix sum of deposit emits, scoped to the hook contract
    SumWithdrawals,  // prefix sum of withdrawal emits, same scope
    Var,             // bound quantifier variable read as a word
    RatioMul,        // floor(num * e / den)
    Add,
    Sub,
};

struct ArithExpr;
using ArithPtr = std::shared_ptr<const ArithExpr>;

struct ArithExpr {
    ArithKind kind = ArithKind::Const;
    Word value = 0;        // Const
    std::string var;       // Var
    Word num = 0;          // RatioMul
    Word den = 1;          // RatioMul
    ArithPtr lhs, rhs;     // RatioMul uses lhs only
};

namespace arith {

inline ArithPtr constant(Word v) {
    auto e = std::make_shared<ArithExpr>();
    e->value = v;
    return e;
}
inline ArithPtr hook_arg() {
    auto e = std::make_shared<ArithExpr>();
    e->kind = ArithKind::HookArg;
    return e;
}
inline ArithPtr sum_deposits() {
    auto e = std::make_shared<ArithExpr>();
    e->kind = ArithKind::SumDeposits;
    return e;
}
inline ArithPtr sum_withdrawals() {
    auto e = std::make_shared<ArithExpr>();
    e->kind = ArithKind::SumWithdrawals;
    return e;
}
inline ArithPtr var(std::string name) {
    auto e = std::make_shared<ArithExpr>();
    e->kind = ArithKind::Var;
    e->var = std::move(name);
    return e;
}
inline ArithPtr ratio(Word num, Word den, ArithPtr inner) {
    if (den == 0)
        throw std::invalid_argument("ratio denominator must be nonzero");
    auto e = std::make_shared<ArithExpr>();
    e->kind = ArithKind::RatioMul;
    e->num = num;
    e->den = den;
    e->lhs = std::move(inner);
    return e;
}
inline ArithPtr add(ArithPtr a, ArithPtr b) {
    auto e = std::make_shared<ArithExpr>();
    e->kind = ArithKind::Add;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}
inline ArithPtr sub(ArithPtr a, ArithPtr b) {
    auto e = std::make_shared<ArithExpr>();
    e->kind = ArithKind::Sub;
    e->lhs = std::move(a);
    e->rhs = std::move(b);
    return e;
}

}  // namespace arith

enum class PredKind : std::uint8_t {
    True,
    False,
    EventIs,      // current step is an Emit of the given kind
    InFlashloan,  // bound (contract, selector) pair is a registered provider
    VarEq,        // two bound variables hold the same value
    HookId,       // current step is a Hook with the given id
};

struct Predicate {
    PredKind kind = PredKind::True;
    EventKind event;        // EventIs
    std::string v1, v2;     // InFlashloan / VarEq
    std::uint8_t hook_id = 0;  // HookId

    friend bool operator==(const Predicate&, const Predicate&) = default;
};

enum class FormulaKind : std::uint8_t {
    Atom,
    Not,
    And,
    Or,
    Implies,
    Next,          // X
    Until,         // U
    Since,         // S
    Prev,          // Y
    Eventually,    // F
    Always,        // G
    Once,          // O
    Historically,  // H
    Forall,
    Exists,
    ExistsPair,
    Compare,
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Property AST node. Quantifiers bind a (contract, selector) variable pair
/// ranging over the call stack at the evaluation position; ExistsPair ranges
/// over ordered pairs of distinct stack positions.
struct Formula {
    FormulaKind kind = FormulaKind::Atom;
    Predicate pred;                       // Atom
    FormulaPtr lhs, rhs;                  // children; unary nodes use lhs
    std::string var_c, var_s;             // Forall/Exists and first ExistsPair binder
    std::string var_c2, var_s2;           // second ExistsPair binder
    CmpOp op = CmpOp::Lt;                 // Compare
    ArithPtr e1, e2;                      // Compare
};

namespace fml {

inline FormulaPtr atom(Predicate p) {
    auto f = std::make_shared<Formula>();
    f->pred = std::move(p);
    return f;
}
inline FormulaPtr truth() { return atom({PredKind::True}); }
inline FormulaPtr falsity() { return atom({PredKind::False}); }
inline FormulaPtr event_is(EventKind k) {
    Predicate p{PredKind::EventIs};
    p.event = k;
    return atom(p);
}
inline FormulaPtr in_flashloan(std::string c, std::string s) {
    Predicate p{PredKind::InFlashloan};
    p.v1 = std::move(c);
    p.v2 = std::move(s);
    return atom(p);
}
inline FormulaPtr var_eq(std::string a, std::string b) {
    Predicate p{PredKind::VarEq};
    p.v1 = std::move(a);
    p.v2 = std::move(b);
    return atom(p);
}
inline FormulaPtr hook_id(std::uint8_t id) {
    Predicate p{PredKind::HookId};
    p.hook_id = id;
    return atom(p);
}

inline FormulaPtr unary(FormulaKind kind, FormulaPtr f) {
    auto node = std::make_shared<Formula>();
    node->kind = kind;
    node->lhs = std::move(f);
    return node;
}
inline FormulaPtr binary(FormulaKind kind, FormulaPtr a, FormulaPtr b) {
    auto node = std::make_shared<Formula>();
    node->kind = kind;
    node->lhs = std::move(a);
    node->rhs = std::move(b);
    return node;
}

inline FormulaPtr not_(FormulaPtr f) { return unary(FormulaKind::Not, std::move(f)); }
inline FormulaPtr and_(FormulaPtr a, FormulaPtr b) {
    return binary(FormulaKind::And, std::move(a), std::move(b));
}
inline FormulaPtr or_(FormulaPtr a, FormulaPtr b) {
    return binary(FormulaKind::Or, std::move(a), std::move(b));
}
inline FormulaPtr implies(FormulaPtr a, FormulaPtr b) {
    return binary(FormulaKind::Implies, std::move(a), std::move(b));
}
inline FormulaPtr next(FormulaPtr f) { return unary(FormulaKind::Next, std::move(f)); }
inline FormulaPtr until(FormulaPtr a, FormulaPtr b) {
    return binary(FormulaKind::Until, std::move(a), std::move(b));
}
inline FormulaPtr since(FormulaPtr a, FormulaPtr b) {
    return binary(FormulaKind::Since, std::move(a), std::move(b));
}
inline FormulaPtr prev(FormulaPtr f) { return unary(FormulaKind::Prev, std::move(f)); }
inline FormulaPtr eventually(FormulaPtr f) {
    return unary(FormulaKind::Eventually, std::move(f));
}
inline FormulaPtr always(FormulaPtr f) { return unary(FormulaKind::Always, std::move(f)); }
inline FormulaPtr once(FormulaPtr f) { return unary(FormulaKind::Once, std::move(f)); }
inline FormulaPtr historically(FormulaPtr f) {
    return unary(FormulaKind::Historically, std::move(f));
}

inline FormulaPtr forall(std::string c, std::string s, FormulaPtr body) {
    auto node = std::make_shared<Formula>();
    node->kind = FormulaKind::Forall;
    node->var_c = std::move(c);
    node->var_s = std::move(s);
    node->lhs = std::move(body);
    return node;
}
inline FormulaPtr exists(std::string c, std::string s, FormulaPtr body) {
    auto node = std::make_shared<Formula>();
    node->kind = FormulaKind::Exists;
    node->var_c = std::move(c);
    node->var_s = std::move(s);
    node->lhs = std::move(body);
    return node;
}
inline FormulaPtr exists_pair(std::string c1, std::string s1, std::string c2, std::string s2,
                              FormulaPtr body) {
    auto node = std::make_shared<Formula>();
    node->kind = FormulaKind::ExistsPair;
    node->var_c = std::move(c1);
    node->var_s = std::move(s1);
    node->var_c2 = std::move(c2);
    node->var_s2 = std::move(s2);
    node->lhs = std::move(body);
    return node;
}
inline FormulaPtr compare(CmpOp op, ArithPtr a, ArithPtr b) {
    auto node = std::make_shared<Formula>();
    node->kind = FormulaKind::Compare;
    node->op = op;
    node->e1 = std::move(a);
    node->e2 = std::move(b);
    return node;
}

}  // namespace fml

inline bool arith_eq(const ArithPtr& a, const ArithPtr& b) {
    if (a == b)
        return true;
    if (!a || !b || a->kind != b->kind)
        return false;
    switch (a->kind) {
    case ArithKind::Const: return a->value == b->value;
    case ArithKind::HookArg:
    case ArithKind::SumDeposits:
    case ArithKind::SumWithdrawals: return true;
    case ArithKind::Var: return a->var == b->var;
    case ArithKind::RatioMul:
        return a->num == b->num && a->den == b->den && arith_eq(a->lhs, b->lhs);
    case ArithKind::Add:
    case ArithKind::Sub: return arith_eq(a->lhs, b->lhs) && arith_eq(a->rhs, b->rhs);
    }
    return false;
}

inline bool formula_eq(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b)
        return true;
    if (!a || !b || a->kind != b->kind)
        return false;
    switch (a->kind) {
    case FormulaKind::Atom:
        return a->pred == b->pred;
    case FormulaKind::Not:
    case FormulaKind::Next:
    case FormulaKind::Prev:
    case FormulaKind::Eventually:
    case FormulaKind::Always:
    case FormulaKind::Once:
    case FormulaKind::Historically:
        return formula_eq(a->lhs, b->lhs);
    case FormulaKind::And:
    case FormulaKind::Or:
    case FormulaKind::Implies:
    case FormulaKind::Until:
    case FormulaKind::Since:
        return formula_eq(a->lhs, b->lhs) && formula_eq(a->rhs, b->rhs);
    case FormulaKind::Forall:
    case FormulaKind::Exists:
        return a->var_c == b->var_c && a->var_s == b->var_s && formula_eq(a->lhs, b->lhs);
    case FormulaKind::ExistsPair:
        return a->var_c == b->var_c && a->var_s == b->var_s && a->var_c2 == b->var_c2 &&
               a->var_s2 == b->var_s2 && formula_eq(a->lhs, b->lhs);
    case FormulaKind::Compare:
        return a->op == b->op && arith_eq(a->e1, b->e1) && arith_eq(a->e2, b->e2);
    }
    return false;
}

/// True if the formula contains X, U, F or G anywhere.
inline bool contains_future(const Formula& f) {
    switch (f.kind) {
    case FormulaKind::Next:
    case FormulaKind::Until:
    case FormulaKind::Eventually:
    case FormulaKind::Always:
        return true;
    default:
        break;
    }
    if (f.lhs && contains_future(*f.lhs))
        return true;
    if (f.rhs && contains_future(*f.rhs))
        return true;
    return false;
}

/// True if the formula contains any temporal operator, past or future.
inline bool contains_temporal(const Formula& f) {
    switch (f.kind) {
    case FormulaKind::Next:
    case FormulaKind::Until:
    case FormulaKind::Eventually:
    case FormulaKind::Always:
    case FormulaKind::Since:
    case FormulaKind::Prev:
    case FormulaKind::Once:
    case FormulaKind::Historically:
        return true;
    default:
        break;
    }
    if (f.lhs && contains_temporal(*f.lhs))
        return true;
    if (f.rhs && contains_temporal(*f.rhs))
        return true;
    return false;
}

/// Named property collection in file order. Names are unique; formulas are
/// closed (no free variables).
class PropertySet {
public:
    void add(std::string name, FormulaPtr formula) {
        if (find(name) != nullptr)
            throw std::invalid_argument("duplicate property name: " + name);
        entries_.emplace_back(std::move(name), std::move(formula));
    }

    const FormulaPtr* find(const std::string& name) const {
        for (const auto& [n, f] : entries_)
            if (n == name)
                return &f;
        return nullptr;
    }

    bool contains(const std::string& name) const { return find(name) != nullptr; }
    std::size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    auto begin() const { return entries_.begin(); }
    auto end() const { return entries_.end(); }

private:
    std::vector<std::pair<std::string, FormulaPtr>> entries_;
};

}  // namespace tracehook
