// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <set>
#include <string>
#include <vector>

#include "tracehook/formula.hpp"
#include "tracehook/lexer.hpp"

namespace tracehook {

// Recursive descent over the property grammar:
//
//   file     := property*
//   property := "property" IDENT "{" formula "}"
//   formula  := quant | impl
//   quant    := ("forall"|"exists") "(" IDENT "," IDENT ")" "in" "callstack" ":" formula
//             | "exists_pair" "((" IDENT "," IDENT "),(" IDENT "," IDENT "))"
//               "in" "callstack" ":" formula
//   impl     := orf ("->" impl)?
//   orf      := andf ("or" andf)*
//   andf     := temp ("and" temp)*
//   temp     := unary (("S"|"U") temp)?
//   unary    := ("not"|"X"|"Y"|"F"|"G"|"O"|"H") unary | atom
//   atom     := "true" | "false" | "(" formula ")" | "inflashloan" "(" IDENT "," IDENT ")"
//             | "event" "(" KIND ")" | "hookid" "(" NUM ")"
//             | IDENT "==" IDENT | IDENT "!=" IDENT | arith CMP arith
//   arith    := NUM | "arg" | "sum" "(" ("deposits"|"withdrawals") ")"
//             | "ratio" "(" NUM "," NUM "," arith ")" | arith ("+"|"-") arith
//
// Quantifier bodies extend to the end of the enclosing parenthesis or
// property. Binders must be fresh (no shadowing) and every variable use must
// be bound; `!=` between variables parses as negated equality.

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

    PropertySet parse_file() {
        PropertySet props;
        while (peek().kind != Tok::End) {
            expect(Tok::KwProperty, "expected 'property'");
            Token name = expect(Tok::Ident, "expected property name");
            if (props.contains(name.text))
                throw ParseError("duplicate property name '" + name.text + "'", name.line,
                                 name.col);
            expect(Tok::LBrace, "expected '{'");
            FormulaPtr body = parse_formula();
            expect(Tok::RBrace, "expected '}'");
            props.add(name.text, std::move(body));
        }
        return props;
    }

    /// Parses a single formula spanning the whole token stream.
    FormulaPtr parse_single_formula() {
        FormulaPtr f = parse_formula();
        expect(Tok::End, "unexpected trailing input");
        return f;
    }

private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int depth_ = 0;
    std::set<std::string> scope_;

    static constexpr int kMaxDepth = 200;

    const Token& peek(std::size_t ahead = 0) const {
        std::size_t i = pos_ + ahead;
        return i < toks_.size() ? toks_[i] : toks_.back();
    }
    Token take() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }
    bool accept(Tok kind) {
        if (peek().kind == kind) {
            take();
            return true;
        }
        return false;
    }
    Token expect(Tok kind, const std::string& msg) {
        if (peek().kind != kind)
            throw ParseError(msg, peek().line, peek().col);
        return take();
    }

    struct DepthGuard {
        explicit DepthGuard(Parser& p) : parser(p) {
            if (++parser.depth_ > kMaxDepth)
                throw ParseError("formula nesting too deep", parser.peek().line,
                                 parser.peek().col);
        }
        ~DepthGuard() { --parser.depth_; }
        Parser& parser;
    };

    std::string bind(const Token& name) {
        if (scope_.count(name.text))
            throw ParseError("variable '" + name.text + "' shadows an enclosing binder",
                             name.line, name.col);
        scope_.insert(name.text);
        return name.text;
    }
    void unbind(const std::string& name) { scope_.erase(name); }

    std::string use_var(const Token& name) const {
        if (!scope_.count(name.text))
            throw ParseError("unbound variable '" + name.text + "'", name.line, name.col);
        return name.text;
    }

    FormulaPtr parse_formula() {
        DepthGuard guard(*this);
        switch (peek().kind) {
        case Tok::KwForall:
        case Tok::KwExists:
            return parse_quantifier();
        case Tok::KwExistsPair:
            return parse_exists_pair();
        default:
            return parse_impl();
        }
    }

    FormulaPtr parse_quantifier() {
        bool universal = take().kind == Tok::KwForall;
        expect(Tok::LParen, "expected '(' after quantifier");
        Token c = expect(Tok::Ident, "expected contract variable");
        expect(Tok::Comma, "expected ','");
        Token s = expect(Tok::Ident, "expected selector variable");
        expect(Tok::RParen, "expected ')'");
        expect(Tok::KwIn, "expected 'in'");
        expect(Tok::KwCallstack, "expected 'callstack'");
        expect(Tok::Colon, "expected ':'");
        std::string cv = bind(c);
        std::string sv = bind(s);
        FormulaPtr body = parse_formula();
        unbind(cv);
        unbind(sv);
        return universal ? fml::forall(cv, sv, std::move(body))
                         : fml::exists(cv, sv, std::move(body));
    }

    FormulaPtr parse_exists_pair() {
        take();
        expect(Tok::LParen, "expected '('");
        expect(Tok::LParen, "expected '('");
        Token c1 = expect(Tok::Ident, "expected contract variable");
        expect(Tok::Comma, "expected ','");
        Token s1 = expect(Tok::Ident, "expected selector variable");
        expect(Tok::RParen, "expected ')'");
        expect(Tok::Comma, "expected ','");
        expect(Tok::LParen, "expected '('");
        Token c2 = expect(Tok::Ident, "expected contract variable");
        expect(Tok::Comma, "expected ','");
        Token s2 = expect(Tok::Ident, "expected selector variable");
        expect(Tok::RParen, "expected ')'");
        expect(Tok::RParen, "expected ')'");
        expect(Tok::KwIn, "expected 'in'");
        expect(Tok::KwCallstack, "expected 'callstack'");
        expect(Tok::Colon, "expected ':'");
        std::vector<Token> binders{c1, s1, c2, s2};
        std::vector<std::string> names;
        for (const Token& b : binders)
            names.push_back(bind(b));
        FormulaPtr body = parse_formula();
        for (const std::string& n : names)
            unbind(n);
        return fml::exists_pair(names[0], names[1], names[2], names[3], std::move(body));
    }

    FormulaPtr parse_impl() {
        FormulaPtr lhs = parse_or();
        if (accept(Tok::Arrow))
            return fml::implies(std::move(lhs), parse_impl());
        return lhs;
    }

    FormulaPtr parse_or() {
        FormulaPtr f = parse_and();
        while (accept(Tok::KwOr))
            f = fml::or_(std::move(f), parse_and());
        return f;
    }

    FormulaPtr parse_and() {
        FormulaPtr f = parse_temp();
        while (accept(Tok::KwAnd))
            f = fml::and_(std::move(f), parse_temp());
        return f;
    }

    // S and U share one precedence tier and associate to the right.
    FormulaPtr parse_temp() {
        DepthGuard guard(*this);
        FormulaPtr lhs = parse_unary();
        if (peek().kind == Tok::KwSince) {
            take();
            return fml::since(std::move(lhs), parse_temp());
        }
        if (peek().kind == Tok::KwUntil) {
            take();
            return fml::until(std::move(lhs), parse_temp());
        }
        return lhs;
    }

    FormulaPtr parse_unary() {
        DepthGuard guard(*this);
        switch (peek().kind) {
        case Tok::KwNot: take(); return fml::not_(parse_unary());
        case Tok::KwNext: take(); return fml::next(parse_unary());
        case Tok::KwPrev: take(); return fml::prev(parse_unary());
        case Tok::KwEventually: take(); return fml::eventually(parse_unary());
        case Tok::KwAlways: take(); return fml::always(parse_unary());
        case Tok::KwOnce: take(); return fml::once(parse_unary());
        case Tok::KwHist: take(); return fml::historically(parse_unary());
        default: return parse_atom();
        }
    }

    FormulaPtr parse_atom() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::KwTrue:
            take();
            return fml::truth();
        case Tok::KwFalse:
            take();
            return fml::falsity();
        case Tok::LParen: {
            take();
            FormulaPtr inner = parse_formula();
            expect(Tok::RParen, "expected ')'");
            return inner;
        }
        case Tok::KwInFlashloan: {
            take();
            expect(Tok::LParen, "expected '('");
            Token c = expect(Tok::Ident, "expected contract variable");
            expect(Tok::Comma, "expected ','");
            Token s = expect(Tok::Ident, "expected selector variable");
            expect(Tok::RParen, "expected ')'");
            return fml::in_flashloan(use_var(c), use_var(s));
        }
        case Tok::KwEvent: {
            take();
            expect(Tok::LParen, "expected '('");
            EventKind kind = parse_event_kind();
            expect(Tok::RParen, "expected ')'");
            return fml::event_is(kind);
        }
        case Tok::KwHookId: {
            take();
            expect(Tok::LParen, "expected '('");
            Token num = expect(Tok::Num, "expected hook id");
            if (num.number > 0xff)
                throw ParseError("hook id exceeds 8 bits", num.line, num.col);
            expect(Tok::RParen, "expected ')'");
            return fml::hook_id(static_cast<std::uint8_t>(num.number));
        }
        case Tok::Ident: {
            Token a = take();
            std::string av = use_var(a);
            if (accept(Tok::EqEq))
                return fml::var_eq(av, use_var(expect(Tok::Ident, "expected variable")));
            if (accept(Tok::Neq))
                return fml::not_(
                    fml::var_eq(av, use_var(expect(Tok::Ident, "expected variable"))));
            throw ParseError("expected '==' or '!=' after variable '" + a.text + "'",
                             peek().line, peek().col);
        }
        case Tok::Num:
        case Tok::KwArg:
        case Tok::KwSum:
        case Tok::KwRatio: {
            ArithPtr lhs = parse_arith();
            CmpOp op = parse_cmp_op();
            ArithPtr rhs = parse_arith();
            return fml::compare(op, std::move(lhs), std::move(rhs));
        }
        default:
            throw ParseError("expected a formula", t.line, t.col);
        }
    }

    EventKind parse_event_kind() {
        const Token& t = peek();
        if (t.kind == Tok::Num) {
            take();
            if (t.number > 0xff)
                throw ParseError("event code exceeds 8 bits", t.line, t.col);
            return EventKind::custom(static_cast<std::uint8_t>(t.number));
        }
        if (t.kind == Tok::Ident || t.kind == Tok::KwDeposits || t.kind == Tok::KwWithdrawals) {
            Token word = take();
            std::string name = word.text;
            if (word.kind == Tok::KwDeposits)
                name = "deposits";
            if (word.kind == Tok::KwWithdrawals)
                name = "withdrawals";
            if (name == "transfer")
                return EventKind::token_transfer();
            if (name == "deposit")
                return EventKind::deposit();
            if (name == "withdrawal")
                return EventKind::withdrawal();
            throw ParseError("unknown event kind '" + name + "'", word.line, word.col);
        }
        throw ParseError("expected event kind", t.line, t.col);
    }

    CmpOp parse_cmp_op() {
        switch (peek().kind) {
        case Tok::Lt: take(); return CmpOp::Lt;
        case Tok::Le: take(); return CmpOp::Le;
        case Tok::EqEq: take(); return CmpOp::Eq;
        case Tok::Neq: take(); return CmpOp::Ne;
        case Tok::Ge: take(); return CmpOp::Ge;
        case Tok::Gt: take(); return CmpOp::Gt;
        default:
            throw ParseError("expected comparison operator", peek().line, peek().col);
        }
    }

    ArithPtr parse_arith() {
        DepthGuard guard(*this);
        ArithPtr lhs = parse_arith_primary();
        while (true) {
            if (accept(Tok::Plus))
                lhs = arith::add(std::move(lhs), parse_arith_primary());
            else if (accept(Tok::Minus))
                lhs = arith::sub(std::move(lhs), parse_arith_primary());
            else
                return lhs;
        }
    }

    ArithPtr parse_arith_primary() {
        const Token& t = peek();
        switch (t.kind) {
        case Tok::Num:
            take();
            return arith::constant(t.number);
        case Tok::KwArg:
            take();
            return arith::hook_arg();
        case Tok::KwSum: {
            take();
            expect(Tok::LParen, "expected '('");
            ArithPtr e;
            if (accept(Tok::KwDeposits))
                e = arith::sum_deposits();
            else if (accept(Tok::KwWithdrawals))
                e = arith::sum_withdrawals();
            else
                throw ParseError("expected 'deposits' or 'withdrawals'", peek().line,
                                 peek().col);
            expect(Tok::RParen, "expected ')'");
            return e;
        }
        case Tok::KwRatio: {
            take();
            expect(Tok::LParen, "expected '('");
            Token num = expect(Tok::Num, "expected ratio numerator");
            expect(Tok::Comma, "expected ','");
            Token den = expect(Tok::Num, "expected ratio denominator");
            if (den.number == 0)
                throw ParseError("ratio denominator must be nonzero", den.line, den.col);
            expect(Tok::Comma, "expected ','");
            ArithPtr inner = parse_arith();
            expect(Tok::RParen, "expected ')'");
            return arith::ratio(num.number, den.number, std::move(inner));
        }
        default:
            throw ParseError("expected arithmetic expression", t.line, t.col);
        }
    }
};

/// Parses a property file into a PropertySet; every property body is closed
/// and well scoped. Throws ParseError with position on any failure.
inline PropertySet parse_properties(const std::string& text) {
    return Parser(tokenize(text)).parse_file();
}

/// Parses one bare formula (no `property` wrapper). Test and tooling helper.
inline FormulaPtr parse_formula_text(const std::string& text) {
    return Parser(tokenize(text)).parse_single_formula();
}

}  // namespace tracehook
