// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <string>
#include <vector>

#include "tracehook/common.hpp"

namespace tracehook {

enum class Tok : std::uint8_t {
    Ident,
    Num,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Comma,
    Colon,
    Arrow,  // ->
    Plus,
    Minus,
    Lt,
    Le,
    EqEq,
    Neq,
    Ge,
    Gt,
    // keywords
    KwProperty,
    KwTrue,
    KwFalse,
    KwNot,
    KwAnd,
    KwOr,
    KwNext,       // X
    KwUntil,      // U
    KwSince,      // S
    KwPrev,       // Y
    KwEventually, // F
    KwAlways,     // G
    KwOnce,       // O
    KwHist,       // H
    KwForall,
    KwExists,
    KwExistsPair,
    KwIn,
    KwCallstack,
    KwInFlashloan,
    KwEvent,
    KwHookId,
    KwArg,
    KwSum,
    KwDeposits,
    KwWithdrawals,
    KwRatio,
    End,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;  // identifier spelling
    Word number = 0;   // numeric value
    int line = 1;
    int col = 1;
};

namespace detail {

inline bool keyword_token(const std::string& s, Tok& out) {
    struct Entry {
        const char* text;
        Tok tok;
    };
    static constexpr Entry table[] = {
        {"property", Tok::KwProperty}, {"true", Tok::KwTrue},
        {"false", Tok::KwFalse},       {"not", Tok::KwNot},
        {"and", Tok::KwAnd},           {"or", Tok::KwOr},
        {"X", Tok::KwNext},            {"U", Tok::KwUntil},
        {"S", Tok::KwSince},           {"Y", Tok::KwPrev},
        {"F", Tok::KwEventually},      {"G", Tok::KwAlways},
        {"O", Tok::KwOnce},            {"H", Tok::KwHist},
        {"forall", Tok::KwForall},     {"exists", Tok::KwExists},
        {"exists_pair", Tok::KwExistsPair}, {"in", Tok::KwIn},
        {"callstack", Tok::KwCallstack},    {"inflashloan", Tok::KwInFlashloan},
        {"event", Tok::KwEvent},       {"hookid", Tok::KwHookId},
        {"arg", Tok::KwArg},           {"sum", Tok::KwSum},
        {"deposits", Tok::KwDeposits}, {"withdrawals", Tok::KwWithdrawals},
        {"ratio", Tok::KwRatio},
    };
    for (const Entry& e : table) {
        if (s == e.text) {
            out = e.tok;
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Splits property DSL text into tokens with 1-based positions. `//` starts a
/// comment running to end of line. Throws ParseError on illegal characters or
/// malformed numbers.
inline std::vector<Token> tokenize(const std::string& text) {
    std::vector<Token> out;
    int line = 1;
    int col = 1;
    std::size_t i = 0;
    const std::size_t n = text.size();

    auto advance = [&](std::size_t count) {
        for (std::size_t k = 0; k < count && i < n; ++k, ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
    };

    while (i < n) {
        char c = text[i];
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
            advance(1);
            continue;
        }
        if (c == '/' && i + 1 < n && text[i + 1] == '/') {
            while (i < n && text[i] != '\n')
                advance(1);
            continue;
        }
        Token tok;
        tok.line = line;
        tok.col = col;
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t j = i;
            bool hex = j + 1 < n && text[j] == '0' && (text[j + 1] == 'x' || text[j + 1] == 'X');
            if (hex)
                j += 2;
            while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            std::string lit = text.substr(i, j - i);
            if (!parse_word(lit, tok.number))
                throw ParseError("malformed number '" + lit + "'", line, col);
            tok.kind = Tok::Num;
            advance(j - i);
            out.push_back(std::move(tok));
            continue;
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t j = i;
            while (j < n && (std::isalnum(static_cast<unsigned char>(text[j])) || text[j] == '_'))
                ++j;
            std::string word = text.substr(i, j - i);
            Tok kw;
            if (detail::keyword_token(word, kw)) {
                tok.kind = kw;
            } else {
                tok.kind = Tok::Ident;
                tok.text = std::move(word);
            }
            advance(j - i);
            out.push_back(std::move(tok));
            continue;
        }
        auto two = [&](char a, char b) {
            return c == a && i + 1 < n && text[i + 1] == b;
        };
        if (two('-', '>')) {
            tok.kind = Tok::Arrow;
            advance(2);
        } else if (two('<', '=')) {
            tok.kind = Tok::Le;
            advance(2);
        } else if (two('>', '=')) {
            tok.kind = Tok::Ge;
            advance(2);
        } else if (two('=', '=')) {
            tok.kind = Tok::EqEq;
            advance(2);
        } else if (two('!', '=')) {
            tok.kind = Tok::Neq;
            advance(2);
        } else {
            switch (c) {
            case '(': tok.kind = Tok::LParen; break;
            case ')': tok.kind = Tok::RParen; break;
            case '{': tok.kind = Tok::LBrace; break;
            case '}': tok.kind = Tok::RBrace; break;
            case ',': tok.kind = Tok::Comma; break;
            case ':': tok.kind = Tok::Colon; break;
            case '+': tok.kind = Tok::Plus; break;
            case '-': tok.kind = Tok::Minus; break;
            case '<': tok.kind = Tok::Lt; break;
            case '>': tok.kind = Tok::Gt; break;
            default:
                throw ParseError(std::string("illegal character '") + c + "'", line, col);
            }
            advance(1);
        }
        out.push_back(std::move(tok));
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.col = col;
    out.push_back(std::move(end));
    return out;
}

}  // namespace tracehook
