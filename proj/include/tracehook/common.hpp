// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <compare>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace tracehook {

/// Machine word. All VM values, balances, storage cells and property
/// arithmetic use 64-bit unsigned words.
using Word = std::uint64_t;

inline constexpr Word kWordMax = std::numeric_limits<Word>::max();

/// Contract (or externally-owned) account address, rendered as 0x-hex.
struct Address {
    std::uint64_t value = 0;
    friend auto operator<=>(const Address&, const Address&) = default;
};

/// Function selector carried in call data, rendered as 0x-hex.
struct Selector {
    std::uint32_t value = 0;
    friend auto operator<=>(const Selector&, const Selector&) = default;
};

inline std::string to_hex(std::uint64_t v) {
    static constexpr char digits[] = "0123456789abcdef";
    if (v == 0)
        return "0x0";
    char buf[16];
    int n = 0;
    while (v != 0) {
        buf[n++] = digits[v & 0xf];
        v >>= 4;
    }
    std::string out = "0x";
    for (int i = n - 1; i >= 0; --i)
        out.push_back(buf[i]);
    return out;
}

inline std::string to_hex(Address a) { return to_hex(a.value); }
inline std::string to_hex(Selector s) { return to_hex(std::uint64_t{s.value}); }

/// Parses a decimal or 0x-prefixed hex unsigned integer.
/// Returns false on malformed input or overflow.
inline bool parse_word(const std::string& text, Word& out) {
    if (text.empty())
        return false;
    std::size_t pos = 0;
    int base = 10;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X')) {
        pos = 2;
        base = 16;
    }
    if (pos == text.size())
        return false;
    Word acc = 0;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        int d;
        if (c >= '0' && c <= '9')
            d = c - '0';
        else if (base == 16 && c >= 'a' && c <= 'f')
            d = c - 'a' + 10;
        else if (base == 16 && c >= 'A' && c <= 'F')
            d = c - 'A' + 10;
        else
            return false;
        if (acc > (kWordMax - static_cast<Word>(d)) / static_cast<Word>(base))
            return false;
        acc = acc * static_cast<Word>(base) + static_cast<Word>(d);
    }
    out = acc;
    return true;
}

inline Word saturating_add(Word a, Word b) {
    return a > kWordMax - b ? kWordMax : a + b;
}

inline Word saturating_sub(Word a, Word b) {
    return a < b ? 0 : a - b;
}

/// Computes floor(num * e / den) with a 128-bit intermediate, saturating
/// at the word maximum. den must be nonzero.
inline Word ratio_mul(Word num, Word den, Word e) {
    unsigned __int128 wide = static_cast<unsigned __int128>(num) * e;
    wide /= den;
    if (wide > static_cast<unsigned __int128>(kWordMax))
        return kWordMax;
    return static_cast<Word>(wide);
}

/// Base class for all recoverable tracehook errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Lexical or syntactic error in the property DSL, with 1-based position.
struct ParseError : Error {
    ParseError(std::string msg, int line_, int col_)
        : Error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
          line(line_),
          col(col_) {}
    int line;
    int col;
};

/// Malformed trace structure (unbalanced nesting, bad positions).
struct TraceError : Error {
    using Error::Error;
};

/// Trace or scenario document does not match its schema.
struct SchemaError : Error {
    using Error::Error;
};

/// Assembly text error, with 1-based source line.
struct AsmError : Error {
    AsmError(std::string msg, int line_)
        : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
    int line;
};

/// Property evaluation error (unbound hook argument, unknown property,
/// future operator at an enforcement point).
struct EvalError : Error {
    using Error::Error;
};

/// Formula outside the online-monitorable fragment.
struct FragmentError : Error {
    using Error::Error;
};

/// Violated internal invariant; indicates a bug in the caller, not bad input.
struct InternalError : std::logic_error {
    using std::logic_error::logic_error;
};

}  // namespace tracehook
