// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

#include "tracehook/formula.hpp"

namespace tracehook {

// The three built-in detectors, constructed as plain formulas so they can be
// bound to hooks, pretty-printed, and cross-checked against brute-force
// scans in the tests.

/// Violated when a registered flashloan entry point has appeared anywhere on
/// the call stack at or before the checked position:
///   not O (exists (c,s) in callstack : inflashloan(c,s))
inline FormulaPtr builtin_flashloan() {
    return fml::not_(fml::once(fml::exists("c", "s", fml::in_flashloan("c", "s"))));
}

/// Violated when some past-or-present call stack holds the same
/// (contract, selector) pair at two distinct positions:
///   not O (exists_pair ((c1,s1),(c2,s2)) in callstack : c1 == c2 and s1 == s2)
inline FormulaPtr builtin_reentrancy() {
    return fml::not_(fml::once(fml::exists_pair(
        "c1", "s1", "c2", "s2",
        fml::and_(fml::var_eq("c1", "c2"), fml::var_eq("s1", "s2")))));
}

/// Violated when the hook amount reaches num/den of the net value locked in
/// the hook's contract so far:
///   arg < ratio(num,den,sum(deposits) - sum(withdrawals))
inline FormulaPtr builtin_tvl(Word num, Word den) {
    if (den == 0)
        throw std::invalid_argument("builtin_tvl: denominator must be nonzero");
    return fml::compare(CmpOp::Lt, arith::hook_arg(),
                        arith::ratio(num, den,
                                     arith::sub(arith::sum_deposits(),
                                                arith::sum_withdrawals())));
}

inline constexpr const char* kBuiltinFlashloanName = "builtin.flashloan";
inline constexpr const char* kBuiltinReentrancyName = "builtin.reentrancy";
inline constexpr const char* kBuiltinTvlPrefix = "builtin.tvl";

/// Resolves a reserved builtin property name ("builtin.flashloan",
/// "builtin.reentrancy", "builtin.tvl(num,den)") to its formula. Returns
/// nullopt for non-builtin names; throws SchemaError on a malformed builtin
/// reference.
inline std::optional<FormulaPtr> resolve_builtin(const std::string& name) {
    if (name == kBuiltinFlashloanName)
        return builtin_flashloan();
    if (name == kBuiltinReentrancyName)
        return builtin_reentrancy();
    if (name.rfind(kBuiltinTvlPrefix, 0) == 0) {
        std::string rest = name.substr(std::string(kBuiltinTvlPrefix).size());
        if (rest.empty())
            return std::nullopt;  // bare builtin.tvl: caller supplies a threshold
        if (rest.front() != '(' || rest.back() != ')')
            throw SchemaError("malformed builtin reference '" + name + "'");
        std::string inner = rest.substr(1, rest.size() - 2);
        auto comma = inner.find(',');
        if (comma == std::string::npos)
            throw SchemaError("malformed builtin reference '" + name + "'");
        Word num = 0, den = 0;
        if (!parse_word(inner.substr(0, comma), num) ||
            !parse_word(inner.substr(comma + 1), den) || den == 0)
            throw SchemaError("malformed builtin reference '" + name + "'");
        return builtin_tvl(num, den);
    }
    if (name.rfind("builtin.", 0) == 0)
        throw SchemaError("unknown builtin property '" + name + "'");
    return std::nullopt;
}

}  // namespace tracehook
