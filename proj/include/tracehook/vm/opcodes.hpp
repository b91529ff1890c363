// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace tracehook {

// Instruction set. PUSH carries an 8-byte little-endian immediate; EMIT and
// HOOK carry a 1-byte immediate. DUPn copies the n-th stack slot from the
// top (DUP0 duplicates the top), SWAPn exchanges the top with the slot n+1
// below it. Binary operators pop the top as the right operand: PUSH a,
// PUSH b, SUB leaves a-b.
enum Opcode : std::uint8_t {
    OP_STOP = 0x00,
    OP_ADD = 0x01,
    OP_SUB = 0x02,
    OP_MUL = 0x03,
    OP_DIV = 0x04,
    OP_LT = 0x10,
    OP_GT = 0x11,
    OP_EQ = 0x12,
    OP_ISZERO = 0x13,
    OP_AND = 0x14,
    OP_OR = 0x15,
    OP_NOT = 0x16,
    OP_CALLER = 0x30,
    OP_CALLVALUE = 0x31,
    OP_SELFADDR = 0x32,
    OP_BALANCE = 0x33,
    OP_CALLARG = 0x34,
    OP_SELECTOR = 0x35,
    OP_POP = 0x50,
    OP_SLOAD = 0x54,
    OP_SSTORE = 0x55,
    OP_JUMP = 0x56,
    OP_JUMPI = 0x57,
    OP_JUMPDEST = 0x5b,
    OP_PUSH = 0x60,
    OP_DUP0 = 0x80,   // .. 0x8f
    OP_SWAP0 = 0x90,  // .. 0x9f
    OP_EMIT = 0xa0,
    OP_HOOK = 0xa5,
    OP_TRANSFER = 0xf0,
    OP_CALL = 0xf1,
    OP_RETURN = 0xf3,
    OP_REVERT = 0xfd,
};

/// Immediate bytes following the opcode byte.
inline std::size_t immediate_size(std::uint8_t op) {
    if (op == OP_PUSH)
        return 8;
    if (op == OP_EMIT || op == OP_HOOK)
        return 1;
    return 0;
}

inline std::string opcode_name(std::uint8_t op) {
    switch (op) {
    case OP_STOP: return "STOP";
    case OP_ADD: return "ADD";
    case OP_SUB: return "SUB";
    case OP_MUL: return "MUL";
    case OP_DIV: return "DIV";
    case OP_LT: return "LT";
    case OP_GT: return "GT";
    case OP_EQ: return "EQ";
    case OP_ISZERO: return "ISZERO";
    case OP_AND: return "AND";
    case OP_OR: return "OR";
    case OP_NOT: return "NOT";
    case OP_CALLER: return "CALLER";
    case OP_CALLVALUE: return "CALLVALUE";
    case OP_SELFADDR: return "SELFADDR";
    case OP_BALANCE: return "BALANCE";
    case OP_CALLARG: return "CALLARG";
    case OP_SELECTOR: return "SELECTOR";
    case OP_POP: return "POP";
    case OP_SLOAD: return "SLOAD";
    case OP_SSTORE: return "SSTORE";
    case OP_JUMP: return "JUMP";
    case OP_JUMPI: return "JUMPI";
    case OP_JUMPDEST: return "JUMPDEST";
    case OP_PUSH: return "PUSH";
    case OP_EMIT: return "EMIT";
    case OP_HOOK: return "HOOK";
    case OP_TRANSFER: return "TRANSFER";
    case OP_CALL: return "CALL";
    case OP_RETURN: return "RETURN";
    case OP_REVERT: return "REVERT";
    default:
        if (op >= OP_DUP0 && op <= OP_DUP0 + 15)
            return "DUP" + std::to_string(op - OP_DUP0);
        if (op >= OP_SWAP0 && op <= OP_SWAP0 + 15)
            return "SWAP" + std::to_string(op - OP_SWAP0);
        return "INVALID";
    }
}

inline std::optional<std::uint8_t> opcode_from_name(const std::string& name) {
    struct Entry {
        const char* text;
        std::uint8_t op;
    };
    static constexpr Entry table[] = {
        {"STOP", OP_STOP},     {"ADD", OP_ADD},           {"SUB", OP_SUB},
        {"MUL", OP_MUL},       {"DIV", OP_DIV},           {"LT", OP_LT},
        {"GT", OP_GT},         {"EQ", OP_EQ},             {"ISZERO", OP_ISZERO},
        {"AND", OP_AND},       {"OR", OP_OR},             {"NOT", OP_NOT},
        {"CALLER", OP_CALLER}, {"CALLVALUE", OP_CALLVALUE}, {"SELFADDR", OP_SELFADDR},
        {"BALANCE", OP_BALANCE}, {"CALLARG", OP_CALLARG}, {"SELECTOR", OP_SELECTOR},
        {"POP", OP_POP},       {"SLOAD", OP_SLOAD},       {"SSTORE", OP_SSTORE},
        {"JUMP", OP_JUMP},     {"JUMPI", OP_JUMPI},       {"JUMPDEST", OP_JUMPDEST},
        {"PUSH", OP_PUSH},     {"EMIT", OP_EMIT},         {"HOOK", OP_HOOK},
        {"TRANSFER", OP_TRANSFER}, {"CALL", OP_CALL},     {"RETURN", OP_RETURN},
        {"REVERT", OP_REVERT},
    };
    for (const Entry& e : table)
        if (name == e.text)
            return e.op;
    if (name.rfind("DUP", 0) == 0 || name.rfind("SWAP", 0) == 0) {
        std::size_t digits = name.rfind("DUP", 0) == 0 ? 3 : 4;
        std::string n = name.substr(digits);
        if (!n.empty() && n.size() <= 2) {
            int v = 0;
            for (char c : n) {
                if (c < '0' || c > '9')
                    return std::nullopt;
                v = v * 10 + (c - '0');
            }
            if (v <= 15)
                return static_cast<std::uint8_t>((digits == 3 ? OP_DUP0 : OP_SWAP0) + v);
        }
    }
    return std::nullopt;
}

}  // namespace tracehook
