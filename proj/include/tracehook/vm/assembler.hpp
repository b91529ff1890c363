// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "tracehook/common.hpp"
#include "tracehook/vm/opcodes.hpp"

namespace tracehook {

// Assembly text: one instruction per line, `//` or `;` comments, `label:`
// definitions (optionally followed by an instruction on the same line) and
// `@label` references. PUSH takes a number or @label; JUMP/JUMPI accept an
// optional @label operand as sugar for PUSH @label + JUMP(I). Immediates are
// decimal or 0x-hex.

namespace detail {

struct AsmItem {
    std::uint8_t op = 0;
    Word immediate = 0;
    std::string label_ref;  // unresolved @label in a PUSH
    int line = 1;
};

inline std::vector<std::string> asm_fields(const std::string& line) {
    std::string cleaned = line;
    auto cut = cleaned.find("//");
    if (cut != std::string::npos)
        cleaned.resize(cut);
    cut = cleaned.find(';');
    if (cut != std::string::npos)
        cleaned.resize(cut);
    std::vector<std::string> fields;
    std::istringstream in(cleaned);
    std::string word;
    while (in >> word)
        fields.push_back(word);
    return fields;
}

}  // namespace detail

/// Assembles text to bytecode. Label references are patched to byte offsets;
/// errors carry 1-based line numbers.
inline std::vector<std::uint8_t> assemble(const std::string& text) {
    std::vector<detail::AsmItem> items;
    std::map<std::string, Word> labels;

    // First pass: parse instructions, record label offsets.
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    Word offset = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::vector<std::string> fields = detail::asm_fields(line);
        if (fields.empty())
            continue;
        if (fields.front().back() == ':') {
            std::string name = fields.front().substr(0, fields.front().size() - 1);
            if (name.empty())
                throw AsmError("empty label name", line_no);
            if (labels.count(name))
                throw AsmError("duplicate label '" + name + "'", line_no);
            labels[name] = offset;
            fields.erase(fields.begin());
            if (fields.empty())
                continue;
        }
        std::string mnemonic = fields[0];
        auto op = opcode_from_name(mnemonic);
        if (!op)
            throw AsmError("unknown mnemonic '" + mnemonic + "'", line_no);

        auto parse_operand = [&](const std::string& s, detail::AsmItem& item) {
            if (s[0] == '@') {
                item.label_ref = s.substr(1);
                if (item.label_ref.empty())
                    throw AsmError("empty label reference", line_no);
                return;
            }
            if (!parse_word(s, item.immediate))
                throw AsmError("malformed immediate '" + s + "'", line_no);
        };

        if (*op == OP_PUSH) {
            if (fields.size() != 2)
                throw AsmError("PUSH takes one operand", line_no);
            detail::AsmItem item{*op, 0, "", line_no};
            parse_operand(fields[1], item);
            items.push_back(std::move(item));
            offset += 9;
        } else if (*op == OP_EMIT || *op == OP_HOOK) {
            if (fields.size() != 2)
                throw AsmError(mnemonic + " takes one operand", line_no);
            detail::AsmItem item{*op, 0, "", line_no};
            if (!parse_word(fields[1], item.immediate))
                throw AsmError("malformed immediate '" + fields[1] + "'", line_no);
            if (item.immediate > 0xff)
                throw AsmError(mnemonic + " immediate exceeds 8 bits", line_no);
            items.push_back(std::move(item));
            offset += 2;
        } else if ((*op == OP_JUMP || *op == OP_JUMPI) && fields.size() == 2) {
            // JUMP @label sugar: emit the target push, then the jump.
            detail::AsmItem push{OP_PUSH, 0, "", line_no};
            parse_operand(fields[1], push);
            items.push_back(std::move(push));
            items.push_back({*op, 0, "", line_no});
            offset += 10;
        } else {
            if (fields.size() != 1)
                throw AsmError("'" + mnemonic + "' takes no operand", line_no);
            items.push_back({*op, 0, "", line_no});
            offset += 1;
        }
    }

    // Second pass: emit bytes, patch labels.
    std::vector<std::uint8_t> code;
    code.reserve(static_cast<std::size_t>(offset));
    for (const detail::AsmItem& item : items) {
        code.push_back(item.op);
        if (item.op == OP_PUSH) {
            Word value = item.immediate;
            if (!item.label_ref.empty()) {
                auto it = labels.find(item.label_ref);
                if (it == labels.end())
                    throw AsmError("undefined label '" + item.label_ref + "'", item.line);
                value = it->second;
            }
            for (int b = 0; b < 8; ++b)
                code.push_back(static_cast<std::uint8_t>((value >> (8 * b)) & 0xff));
        } else if (item.op == OP_EMIT || item.op == OP_HOOK) {
            code.push_back(static_cast<std::uint8_t>(item.immediate));
        }
    }
    return code;
}

inline std::string bytes_to_hex(const std::vector<std::uint8_t>& bytes) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(bytes.size() * 2);
    for (std::uint8_t b : bytes) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

inline std::vector<std::uint8_t> bytes_from_hex(std::string text) {
    if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0)
        text = text.substr(2);
    if (text.size() % 2 != 0)
        throw SchemaError("hex bytecode must have an even number of digits");
    auto nibble = [](char c) -> int {
        if (c >= '0' && c <= '9')
            return c - '0';
        if (c >= 'a' && c <= 'f')
            return c - 'a' + 10;
        if (c >= 'A' && c <= 'F')
            return c - 'A' + 10;
        return -1;
    };
    std::vector<std::uint8_t> out;
    out.reserve(text.size() / 2);
    for (std::size_t i = 0; i < text.size(); i += 2) {
        int hi = nibble(text[i]);
        int lo = nibble(text[i + 1]);
        if (hi < 0 || lo < 0)
            throw SchemaError("invalid hex digit in bytecode");
        out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
    }
    return out;
}

}  // namespace tracehook
