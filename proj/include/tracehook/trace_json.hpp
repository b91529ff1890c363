// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "tracehook/trace.hpp"

namespace tracehook {

// Trace document schema, version 1.
//
//   {"version":1,"steps":[
//     {"i":0,"kind":"call","depth":0,"contract":"0x..","selector":"0x..","value":0},
//     ... ]}
//
// Kind-specific fields: call -> value; return -> success, value;
// emit -> event, amount; hook -> hook_id, arg; store -> key, old, new.
// Export is byte-deterministic: key order as above, integers only.

namespace detail {

inline nlohmann::ordered_json step_to_json(const TraceStep& s) {
    nlohmann::ordered_json j;
    j["i"] = s.index;
    j["kind"] = step_kind_name(s.kind);
    j["depth"] = s.frame_depth;
    j["contract"] = to_hex(s.contract);
    j["selector"] = to_hex(s.selector);
    switch (s.kind) {
    case StepKind::Call:
        j["value"] = s.as_call().value;
        break;
    case StepKind::Return:
        j["success"] = s.as_return().success;
        j["value"] = s.as_return().value;
        break;
    case StepKind::Emit:
        j["event"] = s.as_emit().event.code;
        j["amount"] = s.as_emit().amount;
        break;
    case StepKind::Hook:
        j["hook_id"] = s.as_hook().hook_id;
        j["arg"] = s.as_hook().arg;
        break;
    case StepKind::Store:
        j["key"] = s.as_store().key;
        j["old"] = s.as_store().old_value;
        j["new"] = s.as_store().new_value;
        break;
    }
    return j;
}

inline Word require_uint(const nlohmann::json& j, const char* field, std::size_t pos) {
    if (!j.contains(field) || !j[field].is_number_unsigned())
        throw SchemaError("step " + std::to_string(pos) + ": missing or non-integer field '" +
                          field + "'");
    return j[field].get<Word>();
}

inline std::string require_hex(const nlohmann::json& j, const char* field, std::size_t pos) {
    if (!j.contains(field) || !j[field].is_string())
        throw SchemaError("step " + std::to_string(pos) + ": missing or non-string field '" +
                          field + "'");
    return j[field].get<std::string>();
}

inline Word parse_hex_field(const std::string& text, const char* field, std::size_t pos) {
    Word v = 0;
    if (!parse_word(text, v))
        throw SchemaError("step " + std::to_string(pos) + ": malformed value '" + text +
                          "' in field '" + field + "'");
    return v;
}

}  // namespace detail

inline std::string export_trace_json(const Trace& trace) {
    nlohmann::ordered_json doc;
    doc["version"] = 1;
    doc["steps"] = nlohmann::ordered_json::array();
    for (const TraceStep& s : trace.steps())
        doc["steps"].push_back(detail::step_to_json(s));
    return doc.dump();
}

/// Parses and validates a version-1 trace document. Enforces dense indices,
/// balanced Call/Return nesting, depth consistency and frame attribution of
/// every step; any deviation is a SchemaError or TraceError.
inline Trace import_trace_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError(std::string("trace document is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number() ||
        doc["version"].get<int>() != 1)
        throw SchemaError("trace document must be an object with \"version\":1");
    if (!doc.contains("steps") || !doc["steps"].is_array())
        throw SchemaError("trace document must carry a \"steps\" array");

    Trace trace;
    std::vector<CallStackEntry> stack;
    std::size_t pos = 0;
    for (const auto& j : doc["steps"]) {
        if (!j.is_object())
            throw SchemaError("step " + std::to_string(pos) + ": not an object");
        Word index = detail::require_uint(j, "i", pos);
        if (index != pos)
            throw SchemaError("step " + std::to_string(pos) + ": index gap, got i=" +
                              std::to_string(index));
        std::string kind_name = detail::require_hex(j, "kind", pos);
        Word depth = detail::require_uint(j, "depth", pos);
        Address contract{detail::parse_hex_field(detail::require_hex(j, "contract", pos),
                                                 "contract", pos)};
        Word sel_raw = detail::parse_hex_field(detail::require_hex(j, "selector", pos),
                                               "selector", pos);
        if (sel_raw > 0xffffffffull)
            throw SchemaError("step " + std::to_string(pos) + ": selector exceeds 32 bits");
        Selector selector{static_cast<std::uint32_t>(sel_raw)};

        TraceStep step;
        std::size_t expected_fields = 5;
        if (kind_name == "call") {
            step = TraceStep::call(pos, depth, contract, selector,
                                   detail::require_uint(j, "value", pos));
            expected_fields += 1;
        } else if (kind_name == "return") {
            if (!j.contains("success") || !j["success"].is_boolean())
                throw SchemaError("step " + std::to_string(pos) +
                                  ": missing or non-boolean field 'success'");
            step = TraceStep::ret(pos, depth, contract, selector, j["success"].get<bool>(),
                                  detail::require_uint(j, "value", pos));
            expected_fields += 2;
        } else if (kind_name == "emit") {
            Word code = detail::require_uint(j, "event", pos);
            if (code > 0xff)
                throw SchemaError("step " + std::to_string(pos) + ": event code exceeds 8 bits");
            step = TraceStep::emit(pos, depth, contract, selector,
                                   EventKind{static_cast<std::uint8_t>(code)},
                                   detail::require_uint(j, "amount", pos));
            expected_fields += 2;
        } else if (kind_name == "hook") {
            Word id = detail::require_uint(j, "hook_id", pos);
            if (id > 0xff)
                throw SchemaError("step " + std::to_string(pos) + ": hook_id exceeds 8 bits");
            step = TraceStep::hook(pos, depth, contract, selector,
                                   static_cast<std::uint8_t>(id),
                                   detail::require_uint(j, "arg", pos));
            expected_fields += 2;
        } else if (kind_name == "store") {
            step = TraceStep::store(pos, depth, contract, selector,
                                    detail::require_uint(j, "key", pos),
                                    detail::require_uint(j, "old", pos),
                                    detail::require_uint(j, "new", pos));
            expected_fields += 3;
        } else {
            throw SchemaError("step " + std::to_string(pos) + ": unknown kind '" + kind_name +
                              "'");
        }
        if (j.size() != expected_fields)
            throw SchemaError("step " + std::to_string(pos) + ": unexpected extra fields");

        // Nesting discipline. Every non-call step executes in (and names) the
        // innermost open frame; returns close exactly that frame.
        if (step.kind == StepKind::Call) {
            if (depth != stack.size())
                throw TraceError("step " + std::to_string(pos) + ": call depth " +
                                 std::to_string(depth) + " does not match open frame count " +
                                 std::to_string(stack.size()));
            stack.push_back({contract, selector});
        } else {
            if (stack.empty())
                throw TraceError("step " + std::to_string(pos) + ": no open frame");
            if (depth != stack.size() - 1)
                throw TraceError("step " + std::to_string(pos) + ": depth " +
                                 std::to_string(depth) + " does not match innermost frame");
            if (stack.back().contract != contract || stack.back().selector != selector)
                throw TraceError("step " + std::to_string(pos) +
                                 ": frame attribution does not match innermost open frame");
            if (step.kind == StepKind::Return)
                stack.pop_back();
        }
        trace.append(std::move(step));
        ++pos;
    }
    if (!stack.empty())
        throw TraceError("unbalanced trace: " + std::to_string(stack.size()) +
                         " frame(s) still open at end of document");
    return trace;
}

}  // namespace tracehook
