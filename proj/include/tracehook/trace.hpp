// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "tracehook/common.hpp"

namespace tracehook {

/// Event category attached to Emit steps. Codes 0..2 are reserved for the
/// named kinds; anything else is application-defined.
struct EventKind {
    std::uint8_t code = 0;

    static constexpr std::uint8_t kTokenTransfer = 0;
    static constexpr std::uint8_t kDeposit = 1;
    static constexpr std::uint8_t kWithdrawal = 2;

    static EventKind token_transfer() { return {kTokenTransfer}; }
    static EventKind deposit() { return {kDeposit}; }
    static EventKind withdrawal() { return {kWithdrawal}; }
    static EventKind custom(std::uint8_t c) { return {c}; }

    friend auto operator<=>(const EventKind&, const EventKind&) = default;
};

enum class StepKind : std::uint8_t { Call, Return, Emit, Hook, Store };

inline const char* step_kind_name(StepKind k) {
    switch (k) {
    case StepKind::Call: return "call";
    case StepKind::Return: return "return";
    case StepKind::Emit: return "emit";
    case StepKind::Hook: return "hook";
    case StepKind::Store: return "store";
    }
    return "?";
}

/// One open frame: the contract/selector pair of a call still on the stack.
struct CallStackEntry {
    Address contract;
    Selector selector;
    friend auto operator<=>(const CallStackEntry&, const CallStackEntry&) = default;
};

struct CallPayload {
    Word value = 0;
    friend bool operator==(const CallPayload&, const CallPayload&) = default;
};

struct ReturnPayload {
    bool success = true;
    Word value = 0;
    friend bool operator==(const ReturnPayload&, const ReturnPayload&) = default;
};

struct EmitPayload {
    EventKind event;
    Word amount = 0;
    friend bool operator==(const EmitPayload&, const EmitPayload&) = default;
};

struct HookPayload {
    std::uint8_t hook_id = 0;
    Word arg = 0;
    friend bool operator==(const HookPayload&, const HookPayload&) = default;
};

struct StorePayload {
    Word key = 0;
    Word old_value = 0;
    Word new_value = 0;
    friend bool operator==(const StorePayload&, const StorePayload&) = default;
};

/// One semantic execution step. `contract`/`selector` identify the frame the
/// step belongs to: for Call steps that is the callee (the frame being
/// entered), for Return steps the frame being exited, and for Emit/Hook/Store
/// the frame executing the instruction.
struct TraceStep {
    std::size_t index = 0;
    StepKind kind = StepKind::Call;
    std::size_t frame_depth = 0;
    Address contract;
    Selector selector;
    std::variant<CallPayload, ReturnPayload, EmitPayload, HookPayload, StorePayload> payload;

    static TraceStep call(std::size_t index, std::size_t depth, Address target,
                          Selector selector, Word value) {
        return {index, StepKind::Call, depth, target, selector, CallPayload{value}};
    }
    static TraceStep ret(std::size_t index, std::size_t depth, Address contract,
                         Selector selector, bool success, Word value) {
        return {index, StepKind::Return, depth, contract, selector,
                ReturnPayload{success, value}};
    }
    static TraceStep emit(std::size_t index, std::size_t depth, Address contract,
                          Selector selector, EventKind event, Word amount) {
        return {index, StepKind::Emit, depth, contract, selector,
                EmitPayload{event, amount}};
    }
    static TraceStep hook(std::size_t index, std::size_t depth, Address contract,
                          Selector selector, std::uint8_t hook_id, Word arg) {
        return {index, StepKind::Hook, depth, contract, selector,
                HookPayload{hook_id, arg}};
    }
    static TraceStep store(std::size_t index, std::size_t depth, Address contract,
                           Selector selector, Word key, Word old_value, Word new_value) {
        return {index, StepKind::Store, depth, contract, selector,
                StorePayload{key, old_value, new_value}};
    }

    const CallPayload& as_call() const { return std::get<CallPayload>(payload); }
    const ReturnPayload& as_return() const { return std::get<ReturnPayload>(payload); }
    const EmitPayload& as_emit() const { return std::get<EmitPayload>(payload); }
    const HookPayload& as_hook() const { return std::get<HookPayload>(payload); }
    const StorePayload& as_store() const { return std::get<StorePayload>(payload); }

    friend bool operator==(const TraceStep&, const TraceStep&) = default;
};

/// Append-only sequence of semantic steps recorded during one transaction.
/// Steps are never mutated once appended; positions are dense from zero.
class Trace {
public:
    std::size_t size() const { return steps_.size(); }
    bool empty() const { return steps_.empty(); }
    const TraceStep& operator[](std::size_t i) const { return steps_[i]; }
    const std::vector<TraceStep>& steps() const { return steps_; }

    void append(TraceStep step) {
        if (step.index != steps_.size())
            throw InternalError("trace append: step index " + std::to_string(step.index) +
                                " does not match trace length " +
                                std::to_string(steps_.size()));
        steps_.push_back(std::move(step));
    }

    friend bool operator==(const Trace&, const Trace&) = default;

private:
    std::vector<TraceStep> steps_;
};

inline void append_step(Trace& trace, TraceStep step) { trace.append(std::move(step)); }

/// Frames open at position i, root first. A frame opened by a Call step at
/// position c is on the stack for every c <= p < r where r is the matching
/// Return; in particular the Call step itself sees its own frame (last) and
/// a Return step no longer sees the frame it closes.
inline std::vector<CallStackEntry> callstack_at(const Trace& trace, std::size_t i) {
    if (i >= trace.size())
        throw TraceError("callstack_at: position " + std::to_string(i) +
                         " out of range for trace of length " + std::to_string(trace.size()));
    std::vector<CallStackEntry> stack;
    for (std::size_t p = 0; p <= i; ++p) {
        const TraceStep& s = trace[p];
        if (s.kind == StepKind::Call) {
            stack.push_back({s.contract, s.selector});
        } else if (s.kind == StepKind::Return) {
            if (stack.empty())
                throw TraceError("callstack_at: return with no open frame at position " +
                                 std::to_string(p));
            stack.pop_back();
        }
    }
    return stack;
}

/// Completed invocation tree node. Pre-order traversal of the tree yields the
/// trace's Call steps in order.
struct InvocationNode {
    Address contract;
    Selector selector;
    Word value = 0;
    std::vector<InvocationNode> children;
    bool success = true;

    friend bool operator==(const InvocationNode&, const InvocationNode&) = default;
};

namespace detail {

inline InvocationNode parse_invocation(const Trace& trace, std::size_t& cursor) {
    const TraceStep& open = trace[cursor];
    if (open.kind != StepKind::Call)
        throw TraceError("invocation_tree: expected call step at position " +
                         std::to_string(cursor));
    InvocationNode node{open.contract, open.selector, open.as_call().value, {}, true};
    ++cursor;
    while (true) {
        if (cursor >= trace.size())
            throw TraceError("invocation_tree: unbalanced trace, frame opened at position " +
                             std::to_string(open.index) + " never returns");
        const TraceStep& s = trace[cursor];
        if (s.kind == StepKind::Call) {
            node.children.push_back(parse_invocation(trace, cursor));
        } else if (s.kind == StepKind::Return) {
            node.success = s.as_return().success;
            ++cursor;
            return node;
        } else {
            ++cursor;
        }
    }
}

}  // namespace detail

/// Builds the invocation tree of a completed trace. The trace must consist of
/// a single balanced root frame spanning all steps.
inline InvocationNode invocation_tree(const Trace& trace) {
    if (trace.empty())
        throw TraceError("invocation_tree: empty trace");
    std::size_t cursor = 0;
    InvocationNode root = detail::parse_invocation(trace, cursor);
    if (cursor != trace.size())
        throw TraceError("invocation_tree: trailing steps after root frame returned at position " +
                         std::to_string(cursor));
    return root;
}

/// Sum of Emit amounts with the given kind emitted by `contract` at positions
/// <= i. Saturates at the word maximum; an empty sum is zero.
inline Word sum_events(const Trace& trace, std::size_t i, EventKind kind, Address contract) {
    if (i >= trace.size())
        throw TraceError("sum_events: position " + std::to_string(i) +
                         " out of range for trace of length " + std::to_string(trace.size()));
    Word total = 0;
    for (std::size_t p = 0; p <= i; ++p) {
        const TraceStep& s = trace[p];
        if (s.kind == StepKind::Emit && s.contract == contract && s.as_emit().event == kind)
            total = saturating_add(total, s.as_emit().amount);
    }
    return total;
}

}  // namespace tracehook
