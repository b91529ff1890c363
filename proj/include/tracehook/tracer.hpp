// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cassert>
#include <string>
#include <vector>

#include "tracehook/eval.hpp"
#include "tracehook/trace.hpp"
#include "tracehook/trace_json.hpp"

namespace tracehook {

/// Binds one property to the hooks with the given id in one contract.
struct PropertyBinding {
    Address contract;
    std::uint8_t hook_id = 0;
    std::string property;
};

/// Per-deployment checking configuration: flashloan entry points, property
/// bindings, and per-contract TVL thresholds for the bare builtin.tvl name.
struct Registry {
    ProviderSet flashloan_providers;
    std::vector<PropertyBinding> bindings;
    std::map<Address, std::pair<Word, Word>> tvl_thresholds;  // contract -> (num, den)
};

/// Records semantic steps during execution, maintains the live call stack,
/// dispatches hook checks and keeps an audit log of every checked hook.
class Tracer {
public:
    struct LogEntry {
        std::size_t position = 0;
        std::string property;
        Verdict verdict;
    };

    const Trace& trace() const { return trace_; }
    const std::vector<CallStackEntry>& live_stack() const { return live_stack_; }
    const std::vector<LogEntry>& verdict_log() const { return verdict_log_; }

    std::size_t depth() const { return live_stack_.size(); }

    /// Appends a step and updates the live stack. The step must be shaped for
    /// the current nesting (indices dense, depths matching open frames).
    void record(TraceStep step) {
        switch (step.kind) {
        case StepKind::Call:
            if (step.frame_depth != live_stack_.size())
                throw InternalError("tracer: call depth " + std::to_string(step.frame_depth) +
                                    " does not match open frame count " +
                                    std::to_string(live_stack_.size()));
            trace_.append(step);
            live_stack_.push_back({step.contract, step.selector});
            break;
        case StepKind::Return:
            if (live_stack_.empty())
                throw InternalError("tracer: return with no open frame");
            if (step.frame_depth != live_stack_.size() - 1)
                throw InternalError("tracer: return depth does not match innermost frame");
            trace_.append(step);
            live_stack_.pop_back();
            break;
        default:
            if (live_stack_.empty())
                throw InternalError("tracer: step outside any frame");
            if (step.frame_depth != live_stack_.size() - 1)
                throw InternalError("tracer: step depth does not match innermost frame");
            trace_.append(step);
            break;
        }
        assert(live_stack_ == callstack_at_tail());
    }

    TraceStep make_call(Address target, Selector selector, Word value) const {
        return TraceStep::call(trace_.size(), live_stack_.size(), target, selector, value);
    }
    TraceStep make_return(bool success, Word value) const {
        const CallStackEntry& top = current_frame();
        return TraceStep::ret(trace_.size(), live_stack_.size() - 1, top.contract, top.selector,
                              success, value);
    }
    TraceStep make_emit(EventKind kind, Word amount) const {
        const CallStackEntry& top = current_frame();
        return TraceStep::emit(trace_.size(), live_stack_.size() - 1, top.contract, top.selector,
                               kind, amount);
    }
    TraceStep make_hook(std::uint8_t hook_id, Word arg) const {
        const CallStackEntry& top = current_frame();
        return TraceStep::hook(trace_.size(), live_stack_.size() - 1, top.contract, top.selector,
                               hook_id, arg);
    }
    TraceStep make_store(Word key, Word old_value, Word new_value) const {
        const CallStackEntry& top = current_frame();
        return TraceStep::store(trace_.size(), live_stack_.size() - 1, top.contract,
                                top.selector, key, old_value, new_value);
    }

    /// Checks the properties bound to (contract, hook_id) at the hook step
    /// just recorded. Evaluated outcomes are appended to the verdict log; the
    /// trace itself is read-only for the check.
    Verdict on_hook(const Registry& registry, const PropertySet& props, Address contract,
                    std::uint8_t hook_id) {
        if (trace_.empty() || trace_[trace_.size() - 1].kind != StepKind::Hook)
            throw InternalError("tracer: on_hook without a recorded hook step");
        std::size_t position = trace_.size() - 1;

        std::vector<std::string> bound;
        for (const PropertyBinding& b : registry.bindings)
            if (b.contract == contract && b.hook_id == hook_id)
                bound.push_back(b.property);
        if (bound.empty())
            return Verdict::ok();

        Verdict verdict =
            check_at_hook(props, bound, trace_, position, &registry.flashloan_providers);
        for (const std::string& name : bound) {
            if (!verdict.pass() && verdict.violation->property == name) {
                verdict_log_.push_back({position, name, verdict});
                break;
            }
            verdict_log_.push_back({position, name, Verdict::ok()});
        }
        return verdict;
    }

    /// Closes every open frame with a failed Return step. Used when a
    /// transaction aborts so exported traces stay balanced.
    void close_open_frames() {
        while (!live_stack_.empty())
            record(make_return(false, 0));
    }

    std::string export_json() const { return export_trace_json(trace_); }

    // Optional opcode-level side log; never part of the trace or of
    // property-visible positions.
    struct DebugOp {
        Address contract;
        std::size_t pc = 0;
        std::uint8_t opcode = 0;
    };

    bool debug_enabled = false;
    std::vector<DebugOp> debug_log;

    void debug_op(Address contract, std::size_t pc, std::uint8_t opcode) {
        if (debug_enabled)
            debug_log.push_back({contract, pc, opcode});
    }

private:
    Trace trace_;
    std::vector<CallStackEntry> live_stack_;
    std::vector<LogEntry> verdict_log_;

    const CallStackEntry& current_frame() const {
        if (live_stack_.empty())
            throw InternalError("tracer: no open frame");
        return live_stack_.back();
    }

    std::vector<CallStackEntry> callstack_at_tail() const {
        if (trace_.empty())
            return {};
        return callstack_at(trace_, trace_.size() - 1);
    }
};

inline void record(Tracer& tracer, TraceStep step) { tracer.record(std::move(step)); }

inline Trace import_trace(const std::string& document) { return import_trace_json(document); }

inline std::string export_trace(const Tracer& tracer) { return tracer.export_json(); }

}  // namespace tracehook
