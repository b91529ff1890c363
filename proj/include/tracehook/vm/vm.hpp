// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tracehook/detectors.hpp"
#include "tracehook/tracer.hpp"
#include "tracehook/vm/opcodes.hpp"
#include "tracehook/vm/world.hpp"

namespace tracehook {

struct Transaction {
    Address origin;
    Address target;
    Selector selector;
    Word value = 0;
    Word arg = 0;
    Word gas_limit = 1;
};

enum class TxStatus : std::uint8_t { Success, Reverted, OutOfGas, PropertyViolation };

inline const char* tx_status_name(TxStatus s) {
    switch (s) {
    case TxStatus::Success: return "Success";
    case TxStatus::Reverted: return "Reverted";
    case TxStatus::OutOfGas: return "OutOfGas";
    case TxStatus::PropertyViolation: return "PropertyViolation";
    }
    return "?";
}

/// Transaction outcome. Any status other than Success means the post-state
/// equals the pre-transaction snapshot.
struct Receipt {
    TxStatus status = TxStatus::Success;
    std::string revert_reason;
    std::optional<Violation> violation;
    Word gas_used = 0;
    std::optional<Word> return_value;
};

/// One execution frame. Code is copied out of the account so that
/// frame-local state rollbacks cannot invalidate it mid-run.
struct Frame {
    Address contract;
    Selector selector;
    Address caller;
    Word value = 0;
    Word arg = 0;
    std::size_t pc = 0;
    std::vector<Word> stack;
    Word gas_remaining = 0;
    std::vector<std::uint8_t> code;
    std::vector<bool> jumpdests;

    static constexpr std::size_t kMaxStack = 256;
};

/// Marks positions holding a JUMPDEST opcode, skipping immediate bytes.
inline std::vector<bool> analyze_jumpdests(const std::vector<std::uint8_t>& code) {
    std::vector<bool> map(code.size(), false);
    std::size_t i = 0;
    while (i < code.size()) {
        if (code[i] == OP_JUMPDEST)
            map[i] = true;
        i += 1 + immediate_size(code[i]);
    }
    return map;
}

/// Interpreter for one transaction. Owns the shared gas meter; hook checking
/// runs outside the metered execution and costs nothing.
class Vm {
public:
    static constexpr std::size_t kMaxCallDepth = 64;

    Vm(World& world, Tracer& tracer, const Registry& registry, const PropertySet& props)
        : world_(world), tracer_(tracer), registry_(registry), props_(props) {}

    struct Halt {
        bool success = true;
        Word ret = 0;
        std::string reason;
    };

    struct CallResult {
        bool success = false;
        Word ret = 0;
    };

    // Internal unwind signals; never escape execute_transaction.
    struct ViolationAbort {
        Violation violation;
    };
    struct OutOfGasAbort {};

    Word gas_left() const { return gas_left_; }

    Frame make_frame(Address contract, Selector selector, Address caller, Word value,
                     Word arg) const {
        Frame f;
        f.contract = contract;
        f.selector = selector;
        f.caller = caller;
        f.value = value;
        f.arg = arg;
        f.gas_remaining = gas_left_;
        if (const Account* acct = world_.find(contract))
            f.code = acct->code;
        f.jumpdests = analyze_jumpdests(f.code);
        return f;
    }

    void set_gas(Word gas) { gas_left_ = gas; }

    /// Executes one instruction. Returns the frame halt, or nullopt to
    /// continue. Errors (bad jumps, stack faults, invalid opcodes) halt the
    /// frame as a revert; running past the end of code is a STOP.
    std::optional<Halt> step(Frame& frame) {
        if (frame.pc >= frame.code.size())
            return Halt{true, 0, ""};
        if (gas_left_ == 0)
            throw OutOfGasAbort{};
        --gas_left_;
        frame.gas_remaining = gas_left_;

        const std::uint8_t op = frame.code[frame.pc];
        const std::size_t imm = immediate_size(op);
        if (frame.pc + 1 + imm > frame.code.size())
            return Halt{false, 0, "truncated immediate"};
        tracer_.debug_op(frame.contract, frame.pc, op);

        auto fail = [&](const char* why) { return Halt{false, 0, why}; };
        auto need = [&](std::size_t n) { return frame.stack.size() >= n; };
        auto pop = [&]() {
            Word v = frame.stack.back();
            frame.stack.pop_back();
            return v;
        };
        auto push = [&](Word v) { frame.stack.push_back(v); };

        std::size_t next_pc = frame.pc + 1 + imm;

        switch (op) {
        case OP_STOP:
            return Halt{true, 0, ""};
        case OP_ADD:
        case OP_SUB:
        case OP_MUL:
        case OP_DIV:
        case OP_LT:
        case OP_GT:
        case OP_EQ:
        case OP_AND:
        case OP_OR: {
            if (!need(2))
                return fail("stack underflow");
            Word y = pop();
            Word x = pop();
            switch (op) {
            case OP_ADD: push(x + y); break;
            case OP_SUB: push(x - y); break;
            case OP_MUL: push(x * y); break;
            case OP_DIV: push(y == 0 ? 0 : x / y); break;
            case OP_LT: push(x < y ? 1 : 0); break;
            case OP_GT: push(x > y ? 1 : 0); break;
            case OP_EQ: push(x == y ? 1 : 0); break;
            case OP_AND: push(x & y); break;
            case OP_OR: push(x | y); break;
            }
            break;
        }
        case OP_ISZERO:
            if (!need(1))
                return fail("stack underflow");
            push(pop() == 0 ? 1 : 0);
            break;
        case OP_NOT:
            if (!need(1))
                return fail("stack underflow");
            push(~pop());
            break;
        case OP_CALLER:
            if (frame.stack.size() >= Frame::kMaxStack)
                return fail("stack overflow");
            push(frame.caller.value);
            break;
        case OP_CALLVALUE:
            if (frame.stack.size() >= Frame::kMaxStack)
                return fail("stack overflow");
            push(frame.value);
            break;
        case OP_SELFADDR:
            if (frame.stack.size() >= Frame::kMaxStack)
                return fail("stack overflow");
            push(frame.contract.value);
            break;
        case OP_CALLARG:
            if (frame.stack.size() >= Frame::kMaxStack)
                return fail("stack overflow");
            push(frame.arg);
            break;
        case OP_SELECTOR:
            if (frame.stack.size() >= Frame::kMaxStack)
                return fail("stack overflow");
            push(frame.selector.value);
            break;
        case OP_BALANCE:
            if (!need(1))
                return fail("stack underflow");
            push(world_.balance_of(Address{pop()}));
            break;
        case OP_POP:
            if (!need(1))
                return fail("stack underflow");
            pop();
            break;
        case OP_SLOAD: {
            if (!need(1))
                return fail("stack underflow");
            Word key = pop();
            const Account* acct = world_.find(frame.contract);
            push(acct ? acct->storage_at(key) : 0);
            break;
        }
        case OP_SSTORE: {
            if (!need(2))
                return fail("stack underflow");
            Word key = pop();
            Word value = pop();
            Account& acct = world_.account(frame.contract);
            Word old = acct.storage_at(key);
            tracer_.record(tracer_.make_store(key, old, value));
            acct.storage[key] = value;
            break;
        }
        case OP_JUMP: {
            if (!need(1))
                return fail("stack underflow");
            Word dest = pop();
            if (dest >= frame.code.size() || !frame.jumpdests[dest])
                return fail("bad jump destination");
            frame.pc = static_cast<std::size_t>(dest);
            return std::nullopt;
        }
        case OP_JUMPI: {
            if (!need(2))
                return fail("stack underflow");
            Word dest = pop();
            Word cond = pop();
            if (cond != 0) {
                if (dest >= frame.code.size() || !frame.jumpdests[dest])
                    return fail("bad jump destination");
                frame.pc = static_cast<std::size_t>(dest);
                return std::nullopt;
            }
            break;
        }
        case OP_JUMPDEST:
            break;
        case OP_PUSH: {
            if (frame.stack.size() >= Frame::kMaxStack)
                return fail("stack overflow");
            Word v = 0;
            for (int b = 0; b < 8; ++b)
                v |= static_cast<Word>(frame.code[frame.pc + 1 + b]) << (8 * b);
            push(v);
            break;
        }
        case OP_EMIT: {
            if (!need(1))
                return fail("stack underflow");
            Word amount = pop();
            EventKind kind{frame.code[frame.pc + 1]};
            tracer_.record(tracer_.make_emit(kind, amount));
            break;
        }
        case OP_HOOK: {
            if (!need(1))
                return fail("stack underflow");
            Word arg = pop();
            std::uint8_t id = frame.code[frame.pc + 1];
            hook_dispatch(frame, id, arg);
            break;
        }
        case OP_TRANSFER: {
            if (!need(2))
                return fail("stack underflow");
            Address to{pop()};
            Word amount = pop();
            Account& self = world_.account(frame.contract);
            if (self.balance < amount)
                return fail("insufficient balance for transfer");
            self.balance -= amount;
            world_.account(to).balance += amount;
            break;
        }
        case OP_CALL: {
            if (!need(4))
                return fail("stack underflow");
            Address target{pop()};
            Word sel_raw = pop();
            Word value = pop();
            Word arg = pop();
            CallResult r = call(frame, target,
                                Selector{static_cast<std::uint32_t>(sel_raw)}, value, arg);
            push(r.ret);
            push(r.success ? 1 : 0);
            break;
        }
        case OP_RETURN:
            if (!need(1))
                return fail("stack underflow");
            return Halt{true, pop(), ""};
        case OP_REVERT:
            return Halt{false, 0, "revert"};
        default:
            if (op >= OP_DUP0 && op <= OP_DUP0 + 15) {
                std::size_t n = op - OP_DUP0;
                if (!need(n + 1))
                    return fail("stack underflow");
                if (frame.stack.size() >= Frame::kMaxStack)
                    return fail("stack overflow");
                push(frame.stack[frame.stack.size() - 1 - n]);
                break;
            }
            if (op >= OP_SWAP0 && op <= OP_SWAP0 + 15) {
                std::size_t n = op - OP_SWAP0;
                if (!need(n + 2))
                    return fail("stack underflow");
                std::swap(frame.stack[frame.stack.size() - 1],
                          frame.stack[frame.stack.size() - 2 - n]);
                break;
            }
            return fail("invalid opcode");
        }

        frame.pc = next_pc;
        return std::nullopt;
    }

    Halt run_frame(Frame& frame) {
        while (true) {
            if (auto halt = step(frame))
                return *halt;
        }
    }

    /// Runs a nested call. The child executes against a frame-local snapshot:
    /// on child failure its state changes (including the value transfer) are
    /// rolled back and the parent continues with success=false. Call and
    /// Return steps are recorded either way.
    CallResult call(Frame& caller, Address target, Selector selector, Word value, Word arg) {
        return call_from(caller.contract, target, selector, value, arg);
    }

    CallResult call_from(Address caller, Address target, Selector selector, Word value,
                         Word arg) {
        tracer_.record(tracer_.make_call(target, selector, value));
        if (depth_ >= kMaxCallDepth || world_.balance_of(caller) < value) {
            tracer_.record(tracer_.make_return(false, 0));
            return {false, 0};
        }

        Snapshot before = snapshot(world_);
        world_.account(caller).balance -= value;
        world_.account(target).balance += value;

        Halt halt{true, 0, ""};
        const Account* acct = world_.find(target);
        if (acct != nullptr && !acct->code.empty()) {
            Frame child = make_frame(target, selector, caller, value, arg);
            ++depth_;
            halt = run_frame(child);
            --depth_;
        }

        if (!halt.success)
            revert_to(world_, before);
        tracer_.record(tracer_.make_return(halt.success, halt.ret));
        return {halt.success, halt.ret};
    }

    /// Records the Hook step, then evaluates the properties bound to this
    /// (contract, hook id). A violation unwinds the entire transaction, not
    /// just the current frame.
    Verdict hook_dispatch(const Frame& frame, std::uint8_t hook_id, Word arg) {
        tracer_.record(tracer_.make_hook(hook_id, arg));
        Verdict verdict = tracer_.on_hook(registry_, props_, frame.contract, hook_id);
        if (!verdict.pass())
            throw ViolationAbort{*verdict.violation};
        return verdict;
    }

private:
    World& world_;
    Tracer& tracer_;
    const Registry& registry_;
    const PropertySet& props_;
    Word gas_left_ = 0;
    std::size_t depth_ = 0;
};

/// Runs one transaction to a receipt. On any non-Success status the world is
/// restored to the pre-transaction snapshot; the tracer retains the full
/// trace either way, bracketed by a root Call/Return pair for the origin.
inline Receipt execute_transaction(World& world, const Transaction& tx, Tracer& tracer,
                                   const Registry& registry, const PropertySet& props) {
    Receipt receipt;
    const Account* target = world.find(tx.target);
    if (target == nullptr || target->code.empty()) {
        receipt.status = TxStatus::Reverted;
        receipt.revert_reason = "target has no code";
        return receipt;
    }
    if (world.balance_of(tx.origin) < tx.value) {
        receipt.status = TxStatus::Reverted;
        receipt.revert_reason = "insufficient origin balance";
        return receipt;
    }
    if (tx.gas_limit == 0) {
        receipt.status = TxStatus::Reverted;
        receipt.revert_reason = "zero gas limit";
        return receipt;
    }

    Snapshot pre = snapshot(world);
    Vm vm(world, tracer, registry, props);
    vm.set_gas(tx.gas_limit);

    // Root frame: the externally-owned origin with selector 0.
    tracer.record(tracer.make_call(tx.origin, Selector{0}, tx.value));
    try {
        Vm::CallResult r = vm.call_from(tx.origin, tx.target, tx.selector, tx.value, tx.arg);
        tracer.record(tracer.make_return(r.success, r.ret));
        if (r.success) {
            receipt.status = TxStatus::Success;
            receipt.return_value = r.ret;
        } else {
            receipt.status = TxStatus::Reverted;
            receipt.revert_reason = "reverted";
            revert_to(world, pre);
        }
    } catch (const Vm::ViolationAbort& abort) {
        tracer.close_open_frames();
        receipt.status = TxStatus::PropertyViolation;
        receipt.violation = abort.violation;
        revert_to(world, pre);
    } catch (const Vm::OutOfGasAbort&) {
        tracer.close_open_frames();
        receipt.status = TxStatus::OutOfGas;
        receipt.revert_reason = "out of gas";
        revert_to(world, pre);
    }
    receipt.gas_used = tx.gas_limit - vm.gas_left();
    return receipt;
}

}  // namespace tracehook
