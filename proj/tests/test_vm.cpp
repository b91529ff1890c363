// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "tracehook/detectors.hpp"
#include "tracehook/vm/vm.hpp"

using namespace tracehook;

namespace {

const Address kOrigin{0xe0a};
const Address kA{0xa00};
const Address kB{0xb00};

World world_with(std::initializer_list<std::pair<Address, std::string>> contracts,
                 Word origin_balance = 1000) {
    World w;
    w.account(kOrigin).balance = origin_balance;
    for (const auto& [addr, asm_text] : contracts)
        w.account(addr).code = assemble(asm_text);
    return w;
}

struct Harness {
    World world;
    Tracer tracer;
    Registry registry;
    PropertySet props;

    explicit Harness(World w) : world(std::move(w)) {}

    Receipt run(Transaction tx) {
        return execute_transaction(world, tx, tracer, registry, props);
    }
};

Transaction tx_to(Address target, Selector sel, Word value = 0, Word arg = 0,
                  Word gas = 10000) {
    return Transaction{kOrigin, target, sel, value, arg, gas};
}

}  // namespace

TEST_CASE("stack arithmetic", "[vm]") {
    World w = world_with({});
    Tracer tracer;
    Registry reg;
    PropertySet props;
    Vm vm(w, tracer, reg, props);
    vm.set_gas(100);

    w.account(kA).code = assemble("PUSH 2\nPUSH 3\nADD\nSTOP\n");
    Frame f = vm.make_frame(kA, Selector{1}, kOrigin, 0, 0);
    CHECK_FALSE(vm.step(f).has_value());
    CHECK_FALSE(vm.step(f).has_value());
    CHECK_FALSE(vm.step(f).has_value());
    CHECK(f.stack == std::vector<Word>{5});
    auto halt = vm.step(f);
    REQUIRE(halt.has_value());
    CHECK(halt->success);
}

TEST_CASE("operand order of SUB, DIV, LT", "[vm]") {
    World w = world_with({});
    Tracer tracer;
    Registry reg;
    PropertySet props;
    Vm vm(w, tracer, reg, props);
    vm.set_gas(100);

    w.account(kA).code = assemble("PUSH 7\nPUSH 3\nSUB\nPUSH 0\nPUSH 10\nDIV\nPUSH 2\nPUSH 5\nLT\n");
    Frame f = vm.make_frame(kA, Selector{1}, kOrigin, 0, 0);
    for (int i = 0; i < 3; ++i)
        vm.step(f);
    CHECK(f.stack == std::vector<Word>{4});  // 7 - 3
    for (int i = 0; i < 3; ++i)
        vm.step(f);
    CHECK(f.stack == std::vector<Word>{4, 0});  // 10 / 0 -> 0
    for (int i = 0; i < 3; ++i)
        vm.step(f);
    CHECK(f.stack == std::vector<Word>{4, 0, 1});  // 2 < 5
}

TEST_CASE("JUMPI with zero condition falls through", "[vm]") {
    World w = world_with({});
    Tracer tracer;
    Registry reg;
    PropertySet props;
    Vm vm(w, tracer, reg, props);
    vm.set_gas(100);

    w.account(kA).code = assemble(
        "PUSH 0\n"
        "JUMPI @skip\n"
        "PUSH 42\n"
        "RETURN\n"
        "skip: JUMPDEST\n"
        "PUSH 7\n"
        "RETURN\n");
    Frame f = vm.make_frame(kA, Selector{1}, kOrigin, 0, 0);
    std::optional<Vm::Halt> halt;
    while (!(halt = vm.step(f)))
        ;
    CHECK(halt->success);
    CHECK(halt->ret == 42);
}

TEST_CASE("stack faults and bad jumps revert the frame", "[vm]") {
    World w = world_with({});
    Tracer tracer;
    Registry reg;
    PropertySet props;
    Vm vm(w, tracer, reg, props);
    vm.set_gas(100);

    w.account(kA).code = assemble("ADD\n");
    Frame f = vm.make_frame(kA, Selector{1}, kOrigin, 0, 0);
    auto halt = vm.step(f);
    REQUIRE(halt.has_value());
    CHECK_FALSE(halt->success);
    CHECK(halt->reason == "stack underflow");

    // jumping into push data is not a valid destination
    w.account(kB).code = assemble("JUMP @lbl\nlbl: PUSH 1\nSTOP\n");
    std::vector<std::uint8_t> code = w.account(kB).code;
    code[1] = 11;  // target the PUSH immediate area
    w.account(kB).code = code;
    Frame g = vm.make_frame(kB, Selector{1}, kOrigin, 0, 0);
    vm.step(g);
    halt = vm.step(g);
    REQUIRE(halt.has_value());
    CHECK_FALSE(halt->success);
    CHECK(halt->reason == "bad jump destination");

    w.account(kB).code = std::vector<std::uint8_t>{0xee};
    Frame h = vm.make_frame(kB, Selector{1}, kOrigin, 0, 0);
    halt = vm.step(h);
    REQUIRE(halt.has_value());
    CHECK(halt->reason == "invalid opcode");
}

TEST_CASE("value transfer to a stop contract", "[vm]") {
    Harness h(world_with({{kA, "STOP\n"}}));
    Receipt r = h.run(tx_to(kA, Selector{1}, 7));
    CHECK(r.status == TxStatus::Success);
    CHECK(h.world.balance_of(kA) == 7);
    CHECK(h.world.balance_of(kOrigin) == 993);
    REQUIRE(r.return_value.has_value());
    CHECK(*r.return_value == 0);
}

TEST_CASE("revert restores all state", "[vm]") {
    Harness h(world_with({{kA,
                           "PUSH 9\n"
                           "PUSH 1\n"
                           "SSTORE\n"
                           "REVERT\n"}}));
    std::string before = canonical_world_json(h.world);
    Receipt r = h.run(tx_to(kA, Selector{1}, 5));
    CHECK(r.status == TxStatus::Reverted);
    CHECK(canonical_world_json(h.world) == before);

    // the trace still brackets the attempt
    REQUIRE(h.tracer.trace().size() >= 2);
    CHECK(h.tracer.trace()[0].kind == StepKind::Call);
    CHECK(h.tracer.trace()[h.tracer.trace().size() - 1].kind == StepKind::Return);
    CHECK_FALSE(h.tracer.trace()[h.tracer.trace().size() - 1].as_return().success);
}

TEST_CASE("nested call returns value then success", "[vm]") {
    // callee returns 42; caller stores both stack slots
    Harness h(world_with({
        {kA,
         "PUSH 0\n"       // arg
         "PUSH 0\n"       // value
         "PUSH 2\n"       // selector
         "PUSH 0xb00\n"   // target
         "CALL\n"
         "PUSH 10\nSSTORE\n"   // success flag -> slot 10
         "PUSH 11\nSSTORE\n"   // returned value -> slot 11
         "STOP\n"},
        {kB, "PUSH 42\nRETURN\n"},
    }));
    Receipt r = h.run(tx_to(kA, Selector{1}));
    CHECK(r.status == TxStatus::Success);
    CHECK(h.world.account(kA).storage_at(10) == 1);
    CHECK(h.world.account(kA).storage_at(11) == 42);
}

TEST_CASE("callee revert rolls back only the callee frame", "[vm]") {
    Harness h(world_with({
        {kA,
         "PUSH 5\nPUSH 1\nSSTORE\n"  // parent writes slot1=5
         "PUSH 0\nPUSH 0\nPUSH 2\nPUSH 0xb00\nCALL\n"
         "PUSH 10\nSSTORE\n"  // success flag -> slot 10
         "POP\n"
         "STOP\n"},
        {kB, "PUSH 9\nPUSH 1\nSSTORE\nREVERT\n"},
    }));
    Receipt r = h.run(tx_to(kA, Selector{1}));
    CHECK(r.status == TxStatus::Success);
    CHECK(h.world.account(kA).storage_at(1) == 5);   // parent state kept
    CHECK(h.world.account(kA).storage_at(10) == 0);  // child reported failure
    CHECK(h.world.account(kB).storage_at(1) == 0);   // child write rolled back
}

TEST_CASE("re-entrant call chain shows up on the recorded stack", "[vm]") {
    // A.f calls B.g which calls A.f again; the inner A sees arg 0 and stops.
    Harness h(world_with({
        {kA,
         "CALLARG\n"
         "ISZERO\n"
         "JUMPI @done\n"
         "PUSH 0\nPUSH 0\nPUSH 2\nPUSH 0xb00\nCALL\nPOP\nPOP\nSTOP\n"
         "done: JUMPDEST\nSTOP\n"},
        {kB, "PUSH 0\nPUSH 0\nPUSH 1\nPUSH 0xa00\nCALL\nPOP\nPOP\nSTOP\n"},
    }));
    Receipt r = h.run(Transaction{kOrigin, kA, Selector{1}, 0, 1, 10000});
    REQUIRE(r.status == TxStatus::Success);

    const Trace& t = h.tracer.trace();
    std::size_t innermost = 0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (t[i].kind == StepKind::Call)
            innermost = i;
    auto stack = callstack_at(t, innermost);
    REQUIRE(stack.size() == 4);
    CHECK(stack[0] == CallStackEntry{kOrigin, Selector{0}});
    CHECK(stack[1] == CallStackEntry{kA, Selector{1}});
    CHECK(stack[2] == CallStackEntry{kB, Selector{2}});
    CHECK(stack[3] == CallStackEntry{kA, Selector{1}});
}

TEST_CASE("call depth is capped", "[vm]") {
    // unconditional self-call; the cap fails the innermost attempt and the
    // chain unwinds successfully
    Harness h(world_with({{kA, "PUSH 0\nPUSH 0\nPUSH 1\nPUSH 0xa00\nCALL\nPOP\nPOP\nSTOP\n"}}));
    Receipt r = h.run(tx_to(kA, Selector{1}, 0, 0, 100000));
    CHECK(r.status == TxStatus::Success);
    std::size_t max_depth = 0;
    bool saw_failed_call = false;
    const Trace& t = h.tracer.trace();
    for (std::size_t i = 0; i < t.size(); ++i) {
        max_depth = std::max(max_depth, t[i].frame_depth);
        if (t[i].kind == StepKind::Return && !t[i].as_return().success)
            saw_failed_call = true;
    }
    // the rejected attempt is itself recorded one frame deeper than the cap
    CHECK(max_depth == Vm::kMaxCallDepth + 1);
    CHECK(saw_failed_call);
}

TEST_CASE("hook with no bindings has no observable effect", "[vm]") {
    Harness plain(world_with({{kA, "PUSH 1\nPUSH 1\nSSTORE\nSTOP\n"}}));
    Harness hooked(world_with({{kA, "PUSH 7\nHOOK 1\nPUSH 1\nPUSH 1\nSSTORE\nSTOP\n"}}));
    Receipt r1 = plain.run(tx_to(kA, Selector{1}));
    Receipt r2 = hooked.run(tx_to(kA, Selector{1}));
    CHECK(r1.status == TxStatus::Success);
    CHECK(r2.status == TxStatus::Success);
    // same balances and storage; the contracts differ only in code bytes
    CHECK(plain.world.account(kA).storage == hooked.world.account(kA).storage);
    CHECK(plain.world.balance_of(kA) == hooked.world.balance_of(kA));
    // the hook costs gas like any instruction (two extra: PUSH and HOOK)
    CHECK(r2.gas_used == r1.gas_used + 2);
}

TEST_CASE("violation unwinds the whole transaction", "[vm]") {
    // A stores, then calls B; B's hook is bound to a failing property.
    Harness h(world_with({
        {kA,
         "PUSH 5\nPUSH 1\nSSTORE\n"
         "PUSH 0\nPUSH 0\nPUSH 2\nPUSH 0xb00\nCALL\nPOP\nPOP\nSTOP\n"},
        {kB, "PUSH 0\nHOOK 1\nSTOP\n"},
    }));
    h.props.add("never", fml::falsity());
    h.registry.bindings.push_back({kB, 1, "never"});

    std::string before = canonical_world_json(h.world);
    Receipt r = h.run(tx_to(kA, Selector{1}));
    CHECK(r.status == TxStatus::PropertyViolation);
    REQUIRE(r.violation.has_value());
    CHECK(r.violation->property == "never");
    CHECK(canonical_world_json(h.world) == before);

    // trace is closed and the hook step is preserved for post-mortems
    const Trace& t = h.tracer.trace();
    REQUIRE(t.size() >= 2);
    bool saw_hook = false;
    for (std::size_t i = 0; i < t.size(); ++i)
        saw_hook = saw_hook || t[i].kind == StepKind::Hook;
    CHECK(saw_hook);
    CHECK_NOTHROW(invocation_tree(t));
}

TEST_CASE("passing hooks leave execution identical to unbound runs", "[vm]") {
    auto build = [] {
        return world_with({{kA, "PUSH 3\nHOOK 1\nPUSH 8\nPUSH 2\nSSTORE\nSTOP\n"}});
    };
    Harness bound(build());
    bound.props.add("taut", fml::once(fml::truth()));
    bound.registry.bindings.push_back({kA, 1, "taut"});
    Harness unbound(build());

    Receipt rb = bound.run(tx_to(kA, Selector{1}));
    Receipt ru = unbound.run(tx_to(kA, Selector{1}));
    CHECK(rb.status == TxStatus::Success);
    CHECK(rb.gas_used == ru.gas_used);
    CHECK(canonical_world_json(bound.world) == canonical_world_json(unbound.world));
    REQUIRE(bound.tracer.verdict_log().size() == 1);
    CHECK(bound.tracer.verdict_log()[0].property == "taut");
    CHECK(bound.tracer.verdict_log()[0].verdict.pass());
    CHECK(unbound.tracer.verdict_log().empty());
}

TEST_CASE("out of gas aborts and restores", "[vm]") {
    Harness h(world_with({{kA, "lp: JUMPDEST\nPUSH 1\nPUSH 1\nSSTORE\nJUMP @lp\n"}}));
    std::string before = canonical_world_json(h.world);
    Receipt r = h.run(tx_to(kA, Selector{1}, 0, 0, 50));
    CHECK(r.status == TxStatus::OutOfGas);
    CHECK(r.gas_used == 50);
    CHECK(canonical_world_json(h.world) == before);
    CHECK_NOTHROW(invocation_tree(h.tracer.trace()));
}

TEST_CASE("gas is metered per instruction", "[vm]") {
    Harness h(world_with({{kA, "PUSH 1\nPOP\nSTOP\n"}}));
    Receipt r = h.run(tx_to(kA, Selector{1}, 0, 0, 10000));
    CHECK(r.status == TxStatus::Success);
    CHECK(r.gas_used == 3);
}

TEST_CASE("snapshot and revert_to restore bit-identical state", "[vm]") {
    World w = world_with({{kA, "STOP\n"}});
    w.account(kA).storage[3] = 14;
    Snapshot snap = snapshot(w);

    std::string before = canonical_world_json(w);
    w.account(kA).storage[3] = 99;
    w.account(kA).balance += 5;
    revert_to(w, snap);
    CHECK(canonical_world_json(w) == before);

    // zero intervening operations: serialization identical
    Snapshot snap2 = snapshot(w);
    revert_to(w, snap2);
    CHECK(canonical_world_json(w) == before);
}

TEST_CASE("transaction preconditions are surfaced as receipts", "[vm]") {
    Harness h(world_with({{kA, "STOP\n"}}, 10));
    Receipt no_code = h.run(tx_to(kB, Selector{1}));
    CHECK(no_code.status == TxStatus::Reverted);
    CHECK(no_code.revert_reason == "target has no code");

    Receipt poor = h.run(tx_to(kA, Selector{1}, 5000));
    CHECK(poor.status == TxStatus::Reverted);
    CHECK(poor.revert_reason == "insufficient origin balance");
}

TEST_CASE("execution is deterministic", "[vm]") {
    auto build = [] {
        return world_with({
            {kA,
             "PUSH 3\nHOOK 1\nPUSH 100\nEMIT 1\n"
             "PUSH 0\nPUSH 0\nPUSH 2\nPUSH 0xb00\nCALL\nPOP\nPOP\nSTOP\n"},
            {kB, "PUSH 60\nEMIT 2\nPUSH 1\nRETURN\n"},
        });
    };
    Harness h1(build());
    Harness h2(build());
    Receipt r1 = h1.run(tx_to(kA, Selector{1}, 3));
    Receipt r2 = h2.run(tx_to(kA, Selector{1}, 3));
    CHECK(h1.tracer.export_json() == h2.tracer.export_json());
    CHECK(canonical_world_json(h1.world) == canonical_world_json(h2.world));
    CHECK(r1.gas_used == r2.gas_used);
    CHECK(r1.status == r2.status);
}
