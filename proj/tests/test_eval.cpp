// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0

#include <catch2/catch_amalgamated.hpp>

#include "support/generators.hpp"
#include "support/oracle.hpp"
#include "tracehook/eval.hpp"
#include "tracehook/parser.hpp"

using namespace tracehook;

namespace {

const Address kA{0xa1};
const Selector kF{0x1};

// A trace of Emit steps inside one frame; Custom(3) plays the proposition p.
// mask[i] selects which positions satisfy p.
Trace atom_trace(const std::vector<bool>& mask) {
    Trace t;
    t.append(TraceStep::call(0, 0, kA, kF, 0));
    for (std::size_t i = 0; i < mask.size(); ++i)
        t.append(TraceStep::emit(t.size(), 0, kA, kF,
                                 EventKind::custom(mask[i] ? 3 : 4), 1));
    t.append(TraceStep::ret(t.size(), 0, kA, kF, true, 0));
    return t;
}

const FormulaPtr p = fml::event_is(EventKind::custom(3));

}  // namespace

TEST_CASE("Y is false at the origin", "[eval]") {
    Trace t = atom_trace({true, true});
    Env env;
    CHECK_FALSE(eval(fml::prev(fml::truth()), t, 0, env));
    CHECK(eval(fml::prev(fml::truth()), t, 1, env));
}

TEST_CASE("since finds a witness and holds after it", "[eval]") {
    // psi true only at k=0 (the call step is position 0... use the emit layout:
    // positions 1..3 are the emits). Build: p at emit#1 only, check p2 S p.
    Trace t;
    t.append(TraceStep::call(0, 0, kA, kF, 0));
    t.append(TraceStep::emit(1, 0, kA, kF, EventKind::custom(3), 1));  // psi here
    t.append(TraceStep::emit(2, 0, kA, kF, EventKind::custom(4), 1));  // phi here
    t.append(TraceStep::emit(3, 0, kA, kF, EventKind::custom(4), 1));  // phi here
    FormulaPtr phi = fml::event_is(EventKind::custom(4));
    FormulaPtr psi = fml::event_is(EventKind::custom(3));
    Env env;
    FormulaPtr s = fml::since(phi, psi);
    CHECK(eval(s, t, 1, env));
    CHECK(eval(s, t, 2, env));
    CHECK(eval(s, t, 3, env));  // witness at 1, phi at 2 and 3
    CHECK_FALSE(eval(s, t, 0, env));
}

TEST_CASE("once turns on at the witness and stays on", "[eval]") {
    Trace t = atom_trace({false, true, false, false});
    Env env;
    FormulaPtr o = fml::once(p);
    // positions: 0 call, 1..4 emits, 5 return
    CHECK_FALSE(eval(o, t, 0, env));
    CHECK_FALSE(eval(o, t, 1, env));
    CHECK(eval(o, t, 2, env));
    CHECK(eval(o, t, 3, env));
    CHECK(eval(o, t, 4, env));
    CHECK(eval(o, t, 5, env));
}

TEST_CASE("finite-trace future semantics", "[eval]") {
    Trace t = atom_trace({false, false, true});
    Env env;
    // X at the last position is false
    CHECK_FALSE(eval(fml::next(fml::truth()), t, t.size() - 1, env));
    // U needs an in-trace witness
    CHECK(eval(fml::until(fml::truth(), p), t, 0, env));
    CHECK_FALSE(eval(fml::until(fml::truth(), p), t, t.size() - 1, env));
    CHECK(eval(fml::always(fml::truth()), t, 0, env));
    CHECK_FALSE(eval(fml::eventually(fml::falsity()), t, 0, env));
}

TEST_CASE("arithmetic evaluation", "[eval]") {
    Trace t;
    t.append(TraceStep::call(0, 0, kA, kF, 0));
    t.append(TraceStep::emit(1, 0, kA, kF, EventKind::deposit(), 100));
    t.append(TraceStep::emit(2, 0, kA, kF, EventKind::deposit(), 50));
    t.append(TraceStep::emit(3, 0, kA, kF, EventKind::withdrawal(), 120));
    Env env;
    env.hook_contract = kA;

    CHECK(eval_arith(*arith::sum_deposits(), t, 2, env) == 150);
    CHECK(eval_arith(*arith::ratio(1, 2, arith::constant(80)), t, 0, env) == 40);
    // subtraction saturates at zero when withdrawals exceed deposits
    Trace t2;
    t2.append(TraceStep::call(0, 0, kA, kF, 0));
    t2.append(TraceStep::emit(1, 0, kA, kF, EventKind::deposit(), 100));
    t2.append(TraceStep::emit(2, 0, kA, kF, EventKind::withdrawal(), 120));
    CHECK(eval_arith(*arith::sub(arith::sum_deposits(), arith::sum_withdrawals()), t2, 2, env) ==
          0);
}

TEST_CASE("hook argument needs a hook context", "[eval]") {
    Trace t = atom_trace({true});
    Env env;
    CHECK_THROWS_AS(eval(fml::compare(CmpOp::Lt, arith::hook_arg(), arith::constant(1)), t, 0,
                         env),
                    EvalError);
    env.hook_arg = 0;
    CHECK(eval(fml::compare(CmpOp::Lt, arith::hook_arg(), arith::constant(1)), t, 0, env));
}

TEST_CASE("ratio saturates instead of overflowing", "[eval]") {
    Trace t = atom_trace({true});
    Env env;
    CHECK(eval_arith(*arith::ratio(kWordMax, 1, arith::constant(kWordMax)), t, 0, env) ==
          kWordMax);
    CHECK(eval_arith(*arith::add(arith::constant(kWordMax), arith::constant(5)), t, 0, env) ==
          kWordMax);
}

TEST_CASE("quantifiers range over the call stack", "[eval]") {
    Trace t;
    t.append(TraceStep::call(0, 0, kA, kF, 0));
    t.append(TraceStep::call(1, 1, Address{0xb1}, Selector{0x2}, 0));
    ProviderSet providers{{Address{0xb1}, Selector{0x2}}};
    Env env;
    env.providers = &providers;

    FormulaPtr ex = fml::exists("c", "s", fml::in_flashloan("c", "s"));
    CHECK_FALSE(eval(ex, t, 0, env));
    CHECK(eval(ex, t, 1, env));

    FormulaPtr all = fml::forall("c", "s", fml::in_flashloan("c", "s"));
    CHECK_FALSE(eval(all, t, 1, env));
}

TEST_CASE("exists_pair needs two distinct stack positions", "[eval]") {
    Trace t;
    t.append(TraceStep::call(0, 0, kA, kF, 0));
    t.append(TraceStep::call(1, 1, kA, kF, 0));
    FormulaPtr dup = fml::exists_pair(
        "c1", "s1", "c2", "s2", fml::and_(fml::var_eq("c1", "c2"), fml::var_eq("s1", "s2")));
    Env env;
    CHECK_FALSE(eval(dup, t, 0, env));  // single frame: no pairs
    CHECK(eval(dup, t, 1, env));        // same pair at two positions
}

TEST_CASE("empty-domain conventions", "[eval]") {
    // After the only frame returns the stack is empty.
    Trace t;
    t.append(TraceStep::call(0, 0, kA, kF, 0));
    t.append(TraceStep::ret(1, 0, kA, kF, true, 0));
    Env env;
    CHECK(eval(fml::forall("c", "s", fml::falsity()), t, 1, env));
    CHECK_FALSE(eval(fml::exists("c", "s", fml::truth()), t, 1, env));
    CHECK_FALSE(eval(fml::exists_pair("c1", "s1", "c2", "s2", fml::truth()), t, 1, env));
}

TEST_CASE("optimized eval agrees with the naive transcription", "[eval][prop]") {
    testgen::Rng rng(20240715);
    testgen::FormulaConfig fcfg;
    fcfg.allow_future = true;
    fcfg.allow_quantifiers = true;
    fcfg.quantifier_bodies_temporal = true;
    int agreements = 0;
    for (int round = 0; round < 300; ++round) {
        Trace t = testgen::random_trace(rng);
        ProviderSet providers = testgen::random_providers(rng);
        FormulaPtr f = testgen::random_formula(rng, fcfg);
        Env env;
        env.providers = &providers;
        env.hook_contract = Address{0xa1};
        std::size_t i = testgen::pick(rng, t.size());
        bool fast = eval(f, t, i, env);
        bool slow = oracle::holds(*f, t, i, env);
        REQUIRE(fast == slow);
        ++agreements;
    }
    CHECK(agreements == 300);
}

TEST_CASE("abbreviation identities hold", "[eval][prop]") {
    testgen::Rng rng(5150);
    testgen::FormulaConfig fcfg;
    fcfg.max_depth = 3;
    for (int round = 0; round < 100; ++round) {
        Trace t = testgen::random_trace(rng);
        ProviderSet providers = testgen::random_providers(rng);
        FormulaPtr f = testgen::random_formula(rng, fcfg);
        Env env;
        env.providers = &providers;
        env.hook_contract = Address{0xa1};
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(eval(fml::once(f), t, i, env) == eval(fml::since(fml::truth(), f), t, i, env));
            CHECK(eval(fml::historically(f), t, i, env) ==
                  eval(fml::not_(fml::once(fml::not_(f))), t, i, env));
            CHECK(eval(fml::eventually(f), t, i, env) ==
                  eval(fml::until(fml::truth(), f), t, i, env));
            CHECK(eval(fml::always(f), t, i, env) ==
                  eval(fml::not_(fml::eventually(fml::not_(f))), t, i, env));
        }
    }
}

TEST_CASE("once is monotone", "[eval][prop]") {
    testgen::Rng rng(8080);
    testgen::FormulaConfig fcfg;
    fcfg.max_depth = 2;
    for (int round = 0; round < 100; ++round) {
        Trace t = testgen::random_trace(rng);
        FormulaPtr f = fml::once(testgen::random_formula(rng, fcfg));
        Env env;
        env.hook_contract = Address{0xa1};
        bool seen = false;
        for (std::size_t i = 0; i < t.size(); ++i) {
            bool v = eval(f, t, i, env);
            if (seen)
                CHECK(v);
            seen = seen || v;
        }
    }
}

TEST_CASE("Y of anything is false at position zero", "[eval][prop]") {
    testgen::Rng rng(11);
    testgen::FormulaConfig fcfg;
    for (int round = 0; round < 50; ++round) {
        Trace t = testgen::random_trace(rng);
        FormulaPtr f = testgen::random_formula(rng, fcfg);
        Env env;
        env.hook_contract = Address{0xa1};
        CHECK_FALSE(eval(fml::prev(f), t, 0, env));
    }
}

TEST_CASE("quantifier duality", "[eval][prop]") {
    testgen::Rng rng(600);
    for (int round = 0; round < 100; ++round) {
        Trace t = testgen::random_trace(rng);
        ProviderSet providers = testgen::random_providers(rng);
        Env env;
        env.providers = &providers;
        env.hook_contract = Address{0xa1};
        FormulaPtr body = fml::in_flashloan("c", "s");
        FormulaPtr all = fml::forall("c", "s", body);
        FormulaPtr none_missing =
            fml::not_(fml::exists("c", "s", fml::not_(body)));
        for (std::size_t i = 0; i < t.size(); ++i)
            CHECK(eval(all, t, i, env) == eval(none_missing, t, i, env));
    }
}

TEST_CASE("evaluation does not mutate its inputs", "[eval][prop]") {
    testgen::Rng rng(321);
    Trace t = testgen::random_trace(rng);
    Trace copy = t;
    ProviderSet providers = testgen::random_providers(rng);
    Env env;
    env.providers = &providers;
    env.hook_contract = Address{0xa1};
    Env env_copy = env;
    testgen::FormulaConfig fcfg;
    FormulaPtr f = testgen::random_formula(rng, fcfg);
    eval(f, t, t.size() - 1, env);
    CHECK(t == copy);
    CHECK(env.bindings == env_copy.bindings);
    CHECK(env.hook_arg == env_copy.hook_arg);
}

TEST_CASE("check_at_hook with no bound properties passes", "[eval]") {
    Trace t;
    t.append(TraceStep::call(0, 0, kA, kF, 0));
    t.append(TraceStep::hook(1, 0, kA, kF, 1, 40));
    PropertySet props;
    CHECK(check_at_hook(props, {}, t, 1).pass());
}

TEST_CASE("check_at_hook rejects future operators before evaluating", "[eval]") {
    Trace t;
    t.append(TraceStep::call(0, 0, kA, kF, 0));
    t.append(TraceStep::hook(1, 0, kA, kF, 1, 40));
    PropertySet props;
    props.add("ok", fml::truth());
    props.add("fut", fml::until(fml::truth(), fml::truth()));
    CHECK_THROWS_AS(check_at_hook(props, {"ok", "fut"}, t, 1), EvalError);
    CHECK_THROWS_AS(check_at_hook(props, {"missing"}, t, 1), EvalError);
    CHECK_THROWS_AS(check_at_hook(props, {"ok"}, t, 0), InternalError);
}

TEST_CASE("check_at_hook reports the first violation in binding order", "[eval]") {
    Trace t;
    t.append(TraceStep::call(0, 0, kA, kF, 0));
    t.append(TraceStep::hook(1, 0, kA, kF, 1, 40));
    PropertySet props;
    props.add("first", fml::truth());
    props.add("second", fml::falsity());
    props.add("third", fml::falsity());
    Verdict v = check_at_hook(props, {"first", "second", "third"}, t, 1);
    REQUIRE_FALSE(v.pass());
    CHECK(v.violation->property == "second");
    CHECK(v.violation->position == 1);
    CHECK(v.violation->formula_text == "false");
}
