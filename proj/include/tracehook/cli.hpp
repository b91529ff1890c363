// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "tracehook/monitor.hpp"
#include "tracehook/scenario.hpp"

namespace tracehook {

// Exit codes shared by all subcommands:
//   0  success / every checked property passed
//   1  a transaction reverted or ran out of gas
//   2  a property violation
//   64 usage errors, unreadable files, scenario validation errors
//   65 property DSL or trace document parse errors
inline constexpr int kExitOk = 0;
inline constexpr int kExitReverted = 1;
inline constexpr int kExitViolation = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitParse = 65;

struct RunOptions {
    std::string scenario_path;
    std::optional<std::string> trace_out;
    bool quiet = false;
    bool debug = false;
};

struct CheckOptions {
    std::string trace_path;
    std::optional<std::string> properties_path;
    std::optional<std::string> registry_path;  // scenario file; only its registry is read
    std::string at = "hooks";                  // "hooks" or a position number
    std::vector<std::string> only;             // property names to check; default: all loaded
};

inline int cmd_run(const RunOptions& opts, std::ostream& out, std::ostream& err) {
    Scenario sc;
    try {
        sc = load_scenario(opts.scenario_path);
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    World initial = sc.world;
    std::vector<TxRun> runs = run_scenario(sc, opts.debug);

    bool any_violation = false;
    bool any_failure = false;
    for (std::size_t i = 0; i < runs.size(); ++i) {
        const Receipt& r = runs[i].receipt;
        if (!opts.quiet) {
            out << "tx#" << i + 1 << " " << tx_status_name(r.status) << " gas=" << r.gas_used;
            if (r.violation)
                out << " property=" << r.violation->property << " at=" << r.violation->position;
            out << "\n";
        }
        if (r.status == TxStatus::PropertyViolation)
            any_violation = true;
        else if (r.status != TxStatus::Success)
            any_failure = true;
        if (opts.debug) {
            // Opcode-level side log; inspection only, never a trace position.
            for (const Tracer::DebugOp& op : runs[i].debug_log)
                err << "tx#" << i + 1 << " " << to_hex(op.contract) << " pc=" << op.pc << " "
                    << opcode_name(op.opcode) << "\n";
        }
    }

    if (!opts.quiet) {
        for (const auto& [addr, acct] : sc.world.accounts) {
            Word before = initial.balance_of(addr);
            if (before != acct.balance)
                out << "balance " << to_hex(addr) << ": " << before << " -> " << acct.balance
                    << "\n";
        }
    }

    if (opts.trace_out) {
        if (runs.empty()) {
            err << "error: no transactions, nothing to export\n";
            return kExitUsage;
        }
        std::ofstream f(*opts.trace_out, std::ios::binary);
        if (!f) {
            err << "error: cannot write " << *opts.trace_out << "\n";
            return kExitUsage;
        }
        f << export_trace_json(runs.back().trace) << "\n";
    }

    if (any_violation)
        return kExitViolation;
    if (any_failure)
        return kExitReverted;
    return kExitOk;
}

inline int cmd_check(const CheckOptions& opts, std::ostream& out, std::ostream& err) {
    Trace trace;
    PropertySet props;
    ProviderSet providers;
    try {
        trace = import_trace_json(detail::read_file(opts.trace_path));
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    }
    try {
        if (opts.properties_path)
            props = parse_properties(detail::read_file(*opts.properties_path));
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    if (opts.registry_path) {
        try {
            Scenario sc = load_scenario(*opts.registry_path);
            providers = sc.registry.flashloan_providers;
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitUsage;
        }
    }

    // Builtins are addressable by their reserved names.
    std::vector<std::string> names;
    if (!opts.only.empty()) {
        for (const std::string& name : opts.only) {
            if (!props.contains(name)) {
                std::optional<FormulaPtr> builtin;
                try {
                    builtin = resolve_builtin(name);
                } catch (const Error& e) {
                    err << "error: " << e.what() << "\n";
                    return kExitUsage;
                }
                if (!builtin) {
                    err << "error: unknown property '" << name << "'\n";
                    return kExitUsage;
                }
                props.add(name, *builtin);
            }
            names.push_back(name);
        }
    } else {
        for (const auto& [name, f] : props)
            names.push_back(name);
    }

    std::vector<std::size_t> positions;
    if (opts.at == "hooks") {
        for (std::size_t i = 0; i < trace.size(); ++i)
            if (trace[i].kind == StepKind::Hook)
                positions.push_back(i);
    } else {
        Word pos = 0;
        if (!parse_word(opts.at, pos)) {
            err << "error: --at must be 'hooks' or a position number\n";
            return kExitUsage;
        }
        if (pos >= trace.size()) {
            err << "error: position " << pos << " out of range for trace of length "
                << trace.size() << "\n";
            return kExitUsage;
        }
        positions.push_back(static_cast<std::size_t>(pos));
    }

    // Offline checking permits the full grammar, future operators included.
    bool all_pass = true;
    for (std::size_t pos : positions) {
        Env env;
        env.providers = &providers;
        env.hook_contract = trace[pos].contract;
        if (trace[pos].kind == StepKind::Hook)
            env.hook_arg = trace[pos].as_hook().arg;
        for (const std::string& name : names) {
            bool ok;
            try {
                ok = eval(**props.find(name), trace, pos, env);
            } catch (const Error& e) {
                err << "error: " << e.what() << "\n";
                return kExitUsage;
            }
            out << name << " @ " << pos << ": " << (ok ? "PASS" : "VIOLATION") << "\n";
            all_pass = all_pass && ok;
        }
    }
    return all_pass ? kExitOk : kExitViolation;
}

inline int cmd_parse(const std::string& path, std::ostream& out, std::ostream& err) {
    std::string text;
    try {
        text = detail::read_file(path);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    try {
        PropertySet props = parse_properties(text);
        for (const auto& [name, f] : props)
            out << name << ": " << pretty(f) << "\n";
    } catch (const ParseError& e) {
        err << "error: " << path << ":" << e.what() << "\n";
        return kExitParse;
    }
    return kExitOk;
}

}  // namespace tracehook
