// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tracehook/detectors.hpp"
#include "tracehook/parser.hpp"
#include "tracehook/vm/vm.hpp"

namespace tracehook {

/// A fully resolved scenario: initial world, checking registry, properties
/// (file-defined plus any builtins referenced by bindings) and the
/// transactions to run in order.
struct Scenario {
    World world;
    Registry registry;
    PropertySet properties;
    std::vector<Transaction> transactions;
};

namespace detail {

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw SchemaError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline Word json_word(const nlohmann::json& j, const std::string& field,
                      const std::string& where) {
    if (!j.contains(field))
        throw SchemaError(where + ": missing field '" + field + "'");
    const auto& v = j[field];
    if (v.is_number_unsigned())
        return v.get<Word>();
    if (v.is_string()) {
        Word out = 0;
        if (parse_word(v.get<std::string>(), out))
            return out;
    }
    throw SchemaError(where + ": field '" + field + "' must be an unsigned number or 0x-hex string");
}

inline Address json_address(const nlohmann::json& j, const std::string& field,
                            const std::string& where) {
    return Address{json_word(j, field, where)};
}

inline Selector json_selector(const nlohmann::json& j, const std::string& field,
                              const std::string& where) {
    Word raw = json_word(j, field, where);
    if (raw > 0xffffffffull)
        throw SchemaError(where + ": selector exceeds 32 bits");
    return Selector{static_cast<std::uint32_t>(raw)};
}

inline std::vector<std::uint8_t> load_code(const nlohmann::json& code,
                                           const std::filesystem::path& base,
                                           const std::string& where) {
    std::string text;
    if (code.is_string()) {
        text = code.get<std::string>();
    } else if (code.is_object() && code.contains("file") && code["file"].is_string()) {
        text = read_file(base / code["file"].get<std::string>());
    } else {
        throw SchemaError(where + ": 'code' must be a string or {\"file\": path}");
    }
    if (text.empty())
        return {};
    if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0)
        return bytes_from_hex(text);
    return assemble(text);
}

}  // namespace detail

/// Loads and validates a scenario document. Referenced addresses must be
/// defined accounts and every binding must resolve to a property: one from
/// the properties file, builtin.flashloan, builtin.reentrancy,
/// builtin.tvl(num,den), or bare builtin.tvl backed by a registry threshold
/// for the binding's contract.
inline Scenario load_scenario(const std::filesystem::path& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(detail::read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("scenario is not valid JSON: " + std::string(e.what()));
    }
    if (!doc.is_object())
        throw SchemaError("scenario must be a JSON object");
    const std::filesystem::path base = path.parent_path();

    Scenario sc;
    if (!doc.contains("accounts") || !doc["accounts"].is_array())
        throw SchemaError("scenario: missing 'accounts' array");
    for (const auto& a : doc["accounts"]) {
        Account acct;
        acct.address = detail::json_address(a, "address", "account");
        acct.balance = detail::json_word(a, "balance", "account");
        if (a.contains("code"))
            acct.code = detail::load_code(a["code"], base, "account " + to_hex(acct.address));
        if (a.contains("storage")) {
            if (!a["storage"].is_object())
                throw SchemaError("account " + to_hex(acct.address) +
                                  ": 'storage' must be an object of key -> value");
            for (const auto& [k, v] : a["storage"].items()) {
                Word key = 0;
                if (!parse_word(k, key))
                    throw SchemaError("account " + to_hex(acct.address) +
                                      ": malformed storage key '" + k + "'");
                if (!v.is_number_unsigned())
                    throw SchemaError("account " + to_hex(acct.address) +
                                      ": storage values must be unsigned numbers");
                acct.storage[key] = v.get<Word>();
            }
        }
        if (sc.world.accounts.count(acct.address))
            throw SchemaError("duplicate account " + to_hex(acct.address));
        sc.world.accounts.emplace(acct.address, std::move(acct));
    }

    auto require_known = [&](Address a, const std::string& where) {
        if (!sc.world.accounts.count(a))
            throw SchemaError(where + " references undefined address " + to_hex(a));
    };

    if (doc.contains("registry")) {
        const auto& reg = doc["registry"];
        if (reg.contains("flashloan_providers")) {
            for (const auto& p : reg["flashloan_providers"]) {
                Address c = detail::json_address(p, "contract", "flashloan provider");
                Selector s = detail::json_selector(p, "selector", "flashloan provider");
                require_known(c, "flashloan provider");
                sc.registry.flashloan_providers.insert({c, s});
            }
        }
        if (reg.contains("tvl_thresholds")) {
            for (const auto& t : reg["tvl_thresholds"]) {
                Address c = detail::json_address(t, "contract", "tvl threshold");
                Word num = detail::json_word(t, "num", "tvl threshold");
                Word den = detail::json_word(t, "den", "tvl threshold");
                if (den == 0)
                    throw SchemaError("tvl threshold for " + to_hex(c) +
                                      ": denominator must be nonzero");
                require_known(c, "tvl threshold");
                sc.registry.tvl_thresholds[c] = {num, den};
            }
        }
    }

    if (doc.contains("properties_file") && !doc["properties_file"].is_null()) {
        if (!doc["properties_file"].is_string())
            throw SchemaError("scenario: 'properties_file' must be a path string");
        std::string text = detail::read_file(base / doc["properties_file"].get<std::string>());
        sc.properties = parse_properties(text);
    }

    if (doc.contains("bindings")) {
        for (const auto& b : doc["bindings"]) {
            PropertyBinding binding;
            binding.contract = detail::json_address(b, "contract", "binding");
            Word id = detail::json_word(b, "hook_id", "binding");
            if (id > 0xff)
                throw SchemaError("binding: hook_id exceeds 8 bits");
            binding.hook_id = static_cast<std::uint8_t>(id);
            if (!b.contains("property") || !b["property"].is_string())
                throw SchemaError("binding: missing 'property' name");
            binding.property = b["property"].get<std::string>();
            require_known(binding.contract, "binding");

            if (!sc.properties.contains(binding.property)) {
                std::optional<FormulaPtr> builtin = resolve_builtin(binding.property);
                if (!builtin && binding.property == kBuiltinTvlPrefix) {
                    auto it = sc.registry.tvl_thresholds.find(binding.contract);
                    if (it == sc.registry.tvl_thresholds.end())
                        throw SchemaError("binding references builtin.tvl but no threshold is "
                                          "registered for " +
                                          to_hex(binding.contract));
                    // Materialize under a per-contract name so different
                    // thresholds can coexist.
                    binding.property = std::string(kBuiltinTvlPrefix) + "@" +
                                       to_hex(binding.contract);
                    if (!sc.properties.contains(binding.property))
                        sc.properties.add(binding.property,
                                          builtin_tvl(it->second.first, it->second.second));
                } else if (builtin) {
                    if (!sc.properties.contains(binding.property))
                        sc.properties.add(binding.property, *builtin);
                } else {
                    throw SchemaError("binding references undefined property '" +
                                      binding.property + "'");
                }
            }
            // Hooks cannot evaluate future operators; fail at load time.
            if (contains_future(**sc.properties.find(binding.property)))
                throw SchemaError("property '" + binding.property +
                                  "' contains future operators and cannot be bound to a hook");
            sc.registry.bindings.push_back(std::move(binding));
        }
    }

    if (!doc.contains("transactions") || !doc["transactions"].is_array())
        throw SchemaError("scenario: missing 'transactions' array");
    for (const auto& t : doc["transactions"]) {
        Transaction tx;
        tx.origin = detail::json_address(t, "origin", "transaction");
        tx.target = detail::json_address(t, "target", "transaction");
        tx.selector = detail::json_selector(t, "selector", "transaction");
        tx.value = detail::json_word(t, "value", "transaction");
        tx.arg = t.contains("arg") ? detail::json_word(t, "arg", "transaction") : 0;
        tx.gas_limit = detail::json_word(t, "gas_limit", "transaction");
        if (tx.gas_limit == 0)
            throw SchemaError("transaction: gas_limit must be positive");
        require_known(tx.origin, "transaction");
        require_known(tx.target, "transaction");
        sc.transactions.push_back(tx);
    }

    return sc;
}

/// Result of running one scenario transaction.
struct TxRun {
    Receipt receipt;
    Trace trace;
    std::vector<Tracer::LogEntry> verdicts;
    std::vector<Tracer::DebugOp> debug_log;
};

/// Executes all scenario transactions in order against the scenario world.
inline std::vector<TxRun> run_scenario(Scenario& sc, bool debug = false) {
    std::vector<TxRun> runs;
    for (const Transaction& tx : sc.transactions) {
        Tracer tracer;
        tracer.debug_enabled = debug;
        Receipt receipt = execute_transaction(sc.world, tx, tracer, sc.registry, sc.properties);
        runs.push_back({std::move(receipt), tracer.trace(), tracer.verdict_log(),
                        std::move(tracer.debug_log)});
    }
    return runs;
}

}  // namespace tracehook
