// tracehook: a miniature EVM with real-time transaction trace properties
// Copyright 2026 The tracehook Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "tracehook/common.hpp"
#include "tracehook/vm/assembler.hpp"

namespace tracehook {

/// One account: balance, storage and (for contracts) code. Reads of absent
/// storage keys yield zero.
struct Account {
    Address address;
    Word balance = 0;
    std::map<Word, Word> storage;
    std::vector<std::uint8_t> code;

    Word storage_at(Word key) const {
        auto it = storage.find(key);
        return it == storage.end() ? 0 : it->second;
    }

    friend bool operator==(const Account&, const Account&) = default;
};

/// Persistent chain state: accounts keyed (and iterated) by address.
struct World {
    std::map<Address, Account> accounts;

    Account& account(Address a) {
        auto it = accounts.find(a);
        if (it == accounts.end())
            it = accounts.emplace(a, Account{a}).first;
        return it->second;
    }

    const Account* find(Address a) const {
        auto it = accounts.find(a);
        return it == accounts.end() ? nullptr : &it->second;
    }

    Word balance_of(Address a) const {
        const Account* acct = find(a);
        return acct ? acct->balance : 0;
    }

    friend bool operator==(const World&, const World&) = default;
};

/// Full deep copy of the world. Restoring a snapshot yields bit-identical
/// state (checked as canonical serialization equality in the tests).
using Snapshot = World;

inline Snapshot snapshot(const World& world) { return world; }

inline void revert_to(World& world, const Snapshot& snap) { world = snap; }

/// Canonical world serialization: accounts sorted by address, storage sorted
/// by key, fixed key order, integers and lowercase hex only. Two worlds are
/// bit-identical exactly when their canonical forms are byte-equal.
inline std::string canonical_world_json(const World& world) {
    nlohmann::ordered_json doc;
    doc["accounts"] = nlohmann::ordered_json::array();
    for (const auto& [addr, acct] : world.accounts) {
        nlohmann::ordered_json a;
        a["address"] = to_hex(addr);
        a["balance"] = acct.balance;
        a["code"] = bytes_to_hex(acct.code);
        a["storage"] = nlohmann::ordered_json::array();
        for (const auto& [k, v] : acct.storage)
            a["storage"].push_back({k, v});
        doc["accounts"].push_back(std::move(a));
    }
    return doc.dump();
}

}  // namespace tracehook
