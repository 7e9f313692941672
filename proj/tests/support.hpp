#pragma once

// Test-only helpers: random ledger action sequences and the reference replays
// used to check the ledger's revert logic and the mechanisms independently.

#include <cstdint>
#include <random>
#include <set>
#include <utility>
#include <vector>

#include <daosim/ledger.hpp>

namespace daosim::testing {

struct Op {
    ActionKind kind;
    Address actor;
    Address counterparty;
    Amount amount;
};

inline Address account(std::size_t i)
{
    return Address{"acct" + std::to_string(i)};
}

/// Applies `op`; returns false when the ledger rejected it (state unchanged).
inline bool try_apply(Ledger& l, const Op& op)
{
    try {
        switch (op.kind) {
        case ActionKind::transfer: l.transfer(op.actor, op.counterparty, op.amount); break;
        case ActionKind::flash_borrow: l.flash_borrow(op.actor, op.amount); break;
        case ActionKind::flash_repay: l.flash_repay(op.actor, op.amount); break;
        case ActionKind::lock: break;
        }
        return true;
    } catch (const error&) {
        return false;
    }
}

inline std::vector<std::pair<Address, Amount>> random_genesis(std::mt19937_64& rng, std::size_t accounts,
                                                              std::uint64_t max_balance)
{
    std::vector<std::pair<Address, Amount>> g;
    for (std::size_t i = 0; i < accounts; ++i)
        g.emplace_back(account(i), Amount{rng() % (max_balance + 1)});
    return g;
}

/// Random operations against the open block of `l`; only accepted ones are
/// returned, so replaying the result from the same start never fails.
inline std::vector<Op> random_block(std::mt19937_64& rng, Ledger& l, std::size_t accounts, std::size_t ops,
                                    std::uint64_t max_amount)
{
    std::vector<Op> accepted;
    for (std::size_t i = 0; i < ops; ++i) {
        Op op;
        const auto pick = rng() % 10;
        op.kind = pick < 5 ? ActionKind::transfer : pick < 8 ? ActionKind::flash_borrow : ActionKind::flash_repay;
        op.actor = account(rng() % accounts);
        op.counterparty = account(rng() % accounts);
        op.amount = Amount{rng() % (max_amount + 1)};
        if (op.kind == ActionKind::flash_repay && rng() % 2) {
            const Amount loan = l.open_loan(op.actor);
            if (loan.value() > 0)
                op.amount = loan;
        }
        if (try_apply(l, op))
            accepted.push_back(op);
    }
    return accepted;
}

/// Every borrower with an open loan in the pending block.
inline std::set<Address> delinquents(const Ledger& l)
{
    std::set<Address> out;
    for (const auto& [d, amt] : l.open_flash_loans())
        out.insert(d);
    return out;
}

/// Replays `ops` minus those of `removed` on a fresh block over `base`,
/// skipping operations that no longer apply, then seals.
inline Ledger replay_without(const Ledger& base, const std::vector<Op>& ops, const std::set<Address>& removed)
{
    Ledger l = base;
    l.open_block();
    for (const auto& op : ops)
        if (!removed.contains(op.actor))
            try_apply(l, op);
    l.seal_block();
    return l;
}

inline std::uint64_t supply_of(const Snapshot& s)
{
    std::uint64_t total = 0;
    for (const auto& [d, amt] : s.balances)
        total += amt.value();
    return total;
}

/// Ledger whose snapshots 0..height hold `balances_at(h)` for each height.
template<typename F>
Ledger ledger_from_history(std::size_t accounts, BlockHeight height, F&& balances_at)
{
    // Every account starts from a common reserve so arbitrary histories can be
    // expressed as transfers.
    const Address reserve{"reserve"};
    std::uint64_t total = 0;
    for (BlockHeight h = 0; h <= height; ++h) {
        std::uint64_t sum = 0;
        for (std::size_t i = 0; i < accounts; ++i)
            sum += balances_at(h, i);
        total = std::max(total, sum);
    }
    std::vector<std::pair<Address, Amount>> g;
    std::uint64_t used = 0;
    for (std::size_t i = 0; i < accounts; ++i) {
        const std::uint64_t b = balances_at(0, i);
        g.emplace_back(account(i), Amount{b});
        used += b;
    }
    g.emplace_back(reserve, Amount{total - used});
    Ledger l = Ledger::genesis(g);
    for (BlockHeight h = 1; h <= height; ++h) {
        l.open_block();
        for (std::size_t i = 0; i < accounts; ++i) {
            const Amount want{balances_at(h, i)};
            const Amount have = l.pending_balance(account(i));
            if (have > want)
                l.transfer(account(i), reserve, have - want);
        }
        for (std::size_t i = 0; i < accounts; ++i) {
            const Amount want{balances_at(h, i)};
            const Amount have = l.pending_balance(account(i));
            if (want > have)
                l.transfer(reserve, account(i), want - have);
        }
        l.seal_block();
    }
    return l;
}

} // namespace daosim::testing
