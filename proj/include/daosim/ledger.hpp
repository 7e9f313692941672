#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include <daosim/types.hpp>

namespace daosim {

/// Immutable per-block record of every non-zero balance.
struct Snapshot {
    BlockHeight height = 0;
    std::map<Address, Amount> balances;
    Amount total_supply;

    /// Absent addresses hold zero.
    Amount balance_of(const Address& d) const;

    bool operator==(const Snapshot&) const = default;
};

/// Tokens escrowed by `owner` from `created` until `unlock_height`.
struct LockPosition {
    Address owner;
    Amount locked;
    BlockHeight created = 0;
    BlockHeight unlock_height = 0;
    std::uint64_t max_lock = 1;

    bool active_at(BlockHeight h) const { return created <= h && h < unlock_height; }

    bool operator==(const LockPosition&) const = default;
};

enum class ActionKind { transfer, flash_borrow, flash_repay, lock };

/// One successful pending-block action. `actor` is the account the action is
/// attributed to when a block is reverted.
struct LedgerAction {
    ActionKind kind = ActionKind::transfer;
    Address actor;
    Address counterparty;
    Amount amount;
    BlockHeight unlock_height = 0;
    std::uint64_t max_lock = 0;

    bool operator==(const LedgerAction&) const = default;
};

enum class EventKind { transfer, flash_borrow, flash_repay, lock, revert, seal };

const char* to_string(EventKind kind);

struct LedgerEvent {
    EventKind kind = EventKind::seal;
    BlockHeight height = 0;
    Address from;
    Address to;
    Amount amount;

    bool operator==(const LedgerEvent&) const = default;
};

/// Single-chain token ledger: a contiguous run of sealed snapshots starting at
/// genesis height 0, plus at most one open pending block.
///
/// Flash loans may push circulation above total supply inside the pending
/// block. A block sealed with an outstanding loan first drops every action of
/// the delinquent borrower and replays the rest; actions that no longer apply
/// are dropped as well, and any borrower left delinquent by the replay is
/// reverted in turn.
class Ledger {
public:
    static Ledger genesis(std::span<const std::pair<Address, Amount>> balances);

    void open_block();
    void transfer(const Address& from, const Address& to, Amount amt);
    void flash_borrow(const Address& borrower, Amount amt);
    void flash_repay(const Address& borrower, Amount amt);
    void lock(const Address& owner, Amount amt, BlockHeight unlock_height, std::uint64_t max_lock);
    void seal_block();

    /// Seals `count` empty blocks. Requires no open pending block.
    void advance(std::uint64_t count);
    /// Seals empty blocks until the head reaches `height`.
    void advance_to(BlockHeight height);

    bool has_pending() const noexcept { return _pending.has_value(); }
    BlockHeight head_height() const noexcept { return _sealed.back().height; }
    /// Height of the pending block when open, else of the sealed head.
    BlockHeight current_height() const noexcept;
    Amount total_supply() const noexcept { return _total_supply; }

    const Snapshot& head() const noexcept { return _sealed.back(); }
    const Snapshot& snapshot_at(BlockHeight h) const;
    std::size_t sealed_count() const noexcept { return _sealed.size(); }

    Amount pending_balance(const Address& d) const;
    /// Pending balance when a block is open, else the sealed head balance.
    Amount current_balance(const Address& d) const;
    Amount open_loan(const Address& d) const;
    const std::map<Address, Amount>& open_flash_loans() const;
    /// Balance not held in an active lock at the current height.
    Amount transferable_balance(const Address& d) const;

    /// Balances (t^0, ..., t^m) for heights at-m .. at; index 0 is the oldest.
    /// `reads`, when given, is incremented once per snapshot consulted.
    std::vector<Amount> history_vector(const Address& d, std::uint64_t window, BlockHeight at,
                                       std::uint64_t* reads = nullptr) const;

    /// Sealed lock positions.
    const std::vector<LockPosition>& locks() const noexcept { return _locks; }
    const std::vector<LedgerEvent>& events() const noexcept { return _events; }
    const std::vector<LedgerAction>& pending_actions() const;

    bool operator==(const Ledger&) const = default;

private:
    struct Pending {
        BlockHeight height = 0;
        std::map<Address, Amount> balances;
        std::map<Address, Amount> loans;
        std::vector<LockPosition> new_locks;
        std::vector<LedgerAction> actions;

        bool operator==(const Pending&) const = default;
    };

    Pending& require_pending();
    Pending fresh_pending() const;
    Amount locked_in(const Pending& p, const Address& d) const;
    void apply(Pending& p, const LedgerAction& a) const;
    void record(const LedgerAction& a);

    std::vector<Snapshot> _sealed;
    std::optional<Pending> _pending;
    std::vector<LockPosition> _locks;
    std::vector<LedgerEvent> _events;
    Amount _total_supply;
};

} // namespace daosim
