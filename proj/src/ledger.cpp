#include <daosim/ledger.hpp>

#include <algorithm>
#include <set>

namespace daosim {

namespace {

Amount lookup(const std::map<Address, Amount>& m, const Address& d)
{
    const auto it = m.find(d);
    return it == m.end() ? Amount{} : it->second;
}

void put(std::map<Address, Amount>& m, const Address& d, Amount v)
{
    if (v.value() == 0)
        m.erase(d);
    else
        m[d] = v;
}

} // namespace

Amount Snapshot::balance_of(const Address& d) const
{
    return lookup(balances, d);
}

const char* to_string(EventKind kind)
{
    switch (kind) {
    case EventKind::transfer: return "transfer";
    case EventKind::flash_borrow: return "flash_borrow";
    case EventKind::flash_repay: return "flash_repay";
    case EventKind::lock: return "lock";
    case EventKind::revert: return "revert";
    case EventKind::seal: return "seal";
    }
    return "unknown";
}

Ledger Ledger::genesis(std::span<const std::pair<Address, Amount>> balances)
{
    Ledger l;
    Snapshot s;
    s.height = 0;
    for (const auto& [addr, amt] : balances) {
        put(s.balances, addr, lookup(s.balances, addr) + amt);
        l._total_supply += amt;
    }
    s.total_supply = l._total_supply;
    l._sealed.push_back(std::move(s));
    return l;
}

BlockHeight Ledger::current_height() const noexcept
{
    return _pending ? _pending->height : head_height();
}

Ledger::Pending Ledger::fresh_pending() const
{
    Pending p;
    p.height = head_height() + 1;
    p.balances = head().balances;
    return p;
}

void Ledger::open_block()
{
    if (_pending)
        throw error(errc::block_already_open, "a pending block is already open at height " +
                                                  std::to_string(_pending->height));
    _pending = fresh_pending();
}

Ledger::Pending& Ledger::require_pending()
{
    if (!_pending)
        throw error(errc::no_open_block, "no pending block is open");
    return *_pending;
}

Amount Ledger::locked_in(const Pending& p, const Address& d) const
{
    Amount total;
    for (const auto& pos : _locks)
        if (pos.owner == d && pos.active_at(p.height))
            total += pos.locked;
    for (const auto& pos : p.new_locks)
        if (pos.owner == d && pos.active_at(p.height))
            total += pos.locked;
    return total;
}

void Ledger::apply(Pending& p, const LedgerAction& a) const
{
    if (a.amount.value() == 0)
        return;
    const Amount bal = lookup(p.balances, a.actor);
    const Amount free = bal - std::min(bal, locked_in(p, a.actor));
    switch (a.kind) {
    case ActionKind::transfer:
        if (free < a.amount)
            throw error(errc::insufficient_balance, a.actor.id + " cannot transfer " +
                                                        std::to_string(a.amount.value()));
        put(p.balances, a.actor, bal - a.amount);
        put(p.balances, a.counterparty, lookup(p.balances, a.counterparty) + a.amount);
        break;
    case ActionKind::flash_borrow:
        put(p.balances, a.actor, bal + a.amount);
        put(p.loans, a.actor, lookup(p.loans, a.actor) + a.amount);
        break;
    case ActionKind::flash_repay: {
        const Amount loan = lookup(p.loans, a.actor);
        if (loan < a.amount)
            throw error(errc::no_outstanding_loan, a.actor.id + " has no outstanding loan of " +
                                                       std::to_string(a.amount.value()));
        if (free < a.amount)
            throw error(errc::insufficient_balance, a.actor.id + " cannot repay " +
                                                        std::to_string(a.amount.value()));
        put(p.balances, a.actor, bal - a.amount);
        put(p.loans, a.actor, loan - a.amount);
        break;
    }
    case ActionKind::lock:
        if (a.unlock_height <= p.height || a.unlock_height - p.height > a.max_lock)
            throw error(errc::invalid_lock, "lock must end after its creation and within max_lock");
        if (free < a.amount)
            throw error(errc::insufficient_balance, a.actor.id + " cannot lock " +
                                                        std::to_string(a.amount.value()));
        p.new_locks.push_back({a.actor, a.amount, p.height, a.unlock_height, a.max_lock});
        break;
    }
}

void Ledger::record(const LedgerAction& a)
{
    Pending& p = require_pending();
    apply(p, a);
    if (a.amount.value() == 0)
        return;
    p.actions.push_back(a);
    LedgerEvent ev;
    ev.height = p.height;
    ev.amount = a.amount;
    switch (a.kind) {
    case ActionKind::transfer:
        ev.kind = EventKind::transfer;
        ev.from = a.actor;
        ev.to = a.counterparty;
        break;
    case ActionKind::flash_borrow:
        ev.kind = EventKind::flash_borrow;
        ev.to = a.actor;
        break;
    case ActionKind::flash_repay:
        ev.kind = EventKind::flash_repay;
        ev.from = a.actor;
        break;
    case ActionKind::lock:
        ev.kind = EventKind::lock;
        ev.from = a.actor;
        break;
    }
    _events.push_back(std::move(ev));
}

void Ledger::transfer(const Address& from, const Address& to, Amount amt)
{
    record({ActionKind::transfer, from, to, amt, 0, 0});
}

void Ledger::flash_borrow(const Address& borrower, Amount amt)
{
    record({ActionKind::flash_borrow, borrower, {}, amt, 0, 0});
}

void Ledger::flash_repay(const Address& borrower, Amount amt)
{
    record({ActionKind::flash_repay, borrower, {}, amt, 0, 0});
}

void Ledger::lock(const Address& owner, Amount amt, BlockHeight unlock_height, std::uint64_t max_lock)
{
    if (max_lock == 0)
        throw error(errc::invalid_lock, "max_lock must be positive");
    record({ActionKind::lock, owner, {}, amt, unlock_height, max_lock});
}

void Ledger::seal_block()
{
    Pending& p = require_pending();

    std::set<Address> delinquent;
    while (!p.loans.empty()) {
        for (const auto& [borrower, amt] : p.loans) {
            delinquent.insert(borrower);
            _events.push_back({EventKind::revert, p.height, borrower, {}, amt});
        }
        Pending replay = fresh_pending();
        for (const auto& a : p.actions) {
            if (delinquent.contains(a.actor))
                continue;
            try {
                apply(replay, a);
                replay.actions.push_back(a);
            } catch (const error&) {
                // the action depended on reverted state; it fails with it
            }
        }
        p = std::move(replay);
    }

    Snapshot s;
    s.height = p.height;
    s.balances = std::move(p.balances);
    s.total_supply = _total_supply;
    _locks.insert(_locks.end(), p.new_locks.begin(), p.new_locks.end());
    _events.push_back({EventKind::seal, s.height, {}, {}, {}});
    _sealed.push_back(std::move(s));
    _pending.reset();
}

void Ledger::advance(std::uint64_t count)
{
    if (_pending)
        throw error(errc::block_already_open, "cannot advance with a pending block open");
    for (std::uint64_t i = 0; i < count; ++i) {
        open_block();
        seal_block();
    }
}

void Ledger::advance_to(BlockHeight height)
{
    if (height > head_height())
        advance(height - head_height());
}

const Snapshot& Ledger::snapshot_at(BlockHeight h) const
{
    if (h > head_height())
        throw error(errc::unsealed_height, "height " + std::to_string(h) + " is not sealed (head " +
                                               std::to_string(head_height()) + ")");
    return _sealed[h];
}

Amount Ledger::pending_balance(const Address& d) const
{
    if (!_pending)
        throw error(errc::no_open_block, "no pending block is open");
    return lookup(_pending->balances, d);
}

Amount Ledger::current_balance(const Address& d) const
{
    return _pending ? lookup(_pending->balances, d) : head().balance_of(d);
}

Amount Ledger::open_loan(const Address& d) const
{
    return _pending ? lookup(_pending->loans, d) : Amount{};
}

const std::map<Address, Amount>& Ledger::open_flash_loans() const
{
    static const std::map<Address, Amount> none;
    return _pending ? _pending->loans : none;
}

Amount Ledger::transferable_balance(const Address& d) const
{
    if (_pending) {
        const Amount bal = lookup(_pending->balances, d);
        return bal - std::min(bal, locked_in(*_pending, d));
    }
    const Amount bal = head().balance_of(d);
    Amount locked;
    for (const auto& pos : _locks)
        if (pos.owner == d && pos.active_at(head_height()))
            locked += pos.locked;
    return bal - std::min(bal, locked);
}

const std::vector<LedgerAction>& Ledger::pending_actions() const
{
    static const std::vector<LedgerAction> none;
    return _pending ? _pending->actions : none;
}

std::vector<Amount> Ledger::history_vector(const Address& d, std::uint64_t window, BlockHeight at,
                                           std::uint64_t* reads) const
{
    if (at > head_height())
        throw error(errc::unsealed_height, "height " + std::to_string(at) + " is not sealed");
    if (window == 0 || window > at + 1)
        throw error(errc::window_too_large, "window of " + std::to_string(window) +
                                                " snapshots does not fit below height " +
                                                std::to_string(at));
    std::vector<Amount> out;
    out.reserve(window);
    for (BlockHeight h = at + 1 - window; h <= at; ++h) {
        out.push_back(_sealed[h].balance_of(d));
        if (reads)
            ++*reads;
    }
    return out;
}

} // namespace daosim
