#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <daosim/ledger.hpp>
#include <daosim/types.hpp>

namespace daosim {

/// Voting-power weights over a window of sealed snapshots, stored as integer
/// multiples of 10^-6. Index 0 weighs the oldest snapshot in the window.
/// Entries need not sum to one.
class WeightVector {
public:
    static constexpr std::uint64_t scale = 1'000'000;

    WeightVector() = default;
    /// Throws validation_error on an empty vector or one with no positive entry.
    explicit WeightVector(std::vector<std::uint64_t> micros);

    /// Whitespace-separated decimals, e.g. "0.5 0.3 0.2 0.1 0.1".
    static WeightVector parse(std::string_view text);

    std::size_t size() const noexcept { return _micros.size(); }
    std::uint64_t micros(std::size_t i) const { return _micros.at(i); }
    const std::vector<std::uint64_t>& micros() const noexcept { return _micros; }
    Rational weight(std::size_t i) const { return Rational{_micros.at(i), scale}; }
    Rational sum() const;

    /// Multiplies every entry by c; throws validation_error when a result is
    /// not a whole number of micro-units.
    WeightVector scaled(const Rational& c) const;

    /// Fixed six-decimal rendering, space separated.
    std::string to_string() const;

    bool operator==(const WeightVector&) const = default;

private:
    std::vector<std::uint64_t> _micros;
};

/// Parses one non-negative decimal with at most six fractional digits into
/// micro-units. Comma separators are rejected as ambiguous.
std::uint64_t parse_decimal_micros(std::string_view text);

/// Anchor of a proposal's snapshot window: the last sealed height strictly
/// before voting starts.
BlockHeight window_anchor(BlockHeight vote_start);

struct Lot {
    Amount amount;
    BlockHeight acquired = 0;

    bool operator==(const Lot&) const = default;
};

/// Per-address acquisition lots. A lot confers voting power once
/// now >= acquired + period. Outgoing transfers consume the oldest lots first.
class HoldingPeriodBook {
public:
    explicit HoldingPeriodBook(std::uint64_t period);

    /// Lots reconstructed from balance changes between consecutive sealed
    /// snapshots at heights 0..up_to. Genesis balances are acquired at 0.
    static HoldingPeriodBook from_ledger(const Ledger& ledger, std::uint64_t period, BlockHeight up_to);

    void acquire(const Address& d, Amount amt, BlockHeight height);
    void release(const Address& d, Amount amt);

    Amount matured(const Address& d, BlockHeight now) const;
    const std::vector<Lot>& lots(const Address& d) const;
    std::uint64_t period() const noexcept { return _period; }

private:
    std::uint64_t _period;
    std::map<Address, std::vector<Lot>> _entries;
};

struct CurrentBalance {
    bool operator==(const CurrentBalance&) const = default;
};

/// Balance at one sealed height; the proposal's window anchor when unset.
struct SingleSnapshot {
    std::optional<BlockHeight> at;
    bool operator==(const SingleSnapshot&) const = default;
};

/// Dot product of the weight vector with the balance history ending at the
/// window anchor. The window length is the weight vector's length.
struct WeightedSnapshot {
    WeightVector weights;
    bool operator==(const WeightedSnapshot&) const = default;
};

struct HoldingPeriod {
    std::uint64_t period = 1;
    bool operator==(const HoldingPeriod&) const = default;
};

/// Linearly decaying power over the ledger's sealed lock positions.
struct VoteEscrow {
    std::uint64_t max_lock = 1;
    bool operator==(const VoteEscrow&) const = default;
};

using MechanismSpec = std::variant<CurrentBalance, SingleSnapshot, WeightedSnapshot, HoldingPeriod, VoteEscrow>;

/// Short label such as "weighted_snapshot" or "holding_period(H=5)".
std::string describe(const MechanismSpec& spec);

Rational weighted_power(const Ledger& ledger, const Address& d, const WeightVector& w, BlockHeight anchor,
                        std::uint64_t* reads = nullptr);

/// Includes flash-loaned funds in an open block.
Rational current_balance_power(const Ledger& ledger, const Address& d);

Rational single_snapshot_power(const Ledger& ledger, const Address& d, BlockHeight at,
                               std::uint64_t* reads = nullptr);

Rational holding_period_power(const HoldingPeriodBook& book, const Address& d, BlockHeight now);

/// locked * (unlock_height - now) / max_lock, zero outside [created, unlock_height].
Rational vote_escrow_power(const LockPosition& position, BlockHeight now);

struct PowerStats {
    std::uint64_t power_evaluations = 0;
    std::uint64_t snapshot_reads = 0;
};

/// Evaluates one mechanism against one ledger state at a fixed height,
/// counting evaluations and snapshot reads. Per-mechanism preparation (the
/// holding-period book) happens once at construction.
class PowerEvaluator {
public:
    PowerEvaluator(const MechanismSpec& spec, const Ledger& ledger, BlockHeight now);

    Rational operator()(const Address& d);

    const PowerStats& stats() const noexcept { return _stats; }

private:
    const MechanismSpec& _spec;
    const Ledger& _ledger;
    BlockHeight _now;
    std::optional<HoldingPeriodBook> _book;
    PowerStats _stats;
};

Rational power(const MechanismSpec& spec, const Ledger& ledger, const Address& d, BlockHeight now);

} // namespace daosim
