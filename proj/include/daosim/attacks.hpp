#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <daosim/governance.hpp>
#include <daosim/ledger.hpp>
#include <daosim/mechanisms.hpp>
#include <daosim/types.hpp>

namespace daosim {

enum class AttackKind {
    /// Borrow, vote and repay inside the closing block of the vote.
    direct_flash_loan,
    /// Buy `budget` tokens from a liquidity source and hold them for
    /// `span_blocks` sealed blocks ending at the proposal's window anchor.
    sustained_manipulation,
};

const char* to_string(AttackKind kind);

struct AttackScenario {
    AttackKind kind = AttackKind::direct_flash_loan;
    Address attacker;
    Amount budget;
    Amount own_holdings;
    std::uint64_t span_blocks = 1;
    Rational carry_cost_rate = 0;
    /// Seller of the tokens bought for a sustained manipulation.
    Address funding_source{"pool"};
    ProposalParams target_proposal;
    std::vector<Ballot> honest_ballots;

    bool operator==(const AttackScenario&) const = default;
};

struct AttackOutcome {
    bool succeeded = false;
    Direction decision = Direction::disapprove;
    Rational attacker_power = 0;
    Rational v_a = 0;
    Rational v_d = 0;
    Amount capital_used;
    Rational carry_cost = 0;
    std::uint64_t blocks_sustained = 0;
    PowerStats stats;

    bool operator==(const AttackOutcome& o) const
    {
        return succeeded == o.succeeded && decision == o.decision && attacker_power == o.attacker_power &&
               v_a == o.v_a && v_d == o.v_d && capital_used == o.capital_used && carry_cost == o.carry_cost &&
               blocks_sustained == o.blocks_sustained && stats.power_evaluations == o.stats.power_evaluations &&
               stats.snapshot_reads == o.stats.snapshot_reads;
    }
};

/// The ledger is the pre-attack chain: no open block, head below vote_start,
/// attacker's head balance equal to own_holdings. It is not modified.
AttackOutcome run_direct_flash_loan(const AttackScenario& scenario, const MechanismSpec& spec, const Ledger& ledger);
AttackOutcome run_sustained_manipulation(const AttackScenario& scenario, const MechanismSpec& spec,
                                         const Ledger& ledger);
AttackOutcome run_attack(const AttackScenario& scenario, const MechanismSpec& spec, const Ledger& ledger);

/// Smallest x in [lo, hi] with pred(x), for pred monotone false -> true.
/// Returns nullopt when pred(hi) is false.
template<typename Pred>
std::optional<std::uint64_t> first_true(std::uint64_t lo, std::uint64_t hi, Pred&& pred)
{
    if (lo > hi || !pred(hi))
        return std::nullopt;
    while (lo < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (pred(mid))
            hi = mid;
        else
            lo = mid + 1;
    }
    return lo;
}

/// Least budget in [0, scenario.budget] for which the attack with the given
/// span gets the proposal approved. Throws unreachable when none does.
Amount min_flip_capital(const AttackScenario& scenario, std::uint64_t span, const MechanismSpec& spec,
                        const Ledger& ledger);

} // namespace daosim
