#include <daosim/attacks.hpp>

namespace daosim {

const char* to_string(AttackKind kind)
{
    return kind == AttackKind::direct_flash_loan ? "direct_flash_loan" : "sustained_manipulation";
}

namespace {

void check_preconditions(const AttackScenario& s, const Ledger& ledger)
{
    if (ledger.has_pending())
        throw error(errc::validation_error, "attack replay needs a ledger without an open block");
    if (ledger.head().balance_of(s.attacker) != s.own_holdings)
        throw error(errc::validation_error, "attacker " + s.attacker.id + " holds " +
                                                std::to_string(ledger.head().balance_of(s.attacker).value()) +
                                                ", scenario declares " + std::to_string(s.own_holdings.value()));
}

Proposal open_for_votes(const AttackScenario& s, const Ledger& ledger)
{
    Proposal p = Proposal::submit(s.target_proposal, ledger.head_height());
    p.begin_voting(s.target_proposal.vote_end);
    for (const auto& b : s.honest_ballots)
        p.cast_ballot(b);
    return p;
}

AttackOutcome close_vote(Proposal& p, const AttackScenario& s, const MechanismSpec& spec, const Ledger& ledger)
{
    p.cast_ballot({s.attacker, Direction::approve, p.params().vote_end});
    const Tally t = tally(p, spec, ledger);
    advance_lifecycle(p, t, ledger.current_height());

    AttackOutcome out;
    out.decision = decide(t.v_a, t.v_d, p.params().rule);
    out.succeeded = out.decision == Direction::approve;
    out.attacker_power = t.per_voter.at(s.attacker);
    out.v_a = t.v_a;
    out.v_d = t.v_d;
    out.stats = t.stats;
    return out;
}

} // namespace

AttackOutcome run_direct_flash_loan(const AttackScenario& s, const MechanismSpec& spec, const Ledger& base)
{
    check_preconditions(s, base);
    Ledger ledger = base;
    Proposal p = open_for_votes(s, ledger);

    ledger.advance_to(p.params().vote_end - 1);
    ledger.open_block();
    ledger.flash_borrow(s.attacker, s.budget);
    AttackOutcome out = close_vote(p, s, spec, ledger);
    ledger.flash_repay(s.attacker, s.budget);
    ledger.seal_block();

    out.capital_used = s.budget;
    return out;
}

AttackOutcome run_sustained_manipulation(const AttackScenario& s, const MechanismSpec& spec, const Ledger& base)
{
    check_preconditions(s, base);
    if (s.span_blocks == 0)
        throw error(errc::validation_error, "span_blocks must be >= 1");
    const BlockHeight anchor = window_anchor(s.target_proposal.vote_start);
    if (anchor < s.span_blocks || anchor - s.span_blocks < base.head_height())
        throw error(errc::insufficient_lead_time,
                    "holding " + std::to_string(s.span_blocks) + " blocks before height " +
                        std::to_string(anchor) + " needs a head at or below " +
                        (anchor < s.span_blocks ? std::string{"a negative height"}
                                                : std::to_string(anchor - s.span_blocks)));

    Ledger ledger = base;
    Proposal p = open_for_votes(s, ledger);

    ledger.advance_to(anchor - s.span_blocks);
    ledger.open_block();
    ledger.transfer(s.funding_source, s.attacker, s.budget);
    ledger.seal_block();
    ledger.advance_to(p.params().vote_end - 1);

    ledger.open_block();
    AttackOutcome out = close_vote(p, s, spec, ledger);
    ledger.transfer(s.attacker, s.funding_source, s.budget);
    ledger.seal_block();

    out.capital_used = s.budget;
    out.blocks_sustained = s.span_blocks;
    out.carry_cost = s.budget.to_rational() * s.span_blocks * s.carry_cost_rate;
    return out;
}

AttackOutcome run_attack(const AttackScenario& s, const MechanismSpec& spec, const Ledger& ledger)
{
    return s.kind == AttackKind::direct_flash_loan ? run_direct_flash_loan(s, spec, ledger)
                                                   : run_sustained_manipulation(s, spec, ledger);
}

Amount min_flip_capital(const AttackScenario& scenario, std::uint64_t span, const MechanismSpec& spec,
                        const Ledger& ledger)
{
    AttackScenario probe = scenario;
    probe.span_blocks = span;
    const auto flips = [&](std::uint64_t budget) {
        probe.budget = Amount{budget};
        return run_attack(probe, spec, ledger).succeeded;
    };
    const auto found = first_true(0, scenario.budget.value(), flips);
    if (!found)
        throw error(errc::unreachable, "no budget up to " + std::to_string(scenario.budget.value()) +
                                           " flips proposal " + scenario.target_proposal.id);
    return Amount{*found};
}

} // namespace daosim
