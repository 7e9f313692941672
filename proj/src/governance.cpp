#include <daosim/governance.hpp>

#include <algorithm>

namespace daosim {

const char* to_string(Direction d)
{
    return d == Direction::approve ? "approve" : "disapprove";
}

const char* to_string(ProposalState s)
{
    switch (s) {
    case ProposalState::pending: return "Pending";
    case ProposalState::voting: return "Voting";
    case ProposalState::approved: return "Approved";
    case ProposalState::rejected: return "Rejected";
    case ProposalState::queued: return "Queued";
    case ProposalState::executed: return "Executed";
    }
    return "Unknown";
}

void DecisionRule::validate() const
{
    if (p <= 0 || p >= 1)
        throw error(errc::validation_error, "decision threshold p must lie in (0, 1)");
    if (min_participation && *min_participation < 0)
        throw error(errc::validation_error, "min_participation must be >= 0");
}

Direction decide(const Rational& v_a, const Rational& v_d, const DecisionRule& rule)
{
    if (rule.min_participation && v_a + v_d < *rule.min_participation)
        return Direction::disapprove;
    return v_a * (1 - rule.p) >= rule.p * v_d ? Direction::approve : Direction::disapprove;
}

Proposal Proposal::submit(ProposalParams params, BlockHeight sealed_height)
{
    params.rule.validate();
    if (params.vote_start > params.vote_end)
        throw error(errc::invalid_window, "proposal " + params.id + ": vote_start after vote_end");
    if (params.vote_start <= sealed_height)
        throw error(errc::invalid_window, "proposal " + params.id + ": voting would start in the past");
    return Proposal{std::move(params)};
}

void Proposal::expect(ProposalState s, const char* op) const
{
    if (_state != s)
        throw error(errc::wrong_state, std::string{op} + " on proposal " + _params.id + " in state " +
                                           to_string(_state));
}

void Proposal::begin_voting(BlockHeight height)
{
    expect(ProposalState::pending, "begin_voting");
    if (height < _params.vote_start)
        throw error(errc::wrong_state, "proposal " + _params.id + " cannot vote before height " +
                                           std::to_string(_params.vote_start));
    _state = ProposalState::voting;
}

void Proposal::cast_ballot(const Ballot& ballot)
{
    expect(ProposalState::voting, "cast_ballot");
    if (ballot.cast_at < _params.vote_start || ballot.cast_at > _params.vote_end)
        throw error(errc::outside_window, ballot.voter.id + " voted at " + std::to_string(ballot.cast_at) +
                                              " outside the voting window");
    const bool seen = std::any_of(_ballots.begin(), _ballots.end(),
                                  [&](const Ballot& b) { return b.voter == ballot.voter; });
    if (seen)
        throw error(errc::duplicate_vote, ballot.voter.id + " already voted on " + _params.id);
    _ballots.push_back(ballot);
}

void Proposal::conclude(Direction decision, BlockHeight height)
{
    expect(ProposalState::voting, "conclude");
    if (height < _params.vote_end)
        throw error(errc::wrong_state, "proposal " + _params.id + " is still voting");
    if (decision == Direction::approve) {
        _state = ProposalState::approved;
        _approval_height = height;
    } else {
        _state = ProposalState::rejected;
    }
}

void Proposal::queue()
{
    expect(ProposalState::approved, "queue");
    _state = ProposalState::queued;
}

void Proposal::execute(BlockHeight height)
{
    expect(ProposalState::queued, "execute");
    if (height < *_approval_height + _params.timelock_blocks)
        throw error(errc::timelock_not_elapsed, "proposal " + _params.id + " executable from height " +
                                                    std::to_string(*_approval_height + _params.timelock_blocks));
    _state = ProposalState::executed;
}

void Proposal::cancel()
{
    expect(ProposalState::queued, "cancel");
    _state = ProposalState::rejected;
}

Tally tally(const Proposal& proposal, const MechanismSpec& spec, const Ledger& ledger)
{
    if (proposal.state() != ProposalState::voting)
        throw error(errc::wrong_state, "tally on proposal " + proposal.params().id + " in state " +
                                           to_string(proposal.state()));
    if (ledger.current_height() < proposal.params().vote_end)
        throw error(errc::wrong_state, "tally before the end of voting on " + proposal.params().id);

    Tally t;
    PowerEvaluator eval{spec, ledger, proposal.anchor()};
    for (const auto& b : proposal.ballots()) {
        Rational p = eval(b.voter);
        (b.direction == Direction::approve ? t.v_a : t.v_d) += p;
        t.per_voter.emplace(b.voter, std::move(p));
    }
    t.stats = eval.stats();
    return t;
}

void advance_lifecycle(Proposal& proposal, const Tally& t, BlockHeight current_height)
{
    proposal.conclude(decide(t.v_a, t.v_d, proposal.params().rule), current_height);
    if (proposal.state() == ProposalState::approved)
        proposal.queue();
}

} // namespace daosim
