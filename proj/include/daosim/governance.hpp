#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <daosim/ledger.hpp>
#include <daosim/mechanisms.hpp>
#include <daosim/types.hpp>

namespace daosim {

enum class Direction { approve, disapprove };

enum class ProposalState { pending, voting, approved, rejected, queued, executed };

const char* to_string(Direction d);
const char* to_string(ProposalState s);

/// Approval requires v_a >= p/(1-p) * v_d, i.e. approvers hold at least a p
/// share of the participating power. An optional quorum on v_a + v_d applies
/// first.
struct DecisionRule {
    Rational p{1, 2};
    std::optional<Rational> min_participation;

    /// Throws validation_error unless 0 < p < 1 and min_participation >= 0.
    void validate() const;

    bool operator==(const DecisionRule&) const = default;
};

/// Exact comparison, cross-multiplied: v_a * (1 - p) >= p * v_d.
Direction decide(const Rational& v_a, const Rational& v_d, const DecisionRule& rule);

struct Ballot {
    Address voter;
    Direction direction = Direction::approve;
    BlockHeight cast_at = 0;

    bool operator==(const Ballot&) const = default;
};

struct ProposalParams {
    std::string id;
    std::string action_tag;
    Address proposer;
    BlockHeight vote_start = 1;
    BlockHeight vote_end = 1;
    DecisionRule rule;
    std::uint64_t timelock_blocks = 0;

    bool operator==(const ProposalParams&) const = default;
};

/// Pending -> Voting -> (Approved | Rejected); Approved -> Queued -> Executed.
/// A queued proposal may be cancelled, which rejects it.
class Proposal {
public:
    /// Throws invalid_window when vote_start > vote_end or voting would start
    /// at or below the current sealed height.
    static Proposal submit(ProposalParams params, BlockHeight sealed_height);

    const ProposalParams& params() const noexcept { return _params; }
    ProposalState state() const noexcept { return _state; }
    const std::vector<Ballot>& ballots() const noexcept { return _ballots; }
    std::optional<BlockHeight> approval_height() const noexcept { return _approval_height; }
    /// Height whose snapshot closes the proposal's window.
    BlockHeight anchor() const { return window_anchor(_params.vote_start); }

    void begin_voting(BlockHeight height);
    /// Records a ballot; power is measured at tally time, not here.
    void cast_ballot(const Ballot& ballot);
    void conclude(Direction decision, BlockHeight height);
    void queue();
    void execute(BlockHeight height);
    void cancel();

private:
    explicit Proposal(ProposalParams params) : _params{std::move(params)} {}
    void expect(ProposalState s, const char* op) const;

    ProposalParams _params;
    ProposalState _state = ProposalState::pending;
    std::vector<Ballot> _ballots;
    std::optional<BlockHeight> _approval_height;
};

struct Tally {
    Rational v_a = 0;
    Rational v_d = 0;
    std::map<Address, Rational> per_voter;
    PowerStats stats;
};

/// One power evaluation per ballot against the ledger as it stands. Snapshot
/// mechanisms read the window ending at the proposal's anchor. Requires the
/// proposal in Voting and the ledger at or past vote_end.
Tally tally(const Proposal& proposal, const MechanismSpec& spec, const Ledger& ledger);

/// Concludes voting from the tally and queues an approved proposal.
void advance_lifecycle(Proposal& proposal, const Tally& t, BlockHeight current_height);

} // namespace daosim
