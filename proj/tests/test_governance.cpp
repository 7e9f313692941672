#include <doctest.h>

#include <daosim/governance.hpp>

#include "support.hpp"

using namespace daosim;

namespace {

errc code_of(auto&& fn)
{
    try {
        fn();
    } catch (const error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return errc::io_error;
}

ProposalParams params(BlockHeight start, BlockHeight end, Rational p = Rational{2, 3}, std::uint64_t timelock = 0)
{
    ProposalParams out;
    out.id = "prop";
    out.action_tag = "transfer_treasury";
    out.proposer = "P";
    out.vote_start = start;
    out.vote_end = end;
    out.rule.p = p;
    out.timelock_blocks = timelock;
    return out;
}

} // namespace

TEST_CASE("decide")
{
    const DecisionRule two_thirds{Rational{2, 3}, std::nullopt};
    const DecisionRule majority{Rational{1, 2}, std::nullopt};
    CHECK(decide(120, 60, two_thirds) == Direction::approve);
    CHECK(decide(Rational{119}, 60, two_thirds) == Direction::disapprove);
    CHECK(decide(100, 101, majority) == Direction::disapprove);
    CHECK(decide(101, 101, majority) == Direction::approve);
    CHECK(decide(0, 0, two_thirds) == Direction::approve);
    CHECK(decide(0, 0, DecisionRule{Rational{2, 3}, Rational{1}}) == Direction::disapprove);
    CHECK(decide(5, 0, DecisionRule{Rational{1, 2}, Rational{10}}) == Direction::disapprove);
    CHECK(decide(10, 0, DecisionRule{Rational{1, 2}, Rational{10}}) == Direction::approve);
}

TEST_CASE("decision rule validation")
{
    CHECK(code_of([] { DecisionRule{0, std::nullopt}.validate(); }) == errc::validation_error);
    CHECK(code_of([] { DecisionRule{1, std::nullopt}.validate(); }) == errc::validation_error);
    CHECK(code_of([] { DecisionRule{Rational{1, 2}, Rational{-1}}.validate(); }) == errc::validation_error);
    DecisionRule{Rational{999, 1000}, Rational{0}}.validate();
}

TEST_CASE("property: decisions are exact at the boundary and invariant under scaling")
{
    std::mt19937_64 rng{5};
    const DecisionRule two_thirds{Rational{2, 3}, std::nullopt};
    for (int i = 0; i < 2000; ++i) {
        const Rational x{rng() % 1'000'000'000 + 1, rng() % 1000 + 1};
        const Rational eps{rng() % 1000 + 1, rng() % 1'000'000 + 1};
        CHECK(decide(2 * x, x, two_thirds) == Direction::approve);
        CHECK(decide(2 * x - eps, x, two_thirds) == Direction::disapprove);

        const Rational p{rng() % 999 + 1, 1000};
        const DecisionRule rule{p, std::nullopt};
        const Rational va{rng() % 100000, rng() % 100 + 1};
        const Rational vd{rng() % 100000, rng() % 100 + 1};
        const Rational c{rng() % 100000 + 1, rng() % 100000 + 1};
        CHECK(decide(c * va, c * vd, rule) == decide(va, vd, rule));
    }
}

TEST_CASE("submit_proposal")
{
    const Proposal p = Proposal::submit(params(10, 20), 5);
    CHECK(p.state() == ProposalState::pending);
    CHECK(p.anchor() == 9);
    CHECK(code_of([] { Proposal::submit(params(20, 10), 5); }) == errc::invalid_window);
    CHECK(code_of([] { Proposal::submit(params(5, 10), 5); }) == errc::invalid_window);
    CHECK(code_of([] { Proposal::submit(params(6, 10, Rational{1}), 5); }) == errc::validation_error);

    // a day of 12 s blocks between approval and execution, two-thirds approval
    const Proposal emergency = Proposal::submit(params(6, 6, Rational{2, 3}, 7200), 5);
    CHECK(emergency.params().timelock_blocks == 7200);
    CHECK(emergency.params().rule.p == Rational{2, 3});
}

TEST_CASE("cast_ballot")
{
    Proposal p = Proposal::submit(params(10, 20), 5);
    CHECK(code_of([&] { p.cast_ballot({"A", Direction::approve, 10}); }) == errc::wrong_state);
    CHECK(code_of([&] { p.begin_voting(9); }) == errc::wrong_state);
    p.begin_voting(10);
    p.cast_ballot({"A", Direction::approve, 10});
    CHECK(p.ballots().size() == 1);
    CHECK(code_of([&] { p.cast_ballot({"A", Direction::disapprove, 11}); }) == errc::duplicate_vote);
    p.cast_ballot({"B", Direction::disapprove, 20});
    CHECK(p.ballots().size() == 2);
    CHECK(code_of([&] { p.cast_ballot({"C", Direction::approve, 21}); }) == errc::outside_window);
    CHECK(code_of([&] { p.cast_ballot({"C", Direction::approve, 9}); }) == errc::outside_window);
}

TEST_CASE("tally")
{
    // A holds 100 and B holds 50 throughout heights 0..9
    const Ledger base = testing::ledger_from_history(2, 9, [](BlockHeight, std::size_t i) -> std::uint64_t {
        return i == 0 ? 100 : 50;
    });
    const MechanismSpec spec = WeightedSnapshot{WeightVector::parse("0.5 0.3 0.2 0.1 0.1")};
    const Address a = testing::account(0);
    const Address b = testing::account(1);

    Proposal p = Proposal::submit(params(10, 12), base.head_height());
    Ledger l = base;

    CHECK(code_of([&] { (void)tally(p, spec, l); }) == errc::wrong_state);
    p.begin_voting(10);
    SUBCASE("no ballots")
    {
        l.advance_to(12);
        const Tally t = tally(p, spec, l);
        CHECK(t.v_a == 0);
        CHECK(t.v_d == 0);
        CHECK(t.per_voter.empty());
    }
    SUBCASE("weighted sums per direction")
    {
        p.cast_ballot({a, Direction::approve, 10});
        p.cast_ballot({b, Direction::disapprove, 11});
        p.cast_ballot({"zero", Direction::approve, 12});
        l.advance_to(11);
        CHECK(code_of([&] { (void)tally(p, spec, l); }) == errc::wrong_state);
        l.open_block(); // the closing block may tally
        const Tally t = tally(p, spec, l);
        CHECK(t.v_a == 120);
        CHECK(t.v_d == 60);
        CHECK(t.per_voter.at("zero") == 0);
        CHECK(t.per_voter.size() == 3);
        CHECK(t.stats.power_evaluations == 3);
        CHECK(t.stats.snapshot_reads == 15);
        CHECK(decide(t.v_a, t.v_d, p.params().rule) == Direction::approve);
    }
    SUBCASE("power comes from the window before voting started")
    {
        p.cast_ballot({a, Direction::approve, 10});
        l.advance_to(10);
        l.open_block();
        l.transfer(a, b, Amount{100});
        l.seal_block();
        l.advance_to(12);
        CHECK(tally(p, spec, l).v_a == 120);
    }
}

TEST_CASE("lifecycle")
{
    Proposal p = Proposal::submit(params(2, 4, Rational{1, 2}, 10), 0);
    p.begin_voting(2);
    CHECK(code_of([&] { p.conclude(Direction::approve, 3); }) == errc::wrong_state);

    SUBCASE("timelock blocks early execution")
    {
        Tally t;
        t.v_a = 3;
        advance_lifecycle(p, t, 4);
        CHECK(p.state() == ProposalState::queued);
        CHECK(p.approval_height() == 4);
        CHECK(code_of([&] { p.execute(13); }) == errc::timelock_not_elapsed);
        p.execute(14);
        CHECK(p.state() == ProposalState::executed);
        CHECK(code_of([&] { p.cancel(); }) == errc::wrong_state);
    }
    SUBCASE("community cancel during the queue rejects the proposal")
    {
        Tally t;
        t.v_a = 3;
        advance_lifecycle(p, t, 4);
        p.cancel();
        CHECK(p.state() == ProposalState::rejected);
        CHECK(code_of([&] { p.execute(100); }) == errc::wrong_state);
    }
    SUBCASE("rejected proposals stay rejected")
    {
        Tally t;
        t.v_d = 1;
        advance_lifecycle(p, t, 4);
        CHECK(p.state() == ProposalState::rejected);
        CHECK(code_of([&] { p.queue(); }) == errc::wrong_state);
    }
    SUBCASE("zero timelock executes at the approval height")
    {
        Proposal q = Proposal::submit(params(2, 4, Rational{1, 2}, 0), 0);
        q.begin_voting(2);
        advance_lifecycle(q, Tally{}, 4);
        q.execute(4);
        CHECK(q.state() == ProposalState::executed);
    }
}

TEST_CASE("property: no operation sequence executes before the timelock elapses")
{
    std::mt19937_64 rng{21};
    for (int trial = 0; trial < 500; ++trial) {
        const std::uint64_t timelock = rng() % 20;
        Proposal p = Proposal::submit(params(2, 5, Rational{1, 2}, timelock), 0);
        BlockHeight h = 0;
        for (int step = 0; step < 30; ++step) {
            h += rng() % 4;
            try {
                switch (rng() % 6) {
                case 0: p.begin_voting(h); break;
                case 1: p.cast_ballot({testing::account(rng() % 3), Direction::approve, h}); break;
                case 2: {
                    Tally t;
                    t.v_a = rng() % 2;
                    advance_lifecycle(p, t, h);
                    break;
                }
                case 3: p.execute(h); break;
                case 4: p.cancel(); break;
                case 5: p.queue(); break;
                }
            } catch (const error&) {
            }
            if (p.state() == ProposalState::executed) {
                REQUIRE(p.approval_height());
                CHECK(h >= *p.approval_height() + timelock);
                break;
            }
        }
    }
}
